"""Command-line entry point.

Exit codes: 0 success, 1 failed statistical check (``ampsim``), 2 usage or
domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from .analysis import all_pairs_separable
from .broadcast import (
    KINDS,
    PipelineReport,
    broadcast_pipeline,
    conjugate_pipeline,
    predicted_local_photon,
    purify_pipeline,
    superbroadcast_threshold,
)
from .gaussian import apply_channel, displaced_thermal
from .montecarlo import DEFAULT_SEED, derive_seed, feedforward_amplifier_run, moments_compare
from .networks import amplifier_channel

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"[+-]?{_NUM}")
_IMAG = re.compile(rf"(?P<sign>[+-]?)(?P<mag>{_NUM})?i")
_FULL = re.compile(rf"(?P<re>[+-]?{_NUM})(?P<sign>[+-])(?P<mag>{_NUM})?i")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` with either part optional: ``1``, ``-3i``, ``i``, ``1-2.5i``."""
    # whitespace is allowed only around the sign; "1 2i" stays ambiguous
    t = re.sub(r"\s*([+-])\s*", r"\1", text.strip())
    if _REAL.fullmatch(t):
        return complex(float(t), 0.0)
    m = _IMAG.fullmatch(t)
    if m:
        mag = float(m["mag"]) if m["mag"] else 1.0
        return complex(0.0, -mag if m["sign"] == "-" else mag)
    m = _FULL.fullmatch(t)
    if m:
        mag = float(m["mag"]) if m["mag"] else 1.0
        return complex(float(m["re"]), -mag if m["sign"] == "-" else mag)
    raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}; use a+bi")


def parse_range(text: str) -> list[int]:
    """``4`` or inclusive ``2:6``."""
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":"))
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or lo:hi, got {text!r}") from None


def parse_modes(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'inf', got {text!r}") from None


# -- serialisation -----------------------------------------------------------


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite number {x}")
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits, so parse + dump is byte-stable."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def report_to_dict(r: PipelineReport) -> dict:
    conc = r.concentrated
    return {
        "kind": r.kind,
        "N": r.N,
        "M": r.M,
        "nbar_in": r.nbar_in,
        "alpha": _pair(r.alpha),
        "concentrated": {
            "mean": [float(v) for v in conc.mean],
            "variance": float(np.trace(conc.cov) / 2),
        },
        "nbar_prime": r.nbar_prime,
        "nbar_out_predicted": predicted_local_photon(r.kind, r.N, r.M, r.nbar_in),
        "nbar_out_per_mode": r.nbar_out_per_mode,
        "mean_per_mode": _pair(r.mean_per_mode),
        "noise_sum_per_mode": [float(v) for v in r.noise_sums],
        "bound": r.bound,
        "saturated": r.saturated,
        "separable_all_pairs": all_pairs_separable(r.output),
        "mc_z_max": r.mc_z_max,
        "output": {
            "mean": [float(v) for v in r.output.mean],
            "cov": [[float(v) for v in row] for row in r.output.cov],
        },
    }


def report_table(r: PipelineReport) -> str:
    d = report_to_dict(r)
    rows = [
        ("kind", d["kind"]),
        ("N -> M", f"{r.N} -> {r.M}"),
        ("input thermal photons", f"{r.nbar_in:.12g}"),
        ("input amplitude", f"{r.alpha.real:.12g}{r.alpha.imag:+.12g}i"),
        ("concentrated variance", f"{d['concentrated']['variance']:.12g}"),
        ("nbar' (before distribution)", f"{r.nbar_prime:.12g}"),
        ("output photons per mode", f"{r.nbar_out_per_mode:.12g}"),
        ("predicted", f"{d['nbar_out_predicted']:.12g}"),
        ("output amplitude per mode", f"{r.mean_per_mode.real:.12g}{r.mean_per_mode.imag:+.12g}i"),
        ("noise bound", f"{r.bound:.12g}"),
        ("saturated", str(r.saturated)),
        ("all pairs separable", str(d["separable_all_pairs"])),
    ]
    if r.mc_z_max is not None:
        rows.append(("Monte-Carlo max |z|", f"{r.mc_z_max:.4f}"))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


@dataclass
class SweepRecord:
    kind: str
    N: int
    M: int
    nbar_in: float
    nbar_out_predicted: float
    nbar_out_simulated: float
    bound_gamma_out: float
    saturated: bool
    separable_all_pairs: bool
    mc_z_max: Optional[float] = None


SWEEP_FIELDS = [f.name for f in fields(SweepRecord)]


def sweep_point(kind, N, M, nbar, samples=None, seed=DEFAULT_SEED) -> SweepRecord:
    mc = None
    if kind == "broadcast":
        r = broadcast_pipeline(N, M, nbar)
        if samples:
            emp = feedforward_amplifier_run(M / N, r.concentrated, samples, seed)
            expected = apply_channel(r.concentrated, amplifier_channel(M / N))
            mc = moments_compare(emp, expected).max_abs_z
    elif kind == "purify":
        r = purify_pipeline(N, M, nbar)
    else:
        r = conjugate_pipeline(N, M, nbar, samples=samples, seed=seed)
        mc = r.mc_z_max
        if samples:
            # the simulated photon number still comes from the analytic route
            r = conjugate_pipeline(N, M, nbar)
    return SweepRecord(
        kind=kind,
        N=N,
        M=M,
        nbar_in=float(nbar),
        nbar_out_predicted=predicted_local_photon(kind, N, M, nbar),
        nbar_out_simulated=r.nbar_out_per_mode,
        bound_gamma_out=r.bound,
        saturated=r.saturated,
        separable_all_pairs=all_pairs_separable(r.output),
        mc_z_max=mc,
    )


def sweep_grid(kinds, Ns, Ms, nbars) -> list[tuple]:
    """Grid points ordered by kind, then N, then M, then nbar."""
    grid = []
    for kind in kinds:
        for N in Ns:
            for M in Ms:
                if N < 1 or M < 1:
                    continue
                if kind == "broadcast" and M <= N:
                    continue
                if kind == "purify" and M > N:
                    continue
                for nbar in nbars:
                    grid.append((kind, N, M, nbar))
    return grid


def run_sweep(grid, samples=None, seed=DEFAULT_SEED, workers=1) -> list[SweepRecord]:
    def one(item):
        i, (kind, N, M, nbar) = item
        return sweep_point(kind, N, M, nbar, samples, derive_seed(seed, i))

    items = list(enumerate(grid))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, items))
    return [one(it) for it in items]


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=",", lineterminator="\n")
    writer.writerow(SWEEP_FIELDS)
    for rec in records:
        row = []
        for name in SWEEP_FIELDS:
            v = getattr(rec, name)
            if v is None:
                row.append("")
            elif isinstance(v, bool):
                row.append("true" if v else "false")
            elif isinstance(v, float):
                row.append(format_float(v))
            else:
                row.append(str(v))
        writer.writerow(row)
    return buf.getvalue()


def records_to_json(records) -> str:
    return dumps([asdict(r) for r in records]) + "\n"


def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- commands ----------------------------------------------------------------


def _emit_report(report: PipelineReport, fmt: str):
    if fmt == "table":
        print(report_table(report))
    else:
        print(dumps(report_to_dict(report)))


def cmd_broadcast(args) -> int:
    _emit_report(broadcast_pipeline(args.N, args.M, args.nbar, args.alpha), args.format)
    return EXIT_OK


def cmd_purify(args) -> int:
    _emit_report(purify_pipeline(args.N, args.M, args.nbar, args.alpha), args.format)
    return EXIT_OK


def cmd_conjugate(args) -> int:
    report = conjugate_pipeline(
        args.N, args.M, args.nbar, args.alpha, samples=args.samples, seed=args.seed
    )
    _emit_report(report, args.format)
    return EXIT_OK


def cmd_sweep(args) -> int:
    kinds = KINDS if args.kind == "all" else (args.kind,)
    grid = sweep_grid(kinds, args.N, args.M, args.nbar)
    if not grid:
        print("error: the requested grid is empty", file=sys.stderr)
        return EXIT_USAGE
    records = run_sweep(grid, args.samples, args.seed, args.workers)
    text = records_to_csv(records) if args.format == "csv" else records_to_json(records)
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        write_atomic(args.out, text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_ampsim(args) -> int:
    if args.samples < 1000:
        print("error: --samples must be at least 1000", file=sys.stderr)
        return EXIT_USAGE
    state = displaced_thermal(args.nbar, args.alpha)
    emp = feedforward_amplifier_run(args.G, state, args.samples, args.seed)
    expected = apply_channel(state, amplifier_channel(args.G))
    cmp = moments_compare(emp, expected, args.sigma)
    iu = np.triu_indices(2)
    out = {
        "G": float(args.G),
        "samples": args.samples,
        "seed": args.seed,
        "mean_expected": [float(v) for v in expected.mean],
        "mean_hat": [float(v) for v in emp.mean_hat],
        "cov_expected": [[float(v) for v in row] for row in expected.cov],
        "cov_hat": [[float(v) for v in row] for row in emp.cov_hat],
        "z_mean": [float(v) for v in cmp.z_mean],
        "z_cov_upper": [float(v) for v in cmp.z_cov[iu]],
        "max_abs_z": cmp.max_abs_z,
        "sigma_level": float(args.sigma),
        "passed": cmp.passed,
    }
    print(dumps(out))
    return EXIT_OK if cmp.passed else EXIT_FAIL


def cmd_threshold(args) -> int:
    value = superbroadcast_threshold(args.N, args.M)
    print(format_float(value))
    if args.check:
        if args.nbar is None:
            print("error: --check needs --nbar", file=sys.stderr)
            return EXIT_USAGE
        verdict = "superbroadcasting" if args.nbar >= value else "no superbroadcasting"
        print(f"nbar={format_float(args.nbar)}: {verdict}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg(text):
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cvbroadcast", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, func, help_text in (
        ("broadcast", cmd_broadcast, "optimal N -> M broadcasting (M > N)"),
        ("purify", cmd_purify, "optimal N -> M purification (M <= N)"),
        ("conjugate", cmd_conjugate, "optimal phase-conjugate broadcasting"),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("-N", type=int, required=True)
        sp.add_argument("-M", type=int, required=True)
        sp.add_argument("--nbar", type=_nonneg, default=0.0)
        sp.add_argument("--alpha", type=parse_complex, default=0j)
        sp.add_argument("--format", choices=("json", "table"), default="json")
        if name == "conjugate":
            sp.add_argument("--samples", type=int, default=None,
                            help="sample the measure-and-prepare stage")
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.set_defaults(func=func)

    sp = sub.add_parser("sweep", help="grid of pipelines written as CSV or JSON")
    sp.add_argument("--kind", choices=(*KINDS, "all"), default="broadcast")
    sp.add_argument("-N", type=parse_range, required=True, help="integer or lo:hi")
    sp.add_argument("-M", type=parse_range, required=True, help="integer or lo:hi")
    sp.add_argument("--nbar", type=_nonneg, nargs="+", required=True)
    sp.add_argument("--samples", type=int, default=None,
                    help="also sample the measurement-based element per point")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default=None, metavar="PATH")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("ampsim", help="feed-forward amplifier vs. ideal amplifier")
    sp.add_argument("-G", type=float, required=True)
    sp.add_argument("--nbar", type=_nonneg, default=0.0)
    sp.add_argument("--alpha", type=parse_complex, default=0j)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--sigma", type=float, default=4.0)
    sp.set_defaults(func=cmd_ampsim)

    sp = sub.add_parser("threshold", help="superbroadcasting threshold on input photons")
    sp.add_argument("-N", type=int, required=True)
    sp.add_argument("-M", type=parse_modes, required=True, help="integer or 'inf'")
    sp.add_argument("--check", action="store_true")
    sp.add_argument("--nbar", type=_nonneg, default=None)
    sp.set_defaults(func=cmd_threshold)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

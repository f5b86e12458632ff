"""Command-line entry point: ``gkpmagic {negativity-sweep,ideal,inject,prepare}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
Settings resolve as flags > ``--config`` file (flat ``key=value`` lines, keys
named like the long flags) > defaults.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import hybrid, injection, lattice, negativity
from .standard_form import position_wavefunction
from .theta import DEFAULT_TOL

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

DEFAULTS = {
    "grid": "4:18:2",
    "cell": negativity.DEFAULT_CELL,
    "tail_tol": negativity.DEFAULT_TAIL_TOL,
    "theta_tol": DEFAULT_TOL,
    "seed": 0,
    "rounds": 4,
    "sigma2": 0.01,
    "out": None,
    "mode": "pi8",
    "outcomes": None,
    "shots": 0,
}


class UsageError(Exception):
    pass


def parse_grid(text: str) -> list[float]:
    """``"4,6,8"``, ``"4:18:2"`` (inclusive) or ``""`` (empty grid)."""
    text = text.strip()
    if not text:
        return []
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if step <= 0:
                raise UsageError("grid step must be positive")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(max(n, 0))]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None


def read_config(path: str) -> dict[str, str]:
    cfg = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    file_cfg = read_config(args.config) if getattr(args, "config", None) else {}
    for key, default in DEFAULTS.items():
        if getattr(args, key, None) is not None:
            continue
        raw = file_cfg.get(key)
        if raw is None:
            value = default
        elif default is None or isinstance(default, str):
            value = raw
        else:
            try:
                value = type(default)(raw)
            except ValueError:
                raise UsageError(f"config value {key}={raw!r} is not a {type(default).__name__}") from None
        setattr(args, key, value)
    for key in ("cell", "tail_tol", "theta_tol"):
        if not getattr(args, key) > 0:
            raise UsageError(f"{key} must be positive")
    return args


def _workers() -> int:
    raw = os.environ.get("GKP_NUM_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"GKP_NUM_THREADS={raw!r} is not an integer") from None


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    Path(out).write_text(text)


def cmd_negativity_sweep(args) -> int:
    grid = parse_grid(args.grid)
    if grid != sorted(grid):
        raise UsageError("grid must be sorted ascending")
    try:
        rows = negativity.negativity_sweep(grid, args.cell, tail_tol=args.tail_tol,
                                           theta_tol=args.theta_tol, workers=_workers())
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    header = ["db", "sigma2", "neg_zero", "neg_h"]
    if args.log_negativity:
        header += ["log_neg_zero", "log_neg_h"]
    lines = [",".join(header)]
    for r in rows:
        vals = [r.db, r.sigma2, r.neg_zero, r.neg_H]
        if args.log_negativity:
            vals += [math.log(r.neg_zero), math.log(r.neg_H)]
        lines.append(",".join(f"{v:.10g}" for v in vals))
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _state_lattice(names: list[str]) -> lattice.DeltaLattice:
    out = None
    for name in names:
        try:
            l = lattice.lattice_for(name.lower())
        except ValueError:
            raise UsageError(f"unknown state {name!r}; choose from "
                             + ", ".join(s.value for s in lattice.IdealLogicalState)) from None
        out = l if out is None else lattice.tensor(out, l)
    return out


def cmd_ideal(args) -> int:
    tokens = args.states or ["zero", "h"]
    lines = []
    if "/" in tokens:
        i = tokens.index("/")
        num, den = tokens[:i], tokens[i + 1:]
        if not num or not den or "/" in den:
            raise UsageError("ratio form is 'STATE... / STATE...'")
        a = lattice.unit_cell_negativity(_state_lattice(num))
        b = lattice.unit_cell_negativity(_state_lattice(den))
        lines.append(f"{' '.join(num)} / {' '.join(den)} ratio={a / b:.12f}")
    else:
        for name in tokens:
            l = _state_lattice([name])
            lines.append(f"{name} {lattice.unit_cell_negativity(l):.12f}")
            if args.dump:
                lines.append(l.dump().rstrip("\n"))
    zero = lattice.unit_cell_negativity(_state_lattice(["zero"]))
    h = lattice.unit_cell_negativity(_state_lattice(["h"]))
    hh = lattice.unit_cell_negativity(_state_lattice(["h", "h"]))
    zzz = lattice.unit_cell_negativity(_state_lattice(["zero", "zero", "zero"]))
    lines.append(f"ratio h/zero={h / zero:.12f}")
    lines.append(f"ratio h^2/zero^3={hh / zzz:.12f}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _haar_qubits(rng, n: int) -> np.ndarray:
    v = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def cmd_inject(args) -> int:
    rng = np.random.default_rng(args.seed)
    inputs = [np.array([1, 0], complex), np.array([0, 1], complex),
              np.array([1, 1], complex) / math.sqrt(2), *_haar_qubits(rng, 100)]
    t_rows = [(k, *row) for k, psi in enumerate(inputs) for row in injection.t_injection_branches(psi)]
    pair_rows = injection.pair_branches()
    t_min = min(r[3] for r in t_rows)
    pair_min = min(r[2] for r in pair_rows)
    lines = [f"t_injection min_fidelity={round(t_min, 12)}; "
             f"pi8_pair_to_zero min_fidelity={round(pair_min, 12)}",
             f"pi8_pair_to_zero resource_count={injection.resource_count()}"]
    ok = min(t_min, pair_min) >= 1 - 1e-12
    if args.branches or not ok:
        for m, p, f in pair_rows:
            lines.append(f"branch pi8_pair_to_zero outcome={m} probability={p:.12f} fidelity={f:.12f}")
    if not ok:
        for k, m, p, f in t_rows:
            if f < 1 - 1e-12:
                lines.append(f"branch t_injection input={k} outcome={m} probability={p:.12f} fidelity={f:.12f}")
    if args.shots:
        counts = [0, 0]
        for _ in range(args.shots):
            _, (rec,) = injection.pi8_pair_to_zero(rng=rng)
            counts[rec.outcome] += 1
        lines.append(f"sampled shots={args.shots} outcome0={counts[0]} outcome1={counts[1]}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def _parse_bits(text, n=None):
    if text is None:
        return None
    bits = [int(ch) for ch in text.strip() if ch in "01"]
    if len(bits) != len(text.strip()) or (n is not None and len(bits) != n):
        raise UsageError(f"bad outcome string {text!r}")
    return bits


def cmd_prepare(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.mode == "pi8":
        bits = _parse_bits(args.outcomes, 1)
        try:
            zero = position_wavefunction(args.sigma2, 0)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        res = hybrid.prepare_pi8_from_zero(zero, None if bits is None else bits[0], rng)
        report = [f"mode=pi8 sigma2={args.sigma2:.10g} outcome={res.outcome}",
                  f"probability={res.probability:.10g}",
                  f"overlap={res.fidelity:.10g}"]
        comb = res.comb
    elif args.mode == "codeword":
        if args.rounds < 1:
            raise UsageError("rounds must be >= 1")
        bits = _parse_bits(args.outcomes, args.rounds)
        res = hybrid.run_codeword_preparation(args.rounds, outcomes=bits, rng=rng)
        report = [f"mode=codeword rounds={args.rounds} outcomes={''.join(map(str, res.outcomes))}",
                  f"probability={res.probability:.10g}",
                  f"sigma2_fit={res.sigma2_fit:.10g} center={res.center:.10g} codeword={res.codeword}",
                  f"fit_overlap={res.fit_overlap:.10g}",
                  f"sigma2_best={res.sigma2_best:.10g} overlap={res.quality:.10g}"]
        comb = res.comb
    else:
        raise UsageError(f"unknown mode {args.mode!r}")
    if args.out not in (None, "-"):
        Path(args.out).write_text(comb.dump())
        report.append(f"comb written to {args.out}")
    else:
        report.append(comb.dump().rstrip("\n"))
    sys.stdout.write("\n".join(report) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value settings file")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="gkpmagic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("negativity-sweep", parents=[common],
                       help="Wigner negativity of |0> and |H> across squeezing levels (CSV)")
    p.add_argument("--grid", help="dB values: '4,6,8' or 'start:stop:step'")
    p.add_argument("--cell", type=float, help="quadrature subcell edge")
    p.add_argument("--tail-tol", type=float, help="envelope mass allowed outside the box")
    p.add_argument("--theta-tol", type=float, help="theta truncation tolerance")
    p.add_argument("--log-negativity", action="store_true", help="add ln N columns")
    p.set_defaults(func=cmd_negativity_sweep)

    p = sub.add_parser("ideal", parents=[common], help="unit-cell negativity of ideal lattices")
    p.add_argument("states", nargs="*", help="state names, or 'A B / C D' for a ratio of tensor products")
    p.add_argument("--dump", action="store_true", help="print 'q_index p_index weight' lines")
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("inject", parents=[common], help="verify both injection circuits over all branches")
    p.add_argument("--branches", action="store_true", help="print every branch of the pair circuit")
    p.add_argument("--shots", type=int, help="sampled runs of the pair circuit")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("prepare", parents=[common], help="qubit-oscillator preparation protocols")
    p.add_argument("--mode", choices=["pi8", "codeword"])
    p.add_argument("--sigma2", type=float, help="squeezing variance of the input |0> (pi8 mode)")
    p.add_argument("--rounds", type=int, help="protocol rounds (codeword mode)")
    p.add_argument("--outcomes", help="forced outcome bits, e.g. 0000; sampled when omitted")
    p.set_defaults(func=cmd_prepare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        resolve(args)
        return args.func(args)
    except UsageError as exc:
        print(f"gkpmagic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"gkpmagic: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

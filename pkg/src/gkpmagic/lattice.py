"""Ideal GKP Wigner functions as periodic weighted delta lattices.

Coordinates are integers in units of ``sqrt(pi)/2``; one period is 4 units
(``2 sqrt(pi)``) along every axis, so reduction modulo the period and merging
of coinciding points are exact. Weights are floats scaled so the largest
magnitude is 1 (the unit-cell negativity is scale free).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

UNIT = math.sqrt(math.pi) / 2
PERIOD = 4
MAX_EPS = math.sqrt(math.pi) / 2


class LatticeError(ValueError):
    pass


class IdealLogicalState(enum.Enum):
    ZERO = "zero"
    ONE = "one"
    PLUS = "plus"
    MINUS = "minus"
    H = "h"
    PI8 = "pi8"

    @property
    def coefficients(self) -> tuple[complex, complex]:
        c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
        r = 1 / math.sqrt(2)
        return {
            "zero": (1, 0),
            "one": (0, 1),
            "plus": (r, r),
            "minus": (r, -r),
            "h": (c, s),
            "pi8": (r * np.exp(-1j * math.pi / 8), r * np.exp(1j * math.pi / 8)),
        }[self.value]


@dataclass(frozen=True)
class DeltaLattice:
    """Delta functions on one period cell of an ``num_modes``-mode lattice.

    ``entries`` maps coordinate tuples ``(q1, p1, q2, p2, ...)`` (integers in
    ``[0, 4)``) to weights.
    """

    num_modes: int
    entries: tuple[tuple[tuple[int, ...], float], ...]

    @property
    def period(self) -> float:
        return PERIOD * UNIT

    @classmethod
    def build(cls, num_modes: int, points) -> "DeltaLattice":
        merged: dict[tuple[int, ...], float] = {}
        for coords, w in points:
            coords = tuple(int(c) % PERIOD for c in coords)
            if len(coords) != 2 * num_modes:
                raise LatticeError("coordinate length does not match num_modes")
            merged[coords] = merged.get(coords, 0.0) + float(w)
        entries = tuple(sorted((k, v) for k, v in merged.items() if v != 0.0))
        if not any(v > 0 for _, v in entries):
            raise LatticeError("lattice has no positive weight")
        return cls(num_modes, entries)

    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.entries])

    def dump(self) -> str:
        """One line per entry: ``q_index p_index`` per mode, then the weight."""
        return "".join(" ".join(map(str, c)) + f" {w:.17g}\n" for c, w in self.entries)


def lattice_for(state) -> DeltaLattice:
    """One-mode lattice of an ideal logical state.

    Built from the ideal-codeword limit of ``W_{|j><j'|}``: a delta at
    ``q = sqrt(pi)(m + (j + j')/2)``, ``p = t sqrt(pi)/2`` with weight
    ``(-1)^(m t) i^(t (j' - j))``, combined with ``c_j conj(c_j')``.
    """
    state = IdealLogicalState(state)
    c = state.coefficients
    acc: dict[tuple[int, int], complex] = {}
    for j, jp in itertools.product((0, 1), repeat=2):
        coef = c[j] * np.conj(c[jp])
        if coef == 0:
            continue
        for m in range(2):
            for t in range(PERIOD):
                q = (2 * m + j + jp) % PERIOD
                val = coef * (-1) ** (m * t) * 1j ** (t * (jp - j))
                acc[(q, t)] = acc.get((q, t), 0) + val
    if max(abs(v.imag) for v in acc.values()) > 1e-12:
        raise AssertionError("ideal Wigner weights are not real")
    top = max(abs(v.real) for v in acc.values())
    pts = []
    for coords, v in acc.items():
        w = v.real / top
        # snap to the exact weight set {0, +-1, +-1/sqrt 2}
        for exact in (0.0, 1.0, -1.0, 1 / math.sqrt(2), -1 / math.sqrt(2)):
            if abs(w - exact) < 1e-12:
                w = exact
                break
        pts.append((coords, w))
    return DeltaLattice.build(1, pts)


def unit_cell_negativity(lattice: DeltaLattice, eps: float | None = None) -> float:
    """Ratio ``sum |w| / sum w`` over the cell ``[eps, 2 sqrt(pi) + eps]^n``."""
    if eps is None:
        eps = MAX_EPS / 2
    eps = np.broadcast_to(np.asarray(eps, dtype=float), (2 * lattice.num_modes,))
    if np.any(eps <= 0) or np.any(eps >= MAX_EPS):
        raise LatticeError(f"eps must lie in (0, sqrt(pi)/2), got {eps}")
    lo, hi = eps, eps + PERIOD * UNIT
    num = den = 0.0
    for coords, w in lattice.entries:
        x = np.array(coords) * UNIT
        x = np.where(x < lo, x + PERIOD * UNIT, x)
        if np.all((x >= lo) & (x <= hi)):
            num += abs(w)
            den += w
    if den <= 0:
        raise LatticeError("lattice weights sum to a non-positive value over the cell")
    return num / den


def tensor(l1: DeltaLattice, l2: DeltaLattice) -> DeltaLattice:
    pts = [(c1 + c2, w1 * w2) for c1, w1 in l1.entries for c2, w2 in l2.entries]
    return DeltaLattice.build(l1.num_modes + l2.num_modes, pts)


def identity_lattice(num_modes: int = 1) -> DeltaLattice:
    return DeltaLattice.build(num_modes, [((0,) * 2 * num_modes, 1.0)])


def gate_matrix(gate: str, num_modes: int, *modes: int) -> np.ndarray:
    """Integer symplectic matrix acting on ``(q1, p1, q2, p2, ...)``.

    H: ``(q, p) -> (p, -q)``; S: ``(q, p) -> (q, p - q)``; SDG is the inverse of S;
    CNOT(c, t): ``p_c -> p_c - p_t``, ``q_t -> q_c + q_t``.

    Used as point maps on the Wigner function, the S map shears by ``-q`` and
    acts as the logical S-dagger on ideal codeword lattices, so that
    ``lattice_for(H) == SDG . H . lattice_for(PI8)``.
    """
    M = np.eye(2 * num_modes, dtype=np.int64)
    gate = gate.upper()
    for k in modes:
        if not 0 <= k < num_modes:
            raise LatticeError(f"mode index {k} out of range for {num_modes} modes")
    if gate in ("H", "S", "SDG"):
        (k,) = modes if modes else (0,)
        q, p = 2 * k, 2 * k + 1
        if gate == "H":
            M[q, q], M[q, p], M[p, q], M[p, p] = 0, 1, -1, 0
        else:
            M[p, q] = -1 if gate == "S" else 1
    elif gate == "CNOT":
        if len(modes) != 2 or modes[0] == modes[1]:
            raise LatticeError("CNOT needs two distinct mode indices")
        c, t = modes
        M[2 * c + 1, 2 * t + 1] = -1
        M[2 * t, 2 * c] = 1
    else:
        raise LatticeError(f"unknown gate {gate!r}")
    return M


def apply_symplectic(lattice: DeltaLattice, gate: str, *modes: int) -> DeltaLattice:
    """Move every delta by the gate's quadrature map, then reduce and merge."""
    M = gate_matrix(gate, lattice.num_modes, *modes)
    pts = [(tuple(M @ np.array(c)), w) for c, w in lattice.entries]
    return DeltaLattice.build(lattice.num_modes, pts)


def same_lattice(l1: DeltaLattice, l2: DeltaLattice, tol: float = 1e-12) -> bool:
    """Equality up to a positive overall weight scale."""
    if l1.num_modes != l2.num_modes:
        return False
    d1, d2 = dict(l1.entries), dict(l2.entries)
    if d1.keys() != d2.keys():
        return False
    s = sum(d2.values()) / sum(d1.values())
    return s > 0 and all(abs(d1[k] * s - d2[k]) <= tol for k in d1)

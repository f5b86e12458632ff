"""Qubit x oscillator protocols with the oscillator held as a Gaussian comb.

A ``HybridState`` stores one comb per qubit basis state. Controlled
displacements shift the ``|1>`` branch, single-qubit gates recombine the two
branches, and a Z measurement keeps one of them. Every operation is exact
inside the comb family, so the only approximation is packet truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .combs import ModeComb, fidelity
from .standard_form import position_wavefunction

SQRT_PI = math.sqrt(math.pi)
# controlled-displacement parameter giving one logical shift sqrt(pi)
LOGICAL_SHIFT_R = math.sqrt(math.pi / 2)
# shift by one stabilizer length 2 sqrt(pi)
STABILIZER_SHIFT_R = math.sqrt(2 * math.pi)


class ZeroProbabilityError(ValueError):
    pass


@dataclass(frozen=True)
class HybridState:
    branch0: ModeComb
    branch1: ModeComb

    def __post_init__(self):
        if self.branch0.width != self.branch1.width:
            raise ValueError("branches must share packet width")

    @classmethod
    def plus(cls, comb: ModeComb) -> "HybridState":
        """Qubit in ``|+>`` tensored with ``comb``."""
        r = 1 / math.sqrt(2)
        return cls(comb.scaled(r), comb.scaled(r))

    def norm(self) -> float:
        return math.sqrt(self.branch0.norm() ** 2 + self.branch1.norm() ** 2)


def controlled_displacement(h: HybridState, r: float) -> HybridState:
    """``D(r)`` on the oscillator when the qubit is ``|1>``; shifts by ``sqrt(2) r``."""
    return HybridState(h.branch0, h.branch1.shifted(math.sqrt(2) * r))


def gate_matrix(gate: str, phi: float | None = None) -> np.ndarray:
    gate = gate.upper()
    if gate in ("H", "HADAMARD"):
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    if gate == "T":
        return np.diag([1, np.exp(1j * math.pi / 4)])
    if gate in ("RZ", "R_Z"):
        if phi is None:
            raise ValueError("R_Z needs an angle")
        return np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])
    raise ValueError(f"unknown qubit gate {gate!r}")


def qubit_gate(h: HybridState, gate: str, phi: float | None = None) -> HybridState:
    """Apply ``H``, ``T`` or ``RZ`` (angle ``phi``) to the qubit."""
    U = gate_matrix(gate, phi)
    b0, b1 = h.branch0, h.branch1
    n0 = b0.scaled(U[0, 0]) + b1.scaled(U[0, 1])
    n1 = b0.scaled(U[1, 0]) + b1.scaled(U[1, 1])
    return HybridState(n0.pruned(), n1.pruned())


def measure_qubit_z(h: HybridState, outcome: int | None = None, rng=None):
    """Z-measure the qubit; returns ``(outcome, probability, post comb)``.

    With ``outcome=None`` the result is sampled from ``rng``.
    """
    p0 = h.branch0.norm() ** 2
    p1 = h.branch1.norm() ** 2
    total = p0 + p1
    p0, p1 = p0 / total, p1 / total
    if outcome is None:
        if rng is None:
            raise ValueError("sampled mode needs an rng")
        outcome = int(rng.random() < p1)
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    prob = p0 if outcome == 0 else p1
    if prob < 1e-15:
        raise ZeroProbabilityError(f"outcome {outcome} has zero probability")
    branch = h.branch0 if outcome == 0 else h.branch1
    return outcome, prob, branch.normalized()


Schedule = Callable[[int, Sequence[int]], "tuple[float, float]"]


def default_schedule(k: int, prior: Sequence[int]) -> tuple[float, float]:
    """Round ``k`` (1-based) displaces by ``2 sqrt(pi)``; the phase follows round 1.

    After round 1 every later round uses ``phi = pi * m1``, so an outcome 0
    reproduces the relative sign fixed by the first outcome and the comb stays
    a binomially weighted lattice with a uniform phase step.
    """
    phi = math.pi * prior[0] if prior else 0.0
    return STABILIZER_SHIFT_R, phi


def fixed_schedule(r: float, phi: float = 0.0) -> Schedule:
    return lambda k, prior: (r, phi)


def default_initial_width(rounds: int) -> float:
    """Packet width matching the binomial envelope after ``rounds`` rounds."""
    return math.sqrt(1.0 / (2 * math.pi * rounds))


@dataclass
class PreparationResult:
    comb: ModeComb
    outcomes: list[int]
    probability: float
    sigma2_fit: float = float("nan")
    center: float = float("nan")
    codeword: int = 0
    fit_overlap: float = float("nan")
    sigma2_best: float = float("nan")
    quality: float = float("nan")
    probabilities: list[float] = field(default_factory=list)


def run_codeword_preparation(rounds: int, schedule: Schedule | None = None,
                             initial_width: float | None = None,
                             outcomes: Sequence[int] | None = None, rng=None,
                             score: bool = True) -> PreparationResult:
    """Recursive controlled-displacement protocol for an approximate codeword.

    Each round: fresh qubit in ``|+>``, controlled displacement ``r_k``,
    ``R_Z(phi_k)``, Hadamard, Z measurement. ``(r_k, phi_k)`` come from
    ``schedule(k, prior_outcomes)``. ``outcomes`` forces every result; otherwise
    they are sampled from ``rng``.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    schedule = default_schedule if schedule is None else schedule
    if not callable(schedule):
        raise ValueError("schedule must be callable")
    if outcomes is not None and len(outcomes) != rounds:
        raise ValueError("need one forced outcome per round")
    w = default_initial_width(rounds) if initial_width is None else initial_width
    comb = ModeComb([0.0], [1.0], w)
    seen: list[int] = []
    probs: list[float] = []
    for k in range(1, rounds + 1):
        step = schedule(k, tuple(seen))
        try:
            r, phi = (float(v) for v in step)
        except (TypeError, ValueError):
            raise ValueError(f"schedule returned {step!r}, expected (r, phi)") from None
        if not (math.isfinite(r) and math.isfinite(phi)):
            raise ValueError(f"schedule returned non-finite step {step!r}")
        h = HybridState.plus(comb)
        h = controlled_displacement(h, r)
        h = qubit_gate(h, "RZ", phi)
        h = qubit_gate(h, "H")
        forced = None if outcomes is None else outcomes[k - 1]
        m, p, comb = measure_qubit_z(h, forced, rng)
        seen.append(m)
        probs.append(p)
    result = PreparationResult(comb, seen, float(np.prod(probs)), probabilities=probs)
    if score:
        score_against_standard_form(result)
    return result


def fit_standard_form(comb: ModeComb) -> tuple[float, float, int]:
    """Least-squares fit of packet amplitudes to the codeword envelope.

    Returns ``(sigma2, center, j)``. The center is the ``|a|^2``-weighted mean and
    ``j`` the codeword whose packets sit at even (0) or odd (1) multiples of
    ``sqrt(pi)`` from it. The envelope ``log|a| = const - pi sigma2 n^2`` with
    ``n = (x - center)/sqrt(pi)`` is fitted linearly in ``n^2``; ``sigma2`` is nan
    when all packets are equidistant from the center.
    """
    a2 = np.abs(comb.amplitudes) ** 2
    keep = a2 > 1e-20 * a2.max()
    c, a2 = comb.centers[keep], a2[keep]
    center = float(np.sum(a2 * c) / np.sum(a2))
    j = int(np.rint((c[np.argmax(a2)] - center) / SQRT_PI)) % 2
    n2 = ((c - center) / SQRT_PI) ** 2
    if np.ptp(n2) < 1e-9:
        return float("nan"), center, j
    slope = np.polyfit(n2, 0.5 * np.log(a2), 1)[0]
    sigma2 = float(np.clip(-slope / math.pi, 1e-3, 0.45))
    return sigma2, center, j


def standard_form_fidelity(comb: ModeComb, sigma2: float, center: float, j: int = 0) -> float:
    """Fidelity of ``comb`` with ``|j_sigma2>`` translated by ``center``."""
    ref = position_wavefunction(sigma2, j).shifted(center)
    return fidelity(ref, comb)


def score_against_standard_form(result: PreparationResult) -> PreparationResult:
    """Fill in the fitted envelope and the overlap scores of ``result``.

    ``fit_overlap`` is the fidelity with the translated codeword at the
    least-squares ``sigma2``; ``quality`` additionally maximizes over ``sigma2``.
    """
    comb = result.comb
    s2, center, j = fit_standard_form(comb)
    result.sigma2_fit, result.center, result.codeword = s2, center, j
    result.fit_overlap = (standard_form_fidelity(comb, s2, center, j)
                          if math.isfinite(s2) else 0.0)
    opt = minimize_scalar(lambda u: -standard_form_fidelity(comb, math.exp(u), center, j),
                          bounds=(math.log(1e-3), math.log(0.45)), method="bounded",
                          options={"xatol": 1e-8})
    result.sigma2_best = float(math.exp(opt.x))
    result.quality = max(float(-opt.fun), result.fit_overlap)
    return result


def enumerate_codeword_branches(rounds: int, schedule: Schedule | None = None,
                                initial_width: float | None = None) -> list[PreparationResult]:
    """Every outcome string of ``run_codeword_preparation``, in binary order."""
    out = []
    for idx in range(2 ** rounds):
        bits = [(idx >> (rounds - 1 - i)) & 1 for i in range(rounds)]
        out.append(run_codeword_preparation(rounds, schedule, initial_width, bits))
    return out


def logical_z_frame(comb: ModeComb) -> ModeComb:
    """Flip the sign of packets sitting on odd multiples of ``sqrt(pi)``."""
    parity = np.rint(comb.centers / SQRT_PI).astype(np.int64) % 2
    return ModeComb(comb.centers, np.where(parity == 1, -comb.amplitudes, comb.amplitudes),
                    comb.width)


def pi8_target(zero: ModeComb, angle: float = math.pi / 4) -> ModeComb:
    """Normalized ``comb_0 + e^{i angle} comb_1``, ``comb_1`` = ``comb_0`` shifted by ``sqrt(pi)``.

    For ``angle = pi/4`` this is ``|pi/8>`` up to a global phase.
    """
    return (zero + zero.shifted(SQRT_PI).scaled(np.exp(1j * angle))).normalized()


@dataclass
class Pi8Result:
    comb: ModeComb
    outcome: int
    probability: float
    fidelity: float
    target: ModeComb


def prepare_pi8_from_zero(zero: ModeComb, outcome: int | None = None, rng=None,
                          angle: float = math.pi / 4) -> Pi8Result:
    """Turn an approximate ``|0>`` comb into ``|pi/8>``.

    Qubit ``|+>``, controlled displacement by one logical shift, ``diag(1, e^{i angle})``
    (the T gate for ``angle = pi/4``), Hadamard, Z measurement. Outcome 1
    leaves ``Z|pi/8>``; the logical Z is undone by a frame update that flips
    the sign of the odd-lattice packets.
    """
    if abs(zero.norm() - 1) > 1e-8:
        raise ValueError("input comb must be normalized")
    h = HybridState.plus(zero)
    h = controlled_displacement(h, LOGICAL_SHIFT_R)
    h = HybridState(h.branch0, h.branch1.scaled(np.exp(1j * angle)))
    h = qubit_gate(h, "H")
    m, p, post = measure_qubit_z(h, outcome, rng)
    if m == 1:
        post = logical_z_frame(post)
    target = pi8_target(zero, angle)
    return Pi8Result(post, m, p, fidelity(target, post), target)

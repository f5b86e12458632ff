"""Standard-form approximate GKP codewords and their Wigner functions.

The codeword ``|j_s2>`` replaces each position eigenstate of the ideal
square-lattice code with a squeezed vacuum of variance ``s2`` weighted by a
Gaussian envelope. Normalization, the codeword overlap and the Wigner
functions of ``|j><j'|`` are expressed through theta functions with rational
characteristics. The qudit dimension appearing in the normalization is fixed to
2 (one qubit per mode).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .combs import ModeComb
from .theta import DEFAULT_TOL, theta, theta_imag_dual

SQRT_PI = math.sqrt(math.pi)
COS8 = math.cos(math.pi / 8)
SIN8 = math.sin(math.pi / 8)


@dataclass(frozen=True)
class SqueezingParam:
    """Variance ``sigma2`` of the approximate code, ``0 < sigma2 < 1/2``."""

    sigma2: float

    def __post_init__(self):
        if not 0 < self.sigma2 < 0.5:
            raise ValueError(f"sigma2={self.sigma2} outside (0, 1/2)")

    @classmethod
    def from_db(cls, db: float) -> "SqueezingParam":
        return cls(sigma2_from_db(db))

    @property
    def db(self) -> float:
        return db_from_sigma2(self.sigma2)


def _s2(s) -> float:
    if isinstance(s, SqueezingParam):
        return s.sigma2
    return SqueezingParam(float(s)).sigma2


def _label(j) -> int:
    if j not in (0, 1):
        raise ValueError(f"logical label must be 0 or 1, got {j!r}")
    return int(j)


def db_from_sigma2(sigma2) -> float:
    if isinstance(sigma2, SqueezingParam):
        sigma2 = sigma2.sigma2
    return -10.0 * math.log10(2.0 * sigma2)


def sigma2_from_db(db: float) -> float:
    return 10.0 ** (-db / 10.0) / 2.0


def normalization_constant(s, j, tol: float = DEFAULT_TOL) -> float:
    s2, j = _s2(s), _label(j)
    t_wide, t_narrow = 8j * s2, 0.5j * s2
    val = (theta(j / 2, 0, 0, t_wide, tol) * theta(0, 0, 0, t_narrow, tol)
           + theta(j / 2 + 0.5, 0, 0, t_wide, tol) * theta(0, 0.5, 0, t_narrow, tol))
    return float(val.real)


def codeword_overlap(s, tol: float = DEFAULT_TOL) -> float:
    """``<0_s2|1_s2>``; real and nonnegative for the standard form.

    The ``theta[0; b](0, i s2/2)`` factors are exponentially small at high
    squeezing and are taken from the Poisson-dual sum.
    """
    s2 = _s2(s)
    t_wide = 8j * s2
    num = (theta(0.25, 0, 0, t_wide, tol) * theta_imag_dual(0.25, 0.0, s2 / 2, tol)
           + theta(0.75, 0, 0, t_wide, tol) * theta_imag_dual(0.75, 0.0, s2 / 2, tol))
    den = math.sqrt(normalization_constant(s2, 0, tol) * normalization_constant(s2, 1, tol))
    val = num / den
    assert abs(val.imag) < 1e-12, val
    return float(val.real)


def hadamard_prefactor(s, tol: float = DEFAULT_TOL) -> float:
    return 1.0 / math.sqrt(1.0 + codeword_overlap(s, tol) / math.sqrt(2.0))


def envelope_gaussian(x, s2):
    """Normal density of variance ``1/(4 s2)``."""
    return np.sqrt(2 * s2 / np.pi) * np.exp(-2 * s2 * np.asarray(x) ** 2)


class WignerJJ:
    """Wigner function of ``|j_s2><j'_s2|`` as a rank-2 separable sum.

    ``factors(q, p)`` returns ``(A, B)`` with ``W(q_i, p_k) = sum_r A[i, r] B[k, r]``.
    """

    def __init__(self, s, j, jp, tol: float = DEFAULT_TOL):
        self.sigma2 = _s2(s)
        self.j, self.jp = _label(j), _label(jp)
        self.tol = tol
        s2 = self.sigma2
        n = normalization_constant(s2, self.j, tol) * normalization_constant(s2, self.jp, tol)
        self.scale = 1.0 / (2 * s2 * math.sqrt(n))

    def factors(self, q, p):
        s2, tol = self.sigma2, self.tol
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        c = math.sqrt(1 - 4 * s2 * s2)
        zq = -q * c / (2 * SQRT_PI)
        zp = -2 * p * c / SQRT_PI
        bq = (self.j + self.jp) / 4
        ap = (self.j - self.jp) / 4
        gq = envelope_gaussian(q, s2) * self.scale
        gp = envelope_gaussian(p, s2)
        A = np.stack([gq * theta(0, bq, zq, 0.5j * s2, tol),
                      gq * theta(0, bq + 0.5, zq, 0.5j * s2, tol)], axis=1)
        B = np.stack([gp * theta(ap, 0, zp, 8j * s2, tol),
                      gp * theta(ap + 0.5, 0, zp, 8j * s2, tol)], axis=1)
        return A, B

    def __call__(self, q, p):
        q, p = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
        A, B = self.factors(q.ravel(), p.ravel())
        return np.sum(A * B, axis=1).reshape(q.shape)


def wigner_jjp(s, j, jp, q, p, tol: float = DEFAULT_TOL):
    """Wigner function of ``|j_s2><j'_s2|`` at points ``(q, p)`` (complex)."""
    return WignerJJ(s, j, jp, tol)(q, p)


class LogicalWigner:
    """Wigner function of ``c0|0_s2> + c1|1_s2>``, scaled by ``prefactor**2``.

    Combines the four ``WignerJJ`` operators into one rank-8 separable sum.
    """

    def __init__(self, s, c0, c1, prefactor: float = 1.0, tol: float = DEFAULT_TOL):
        self.sigma2 = _s2(s)
        coefs = {(0, 0): c0 * np.conj(c0), (0, 1): c0 * np.conj(c1),
                 (1, 0): c1 * np.conj(c0), (1, 1): c1 * np.conj(c1)}
        self.terms = [(prefactor ** 2 * w, WignerJJ(self.sigma2, j, jp, tol))
                      for (j, jp), w in coefs.items() if w != 0]

    def factors(self, q, p):
        As, Bs = [], []
        for w, op in self.terms:
            A, B = op.factors(q, p)
            As.append(w * A)
            Bs.append(B)
        return np.concatenate(As, axis=1), np.concatenate(Bs, axis=1)

    def __call__(self, q, p):
        q, p = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
        A, B = self.factors(q.ravel(), p.ravel())
        return np.sum(A * B, axis=1).reshape(q.shape)


def zero_wigner(s, tol: float = DEFAULT_TOL) -> LogicalWigner:
    return LogicalWigner(s, 1.0, 0.0, tol=tol)


def hadamard_wigner(s, tol: float = DEFAULT_TOL) -> LogicalWigner:
    return LogicalWigner(s, COS8, SIN8, hadamard_prefactor(s, tol), tol)


def wigner_H(s, q, p, tol: float = DEFAULT_TOL):
    """Real Wigner function of the normalized Hadamard eigenstate ``|H_s2>``."""
    w = hadamard_wigner(s, tol)(q, p)
    assert np.all(np.abs(w.imag) < 1e-10)
    return w.real


def default_s_cut(s2: float) -> int:
    # dropped packets carry envelope weight exp(-8 pi s2 s^2) < 1e-12
    return max(10, math.ceil(math.sqrt(math.log(1e12) / (8 * math.pi * s2))) + 1)


def position_wavefunction(s, j, s_cut: int | None = None, tol: float = DEFAULT_TOL) -> ModeComb:
    """Truncated position-space comb of ``|j_s2>`` over ``s in [-s_cut, s_cut]``."""
    s2, j = _s2(s), _label(j)
    if s_cut is None:
        s_cut = default_s_cut(s2)
    if s_cut < 1:
        raise ValueError("s_cut must be >= 1")
    n = np.arange(-s_cut, s_cut + 1) * 2 + j
    centers = n * math.sqrt((1 - 4 * s2 * s2) * math.pi)
    env = np.exp(-math.pi * s2 * n.astype(float) ** 2)
    norm = (math.sqrt(math.pi) * s2 * normalization_constant(s2, j, tol)) ** -0.5
    # packet normalization (2 pi s2)^(-1/4) is absorbed by the comb
    amps = norm * env * (2 * math.pi * s2) ** 0.25
    return ModeComb(centers, amps, math.sqrt(s2))


def hadamard_wavefunction(s, s_cut: int | None = None, tol: float = DEFAULT_TOL) -> ModeComb:
    s2 = _s2(s)
    pref = hadamard_prefactor(s2, tol)
    c0 = position_wavefunction(s2, 0, s_cut, tol)
    c1 = position_wavefunction(s2, 1, s_cut, tol)
    return c0.scaled(pref * COS8) + c1.scaled(pref * SIN8)

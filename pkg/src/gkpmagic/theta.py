"""Theta function with rational characteristics.

    theta[a; b](z, tau) = sum_s exp(pi i tau (s + a)^2 + 2 pi i (z + b)(s + a))

evaluated by a symmetric truncated sum. Terms decay like a Gaussian in
``s + a`` with rate ``pi * Im(tau)``, so the window half-width grows as
``1/sqrt(Im tau)``; at ``Im tau = 0.0025`` (20 dB) roughly 120 terms are summed.
No modular transformation is attempted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class ThetaArgs:
    a: float
    b: float
    z: complex
    tau: complex

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("characteristics must be finite")
        if complex(self.tau).imag <= 0:
            raise ValueError(f"tau={self.tau} is not in the upper half-plane")


def window_halfwidth(tau_imag: float, tol: float = DEFAULT_TOL) -> int:
    """Half-width S of the summation window ``|s + a - center| <= S``."""
    return math.ceil(math.sqrt(math.log(1.0 / tol) / (math.pi * tau_imag))) + 2


def theta(a, b, z, tau, tol: float = DEFAULT_TOL):
    """Evaluate ``theta[a; b](z, tau)``.

    ``z`` may be a scalar or an array; the result has the shape of ``z`` and is
    complex. Raises ``ValueError`` for ``Im(tau) <= 0`` or ``tol <= 0``.
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError(f"tau={tau} is not in the upper half-plane")
    if not tol > 0:
        raise ValueError("tol must be positive")
    z = np.asarray(z)
    scalar = z.ndim == 0
    zc = np.atleast_1d(z).astype(complex).ravel()

    S = window_halfwidth(tau.imag, tol)
    # |term| ~ exp(-pi Im(tau) (x - x0)^2) with x0 = -Im(z) / Im(tau)
    centers = -zc.imag / tau.imag
    lo = math.floor(centers.min() - S - a)
    hi = math.ceil(centers.max() + S - a)
    x = np.arange(lo, hi + 1, dtype=float) + a

    quad = np.exp(1j * math.pi * tau * x * x)
    out = np.empty(zc.shape, dtype=complex)
    # chunk to bound the (len(z), len(x)) temporary
    step = max(1, 2_000_000 // len(x))
    for i in range(0, len(zc), step):
        phase = np.exp(2j * math.pi * np.outer(zc[i:i + step] + b, x))
        out[i:i + step] = phase @ quad
    if scalar:
        return complex(out[0])
    return out.reshape(z.shape)


def theta_args(args: ThetaArgs, tol: float = DEFAULT_TOL) -> complex:
    return theta(args.a, args.b, args.z, args.tau, tol)


def theta_imag_dual(b, z, t: float, tol: float = DEFAULT_TOL):
    """``theta[0; b](z, i t)`` for real ``z`` via Poisson summation.

    ``t^(-1/2) * sum_k exp(-pi (k - z - b)^2 / t)``: every term is positive, so
    exponentially small values (small ``t``, ``b`` near 1/2) keep full relative
    accuracy where the direct sum cancels to rounding noise.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if not tol > 0:
        raise ValueError("tol must be positive")
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    u = np.atleast_1d(z).ravel() + b
    S = math.ceil(math.sqrt(math.log(1.0 / tol) * t / math.pi)) + 2
    k = np.arange(math.floor(u.min()) - S, math.ceil(u.max()) + S + 1, dtype=float)
    out = np.exp(-math.pi * (k[None, :] - u[:, None]) ** 2 / t).sum(axis=1) / math.sqrt(t)
    if scalar:
        return float(out[0])
    return out.reshape(z.shape)

"""Wigner negativity ``N = integral |W| dq dp`` of approximate GKP states.

Tensor-product Gauss-Legendre quadrature on square subcells covering a box
``[-L, L]^2``. Evaluators exposing ``factors(q, p) -> (A, B)`` with
``W = A @ B.T`` (the theta-function Wigner functions and the comb Wigner
functions) are integrated through a matrix product per block of ``q`` rows;
plain callables ``W(q, p)`` are evaluated on meshgrid blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcinv

from .standard_form import hadamard_wigner, sigma2_from_db, zero_wigner
from .theta import DEFAULT_TOL

SQRT_PI = math.sqrt(math.pi)
MAX_CELL = SQRT_PI / 2
DEFAULT_CELL = SQRT_PI / 32
DEFAULT_ORDER = 8
DEFAULT_TAIL_TOL = 1e-8
MAX_DB = 20.0


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureConfig:
    box_halfwidth: float
    cell: float = DEFAULT_CELL
    points_per_cell: int = DEFAULT_ORDER
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if not self.box_halfwidth > 0:
            raise ConfigError("box_halfwidth must be positive")
        if not 0 < self.cell <= MAX_CELL:
            raise ConfigError(f"cell must lie in (0, sqrt(pi)/2], got {self.cell}")
        if self.points_per_cell < 1:
            raise ConfigError("points_per_cell must be >= 1")
        if not 0 < self.tail_tol < 1:
            raise ConfigError("tail_tol must lie in (0, 1)")

    def refined(self) -> "QuadratureConfig":
        return QuadratureConfig(self.box_halfwidth, self.cell / 2, self.points_per_cell, self.tail_tol)

    def widened(self) -> "QuadratureConfig":
        return QuadratureConfig(2 * self.box_halfwidth, self.cell, self.points_per_cell, self.tail_tol)


def envelope_sigma(sigma2: float) -> float:
    """Standard deviation of the Wigner envelope, variance ``1/(4 sigma2)``."""
    return 1.0 / (2.0 * math.sqrt(sigma2))


def box_for(sigma2: float, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Half-width leaving envelope mass ``< tail_tol`` outside the square box."""
    # two axes, two tails each: 2 * erfc(L / (sqrt(2) s_env)) <= tail_tol
    return math.sqrt(2.0) * envelope_sigma(sigma2) * float(erfcinv(tail_tol / 2))


def tail_mass(sigma2: float, box_halfwidth: float) -> float:
    return 2 * math.erfc(box_halfwidth / (math.sqrt(2.0) * envelope_sigma(sigma2)))


def default_config(sigma2: float, cell: float = DEFAULT_CELL,
                   points_per_cell: int = DEFAULT_ORDER,
                   tail_tol: float = DEFAULT_TAIL_TOL) -> QuadratureConfig:
    return QuadratureConfig(box_for(sigma2, tail_tol), cell, points_per_cell, tail_tol)


def nodes(cfg: QuadratureConfig):
    """1-D Gauss-Legendre nodes and weights over ``[-L', L']``, ``L' >= L``.

    The box is widened to a whole number of cells, symmetric about 0.
    """
    n_cells = math.ceil(2 * cfg.box_halfwidth / cfg.cell)
    half = n_cells * cfg.cell / 2
    x, w = np.polynomial.legendre.leggauss(cfg.points_per_cell)
    left = -half + cfg.cell * np.arange(n_cells)
    pts = (left[:, None] + cfg.cell * (x[None, :] + 1) / 2).ravel()
    wts = np.tile(w * cfg.cell / 2, n_cells)
    return pts, wts


def _check_box(wigner, cfg: QuadratureConfig):
    s2 = getattr(wigner, "sigma2", None)
    if s2 is not None and tail_mass(s2, cfg.box_halfwidth) > cfg.tail_tol:
        raise ConfigError(
            f"box_halfwidth={cfg.box_halfwidth:.4g} leaves envelope mass "
            f"{tail_mass(s2, cfg.box_halfwidth):.3g} > tail_tol={cfg.tail_tol:g}")


def integrate(wigner, cfg: QuadratureConfig, absolute: bool = True,
              block: int = 256) -> float:
    """Quadrature of ``|W|`` (or ``W`` with ``absolute=False``) over the box."""
    _check_box(wigner, cfg)
    x, w = nodes(cfg)
    total = 0.0
    if hasattr(wigner, "factors"):
        A, B = wigner.factors(x, x)
        Bt = np.ascontiguousarray(B.T)
        for i in range(0, len(x), block):
            M = (A[i:i + block] @ Bt).real
            if absolute:
                M = np.abs(M)
            total += float(w[i:i + block] @ (M @ w))
    else:
        for i in range(0, len(x), block):
            Q, P = np.meshgrid(x[i:i + block], x, indexing="ij")
            M = np.real(wigner(Q, P))
            if absolute:
                M = np.abs(M)
            total += float(w[i:i + block] @ (M @ w))
    return total


def negativity(state, cfg: QuadratureConfig | None = None, theta_tol: float = DEFAULT_TOL) -> float:
    """Wigner negativity of ``state``.

    ``state`` is ``("zero", sigma2)``, ``("h", sigma2)`` or a Wigner evaluator
    (an object with ``factors`` or a callable ``W(q, p)``). For the labeled
    states a default configuration is derived from ``sigma2`` when ``cfg`` is
    omitted.
    """
    wigner = resolve_state(state, theta_tol)
    if cfg is None:
        s2 = getattr(wigner, "sigma2", None)
        if s2 is None:
            raise ConfigError("a QuadratureConfig is required for custom evaluators")
        cfg = default_config(s2)
    return integrate(wigner, cfg)


def resolve_state(state, theta_tol: float = DEFAULT_TOL):
    if isinstance(state, tuple):
        label, s2 = state
        label = label.lower()
        if label == "zero":
            return zero_wigner(s2, theta_tol)
        if label == "h":
            return hadamard_wigner(s2, theta_tol)
        raise ValueError(f"unknown state label {label!r}")
    return state


@dataclass(frozen=True)
class NegativityRow:
    db: float
    sigma2: float
    neg_zero: float
    neg_H: float


def _row(args) -> NegativityRow:
    db, cell, order, tail_tol, theta_tol = args
    s2 = sigma2_from_db(db)
    cfg = default_config(s2, cell, order, tail_tol)
    return NegativityRow(db, s2, negativity(("zero", s2), cfg, theta_tol),
                         negativity(("h", s2), cfg, theta_tol))


def negativity_sweep(db_grid, cell: float = DEFAULT_CELL, points_per_cell: int = DEFAULT_ORDER,
                     tail_tol: float = DEFAULT_TAIL_TOL, theta_tol: float = DEFAULT_TOL,
                     workers: int = 1) -> list[NegativityRow]:
    """One ``NegativityRow`` per squeezing level in ``db_grid`` (sorted, in (0, 20]).

    Grid points are independent; with ``workers > 1`` they are farmed out to a
    process pool and collected in grid order, so results do not depend on the
    worker count.
    """
    db_grid = [float(d) for d in db_grid]
    for d in db_grid:
        if not 0 < d <= MAX_DB:
            raise ValueError(f"squeezing level {d} dB outside (0, {MAX_DB:g}]")
    if db_grid != sorted(db_grid):
        raise ValueError("db_grid must be sorted ascending")
    jobs = [(d, cell, points_per_cell, tail_tol, theta_tol) for d in db_grid]
    if workers <= 1 or len(jobs) <= 1:
        return [_row(j) for j in jobs]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_row, jobs))

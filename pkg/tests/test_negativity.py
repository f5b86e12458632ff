import math

import numpy as np
import pytest

from gkpmagic.combs import CombWigner
from gkpmagic.negativity import (
    MAX_CELL, SQRT_PI, ConfigError, QuadratureConfig, box_for, default_config, integrate,
    negativity, negativity_sweep, tail_mass,
)
from gkpmagic.standard_form import (
    hadamard_wavefunction, hadamard_wigner, position_wavefunction, sigma2_from_db, zero_wigner,
)


def vacuum(q, p):
    return np.exp(-q * q - p * p) / np.pi


def test_vacuum_negativity_is_one():
    cfg = QuadratureConfig(box_halfwidth=8.0, cell=SQRT_PI / 4)
    assert negativity(vacuum, cfg) == pytest.approx(1.0, abs=1e-8)


def test_custom_evaluator_needs_config():
    with pytest.raises(ConfigError):
        negativity(vacuum)


@pytest.mark.parametrize("kwargs", [
    dict(box_halfwidth=5.0, cell=MAX_CELL * 1.01),
    dict(box_halfwidth=5.0, cell=0.0),
    dict(box_halfwidth=0.0),
    dict(box_halfwidth=5.0, points_per_cell=0),
    dict(box_halfwidth=5.0, tail_tol=0.0),
])
def test_config_invariants(kwargs):
    with pytest.raises(ConfigError):
        QuadratureConfig(**kwargs)


def test_box_too_small_for_envelope():
    s2 = 0.05
    cfg = QuadratureConfig(box_halfwidth=box_for(s2) / 2)
    with pytest.raises(ConfigError):
        negativity(("zero", s2), cfg)


def test_box_leaves_tail_below_tolerance():
    for s2 in (0.2, 0.05, 0.005):
        assert tail_mass(s2, box_for(s2, 1e-8)) <= 1e-8 * (1 + 1e-9)


def test_unknown_label():
    with pytest.raises(ValueError):
        negativity(("one", 0.05))


def test_asymptotes_at_18_db():
    s2 = sigma2_from_db(18)
    assert negativity(("zero", s2)) == pytest.approx(2.0, rel=0.05)
    assert negativity(("h", s2)) == pytest.approx(1 + math.sqrt(2), rel=0.05)


@pytest.mark.parametrize("label", ["zero", "h"])
def test_self_convergence_at_10_db(label):
    s2 = 0.05
    cfg = default_config(s2)
    coarse = negativity((label, s2), cfg)
    assert abs(negativity((label, s2), cfg.refined()) - coarse) < 1e-4
    assert abs(negativity((label, s2), cfg.widened()) - coarse) < 1e-4


@pytest.mark.parametrize("db", [5, 8])
def test_theta_and_comb_evaluators_agree(db):
    s2 = sigma2_from_db(db)
    cfg = default_config(s2)
    assert negativity(CombWigner(position_wavefunction(s2, 0)), cfg) == pytest.approx(
        negativity(("zero", s2), cfg), abs=1e-4)
    assert negativity(CombWigner(hadamard_wavefunction(s2)), cfg) == pytest.approx(
        negativity(("h", s2), cfg), abs=1e-4)


def test_pointwise_and_separable_paths_agree():
    s2 = sigma2_from_db(6)
    w = zero_wigner(s2)
    cfg = QuadratureConfig(box_for(s2), SQRT_PI / 8)
    plain = lambda q, p: w(q, p)  # noqa: E731  (hides .factors)
    assert integrate(plain, cfg) == pytest.approx(integrate(w, cfg), abs=1e-12)


def test_lower_bound():
    for db in (4, 9, 15):
        s2 = sigma2_from_db(db)
        assert negativity(("zero", s2)) >= 1 - 1e-6
        assert negativity(("h", s2)) >= 1 - 1e-6


def test_deterministic():
    s2 = sigma2_from_db(7)
    assert negativity(("h", s2)) == negativity(("h", s2))


def test_sweep_rows_and_shape():
    rows = negativity_sweep([6, 10, 14])
    assert [r.db for r in rows] == [6, 10, 14]
    for r in rows:
        assert r.sigma2 == pytest.approx(sigma2_from_db(r.db))
        assert r.neg_H > r.neg_zero
    assert all(a.neg_zero <= b.neg_zero and a.neg_H <= b.neg_H for a, b in zip(rows, rows[1:]))


def test_sweep_empty():
    assert negativity_sweep([]) == []


@pytest.mark.parametrize("grid", [[0], [-1, 5], [21], [10, 6]])
def test_sweep_rejects_bad_grid(grid):
    with pytest.raises(ValueError):
        negativity_sweep(grid)


def test_sweep_worker_count_does_not_change_results():
    serial = negativity_sweep([5, 7])
    pooled = negativity_sweep([5, 7], workers=2)
    assert serial == pooled

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gkpmagic.lattice import (
    MAX_EPS, DeltaLattice, IdealLogicalState, LatticeError, apply_symplectic, identity_lattice,
    lattice_for, same_lattice, tensor, unit_cell_negativity,
)

ROOT2 = math.sqrt(2)
STATES = list(IdealLogicalState)


def test_zero_lattice_counts():
    l = lattice_for("zero")
    w = l.weights()
    assert len(w) == 8
    assert np.sum(np.abs(w)) == 8
    assert np.sum(w) == 4
    # (-1)^{st} on q = sqrt(pi) s, p = sqrt(pi)/2 t
    for (q, p), weight in l.entries:
        assert q % 2 == 0
        assert weight == (-1) ** ((q // 2) * p)


def test_h_lattice_counts():
    w = lattice_for("h").weights()
    assert np.sum(np.abs(w) == 1) == 4
    assert np.sum(np.isclose(np.abs(w), 1 / ROOT2, atol=0, rtol=1e-15)) == 8
    assert np.sum(np.abs(w)) == pytest.approx(4 + 8 / ROOT2, abs=1e-12)
    assert np.sum(w) == pytest.approx(4, abs=1e-12)


def test_exact_negativities():
    assert unit_cell_negativity(lattice_for("zero")) == pytest.approx(2.0, abs=1e-12)
    assert unit_cell_negativity(lattice_for("h")) == pytest.approx(1 + ROOT2, abs=1e-12)
    ratio = unit_cell_negativity(lattice_for("h")) / unit_cell_negativity(lattice_for("zero"))
    assert ratio == pytest.approx((1 + ROOT2) / 2, abs=1e-12)
    assert ratio > 1


@pytest.mark.parametrize("state", STATES)
def test_eps_independence(state):
    l = lattice_for(state)
    assert unit_cell_negativity(l, 0.1) == unit_cell_negativity(l, 0.7)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(STATES), st.lists(st.floats(1e-6, MAX_EPS - 1e-6), min_size=5, max_size=5))
def test_eps_independence_random(state, eps_values):
    l = lattice_for(state)
    ref = unit_cell_negativity(l)
    for eps in eps_values:
        assert unit_cell_negativity(l, eps) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("eps", [0.0, MAX_EPS, -0.1, 1.0])
def test_eps_out_of_range(eps):
    with pytest.raises(LatticeError):
        unit_cell_negativity(lattice_for("zero"), eps)


def test_degenerate_lattice():
    with pytest.raises(LatticeError):
        DeltaLattice.build(1, [((0, 0), -1.0)])
    bad = DeltaLattice(1, (((0, 0), 1.0), ((1, 1), -1.0)))
    with pytest.raises(LatticeError):
        unit_cell_negativity(bad)


def test_merging_and_reduction():
    l = DeltaLattice.build(1, [((0, 0), 1.0), ((4, -4), 0.5), ((5, 1), 2.0)])
    assert dict(l.entries) == {(0, 0): 1.5, (1, 1): 2.0}


def test_tensor_products():
    z = lattice_for("zero")
    h = lattice_for("h")
    zz = tensor(z, z)
    assert zz.num_modes == 2
    assert unit_cell_negativity(zz) == pytest.approx(4.0, abs=1e-12)
    hh = tensor(h, h)
    zzz = tensor(zz, z)
    r = unit_cell_negativity(hh) / unit_cell_negativity(zzz)
    assert r == pytest.approx((1 + ROOT2) ** 2 / 8, abs=1e-12)
    assert r < 1
    assert unit_cell_negativity(tensor(h, identity_lattice())) == unit_cell_negativity(h)


@pytest.mark.parametrize("state", STATES)
def test_multiplicativity(state):
    l = lattice_for(state)
    assert unit_cell_negativity(tensor(l, l)) == pytest.approx(unit_cell_negativity(l) ** 2, abs=1e-12)


def test_hadamard_swaps_spacings():
    plus = apply_symplectic(lattice_for("zero"), "H")
    qs = {c[0] for c, _ in plus.entries}
    ps = {c[1] for c, _ in plus.entries}
    assert qs == {0, 1, 2, 3}   # spacing sqrt(pi)/2
    assert ps == {0, 2}         # spacing sqrt(pi)
    assert same_lattice(plus, lattice_for("plus"))


def test_pi8_is_clifford_equivalent_to_h():
    l = apply_symplectic(apply_symplectic(lattice_for("pi8"), "H"), "SDG")
    assert same_lattice(l, lattice_for("h"))
    assert unit_cell_negativity(lattice_for("pi8")) == pytest.approx(1 + ROOT2, abs=1e-12)


@pytest.mark.parametrize("state", STATES)
@pytest.mark.parametrize("gate", ["H", "S", "SDG"])
def test_one_mode_symplectic_invariance(state, gate):
    l = lattice_for(state)
    assert unit_cell_negativity(apply_symplectic(l, gate)) == pytest.approx(
        unit_cell_negativity(l), abs=1e-12)


@pytest.mark.parametrize("a", STATES)
@pytest.mark.parametrize("b", STATES)
def test_cnot_invariance(a, b):
    l = tensor(lattice_for(a), lattice_for(b))
    for modes in ((0, 1), (1, 0)):
        out = apply_symplectic(l, "CNOT", *modes)
        assert unit_cell_negativity(out) == pytest.approx(unit_cell_negativity(l), abs=1e-12)


def test_cnot_on_codewords_is_logical_cnot():
    out = apply_symplectic(tensor(lattice_for("one"), lattice_for("zero")), "CNOT", 0, 1)
    assert same_lattice(out, tensor(lattice_for("one"), lattice_for("one")))


@pytest.mark.parametrize("args", [("CNOT", 0, 0), ("CNOT", 0), ("CNOT", 0, 2), ("H", 3), ("X",)])
def test_bad_gate_arguments(args):
    l = tensor(lattice_for("zero"), lattice_for("zero"))
    with pytest.raises(LatticeError):
        apply_symplectic(l, *args)


def test_cnot_needs_two_modes():
    with pytest.raises(LatticeError):
        apply_symplectic(lattice_for("zero"), "CNOT", 0, 1)


def test_symplectic_preserves_weights_multiset():
    l = lattice_for("h")
    out = apply_symplectic(l, "S")
    assert sorted(l.weights()) == sorted(out.weights())


def test_dump_format():
    lines = lattice_for("zero").dump().splitlines()
    assert len(lines) == 8
    q, p, w = lines[0].split()
    assert (int(q), int(p), float(w)) == (0, 0, 1.0)

"""Logical-qubit statevector simulation of the two state-injection circuits.

T-gate injection: the data qubit controls a CNOT onto an ancilla in
``|pi/8> = (e^{-i pi/8}|0> + e^{i pi/8}|1>)/sqrt 2``; the ancilla is measured
in Z. Outcome 0 leaves ``T psi`` on the data qubit, outcome 1 leaves
``T^dag psi`` up to phase and is corrected with S.

Pair conversion ``|pi/8>|pi/8> -> |0>``: inject into a data qubit that itself
holds ``|pi/8>``, giving ``T T |+> = S |+> = |+i>``; then S-dagger and H map it
to ``|0>``. With outcome 1 the S correction and the S-dagger cancel, so the
branch table is::

    outcome 0: S^dag, H
    outcome 1: H

Qubit 0 is the most significant bit of a register index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

I2 = np.eye(2, dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S = np.diag([1, 1j])
SDG = S.conj().T
T = np.diag([1, np.exp(1j * math.pi / 4)])
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
CLIFFORDS = {"H": H, "S": S, "SDG": SDG, "CNOT": CNOT}

PI8 = np.array([np.exp(-1j * math.pi / 8), np.exp(1j * math.pi / 8)]) / math.sqrt(2)
ZERO = np.array([1, 0], dtype=complex)
PAIR_RESOURCE_COUNT = 2

# Correction applied to the surviving qubit of the pair circuit, by outcome.
PAIR_CORRECTIONS = {0: ("SDG", "H"), 1: ("H",)}


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: int
    probability: float

    def __post_init__(self):
        if self.outcome not in (0, 1):
            raise ValueError("outcome must be 0 or 1")
        if not -1e-12 <= self.probability <= 1 + 1e-12:
            raise ValueError("probability outside [0, 1]")


class QubitRegister:
    def __init__(self, amplitudes):
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        n = int(round(math.log2(len(amps)))) if len(amps) else -1
        if n < 1 or 2 ** n != len(amps):
            raise ValueError("register length must be a power of two")
        if abs(np.vdot(amps, amps).real - 1) > 1e-12:
            raise ValueError("register state is not normalized")
        self.n = n
        self.amplitudes = amps

    def __repr__(self):
        return f"QubitRegister(n={self.n}, amplitudes={self.amplitudes})"


def fidelity(target, state) -> float:
    """``|<target|state>|^2``; global phase is ignored."""
    return float(abs(np.vdot(np.asarray(target), np.asarray(state))) ** 2)


def _measure_last(state: np.ndarray, outcome, rng):
    """Z-measure the least significant qubit of ``state``.

    Returns the record and the normalized state of the remaining qubits.
    """
    rest = state.reshape(-1, 2)
    probs = np.sum(np.abs(rest) ** 2, axis=0)
    if outcome is None:
        if rng is None:
            raise ValueError("sampled mode needs an rng")
        outcome = int(rng.random() < probs[1])
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0, 1 or None")
    if probs[outcome] < 1e-15:
        raise ValueError(f"outcome {outcome} has zero probability")
    post = rest[:, outcome] / math.sqrt(probs[outcome])
    return MeasurementRecord(outcome, float(probs[outcome])), post


def t_injection(psi, outcome=None, rng=None):
    """Apply T to ``psi`` by injection of a ``|pi/8>`` ancilla.

    ``outcome`` forces the ancilla measurement result; ``None`` samples it with
    ``rng`` (a ``numpy.random.Generator``). Returns ``(QubitRegister, record)``.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape != (2,) or abs(np.vdot(psi, psi).real - 1) > 1e-12:
        raise ValueError("psi must be a normalized one-qubit state")
    state = CNOT @ np.kron(psi, PI8)
    record, out = _measure_last(state, outcome, rng)
    if record.outcome == 1:
        out = S @ out
    return QubitRegister(out), record


def pi8_pair_to_zero(outcome=None, rng=None):
    """Convert ``|pi/8>|pi/8>`` to ``|0>`` with Clifford gates and one Z measurement.

    Returns ``(QubitRegister, [record])``.
    """
    state = CNOT @ np.kron(PI8, PI8)
    record, out = _measure_last(state, outcome, rng)
    for name in PAIR_CORRECTIONS[record.outcome]:
        out = CLIFFORDS[name] @ out
    return QubitRegister(out), [record]


def resource_count() -> int:
    """Magic states consumed per ``|0>`` produced by the pair circuit."""
    return PAIR_RESOURCE_COUNT


def t_injection_branches(psi):
    """``(outcome, probability, fidelity with T psi)`` for both outcomes."""
    target = T @ np.asarray(psi, dtype=complex)
    rows = []
    for m in (0, 1):
        reg, rec = t_injection(psi, m)
        rows.append((m, rec.probability, fidelity(target, reg.amplitudes)))
    return rows


def pair_branches():
    """``(outcome, probability, fidelity with |0>)`` for every branch."""
    rows = []
    for m in (0, 1):
        reg, (rec,) = pi8_pair_to_zero(m)
        rows.append((m, rec.probability, fidelity(ZERO, reg.amplitudes)))
    return rows

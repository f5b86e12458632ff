import cmath
import math

import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


def brute_theta(a, b, z, tau, S):
    """Plain partial sum over s in [-S, S]; independent of the library kernel."""
    return sum(cmath.exp(1j * math.pi * tau * (s + a) ** 2 + 2j * math.pi * (z + b) * (s + a))
               for s in range(-S, S + 1))


def codeword_oracle(sigma2, j, s_max=10):
    """Unnormalized standard-form wavefunction and its quadrature norm.

    Built straight from the sum over squeezed packets with the Gaussian envelope.
    """
    a = math.sqrt((1 - 4 * sigma2 ** 2) * math.pi)

    def psi(q):
        q = np.asarray(q, dtype=float)
        out = np.zeros_like(q)
        for s in range(-s_max, s_max + 1):
            c = (2 * s + j) * a
            out = out + np.exp(-2 * sigma2 / (2 * (1 - 4 * sigma2 ** 2)) * c * c) \
                * np.exp(-(q - c) ** 2 / (2 * 2 * sigma2))
        return out

    return psi


def quad_grid(lo=-45.0, hi=45.0, n=300001):
    x = np.linspace(lo, hi, n)
    return x, x[1] - x[0]


def wigner_transform_oracle(psi_a, psi_b, q, p, L=40.0, n=160001):
    """``(1/2pi) int dx e^{ixp} psi_a(q - x/2) conj(psi_b(q + x/2))`` by trapezoid."""
    x = np.linspace(-L, L, n)
    f = psi_a(q - x / 2) * np.conj(psi_b(q + x / 2)) * np.exp(1j * x * p)
    return np.trapezoid(f, x) / (2 * np.pi)


@pytest.fixture
def rng():
    return np.random.default_rng(20201)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

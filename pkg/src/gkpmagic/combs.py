"""Oscillator states as finite sums of equal-width Gaussian wavepackets.

A packet with center ``c`` and width ``w`` is the normalized position
wavefunction ``(2 pi w^2)^(-1/4) exp(-(x - c)^2 / (4 w^2))``; ``w`` is the
standard deviation of ``|psi|^2``. Real position shifts keep a comb inside this
family, so overlaps and Wigner functions stay in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MERGE_TOL = 1e-12


@dataclass(frozen=True)
class GaussianWavepacket:
    amplitude: complex
    center: float
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("packet width must be positive")
        if not np.isfinite(self.amplitude):
            raise ValueError("packet amplitude must be finite")


class ModeComb:
    """Weighted sum of Gaussian packets sharing one width.

    Stored as sorted ``centers`` and matching complex ``amplitudes``; packets
    whose centers are closer than ``MERGE_TOL`` are merged on construction.
    """

    __slots__ = ("centers", "amplitudes", "width")

    def __init__(self, centers, amplitudes, width: float):
        if not width > 0:
            raise ValueError("packet width must be positive")
        centers = np.asarray(centers, dtype=float).ravel()
        amplitudes = np.asarray(amplitudes, dtype=complex).ravel()
        if centers.shape != amplitudes.shape:
            raise ValueError("centers and amplitudes differ in length")
        order = np.argsort(centers, kind="stable")
        centers, amplitudes = centers[order], amplitudes[order]
        if len(centers) > 1:
            new_group = np.concatenate([[True], np.diff(centers) >= MERGE_TOL])
            idx = np.cumsum(new_group) - 1
            merged = np.zeros(idx[-1] + 1, dtype=complex)
            np.add.at(merged, idx, amplitudes)
            centers, amplitudes = centers[new_group], merged
        self.centers = centers
        self.amplitudes = amplitudes
        self.width = float(width)

    @classmethod
    def from_packets(cls, packets):
        packets = list(packets)
        widths = {p.width for p in packets}
        if len(widths) != 1:
            raise ValueError("packets must share one width")
        return cls([p.center for p in packets], [p.amplitude for p in packets], widths.pop())

    @classmethod
    def empty(cls, width: float):
        return cls([], [], width)

    @property
    def packets(self):
        return [GaussianWavepacket(complex(a), float(c), self.width)
                for c, a in zip(self.centers, self.amplitudes)]

    def __len__(self):
        return len(self.centers)

    def __repr__(self):
        return f"ModeComb({len(self)} packets, width={self.width:.6g})"

    def shifted(self, dx: float) -> "ModeComb":
        return ModeComb(self.centers + dx, self.amplitudes, self.width)

    def scaled(self, factor: complex) -> "ModeComb":
        return ModeComb(self.centers, self.amplitudes * factor, self.width)

    def __add__(self, other: "ModeComb") -> "ModeComb":
        _check_width(self, other)
        return ModeComb(np.concatenate([self.centers, other.centers]),
                        np.concatenate([self.amplitudes, other.amplitudes]), self.width)

    def pruned(self, atol: float = 1e-15) -> "ModeComb":
        """Drop packets with ``|amplitude| <= atol``."""
        keep = np.abs(self.amplitudes) > atol
        return ModeComb(self.centers[keep], self.amplitudes[keep], self.width)

    def norm(self) -> float:
        return float(np.sqrt(max(comb_inner_product(self, self).real, 0.0)))

    def normalized(self) -> "ModeComb":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("cannot normalize a zero comb")
        return self.scaled(1.0 / n)

    def __call__(self, x):
        """Position wavefunction at ``x``."""
        x = np.asarray(x, dtype=float)
        w = self.width
        g = np.exp(-(x[..., None] - self.centers) ** 2 / (4 * w * w))
        return (g @ self.amplitudes) * (2 * np.pi * w * w) ** -0.25

    def dump(self) -> str:
        """One ``center amplitude_re amplitude_im width`` line per packet."""
        return "".join(f"{c:.17g} {a.real:.17g} {a.imag:.17g} {self.width:.17g}\n"
                       for c, a in zip(self.centers, self.amplitudes))

    @classmethod
    def parse(cls, text: str) -> "ModeComb":
        rows = [line.split() for line in text.splitlines() if line.strip()]
        if not rows:
            raise ValueError("empty comb dump")
        arr = np.array(rows, dtype=float)
        widths = np.unique(arr[:, 3])
        if len(widths) != 1:
            raise ValueError("comb dump mixes packet widths")
        return cls(arr[:, 0], arr[:, 1] + 1j * arr[:, 2], widths[0])


def _check_width(c1: ModeComb, c2: ModeComb):
    if c1.width != c2.width:
        raise ValueError(f"width mismatch: {c1.width} vs {c2.width}")


def packet_overlap(c1, w1, c2, w2):
    """Overlap matrix of normalized packets (rows ``c1``, columns ``c2``)."""
    c1 = np.asarray(c1, dtype=float)[:, None]
    c2 = np.asarray(c2, dtype=float)[None, :]
    s = w1 * w1 + w2 * w2
    return np.sqrt(2 * w1 * w2 / s) * np.exp(-(c1 - c2) ** 2 / (4 * s))


def comb_inner_product(c1: ModeComb, c2: ModeComb) -> complex:
    """``<c1|c2>`` for combs of equal packet width."""
    _check_width(c1, c2)
    return general_inner_product(c1, c2)


def general_inner_product(c1: ModeComb, c2: ModeComb) -> complex:
    """``<c1|c2>`` without the equal-width requirement."""
    if len(c1) == 0 or len(c2) == 0:
        return 0j
    k = packet_overlap(c1.centers, c1.width, c2.centers, c2.width)
    return complex(np.conj(c1.amplitudes) @ k @ c2.amplitudes)


def fidelity(c1: ModeComb, c2: ModeComb) -> float:
    """``|<c1|c2>|^2 / (<c1|c1><c2|c2>)``."""
    num = abs(general_inner_product(c1, c2)) ** 2
    return num / (general_inner_product(c1, c1).real * general_inner_product(c2, c2).real)


class CombWigner:
    """Closed-form Wigner function of ``|c1><c2|``, equal widths.

    Cross term of packets k (from c1) and l (from c2):
    ``a_k conj(b_l) / pi * exp(-(q - m)^2 / (2 w^2)) * exp(-2 w^2 p^2) * exp(i p (c_l - c_k))``
    with ``m = (c_k + c_l) / 2``. Terms are grouped by midpoint so the result is a
    separable sum ``sum_m f_m(q) g_m(p)``.
    """

    def __init__(self, c1: ModeComb, c2: ModeComb | None = None):
        c2 = c1 if c2 is None else c2
        _check_width(c1, c2)
        self.width = c1.width
        mids = (c1.centers[:, None] + c2.centers[None, :]) / 2
        diffs = c2.centers[None, :] - c1.centers[:, None]
        coef = c1.amplitudes[:, None] * np.conj(c2.amplitudes)[None, :]
        keep = np.abs(coef) > 0
        mids, diffs, coef = mids[keep], diffs[keep], coef[keep]
        key = np.round(mids / MERGE_TOL ** 0.5).astype(np.int64)
        self.midpoints, inverse = np.unique(key, return_inverse=True)
        self.midpoints = np.array([mids[inverse == i][0] for i in range(len(self.midpoints))])
        self._group = inverse
        self._diffs = diffs
        self._coef = coef

    def factors(self, q, p):
        w = self.width
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        fq = np.exp(-(q[:, None] - self.midpoints[None, :]) ** 2 / (2 * w * w)) / np.pi
        ph = np.exp(1j * np.outer(p, self._diffs)) * self._coef
        gp = np.zeros((len(p), len(self.midpoints)), dtype=complex)
        np.add.at(gp.T, self._group, ph.T)
        gp *= np.exp(-2 * w * w * p * p)[:, None]
        return fq.astype(complex), gp

    def __call__(self, q, p):
        q, p = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
        fq, gp = self.factors(q.ravel(), p.ravel())
        return np.sum(fq * gp, axis=1).reshape(q.shape)


def comb_distance(c1: ModeComb, c2: ModeComb) -> float:
    """``|| c1 - c2 ||`` in the state norm."""
    _check_width(c1, c2)
    return (c1 + c2.scaled(-1)).norm()

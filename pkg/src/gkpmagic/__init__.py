"""Numerics for GKP magic states: theta-function codewords, Wigner negativity,
ideal delta lattices, state-injection circuits and qubit-oscillator preparation."""

__version__ = "0.1.0"

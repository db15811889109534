"""Laplacian spectra, eigendecompositions and heat kernels.

Eigenvalues are always kept in ascending order (most negative first); the
matching code relies on that ordering being the same on both sides.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, LineageFamily, laplacian


@dataclass(frozen=True, eq=False)
class Spectrum:
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __repr__(self):
        return f"Spectrum({np.array2string(self.values, precision=6)})"


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    spectrum: Spectrum
    vectors: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return self.spectrum.values


def decompose(m: np.ndarray) -> EigenDecomposition:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if m.shape[0] == 0:
        return EigenDecomposition(Spectrum(np.zeros(0)), np.zeros((0, 0)))
    w, u = np.linalg.eigh(m)
    return EigenDecomposition(Spectrum(w), u)


def spectrum(g) -> Spectrum:
    """Ascending Laplacian eigenvalues of a graph (or pass a Spectrum through)."""
    if isinstance(g, Spectrum):
        return g
    if isinstance(g, Graph):
        if g.n == 0:
            return Spectrum(np.zeros(0))
        return Spectrum(np.linalg.eigvalsh(laplacian(g)))
    return Spectrum(np.sort(np.asarray(g, dtype=float)))


def closed_form_spectrum(family: LineageFamily, n: int) -> Spectrum:
    """Analytic Laplacian spectra of Pa_n and Cy_n, used as test oracles.

    Path: -2 + 2 cos(pi k / n); cycle: -2 + 2 cos(2 pi k / n), k = 0..n-1.
    """
    if n < 2:
        raise ValueError(f"closed forms need n >= 2, got {n}")
    k = np.arange(n)
    if family is LineageFamily.PATH:
        vals = -2.0 + 2.0 * np.cos(np.pi * k / n)
    elif family is LineageFamily.CYCLE:
        vals = -2.0 + 2.0 * np.cos(2.0 * np.pi * k / n)
    else:
        raise ValueError(f"no closed form for {family}")
    return Spectrum(np.sort(vals))


def heat_kernel(d: EigenDecomposition, t: float) -> np.ndarray:
    """exp(t L) = U exp(t Lambda) U^T."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    u = d.vectors
    k = (u * np.exp(t * d.values)) @ u.T
    return 0.5 * (k + k.T)


def kernel_frobenius_norm(s, t: float) -> float:
    """||exp(t L)||_F from the spectrum alone."""
    vals = np.asarray(spectrum(s))
    return float(np.sqrt(np.sum(np.exp(2.0 * t * vals))))

"""Random instance generators for property tests and experiment scripts.

These are test infrastructure: the covariant-channel generator draws Kraus
operators supported on single transition modes and repairs trace
preservation, which covers the covariant set well enough for monotone
checks but is not claimed to sample any canonical measure.
"""
from __future__ import annotations

import numpy as np

from .core import DensityMatrix, EnergySpectrum, GibbsContext, ProbVec, StochasticMatrix
from .coherence import QuantumChannel, bohr_spectrum


def random_prob_vec(rng: np.random.Generator, n: int, concentration: float = 1.0) -> ProbVec:
    return ProbVec(rng.dirichlet(np.full(n, concentration)))


def random_rank_deficient_vec(rng: np.random.Generator, n: int) -> ProbVec:
    k = int(rng.integers(1, n))
    p = np.zeros(n)
    p[rng.choice(n, size=k, replace=False)] = rng.dirichlet(np.ones(k))
    return ProbVec(p)


def random_context(rng: np.random.Generator, n: int, beta_range=(0.0, 5.0), spread: float = 3.0) -> GibbsContext:
    e = np.sort(rng.uniform(0.0, spread, n))
    e -= e[0]
    return GibbsContext(EnergySpectrum(e), float(rng.uniform(*beta_range)))


def random_density_matrix(rng: np.random.Generator, n: int, rank: int | None = None) -> DensityMatrix:
    """Mixture of Haar-ish random pure states."""
    if rank is None:
        rank = n
    m = np.zeros((n, n), dtype=complex)
    weights = rng.dirichlet(np.ones(rank))
    for w in weights:
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        v /= np.linalg.norm(v)
        m += w * np.outer(v, v.conj())
    return DensityMatrix(m)


def random_doubly_stochastic(rng: np.random.Generator, n: int, terms: int = 6) -> np.ndarray:
    """Convex mixture of random permutation matrices."""
    w = rng.dirichlet(np.ones(terms))
    m = np.zeros((n, n))
    for wk in w:
        m += wk * np.eye(n)[rng.permutation(n)]
    return m


def random_gibbs_stochastic(rng: np.random.Generator, ctx: GibbsContext, moves: int = 6) -> StochasticMatrix:
    """Product of random two-level partial thermalisations, occasionally mixed
    with the full thermaliser; every factor fixes the Gibbs vector exactly."""
    n, g = ctx.n, ctx.gibbs.p
    m = np.eye(n)
    for _ in range(moves):
        i, j = sorted(rng.choice(n, size=2, replace=False))
        lam = rng.uniform(0.0, 1.0)
        blk = np.eye(n)
        blk[i, i] = 1.0 - lam * g[j] / g[i]
        blk[i, j] = lam
        blk[j, i] = lam * g[j] / g[i]
        blk[j, j] = 1.0 - lam
        m = blk @ m
    if rng.uniform() < 0.3:
        lam = rng.uniform(0.0, 1.0)
        m = (1.0 - lam) * m + lam * np.outer(g, np.ones(n))
    return StochasticMatrix(m)


def random_covariant_channel(
    rng: np.random.Generator, spectrum: EnergySpectrum, kraus_per_mode: int = 1
) -> QuantumChannel:
    """Random time-translation covariant channel: each Kraus operator is
    supported on a single transition frequency (all its entries move energy
    by the same amount), then the set is normalised to be trace preserving.
    The normaliser is diagonal for non-degenerate spectra, so the single-mode
    support survives the repair."""
    n = spectrum.n
    freq = spectrum.energies[:, None] - spectrum.energies[None, :]
    bohr = bohr_spectrum(spectrum)
    ks = []
    for omega in bohr:
        mask = np.abs(freq - omega) <= max(bohr.delta, 1e-12)
        if not mask.any():
            continue
        for _ in range(kraus_per_mode):
            k = np.where(mask, rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), 0.0)
            ks.append(k)
    ks.append(np.eye(n, dtype=complex))  # keep the normaliser invertible
    total = sum(k.conj().T @ k for k in ks)
    w, u = np.linalg.eigh(total)
    inv_sqrt = u @ np.diag(1.0 / np.sqrt(w)) @ u.conj().T
    return QuantumChannel(tuple(k @ inv_sqrt for k in ks))


def random_thermal_channel(rng: np.random.Generator, ctx: GibbsContext) -> QuantumChannel:
    """Random covariant and Gibbs-preserving channel: composition of partial
    dephasings and partial thermalisations (replace-with-gamma)."""
    from .coherence import partial_dephasing_channel

    n = ctx.n
    gamma = ctx.gibbs.p
    kind = rng.integers(0, 3)
    if kind == 0:
        return partial_dephasing_channel(ctx.spectrum, float(rng.uniform(0, 1)))
    if kind == 1:
        # replace-with-gamma with probability lam
        lam = float(rng.uniform(0, 1))
        ks = [np.sqrt(1 - lam) * np.eye(n, dtype=complex)]
        for a in range(n):
            for b in range(n):
                k = np.zeros((n, n), dtype=complex)
                k[a, b] = np.sqrt(lam * gamma[a])
                ks.append(k)
        return QuantumChannel(tuple(ks))
    deph = partial_dephasing_channel(ctx.spectrum, float(rng.uniform(0, 1)))
    lam = float(rng.uniform(0, 1))
    ks = []
    for kd in deph.kraus:
        ks.append(np.sqrt(1 - lam) * kd)
    for a in range(n):
        for b in range(n):
            k = np.zeros((n, n), dtype=complex)
            k[a, b] = np.sqrt(lam * gamma[a])
            ks.append(k)
    return QuantumChannel(tuple(ks))

"""Paired edge samples, a distribution-free independence test and CLT intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .geometry import frame_vectors, hull2d, rng_stream
from .shadow import as_vpolytope


@dataclass(frozen=True)
class PairedSample:
    """Projected edge length and on-shadow indicator, one pair per random frame."""

    l_values: np.ndarray
    x_flags: np.ndarray

    def __post_init__(self):
        L = np.asarray(self.l_values, dtype=float)
        X = np.asarray(self.x_flags, dtype=bool)
        if L.ndim != 1 or L.shape != X.shape or L.size < 1:
            raise ValueError("l_values and x_flags must be equal-length non-empty 1-d arrays")
        object.__setattr__(self, "l_values", L)
        object.__setattr__(self, "x_flags", X)

    def __len__(self):
        return self.l_values.size


def collect_edge_sample(p, edge, trials: int, seed: int) -> PairedSample:
    """For each frame, the projected length of ``edge`` and whether it bounds the shadow.

    Trial i uses the stream (seed, i). The edge is on the shadow iff its
    endpoints are consecutive preimages around the projected hull.
    """
    P = as_vpolytope(p)
    a, b = sorted(int(i) for i in edge)
    if (a, b) not in set(P.edges):
        raise ValueError(f"({a}, {b}) is not an edge of the polytope")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    V = P.vertices
    L = np.empty(trials)
    X = np.empty(trials, dtype=bool)
    for t in range(trials):
        u, v = frame_vectors(rng_stream(seed, t), V.shape[1])
        Y = V @ np.column_stack([u, v])
        L[t] = float(np.linalg.norm(Y[a] - Y[b]))
        h = hull2d(Y)
        k = len(h)
        if k == 2:
            X[t] = {a, b} == set(h)
        else:
            X[t] = any({h[i], h[(i + 1) % k]} == {a, b} for i in range(k))
    return PairedSample(L, X)


@dataclass(frozen=True)
class IndependenceVerdict:
    verdict: str                 # "pass" | "fail" | "inconclusive"
    correlation: float
    correlation_p: float
    ks_statistic: float
    ks_p: float
    alpha: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def permutation_correlation_test(L, X, permutations: int, rng: np.random.Generator, chunk: int = 500):
    """Pearson correlation of L with X and its two-sided permutation p-value.

    Returns (r, p). The p-value uses the (1 + hits) / (1 + permutations)
    convention so it is never zero.
    """
    L = np.asarray(L, dtype=float)
    x = np.asarray(X, dtype=float)
    lc = L - L.mean()
    xc = x - x.mean()
    denom = math.sqrt(float(lc @ lc) * float(xc @ xc))
    if denom == 0.0:
        return math.nan, math.nan
    r = float(lc @ xc) / denom
    hits = 0
    done = 0
    while done < permutations:
        c = min(chunk, permutations - done)
        perm = rng.permuted(np.broadcast_to(xc, (c, xc.size)), axis=1)
        rs = perm @ lc / denom
        hits += int(np.sum(np.abs(rs) >= abs(r) - 1e-12))
        done += c
    return r, (1 + hits) / (1 + permutations)


def independence_test(s: PairedSample, alpha: float = 0.01, permutations: int = 10_000,
                      seed: int = 0) -> IndependenceVerdict:
    """Test L independent of X with a permutation correlation test and a two-sample KS test.

    Passes iff both p-values are >= alpha. A sample where X takes a single
    value cannot be tested and is inconclusive. If L is constant the
    correlation is undefined and only the KS test decides.
    """
    L, X = s.l_values, s.x_flags
    if X.all() or not X.any():
        return IndependenceVerdict("inconclusive", math.nan, math.nan, math.nan, math.nan, alpha)
    r, p_corr = permutation_correlation_test(L, X, permutations, rng_stream(seed, 0))
    ks = sps.ks_2samp(L[X], L[~X])
    ks_p = float(ks.pvalue)
    ok = ks_p >= alpha and (math.isnan(p_corr) or p_corr >= alpha)
    return IndependenceVerdict("pass" if ok else "fail", r, p_corr, float(ks.statistic), ks_p, alpha)


def mean_ci(values, confidence: float = 0.95):
    """(mean, half-width) of the normal-approximation interval."""
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two values")
    if not 0 < confidence < 1:
        raise ValueError("confidence must lie in (0, 1)")
    z = float(sps.norm.ppf(0.5 + confidence / 2))
    return float(x.mean()), z * float(x.std(ddof=1)) / math.sqrt(x.size)

"""Shadows: projected hulls with preimages, shadow paths, Monte Carlo size estimates."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import Frame2, InvalidDimension, frame_vectors, hull2d_with_ties, rng_stream
from .polytope import SizeCapExceeded, VPolytope, Zonotope, zonotope_vertices

MAX_DIAMETER_GENERATORS = 24


@dataclass(frozen=True)
class ShadowPolygon:
    frame: Frame2
    hull_points: np.ndarray          # (h, 2), counterclockwise
    preimage_indices: tuple          # vertex index of each hull point
    degenerate: bool

    @property
    def num_vertices(self) -> int:
        return len(self.preimage_indices)

    def edge_pairs(self) -> set:
        """Unordered vertex-index pairs of consecutive hull points."""
        idx = self.preimage_indices
        h = len(idx)
        if h < 2:
            return set()
        if h == 2:
            return {frozenset(idx)}
        return {frozenset((idx[i], idx[(i + 1) % h])) for i in range(h)}


@dataclass(frozen=True)
class ShadowEstimate:
    mean: float
    std_error: float
    trials: int
    min_seen: int
    max_seen: int
    degenerate_count: int

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "trials": self.trials,
            "min_seen": self.min_seen,
            "max_seen": self.max_seen,
            "degenerate_count": self.degenerate_count,
        }


def shadow(p: VPolytope, f: Frame2) -> ShadowPolygon:
    """Project every vertex into the frame plane and take the planar hull.

    ``degenerate`` is set when the hull has fewer than three points or
    when two vertices land on the same hull point; in the latter case the
    lowest vertex index is reported as the preimage.
    """
    if p.dim != f.dim:
        raise InvalidDimension(f"polytope dimension {p.dim} != frame dimension {f.dim}")
    Y = p.vertices @ f.matrix
    hull, ties = hull2d_with_ties(Y)
    return ShadowPolygon(f, Y[hull], tuple(hull), ties or len(hull) < 3)


def shadow_path(s: ShadowPolygon) -> list[int]:
    """Preimages along the upper chain, from the leftmost to the rightmost hull point.

    This is the vertex sequence visited by the shadow-vertex pivot rule when
    moving from the minimiser to the maximiser of the first frame objective.
    """
    if len(s.preimage_indices) < 3:
        raise ValueError("shadow path needs a two-dimensional shadow")
    H = s.hull_points
    idx = list(s.preimage_indices)
    # hull starts at the lexicographic minimum and runs counterclockwise
    pos = max(range(len(H)), key=lambda i: (H[i, 0], H[i, 1]))
    return [idx[0]] + idx[pos:][::-1]


def _count_trial(V: np.ndarray, seed: int, index: int):
    u, v = frame_vectors(rng_stream(seed, index), V.shape[1])
    Y = V @ np.column_stack([u, v])
    hull, ties = hull2d_with_ties(Y)
    return len(hull), ties or len(hull) < 3


@lru_cache(maxsize=32)
def _zonotope_vertex_cache(key):
    gens, base, label = key
    z = Zonotope(np.array(gens), np.array(base), label)
    return zonotope_vertices(z)


def as_vpolytope(p) -> VPolytope:
    if isinstance(p, Zonotope):
        key = (tuple(map(tuple, p.generators)), tuple(p.base), p.label)
        return _zonotope_vertex_cache(key)
    return p


def shadow_counts(p, trials: int, seed: int, threads: int = 1):
    """Per-trial shadow vertex counts and degeneracy flags.

    Trial i always uses the stream (seed, i), so results do not depend on
    ``threads``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    V = as_vpolytope(p).vertices
    if V.shape[1] < 2:
        raise InvalidDimension("random 2-frames need ambient dimension >= 2")
    counts = np.empty(trials, dtype=int)
    degen = np.empty(trials, dtype=bool)

    def run(lo, hi):
        for i in range(lo, hi):
            counts[i], degen[i] = _count_trial(V, seed, i)

    threads = max(1, int(threads))
    if threads == 1:
        run(0, trials)
    else:
        step = math.ceil(trials / threads)
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(lambda lo: run(lo, min(lo + step, trials)), range(0, trials, step)))
    return counts, degen


def estimate_shadow_size(p, trials: int, seed: int, exact: bool = True, threads: int = 1) -> ShadowEstimate:
    """Expected number of shadow vertices under a Haar-random 2-frame.

    Zonotopes use the exact count unless ``exact`` is False, in which case
    their vertices are enumerated and sampled like any other polytope.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if isinstance(p, Zonotope) and exact:
        c = zonotope_shadow_size_exact(p)
        return ShadowEstimate(float(c), 0.0, trials, c, c, 0)
    counts, degen = shadow_counts(p, trials, seed, threads)
    se = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return ShadowEstimate(float(counts.mean()), se, trials, int(counts.min()), int(counts.max()), int(degen.sum()))


def zonotope_shadow_size_exact(z: Zonotope) -> int:
    """Generic shadow size of a zonotope: two per parallelism class of generators."""
    return 2 * len(z.parallel_classes())


def zonotope_diameter(z: Zonotope) -> float:
    """max over sign vectors s of |sum_i s_i g_i|, exhaustively."""
    G = z.generators
    g = len(G)
    if g > MAX_DIAMETER_GENERATORS:
        raise SizeCapExceeded(f"{g} generators exceeds the diameter cap of {MAX_DIAMETER_GENERATORS}")
    # s and -s give the same norm: fix the first sign
    first, rest = G[0], G[1:]
    r = len(rest)
    lo_n = min(r, 12)
    lo, hi = rest[:lo_n], rest[lo_n:]

    def all_sums(M):
        k = len(M)
        if k == 0:
            return np.zeros((1, G.shape[1]))
        signs = 1 - 2 * ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1)
        return signs @ M

    S_lo = all_sums(lo) + first
    best = 0.0
    for h in all_sums(hi):
        T = S_lo + h
        best = max(best, float(np.max(np.einsum("ij,ij->i", T, T))))
    return math.sqrt(best)

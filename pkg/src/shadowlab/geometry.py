"""Dense vector helpers, seeded randomness, random 2-frames and planar hulls."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import FRAME_TOL, HULL_TOL


class InvalidDimension(ValueError):
    pass


def rng_stream(master_seed: int, stream_index: int = 0) -> np.random.Generator:
    """Counter-based generator for one (master_seed, stream_index) pair.

    Streams with different indices are statistically independent and the
    mapping does not depend on the order in which streams are created, so
    trials can be farmed out to workers in any order.
    """
    ss = np.random.SeedSequence(int(master_seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(int(stream_index),))
    return np.random.Generator(np.random.PCG64(ss))


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InvalidDimension(f"expected a non-empty 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def sample_gaussian_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    if n < 1:
        raise InvalidDimension(f"dimension must be >= 1, got {n}")
    return rng.standard_normal(n)


@dataclass(frozen=True)
class Frame2:
    """Orthonormal pair (u, v); the projection is x -> (u.x, v.x)."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = as_vector(self.u)
        v = as_vector(self.v)
        if u.shape != v.shape or u.size < 2:
            raise InvalidDimension("frame vectors must share a dimension >= 2")
        if abs(np.linalg.norm(u) - 1) > FRAME_TOL or abs(np.linalg.norm(v) - 1) > FRAME_TOL:
            raise ValueError("frame vectors must be unit length")
        if abs(u @ v) > FRAME_TOL:
            raise ValueError("frame vectors must be orthogonal")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def dim(self) -> int:
        return self.u.size

    @property
    def matrix(self) -> np.ndarray:
        """n x 2 matrix with columns u, v."""
        return np.column_stack([self.u, self.v])

    def rotated(self, theta: float) -> "Frame2":
        c, s = np.cos(theta), np.sin(theta)
        u = c * self.u + s * self.v
        v = -s * self.u + c * self.v
        return _renormalized(u, v)


def _renormalized(u, v) -> Frame2:
    u = u / np.linalg.norm(u)
    v = v - (u @ v) * u
    return Frame2(u, v / np.linalg.norm(v))


def _gram_schmidt_rows(g1: np.ndarray, g2: np.ndarray):
    """Row-wise Gram-Schmidt; returns (u, v, ok) with ok False for degenerate pairs."""
    n1 = np.linalg.norm(g1, axis=-1, keepdims=True)
    u = g1 / np.where(n1 > 0, n1, 1.0)
    w = g2 - np.sum(g2 * u, axis=-1, keepdims=True) * u
    nw = np.linalg.norm(w, axis=-1, keepdims=True)
    n2 = np.linalg.norm(g2, axis=-1, keepdims=True)
    ok = (n1[..., 0] > 0) & (nw[..., 0] > 1e-8 * np.maximum(n2[..., 0], 1e-300))
    v = w / np.where(nw > 0, nw, 1.0)
    # second pass keeps |u.v| well below FRAME_TOL
    v = v - np.sum(v * u, axis=-1, keepdims=True) * u
    v = v / np.linalg.norm(np.where(ok[..., None], v, 1.0), axis=-1, keepdims=True)
    return u, v, ok


def frame_vectors(rng: np.random.Generator, n: int):
    """(u, v) arrays of a Haar-random 2-frame, without building a `Frame2`."""
    while True:
        g1 = rng.standard_normal(n)
        g2 = rng.standard_normal(n)
        n1 = math.sqrt(float(g1 @ g1))
        if n1 == 0.0:
            continue
        u = g1 / n1
        w = g2 - float(g2 @ u) * u
        nw = math.sqrt(float(w @ w))
        if nw <= 1e-8 * math.sqrt(float(g2 @ g2)):
            continue
        v = w / nw
        v = v - float(v @ u) * u
        return u, v / math.sqrt(float(v @ v))


def sample_frame(rng: np.random.Generator, n: int) -> Frame2:
    """Haar-uniform orthonormal 2-frame in R^n by Gram-Schmidt on two Gaussians.

    A (numerically) collinear Gaussian pair is redrawn.
    """
    if n < 2:
        raise InvalidDimension(f"a 2-frame needs dimension >= 2, got {n}")
    return Frame2(*frame_vectors(rng, n))


def sample_frames(rng: np.random.Generator, n: int, count: int):
    """Vectorised `sample_frame`: returns arrays U, V of shape (count, n)."""
    if n < 2:
        raise InvalidDimension(f"a 2-frame needs dimension >= 2, got {n}")
    U = np.empty((count, n))
    V = np.empty((count, n))
    filled = 0
    while filled < count:
        m = count - filled
        g1 = rng.standard_normal((m, n))
        g2 = rng.standard_normal((m, n))
        u, v, ok = _gram_schmidt_rows(g1, g2)
        k = int(ok.sum())
        U[filled:filled + k] = u[ok]
        V[filled:filled + k] = v[ok]
        filled += k
    return U, V


def project(f: Frame2, x) -> np.ndarray:
    """Image of one point (shape (n,)) or many points (shape (k, n)) in the frame plane."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != f.dim:
        raise InvalidDimension(f"point dimension {x.shape[-1]} does not match frame dimension {f.dim}")
    return x @ f.matrix


def hull2d(points, tol: float = HULL_TOL) -> list[int]:
    """Counterclockwise indices of the extreme points of a planar point set.

    Andrew's monotone chain. Collinear and (near-)duplicate points are
    dropped: a turn counts only if its cross product exceeds
    ``tol * scale**2`` with ``scale`` the largest coordinate magnitude.
    When several inputs coincide with a hull point the lowest index is
    reported. The list starts at the lexicographically smallest point.
    """
    return hull2d_with_ties(points, tol)[0]


def hull2d_with_ties(points, tol: float = HULL_TOL):
    """`hull2d` plus a flag telling whether some hull point has several preimages."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    k = len(pts)
    if k == 0:
        raise ValueError("hull2d needs at least one point")
    if not np.all(np.isfinite(pts)):
        raise ValueError("hull2d got non-finite coordinates")
    scale = float(np.max(np.abs(pts)))
    if scale == 0.0:
        return [0], k > 1
    eps = tol * scale * scale
    dup = tol * scale
    cand = _prefilter(pts, eps) if k > 32 else np.arange(k)
    sub = pts[cand]
    order = cand[np.lexsort((cand, sub[:, 1], sub[:, 0]))]
    xs = pts[:, 0].tolist()
    ys = pts[:, 1].tolist()

    def chain(seq):
        out = []
        for i in seq:
            xi, yi = xs[i], ys[i]
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                cross = (xs[a] - xs[o]) * (yi - ys[o]) - (ys[a] - ys[o]) * (xi - xs[o])
                if cross <= eps:
                    out.pop()
                else:
                    break
            if out and abs(xs[out[-1]] - xi) <= dup and abs(ys[out[-1]] - yi) <= dup:
                continue
            out.append(i)
        return out

    seq = order.tolist()
    lower = chain(seq)
    upper = chain(seq[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:
        # all points coincide
        hull = lower[:1]
    if len(hull) == 2:
        a, b = hull
        if abs(xs[a] - xs[b]) <= dup and abs(ys[a] - ys[b]) <= dup:
            hull = [a]
    close = np.all(np.abs(pts[None, :, :] - pts[hull][:, None, :]) <= dup, axis=2)
    hull = [int(np.argmax(row)) for row in close]
    ties = bool(np.any(close.sum(axis=1) > 1))
    return hull, ties


_DIRS = np.array([[np.cos(t), np.sin(t)] for t in np.arange(8) * np.pi / 4])


def _prefilter(pts: np.ndarray, eps: float) -> np.ndarray:
    """Indices of points not strictly inside the polygon of 8 directional extremes."""
    ext = np.unique(np.argmax(pts @ _DIRS.T, axis=0))
    poly = pts[ext]
    c = poly.mean(axis=0)
    ang = np.arctan2(poly[:, 1] - c[1], poly[:, 0] - c[0])
    poly = poly[np.argsort(ang)]
    if len(poly) < 3:
        return np.arange(len(pts))
    a = poly
    b = np.roll(poly, -1, axis=0)
    # inside iff strictly left of every counterclockwise edge (with margin)
    cross = ((b[:, 0] - a[:, 0])[None, :] * (pts[:, 1:2] - a[None, :, 1])
             - (b[:, 1] - a[:, 1])[None, :] * (pts[:, 0:1] - a[None, :, 0]))
    inside = np.all(cross > 4 * eps, axis=1)
    return np.nonzero(~inside)[0]


def perimeter(poly) -> float:
    """Length of the closed polygon through the given ordered points."""
    p = np.asarray(poly, dtype=float).reshape(-1, 2)
    if len(p) < 2:
        raise ValueError("perimeter needs at least two points")
    return float(np.sum(np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1)))


def gdiam(points, chunk: int = 256) -> float:
    """Largest pairwise Euclidean distance (exhaustive, chunked)."""
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        p = p[:, None]
    if len(p) == 0:
        raise ValueError("gdiam of an empty point set")
    best = 0.0
    for s in range(0, len(p), chunk):
        blk = p[s:s + chunk]
        for t in range(s, len(p), chunk):
            diff = blk[:, None, :] - p[None, t:t + chunk, :]
            best = max(best, float(np.max(np.einsum("ijk,ijk->ij", diff, diff))))
    return float(np.sqrt(best))


def dist_point_hyperplane(x, normal) -> float:
    """Distance from x to the linear hyperplane {y : normal . y = 0}."""
    x = as_vector(x)
    a = as_vector(normal)
    if x.shape != a.shape:
        raise InvalidDimension("point and normal dimensions differ")
    na = np.linalg.norm(a)
    if na == 0:
        raise ValueError("zero normal vector")
    return float(abs(a @ x) / na)

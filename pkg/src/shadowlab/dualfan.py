"""Shadow counting on the dual side: how a frame's unit circle crosses the normal fan.

Also the fan parameter delta and Monte Carlo checks of the cone-distance
estimates that lower-bound the arc lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import ARC_PAD, CONE_TOL
from .geometry import Frame2, InvalidDimension, hull2d, perimeter
from .polytope import VPolytope, normal_cones

TWO_PI = 2.0 * math.pi


class ThinCone(RuntimeError):
    pass


@dataclass(frozen=True)
class ArcDecomposition:
    """Optimality arcs on the frame's unit circle, sorted by start angle.

    Each arc is ``(vertex_index, start, end)`` with ``start`` in [0, 2pi)
    and ``end > start`` (an arc may run past 2pi).
    """

    frame: Frame2
    arcs: tuple

    @property
    def total_measure(self) -> float:
        return float(sum(e - s for _, s, e in self.arcs))

    def boundary_points(self) -> np.ndarray:
        """Unit-circle points where the circle crosses from one cone to the next."""
        ang = np.array([s for _, s, _ in self.arcs])
        return np.column_stack([np.cos(ang), np.sin(ang)])

    def inscribed_perimeter(self) -> float:
        """Perimeter of the polygon spanned by the crossing points."""
        pts = self.boundary_points()
        if len(pts) < 2:
            return 0.0
        return perimeter(pts[hull2d(pts)])


def _vertex_arc(a: np.ndarray, b: np.ndarray, pad: float):
    """Intersection of the open half-circles {theta : cos(theta) a_i + sin(theta) b_i > 0}.

    The intersection is nonempty iff the centre angles fit into an arc
    shorter than pi; it then equals (last - pi/2, first + pi/2) where
    first/last bound the tightest covering arc. Returns (start, end) or None.
    """
    if a.size == 0:
        return 0.0, TWO_PI
    phi = np.sort(np.mod(np.arctan2(b, a), TWO_PI))
    gaps = np.diff(np.append(phi, phi[0] + TWO_PI))
    g = int(np.argmax(gaps))
    if gaps[g] - math.pi <= pad:
        return None
    first = phi[(g + 1) % len(phi)]
    last = phi[g]
    if last < first:
        last += TWO_PI
    start = math.fmod(last - math.pi / 2 + 2 * TWO_PI, TWO_PI)
    return start, start + (gaps[g] - math.pi)


def arc_count(p: VPolytope, f: Frame2):
    """Number of vertices whose normal cone meets the frame plane, and the arcs.

    Vertex v owns the directions c(theta) = cos(theta) u + sin(theta) v with
    c . (v - w) > 0 for every other vertex w. Pairs whose difference is
    invisible in the frame plane are treated as non-binding. No planar hull
    is involved, so this is an independent count of the shadow's vertices.
    """
    V = p.vertices
    if V.shape[1] != f.dim:
        raise InvalidDimension(f"polytope dimension {V.shape[1]} != frame dimension {f.dim}")
    if len(V) < 2:
        raise ValueError("arc_count needs at least two vertices")
    Y = V @ f.matrix
    scale = max(1.0, float(np.max(np.abs(Y))))
    arcs = []
    for i in range(len(Y)):
        D = Y[i] - Y
        D = np.delete(D, i, axis=0)
        keep = np.hypot(D[:, 0], D[:, 1]) > 1e-12 * scale
        arc = _vertex_arc(D[keep, 0], D[keep, 1], ARC_PAD)
        if arc is not None:
            arcs.append((i, arc[0], arc[1]))
    if not arcs:
        raise RuntimeError("no vertex owns any direction; numerically inconsistent input")
    arcs.sort(key=lambda t: t[1])
    return len(arcs), ArcDecomposition(f, tuple(arcs))


@dataclass(frozen=True)
class DeltaReport:
    delta: float
    witness: tuple  # (vertex index, ray index)
    per_cone_minima: tuple


def ray_distances(rays) -> np.ndarray:
    """Distance of each unit ray to the span of the others, by orthogonal projection."""
    R = np.asarray(rays, dtype=float)
    k = len(R)
    out = np.empty(k)
    for j in range(k):
        others = np.delete(R, j, axis=0)
        if len(others) == 0:
            out[j] = np.linalg.norm(R[j])
            continue
        coef, *_ = np.linalg.lstsq(others.T, R[j], rcond=None)
        out[j] = np.linalg.norm(R[j] - others.T @ coef)
    return out


def delta_of_polytope(p) -> DeltaReport:
    """Smallest distance from a unit ray of a normal cone to the span of that cone's other rays."""
    best = (math.inf, None)
    minima = []
    for cone in normal_cones(p):
        d = ray_distances(cone.rays)
        j = int(np.argmin(d))
        minima.append(float(d[j]))
        if d[j] < best[0]:
            best = (float(d[j]), (cone.vertex_index, j))
    return DeltaReport(best[0], best[1], tuple(minima))


# ------------------------------------------------------------ cone sampling

class ConeSample(NamedTuple):
    points: np.ndarray
    acceptance_rate: float


class _Cone:
    """A simplicial cone expressed in an orthonormal basis of its span."""

    def __init__(self, rays):
        R = np.atleast_2d(np.asarray(rays, dtype=float))
        k, n = R.shape
        if k > n:
            raise ValueError("more rays than ambient dimension")
        Q, _ = np.linalg.qr(R.T)
        self.Q = Q[:, :k]                 # n x k
        self.M = self.Q.T @ R.T           # k x k, ray coordinates in the span
        if abs(np.linalg.det(self.M)) <= 1e-12:
            raise ValueError("rays are not linearly independent")
        self.Minv = np.linalg.inv(self.M)
        self.k = k
        self.rays = R

    def normals(self) -> np.ndarray:
        """Unit normal (inside the span) of each hyperplane spanned by all rays but one."""
        W = self.Minv.copy()              # row j is orthogonal to every ray but j
        return W / np.linalg.norm(W, axis=1, keepdims=True)

    def heights(self) -> np.ndarray:
        """Distance of each unit ray to the hyperplane spanned by the others."""
        W = self.normals()
        return np.abs(np.sum(W * (self.M.T / np.linalg.norm(self.M.T, axis=1, keepdims=True)), axis=1))


def _sample_cone(rays, rng, count: int, surface: bool):
    if count < 1:
        raise ValueError("count must be >= 1")
    cone = _Cone(rays)
    k = cone.k
    chunks = []
    got = 0
    proposed = 0
    batch = max(1000, 4 * count)
    while got < count:
        g = rng.standard_normal((batch, k))
        y = g / np.linalg.norm(g, axis=1, keepdims=True)
        if not surface:
            y *= rng.uniform(size=(batch, 1)) ** (1.0 / k)
        lam = y @ cone.Minv.T
        ok = np.all(lam >= -CONE_TOL, axis=1)
        proposed += batch
        if ok.any():
            chunks.append(y[ok])
            got += int(ok.sum())
        if proposed >= 10_000_000 and got / proposed < 1e-6:
            raise ThinCone(f"acceptance rate {got / proposed:.2e} after {proposed} proposals")
        rate = max(got, 1) / proposed
        batch = int(min(1_000_000, max(1000, 1.2 * (count - got) / rate)))
    Y = np.vstack(chunks)[:count]
    return ConeSample(Y @ cone.Q.T, got / proposed)


def sample_cone_ball(rays, rng: np.random.Generator, count: int) -> ConeSample:
    """Uniform points of cone(rays) intersected with the unit ball, by rejection.

    When the rays span a proper subspace the ball is that subspace's ball.
    """
    return _sample_cone(rays, rng, count, surface=False)


def sample_cone_sphere(rays, rng: np.random.Generator, count: int) -> ConeSample:
    """Uniform points of cone(rays) intersected with the unit sphere, by rejection."""
    return _sample_cone(rays, rng, count, surface=True)


class SlabCheck(NamedTuple):
    empirical: float
    bound: float
    std_error: float
    height: float


def validate_slab_probability(rays, hyperplane_index: int, eps: float, trials: int,
                              rng: np.random.Generator) -> SlabCheck:
    """Probability that a uniform point of cone cap the ball lies within eps of a facet hyperplane.

    The hyperplane is spanned by every ray except ``hyperplane_index``; with
    h the distance of that ray to it and k rays, the bound is
    ((1 + eps)^k - 1) / h.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    cone = _Cone(rays)
    if cone.k < 2:
        raise ValueError("need at least two rays")
    w = cone.Q @ cone.normals()[hyperplane_index]
    h = float(cone.heights()[hyperplane_index])
    pts = sample_cone_ball(rays, rng, trials).points
    hits = np.abs(pts @ w) <= eps
    p_hat = float(hits.mean())
    se = math.sqrt(max(p_hat * (1 - p_hat), 0.0) / trials)
    bound = ((1 + eps) ** cone.k - 1) / h
    return SlabCheck(p_hat, bound, se, h)


class ArrangementCheck(NamedTuple):
    empirical: float
    bound: float
    std_error: float
    height: float


def arrangement_distances(rays, points) -> np.ndarray:
    cone = _Cone(rays)
    W = cone.normals() @ cone.Q.T      # k x n
    return np.min(np.abs(np.asarray(points) @ W.T), axis=1)


def validate_arrangement_distance(rays, trials: int, rng: np.random.Generator,
                                  surface: str = "sphere") -> ArrangementCheck:
    """Mean distance from a uniform point of the cone to its facet hyperplanes.

    ``surface`` selects the unit sphere or the unit ball. The bound is
    h / (8 k^2) with h the smallest distance of a unit ray to the
    hyperplane spanned by the remaining rays, computed from the rays.
    """
    if surface not in ("sphere", "ball"):
        raise ValueError("surface must be 'sphere' or 'ball'")
    cone = _Cone(rays)
    if cone.k < 2:
        raise ValueError("need at least two rays")
    sampler = sample_cone_sphere if surface == "sphere" else sample_cone_ball
    pts = sampler(rays, rng, trials).points
    d = arrangement_distances(rays, pts)
    h = float(cone.heights().min())
    return ArrangementCheck(float(d.mean()), h / (8 * cone.k ** 2), float(d.std(ddof=1) / math.sqrt(trials)), h)


def augmented_permutahedron_delta(n: int) -> float:
    """Exact delta of the augmented permutahedron: min(1, min_k sqrt(n / (2 k (n-k))))."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return min(1.0, min(math.sqrt(n / (2.0 * k * (n - k))) for k in range(1, n)))


def augmented_permutahedron_delta_sum_form(n: int) -> float:
    """min(1, min_k n / (sqrt2 ((n-k) sqrt k + k sqrt(n-k)))).

    This adds the norms of two orthogonal components of the cut normal
    instead of taking the norm of their sum, so it is a strict lower bound
    on the exact value for n >= 2.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    return min(1.0, min(n / (math.sqrt(2.0) * ((n - k) * math.sqrt(k) + k * math.sqrt(n - k)))
                        for k in range(1, n)))

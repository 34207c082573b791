"""Polytope representations, named families, edge graphs and normal cones."""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constants import CONE_TOL, DEDUP_TOL, RANK_TOL
from .geometry import InvalidDimension, gdiam
from .lp import LinearProgram, is_edge, is_extreme, solve

MAX_ZONOTOPE_GENERATORS = 20


class NotSimple(ValueError):
    pass


class SizeCapExceeded(ValueError):
    pass


class VPolytope:
    """Convex hull of a finite vertex list.

    ``vertices`` are assumed to be distinct extreme points; `from_points`
    enforces that, family constructors emit them by construction. The edge
    graph is computed on first access (one LP per vertex pair) unless it
    was supplied.
    """

    def __init__(self, vertices, label: str = "", edges=None):
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        if V.size == 0:
            raise ValueError("a polytope needs at least one vertex")
        if not np.all(np.isfinite(V)):
            raise ValueError("non-finite vertex coordinates")
        V.setflags(write=False)
        self.vertices = V
        self.label = label
        self._edges = None if edges is None else _normalize_edges(edges)
        self._lock = threading.Lock()

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def edges(self) -> list[tuple[int, int]]:
        with self._lock:
            if self._edges is None:
                k = self.num_vertices
                self._edges = [(i, j) for i in range(k) for j in range(i + 1, k)
                               if is_edge(self.vertices, i, j)]
            return self._edges

    @property
    def has_edges(self) -> bool:
        return self._edges is not None

    def neighbors(self) -> list[list[int]]:
        nb = [[] for _ in range(self.num_vertices)]
        for i, j in self.edges:
            nb[i].append(j)
            nb[j].append(i)
        return nb

    def transformed(self, matrix, label: Optional[str] = None) -> "VPolytope":
        """Image under x -> matrix @ x; the edge graph carries over."""
        R = np.asarray(matrix, dtype=float)
        return VPolytope(self.vertices @ R.T, label or self.label,
                         edges=None if self._edges is None else list(self._edges))

    def __repr__(self):
        return f"VPolytope({self.label!r}, n={self.dim}, vertices={self.num_vertices})"


def _normalize_edges(edges):
    return sorted({(min(int(i), int(j)), max(int(i), int(j))) for i, j in edges})


@dataclass
class Zonotope:
    """Minkowski sum ``base + sum_i [0, g_i]``."""

    generators: np.ndarray
    base: np.ndarray = None
    label: str = ""

    def __post_init__(self):
        G = np.atleast_2d(np.asarray(self.generators, dtype=float))
        if G.size == 0:
            raise ValueError("a zonotope needs at least one generator")
        if np.any(np.linalg.norm(G, axis=1) == 0):
            raise ValueError("zero generator")
        self.generators = G
        self.base = np.zeros(G.shape[1]) if self.base is None else np.asarray(self.base, dtype=float)
        if self.base.shape != (G.shape[1],):
            raise InvalidDimension("base and generators disagree on dimension")

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def parallel_classes(self, tol: float = 1e-12) -> list[list[int]]:
        """Group generator indices by the line they span."""
        units = self.generators / np.linalg.norm(self.generators, axis=1, keepdims=True)
        classes: list[list[int]] = []
        reps: list[np.ndarray] = []
        for i, u in enumerate(units):
            for cls, r in zip(classes, reps):
                if np.linalg.norm(np.outer(u, r) - np.outer(r, u)) <= tol * 2:
                    cls.append(i)
                    break
            else:
                classes.append([i])
                reps.append(u)
        return classes

    @property
    def has_parallel(self) -> bool:
        return len(self.parallel_classes()) < len(self.generators)


@dataclass(frozen=True)
class NormalCone:
    vertex_index: int
    rays: np.ndarray  # (d, n), unit rows

    def __post_init__(self):
        R = np.asarray(self.rays, dtype=float)
        if not np.allclose(np.linalg.norm(R, axis=1), 1.0, atol=1e-12, rtol=0):
            raise ValueError("normal cone rays must be unit vectors")
        s = np.linalg.svd(R, compute_uv=False)
        if len(R) > R.shape[1] or s[-1] <= 1e-12:
            raise ValueError("normal cone rays are not linearly independent")
        object.__setattr__(self, "rays", R)

    def contains(self, x, tol: float = CONE_TOL) -> bool:
        """Membership via nonnegative ray coordinates (x must lie in the ray span)."""
        lam, *_ = np.linalg.lstsq(self.rays.T, np.asarray(x, dtype=float), rcond=None)
        resid = np.linalg.norm(self.rays.T @ lam - x)
        return bool(resid <= 1e-9 * max(1.0, np.linalg.norm(x)) and np.all(lam >= -tol))


@dataclass(frozen=True)
class EdgeStats:
    m: float
    M: float
    count: Optional[int]  # None for zonotopes, whose edges are not enumerated

    def __post_init__(self):
        if not (0 < self.m <= self.M):
            raise ValueError(f"inconsistent edge lengths m={self.m}, M={self.M}")


# ---------------------------------------------------------------- families

def hypercube(n: int) -> VPolytope:
    if not 1 <= n <= 16:
        raise ValueError(f"hypercube dimension must be in [1, 16], got {n}")
    k = 1 << n
    idx = np.arange(k)
    V = ((idx[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1).astype(float)
    edges = [(i, i | (1 << b)) for i in range(k) for b in range(n) if not i & (1 << b)]
    return VPolytope(V, f"hypercube({n})", edges=edges)


def _is_single_cycle(perm) -> bool:
    n = len(perm)
    seen = [False] * n
    nontrivial = 0
    for s in range(n):
        if seen[s]:
            continue
        length = 0
        j = s
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length > 1:
            nontrivial += 1
    return nontrivial == 1


def birkhoff_adjacent(p, q) -> bool:
    """Permutation matrices P, Q span an edge of B_n iff P Q^-1 is one cycle."""
    n = len(p)
    qinv = [0] * n
    for i, qi in enumerate(q):
        qinv[qi] = i
    return _is_single_cycle([p[qinv[i]] for i in range(n)])


def birkhoff(n: int) -> VPolytope:
    """Vectorised n x n permutation matrices (row-major) with their edge graph."""
    if not 2 <= n <= 5:
        raise ValueError(f"Birkhoff order must be in [2, 5], got {n}")
    perms = list(itertools.permutations(range(n)))
    V = np.zeros((len(perms), n * n))
    for a, p in enumerate(perms):
        V[a, [i * n + p[i] for i in range(n)]] = 1.0
    edges = [(a, b) for a in range(len(perms)) for b in range(a + 1, len(perms))
             if birkhoff_adjacent(perms[a], perms[b])]
    return VPolytope(V, f"birkhoff({n})", edges=edges)


def permutahedron(n: int) -> Zonotope:
    """Generators e_i - e_j (i < j); base (1, ..., n) so vertices are permutations of it."""
    if not 2 <= n <= 7:
        raise ValueError(f"permutahedron order must be in [2, 7], got {n}")
    G = []
    for i, j in itertools.combinations(range(n), 2):
        g = np.zeros(n)
        g[i], g[j] = 1.0, -1.0
        G.append(g)
    return Zonotope(np.array(G), np.arange(1.0, n + 1), f"permutahedron({n})")


def augmented_permutahedron(n: int) -> Zonotope:
    """Permutahedron plus a unit-coefficient all-ones generator (a prism, simple and full-dimensional)."""
    z = permutahedron(n)
    G = np.vstack([z.generators, np.ones(n)])
    return Zonotope(G, z.base, f"augmented_permutahedron({n})")


def augmented_permutahedron_facet_matrix(n: int) -> np.ndarray:
    """Integer outer facet normals of the augmented permutahedron.

    Side facets have normals n*e_S - |S|*1 for nonempty proper S; the two
    caps have normals +1 and -1.
    """
    rows = []
    for size in range(1, n):
        for S in itertools.combinations(range(n), size):
            r = -size * np.ones(n, dtype=int)
            r[list(S)] += n
            rows.append(r)
    rows.append(np.ones(n, dtype=int))
    rows.append(-np.ones(n, dtype=int))
    return np.array(rows, dtype=int)


def _perturbed_unit(axis: int, n: int, eps: float, rng: np.random.Generator) -> np.ndarray:
    p = rng.standard_normal(n)
    p[axis] = 0.0
    norm = np.linalg.norm(p)
    if norm > 0:
        # radius bounded away from 0 keeps distinct copies visibly non-parallel
        p *= eps * rng.uniform(0.5, 1.0) / norm
    p[axis] = 1.0
    return p / np.linalg.norm(p)


def zn_parallel(k: int, eps: float, rng: np.random.Generator, n: int = 3) -> Zonotope:
    """k unit generators, each e_1 tilted by an orthogonal perturbation of norm <= eps."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 < eps <= 0.1:
        raise ValueError(f"eps must lie in (0, 0.1], got {eps}")
    if n < 2:
        raise InvalidDimension("zn_parallel needs ambient dimension >= 2")
    G = np.array([_perturbed_unit(0, n, eps, rng) for _ in range(k)])
    return Zonotope(G, np.zeros(n), f"zn_parallel(k={k}, eps={eps}, n={n})")


def zn_basis(n: int, eps: float, rng: np.random.Generator) -> Zonotope:
    """Standard basis generators, plus n perturbed unit copies when eps > 0."""
    if n < 2:
        raise ValueError("zn_basis needs n >= 2")
    if not 0 <= eps <= 0.1:
        raise ValueError(f"eps must lie in [0, 0.1], got {eps}")
    G = list(np.eye(n))
    if eps > 0:
        G += [_perturbed_unit(i, n, eps, rng) for i in range(n)]
    return Zonotope(np.array(G), np.zeros(n), f"zn_basis(n={n}, eps={eps})")


def dedupe_points(points, tol: float = DEDUP_TOL) -> np.ndarray:
    P = np.atleast_2d(np.asarray(points, dtype=float))
    keep: list[int] = []
    for i in range(len(P)):
        if not any(np.max(np.abs(P[i] - P[j])) <= tol for j in keep):
            keep.append(i)
    return P[keep]


def from_points(points, label: str = "") -> VPolytope:
    """Convex hull of arbitrary points: deduplicate, then keep LP-certified extreme points."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.size == 0:
        raise ValueError("from_points needs at least one point")
    P = dedupe_points(P)
    ext = [i for i in range(len(P)) if is_extreme(P, i)]
    return VPolytope(P[ext], label)


def _realizable(dirs: np.ndarray, signs: list[int]):
    """Witness c with s_j * (c . d_j) >= 1 for all j, or None."""
    n = dirs.shape[1]
    cons = [(s * dirs[j], ">=", 1.0) for j, s in enumerate(signs)]
    res = solve(LinearProgram(cons))
    if not res.feasible:
        return None
    return res.x if res.x is not None else np.zeros(n)


def zonotope_sign_vectors(z: Zonotope):
    """Realisable sign vectors over parallel classes, each with a witness objective.

    Depth-first over classes; a prefix that no objective realises is
    pruned together with all its extensions. The parent witness is reused
    when it already fixes the next sign.
    """
    classes = z.parallel_classes()
    dirs = np.array([z.generators[c[0]] / np.linalg.norm(z.generators[c[0]]) for c in classes])
    q = len(classes)
    out = []
    stack = [([], None)]
    while stack:
        signs, w = stack.pop()
        t = len(signs)
        if t == q:
            out.append((tuple(signs), w))
            continue
        d = dirs[t]
        children = []
        for s in (1, -1):
            cand = None
            if w is not None:
                val = s * float(w @ d)
                if val > 1e-9:
                    cand = w * max(1.0, 1.0 / val)
            if cand is None:
                cand = _realizable(dirs[:t + 1], signs + [s])
            if cand is not None:
                children.append((signs + [s], cand))
        stack.extend(reversed(children))
    return classes, dirs, out


def zonotope_vertices(z: Zonotope) -> VPolytope:
    """Vertex set (with edge graph) of a zonotope by sign-vector enumeration."""
    g = len(z.generators)
    if g > MAX_ZONOTOPE_GENERATORS:
        raise SizeCapExceeded(f"{g} generators exceeds the cap of {MAX_ZONOTOPE_GENERATORS}")
    classes, dirs, svs = zonotope_sign_vectors(z)
    G = z.generators
    orient = [[1 if G[i] @ dirs[j] > 0 else -1 for i in cls] for j, cls in enumerate(classes)]
    V = []
    for signs, _ in svs:
        v = z.base.copy()
        for j, cls in enumerate(classes):
            for i, o in zip(cls, orient[j]):
                if o * signs[j] > 0:
                    v += G[i]
        V.append(v)
    lookup = {s: a for a, (s, _) in enumerate(svs)}
    edges = []
    for a, (s, _) in enumerate(svs):
        for j in range(len(classes)):
            if s[j] > 0:
                flipped = s[:j] + (-1,) + s[j + 1:]
                b = lookup.get(flipped)
                if b is not None:
                    edges.append((a, b))
    return VPolytope(np.array(V), z.label, edges=edges)


def zonotope_edge_stats(z: Zonotope) -> EdgeStats:
    """Every edge is a translate of one parallel class summed; lengths add within a class."""
    classes = z.parallel_classes()
    norms = np.linalg.norm(z.generators, axis=1)
    lengths = [float(sum(norms[i] for i in cls)) for cls in classes]
    return EdgeStats(min(lengths), max(lengths), None)


def edge_stats(p) -> EdgeStats:
    if isinstance(p, Zonotope):
        return zonotope_edge_stats(p)
    if p.num_vertices < 2:
        raise ValueError("a single point has no edges")
    E = p.edges
    V = p.vertices
    lengths = np.linalg.norm(V[[i for i, _ in E]] - V[[j for _, j in E]], axis=1)
    return EdgeStats(float(lengths.min()), float(lengths.max()), len(E))


def polytope_gdiam(p) -> float:
    if isinstance(p, Zonotope):
        from .shadow import zonotope_diameter
        return zonotope_diameter(p)
    return gdiam(p.vertices)


def affine_frame(points, tol: float = RANK_TOL):
    """(origin, B) with B an orthonormal basis (n x d) of the affine hull's direction space."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    origin = P.mean(axis=0)
    X = P - origin
    if len(P) == 1:
        return origin, np.zeros((P.shape[1], 0))
    _, s, Vt = np.linalg.svd(X, full_matrices=False)
    scale = max(1.0, float(np.max(np.abs(P))))
    d = int(np.sum(s > tol * scale))
    return origin, Vt[:d].T


def affine_dimension(p: VPolytope) -> int:
    return affine_frame(p.vertices)[1].shape[1]


def normal_cones(p) -> list[NormalCone]:
    """Normal cone of every vertex of a simple polytope.

    Works in the affine hull: with edge directions d_i = w_i - v (rows of
    D), the rays are the columns of -D^-1, normalised, mapped back into
    ambient coordinates. They therefore span the direction space of the
    affine hull rather than all of R^n when the polytope is flat.
    """
    if isinstance(p, Zonotope):
        p = zonotope_vertices(p)
    origin, B = affine_frame(p.vertices)
    d = B.shape[1]
    if d == 0:
        raise ValueError("a point has no proper normal cones")
    Y = (p.vertices - origin) @ B
    cones = []
    for v, nbrs in enumerate(p.neighbors()):
        if len(nbrs) != d:
            raise NotSimple(f"vertex {v} has {len(nbrs)} neighbours in a {d}-dimensional polytope")
        D = Y[nbrs] - Y[v]
        Dn = D / np.linalg.norm(D, axis=1, keepdims=True)
        if abs(np.linalg.det(Dn)) <= 1e-12:
            raise ValueError(f"edge directions at vertex {v} are rank deficient")
        R = -np.linalg.inv(D)
        R /= np.linalg.norm(R, axis=0, keepdims=True)
        cones.append(NormalCone(v, (B @ R).T))
    return cones

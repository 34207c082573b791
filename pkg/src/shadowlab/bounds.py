"""Closed-form constants and explicit shadow-size bounds, checked against measurements."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .geometry import sample_frames
from .polytope import SizeCapExceeded, VPolytope, Zonotope, edge_stats, polytope_gdiam
from .shadow import as_vpolytope, estimate_shadow_size

MAX_SUBMATRICES = 1_000_000
NONZERO_COORD = 1e-12


def _check_dim(n):
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n}")
    return int(n)


# ---------------------------------------------------- first coordinate of a uniform unit vector

def abs_coordinate_density_constant(n: int) -> float:
    """Normaliser of t -> (1 - t^2)^((n-3)/2) on [-1, 1]."""
    n = _check_dim(n)
    return math.exp(gammaln(n / 2) - gammaln((n - 1) / 2)) / math.sqrt(math.pi)


def coordinate_density(t, n: int):
    """Density of the first coordinate of a uniform point on the unit sphere in R^n."""
    t = np.asarray(t, dtype=float)
    c = abs_coordinate_density_constant(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = c * (1.0 - t * t) ** ((n - 3) / 2)
    return np.where(np.abs(t) < 1, f, 0.0)


def density_mass(n: int) -> float:
    """Quadrature of `coordinate_density` over [-1, 1].

    Substituting t = sin(theta) removes the endpoint singularity at n = 2
    and leaves the smooth integrand c cos(theta)^(n-2).
    """
    n = _check_dim(n)
    c = abs_coordinate_density_constant(n)
    val, _ = integrate.quad(lambda th: c * math.cos(th) ** (n - 2), -math.pi / 2, math.pi / 2,
                            points=[0.0], epsabs=1e-14, epsrel=1e-13, limit=200)
    return float(val)


def expected_abs_coordinate(n: int) -> float:
    """E|x_1| for x uniform on the unit sphere in R^n."""
    n = _check_dim(n)
    return 2.0 / (n - 1) * abs_coordinate_density_constant(n)


def chu_bracket(n: int, shift: int = 0):
    """Gamma-ratio bracket for E|x_1|, via Chu's inequality.

    The inequality sqrt((2m-1)(m-1)/((2m-2)*2)) <= ratio <= sqrt((2m-2)(m-1)/((2m-3)*2))
    is applied with m = n - shift, where the ratio is Gamma(n/2)/Gamma((n-1)/2).
    ``shift=0`` is the literal form, which does not in fact bracket that ratio;
    ``shift=1`` is the correctly indexed version (valid for n >= 3), see the notes.
    """
    n = _check_dim(n)
    m = n - shift
    if m < 2:
        raise ValueError(f"bracket needs n - shift >= 2, got {m}")
    lo_sq = (2 * m - 1) * (m - 1) / ((2 * m - 2) * 2)
    hi_sq = (2 * m - 2) * (m - 1) / ((2 * m - 3) * 2)
    k = 2.0 / ((n - 1) * math.sqrt(math.pi))
    return k * math.sqrt(lo_sq), k * math.sqrt(hi_sq)


def projected_length_constant(n: int) -> float:
    """E||(x_1, x_2)|| for x uniform on the unit sphere in R^n: the mean length
    of a unit segment under a random 2-frame projection."""
    n = _check_dim(n)
    return math.exp(gammaln(1.5) + gammaln(n / 2) - gammaln((n + 1) / 2))


def c_n_bracket(n: int):
    """Norm-comparison bracket (sqrt(2) E|x_1|, 2 E|x_1|) for the projected-length constant."""
    e = expected_abs_coordinate(n)
    return math.sqrt(2.0) * e, 2.0 * e


def estimate_projected_length(n: int, frames: int, rng: np.random.Generator, chunk: int = 100_000):
    """Monte Carlo mean and std error of ||(u.e_1, v.e_1)|| over random 2-frames."""
    n = _check_dim(n)
    if frames < 2:
        raise ValueError("need at least two frames")
    vals = []
    left = frames
    while left:
        c = min(chunk, left)
        U, V = sample_frames(rng, n, c)
        vals.append(np.hypot(U[:, 0], V[:, 0]))
        left -= c
    x = np.concatenate(vals)
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(frames))


# ------------------------------------------------------------------- reports

@dataclass
class BoundReport:
    name: str
    lower: float
    estimate: float
    std_error: float
    upper: float
    details: dict = field(default_factory=dict)

    @property
    def satisfied(self) -> bool:
        return bool(self.lower - 3 * self.std_error <= self.estimate <= self.upper + 3 * self.std_error)

    @property
    def slack_ratios(self):
        lo = self.estimate / self.lower if self.lower > 0 else math.inf
        hi = self.upper / self.estimate if self.estimate > 0 else math.inf
        return lo, hi

    def as_dict(self) -> dict:
        lo, hi = self.slack_ratios
        return {
            "name": self.name,
            "lower": self.lower,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "upper": self.upper,
            "satisfied": self.satisfied,
            "slack_lower": lo,
            "slack_upper": hi,
            **self.details,
        }


def _estimate(p, trials, seed, threads):
    return estimate_shadow_size(p, trials, seed, exact=True, threads=threads)


def check_shadow_sandwich(p, trials: int, seed: int, threads: int = 1) -> BoundReport:
    """2 gdiam/M <= E[shadow size] <= pi gdiam / (C_n m), with C_n at its bracket's low end."""
    es = edge_stats(p)
    g = polytope_gdiam(p)
    n = p.dim
    c_low = c_n_bracket(n)[0] if n >= 2 else 1.0
    est = _estimate(p, trials, seed, threads)
    return BoundReport(
        "theorem_1_1",
        2 * g / es.M,
        est.mean,
        est.std_error,
        math.pi * g / (c_low * es.m),
        {"gdiam": g, "m": es.m, "M": es.M, "trials": trials,
         "degenerate_count": est.degenerate_count, "c_n_low": c_low,
         "c_n": projected_length_constant(n)},
    )


@dataclass(frozen=True)
class KMParameters:
    gamma: float      # largest nonzero vertex coordinate
    delta_km: float   # smallest nonzero vertex coordinate

    def __post_init__(self):
        if not 0 < self.delta_km <= self.gamma:
            raise ValueError("need 0 < delta_km <= gamma")


class NotStandardForm(ValueError):
    pass


def km_parameters(p) -> KMParameters:
    V = as_vpolytope(p).vertices
    if np.any(V < -NONZERO_COORD):
        raise NotStandardForm("a vertex has a negative coordinate")
    nz = np.abs(V[np.abs(V) > NONZERO_COORD])
    if nz.size == 0:
        raise ValueError("no nonzero vertex coordinate")
    return KMParameters(float(nz.max()), float(nz.min()))


def km_bound(p, trials: int, seed: int, threads: int = 1) -> BoundReport:
    """Upper bound pi sqrt(n) gamma / (C_n delta_km) from gdiam <= sqrt(n) gamma and m >= delta_km.

    The edge-length step holds for standard-form polytopes; ``edge_bound_holds``
    records whether it held on this input.
    """
    km = km_parameters(p)
    n = p.dim
    es = edge_stats(p)
    g = polytope_gdiam(p)
    est = _estimate(p, trials, seed, threads)
    upper = math.pi * math.sqrt(n) * km.gamma / (c_n_bracket(n)[0] * km.delta_km)
    return BoundReport("km", 2 * g / es.M, est.mean, est.std_error, upper,
                       {"gamma": km.gamma, "delta_km": km.delta_km,
                        "edge_bound_holds": bool(es.m >= km.delta_km * (1 - 1e-9))})


class NotLattice(ValueError):
    pass


def lattice_bound(p, k: int, trials: int, seed: int, threads: int = 1) -> BoundReport:
    """Upper bound pi sqrt(n) k / C_n for vertices in {0, ..., k}^n (edges have length >= 1)."""
    V = as_vpolytope(p).vertices
    if np.any(np.abs(V - np.round(V)) > 1e-9) or V.min() < -1e-9 or V.max() > k + 1e-9:
        raise NotLattice(f"vertices are not all in [0,{k}]^n with integer coordinates")
    n = p.dim
    es = edge_stats(p)
    g = polytope_gdiam(p)
    est = _estimate(p, trials, seed, threads)
    upper = math.pi * math.sqrt(n) * k / c_n_bracket(n)[0]
    return BoundReport("lattice", 2 * g / es.M, est.mean, est.std_error, upper, {"k": k, "m": es.m})


class RationalReconstructionError(ValueError):
    pass


def rational_coordinates(V, alpha: int, beta: int):
    """Exact fractions for every coordinate, denominators <= beta and |numerators| <= alpha."""
    out = []
    for x in np.asarray(V, dtype=float).ravel():
        f = Fraction(float(x)).limit_denominator(beta)
        if abs(float(f) - x) > 1e-9 or abs(f.numerator) > alpha:
            raise RationalReconstructionError(f"{x!r} is not p/q with |p| <= {alpha}, q <= {beta}")
        out.append(f)
    return out


def rational_bound(p, alpha: int, beta: int, trials: int, seed: int, threads: int = 1) -> BoundReport:
    """Upper bound pi sqrt(n) alpha beta^2 / C_n from gdiam <= sqrt(n) alpha and m >= 1/beta^2."""
    V = as_vpolytope(p).vertices
    rational_coordinates(V, alpha, beta)
    n = p.dim
    es = edge_stats(p)
    g = polytope_gdiam(p)
    est = _estimate(p, trials, seed, threads)
    upper = math.pi * math.sqrt(n) * alpha * beta ** 2 / c_n_bracket(n)[0]
    return BoundReport("rational", 2 * g / es.M, est.mean, est.std_error, upper,
                       {"alpha": alpha, "beta": beta, "m": es.m,
                        "edge_bound_holds": bool(es.m >= 1 / beta ** 2 - 1e-12)})


# ---------------------------------------------------------------- subdeterminants

def bareiss_det(M) -> int:
    """Exact integer determinant by fraction-free elimination."""
    A = [[int(x) for x in row] for row in M]
    k = len(A)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(k - 1):
        if A[c][c] == 0:
            for r in range(c + 1, k):
                if A[r][c] != 0:
                    A[c], A[r] = A[r], A[c]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(c + 1, k):
            for j in range(c + 1, k):
                A[i][j] = (A[i][j] * A[c][c] - A[i][c] * A[c][j]) // prev
        prev = A[c][c]
    return sign * A[k - 1][k - 1]


def _bareiss_batch(B: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of int64 matrices (caller guarantees no overflow)."""
    B = B.copy()
    cnt, k, _ = B.shape
    sign = np.ones(cnt, dtype=np.int64)
    prev = np.ones(cnt, dtype=np.int64)
    alive = np.ones(cnt, dtype=bool)
    rows = np.arange(cnt)
    for c in range(k - 1):
        nz = B[:, c:, c] != 0
        has = nz.any(axis=1)
        alive &= has
        piv = c + np.argmax(nz, axis=1)
        swap = alive & (piv != c)
        if swap.any():
            r = rows[swap]
            tmp = B[r, c].copy()
            B[r, c] = B[r, piv[swap]]
            B[r, piv[swap]] = tmp
            sign[swap] = -sign[swap]
        p = B[:, c, c]
        safe = np.where(alive, prev, 1)
        sub = (B[:, c + 1:, c + 1:] * p[:, None, None]
               - B[:, c + 1:, c, None] * B[:, c, None, c + 1:])
        B[:, c + 1:, c + 1:] = sub // safe[:, None, None]
        prev = np.where(alive, p, 1)
    return np.where(alive, sign * B[:, k - 1, k - 1], 0)


def submatrix_count(rows: int, cols: int) -> int:
    return sum(math.comb(rows, k) * math.comb(cols, k) for k in range(1, min(rows, cols) + 1))


def max_abs_subdeterminant(A) -> int:
    """Largest |det| over all square submatrices, by exhaustive exact enumeration."""
    A = np.asarray(A)
    if A.ndim != 2 or A.size == 0:
        raise ValueError("need a non-empty 2-d integer matrix")
    if not np.all(np.asarray(A, dtype=float) == np.round(np.asarray(A, dtype=float))):
        raise ValueError("matrix entries must be integers")
    r, c = A.shape
    total = submatrix_count(r, c)
    if total > MAX_SUBMATRICES:
        raise SizeCapExceeded(f"{total} square submatrices exceeds the cap of {MAX_SUBMATRICES}")
    Ai = np.asarray(A, dtype=object).astype(int) if A.dtype == object else A.astype(np.int64)
    best = int(np.max(np.abs(Ai)))
    # every Bareiss intermediate is a minor, bounded by Hadamard; products need twice that
    col_norm = float(np.max(np.linalg.norm(np.asarray(A, dtype=float), axis=0)))
    for k in range(2, min(r, c) + 1):
        hadamard = col_norm ** k
        row_sets = list(itertools.combinations(range(r), k))
        col_sets = list(itertools.combinations(range(c), k))
        if hadamard ** 2 < 2.0 ** 62:
            Ri = np.array(row_sets)
            for cs in col_sets:
                blk = Ai[:, list(cs)].astype(np.int64)[Ri]  # (len(row_sets), k, k)
                best = max(best, int(np.max(np.abs(_bareiss_batch(blk)))))
        else:
            for rs in row_sets:
                for cs in col_sets:
                    best = max(best, abs(bareiss_det(Ai[np.ix_(rs, cs)].tolist())))
    return best


def check_delta_subdeterminant_relation(p, A) -> BoundReport:
    """delta >= 1 / (n Delta^2), with delta from the normal fan of p and Delta from A."""
    from .dualfan import delta_of_polytope

    A = np.asarray(A)
    d = delta_of_polytope(p).delta
    big = max_abs_subdeterminant(A)
    n = A.shape[1]
    return BoundReport("delta_Delta", 1.0 / (n * big ** 2), d, 0.0, 1.0, {"Delta": big, "n": n})

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shadowlab.dualfan import (
    ThinCone,
    arc_count,
    arrangement_distances,
    augmented_permutahedron_delta,
    augmented_permutahedron_delta_sum_form,
    delta_of_polytope,
    ray_distances,
    sample_cone_ball,
    sample_cone_sphere,
    validate_arrangement_distance,
    validate_slab_probability,
)
from shadowlab.geometry import InvalidDimension, hull2d, rng_stream, sample_frame
from shadowlab.polytope import (
    NotSimple,
    VPolytope,
    augmented_permutahedron,
    birkhoff,
    hypercube,
    normal_cones,
    zonotope_vertices,
)
from shadowlab.shadow import shadow


def _unit(rows):
    R = np.array(rows, dtype=float)
    return R / np.linalg.norm(R, axis=1, keepdims=True)


def test_segment_gives_two_half_circles():
    seg = VPolytope([[0, 0, 0], [1, 2, 3]])
    c, arcs = arc_count(seg, sample_frame(rng_stream(1), 3))
    assert c == 2
    assert all(e - s == pytest.approx(math.pi) for _, s, e in arcs.arcs)


@pytest.mark.parametrize("P", [hypercube(3), hypercube(4), birkhoff(3),
                               zonotope_vertices(augmented_permutahedron(3))])
def test_arc_count_matches_primal_and_covers_circle(P):
    for t in range(40):
        f = sample_frame(rng_stream(2, t), P.dim)
        c, arcs = arc_count(P, f)
        assert c == shadow(P, f).num_vertices
        assert arcs.total_measure == pytest.approx(2 * math.pi, abs=1e-6)
        assert arcs.inscribed_perimeter() <= 2 * math.pi + 1e-9
        # consecutive arcs belong to different vertices and leave no gaps
        A = arcs.arcs
        for (i, s, e), (j, s2, _) in zip(A, A[1:] + (A[0],)):
            assert i != j
            gap = (s2 - e) % (2 * math.pi)
            assert min(gap, 2 * math.pi - gap) < 1e-9


def test_augmented_permutahedron3_always_eight():
    P = zonotope_vertices(augmented_permutahedron(3))
    for t in range(100):
        assert arc_count(P, sample_frame(rng_stream(3, t), 3))[0] == 8


def test_arc_count_validation():
    with pytest.raises(ValueError):
        arc_count(VPolytope([[0.0, 0.0]]), sample_frame(rng_stream(0), 2))
    with pytest.raises(InvalidDimension):
        arc_count(hypercube(3), sample_frame(rng_stream(0), 4))


def test_arc_endpoints_are_exact_crossings():
    # at an arc boundary the two neighbouring vertices tie for the objective
    P = hypercube(3)
    f = sample_frame(rng_stream(4), 3)
    _, arcs = arc_count(P, f)
    A = arcs.arcs
    for (i, _, e), (j, _, _) in zip(A, A[1:] + (A[0],)):
        c = math.cos(e) * f.u + math.sin(e) * f.v
        assert c @ P.vertices[i] == pytest.approx(c @ P.vertices[j], abs=1e-9)


def test_delta_hypercube_is_one():
    for n in (2, 3, 4):
        assert delta_of_polytope(hypercube(n)).delta == pytest.approx(1.0, abs=1e-12)


def test_delta_of_augmented_permutahedra():
    # orthogonal rays at n=2, then sqrt(n / (2k(n-k))) minimised over k
    assert delta_of_polytope(augmented_permutahedron(2)).delta == pytest.approx(1.0, abs=1e-9)
    for n in (3, 4, 5):
        rep = delta_of_polytope(augmented_permutahedron(n))
        assert rep.delta == pytest.approx(augmented_permutahedron_delta(n), abs=1e-9)
        assert augmented_permutahedron_delta_sum_form(n) < rep.delta
        assert 0 < rep.delta <= 1
        assert min(rep.per_cone_minima) == rep.delta


def test_delta_uses_ray_distance_by_projection():
    R = _unit([[1, 0], [1, 1]])
    d = ray_distances(R)
    assert d == pytest.approx([math.sqrt(0.5), math.sqrt(0.5)])


@given(seed=st.integers(0, 2**32))
@settings(max_examples=10, deadline=None)
def test_delta_rotation_invariant(seed):
    P = zonotope_vertices(augmented_permutahedron(3))
    Q, _ = np.linalg.qr(rng_stream(seed).standard_normal((3, 3)))
    assert delta_of_polytope(P.transformed(Q)).delta == pytest.approx(delta_of_polytope(P).delta, abs=1e-9)


def test_delta_rejects_non_simple():
    with pytest.raises(NotSimple):
        delta_of_polytope(birkhoff(4))


def test_quadrant_ball_sampling():
    rays = np.eye(2)
    s = sample_cone_ball(rays, rng_stream(5), 20_000)
    assert s.acceptance_rate == pytest.approx(0.25, abs=0.01)
    X = s.points
    assert np.all(np.linalg.norm(X, axis=1) <= 1 + 1e-12) and np.all(X >= -1e-12)
    diff = X[:, 0] - X[:, 1]
    assert abs(diff.mean()) <= 3 * diff.std(ddof=1) / math.sqrt(len(diff))


def test_octant_sphere_sampling():
    s = sample_cone_sphere(np.eye(3), rng_stream(6), 20_000)
    assert s.acceptance_rate == pytest.approx(1 / 8, abs=0.01)
    assert np.allclose(np.linalg.norm(s.points, axis=1), 1, atol=1e-12)


def test_ball_radius_distribution_in_cone():
    # uniform in the 3-ball: P(|x| <= r) = r^3, inside any cone
    rays = _unit([[1, 0, 0], [1, 1, 0], [0.2, 0.3, 1]])
    X = sample_cone_ball(rays, rng_stream(7), 20_000).points
    r = np.linalg.norm(X, axis=1)
    from scipy import stats
    assert stats.kstest(r ** 3, "uniform").pvalue >= 0.01
    lam = X @ np.linalg.inv(rays)
    assert np.all(lam >= -1e-12)


def test_lower_dimensional_cone_samples_stay_in_span():
    rays = np.array([[1.0, 0, 0], [0, 1.0, 0]])
    X = sample_cone_sphere(rays, rng_stream(8), 1000).points
    assert np.allclose(X[:, 2], 0)
    assert np.all(X[:, :2] >= -1e-12)


def test_thin_cone_raises():
    t = 1e-5
    rays = _unit([[1, 0, 0], [1, t, 0], [1, 0, t]])
    with pytest.raises(ThinCone):
        sample_cone_ball(rays, rng_stream(9), 10)


def test_sampler_validation():
    with pytest.raises(ValueError):
        sample_cone_ball(np.eye(2), rng_stream(0), 0)
    with pytest.raises(ValueError):
        sample_cone_ball([[1.0, 0], [2.0, 0]], rng_stream(0), 5)


def test_slab_quadrant():
    c = validate_slab_probability(np.eye(2), 0, 0.1, 20_000, rng_stream(10))
    assert c.height == pytest.approx(1)
    assert c.bound == pytest.approx(0.21)
    assert c.empirical <= c.bound + 3 * c.std_error
    # exact value for the quarter disc: strip |y| <= eps
    exact = (0.1 * math.sqrt(1 - 0.01) + math.asin(0.1)) / (math.pi / 2)
    assert c.empirical == pytest.approx(exact, abs=4 * c.std_error)


def test_slab_vacuous_and_limit():
    c = validate_slab_probability(np.eye(2), 1, 1.0, 2000, rng_stream(11))
    assert c.bound >= 3
    c = validate_slab_probability(np.eye(2), 1, 1e-9, 2000, rng_stream(11))
    assert c.empirical == 0.0
    with pytest.raises(ValueError):
        validate_slab_probability(np.eye(2), 0, 0.0, 10, rng_stream(0))


@pytest.mark.parametrize("rays", [np.eye(2), np.eye(3)[:2], _unit([[1, 0], [1, 2]]),
                                  np.eye(3), _unit([[1, 0, 0], [1, 1, 0], [1, 1, 1]])])
def test_arrangement_distance_bounds(rays):
    sph = validate_arrangement_distance(rays, 20_000, rng_stream(12), "sphere")
    ball = validate_arrangement_distance(rays, 20_000, rng_stream(12), "ball")
    k = len(rays)
    assert sph.bound == pytest.approx(sph.height / (8 * k * k))
    assert sph.empirical >= sph.bound - 3 * sph.std_error
    assert ball.empirical >= ball.bound - 3 * ball.std_error
    assert sph.empirical >= ball.empirical - 3 * math.hypot(sph.std_error, ball.std_error)


def test_orthogonal_pair_bound_value():
    c = validate_arrangement_distance(np.eye(2), 20_000, rng_stream(13))
    assert c.bound == pytest.approx(1 / 32)
    # exact mean of min(cos t, sin t) on the quarter circle
    exact = (2 - math.sqrt(2)) / (math.pi / 2) * 1.0
    assert c.empirical == pytest.approx(exact, abs=4 * c.std_error)


def test_arrangement_distance_direct():
    d = arrangement_distances(np.eye(2), np.array([[0.6, 0.8], [1.0, 0.0]]))
    assert d == pytest.approx([0.6, 0.0])


def test_cone_heights_match_ray_distances():
    # for simplicial cones, distance to the span of the others is the facet height
    R = _unit([[1, 0, 0], [1, 1, 0], [1, 1, 1]])
    c = validate_arrangement_distance(R, 100, rng_stream(0))
    assert c.height == pytest.approx(ray_distances(R).min())
    for cone in normal_cones(zonotope_vertices(augmented_permutahedron(3))):
        assert np.all(ray_distances(cone.rays) > 0)

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from shadowlab.bounds import c_n_bracket, projected_length_constant
from shadowlab.geometry import rng_stream
from shadowlab.polytope import VPolytope, hypercube
from shadowlab.stats import (
    PairedSample,
    collect_edge_sample,
    independence_test,
    mean_ci,
    permutation_correlation_test,
)


def test_paired_sample_validation():
    with pytest.raises(ValueError):
        PairedSample([1.0, 2.0], [True])
    with pytest.raises(ValueError):
        PairedSample([], [])


def test_collect_edge_sample_hypercube4():
    P = hypercube(4)
    s = collect_edge_sample(P, P.edges[0], 10_000, 1)
    L = s.l_values
    se = L.std(ddof=1) / math.sqrt(len(L))
    lo, hi = c_n_bracket(4)
    assert lo - 3 * se <= L.mean() <= hi + 3 * se
    assert L.mean() == pytest.approx(projected_length_constant(4), abs=3 * se)
    # by symmetry every edge is on the shadow with probability 2n / (n 2^(n-1)) = 0.25
    x = s.x_flags.astype(float)
    assert x.mean() == pytest.approx(0.25, abs=3 * x.std(ddof=1) / 100)


def test_planar_edges_always_on_shadow():
    sq = VPolytope([[0, 0], [1, 0], [1, 1], [0, 1]])
    s = collect_edge_sample(sq, (0, 1), 200, 2)
    assert s.x_flags.all()
    assert np.allclose(s.l_values, 1.0)


def test_collect_rejects_non_edge():
    with pytest.raises(ValueError):
        collect_edge_sample(hypercube(3), (0, 7), 10, 1)


def test_collected_flags_match_shadow_edges():
    from shadowlab.geometry import frame_vectors, Frame2
    from shadowlab.shadow import shadow

    P = hypercube(3)
    s = collect_edge_sample(P, (0, 1), 200, 3)
    for t in range(200):
        f = Frame2(*frame_vectors(rng_stream(3, t), 3))
        assert s.x_flags[t] == (frozenset((0, 1)) in shadow(P, f).edge_pairs())


def test_independence_hypercube_edge():
    P = hypercube(4)
    v = independence_test(collect_edge_sample(P, P.edges[5], 10_000, 4), alpha=0.01)
    assert v.verdict == "pass"


def test_dependent_sample_fails():
    L = rng_stream(5).uniform(size=4000)
    v = independence_test(PairedSample(L, L > np.median(L)), permutations=2000)
    assert v.verdict == "fail"


def test_constant_length_and_single_class():
    X = rng_stream(6).uniform(size=500) < 0.5
    v = independence_test(PairedSample(np.ones(500), X), permutations=500)
    assert math.isnan(v.correlation_p) and v.ks_p == pytest.approx(1.0) and v.verdict == "pass"
    v = independence_test(PairedSample(np.arange(10.0), np.ones(10, dtype=bool)))
    assert v.verdict == "inconclusive"


def test_permutation_p_value_matches_t_test_on_gaussian_data():
    rng = rng_stream(7)
    L = rng.standard_normal(2000)
    X = rng.uniform(size=2000) < 0.3
    L = L + 0.1 * X
    r, p = permutation_correlation_test(L, X, 20_000, rng_stream(8))
    ref = sps.pearsonr(L, X.astype(float))
    assert r == pytest.approx(ref.statistic, abs=1e-12)
    assert p == pytest.approx(ref.pvalue, abs=0.01)


def test_calibration_on_independent_data():
    passes = 0
    for rep in range(100):
        rng = rng_stream(9, rep)
        s = PairedSample(rng.exponential(size=300), rng.uniform(size=300) < 0.4)
        passes += independence_test(s, alpha=0.01, permutations=300, seed=rep).verdict == "pass"
    assert passes >= 100 * (1 - 2 * 0.01)


@given(seed=st.integers(0, 2**32))
@settings(max_examples=20, deadline=None)
def test_ks_invariant_under_monotone_transform(seed):
    rng = rng_stream(seed)
    a, b = rng.exponential(size=200), rng.exponential(size=150)
    s1 = sps.ks_2samp(a, b).statistic
    s2 = sps.ks_2samp(np.log1p(a) ** 3, np.log1p(b) ** 3).statistic
    assert s1 == pytest.approx(s2, abs=1e-12)


def test_mean_ci():
    assert mean_ci([3.0] * 10) == (3.0, 0.0)
    m, h = mean_ci([0, 1] * 10_000, 0.95)
    assert m == 0.5 and h == pytest.approx(1.96 * 0.5 / math.sqrt(20_000), rel=1e-3)
    with pytest.raises(ValueError):
        mean_ci([1.0])
    with pytest.raises(ValueError):
        mean_ci([1.0, 2.0], 1.5)


def test_mean_ci_scaling():
    widths = []
    for k in (1000, 4000, 16_000, 64_000):
        widths.append(mean_ci(rng_stream(10, k).standard_normal(k))[1])
    ratios = np.array(widths[:-1]) / np.array(widths[1:])
    assert np.allclose(ratios, 2.0, rtol=0.1)

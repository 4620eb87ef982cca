import math

import numpy as np
import pytest

import derham as dr
from derham.errors import DomainError


def test_integrand_bernoulli_first_digit(bern14):
    assert dr.integrand_at(bern14, dr.MadicDigits(2, (0, 1, 0))) == (2.0, 2.0)
    a1 = dr.integrand_at(bern14, dr.MadicDigits(2, (1,)))
    assert abs(a1[0] - (-math.log2(0.75))) < 1e-15


def test_integrand_remark_2_5():
    sys_ = dr.build_preset("remark_2_5")
    assert dr.integrand_at(sys_, dr.MadicDigits(2, (1, 0))) == (1.0, math.inf)
    both = dr.integrand_at(sys_, dr.MadicDigits(2, (0, 1)))
    assert both[0] == 1.0
    assert abs(both[1] - math.log2(3.0)) < 1e-15


def test_quadrature_depth_independent_for_affine(bern14):
    target = 2.0 - math.log2(3.0) / 2.0
    for depth in (1, 3, 6):
        est = dr.alpha_beta_quadrature(bern14, depth)
        assert abs(est.alpha - target) < 1e-12
        assert abs(est.beta - target) < 1e-12


def test_quadrature_cantor_infinite(cantor):
    est = dr.alpha_beta_quadrature(cantor, 3)
    assert est.alpha == math.inf
    assert est.beta == math.inf


def test_quadrature_remark_2_5_split():
    est = dr.alpha_beta_quadrature(dr.build_preset("remark_2_5"), 6)
    assert est.alpha == 1.0
    assert est.beta == math.inf


def test_quadrature_minkowski_stable(minkowski):
    vals = [dr.alpha_beta_quadrature(minkowski, d).alpha for d in range(8, 15)]
    assert all(1.0 < a <= math.log2(2.25) for a in vals)
    assert max(abs(vals[i + 1] - vals[i]) for i in range(len(vals) - 1)) < 0.01


def test_quadrature_requires_eval_depth_cover(minkowski):
    with pytest.raises(DomainError):
        dr.alpha_beta_quadrature(minkowski, 8, eval_depth=4)


def test_alpha_le_beta(minkowski, bern14):
    for sys_ in (minkowski, bern14):
        est = dr.alpha_beta_quadrature(sys_, 6)
        assert est.alpha <= est.beta


def test_quadrature_with_margin_carries_delta(minkowski):
    est = dr.quadrature_with_margin(minkowski, 12)
    assert est.delta is not None and 0.0 < est.delta < 0.01
    # halving depth reproduces the stored coarse value
    coarse = dr.alpha_beta_quadrature(minkowski, 6)
    assert abs(est.delta - abs(est.alpha - coarse.alpha)) < 1e-15


def test_mc_fair_constant(fair):
    for seed in (0, 9, 123):
        est = dr.alpha_beta_monte_carlo(fair, 500, 8, seed=seed)
        assert est.alpha == 1.0
        assert est.beta == 1.0
        assert est.stderr == 0.0


def test_mc_koch_constant(koch):
    est = dr.alpha_beta_monte_carlo(koch, 400, 10, seed=2)
    assert abs(est.alpha - math.log2(3.0) / 2.0) < 1e-12
    assert est.stderr == 0.0


def test_mc_deterministic_per_seed(minkowski):
    a = dr.alpha_beta_monte_carlo(minkowski, 4000, 12, seed=7)
    b = dr.alpha_beta_monte_carlo(minkowski, 4000, 12, seed=7)
    c = dr.alpha_beta_monte_carlo(minkowski, 4000, 12, seed=8)
    assert (a.alpha, a.beta, a.stderr) == (b.alpha, b.beta, b.stderr)
    assert a.alpha != c.alpha


def test_mc_infinite_branch():
    est = dr.alpha_beta_monte_carlo(dr.build_preset("cantor"), 300, 6, seed=1)
    assert est.alpha == math.inf
    assert est.stderr == math.inf


def test_trace_fair_rows_one(fair):
    # cumsum of identical log terms drifts an ulp past n ~ 24
    tr = dr.empirical_exponent(fair, seed=4, n_max=64)
    assert np.max(np.abs(tr.values - 1.0)) < 1e-14


def test_trace_koch_rows_constant(koch):
    tr = dr.empirical_exponent(koch, seed=4, n_max=200)
    assert np.max(np.abs(tr.values - math.log2(3.0) / 2.0)) < 1e-12


def test_trace_explicit_digits_cantor(cantor):
    tr = dr.empirical_exponent(cantor, digits=(0, 0, 0, 0))
    assert np.max(np.abs(tr.values - math.log(2.0) / math.log(3.0))) < 1e-15
    flat = dr.empirical_exponent(cantor, digits=(0, 1, 0))
    assert flat.values[1] == math.inf
    assert flat.values[2] == math.inf


def test_trace_requires_exactly_one_source(fair):
    with pytest.raises(DomainError):
        dr.empirical_exponent(fair, seed=1, digits=(0, 1))
    with pytest.raises(DomainError):
        dr.empirical_exponent(fair)


def test_trace_moebius_path_matches_direct(minkowski):
    """Normalized matrix products against literal prefix composition."""
    rng = np.random.Generator(np.random.PCG64(3))
    digits = tuple(int(x) for x in rng.integers(0, 2, size=25))
    tr = dr.empirical_exponent(minkowski, digits=digits)
    for n in (1, 2, 5, 12, 25):
        mn = dr.increment_Mn(minkowski, dr.MadicDigits(2, digits[:n]))
        ref = -math.log2(mn) / n
        # the direct difference loses ~n bits to cancellation
        assert abs(tr.values[n - 1] - ref) < 1e-6


def test_trace_generic_path_matches_direct():
    sys_ = dr.build_preset("example_2_2_ii")
    rng = np.random.Generator(np.random.PCG64(5))
    digits = tuple(int(x) for x in rng.integers(0, 2, size=18))
    tr = dr.empirical_exponent(sys_, digits=digits)
    for n in (1, 4, 9, 18):
        mn = dr.increment_Mn(sys_, dr.MadicDigits(2, digits[:n]))
        ref = -math.log2(mn) / n
        assert abs(tr.values[n - 1] - ref) < 1e-12


def test_trace_coordinate_path_matches_direct():
    sys_ = dr.build_preset("remark_2_5")
    digits = (0, 1, 1, 0, 1, 0, 0, 1)
    tr = dr.empirical_exponent(sys_, digits=digits)
    for n in (1, 3, 8):
        mn = dr.increment_Mn(sys_, dr.MadicDigits(2, digits[:n]))
        assert abs(tr.values[n - 1] - (-math.log2(mn) / n)) < 1e-12


def test_variation_fair_telescopes(fair):
    table = dr.p_variation_table(fair, 1.0, 8)
    assert np.all(table.s == 1.0)


def test_variation_koch_geometric(koch):
    table = dr.p_variation_table(koch, 1.0, 12)
    target = (2.0 / math.sqrt(3.0)) ** table.n
    assert np.max(np.abs(table.s - target)) < 1e-9
    # divergence for p < 1/beta: strictly increasing from n = 4 on
    assert np.all(np.diff(table.s[3:]) > 0.0)


def test_variation_bern_square_sum(bern14):
    table = dr.p_variation_table(bern14, 2.0, 8)
    assert np.max(np.abs(table.s - 0.625 ** table.n)) < 1e-12
    # brute force over the depth-4 grid
    inc = dr.increment_table(bern14, 4)
    assert abs(table.s[3] - float(np.sum(inc.values ** 2))) < 1e-15


def test_variation_validates_p(fair):
    with pytest.raises(DomainError):
        dr.p_variation_table(fair, 0.0, 4)


def test_classify_margin_defaults(minkowski):
    mc = dr.alpha_beta_monte_carlo(minkowski, 2000, 20, seed=0)
    v = dr.classify(mc)
    assert v.margin == 3.0 * mc.stderr
    quad = dr.quadrature_with_margin(minkowski, 10)
    assert dr.classify(quad).margin == quad.delta
    bare = dr.alpha_beta_quadrature(minkowski, 10)
    with pytest.raises(DomainError):
        dr.classify(bare)


def test_classify_verdicts():
    inf_est = dr.RegularityEstimate(math.inf, math.inf, "quadrature", 3, 23, 27)
    assert dr.classify(inf_est, 0.0).tag == "derivative_zero_ae"
    koch_val = math.log2(3.0) / 2.0
    koch_est = dr.RegularityEstimate(koch_val, koch_val, "quadrature", 1, 21, 2)
    assert dr.classify(koch_est, 0.01).tag == "nondifferentiable_ae"
    fair_est = dr.RegularityEstimate(1.0, 1.0, "quadrature", 1, 21, 2)
    assert dr.classify(fair_est, 0.0).tag == "inconclusive"
    with pytest.raises(DomainError):
        dr.classify(fair_est, -0.1)

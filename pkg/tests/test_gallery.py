import math

import numpy as np
import pytest
from scipy import integrate, stats

from maxstable import (AtomicRep, GaussianIncrementModel, GridRep, HybridRep,
                       KernelSpec, brown_resnick_rep, build_gallery_rep,
                       check_stationarity, continuous_discrete_split,
                       extremal_process_rep, fdd_exponent,
                       gaussian_moving_maxima_rep, hopf_classify,
                       mixed_moving_maxima_rep, moving_maxima_rep,
                       scale_coefficient)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("kernel,alpha", [
    (KernelSpec.indicator(0.0, 1.0), 1.0),
    (KernelSpec.indicator(-1.0, 2.0, height=0.7), 1.8),
    (KernelSpec.gaussian(amplitude=0.9, scale=1.3), 1.0),
    (KernelSpec.gaussian(), 2.0),
    (KernelSpec.exp_decay(amplitude=2.0, rate=0.5), 1.5),
    (KernelSpec.power_decay(amplitude=1.0, exponent=3.0), 1.0),
])
def test_kernel_alpha_mass_against_quadrature(kernel, alpha):
    oracle, _ = integrate.quad(lambda x: kernel(x) ** alpha, -np.inf, np.inf, limit=200)
    assert kernel.alpha_mass(alpha) == pytest.approx(oracle, rel=1e-8)


def test_kernel_non_integrable_cases():
    assert math.isinf(KernelSpec.power_decay(exponent=1.0).alpha_mass(1.0))
    assert math.isinf(KernelSpec.power_decay(exponent=0.5).alpha_mass(2.0))
    with pytest.raises(ValueError):
        moving_maxima_rep(KernelSpec.power_decay(exponent=1.0), alpha=1.0)


def test_kernel_radius_controls_tail_mass():
    for kernel, alpha in [(KernelSpec.gaussian(), 1.0),
                          (KernelSpec.exp_decay(rate=2.0), 1.3),
                          (KernelSpec.power_decay(exponent=4.0), 1.0)]:
        r = kernel.radius(alpha, rel_tail=1e-6)
        total = kernel.alpha_mass(alpha)
        tail, _ = integrate.quad(lambda x: kernel(x) ** alpha, r, np.inf)
        assert 2.0 * tail <= 2e-6 * total


def test_kernel_from_config():
    k = KernelSpec.from_config({"family": "gaussian", "amplitude": 2.0, "scale": 0.5})
    assert k(0.0) == 2.0
    with pytest.raises(ValueError):
        KernelSpec.from_config({"family": "nope"})


# ---------------------------------------------------------------------------
# extremal process encodings
# ---------------------------------------------------------------------------

def test_extremal_encodings_agree_on_fdds():
    enc = extremal_process_rep(alpha=1.0, horizon=5.0)
    for constraints in ([(1.0, 1.0), (2.0, 2.0)], [(0.5, 0.7)], [(3.0, 1.5), (4.5, 1.0)]):
        e_h = fdd_exponent(enc.halfline, constraints).value
        e_s = fdd_exponent(enc.standardized, constraints).value
        assert e_h == pytest.approx(e_s, abs=enc.halfline.quad_tol + enc.standardized.quad_tol)


@pytest.mark.parametrize("alpha", [0.8, 1.0, 2.0])
def test_extremal_marginal_scale_both_encodings(alpha):
    enc = extremal_process_rep(alpha=alpha, horizon=4.0)
    for t in (0.5, 2.0, 3.5):
        expected = t ** (1.0 / alpha)
        for rep in enc:
            assert scale_coefficient(rep, [(t, 1.0)]) == pytest.approx(expected, rel=5e-3)


def test_extremal_scale_vanishes_at_origin():
    enc = extremal_process_rep(alpha=1.0, horizon=5.0)
    assert scale_coefficient(enc.halfline, [(1e-5, 1.0)]) < 0.01


# ---------------------------------------------------------------------------
# moving maxima
# ---------------------------------------------------------------------------

def test_gaussian_moving_maxima_unit_scale_everywhere():
    rep = gaussian_moving_maxima_rep()
    for t in (-2.0, 0.0, 1.5):
        assert scale_coefficient(rep, [(t, 1.0)]) == pytest.approx(1.0, abs=1e-6)


def test_moving_maxima_stationary_and_dissipative():
    rep = moving_maxima_rep(KernelSpec.exp_decay(rate=1.2), alpha=1.4,
                            t_range=(-3.0, 3.0))
    report = check_stationarity(rep, shifts=[0.7, 2.0],
                                probes=[[(0.0, 1.0)], [(0.0, 1.0), (1.0, 2.0)]],
                                tol=10.0 * rep.quad_tol + 1e-9)
    assert report.stationary
    assert hopf_classify(rep).aggregate == "dissipative"


def test_integer_moving_maxima_atoms():
    rep = moving_maxima_rep(KernelSpec.exp_decay(rate=1.0), alpha=1.0,
                            domain="integer", t_range=(0.0, 2.0))
    assert rep.encoding == "atomic"
    sigma = scale_coefficient(rep, [(0.0, 1.0)])
    expected = sum(math.exp(-abs(i)) for i in range(-60, 61))
    assert sigma == pytest.approx(expected, rel=1e-9)


# ---------------------------------------------------------------------------
# mixed moving maxima
# ---------------------------------------------------------------------------

def test_single_component_mixture_reduces_to_moving_maxima():
    kernel = KernelSpec.gaussian()
    mm = moving_maxima_rep(kernel, alpha=1.0, t_range=(-2.0, 2.0), n_points=1025)
    mix = mixed_moving_maxima_rep([(kernel, 1.0)], alpha=1.0, t_range=(-2.0, 2.0),
                                  n_points=1025)
    for constraints in ([(0.0, 1.0)], [(0.0, 1.0), (1.0, 0.5)]):
        assert fdd_exponent(mix, constraints).value == pytest.approx(
            fdd_exponent(mm, constraints).value, rel=1e-12)


def test_two_component_mixture_marginal_additivity():
    k1, k2 = KernelSpec.gaussian(), KernelSpec.exp_decay(rate=2.0)
    nu1, nu2 = 0.4, 1.7
    mix = mixed_moving_maxima_rep([(k1, nu1), (k2, nu2)], alpha=1.0,
                                  t_range=(-1.0, 1.0))
    expected = nu1 * k1.alpha_mass(1.0) + nu2 * k2.alpha_mass(1.0)
    got = fdd_exponent(mix, [(0.0, 1.0)]).value
    # trapezoid error is dominated by the exponential kernel's kink at zero
    assert got == pytest.approx(expected, rel=1e-3)


def test_mixture_dissipative_at_every_component_cell():
    mix = mixed_moving_maxima_rep(
        [(KernelSpec.gaussian(), 1.0), (KernelSpec.indicator(0.0, 1.0), 0.5)],
        alpha=1.0, t_range=(-1.0, 1.0), n_points=257)
    report = hopf_classify(mix)
    assert report.aggregate == "dissipative"
    assert all(r.label == "dissipative" for r in report.per_point)


def test_empty_mixture_rejected():
    with pytest.raises(ValueError):
        mixed_moving_maxima_rep([], alpha=1.0)


# ---------------------------------------------------------------------------
# Brown-Resnick representation
# ---------------------------------------------------------------------------

def lognormal_pair_exponent(x0, xh, gamma):
    """Closed form for E max(x0**-1, xh**-1 * Y) with mean-one lognormal Y.

    ``gamma`` is the log-variance; this is the bivariate exponent of a
    Brown-Resnick pair at lag h when gamma = Var(W_h - W_0).
    """
    a, b = 1.0 / x0, 1.0 / xh
    s = math.sqrt(gamma)
    return (a * stats.norm.cdf((math.log(a / b) + gamma / 2.0) / s)
            + b * stats.norm.cdf((math.log(b / a) + gamma / 2.0) / s))


def test_brown_resnick_unit_marginal_scale():
    rep = brown_resnick_rep(GaussianIncrementModel.fbm(0.7, 1.0))
    rng = np.random.default_rng(31)
    for t in (0.0, 1.0, 3.0):
        est = fdd_exponent(rep, [(t, 1.0)], rng=rng, n_samples=100_000)
        assert abs(est.value - 1.0) <= max(4.0 * est.stderr, 1e-12)


def test_brown_resnick_pair_exponent_matches_lognormal_closed_form():
    hurst, sigma, h = 0.5, 1.0, 1.0
    rep = brown_resnick_rep(GaussianIncrementModel.fbm(hurst, sigma))
    rng = np.random.default_rng(77)
    est = fdd_exponent(rep, [(0.0, 1.0), (h, 2.0)], rng=rng, n_samples=200_000)
    expected = lognormal_pair_exponent(1.0, 2.0, sigma ** 2 * h ** (2 * hurst))
    assert abs(est.value - expected) <= 4.0 * est.stderr


def test_brown_resnick_h1_equals_gaussian_moving_maxima():
    rep = brown_resnick_rep(GaussianIncrementModel.fbm(1.0, 1.0))
    mm = gaussian_moving_maxima_rep(t_range=(-3.0, 3.0))
    rng = np.random.default_rng(13)
    h = 1.0
    constraints = [(0.0, 1.0), (h, 1.5)]
    mc = fdd_exponent(rep, constraints, rng=rng, n_samples=200_000)
    quad = fdd_exponent(mm, constraints)
    assert abs(mc.value - quad.value) <= 4.0 * mc.stderr + mm.quad_tol
    # both agree with the lognormal closed form at gamma = h**2
    expected = lognormal_pair_exponent(1.0, 1.5, h ** 2)
    assert quad.value == pytest.approx(expected, abs=1e-5)
    assert abs(mc.value - expected) <= 4.0 * mc.stderr


def test_degenerate_brown_resnick_is_constant():
    model = GaussianIncrementModel.from_variance(
        lambda t: np.zeros_like(np.asarray(t, dtype=float)))
    rep = brown_resnick_rep(model)
    est = fdd_exponent(rep, [(0.0, 1.0), (5.0, 1.0)],
                       rng=np.random.default_rng(0), n_samples=1000)
    # Y identically 1: the pair exponent equals the single-time exponent
    assert est.value == pytest.approx(1.0, abs=1e-12)
    assert est.stderr == 0.0


# ---------------------------------------------------------------------------
# hybrid split and registry
# ---------------------------------------------------------------------------

def test_continuous_discrete_split():
    grid = GridRep(1.0, [0.0, 1.0], [0.5, 0.5], times=[0.0], values=[[1.0, 2.0]])
    atoms = AtomicRep(1.0, [0.0], [[1.0]])
    cont, disc = continuous_discrete_split(HybridRep(grid, atoms))
    assert cont is grid and disc is atoms
    cont, disc = continuous_discrete_split(HybridRep(continuous=grid))
    assert disc is None
    cont, disc = continuous_discrete_split(HybridRep(discrete=atoms))
    assert cont is None
    with pytest.raises(ValueError):
        continuous_discrete_split(grid)


def test_gallery_registry_builds_each_entry():
    rep = build_gallery_rep("extremal_process", {"alpha": 1.0, "horizon": 3.0})
    assert rep.encoding == "grid"
    rep = build_gallery_rep("moving_maxima",
                            {"kernel": {"family": "gaussian"}, "t_range": (-2.0, 2.0)})
    assert rep.encoding == "grid"
    rep = build_gallery_rep("gaussian_moving_maxima", {"t_range": (-2.0, 2.0)})
    assert scale_coefficient(rep, [(0.0, 1.0)]) == pytest.approx(1.0, abs=1e-6)
    rep = build_gallery_rep("mixed_moving_maxima",
                            {"components": [{"kernel": {"family": "gaussian"}, "weight": 1.0}],
                             "t_range": (-1.0, 1.0)})
    assert rep.encoding == "mixed_moving_maxima"
    rep = build_gallery_rep("brown_resnick", {"hurst": 0.5})
    assert rep.encoding == "doubly_stochastic"
    with pytest.raises(ValueError):
        build_gallery_rep("unknown_process")


def test_gallery_outputs_have_finite_probe_exponents():
    probes = {"extremal_process": [(1.0, 1.0)],
              "gaussian_moving_maxima": [(0.0, 1.0)],
              "moving_maxima": [(0.0, 1.0)]}
    reps = {
        "extremal_process": build_gallery_rep("extremal_process", {"horizon": 3.0}),
        "gaussian_moving_maxima": build_gallery_rep("gaussian_moving_maxima",
                                                    {"t_range": (-2.0, 2.0)}),
        "moving_maxima": build_gallery_rep(
            "moving_maxima", {"kernel": {"family": "exp_decay"}, "t_range": (-2.0, 2.0)}),
    }
    for name, rep in reps.items():
        est = fdd_exponent(rep, probes[name])
        assert math.isfinite(est.value) and est.value > 0


def test_table_kernel_interpolation_and_mass():
    kernel = KernelSpec.table([-1.0, 0.0, 2.0], [0.0, 2.0, 0.0])
    assert kernel(0.0) == 2.0
    assert kernel(1.0) == pytest.approx(1.0)
    assert kernel(-5.0) == 0.0 and kernel(3.0) == 0.0
    oracle, _ = integrate.quad(lambda x: kernel(x) ** 1.0, -1.0, 2.0)
    assert kernel.alpha_mass(1.0) == pytest.approx(oracle, rel=1e-9)
    rep = moving_maxima_rep(kernel, alpha=1.0, t_range=(-1.0, 1.0))
    assert scale_coefficient(rep, [(0.0, 1.0)]) == pytest.approx(oracle, rel=1e-3)

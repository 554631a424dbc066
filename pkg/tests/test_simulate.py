import math

import numpy as np
import pytest
from scipy import stats

from maxstable import (AtomicRep, GaussianIncrementModel, GridRep, NumericError,
                       SeriesTruncation, fdd_probability, frechet_cdf,
                       poisson_series_path, scale_coefficient, simulate_atomic,
                       simulate_brown_resnick, simulate_extremal_process,
                       simulate_fbm, simulate_series)


@pytest.fixture(scope="module")
def three_atom_rep():
    values = np.array([[1.0, 0.4, 0.2],
                       [0.5, 1.2, 0.3],
                       [0.2, 0.8, 1.5]])
    return AtomicRep(1.5, [1.0, 2.0, 3.0], values, [1.0, 0.5, 2.0])


# ---------------------------------------------------------------------------
# determinism
# ---------------------------------------------------------------------------

def test_atomic_bitwise_deterministic_across_workers(three_atom_rep):
    a = simulate_atomic(three_atom_rep, n_paths=500, seed=42, workers=1)
    b = simulate_atomic(three_atom_rep, n_paths=500, seed=42, workers=4)
    assert np.array_equal(a.paths, b.paths)
    c = simulate_atomic(three_atom_rep, n_paths=500, seed=43)
    assert not np.array_equal(a.paths, c.paths)


def test_series_and_fbm_deterministic_across_workers(three_atom_rep):
    s1 = simulate_series(three_atom_rep, three_atom_rep.times, 200, seed=7, workers=1)
    s2 = simulate_series(three_atom_rep, three_atom_rep.times, 200, seed=7, workers=3)
    assert np.array_equal(s1.paths, s2.paths)
    model = GaussianIncrementModel.fbm(0.6)
    grid = np.linspace(0.25, 4.0, 16)
    f1 = simulate_fbm(model, grid, 100, seed=3, workers=1)
    f2 = simulate_fbm(model, grid, 100, seed=3, workers=2)
    assert np.array_equal(f1.paths, f2.paths)


# ---------------------------------------------------------------------------
# exact atomic simulation
# ---------------------------------------------------------------------------

def test_single_atom_paths_are_constant():
    rep = AtomicRep(1.0, [0.0, 1.0, 2.0], np.ones((3, 1)))
    ens = simulate_atomic(rep, n_paths=50, seed=1)
    assert np.all(ens.paths == ens.paths[:, :1])
    assert np.all(ens.paths > 0)


def test_disjoint_atoms_give_independent_coordinates():
    rep = AtomicRep(1.0, [0.0, 1.0], [[1.0, 0.0], [0.0, 1.0]])
    ens = simulate_atomic(rep, n_paths=20_000, seed=5)
    rho = stats.spearmanr(ens.paths[:, 0], ens.paths[:, 1]).statistic
    assert abs(rho) < 4.0 / math.sqrt(ens.n_paths)


def test_atomic_marginal_matches_cdf(three_atom_rep):
    rep = three_atom_rep
    ens = simulate_atomic(rep, n_paths=20_000, seed=8)
    t = 2.0
    sigma = scale_coefficient(rep, [(t, 1.0)])
    col = ens.paths[:, 1]
    res = stats.kstest(col, lambda x: frechet_cdf(x, sigma, rep.alpha))
    assert res.pvalue > 0.01


def test_atomic_joint_law_matches_exponent(three_atom_rep):
    rep = three_atom_rep
    n = 40_000
    ens = simulate_atomic(rep, n_paths=n, seed=12)
    constraints = [(1.0, 1.5), (2.0, 2.0), (3.0, 2.5)]
    p = fdd_probability(rep, constraints)
    levels = np.array([x for _, x in constraints])
    p_hat = float(np.mean(np.all(ens.paths <= levels[None, :], axis=1)))
    assert abs(p_hat - p) <= 3.0 * math.sqrt(p * (1 - p) / n)


def test_atomic_rejects_empty_and_dead_times():
    with pytest.raises(ValueError):
        simulate_atomic(AtomicRep(1.0, [0.0], np.ones((1, 0))), n_paths=1)
    rep = AtomicRep(1.0, [0.0, 1.0], [[1.0, 1.0], [0.0, 0.0]], allow_zero_atoms=True)
    with pytest.raises(ValueError):
        simulate_atomic(rep, n_paths=1)


# ---------------------------------------------------------------------------
# extremal process
# ---------------------------------------------------------------------------

def test_extremal_paths_monotone_and_marginal():
    grid = np.array([0.5, 1.0, 2.0, 3.5])
    ens = simulate_extremal_process(1.0, grid, n_paths=20_000, seed=21)
    assert np.all(np.diff(ens.paths, axis=1) >= 0)
    res = stats.kstest(ens.paths[:, 2], lambda x: frechet_cdf(x, 2.0, 1.0))
    assert res.pvalue > 0.01


def test_extremal_joint_probability_band():
    n = 50_000
    ens = simulate_extremal_process(1.0, [1.0, 2.0], n_paths=n, seed=33)
    hits = np.mean((ens.paths[:, 0] <= 1.0) & (ens.paths[:, 1] <= 2.0))
    p = math.exp(-1.5)
    assert abs(hits - p) <= 3.0 * math.sqrt(p * (1 - p) / n)


def test_extremal_grid_validation():
    with pytest.raises(ValueError):
        simulate_extremal_process(1.0, [2.0, 1.0], n_paths=1)
    with pytest.raises(ValueError):
        simulate_extremal_process(1.0, [0.0, 1.0], n_paths=1)


# ---------------------------------------------------------------------------
# Poisson series
# ---------------------------------------------------------------------------

def test_series_marginal_matches_scale(three_atom_rep):
    rep = three_atom_rep
    ens = simulate_series(rep, rep.times, n_paths=20_000, seed=9)
    sigma = scale_coefficient(rep, [(3.0, 1.0)])
    res = stats.kstest(ens.paths[:, 2], lambda x: frechet_cdf(x, sigma, rep.alpha))
    assert res.pvalue > 0.01
    assert ens.meta["truncation"]["uncertified_paths"] == 0


def test_series_single_cell_matches_atomic_law():
    # one grid cell of weight m collapses to an atom of scale m**(1/alpha)
    alpha, m = 2.0, 3.0
    grid_rep = GridRep(alpha, [0.0], [m], times=[0.0], values=[[1.0]])
    atom_rep = AtomicRep(alpha, [0.0], [[1.0]], [m])
    s = simulate_series(grid_rep, [0.0], n_paths=15_000, seed=4)
    a = simulate_atomic(atom_rep, n_paths=15_000, seed=99)
    res = stats.ks_2samp(s.paths[:, 0], a.paths[:, 0])
    assert res.pvalue > 0.01
    sigma = m ** (1.0 / alpha)
    res2 = stats.kstest(s.paths[:, 0], lambda x: frechet_cdf(x, sigma, alpha))
    assert res2.pvalue > 0.01


def test_series_two_sample_vs_atomic(three_atom_rep):
    rep = three_atom_rep
    s = simulate_series(rep, rep.times, n_paths=15_000, seed=14)
    a = simulate_atomic(rep, n_paths=15_000, seed=15)
    for k in range(rep.times.size):
        res = stats.ks_2samp(s.paths[:, k], a.paths[:, k])
        assert res.pvalue > 0.01


def test_series_epsilon_mode_records_bound(three_atom_rep):
    rep = three_atom_rep
    trunc = SeriesTruncation(mode="epsilon", epsilon=0.5)
    ens = simulate_series(rep, rep.times, n_paths=50, seed=2, truncation=trunc)
    assert ens.meta["truncation"]["mode"] == "epsilon"
    assert ens.meta["truncation"]["epsilon"] == 0.5
    assert np.all(ens.paths > 0)


def test_series_exact_mode_cap_exhaustion_raises(three_atom_rep):
    trunc = SeriesTruncation(mode="exact", max_terms=1)
    with pytest.raises(NumericError):
        simulate_series(three_atom_rep, three_atom_rep.times, n_paths=5,
                        seed=1, truncation=trunc)


def test_series_rejects_low_supplied_bound(three_atom_rep):
    trunc = SeriesTruncation(mode="exact", bound=0.1)
    with pytest.raises(ValueError):
        simulate_series(three_atom_rep, three_atom_rep.times, n_paths=1, truncation=trunc)


def test_poisson_series_state_invariants(three_atom_rep):
    path, state = poisson_series_path(three_atom_rep, three_atom_rep.times, seed=6)
    assert np.all(np.diff(state.gammas) > 0)
    assert state.gammas.size == state.truncation["terms_used"] >= 1
    assert state.truncation["certified"]
    assert state.total_mass == pytest.approx(3.5)
    assert np.all(path > 0)


# ---------------------------------------------------------------------------
# fractional Brownian motion
# ---------------------------------------------------------------------------

def test_fbm_variance_at_one():
    for hurst in (0.3, 0.7):
        model = GaussianIncrementModel.fbm(hurst, sigma=1.5)
        ens = simulate_fbm(model, [1.0], n_paths=40_000, seed=3)
        var = float(np.var(ens.paths[:, 0]))
        se = 1.5 ** 2 * math.sqrt(2.0 / ens.n_paths)
        assert abs(var - 1.5 ** 2) <= 5.0 * se


def test_fbm_halfbm_covariance():
    model = GaussianIncrementModel.fbm(0.5)
    cov = model.covariance(np.array([1.0, 2.0]))
    assert cov[0, 1] == pytest.approx(1.0)  # 0.5 * (1 + 4 - 1) / ... = 1
    assert cov[0, 0] == pytest.approx(1.0)
    assert cov[1, 1] == pytest.approx(2.0)


def test_fbm_h1_paths_exactly_linear():
    model = GaussianIncrementModel.fbm(1.0)
    grid = np.linspace(0.25, 2.0, 32)
    ens = simulate_fbm(model, grid, n_paths=200, seed=10)
    assert ens.meta["jitter"] > 0  # rank-one covariance requires the jitter retry
    slopes = ens.paths / grid[None, :]
    dev = np.max(np.abs(slopes - slopes[:, :1]))
    # deviation scale is sqrt(relative jitter) ~ 1e-6 of the path scale
    assert dev < 1e-3


def test_fbm_zero_time_is_zero():
    model = GaussianIncrementModel.fbm(0.5)
    ens = simulate_fbm(model, [0.0, 1.0], n_paths=20, seed=0)
    assert np.all(ens.paths[:, 0] == 0.0)


def test_fbm_self_similarity():
    model = GaussianIncrementModel.fbm(0.7)
    grid = np.array([0.5, 1.0, 1.5])
    base = simulate_fbm(model, grid, n_paths=30_000, seed=77)
    for c in (2.0, 4.0):
        scaled = simulate_fbm(model, c * grid, n_paths=30_000, seed=77)
        v1 = np.var(base.paths, axis=0)
        v2 = np.var(scaled.paths / c ** 0.7, axis=0)
        assert np.all(np.abs(v1 - v2) <= 5.0 * v1 * math.sqrt(2.0 / 30_000) + 1e-12)


def test_fbm_grid_cap():
    with pytest.raises(ValueError):
        simulate_fbm(GaussianIncrementModel.fbm(0.5), np.linspace(0, 1, 5000), 1)


def test_gaussian_model_validation():
    with pytest.raises(ValueError):
        GaussianIncrementModel.fbm(0.0)
    with pytest.raises(ValueError):
        GaussianIncrementModel.fbm(1.2)
    with pytest.raises(ValueError):
        GaussianIncrementModel(hurst=0.5, variance_fn=lambda t: t)
    with pytest.raises(ValueError):
        GaussianIncrementModel()


# ---------------------------------------------------------------------------
# Brown-Resnick series
# ---------------------------------------------------------------------------

def test_brown_resnick_marginal_is_standard_frechet():
    model = GaussianIncrementModel.fbm(0.5, sigma=0.5)
    grid = np.array([0.0, 0.5, 1.0])
    ens = simulate_brown_resnick(model, grid, n_paths=8000, seed=19)
    for k in range(grid.size):
        res = stats.kstest(ens.paths[:, k], lambda x: frechet_cdf(x, 1.0, 1.0))
        assert res.pvalue > 0.01
    assert ens.meta["truncation"]["max_final_bound"] < 1e-6


def test_brown_resnick_degenerate_kernel_is_constant_path():
    model = GaussianIncrementModel.from_variance(lambda t: np.zeros_like(np.asarray(t, dtype=float)))
    ens = simulate_brown_resnick(model, [0.0, 1.0, 2.0], n_paths=4000, seed=23)
    assert np.all(ens.paths == ens.paths[:, :1])
    res = stats.kstest(ens.paths[:, 0], lambda x: frechet_cdf(x, 1.0, 1.0))
    assert res.pvalue > 0.01
    assert ens.meta["truncation"]["max_terms_used"] <= 64


def test_brown_resnick_rejects_exact_mode():
    model = GaussianIncrementModel.fbm(0.5)
    with pytest.raises(ValueError):
        simulate_brown_resnick(model, [0.0, 1.0], 10, truncation=SeriesTruncation(mode="exact"))


def test_brown_resnick_bivariate_shift_invariance():
    model = GaussianIncrementModel.fbm(0.5, sigma=0.5)
    grid = np.array([0.0, 0.5, 5.0, 5.5])
    n = 8000
    ens = simulate_brown_resnick(model, grid, n_paths=n, seed=29)
    p0 = np.mean((ens.paths[:, 0] <= 1.0) & (ens.paths[:, 1] <= 1.5))
    p5 = np.mean((ens.paths[:, 2] <= 1.0) & (ens.paths[:, 3] <= 1.5))
    se = math.sqrt(2.0 * 0.25 / n)
    assert abs(p0 - p5) <= 4.0 * se


# ---------------------------------------------------------------------------
# ensemble export
# ---------------------------------------------------------------------------

def test_csv_roundtrip_17_digits(three_atom_rep):
    ens = simulate_atomic(three_atom_rep, n_paths=3, seed=2)
    text = ens.to_csv_string()
    lines = text.strip().split("\n")
    assert lines[0] == "path_id,t,value"
    assert len(lines) == 1 + 3 * 3
    parsed = np.array([float(line.split(",")[2]) for line in lines[1:]]).reshape(3, 3)
    assert np.array_equal(parsed, ens.paths)


def test_json_envelope_carries_seed_and_truncation(three_atom_rep):
    ens = simulate_series(three_atom_rep, three_atom_rep.times, 10, seed=31)
    doc = ens.to_json_dict()
    assert doc["seed"] == 31
    assert doc["meta"]["truncation"]["mode"] == "exact"
    assert doc["n_paths"] == 10

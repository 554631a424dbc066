"""Sample-path generation for alpha-Frechet processes.

Four generators are provided:

* :func:`simulate_atomic` -- exact: one standard Frechet variable per atom;
* :func:`simulate_extremal_process` -- exact independent max-increments;
* :func:`simulate_series` -- transformed Poisson series over a discretized
  control measure, with a per-path adaptive stopping rule that is exact for
  bounded kernels;
* :func:`simulate_brown_resnick` -- Poisson series with a fresh Gaussian path
  per point and a quantitative epsilon truncation bound.

Determinism contract: path ``i`` draws from a stream derived from
``(master seed, i)``, so results are bitwise identical for any worker count.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from .frechet import _check_alpha
from .representations import AtomicRep

__all__ = [
    "NumericError",
    "PathEnsemble",
    "SeriesTruncation",
    "PoissonSeriesState",
    "GaussianIncrementModel",
    "simulate_atomic",
    "simulate_extremal_process",
    "simulate_series",
    "simulate_fbm",
    "simulate_brown_resnick",
    "poisson_series_path",
]

MAX_FACTOR_GRID = 4096  # dense covariance factorization documented up to this size
_CHUNK = 64             # Poisson points drawn per inner-loop step


class NumericError(RuntimeError):
    """Numerical failure (factorization breakdown, exhausted series cap)."""


def path_stream(seed, index) -> np.random.Generator:
    """Random stream owned by path ``index`` of the ensemble seeded by ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(int(index),)))


def _run_chunked(n_paths, workers, fill_chunk):
    """Apply ``fill_chunk(lo, hi)`` over a partition of path indices.

    Chunks write disjoint slices of preallocated output, so scheduling order
    cannot affect the result.
    """
    workers = max(1, int(workers))
    if workers == 1:
        fill_chunk(0, n_paths)
        return
    step = max(1, math.ceil(n_paths / workers))
    bounds = [(lo, min(lo + step, n_paths)) for lo in range(0, n_paths, step)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda b: fill_chunk(*b), bounds))


@dataclass
class PathEnsemble:
    """Simulated paths on a common time grid plus provenance metadata."""

    times: np.ndarray
    paths: np.ndarray
    seed: int
    meta: dict = field(default_factory=dict)

    @property
    def n_paths(self):
        return self.paths.shape[0]

    def to_csv(self, path_or_file):
        """Write ``path_id,t,value`` rows, doubles at 17 significant digits."""
        own = isinstance(path_or_file, (str, bytes))
        fh = open(path_or_file, "w") if own else path_or_file
        try:
            fh.write("path_id,t,value\n")
            for pid in range(self.paths.shape[0]):
                row = self.paths[pid]
                fh.write("".join(f"{pid},{t:.17g},{v:.17g}\n"
                                 for t, v in zip(self.times, row)))
        finally:
            if own:
                fh.close()

    def to_csv_string(self):
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()

    def to_json_dict(self):
        """Metadata envelope (seed, grid, truncation report); path data lives in CSV."""
        return {
            "kind": "path_ensemble",
            "seed": int(self.seed),
            "n_paths": int(self.paths.shape[0]),
            "times": [float(t) for t in self.times],
            "meta": self.meta,
        }


# ---------------------------------------------------------------------------
# exact generators
# ---------------------------------------------------------------------------

def simulate_atomic(rep: AtomicRep, grid=None, n_paths=1, seed=0, *, workers=1) -> PathEnsemble:
    """Exact paths of a finite-atom representation.

    ``X_t = max_i masses[i]**(1/alpha) * f_t(i) * Z_i`` with one independent
    standard alpha-Frechet variable per atom, shared across the grid times of
    a path.  The empirical finite-dimensional laws match the representation's
    exponent functional exactly.
    """
    if rep.encoding != "atomic":
        raise ValueError("simulate_atomic needs an atomic representation")
    if rep.n_atoms == 0:
        raise ValueError("cannot simulate a representation with no atoms")
    grid = rep.times if grid is None else np.atleast_1d(np.asarray(grid, dtype=float))
    amp = rep.values_at(grid) * rep.masses[None, :] ** (1.0 / rep.alpha)
    if np.any(~np.any(amp > 0, axis=1)):
        dead = grid[~np.any(amp > 0, axis=1)]
        raise ValueError(f"time(s) {dead.tolist()} carry zero spectral mass; paths would not be positive")
    inv_alpha = -1.0 / rep.alpha
    n_atoms = rep.n_atoms
    out = np.empty((int(n_paths), grid.size))

    def fill(lo, hi):
        for i in range(lo, hi):
            rng = path_stream(seed, i)
            z = rng.exponential(size=n_atoms) ** inv_alpha
            out[i] = (amp * z[None, :]).max(axis=1)

    _run_chunked(int(n_paths), workers, fill)
    meta = {"generator": "atomic", "exact": True, "representation": rep.describe()}
    return PathEnsemble(grid, out, int(seed), meta)


def simulate_extremal_process(alpha, grid, n_paths=1, seed=0, *, workers=1) -> PathEnsemble:
    """Exact extremal-process paths via independent max-increments.

    For ``0 < t_1 < ... < t_m`` the increments are independent alpha-Frechet
    with scales ``(t_k - t_{k-1})**(1/alpha)`` (``t_0 = 0``) and the path is
    their running maximum, so paths are non-decreasing by construction.
    """
    alpha = _check_alpha(alpha)
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0 or grid[0] <= 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing and positive")
    scales = np.diff(np.concatenate([[0.0], grid])) ** (1.0 / alpha)
    inv_alpha = -1.0 / alpha
    out = np.empty((int(n_paths), grid.size))

    def fill(lo, hi):
        for i in range(lo, hi):
            rng = path_stream(seed, i)
            xi = scales * rng.exponential(size=grid.size) ** inv_alpha
            out[i] = np.maximum.accumulate(xi)

    _run_chunked(int(n_paths), workers, fill)
    meta = {"generator": "extremal_process", "exact": True, "alpha": alpha}
    return PathEnsemble(grid, out, int(seed), meta)


# ---------------------------------------------------------------------------
# Poisson series over a discretized control measure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesTruncation:
    """Stopping policy for the transformed Poisson series.

    ``exact`` mode stops once the majorant of any further term falls below
    the running minimum of the path maxima, which leaves the law untouched.
    ``epsilon`` mode waits until the majorant is below ``epsilon`` times that
    minimum (stricter for epsilon < 1) and records the achieved bound.
    """

    mode: str = "exact"
    epsilon: float | None = None
    bound: float | None = None
    max_terms: int = 100_000

    def __post_init__(self):
        if self.mode not in ("exact", "epsilon"):
            raise ValueError(f"unknown truncation mode {self.mode!r}")
        if self.mode == "epsilon":
            eps = self.epsilon
            if eps is None or not math.isfinite(eps) or eps <= 0:
                raise ValueError("epsilon mode needs a finite epsilon > 0")


@dataclass
class PoissonSeriesState:
    """Poisson points realizing one series path, kept for inspection."""

    gammas: np.ndarray
    locations: np.ndarray
    total_mass: float
    truncation: dict


def _series_setup(rep, grid, truncation):
    if rep.encoding == "atomic":
        masses = rep.masses
    elif rep.encoding == "grid":
        masses = rep.weights
    else:
        raise ValueError("Poisson-series simulation needs an atomic or grid representation")
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    values = rep.values_at(grid)          # (n_t, n_cells)
    total = float(np.sum(masses))
    if not math.isfinite(total) or total <= 0:
        raise ValueError("control mass must be finite and positive")
    keep = masses > 0
    masses = masses[keep]
    values = values[:, keep]
    sup = float(values.max()) if values.size else 0.0
    if truncation.bound is not None:
        if truncation.bound < sup:
            raise ValueError(
                f"supplied kernel bound {truncation.bound} is below the observed sup {sup}")
        sup = float(truncation.bound)
    if not math.isfinite(sup) or sup <= 0:
        raise ValueError("kernel must be bounded and not identically zero on the grid")
    if np.any(~np.any(values > 0, axis=1)):
        dead = grid[~np.any(values > 0, axis=1)]
        raise ValueError(f"time(s) {dead.tolist()} carry zero spectral mass")
    cum = np.cumsum(masses / np.sum(masses))
    cum[-1] = 1.0
    return grid, values, masses, cum, total, sup


def _series_single_path(rng, values, cum, mass_factor, inv_alpha, sup_term, stop_scale,
                        max_terms, record=False):
    """One series path; returns (path, terms, certified, gammas, cells)."""
    n_t = values.shape[0]
    x = np.zeros(n_t)
    gamma_last = 0.0
    terms = 0
    certified = False
    gammas = [] if record else None
    cells_all = [] if record else None
    while terms < max_terms:
        k = min(_CHUNK, max_terms - terms)
        gam = gamma_last + np.cumsum(rng.exponential(size=k))
        gamma_last = float(gam[-1])
        cells = np.searchsorted(cum, rng.random(k), side="right")
        vals = values[:, cells] * (mass_factor * gam ** inv_alpha)[None, :]
        np.maximum(x, vals.max(axis=1), out=x)
        terms += k
        if record:
            gammas.append(gam)
            cells_all.append(cells)
        majorant = sup_term * gamma_last ** inv_alpha
        if majorant < stop_scale * float(x.min()):
            certified = True
            break
    return x, terms, certified, gammas, cells_all


def simulate_series(rep, grid, n_paths=1, seed=0, truncation=None, *, workers=1) -> PathEnsemble:
    """Poisson-series paths ``X_t = max_i Gamma_i**(-1/alpha) * m**(1/alpha) * f_t(U_i)``.

    ``Gamma_i`` are unit-rate Poisson arrivals and ``U_i`` iid draws from the
    normalized control measure (here: the representation's cells).  Stopping
    is adaptive per path: once the majorant of any further term drops below
    the running minimum of the path maxima (times ``epsilon`` in epsilon
    mode), no omitted term can alter the output, so exact mode is exact in
    law.  The ensemble metadata reports terms used and the bound applied.
    """
    truncation = truncation or SeriesTruncation()
    grid, values, masses, cum, total, sup = _series_setup(rep, grid, truncation)
    alpha = rep.alpha
    inv_alpha = -1.0 / alpha
    mass_factor = total ** (1.0 / alpha)
    sup_term = mass_factor * sup
    stop_scale = 1.0 if truncation.mode == "exact" else float(truncation.epsilon)
    out = np.empty((int(n_paths), grid.size))
    terms_used = np.zeros(int(n_paths), dtype=int)
    certified = np.zeros(int(n_paths), dtype=bool)

    def fill(lo, hi):
        for i in range(lo, hi):
            rng = path_stream(seed, i)
            x, terms, ok, _, _ = _series_single_path(
                rng, values, cum, mass_factor, inv_alpha, sup_term, stop_scale,
                truncation.max_terms)
            out[i] = x
            terms_used[i] = terms
            certified[i] = ok

    _run_chunked(int(n_paths), workers, fill)
    if truncation.mode == "exact" and not np.all(certified):
        raise NumericError(
            f"exact-bounded stopping did not certify within {truncation.max_terms} terms "
            f"for {int(np.sum(~certified))} path(s); raise max_terms or use epsilon mode")
    meta = {
        "generator": "poisson_series",
        "exact": truncation.mode == "exact",
        "representation": rep.describe(),
        "truncation": {
            "mode": truncation.mode,
            "epsilon": truncation.epsilon,
            "kernel_sup": sup,
            "total_mass": total,
            "max_terms_used": int(terms_used.max()),
            "mean_terms_used": float(terms_used.mean()),
            "uncertified_paths": int(np.sum(~certified)),
        },
    }
    return PathEnsemble(grid, out, int(seed), meta)


def poisson_series_path(rep, grid, seed=0, path_index=0, truncation=None):
    """One series path together with its :class:`PoissonSeriesState` bookkeeping."""
    truncation = truncation or SeriesTruncation()
    grid, values, masses, cum, total, sup = _series_setup(rep, grid, truncation)
    inv_alpha = -1.0 / rep.alpha
    mass_factor = total ** (1.0 / rep.alpha)
    stop_scale = 1.0 if truncation.mode == "exact" else float(truncation.epsilon)
    rng = path_stream(seed, path_index)
    x, terms, ok, gammas, cells = _series_single_path(
        rng, values, cum, mass_factor, inv_alpha, mass_factor * sup, stop_scale,
        truncation.max_terms, record=True)
    state = PoissonSeriesState(
        gammas=np.concatenate(gammas)[:terms],
        locations=np.concatenate(cells)[:terms],
        total_mass=total,
        truncation={"mode": truncation.mode, "epsilon": truncation.epsilon,
                    "kernel_sup": sup, "terms_used": terms, "certified": bool(ok)},
    )
    return x, state


# ---------------------------------------------------------------------------
# Gaussian machinery: fractional Brownian motion and friends
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianIncrementModel:
    """Zero-mean Gaussian process with stationary increments, ``W_0 = 0``.

    Specified either by the fractional-Brownian pair ``(hurst, sigma)`` with
    variance ``sigma**2 * |t|**(2H)``, or by an arbitrary even variance
    function ``variance_fn`` with ``variance_fn(0) == 0``.  The grid
    covariance is ``(v(t) + v(s) - v(t - s)) / 2``.
    """

    hurst: float | None = None
    sigma: float = 1.0
    variance_fn: Callable | None = None

    def __post_init__(self):
        if (self.hurst is None) == (self.variance_fn is None):
            raise ValueError("specify exactly one of hurst or variance_fn")
        if self.hurst is not None:
            if not (0.0 < self.hurst <= 1.0):
                raise ValueError(f"hurst index must lie in (0, 1], got {self.hurst!r}")
            if not (math.isfinite(self.sigma) and self.sigma > 0):
                raise ValueError("sigma must be finite and > 0")

    @classmethod
    def fbm(cls, hurst, sigma=1.0):
        return cls(hurst=float(hurst), sigma=float(sigma))

    @classmethod
    def from_variance(cls, variance_fn):
        return cls(variance_fn=variance_fn)

    def variance(self, ts):
        ts = np.asarray(ts, dtype=float)
        if self.hurst is not None:
            v = self.sigma ** 2 * np.abs(ts) ** (2.0 * self.hurst)
        else:
            v = np.asarray(self.variance_fn(ts), dtype=float) * np.ones_like(ts)
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValueError("variance function must be finite and >= 0")
        return v

    def covariance(self, ts):
        ts = np.asarray(ts, dtype=float)
        v = self.variance(ts)
        return 0.5 * (v[:, None] + v[None, :] - self.variance(ts[:, None] - ts[None, :]))

    def describe(self):
        if self.hurst is not None:
            return {"kind": "fbm", "hurst": self.hurst, "sigma": self.sigma}
        return {"kind": "variance_fn"}


def _chol_with_jitter(cov):
    """Cholesky factor, retrying once with 1e-12 relative diagonal jitter."""
    try:
        return np.linalg.cholesky(cov), 0.0
    except np.linalg.LinAlgError:
        pass
    jitter = 1e-12 * float(np.max(np.diag(cov))) if cov.size else 0.0
    if jitter <= 0:
        raise NumericError("covariance factorization failed: zero diagonal")
    try:
        return np.linalg.cholesky(cov + jitter * np.eye(cov.shape[0])), jitter
    except np.linalg.LinAlgError as exc:
        eigs = np.linalg.eigvalsh(cov)
        raise NumericError(
            f"covariance factorization failed after {jitter:.3e} jitter; "
            f"eigenvalue range [{eigs.min():.3e}, {eigs.max():.3e}], size {cov.shape[0]}"
        ) from exc


def _gaussian_factor(model, grid):
    """(active index set, Cholesky factor on it, variance vector, jitter used).

    Grid times with zero variance carry ``W_t = 0`` surely and are excluded
    from the factorization (this keeps the fBm matrix nonsingular at t=0).
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size > MAX_FACTOR_GRID:
        raise ValueError(f"dense factorization supports grids up to {MAX_FACTOR_GRID} points")
    v = model.variance(grid)
    active = np.nonzero(v > 0)[0]
    if active.size == 0:
        return grid, active, None, v, 0.0
    cov = model.covariance(grid[active])
    factor, jitter = _chol_with_jitter(cov)
    return grid, active, factor, v, jitter


def simulate_fbm(model: GaussianIncrementModel, grid, n_paths=1, seed=0, *, workers=1) -> PathEnsemble:
    """Gaussian paths with the model's exact grid covariance (dense Cholesky).

    O(m^3) factorization, shared across paths; per-path standard normal
    draws come from the path's derived stream.  Returns a real-valued
    ensemble (this is the one generator whose paths may be negative).
    """
    grid, active, factor, v, jitter = _gaussian_factor(model, grid)
    n = int(n_paths)
    out = np.zeros((n, grid.size))
    if active.size:
        z = np.empty((active.size, n))

        def fill(lo, hi):
            for i in range(lo, hi):
                z[:, i] = path_stream(seed, i).standard_normal(active.size)

        _run_chunked(n, workers, fill)
        out[:, active] = (factor @ z).T
    meta = {"generator": "gaussian_increment", "model": model.describe(),
            "jitter": jitter, "kind": "gaussian"}
    return PathEnsemble(grid, out, int(seed), meta)


# ---------------------------------------------------------------------------
# Brown-Resnick series
# ---------------------------------------------------------------------------

def _lognormal_omission_bound(x, gamma, v, sdev):
    """Expected number of omitted Poisson points beating the running maxima.

    For points beyond arrival ``gamma`` with mean-one lognormal marks of
    log-variance ``v_t``, the expected count exceeding level ``x_t`` at time
    ``t`` is ``(1/x_t) * E[(Y_t - x_t * gamma)_+]``; summed over grid times it
    bounds the probability that truncation changed the path anywhere.
    """
    b = x * gamma
    with np.errstate(divide="ignore"):
        logb = np.log(b)
    pos = sdev > 0
    tail = np.empty_like(x)
    if np.any(pos):
        s = sdev[pos]
        lb = logb[pos]
        upper = special.ndtr(-(lb - v[pos] / 2.0) / s)       # E[Y 1{Y > b}]
        lower = special.ndtr(-(lb + v[pos] / 2.0) / s)       # P(Y > b)
        tail[pos] = np.maximum(upper - b[pos] * lower, 0.0)
    if np.any(~pos):
        tail[~pos] = np.maximum(1.0 - b[~pos], 0.0)          # deterministic Y = 1
    return float(np.sum(tail / x))


def simulate_brown_resnick(model: GaussianIncrementModel, grid, n_paths=1, seed=0,
                           truncation=None, *, workers=1) -> PathEnsemble:
    """Brown-Resnick paths ``X_t = max_i Gamma_i**-1 exp(W_t^(i) - v_t / 2)``.

    Each Poisson point carries an independent Gaussian path drawn from the
    model, so the kernel has mean one at every time but is unbounded;
    exact-bounded stopping is therefore refused.  Epsilon mode stops a path
    once the expected number of omitted points that could still beat the
    running maxima (a lognormal tail computation) falls below ``epsilon``,
    and the achieved bound is reported in the metadata.
    """
    truncation = truncation or SeriesTruncation(mode="epsilon", epsilon=1e-6, max_terms=10_000)
    if truncation.mode != "epsilon":
        raise ValueError("the Brown-Resnick kernel is unbounded; only epsilon truncation applies")
    grid, active, factor, v, jitter = _gaussian_factor(model, grid)
    sdev = np.sqrt(v)
    eps = float(truncation.epsilon)
    n = int(n_paths)
    m = grid.size
    out = np.empty((n, m))
    terms_used = np.zeros(n, dtype=int)
    final_bound = np.empty(n)

    def fill(lo, hi):
        for i in range(lo, hi):
            rng = path_stream(seed, i)
            x = np.zeros(m)
            gamma_last = 0.0
            terms = 0
            bound = math.inf
            while terms < truncation.max_terms:
                k = min(_CHUNK, truncation.max_terms - terms)
                gam = gamma_last + np.cumsum(rng.exponential(size=k))
                gamma_last = float(gam[-1])
                w = np.zeros((m, k))
                if active.size:
                    w[active] = factor @ rng.standard_normal((active.size, k))
                vals = np.exp(w - v[:, None] / 2.0) / gam[None, :]
                np.maximum(x, vals.max(axis=1), out=x)
                terms += k
                bound = _lognormal_omission_bound(x, gamma_last, v, sdev)
                if bound < eps:
                    break
            out[i] = x
            terms_used[i] = terms
            final_bound[i] = bound

    _run_chunked(n, workers, fill)
    meta = {
        "generator": "brown_resnick_series",
        "exact": False,
        "model": model.describe(),
        "jitter": jitter,
        "truncation": {
            "mode": "epsilon",
            "epsilon": eps,
            "max_terms_used": int(terms_used.max()),
            "mean_terms_used": float(terms_used.mean()),
            "max_final_bound": float(final_bound.max()),
            "capped_paths": int(np.sum(final_bound >= eps)),
        },
    }
    return PathEnsemble(grid, out, int(seed), meta)

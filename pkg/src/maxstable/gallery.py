"""Constructors for the standard zoo of max-stable processes.

Each constructor returns a representation wired for the evaluation,
simulation and classification machinery: extremal processes (in two
equivalent encodings), moving maxima and finite mixtures thereof, and
Brown-Resnick processes driven by a Gaussian increment model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .frechet import _check_alpha
from .representations import (AtomicRep, DoublyStochasticRep, ExponentEstimate,
                              GridRep, HybridRep, fdd_exponent, trapezoid_weights)
from .simulate import GaussianIncrementModel, _gaussian_factor

__all__ = [
    "KernelSpec",
    "ExtremalProcessEncodings",
    "MixedMovingMaximaRep",
    "extremal_process_rep",
    "moving_maxima_rep",
    "mixed_moving_maxima_rep",
    "gaussian_moving_maxima_rep",
    "brown_resnick_rep",
    "continuous_discrete_split",
    "GALLERY",
    "build_gallery_rep",
]


@dataclass(frozen=True)
class KernelSpec:
    """Closed-form nonnegative kernel ``g`` on the line (or the integers).

    Families: ``indicator`` (lo, hi, height), ``gaussian`` (amplitude,
    scale), ``exp_decay`` (amplitude, rate), ``power_decay`` (amplitude,
    exponent) and ``table`` (xs, ys, linear interpolation, zero outside).
    """

    family: str
    params: tuple

    @classmethod
    def indicator(cls, lo=0.0, hi=1.0, height=1.0):
        if not hi > lo:
            raise ValueError("indicator kernel needs hi > lo")
        if height <= 0:
            raise ValueError("indicator height must be > 0")
        return cls("indicator", (float(lo), float(hi), float(height)))

    @classmethod
    def gaussian(cls, amplitude=1.0, scale=1.0):
        if amplitude <= 0 or scale <= 0:
            raise ValueError("gaussian kernel needs amplitude > 0 and scale > 0")
        return cls("gaussian", (float(amplitude), float(scale)))

    @classmethod
    def exp_decay(cls, amplitude=1.0, rate=1.0):
        if amplitude <= 0 or rate <= 0:
            raise ValueError("exponential kernel needs amplitude > 0 and rate > 0")
        return cls("exp_decay", (float(amplitude), float(rate)))

    @classmethod
    def power_decay(cls, amplitude=1.0, exponent=2.0):
        if amplitude <= 0 or exponent <= 0:
            raise ValueError("power kernel needs amplitude > 0 and exponent > 0")
        return cls("power_decay", (float(amplitude), float(exponent)))

    @classmethod
    def table(cls, xs, ys):
        xs = tuple(float(x) for x in xs)
        ys = tuple(float(y) for y in ys)
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError("table kernel needs matching xs/ys with >= 2 entries")
        if any(y < 0 for y in ys):
            raise ValueError("table kernel values must be >= 0")
        return cls("table", (xs, ys))

    @classmethod
    def from_config(cls, cfg):
        cfg = dict(cfg)
        family = cfg.pop("family")
        factory = {"indicator": cls.indicator, "gaussian": cls.gaussian,
                   "exp_decay": cls.exp_decay, "power_decay": cls.power_decay,
                   "table": cls.table}.get(family)
        if factory is None:
            raise ValueError(f"unknown kernel family {family!r}")
        return factory(**cfg)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "indicator":
            lo, hi, h = self.params
            return np.where((x >= lo) & (x < hi), h, 0.0)
        if self.family == "gaussian":
            a, s = self.params
            return a * np.exp(-(x / s) ** 2 / 2.0)
        if self.family == "exp_decay":
            a, r = self.params
            return a * np.exp(-r * np.abs(x))
        if self.family == "power_decay":
            a, p = self.params
            return a * (1.0 + np.abs(x)) ** (-p)
        xs, ys = self.params
        return np.interp(x, xs, ys, left=0.0, right=0.0)

    def sup(self):
        if self.family == "indicator":
            return self.params[2]
        if self.family in ("gaussian", "exp_decay", "power_decay"):
            return self.params[0]
        return max(self.params[1])

    def alpha_mass(self, alpha, domain="real"):
        """``integral of g**alpha`` over the line, or the sum over the integers.

        Returns ``inf`` for non-integrable combinations (power decay with
        ``exponent * alpha <= 1``).
        """
        alpha = _check_alpha(alpha)
        if domain == "integer":
            r = self.radius(alpha, rel_tail=1e-15)
            ts = np.arange(-math.ceil(r), math.ceil(r) + 1)
            total = float(np.sum(self(ts) ** alpha))
            if self.family == "power_decay" and self.params[1] * alpha <= 1.0:
                return math.inf
            return total
        if self.family == "indicator":
            lo, hi, h = self.params
            return h ** alpha * (hi - lo)
        if self.family == "gaussian":
            a, s = self.params
            return a ** alpha * s * math.sqrt(2.0 * math.pi / alpha)
        if self.family == "exp_decay":
            a, r = self.params
            return 2.0 * a ** alpha / (alpha * r)
        if self.family == "power_decay":
            a, p = self.params
            if p * alpha <= 1.0:
                return math.inf
            return 2.0 * a ** alpha / (p * alpha - 1.0)
        xs, ys = self.params
        trapezoid = getattr(np, "trapezoid", np.trapz)
        return float(trapezoid(np.asarray(ys) ** alpha, xs))

    def radius(self, alpha, rel_tail=1e-9):
        """Half-width beyond which the relative truncated alpha-mass is <= rel_tail."""
        if self.family == "indicator":
            lo, hi, _ = self.params
            return max(abs(lo), abs(hi))
        if self.family == "gaussian":
            _, s = self.params
            return s * (math.sqrt(2.0 / alpha * math.log(1.0 / rel_tail)) + 1.0)
        if self.family == "exp_decay":
            _, r = self.params
            return math.log(1.0 / rel_tail) / (alpha * r)
        if self.family == "power_decay":
            _, p = self.params
            if p * alpha <= 1.0:
                return math.inf
            return (1.0 / rel_tail) ** (1.0 / (p * alpha - 1.0)) - 1.0
        xs, _ = self.params
        return max(abs(xs[0]), abs(xs[-1]))

    def feature_points(self):
        """Abscissae where the kernel has a peak or a jump (quadrature hints)."""
        if self.family == "indicator":
            lo, hi, _ = self.params
            return [lo, hi]
        if self.family == "table":
            xs, _ = self.params
            return [xs[0], 0.0, xs[-1]]
        return [0.0]

    def describe(self):
        return {"family": self.family, "params": self.params}


class ExtremalProcessEncodings(NamedTuple):
    """Two encodings of the same extremal process (half-line and standardized)."""

    halfline: GridRep
    standardized: GridRep


def extremal_process_rep(alpha, horizon, n_points=4097) -> ExtremalProcessEncodings:
    """Extremal process on ``(0, horizon]`` in two equivalent grid encodings.

    The half-line encoding integrates the step indicator ``1{0 < u <= t}``
    against Lebesgue measure on ``(0, horizon]``; the standardized encoding
    carries ``s**(-1/alpha) * 1{exp(-t) <= s < 1}`` on ``(0, 1)`` with a
    log-spaced grid taming the singularity at 0.  Construction cross-checks
    that the two encodings agree on a probe exponent.
    """
    alpha = _check_alpha(alpha)
    horizon = float(horizon)
    if not horizon > 0:
        raise ValueError("horizon must be > 0")
    n_points = int(n_points)

    def halfline_kernel(ts, s):
        return ((s[None, :] > 0) & (s[None, :] <= ts[:, None])).astype(float)

    u_grid = np.linspace(0.0, horizon, n_points)
    h_step = u_grid[1] - u_grid[0]
    halfline = GridRep(
        alpha, u_grid, trapezoid_weights(u_grid), kernel=halfline_kernel,
        coverage=(0.0, horizon), weight_rule="trapezoid-uniform",
        quad_tol=4.0 * h_step,
        meta={"process": "extremal_process", "encoding_variant": "halfline",
              "horizon": horizon})

    # s = exp(-u) turns the (0, horizon] window into a log-spaced grid on
    # [exp(-horizon), 1]; the integrand s**-1 is smooth in log scale
    s_grid = np.exp(-u_grid)[::-1]
    inv_alpha = -1.0 / alpha

    def standardized_kernel(ts, s):
        inside = (s[None, :] >= np.exp(-ts[:, None])) & (s[None, :] < 1.0)
        return np.where(inside, s[None, :] ** inv_alpha, 0.0)

    standardized = GridRep(
        alpha, s_grid, trapezoid_weights(s_grid), kernel=standardized_kernel,
        coverage=(0.0, horizon), weight_rule="trapezoid-log",
        quad_tol=6.0 * h_step,
        meta={"process": "extremal_process", "encoding_variant": "standardized",
              "horizon": horizon})

    probe = [(horizon / 2.0, 1.0)]
    e_h = fdd_exponent(halfline, probe).value
    e_s = fdd_exponent(standardized, probe).value
    budget = 4.0 * (halfline.quad_tol + standardized.quad_tol) * max(1.0, horizon / 2.0)
    if abs(e_h - e_s) > budget:
        raise ValueError(
            f"extremal-process encodings disagree on the probe exponent "
            f"({e_h} vs {e_s}); refine n_points")
    return ExtremalProcessEncodings(halfline, standardized)


def moving_maxima_rep(kernel: KernelSpec, alpha=1.0, *, domain="real",
                      t_range=(-5.0, 5.0), n_points=2049, rel_tail=1e-9):
    """Moving maxima ``X_t = extremal integral of g(t - s)``; stationary, dissipative.

    ``domain="real"`` discretizes Lebesgue measure on an explicit window
    ``[t_lo - R, t_hi + R]`` sized so that the kernel's alpha-mass outside is
    below ``rel_tail`` relatively; ``domain="integer"`` builds the atomic
    encoding on the integer window instead.  Non-integrable kernels are
    refused.
    """
    alpha = _check_alpha(alpha)
    mass = kernel.alpha_mass(alpha, domain)
    if not math.isfinite(mass) or mass <= 0:
        raise ValueError(
            f"kernel {kernel.family!r} is not alpha-integrable for alpha={alpha} "
            "(or carries no mass); moving maxima undefined")
    t_lo, t_hi = float(t_range[0]), float(t_range[1])
    if not t_hi >= t_lo:
        raise ValueError("t_range must be an interval")
    radius = kernel.radius(alpha, rel_tail)
    if not math.isfinite(radius):
        raise ValueError("kernel radius is unbounded; choose an integrable kernel")
    feature = kernel.feature_points()

    if domain == "integer":
        locations = np.arange(math.floor(t_lo - radius), math.ceil(t_hi + radius) + 1)

        def atom_kernel(ts, _loc=locations):
            return kernel(np.asarray(ts, dtype=float)[:, None] - _loc[None, :])

        times = np.arange(math.ceil(t_lo), math.floor(t_hi) + 1, dtype=float)
        return AtomicRep.from_kernel(
            alpha, atom_kernel, times, time_domain="integer",
            meta={"process": "moving_maxima", "kernel": kernel.describe(),
                  "window": (float(locations[0]), float(locations[-1])),
                  "alpha_mass": mass})

    if domain != "real":
        raise ValueError(f"unknown index domain {domain!r}")
    s_grid = np.linspace(t_lo - radius, t_hi + radius, int(n_points))
    h_step = s_grid[1] - s_grid[0]
    sup_a = kernel.sup() ** alpha
    rough = kernel.family in ("indicator", "table")
    quad_tol = sup_a * h_step * (4.0 if rough else 10.0 * h_step)

    def grid_kernel(ts, s):
        return kernel(np.asarray(ts, dtype=float)[:, None] - s[None, :])

    return GridRep(
        alpha, s_grid, trapezoid_weights(s_grid), kernel=grid_kernel,
        time_domain="real", coverage=(t_lo, t_hi),
        weight_rule="trapezoid-uniform", quad_tol=quad_tol,
        feature_times=lambda s: [s + f for f in feature],
        meta={"process": "moving_maxima", "kernel": kernel.describe(),
              "alpha_mass": mass, "tail_mass_dropped": mass * rel_tail})


def gaussian_moving_maxima_rep(t_range=(-6.0, 6.0), n_points=2049) -> GridRep:
    """Moving maxima with the unit-mass Gaussian kernel ``exp(-x^2/2)/sqrt(2 pi)``, alpha=1."""
    kernel = KernelSpec.gaussian(amplitude=1.0 / math.sqrt(2.0 * math.pi), scale=1.0)
    rep = moving_maxima_rep(kernel, alpha=1.0, domain="real", t_range=t_range,
                            n_points=n_points)
    rep.meta["process"] = "gaussian_moving_maxima"
    return rep


class MixedMovingMaximaRep:
    """Finite mixture of moving maxima on a product space of kernels and shifts.

    Encodes ``X_t = max over mixture components x of the moving maxima with
    kernel g_x``, component ``x`` carrying mixing mass ``nu_x``.  Components
    live on disjoint supports, so exponents add and classification walks the
    per-component cells.
    """

    encoding = "mixed_moving_maxima"

    def __init__(self, components, alpha):
        if not components:
            raise ValueError("mixture needs at least one component")
        self.alpha = _check_alpha(alpha)
        self.components = list(components)   # GridReps scaled by their mixing mass
        for comp in self.components:
            if comp.alpha != self.alpha:
                raise ValueError("all mixture components must share the tail index")

    @property
    def time_domain(self):
        return self.components[0].time_domain

    def exponent(self, constraints, **kw):
        total = 0.0
        for comp in self.components:
            total += comp.exponent(constraints, **kw).value
        return ExponentEstimate(total)

    def total_mass(self):
        return float(sum(c.total_mass() for c in self.components))

    def values_at(self, ts):
        return np.hstack([c.values_at(ts) for c in self.components])

    def classification_points(self):
        out = []
        for ci, comp in enumerate(self.components):
            out.extend(((ci, key), m) for key, m in comp.classification_points())
        return out

    def profiles_at(self, ts):
        return np.hstack([c.profiles_at(ts) for c in self.components])

    def time_profile(self, point, ts):
        ci, key = point
        return self.components[ci].time_profile(key, ts)

    def time_profile_breakpoints(self, point):
        ci, key = point
        return self.components[ci].time_profile_breakpoints(key)

    def select_points(self, points):
        by_comp = {}
        for ci, key in points:
            by_comp.setdefault(ci, []).append(key)
        comps = [self.components[ci].select_points(keys)
                 for ci, keys in sorted(by_comp.items())]
        return MixedMovingMaximaRep(comps, self.alpha)

    def describe(self):
        return {"encoding": "mixed_moving_maxima", "alpha": self.alpha,
                "components": [c.describe() for c in self.components]}


def mixed_moving_maxima_rep(components, alpha=1.0, *, t_range=(-5.0, 5.0),
                            n_points=1025, rel_tail=1e-9) -> MixedMovingMaximaRep:
    """Mixture of moving maxima from ``(KernelSpec, mixing mass)`` pairs.

    Requires every component's weighted alpha-mass to be finite; a
    single-component mixture reduces to :func:`moving_maxima_rep` in law.
    """
    comps = []
    for kernel, nu in components:
        nu = float(nu)
        if not (math.isfinite(nu) and nu > 0):
            raise ValueError("mixing masses must be finite and > 0")
        base = moving_maxima_rep(kernel, alpha, domain="real", t_range=t_range,
                                 n_points=n_points, rel_tail=rel_tail)
        comps.append(GridRep(
            base.alpha, base.s_grid, nu * base.weights, kernel=base.kernel,
            time_domain="real", coverage=base.coverage,
            weight_rule=base.weight_rule, quad_tol=nu * base.quad_tol,
            feature_times=base.feature_times,
            meta={**base.meta, "mixing_mass": nu}))
    return MixedMovingMaximaRep(comps, alpha)


def brown_resnick_rep(model: GaussianIncrementModel) -> DoublyStochasticRep:
    """Brown-Resnick process as a doubly stochastic 1-Frechet representation.

    The integrand draw at times ``ts`` is ``exp(W - Var(W)/2)`` for an
    independent Gaussian path ``W`` from the model, so every marginal scale
    is exactly 1.  The covariance factorization is cached per grid.
    """
    cache = {}

    def sampler(ts, n, rng):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        key = ts.tobytes()
        if key not in cache:
            _, active, factor, v, _ = _gaussian_factor(model, ts)
            cache[key] = (active, factor, v)
        active, factor, v = cache[key]
        w = np.zeros((int(n), ts.size))
        if active.size:
            w[:, active] = rng.standard_normal((int(n), active.size)) @ factor.T
        return np.exp(w - v[None, :] / 2.0)

    return DoublyStochasticRep(1.0, sampler,
                               meta={"process": "brown_resnick", **model.describe()})


def continuous_discrete_split(rep: HybridRep):
    """Split a hybrid representation into its grid-carried and atomic parts.

    The parts live on disjoint carriers by construction, hence are
    independent, and the hybrid exponent is the sum of the part exponents
    for every constraint set.
    """
    if not isinstance(rep, HybridRep):
        raise ValueError("continuous/discrete split expects a hybrid representation")
    return rep.continuous, rep.discrete


# ---------------------------------------------------------------------------
# registry for the CLI
# ---------------------------------------------------------------------------

def _build_extremal(params):
    return extremal_process_rep(params.get("alpha", 1.0), params.get("horizon", 5.0),
                                params.get("n_points", 4097)).halfline


def _build_moving_maxima(params):
    params = dict(params)
    kernel = KernelSpec.from_config(params.pop("kernel"))
    return moving_maxima_rep(kernel, params.pop("alpha", 1.0), **params)


def _build_gaussian_mm(params):
    return gaussian_moving_maxima_rep(**params)


def _build_mixed(params):
    params = dict(params)
    comps = [(KernelSpec.from_config(c["kernel"]), c["weight"])
             for c in params.pop("components")]
    return mixed_moving_maxima_rep(comps, params.pop("alpha", 1.0), **params)


def _build_brown_resnick(params):
    model = GaussianIncrementModel.fbm(params.get("hurst", 0.5), params.get("sigma", 1.0))
    return brown_resnick_rep(model)


GALLERY = {
    "extremal_process": {
        "build": _build_extremal,
        "params": "alpha, horizon, n_points",
        "doc": "extremal process on (0, horizon]; simulated exactly via max-increments",
    },
    "moving_maxima": {
        "build": _build_moving_maxima,
        "params": "kernel={family,...}, alpha, domain, t_range, n_points",
        "doc": "stationary moving maxima with a closed-form kernel",
    },
    "gaussian_moving_maxima": {
        "build": _build_gaussian_mm,
        "params": "t_range, n_points",
        "doc": "unit-mass Gaussian moving maxima, alpha=1",
    },
    "mixed_moving_maxima": {
        "build": _build_mixed,
        "params": "components=[{kernel, weight}], alpha, t_range, n_points",
        "doc": "finite mixture of moving maxima",
    },
    "brown_resnick": {
        "build": _build_brown_resnick,
        "params": "hurst, sigma",
        "doc": "Brown-Resnick process driven by fractional Brownian motion",
    },
}


def build_gallery_rep(name, params=None):
    entry = GALLERY.get(name)
    if entry is None:
        raise ValueError(f"unknown gallery process {name!r}; see 'gallery list'")
    return entry["build"](dict(params or {}))

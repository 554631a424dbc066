"""Spectral families of alpha-Frechet processes in three concrete encodings.

A process ``X_t = extremal-integral of f_t against a random sup-measure`` is
described here by its spectral family ``{f_t}`` over a control measure.  The
joint law is determined by the exponent functional

    E(constraints) = integral of (max_j x_j**-1 * f_{t_j}(s))**alpha d mu(s),

with ``P(X_{t_1} <= x_1, ..., X_{t_n} <= x_n) = exp(-E)``.  Three encodings
are provided:

* :class:`AtomicRep` -- finitely many atoms, exact sums;
* :class:`GridRep` -- points on a quadrature grid with weights, deterministic
  quadrature (trapezoid by default);
* :class:`DoublyStochasticRep` -- the integrand is itself a positive random
  process; exponents are Monte-Carlo means with reported standard errors.

:class:`HybridRep` carries an independent pair (grid part, atomic part) on
disjoint supports.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .frechet import _check_alpha

__all__ = [
    "ExponentEstimate",
    "AtomicRep",
    "GridRep",
    "DoublyStochasticRep",
    "HybridRep",
    "fdd_exponent",
    "fdd_probability",
    "scale_coefficient",
    "spectral_distance",
    "independent_blocks",
    "check_stationarity",
    "StationarityReport",
    "trapezoid_weights",
    "rep_to_json_dict",
    "rep_from_json_dict",
    "save_rep",
    "load_rep",
]


@dataclass(frozen=True)
class ExponentEstimate:
    """Joint-exceedance exponent value, with Monte-Carlo error when estimated.

    ``stderr`` is 0.0 for the exact (atomic) and quadrature (grid) branches.
    """

    value: float
    stderr: float = 0.0
    n_samples: int | None = None


def _as_constraints(constraints):
    out = []
    for t, x in constraints:
        t = float(t)
        x = float(x)
        if not math.isfinite(x) or x <= 0.0:
            raise ValueError(f"constraint levels must be finite and > 0, got x={x!r} at t={t!r}")
        out.append((t, x))
    return out


def trapezoid_weights(grid):
    """Trapezoid quadrature weights for an ordered (possibly non-uniform) grid."""
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 2:
        raise ValueError("trapezoid weights need an ordered grid of >= 2 points")
    if np.any(np.diff(g) <= 0):
        raise ValueError("grid must be strictly increasing")
    w = np.empty_like(g)
    w[0] = (g[1] - g[0]) / 2.0
    w[-1] = (g[-1] - g[-2]) / 2.0
    w[1:-1] = (g[2:] - g[:-2]) / 2.0
    return w


class AtomicRep:
    """Spectral family carried by finitely many atoms.

    ``values[k, i]`` is the spectral value of time ``times[k]`` at atom ``i``
    and ``masses[i] > 0`` is the control mass of the atom (1 by default,
    i.e. counting measure).  An optional ``kernel`` callable, mapping an
    array of times to a ``(n_times, n_atoms)`` value matrix, extends the
    family off the declared time list; ``time_domain`` records whether those
    off-grid times range over the reals or the integers.
    """

    encoding = "atomic"

    def __init__(self, alpha, times, values, masses=None, *, kernel=None,
                 time_domain="finite", allow_zero_atoms=False, meta=None):
        self.alpha = _check_alpha(alpha)
        self.times = np.atleast_1d(np.asarray(times, dtype=float))
        self.values = np.atleast_2d(np.asarray(values, dtype=float))
        if self.values.shape[0] != self.times.size:
            raise ValueError(
                f"values has {self.values.shape[0]} rows for {self.times.size} times")
        if not np.all(np.isfinite(self.times)):
            raise ValueError("times must be finite")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("spectral values must be finite and >= 0")
        n_atoms = self.values.shape[1]
        if masses is None:
            self.masses = np.ones(n_atoms)
        else:
            self.masses = np.atleast_1d(np.asarray(masses, dtype=float))
            if self.masses.shape != (n_atoms,):
                raise ValueError("one mass per atom required")
            if not np.all(np.isfinite(self.masses)) or np.any(self.masses <= 0):
                raise ValueError("atom masses must be finite and > 0")
        if not allow_zero_atoms and n_atoms and self.times.size:
            dead = ~np.any(self.values > 0, axis=0)
            if np.any(dead):
                raise ValueError(
                    f"atom(s) {np.nonzero(dead)[0].tolist()} carry no spectral mass; "
                    "drop them or pass allow_zero_atoms=True")
        if time_domain not in ("finite", "integer", "real"):
            raise ValueError(f"unknown time domain {time_domain!r}")
        self.time_domain = time_domain
        self.kernel = kernel
        self.meta = dict(meta or {})
        self._time_index = {float(t): k for k, t in enumerate(self.times)}

    @classmethod
    def from_kernel(cls, alpha, kernel, times, masses=None, *, time_domain="integer", meta=None):
        """Tabulate ``kernel`` on ``times`` and keep it for off-grid evaluation."""
        times = np.atleast_1d(np.asarray(times, dtype=float))
        values = np.atleast_2d(np.asarray(kernel(times), dtype=float))
        return cls(alpha, times, values, masses, kernel=kernel,
                   time_domain=time_domain, meta=meta)

    @property
    def n_atoms(self):
        return self.values.shape[1]

    def values_at(self, ts):
        """Spectral values at the requested times, shape (len(ts), n_atoms)."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        if self.kernel is not None:
            out = np.atleast_2d(np.asarray(self.kernel(ts), dtype=float))
            if out.shape != (ts.size, self.n_atoms):
                raise ValueError("kernel returned a matrix of the wrong shape")
            return out
        rows = np.empty((ts.size, self.n_atoms))
        for j, t in enumerate(ts):
            k = self._time_index.get(float(t))
            if k is None:
                raise ValueError(f"time {t!r} is not resolvable by this atomic representation")
            rows[j] = self.values[k]
        return rows

    def exponent(self, constraints, **_):
        constraints = _as_constraints(constraints)
        if not constraints:
            return ExponentEstimate(0.0)
        ts = np.array([t for t, _ in constraints])
        xs = np.array([x for _, x in constraints])
        rows = self.values_at(ts) / xs[:, None]
        per_atom = rows.max(axis=0)
        return ExponentEstimate(float(np.sum(self.masses * per_atom ** self.alpha)))

    def total_mass(self):
        return float(np.sum(self.masses))

    def subset(self, atom_indices):
        """Restriction to a subset of atoms (values and kernel columns kept)."""
        idx = np.atleast_1d(np.asarray(atom_indices, dtype=int))
        kernel = None
        if self.kernel is not None:
            base = self.kernel
            kernel = lambda ts, _b=base, _i=idx: np.atleast_2d(np.asarray(_b(ts)))[:, _i]
        return AtomicRep(self.alpha, self.times, self.values[:, idx], self.masses[idx],
                         kernel=kernel, time_domain=self.time_domain,
                         allow_zero_atoms=True, meta=self.meta)

    # classification protocol ------------------------------------------------
    def classification_points(self):
        return [(int(i), float(self.masses[i])) for i in range(self.n_atoms)]

    def profiles_at(self, ts):
        """Value matrix over arbitrary times for co-spectral integration."""
        if self.kernel is None:
            raise ValueError("time profiles need a kernel-backed atomic representation")
        return self.values_at(ts)

    def time_profile(self, point, ts):
        return self.profiles_at(ts)[:, int(point)]

    def time_profile_breakpoints(self, point):
        return []

    def select_points(self, points):
        return self.subset([int(p) for p in points])

    # serialization ------------------------------------------------------------
    def to_json_dict(self):
        _require_finite(self.values, "values")
        return {
            "type": "atomic",
            "alpha": self.alpha,
            "times": self.times.tolist(),
            "atoms": {
                "masses": self.masses.tolist(),
                "values": self.values.tolist(),
            },
        }

    @classmethod
    def from_json_dict(cls, doc):
        atoms = doc["atoms"]
        return cls(doc["alpha"], doc["times"], atoms["values"], atoms["masses"])

    def describe(self):
        d = {"encoding": "atomic", "alpha": self.alpha, "n_atoms": self.n_atoms,
             "n_times": int(self.times.size), "time_domain": self.time_domain}
        d.update(self.meta)
        return d


class GridRep:
    """Spectral family tabulated or evaluated on a quadrature grid.

    The control measure is the discrete measure placing ``weights[j]`` on
    ``s_grid[j]``; integrals over the support are quadrature sums.  Either a
    ``kernel(ts, s_grid) -> (n_times, n_s)`` callable or a tabulated
    ``(times, values)`` pair must be supplied.  ``coverage=(lo, hi)``
    declares the time window the encoding is valid on; evaluation outside it
    raises instead of silently truncating the underlying integral.
    """

    encoding = "grid"

    def __init__(self, alpha, s_grid, weights, *, kernel=None, times=None, values=None,
                 time_domain="finite", coverage=None, weight_rule="custom",
                 quad_tol=None, feature_times=None, meta=None):
        self.alpha = _check_alpha(alpha)
        self.s_grid = np.atleast_1d(np.asarray(s_grid, dtype=float))
        self.weights = np.atleast_1d(np.asarray(weights, dtype=float))
        if self.weights.shape != self.s_grid.shape:
            raise ValueError("one quadrature weight per grid point required")
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights < 0):
            raise ValueError("quadrature weights must be finite and >= 0")
        if kernel is None and values is None:
            raise ValueError("GridRep needs a kernel or a tabulated value matrix")
        self.kernel = kernel
        if values is not None:
            if times is None:
                raise ValueError("tabulated GridRep needs its time list")
            self.times = np.atleast_1d(np.asarray(times, dtype=float))
            self.values = np.atleast_2d(np.asarray(values, dtype=float))
            if self.values.shape != (self.times.size, self.s_grid.size):
                raise ValueError("value matrix must be (n_times, n_s)")
            if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
                raise ValueError("spectral values must be finite and >= 0")
            self._time_index = {float(t): k for k, t in enumerate(self.times)}
        else:
            self.times = None if times is None else np.atleast_1d(np.asarray(times, dtype=float))
            self.values = None
            self._time_index = None
        if time_domain not in ("finite", "integer", "real"):
            raise ValueError(f"unknown time domain {time_domain!r}")
        self.time_domain = time_domain
        self.coverage = None if coverage is None else (float(coverage[0]), float(coverage[1]))
        self.weight_rule = weight_rule
        self.quad_tol = None if quad_tol is None else float(quad_tol)
        self.feature_times = feature_times
        self.meta = dict(meta or {})

    @property
    def n_points(self):
        return self.s_grid.size

    def values_at(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        if self.kernel is not None:
            if self.coverage is not None:
                lo, hi = self.coverage
                if np.any(ts < lo) or np.any(ts > hi):
                    raise ValueError(
                        f"time(s) outside the covered window [{lo}, {hi}]; "
                        "rebuild the representation with a larger explicit window")
            out = np.atleast_2d(np.asarray(self.kernel(ts, self.s_grid), dtype=float))
            if out.shape != (ts.size, self.s_grid.size):
                raise ValueError("kernel returned a matrix of the wrong shape")
            return out
        rows = np.empty((ts.size, self.s_grid.size))
        for j, t in enumerate(ts):
            k = self._time_index.get(float(t))
            if k is None:
                raise ValueError(f"time {t!r} is not resolvable by this grid representation")
            rows[j] = self.values[k]
        return rows

    def exponent(self, constraints, **_):
        constraints = _as_constraints(constraints)
        if not constraints:
            return ExponentEstimate(0.0)
        ts = np.array([t for t, _ in constraints])
        xs = np.array([x for _, x in constraints])
        rows = self.values_at(ts) / xs[:, None]
        point_max = rows.max(axis=0)
        return ExponentEstimate(float(np.sum(self.weights * point_max ** self.alpha)))

    def total_mass(self):
        return float(np.sum(self.weights))

    def subset(self, indices):
        idx = np.atleast_1d(np.asarray(indices, dtype=int))
        kernel = None
        if self.kernel is not None:
            base = self.kernel
            kernel = lambda ts, s, _b=base: np.atleast_2d(np.asarray(_b(ts, s)))
        values = None if self.values is None else self.values[:, idx]
        return GridRep(self.alpha, self.s_grid[idx], self.weights[idx], kernel=kernel,
                       times=self.times, values=values, time_domain=self.time_domain,
                       coverage=self.coverage, weight_rule=self.weight_rule,
                       quad_tol=self.quad_tol, feature_times=self.feature_times,
                       meta=self.meta)

    # classification protocol ------------------------------------------------
    def classification_points(self):
        return [(int(j), float(self.weights[j])) for j in range(self.n_points)]

    def profiles_at(self, ts):
        """Value matrix over arbitrary times, bypassing the coverage window.

        Co-spectral integration in t is exact for any fixed support point, so
        the explicit-window guard of :meth:`values_at` does not apply here.
        """
        if self.kernel is None:
            raise ValueError("time profiles need a kernel-backed grid representation")
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.atleast_2d(np.asarray(self.kernel(ts, self.s_grid), dtype=float))
        if out.shape != (ts.size, self.s_grid.size):
            raise ValueError("kernel returned a matrix of the wrong shape")
        return out

    def time_profile(self, point, ts):
        return self.profiles_at(ts)[:, int(point)]

    def time_profile_breakpoints(self, point):
        if self.feature_times is None:
            return []
        return list(self.feature_times(float(self.s_grid[int(point)])))

    def select_points(self, points):
        return self.subset([int(p) for p in points])

    # serialization ------------------------------------------------------------
    def to_json_dict(self):
        if self.values is not None:
            values = self.values
            times = self.times
        elif self.times is not None:
            values = self.values_at(self.times)
            times = self.times
        else:
            raise ValueError("serializing a kernel GridRep requires a declared time list")
        _require_finite(values, "values")
        return {
            "type": "grid",
            "alpha": self.alpha,
            "times": times.tolist(),
            "s_grid": self.s_grid.tolist(),
            "weights": self.weights.tolist(),
            "values": values.tolist(),
        }

    @classmethod
    def from_json_dict(cls, doc):
        return cls(doc["alpha"], doc["s_grid"], doc["weights"], times=doc["times"],
                   values=doc["values"])

    def describe(self):
        d = {"encoding": "grid", "alpha": self.alpha, "n_points": self.n_points,
             "time_domain": self.time_domain, "weight_rule": self.weight_rule,
             "quad_tol": self.quad_tol, "coverage": self.coverage}
        d.update(self.meta)
        return d


class DoublyStochasticRep:
    """Spectral family given by draws of a positive process on a probability space.

    ``sampler(ts, n, rng)`` returns an ``(n, len(ts))`` matrix of independent
    realizations of the integrand at the requested times.  Exponents are
    Monte-Carlo means of ``(max_j x_j**-1 Y_{t_j})**alpha`` and always carry a
    standard error; callers own the random stream.
    """

    encoding = "doubly_stochastic"

    def __init__(self, alpha, sampler, *, default_samples=100_000, meta=None):
        self.alpha = _check_alpha(alpha)
        self.sampler = sampler
        self.default_samples = int(default_samples)
        self.meta = dict(meta or {})

    def exponent(self, constraints, *, rng=None, n_samples=None):
        constraints = _as_constraints(constraints)
        if not constraints:
            return ExponentEstimate(0.0)
        if rng is None:
            raise ValueError("Monte-Carlo exponents need a caller-owned random generator")
        n = self.default_samples if n_samples is None else int(n_samples)
        if n < 2:
            raise ValueError("need at least 2 Monte-Carlo samples to report a standard error")
        ts = np.array([t for t, _ in constraints])
        xs = np.array([x for _, x in constraints])
        draws = np.asarray(self.sampler(ts, n, rng), dtype=float)
        if draws.shape != (n, ts.size):
            raise ValueError("sampler returned a matrix of the wrong shape")
        if np.any(draws < 0) or not np.all(np.isfinite(draws)):
            raise ValueError("sampler must produce finite nonnegative realizations")
        vals = (draws / xs[None, :]).max(axis=1) ** self.alpha
        mean = float(np.mean(vals))
        stderr = float(np.std(vals, ddof=1) / math.sqrt(n))
        return ExponentEstimate(mean, stderr, n)

    def describe(self):
        d = {"encoding": "doubly_stochastic", "alpha": self.alpha}
        d.update(self.meta)
        return d


class HybridRep:
    """Independent max of a grid-carried part and an atomic part.

    The two carriers are disjoint by construction, so exponents add and the
    parts are independent processes.
    """

    encoding = "hybrid"

    def __init__(self, continuous=None, discrete=None):
        if continuous is None and discrete is None:
            raise ValueError("hybrid representation needs at least one part")
        if continuous is not None and discrete is not None \
                and continuous.alpha != discrete.alpha:
            raise ValueError("both parts must share the same tail index")
        self.continuous = continuous
        self.discrete = discrete
        self.alpha = (continuous or discrete).alpha

    @property
    def parts(self):
        return [p for p in (self.continuous, self.discrete) if p is not None]

    def exponent(self, constraints, **kw):
        total = 0.0
        var = 0.0
        n = None
        for part in self.parts:
            est = part.exponent(constraints, **kw)
            total += est.value
            var += est.stderr ** 2
            n = est.n_samples if n is None else n
        return ExponentEstimate(total, math.sqrt(var), n)

    def total_mass(self):
        return float(sum(p.total_mass() for p in self.parts))

    @property
    def time_domain(self):
        domains = {p.time_domain for p in self.parts}
        return domains.pop() if len(domains) == 1 else "finite"

    # classification protocol: keys are tagged with the part they live on
    def classification_points(self):
        out = []
        if self.continuous is not None:
            out.extend((("grid", k), m) for k, m in self.continuous.classification_points())
        if self.discrete is not None:
            out.extend((("atom", k), m) for k, m in self.discrete.classification_points())
        return out

    def profiles_at(self, ts):
        cols = []
        if self.continuous is not None:
            cols.append(self.continuous.profiles_at(ts))
        if self.discrete is not None:
            cols.append(self.discrete.profiles_at(ts))
        return np.hstack(cols)

    def time_profile(self, point, ts):
        tag, key = point
        part = self.continuous if tag == "grid" else self.discrete
        return part.time_profile(key, ts)

    def time_profile_breakpoints(self, point):
        tag, key = point
        part = self.continuous if tag == "grid" else self.discrete
        return part.time_profile_breakpoints(key)

    def select_points(self, points):
        grid_keys = [key for tag, key in points if tag == "grid"]
        atom_keys = [key for tag, key in points if tag == "atom"]
        cont = self.continuous.select_points(grid_keys) if grid_keys else None
        disc = self.discrete.select_points(atom_keys) if atom_keys else None
        if cont is not None and disc is not None:
            return HybridRep(cont, disc)
        return cont if cont is not None else disc

    def describe(self):
        return {"encoding": "hybrid",
                "continuous": None if self.continuous is None else self.continuous.describe(),
                "discrete": None if self.discrete is None else self.discrete.describe()}


# ---------------------------------------------------------------------------
# functional interface
# ---------------------------------------------------------------------------

def fdd_exponent(rep, constraints, *, rng=None, n_samples=None) -> ExponentEstimate:
    """Exponent of the joint lower-orthant probability at the given constraints.

    ``constraints`` is a list of ``(t, x)`` pairs with ``x > 0``.  Exact for
    atomic encodings, a quadrature sum for grid encodings, and a Monte-Carlo
    mean with standard error for doubly stochastic ones (pass ``rng``).
    An empty constraint list has exponent 0.
    """
    return rep.exponent(constraints, rng=rng, n_samples=n_samples)


def fdd_probability(rep, constraints, *, rng=None, n_samples=None) -> float:
    """Joint probability ``P(X_{t_j} <= x_j for all j) = exp(-exponent)``."""
    est = fdd_exponent(rep, constraints, rng=rng, n_samples=n_samples)
    return math.exp(-est.value)


def scale_coefficient(rep, combo, *, rng=None, n_samples=None) -> float:
    """Scale of the max-linear combination ``max_j c_j X_{t_j}``, ``c_j >= 0``.

    Zero-coefficient terms drop out (they are the neutral element of max).
    """
    alpha = rep.alpha
    constraints = []
    for t, c in combo:
        c = float(c)
        if not math.isfinite(c) or c < 0:
            raise ValueError(f"combination coefficients must be finite and >= 0, got {c!r}")
        if c > 0:
            constraints.append((t, 1.0 / c))
    if not constraints:
        return 0.0
    est = fdd_exponent(rep, constraints, rng=rng, n_samples=n_samples)
    return est.value ** (1.0 / alpha)


def spectral_distance(rep_a, t_a, rep_b, t_b) -> float:
    """Distance ``integral of |f^alpha - g^alpha| d mu`` between two spectral functions.

    ``f`` is the function of ``rep_a`` at time ``t_a`` and ``g`` that of
    ``rep_b`` at ``t_b``; both representations must use the same encoding on
    the same support (identical atoms/masses or identical grid/weights).
    Zero exactly when the functions agree mu-almost everywhere on the encoded
    support; symmetric in its arguments.
    """
    if rep_a.encoding != rep_b.encoding:
        raise ValueError("spectral distance needs both functions in the same encoding")
    if rep_a.alpha != rep_b.alpha:
        raise ValueError("spectral distance needs a common tail index")
    if rep_a.encoding == "atomic":
        if rep_a.n_atoms != rep_b.n_atoms or not np.array_equal(rep_a.masses, rep_b.masses):
            raise ValueError("atomic supports differ; cannot compare spectral functions")
        mu = rep_a.masses
    elif rep_a.encoding == "grid":
        if not (np.array_equal(rep_a.s_grid, rep_b.s_grid)
                and np.array_equal(rep_a.weights, rep_b.weights)):
            raise ValueError("grid supports differ; cannot compare spectral functions")
        mu = rep_a.weights
    else:
        raise ValueError(f"spectral distance is not defined for {rep_a.encoding!r} encodings")
    f = rep_a.values_at([t_a])[0]
    g = rep_b.values_at([t_b])[0]
    a = rep_a.alpha
    return float(np.sum(mu * np.abs(f ** a - g ** a)))


def independent_blocks(rep: AtomicRep, blocks) -> bool:
    """True when the blocks of times load pairwise disjoint sets of atoms.

    For atomic encodings independence of the block processes is equivalent to
    disjointness of their spectral supports.
    """
    if rep.encoding != "atomic":
        raise ValueError("independence via disjoint supports is decided on atomic encodings")
    supports = []
    for block in blocks:
        rows = rep.values_at(list(block))
        supports.append(np.any(rows > 0, axis=0))
    for i in range(len(supports)):
        for j in range(i + 1, len(supports)):
            if np.any(supports[i] & supports[j]):
                return False
    return True


@dataclass
class StationarityReport:
    stationary: bool
    max_abs_deviation: float
    max_z: float
    tol: float
    z_threshold: float
    probes: list = field(default_factory=list)


def check_stationarity(rep, shifts, probes, *, tol=1e-6, z_threshold=4.0,
                       rng=None, n_samples=None) -> StationarityReport:
    """Test shift-invariance of the exponent functional on the given probes.

    Each probe is a constraint list; for every shift ``tau`` the exponent of
    the probe and of the probe translated by ``tau`` are compared.  Exact and
    quadrature branches compare within ``tol``; Monte-Carlo branches compare
    by z-score against the combined standard errors.
    """
    report = StationarityReport(True, 0.0, 0.0, float(tol), float(z_threshold))
    for probe in probes:
        probe = _as_constraints(probe)
        base = fdd_exponent(rep, probe, rng=rng, n_samples=n_samples)
        for tau in shifts:
            shifted = [(t + float(tau), x) for t, x in probe]
            other = fdd_exponent(rep, shifted, rng=rng, n_samples=n_samples)
            dev = abs(base.value - other.value)
            se = math.hypot(base.stderr, other.stderr)
            entry = {"probe": probe, "shift": float(tau), "base": base.value,
                     "shifted": other.value, "abs_deviation": dev, "combined_se": se}
            if se > 0:
                z = dev / se
                entry["z"] = z
                report.max_z = max(report.max_z, z)
                if z > z_threshold:
                    report.stationary = False
            else:
                report.max_abs_deviation = max(report.max_abs_deviation, dev)
                if dev > tol:
                    report.stationary = False
            report.probes.append(entry)
    return report


# ---------------------------------------------------------------------------
# JSON serialization (atomic and tabulated grid encodings)
# ---------------------------------------------------------------------------

def _require_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"cannot serialize non-finite {what}")


def rep_to_json_dict(rep):
    return rep.to_json_dict()


def rep_from_json_dict(doc):
    kind = doc.get("type")
    if kind == "atomic":
        return AtomicRep.from_json_dict(doc)
    if kind == "grid":
        return GridRep.from_json_dict(doc)
    raise ValueError(f"unknown representation document type {kind!r}")


def save_rep(rep, path):
    with open(path, "w") as fh:
        json.dump(rep_to_json_dict(rep), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_rep(path):
    with open(path) as fh:
        return rep_from_json_dict(json.load(fh))

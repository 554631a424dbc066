"""Scalar alpha-Frechet arithmetic: CDF, quantile, sampling, max-scale algebra.

A positive random variable Z is alpha-Frechet with scale coefficient
``sigma >= 0`` when ``P(Z <= x) = exp(-sigma**alpha * x**(-alpha))`` for
``x > 0``.  The degenerate case ``sigma == 0`` (Z identically zero) is
admitted as the neutral element of the pointwise-max algebra.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "frechet_cdf",
    "frechet_quantile",
    "sample_standard_frechet",
    "max_scale",
]

# exp() overflows float64 above ~709.8 and underflows below ~-745; clamping
# keeps the CDF at an exact 0.0 or 1.0 instead of raising overflow warnings
_EXP_HI = 709.0
_EXP_LO = -745.0


def _check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(f"tail index alpha must be a positive finite real, got {alpha!r}")
    return alpha


def _check_scale(sigma) -> float:
    sigma = float(sigma)
    if not math.isfinite(sigma) or sigma < 0.0:
        raise ValueError(f"scale coefficient must be a finite real >= 0, got {sigma!r}")
    return sigma


def frechet_cdf(x, sigma, alpha):
    """Evaluate P(Z <= x) for an alpha-Frechet variable of scale ``sigma``.

    Accepts a scalar or array ``x``; every entry must be finite and positive.
    Returns 1.0 identically when ``sigma == 0`` (degenerate variable).
    """
    alpha = _check_alpha(alpha)
    sigma = _check_scale(sigma)
    xs = np.asarray(x, dtype=float)
    if xs.size and (not np.all(np.isfinite(xs)) or np.any(xs <= 0.0)):
        raise ValueError("frechet_cdf requires finite x > 0")
    if sigma == 0.0:
        out = np.ones_like(xs)
    else:
        # sigma^alpha * x^-alpha computed in log space so extreme alpha*log(x)
        # saturates to exp(+-745) rather than overflowing to NaN
        w = alpha * (math.log(sigma) - np.log(xs))
        out = np.exp(-np.exp(np.clip(w, _EXP_LO, _EXP_HI)))
    if np.ndim(x) == 0:
        return float(out)
    return out


def frechet_quantile(p, sigma, alpha):
    """Inverse CDF: the x with ``frechet_cdf(x, sigma, alpha) == p``, p in (0,1)."""
    alpha = _check_alpha(alpha)
    sigma = _check_scale(sigma)
    ps = np.asarray(p, dtype=float)
    if ps.size and (np.any(ps <= 0.0) or np.any(ps >= 1.0)):
        raise ValueError("frechet_quantile requires probabilities strictly inside (0, 1)")
    out = sigma * (-np.log(ps)) ** (-1.0 / alpha)
    if np.ndim(p) == 0:
        return float(out)
    return out


def sample_standard_frechet(alpha, rng, size=None):
    """Draw standard alpha-Frechet variates (scale 1) by inverse-CDF sampling.

    ``Z = (-log U)**(-1/alpha)`` with U uniform on the open interval (0, 1);
    a uniform draw of exactly 0.0 is nudged to the smallest positive double so
    the output is always positive and finite.
    """
    alpha = _check_alpha(alpha)
    u = rng.random(size)
    u = np.maximum(u, np.finfo(float).tiny)
    z = (-np.log(u)) ** (-1.0 / alpha)
    if size is None:
        return float(z)
    return z


def max_scale(terms, alpha):
    """Scale coefficient of ``max_i a_i * Z_i`` for independent standard terms.

    ``terms`` is an iterable of ``(a_i, sigma_i)`` pairs with ``a_i >= 0``;
    the result is ``(sum (a_i * sigma_i)**alpha) ** (1/alpha)``.  An empty
    list yields the degenerate scale 0.
    """
    alpha = _check_alpha(alpha)
    total = 0.0
    for a, sigma in terms:
        a = float(a)
        if not math.isfinite(a) or a < 0.0:
            raise ValueError(f"max-linear coefficients must be finite and >= 0, got {a!r}")
        total += (a * _check_scale(sigma)) ** alpha
    return total ** (1.0 / alpha)

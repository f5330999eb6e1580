"""Alternative families embedding uniformity at θ = 0.

Each family packages the density g(x, θ), its CDF, an exact inverse-CDF
sampler, the score h(x) = ∂_θ g(x, θ)|_0, the cumulative score
H(t) = ∫_0^t h, and the Fisher information I = ∫ h². Scores drive the
efficiency functionals; samplers drive the power harness.

Families
--------
``g1``          power density (θ+1) x^θ
``g2``          linear tilt 1 + θ(2x − 1)
``g3``          uniform/power mixture 1 − θ + βθ x^{β−1}   (β > 1)
``g4``          cosine tilt 1 − θπ cos(πx)
``loc-gauss``   Gaussian location shift pushed to [0,1] through Φ
``loc-cauchy``  Cauchy location shift pushed to [0,1] through its CDF
``lo:m=K``      locally optimal family 1 + θ·scale·f_K built from the
                principal eigenfunction of the order-K operator
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import ndtr, ndtri

from . import rng as _rng
from .errors import BadParameter, DensityNotPositive, ThetaOutOfRange
from .samples import Sample, make_sample
from .spectral import SpectralSolution, solve_tm_eigen

#: default scale for locally optimal families; at this value the order-1
#: family is exactly 1 + θ cos(πx)
DEFAULT_LO_SCALE = 2.0**-0.5


@dataclass(frozen=True)
class AlternativeFamily:
    """Immutable bundle of density, CDF, sampler and score machinery."""

    id: str
    density: Callable  # (x, theta) -> g
    cdf: Callable      # (x, theta) -> G
    score_h: Callable  # x -> h(x)
    cum_score_H: Callable  # t -> H(t)
    fisher_I: float
    theta_range: tuple[float, float]
    _sampler: Callable = field(repr=False, compare=False, default=None)

    def check_theta(self, theta: float) -> float:
        lo, hi = self.theta_range
        if not (lo <= theta <= hi):
            raise ThetaOutOfRange(
                f"theta={theta!r} outside [{lo}, {hi}] for family {self.id}"
            )
        return float(theta)


def _bisect_inverse(objective, u: np.ndarray, iterations: int = 52) -> np.ndarray:
    """Invert a monotone map on [0, 1] by vectorised bisection."""
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        below = objective(mid) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def _g1() -> AlternativeFamily:
    def density(x, theta):
        x = np.asarray(x, dtype=np.float64)
        return (theta + 1.0) * x**theta

    def cdf(x, theta):
        return np.asarray(x, dtype=np.float64) ** (theta + 1.0)

    def score(x):
        x = np.asarray(x, dtype=np.float64)
        with np.errstate(divide="ignore"):
            return 1.0 + np.log(x)

    def cum(t):
        t = np.asarray(t, dtype=np.float64)
        return np.where(t > 0.0, t * np.log(np.where(t > 0.0, t, 1.0)), 0.0)

    def sampler(theta, n, gen):
        return gen.random(n) ** (1.0 / (theta + 1.0))

    return AlternativeFamily("g1", density, cdf, score, cum, 1.0, (0.0, np.inf), sampler)


def _g2() -> AlternativeFamily:
    def density(x, theta):
        return 1.0 + theta * (2.0 * np.asarray(x, dtype=np.float64) - 1.0)

    def cdf(x, theta):
        x = np.asarray(x, dtype=np.float64)
        return x + theta * (x * x - x)

    def sampler(theta, n, gen):
        u = gen.random(n)
        if theta < 1e-12:
            return u
        disc = (1.0 - theta) ** 2 + 4.0 * theta * u
        return (theta - 1.0 + np.sqrt(disc)) / (2.0 * theta)

    return AlternativeFamily(
        "g2", density, cdf,
        lambda x: 2.0 * np.asarray(x, dtype=np.float64) - 1.0,
        lambda t: np.asarray(t, dtype=np.float64) ** 2 - np.asarray(t, dtype=np.float64),
        1.0 / 3.0, (0.0, 1.0), sampler,
    )


def _g3(beta: float) -> AlternativeFamily:
    if beta <= 1.0:
        raise BadParameter(f"mixture exponent must satisfy beta > 1, got {beta!r}")
    beta = float(beta)
    fid = f"g3:beta={beta:g}"

    def density(x, theta):
        x = np.asarray(x, dtype=np.float64)
        return 1.0 - theta + beta * theta * x ** (beta - 1.0)

    def cdf(x, theta):
        x = np.asarray(x, dtype=np.float64)
        return (1.0 - theta) * x + theta * x**beta

    def sampler(theta, n, gen):
        coin = gen.random(n)
        base = gen.random(n)
        return np.where(coin < theta, base ** (1.0 / beta), base)

    return AlternativeFamily(
        fid, density, cdf,
        lambda x: beta * np.asarray(x, dtype=np.float64) ** (beta - 1.0) - 1.0,
        lambda t: np.asarray(t, dtype=np.float64) ** beta - np.asarray(t, dtype=np.float64),
        (beta - 1.0) ** 2 / (2.0 * beta - 1.0), (0.0, 1.0), sampler,
    )


def _g4() -> AlternativeFamily:
    pi = np.pi

    def density(x, theta):
        return 1.0 - theta * pi * np.cos(pi * np.asarray(x, dtype=np.float64))

    def cdf(x, theta):
        x = np.asarray(x, dtype=np.float64)
        return x - theta * np.sin(pi * x)

    def sampler(theta, n, gen):
        u = gen.random(n)
        if theta < 1e-12:
            return u
        return _bisect_inverse(lambda x: x - theta * np.sin(pi * x), u)

    return AlternativeFamily(
        "g4", density, cdf,
        lambda x: -pi * np.cos(pi * np.asarray(x, dtype=np.float64)),
        lambda t: -np.sin(pi * np.asarray(t, dtype=np.float64)),
        pi * pi / 2.0, (0.0, 1.0 / pi), sampler,
    )


def _loc_gauss() -> AlternativeFamily:
    def density(u, theta):
        z = ndtri(np.clip(np.asarray(u, dtype=np.float64), 1e-300, 1.0 - 1e-16))
        return np.exp(theta * z - 0.5 * theta * theta)

    def cdf(u, theta):
        z = ndtri(np.clip(np.asarray(u, dtype=np.float64), 1e-300, 1.0 - 1e-16))
        return ndtr(z - theta)

    def score(u):
        return ndtri(np.asarray(u, dtype=np.float64))

    def cum(t):
        t = np.asarray(t, dtype=np.float64)
        z = ndtri(np.clip(t, 1e-300, 1.0 - 1e-16))
        out = -np.exp(-0.5 * z * z) / np.sqrt(2.0 * np.pi)
        return np.where((t <= 0.0) | (t >= 1.0), 0.0, out)

    def sampler(theta, n, gen):
        return ndtr(gen.standard_normal(n) + theta)

    return AlternativeFamily("loc-gauss", density, cdf, score, cum, 1.0,
                             (-np.inf, np.inf), sampler)


def _loc_cauchy() -> AlternativeFamily:
    pi = np.pi

    def _quantile(u):
        return np.tan(pi * (np.asarray(u, dtype=np.float64) - 0.5))

    def density(u, theta):
        z = _quantile(np.clip(u, 1e-12, 1.0 - 1e-12))
        return (1.0 + z * z) / (1.0 + (z - theta) ** 2)

    def cdf(u, theta):
        z = _quantile(np.clip(u, 1e-12, 1.0 - 1e-12))
        return 0.5 + np.arctan(z - theta) / pi

    def sampler(theta, n, gen):
        return 0.5 + np.arctan(gen.standard_cauchy(n) + theta) / pi

    return AlternativeFamily(
        "loc-cauchy", density, cdf,
        lambda u: -np.sin(2.0 * pi * np.asarray(u, dtype=np.float64)),
        lambda t: (np.cos(2.0 * pi * np.asarray(t, dtype=np.float64)) - 1.0) / (2.0 * pi),
        0.5, (-np.inf, np.inf), sampler,
    )


def locally_optimal_density(m: int, theta: float,
                            solution: SpectralSolution | None = None,
                            scale: float = DEFAULT_LO_SCALE) -> AlternativeFamily:
    """Family 1 + θ·scale·f_m(x) built on the principal eigenfunction f_m.

    The score is scale·f_m, so the order-m test attains local efficiency 1
    against this family. ``theta`` is validated for positivity of the
    density (raises :class:`DensityNotPositive` otherwise); the returned
    family's ``theta_range`` caps at the positivity bound. At the default
    scale the m = 1 family is exactly 1 + θ cos(πx).
    """
    if scale <= 0.0:
        raise BadParameter(f"scale must be positive, got {scale!r}")
    if solution is None:
        solution = solve_tm_eigen(m)
    f_max = float(np.max(np.abs(solution.values)))
    theta_max = 1.0 / (scale * f_max)
    if abs(theta) * scale * f_max >= 1.0:
        raise DensityNotPositive(
            f"theta={theta!r} makes 1 + theta*scale*f negative (|theta| must be < {theta_max:g})"
        )
    # the id round-trips through parse_family_spec (worker processes rebuild from it)
    fid = f"lo:m={m}" if scale == DEFAULT_LO_SCALE else f"lo:m={m},scale={scale:.17g}"
    f = solution.eigenfunction
    y = solution.antiderivative

    def density(x, th):
        return 1.0 + th * scale * f(np.asarray(x, dtype=np.float64))

    def cdf(x, th):
        x = np.asarray(x, dtype=np.float64)
        return x + th * scale * y(x)

    def sampler(th, n, gen):
        u = gen.random(n)
        if abs(th) < 1e-14:
            return u
        return _bisect_inverse(lambda x: x + th * scale * y(x), u)

    return AlternativeFamily(
        fid, density, cdf,
        lambda x: scale * f(np.asarray(x, dtype=np.float64)),
        lambda t: scale * y(np.asarray(t, dtype=np.float64)),
        scale * scale, (0.0, np.nextafter(theta_max, 0.0)), sampler,
    )


_BUILDERS = {
    "g1": _g1,
    "g2": _g2,
    "g3": _g3,
    "g4": _g4,
    "loc-gauss": _loc_gauss,
    "loc-cauchy": _loc_cauchy,
}


def family(fid: str, **params) -> AlternativeFamily:
    """Construct a family by identifier; ``g3`` takes ``beta``, ``lo`` takes ``m``."""
    if fid == "g3":
        return _g3(params.pop("beta", 3.0))
    if fid == "lo":
        m = int(params.pop("m", 1))
        return locally_optimal_density(m, 0.0, scale=params.pop("scale", DEFAULT_LO_SCALE))
    builder = _BUILDERS.get(fid)
    if builder is None:
        raise BadParameter(f"unknown family {fid!r}; expected one of "
                           f"{sorted(_BUILDERS)} or 'lo'")
    if params:
        raise BadParameter(f"family {fid!r} takes no parameters, got {params}")
    return builder()


def parse_family_spec(spec: str) -> AlternativeFamily:
    """Parse a CLI specifier like ``g1``, ``g3:beta=3`` or ``lo:m=2``."""
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, _, value = item.partition("=")
            if not value:
                raise BadParameter(f"malformed family parameter {item!r} in {spec!r}")
            params[key.strip()] = float(value)
    return family(name.strip(), **params)


def sample_from(fam: AlternativeFamily, theta: float, n: int, rng_seed) -> Sample:
    """Draw n i.i.d. observations from the family at ``theta``.

    ``rng_seed`` is either an integer seed (expanded through the package's
    counter-based stream scheme) or a ready ``numpy.random.Generator``.
    """
    theta = fam.check_theta(theta)
    if n < 1:
        raise BadParameter(f"need n >= 1, got {n!r}")
    if isinstance(rng_seed, np.random.Generator):
        gen = rng_seed
    else:
        gen = _rng.stream(int(rng_seed), _rng.DOMAIN_SAMPLE, _rng.family_key(fam.id))
    values = np.clip(fam._sampler(theta, int(n), gen), 0.0, 1.0)
    return make_sample(values)


def kl_distance(fam: AlternativeFamily, theta: float) -> float:
    """Kullback-Leibler distance K(θ) = ∫ g log g dx from uniformity."""
    theta = fam.check_theta(theta)
    if theta == 0.0:
        return 0.0

    def integrand(x):
        g = float(np.asarray(fam.density(x, theta)))
        if g <= 0.0:
            return 0.0
        return g * np.log(g)

    value, _ = integrate.quad(integrand, 0.0, 1.0, limit=200)
    return float(value)


def reciprocal_cosine_density(x, theta: float, renormalize: str = "auto") -> np.ndarray:
    """Second locally optimal family for the order-1 test (density only).

    Evaluates c(θ) / (1 − θ cos(πx)) with the verbatim constant
    c(θ) = 3(2−θ)θ / (2 arctan √(3θ/(2−θ))). That constant fails the
    ∫ g = 1 check (it tends to 0, not 1, as θ → 0), so ``renormalize="auto"``
    replaces it with the numerically computed normaliser whenever the check
    fails; ``"never"`` returns the verbatim evaluation. No sampler is
    provided for this family.
    """
    if not (0.0 <= theta < 1.0):
        raise ThetaOutOfRange(f"theta={theta!r} outside [0, 1) for the reciprocal family")
    x = np.asarray(x, dtype=np.float64)
    if theta == 0.0:
        return np.ones_like(x)
    base = 1.0 / (1.0 - theta * np.cos(np.pi * x))
    c = _reciprocal_verbatim_constant(theta)
    if renormalize == "never":
        return c * base
    if renormalize != "auto":
        raise BadParameter(f"renormalize must be 'auto' or 'never', got {renormalize!r}")
    total = c * _reciprocal_base_integral(theta)
    if abs(total - 1.0) > 1e-8:
        c = 1.0 / _reciprocal_base_integral(theta)
    return c * base


def reciprocal_cosine_normalization_gap(theta: float) -> float:
    """|∫ verbatim density − 1|: how far the printed constant is from normalising."""
    if theta == 0.0:
        return 0.0
    return abs(_reciprocal_verbatim_constant(theta) * _reciprocal_base_integral(theta) - 1.0)


def _reciprocal_verbatim_constant(theta: float) -> float:
    return 3.0 * (2.0 - theta) * theta / (2.0 * np.arctan(np.sqrt(3.0 * theta / (2.0 - theta))))


def _reciprocal_base_integral(theta: float) -> float:
    value, _ = integrate.quad(lambda x: 1.0 / (1.0 - theta * np.cos(np.pi * x)), 0.0, 1.0,
                              limit=200)
    return float(value)

"""The kernel H(z) = (2/z) int_{1/sqrt e}^1 (1 - e^{-zu}) du/u, its zeros,
and the two spectrum constants delta_0, delta_1.

H is entire (removable singularity at 0).  Work goes through
K(z) = z H(z)/2 = 1/2 - G(z) with G(z) = int_a^1 e^{-zu}/u du, a = e^{-1/2}:
K has the same zeros away from 0, a closed-form derivative
K'(z) = (e^{-za} - e^{-z})/z, and G admits three complementary evaluation
routes (series, panel quadrature, integration-by-parts asymptotics).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import contour
from .errors import ContourError, DomainError
from .special import gauss_legendre_panels

_A = math.exp(-0.5)
_SERIES_RADIUS = 0.1
_ASYMP_RADIUS = 60.0


def _h_series(z: np.ndarray, terms: int = 40) -> np.ndarray:
    """2 sum_{m>=1} (-1)^{m+1} z^{m-1} (1-e^{-m/2})/(m m!); entire, used
    near 0 and as an independent oracle elsewhere."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros_like(z)
    zpow = np.ones_like(z)
    fact = 1.0
    for m in range(1, terms + 1):
        fact *= m
        coeff = (1.0 - math.exp(-m / 2.0)) / (m * fact)
        out += (coeff if m % 2 == 1 else -coeff) * zpow
        zpow = zpow * z
    return 2.0 * out


def _g_quadrature(z: np.ndarray) -> np.ndarray:
    """G(z) by composite Gauss-Legendre, panel count scaled to |Im z|."""
    z = np.asarray(z, dtype=np.complex128)
    im_max = float(np.max(np.abs(z.imag))) if z.size else 0.0
    panels = max(4, int(math.ceil(im_max * (1.0 - _A) / 3.0)) + 2)
    xs, ws = gauss_legendre_panels(_A, 1.0, panels, nodes=16)
    return np.exp(-np.multiply.outer(z, xs)) @ (ws / xs)


def _g_asymptotic(z: np.ndarray, terms: int = 30) -> np.ndarray:
    """Integration by parts: G = sum (-1)^{k-1} (k-1)!/z^{k-1} A_k with
    A_k = e^{-za}/(z a^k) - e^{-z}/z; error beyond 30 terms is below
    1e-13 once |z| >= 60."""
    z = np.asarray(z, dtype=np.complex128)
    ea = np.exp(-z * _A) / z
    e1 = np.exp(-z) / z
    out = np.zeros_like(z)
    pref = np.ones_like(z)
    apow = _A
    for k in range(1, terms + 1):
        out += pref * (ea / apow - e1)
        pref = pref * (-k / z)
        apow *= _A
    return out


def _k_values(z) -> np.ndarray:
    """K(z) = 1/2 - G(z), branch-switched by |z|."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    out = np.empty_like(z)
    az = np.abs(z)
    small = az < _SERIES_RADIUS
    large = az > _ASYMP_RADIUS
    mid = ~small & ~large
    if small.any():
        out[small] = z[small] * _h_series(z[small]) / 2.0
    if mid.any():
        out[mid] = 0.5 - _g_quadrature(z[mid])
    if large.any():
        out[large] = 0.5 - _g_asymptotic(z[large])
    return out


def _k_prime(z: complex) -> complex:
    return (np.exp(-z * _A) - np.exp(-z)) / z


def h_eval(z):
    """H at a complex point or array."""
    scalar = np.isscalar(z) or np.asarray(z).ndim == 0
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    out = np.empty_like(zz)
    small = np.abs(zz) < _SERIES_RADIUS
    if small.any():
        out[small] = _h_series(zz[small])
    if (~small).any():
        zb = zz[~small]
        out[~small] = 2.0 * _k_values(zb) / zb
    return complex(out[0]) if scalar else out


def h_series_oracle(z, terms: int = 60) -> complex:
    """Taylor route alone; independent cross-check for moderate |z|."""
    return complex(_h_series(np.array([z]), terms)[0])


@dataclass(frozen=True)
class HZero:
    k: int
    z: complex
    residual: float
    asymptotic_gap: float


def asymptotic_seed(k: int) -> complex:
    return complex(-math.log(math.pi * k), 2.0 * math.pi * (k + 0.25))


def _strip_box(k: int):
    re_lo = -math.log(math.pi * k) - 3.0
    im_lo = 2.0 * math.pi * k - math.pi
    im_hi = 2.0 * math.pi * k + math.pi
    return re_lo, im_lo, im_hi


def _newton_k(z0: complex, k: int):
    re_lo, im_lo, im_hi = _strip_box(k)
    z = z0
    for _ in range(60):
        v = complex(_k_values(z)[0])
        if abs(v) <= 1e-13 * max(1.0, abs(z)):
            return z
        dv = _k_prime(z)
        z = z - v / dv
        if not (re_lo - 1.0 <= z.real <= 1.0 and im_lo - 2.0 <= z.imag <= im_hi + 2.0):
            return None
    return None


def _grid_fallback(k: int):
    re_lo, im_lo, im_hi = _strip_box(k)
    res = np.linspace(re_lo, 0.0, 80)
    ims = np.linspace(im_lo, im_hi, 80)
    zz = res[None, :] + 1j * ims[:, None]
    vals = np.abs(_k_values(zz.ravel())).reshape(zz.shape)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    return complex(zz[i, j])


def find_h_zeros(count: int, verify_winding: bool = True) -> list:
    """The first `count` upper-half-plane zeros, one per strip
    Im in (2 pi k - pi, 2 pi k + pi), Newton-refined from the asymptotic seed.
    """
    if not (1 <= count <= 200):
        raise DomainError("count must lie in [1, 200]")
    out = []
    for k in range(1, count + 1):
        seed = asymptotic_seed(k)
        z = _newton_k(seed, k)
        if z is None:
            z = _newton_k(_grid_fallback(k), k)
        if z is None:
            raise ContourError(f"no zero found in strip {k}")
        re_lo, im_lo, im_hi = _strip_box(k)
        if not (im_lo < z.imag < im_hi and z.real < 0):
            raise ContourError(f"zero escaped strip {k}: {z}")
        if verify_winding:
            corners = (
                complex(re_lo, im_lo),
                complex(0.0, im_lo),
                complex(0.0, im_hi),
                complex(re_lo, im_hi),
            )
            w = contour.winding_number(_k_values, corners, points_per_unit=8.0)
            if w != 1:
                raise ContourError(f"strip {k} winding is {w}, expected 1")
        z = complex(z)
        out.append(
            HZero(
                k=k,
                z=z,
                residual=float(abs(h_eval(z))),
                asymptotic_gap=float(abs(z - seed)),
            )
        )
    return out


# ---------------------------------------------------------------------------
# spectrum constants


@dataclass(frozen=True)
class SpectrumConstants:
    delta0: float
    delta1: float
    integral: float
    quad_error: float


def _log_ratio_integral(nodes: int) -> float:
    xs, ws = gauss_legendre_panels(1.0, math.sqrt(math.e), 4, nodes=nodes)
    return float(np.sum(ws * np.log(xs) / (xs + 1.0)))


def delta_constants() -> SpectrumConstants:
    """delta0 = 1 - log(1+sqrt e) + 2I, delta1 = 1 - 2 log(1+sqrt e) + 4I
    with I the integral of log t/(t+1) over [1, sqrt e]; the quadrature error
    is bounded by a node-doubling comparison."""
    i64 = _log_ratio_integral(64)
    i128 = _log_ratio_integral(128)
    err = abs(i64 - i128) + 1e-15
    ls = math.log(1.0 + math.sqrt(math.e))
    return SpectrumConstants(
        delta0=1.0 - ls + 2.0 * i128,
        delta1=1.0 - 2.0 * ls + 4.0 * i128,
        integral=i128,
        quad_error=err,
    )


def _check_unit_range(v: float, name: str) -> None:
    if not (1.0 / math.sqrt(math.e) <= v <= 1.0):
        raise DomainError(f"{name} must lie in [1/sqrt(e), 1]")


def mean_value_upper_bound(alpha: float) -> float:
    """max(|delta1|, 1/2 + 2 (log alpha)^2) for alpha in [1/sqrt e, 1]."""
    _check_unit_range(alpha, "alpha")
    c = delta_constants()
    return max(abs(c.delta1), 0.5 + 2.0 * math.log(alpha) ** 2)


def nonresidue_density_lower_bound(u: float) -> float:
    """min(delta0, 1/4 - (log u)^2) for u in [1/sqrt e, 1]."""
    _check_unit_range(u, "u")
    c = delta_constants()
    return min(c.delta0, 0.25 - math.log(u) ** 2)

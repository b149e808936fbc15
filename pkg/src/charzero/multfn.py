"""Completely multiplicative functions with |f| <= 1 and their mean values.

The toolkit: the pretentious distance, truncated Dirichlet series, the
maximizing twist (phi, M) of |F(1 + 1/log x + it)|, the resulting mean-value
bound, the slow-variation residuals, and the large-mean witness search used
by the product/power scenarios.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dirichlet, sieve
from .errors import DomainError, SieveLimitError

DEFAULT_FUNCTION_LIMIT = 10**7

# fixed corpus seed, echoed in reports
DEFAULT_SEED = 20260814


class CompletelyMultiplicativeFunction:
    """Base: values determined by unimodular-or-zero data on primes."""

    limit: int = DEFAULT_FUNCTION_LIMIT
    label: str = "abstract"

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def values_up_to(self, x) -> np.ndarray:
        """Array v with v[n] = f(n) for 0 <= n <= floor(x); v[0] = 0.

        Generic path: multiply one prime factor at a time over sieved
        prime-power progressions.
        """
        n = self._check_range(x)
        ps = sieve.primes_up_to(n)
        vals = np.ones(n + 1, dtype=np.complex128)
        vals[0] = 0.0
        for p, v in zip(ps, self.prime_values(ps)):
            pk = p
            while pk <= n:
                vals[pk::pk] *= v
                pk *= p
        return vals

    def _check_range(self, x) -> int:
        n = int(math.floor(x))
        if n < 1:
            raise DomainError("need x >= 1")
        if n > self.limit:
            raise SieveLimitError(f"{x} exceeds function limit {self.limit}")
        return n

    def __mul__(self, other: "CompletelyMultiplicativeFunction"):
        return ProductFunction(self, other)

    def power(self, k: int) -> "CompletelyMultiplicativeFunction":
        return PowerFunction(self, k)

    def twist(self, phi: float) -> "CompletelyMultiplicativeFunction":
        return TwistedFunction(self, phi)

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class ConstantOne(CompletelyMultiplicativeFunction):
    label = "one"

    def prime_values(self, primes):
        return np.ones(len(primes), dtype=np.complex128)

    def values_up_to(self, x):
        n = self._check_range(x)
        vals = np.ones(n + 1, dtype=np.complex128)
        vals[0] = 0.0
        return vals


class ArchimedeanTwist(CompletelyMultiplicativeFunction):
    """f(n) = n^{i alpha}."""

    def __init__(self, alpha: float):
        self.alpha = float(alpha)
        self.label = f"ntoi:{self.alpha:g}"

    def prime_values(self, primes):
        return np.exp(1j * self.alpha * np.log(primes.astype(np.float64)))

    def values_up_to(self, x):
        n = self._check_range(x)
        out = np.empty(n + 1, dtype=np.complex128)
        out[0] = 0.0
        m = np.arange(1, n + 1, dtype=np.float64)
        out[1:] = np.exp(1j * self.alpha * np.log(m))
        return out


class CharacterFunction(CompletelyMultiplicativeFunction):
    def __init__(self, chi: dirichlet.Character):
        self.chi = chi
        self.label = f"char:{chi.q}.{chi.conrey}"

    def prime_values(self, primes):
        table = dirichlet.value_table(self.chi)
        return table[np.asarray(primes) % self.chi.q]

    def values_up_to(self, x):
        n = self._check_range(x)
        table = dirichlet.value_table(self.chi)
        out = table[np.arange(n + 1) % self.chi.q].astype(np.complex128)
        out[0] = 0.0
        return out


class RandomPMFunction(CompletelyMultiplicativeFunction):
    """Independent +-1 on each prime, drawn once from a seeded generator."""

    def __init__(self, seed: int, limit: int = 10**6):
        self.seed = int(seed)
        self.limit = int(limit)
        self.label = f"randpm:{self.seed}"
        ps = sieve.primes_up_to(self.limit)
        rng = np.random.default_rng(self.seed)
        self._signs = np.where(rng.random(len(ps)) < 0.5, -1.0, 1.0)
        self._primes = ps

    def prime_values(self, primes):
        primes = np.asarray(primes)
        if primes.size and primes[-1] > self.limit:
            raise SieveLimitError("prime beyond the sampled range")
        idx = np.searchsorted(self._primes, primes)
        return self._signs[idx].astype(np.complex128)


class TwistedFunction(CompletelyMultiplicativeFunction):
    """f_phi(n) = f(n) n^{-i phi}; a view, never a new prime table."""

    def __init__(self, base: CompletelyMultiplicativeFunction, phi: float):
        self.base = base
        self.phi = float(phi)
        self.limit = base.limit
        self.label = f"twist({base.label},{self.phi:g})"

    def prime_values(self, primes):
        lp = np.log(np.asarray(primes, dtype=np.float64))
        return self.base.prime_values(primes) * np.exp(-1j * self.phi * lp)

    def values_up_to(self, x):
        vals = self.base.values_up_to(x)
        n = len(vals) - 1
        m = np.arange(1, n + 1, dtype=np.float64)
        vals[1:] = vals[1:] * np.exp(-1j * self.phi * np.log(m))
        return vals


class ProductFunction(CompletelyMultiplicativeFunction):
    def __init__(self, f, g):
        self.f, self.g = f, g
        self.limit = min(f.limit, g.limit)
        self.label = f"({f.label})*({g.label})"

    def prime_values(self, primes):
        return self.f.prime_values(primes) * self.g.prime_values(primes)

    def values_up_to(self, x):
        return self.f.values_up_to(x) * self.g.values_up_to(x)


class PowerFunction(CompletelyMultiplicativeFunction):
    def __init__(self, f, k: int):
        if k < 1:
            raise DomainError("power needs k >= 1")
        self.f, self.k = f, int(k)
        self.limit = f.limit
        self.label = f"({f.label})^{k}"

    def prime_values(self, primes):
        return self.f.prime_values(primes) ** self.k

    def values_up_to(self, x):
        return self.f.values_up_to(x) ** self.k


def parse_function(spec: str) -> CompletelyMultiplicativeFunction:
    """CLI function specs: one | ntoi:<alpha> | char:<q>.<conrey> | randpm:<seed>."""
    if spec == "one":
        return ConstantOne()
    kind, _, arg = spec.partition(":")
    if kind == "ntoi" and arg:
        return ArchimedeanTwist(float(arg))
    if kind == "char" and arg:
        qs, _, cs = arg.partition(".")
        return CharacterFunction(dirichlet.character(int(qs), int(cs)))
    if kind == "randpm" and arg:
        return RandomPMFunction(int(arg))
    raise DomainError(f"unrecognized function spec: {spec!r}")


# ---------------------------------------------------------------------------
# distance and Dirichlet series


def mean_value(f: CompletelyMultiplicativeFunction, x) -> complex:
    n = int(math.floor(x))
    vals = f.values_up_to(n)
    return complex(np.sum(vals)) / x


def distance_sq(f, g, x) -> float:
    """Sum over p <= x of (1 - Re f(p) conj g(p))/p; terms clamped to >= 0."""
    n = int(math.floor(x))
    if n > f.limit or n > g.limit:
        raise SieveLimitError("x exceeds a function limit")
    if f is g:
        return 0.0
    ps = sieve.primes_up_to(n)
    if len(ps) == 0:
        return 0.0
    w = f.prime_values(ps) * np.conj(g.prime_values(ps))
    terms = np.maximum(1.0 - w.real, 0.0) / ps
    return float(np.sum(terms))


def distance(f, g, x) -> float:
    return math.sqrt(distance_sq(f, g, x))


def truncated_F(f, s: complex, n_max: int):
    """(sum_{n<=n_max} f(n) n^{-s}, integral-comparison tail bound); Re s > 1."""
    s = complex(s)
    if s.real <= 1:
        raise DomainError("Dirichlet series needs Re s > 1 under |f| <= 1")
    vals = f.values_up_to(n_max)
    n = np.arange(1, n_max + 1, dtype=np.float64)
    total = complex(np.sum(vals[1:] * np.exp(-s * np.log(n))))
    tail = n_max ** (1.0 - s.real) / (s.real - 1.0)
    return total, tail


def euler_product_F(f, s: complex, x) -> complex:
    """Truncated Euler product over p <= x of (1 - f(p) p^{-s})^{-1}."""
    s = complex(s)
    if s.real <= 1:
        raise DomainError("Euler product needs Re s > 1")
    ps = sieve.primes_up_to(int(math.floor(x)))
    z = f.prime_values(ps) * np.exp(-s * np.log(ps.astype(np.float64)))
    return complex(np.exp(-np.sum(np.log(1.0 - z))))


def _log_abs_F(primes_log, w, ts) -> np.ndarray:
    """log|F(1 + 1/log x + it)| via the Euler product, vectorized over t.

    w = f(p) p^{-sigma0} precomputed; |1 - w e^{-i theta}|^2 expanded in real
    arithmetic to avoid complex exponentials.
    """
    ts = np.asarray(ts, dtype=np.float64)
    out = np.empty(len(ts))
    a, b = np.ascontiguousarray(w.real), np.ascontiguousarray(w.imag)
    w2 = a * a + b * b
    chunk = max(1, (1 << 23) // max(1, len(primes_log)))
    for lo in range(0, len(ts), chunk):
        theta = np.multiply.outer(ts[lo : lo + chunk], primes_log)
        m2 = 1.0 + w2 - 2.0 * (np.cos(theta) * a + np.sin(theta) * b)
        np.maximum(m2, 1e-300, out=m2)
        out[lo : lo + chunk] = -0.5 * np.sum(np.log(m2), axis=1)
    return out


@dataclass(frozen=True)
class HalaszData:
    """Maximizing twist phi of |F(1+1/log x+it)| on |t| <= log x, and
    M = distance_sq(f, n^{i phi}, x)."""

    x: float
    phi: float
    M: float
    grid_trace: list = field(repr=False)


def find_phi_and_M(f, x) -> HalaszData:
    """Grid search (step 1/(10 log x)) plus golden-section refinement.

    Ties broken by smallest |t|, then by negative t.
    """
    n = int(math.floor(x))
    if n < 2:
        raise DomainError("need x >= 2")
    if n > f.limit:
        raise SieveLimitError("x exceeds the function limit")
    logx = math.log(x)
    sigma0 = 1.0 + 1.0 / logx
    ps = sieve.primes_up_to(n)
    lp = np.log(ps.astype(np.float64))
    w = f.prime_values(ps) * np.exp(-sigma0 * lp)

    step = 1.0 / (10.0 * logx)
    jmax = int(math.floor(logx / step))
    ts = np.arange(-jmax, jmax + 1, dtype=np.float64) * step
    vals = _log_abs_F(lp, w, ts)

    top = np.max(vals)
    cand = np.flatnonzero(vals >= top)
    j_best = min(cand, key=lambda j: (abs(ts[j]), ts[j]))
    t_best, v_best = float(ts[j_best]), float(vals[j_best])

    def g(t):
        return float(_log_abs_F(lp, w, [t])[0])

    # golden-section maximization on the bracketing interval
    lo = max(-logx, t_best - step)
    hi = min(logx, t_best + step)
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    c_ = hi - inv * (hi - lo)
    d_ = lo + inv * (hi - lo)
    gc, gd = g(c_), g(d_)
    best_t, best_v = t_best, v_best
    for pt, pv in ((c_, gc), (d_, gd)):
        if pv > best_v:
            best_t, best_v = pt, pv
    while hi - lo > 1e-6:
        if gc >= gd:
            hi, d_, gd = d_, c_, gc
            c_ = hi - inv * (hi - lo)
            gc = g(c_)
            if gc > best_v:
                best_t, best_v = c_, gc
        else:
            lo, c_, gc = c_, d_, gd
            d_ = lo + inv * (hi - lo)
            gd = g(d_)
            if gd > best_v:
                best_t, best_v = d_, gd
    phi = best_t
    M = distance_sq(f, ArchimedeanTwist(phi), x)
    trace = list(zip(ts.tolist(), np.exp(vals).tolist()))
    return HalaszData(x=float(x), phi=phi, M=M, grid_trace=trace)


# ---------------------------------------------------------------------------
# mean-value bounds


@dataclass(frozen=True)
class HalaszReport:
    observed: float
    main_term: float
    secondary_term: float
    bound: float
    ratio: float
    data: HalaszData

    def to_dict(self):
        return {
            "phi": self.data.phi,
            "M": self.data.M,
            "observed": self.observed,
            "bound": self.bound,
            "ratio": self.ratio,
        }


def halasz_bound(f, x) -> HalaszReport:
    """Observed mean |S_f(x)|/x against (M+1)e^{-M}/(1+|phi|) + (log x)^{-(2-sqrt 3)}.

    The o(1) in the secondary exponent is instantiated at 0.  ratio compares
    the observed mean to the leading term alone, since the secondary term
    carries an unspecified constant.
    """
    data = find_phi_and_M(f, x)
    observed = abs(mean_value(f, x))
    main = (data.M + 1.0) * math.exp(-data.M) / (1.0 + abs(data.phi))
    secondary = math.log(x) ** (-(2.0 - math.sqrt(3.0)))
    return HalaszReport(
        observed=observed,
        main_term=main,
        secondary_term=secondary,
        bound=main + secondary,
        ratio=observed / main,
        data=data,
    )


@dataclass(frozen=True)
class SlowVariationReport:
    hal2_residual: float
    hal3_delta: float
    hal3_reference: float
    phi: float


def slow_variation_probe(f, x, z) -> SlowVariationReport:
    """Residual of the mean-value transfer and the slow-variation delta.

    hal2: |mean_x(f) - x^{i phi} (1+i phi)^{-1} mean_x(f_phi)|.
    hal3: |mean_x(f_phi) - mean_z(f_phi)| against ((1+|log(x/z)|)/log x)^{1-2/pi}.
    """
    if not (math.sqrt(x) <= z <= x * x):
        raise DomainError("need sqrt(x) <= z <= x^2")
    data = find_phi_and_M(f, x)
    phi = data.phi
    fphi = TwistedFunction(f, phi)
    top = int(math.floor(max(x, z)))
    vals_f = f.values_up_to(top)
    n = np.arange(top + 1, dtype=np.float64)
    n[0] = 1.0
    vals_fphi = vals_f * np.exp(-1j * phi * np.log(n))
    nx, nz = int(math.floor(x)), int(math.floor(z))
    mean_f_x = complex(np.sum(vals_f[: nx + 1])) / x
    mean_fphi_x = complex(np.sum(vals_fphi[: nx + 1])) / x
    mean_fphi_z = complex(np.sum(vals_fphi[: nz + 1])) / z
    rotate = x ** (1j * phi) / (1.0 + 1j * phi)
    hal2 = abs(mean_f_x - rotate * mean_fphi_x)
    hal3 = abs(mean_fphi_x - mean_fphi_z)
    ref = ((1.0 + abs(math.log(x / z))) / math.log(x)) ** (1.0 - 2.0 / math.pi)
    return SlowVariationReport(
        hal2_residual=hal2, hal3_delta=hal3, hal3_reference=ref, phi=phi
    )


@dataclass(frozen=True)
class WitnessReport:
    y: float
    mean: complex
    guarantee: float
    lam: float
    phi: float
    M: float
    grid_points: int


def large_mean_witness(
    f, x, c: float = 3.0, data: HalaszData | None = None, y_min: float | None = None
) -> WitnessReport:
    """Search y in [x^{1/(lam e^lam)}, x] maximizing |mean of f up to y|.

    lam = M + log(1+|phi|) + c; the geometric grid carries 10*lam*e^lam
    points.  The guarantee e^{-M}/|1+i phi| is the target the large mean
    should be commensurate with (implied constant unknown).  A caller that
    already holds a (phi, M) pair for f (e.g. from a triangle-inequality
    bound on a product) may pass it via `data` to skip the internal search.
    """
    if data is None:
        data = find_phi_and_M(f, x)
    lam = data.M + math.log(1.0 + abs(data.phi)) + c
    expo = lam * math.exp(lam)
    lo = x ** (1.0 / expo)
    if y_min is not None:
        lo = max(lo, y_min)
    if not (lo <= x):
        raise DomainError("degenerate witness range")
    count = max(2, int(math.ceil(10.0 * expo)))
    n_lo, n_hi = int(math.ceil(lo)), int(math.floor(x))
    if count > n_hi - n_lo + 1:
        # grid denser than the integers: |mean| on [n, n+1) peaks at y = n,
        # so scanning the integer cut points (plus lo) is exact and bounded
        ys = np.unique(
            np.concatenate(([lo], np.arange(n_lo, n_hi + 1, dtype=np.float64)))
        )
        count = len(ys)
    else:
        ys = np.exp(np.linspace(math.log(lo), math.log(x), count))
    vals = f.values_up_to(x)
    csum = np.cumsum(vals)
    idx = np.minimum(np.floor(ys).astype(np.int64), len(vals) - 1)
    means = csum[idx] / ys
    j = int(np.argmax(np.abs(means)))
    guarantee = math.exp(-data.M) / abs(1.0 + 1j * data.phi)
    return WitnessReport(
        y=float(ys[j]),
        mean=complex(means[j]),
        guarantee=guarantee,
        lam=lam,
        phi=data.phi,
        M=data.M,
        grid_points=count,
    )


def eq22_gap(f, x, t: float) -> float:
    """log|F(1+1/log x+it)| minus (log log x - distance_sq(f, n^{it}, x))."""
    n = int(math.floor(x))
    logx = math.log(x)
    sigma0 = 1.0 + 1.0 / logx
    ps = sieve.primes_up_to(n)
    lp = np.log(ps.astype(np.float64))
    w = f.prime_values(ps) * np.exp(-sigma0 * lp)
    logF = float(_log_abs_F(lp, w, [t])[0])
    d2 = distance_sq(f, ArchimedeanTwist(t), x)
    return logF - (math.log(logx) - d2)

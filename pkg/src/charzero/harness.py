"""Scenario runner: zero-budget audits over character families, the
quadratic-nonresidue census, product/power large-sum searches, and the
disk-count experiment, with JSON/CSV emission.

Every report echoes the full constants configuration and the package
version; two runs with identical configuration are byte-identical (no
timestamps, stable key order).

The audited statements are asymptotic.  At desk scale an audit whose
hypothesis range is empty reports vacuous=True rather than a pass; the
suite checks computable ingredients and identities, not the theorems.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import __version__, dirichlet, multfn, sieve, spectral, zeros
from .errors import DomainError

# budget denominators for the two sliding-window corollary selectors
_SELECTORS = {"fixed-window": 1600.0, "twisted-window": 1440.0}


@dataclass(frozen=True)
class Constants:
    """Every unspecified absolute constant, pinned and echoed in reports."""

    abs_c: float = 1.0
    witness_c: float = 3.0
    lemma31_C: float = 10.0
    zero_density_c: float = 1.0
    sum_bound_C: float = 1.0
    halasz_ratio_cap: float = 20.0
    hal3_slack: float = 10.0
    mangoldt_nmax: int = 10**6
    seed: int = 20260814

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["version"] = __version__
        return d


@dataclass(frozen=True)
class ScenarioConfig:
    q_min: int
    q_max: int
    eps: float
    T: float = 1.0
    selector: str = "fixed-window"
    quadratic_only: bool = False
    constants: Constants = field(default_factory=Constants)

    def __post_init__(self):
        if self.selector not in _SELECTORS:
            raise DomainError(f"unknown selector {self.selector!r}")
        if not (2 <= self.q_min <= self.q_max):
            raise DomainError("modulus range must satisfy 2 <= q_min <= q_max")
        if self.eps <= 0:
            raise DomainError("eps must be positive")


@dataclass(frozen=True)
class AuditRow:
    q: int
    conrey: int
    eps: float
    x: float
    budget: int
    zero_count: int
    s_abs: float
    predicted_bound: float
    ratio: float
    budget_ok: bool
    hypothesis_ok: bool
    conclusion_ok: bool | None
    vacuous: bool
    near_one_sigma: float
    near_one_height: float
    near_one_has_zero: bool
    large_sum_hypothesis: bool

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class AuditReport:
    selector: str
    eps: float
    T: float
    rows: list
    constants: dict

    def to_dict(self) -> dict:
        return {
            "selector": self.selector,
            "eps": self.eps,
            "T": self.T,
            "rows": [r.to_dict() for r in self.rows],
            "constants": self.constants,
        }


def _max_window_count(gammas, half_width: float, t_lo: float, t_hi: float) -> int:
    """Largest number of ordinates in any window [phi-h, phi+h] with the
    window center constrained to [t_lo, t_hi].  The maximum is attained
    with a window edge at some ordinate, so it suffices to try centers
    g -+ h (clamped) plus the two interval ends."""
    candidates = {t_lo, t_hi}
    for g in gammas:
        candidates.add(min(max(g - half_width, t_lo), t_hi))
        candidates.add(min(max(g + half_width, t_lo), t_hi))
    best = 0
    for phi in candidates:
        lo, hi = phi - half_width, phi + half_width
        best = max(best, sum(1 for y in gammas if lo <= y <= hi))
    return best


def _audit_one(chi: dirichlet.Character, config: ScenarioConfig) -> AuditRow:
    c = config.constants
    q = chi.q
    logq = math.log(q)
    budget = int(config.eps**2 * logq / _SELECTORS[config.selector])
    x = q**config.eps
    s_abs = abs(dirichlet.partial_sum(chi, x).value)
    if config.selector == "fixed-window":
        rect = zeros.Rectangle(0.75, 1.0, -0.25, 0.25)
        found = zeros.locate_zeros(chi, rect)
        count = len(found)
        bound = c.sum_bound_C * x / math.log(x) ** 0.01 if x > 1 else x
        hyp_ok = config.eps > logq ** (-1.0 / 3.0)
    else:
        span = config.T + 0.25
        rect = zeros.Rectangle(0.75, 1.0, -span, span)
        found = zeros.locate_zeros(chi, rect)
        count = _max_window_count(
            [z.gamma for z in found], 0.25, -config.T, config.T
        )
        bound = c.sum_bound_C * x / config.T
        hyp_ok = (
            1.0 <= config.T <= logq ** (1.0 / 200.0)
            and config.eps > logq ** (-1.0 / 3.0)
        )
    vacuous = x < 2.0
    budget_ok = count <= budget
    concl = None
    if hyp_ok and budget_ok and not vacuous:
        concl = s_abs <= bound
    # near-1 rectangle of the large-sum corollary, clipped to the
    # zero-bearing strip and the evaluator window
    sigma_lo = 1.0 - c.abs_c / (config.eps**8 * logq)
    height = min(c.abs_c / config.eps, 45.0)
    near_rect = zeros.Rectangle(max(1e-3, sigma_lo), 1.0, -height, height)
    near = zeros.locate_zeros(chi, near_rect) if sigma_lo < 1.0 else []
    return AuditRow(
        q=q,
        conrey=chi.conrey,
        eps=config.eps,
        x=x,
        budget=budget,
        zero_count=count,
        s_abs=s_abs,
        predicted_bound=bound,
        ratio=s_abs / bound if bound > 0 else math.inf,
        budget_ok=budget_ok,
        hypothesis_ok=hyp_ok,
        conclusion_ok=concl,
        vacuous=vacuous,
        near_one_sigma=sigma_lo,
        near_one_height=height,
        near_one_has_zero=bool(near),
        large_sum_hypothesis=s_abs >= config.eps * x,
    )


def corollary_zero_budget_audit(config: ScenarioConfig, threads: int = 1) -> AuditReport:
    """Per primitive character: zero count in the corollary window versus
    the eps^2 log q budget, |S(q^eps, chi)| versus the predicted bound, and
    the near-1 rectangle report.

    fixed-window counts zeros in Re >= 3/4, |Im| <= 1/4; twisted-window
    takes the worst window |Im - phi| <= 1/4 over |phi| <= T.  Rows may run
    on a thread pool; assembly is single-threaded in (q, conrey) order, so
    the report does not depend on `threads`.
    """
    chars = [
        chi
        for q in range(config.q_min, config.q_max + 1)
        for chi in dirichlet.enumerate_characters(q, primitive_only=True)
        if not (config.quadratic_only and chi.order != 2)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda chi: _audit_one(chi, config), chars))
    else:
        rows = [_audit_one(chi, config) for chi in chars]
    rows.sort(key=lambda r: (r.q, r.conrey))
    return AuditReport(
        selector=config.selector,
        eps=config.eps,
        T=config.T,
        rows=rows,
        constants=config.constants.to_dict(),
    )


# ---------------------------------------------------------------------------
# quadratic nonresidue census


@dataclass(frozen=True)
class CensusReport:
    q: int
    u: float
    x: float
    count: int
    density: float
    bound: float
    bound_ok: bool
    constants: dict

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _square_mask(q: int) -> np.ndarray:
    mask = np.zeros(q, dtype=bool)
    mask[(np.arange(1, q, dtype=np.int64) ** 2) % q] = True
    return mask


def full_period_nonresidue_count(q: int) -> int:
    """Nonresidues in [1, q-1]; exactly (q-1)/2 for odd primes."""
    if not sieve.is_prime(q):
        raise DomainError("q must be prime")
    return int(q - 1 - np.count_nonzero(_square_mask(q)))


def nonresidue_census(q: int, u: float, constants: Constants | None = None) -> CensusReport:
    """Exact count of quadratic nonresidues n <= q^{u/4}, against the
    density lower bound (o(1) term instantiated as 0)."""
    if not sieve.is_prime(q) or q == 2:
        raise DomainError("q must be an odd prime")
    c = constants or Constants()
    x = q ** (u / 4.0)
    n = int(math.floor(x))
    mask = _square_mask(q)
    count = int(np.count_nonzero(~mask[1 : n + 1]))
    bound = spectral.nonresidue_density_lower_bound(u) * x
    return CensusReport(
        q=q,
        u=u,
        x=x,
        count=count,
        density=count / x,
        bound=bound,
        bound_ok=count >= bound,
        constants=c.to_dict(),
    )


# ---------------------------------------------------------------------------
# product / power large-sum searches


@dataclass(frozen=True)
class ProductSearchReport:
    label: str
    eta: float
    x1: float
    x2: float
    X: float
    mean1_abs: float
    mean2_abs: float
    hypothesis_ok: bool
    phi1: float
    phi2: float
    phi: float
    M_triangle: float
    product_mean_abs: float
    witness_y: float
    witness_mean_abs: float
    xi_report: float
    x_lower: float
    restricted_y: float
    restricted_mean_abs: float
    mean_ok: bool
    constants: dict

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def product_large_sum_search(
    f1, f2, x1: float, x2: float, eta: float, constants: Constants | None = None
) -> ProductSearchReport:
    """Witness a large mean of f1*f2 from large means of the factors.

    The hypothesis |sum_{n<=x_j} f_j| >= eta x_j is checked first; failure
    switches to report-only mode (flagged, never silent).  phi = phi1+phi2
    and the triangle-inequality bound M <= (D_1 + D_2)^2 at X = min(x1,x2)
    drive the witness scan.
    """
    if eta <= 0 or eta > 1:
        raise DomainError("eta must lie in (0, 1]")
    c = constants or Constants()
    m1 = abs(multfn.mean_value(f1, x1))
    m2 = abs(multfn.mean_value(f2, x2))
    hyp = m1 >= eta and m2 >= eta
    X = min(x1, x2)
    d1 = multfn.find_phi_and_M(f1, x1)
    d2 = multfn.find_phi_and_M(f2, x2)
    phi = d1.phi + d2.phi
    prod = f1 * f2
    t1 = multfn.distance(f1, multfn.ArchimedeanTwist(d1.phi), X)
    t2 = multfn.distance(f2, multfn.ArchimedeanTwist(d2.phi), X)
    m_tri = (t1 + t2) ** 2
    data = multfn.HalaszData(x=X, phi=phi, M=m_tri, grid_trace=[])
    wit = multfn.large_mean_witness(prod, X, c=c.witness_c, data=data)
    xi = c.abs_c * eta**6
    x_lower = X**xi
    # second scan restricted to the corollary's admissible range y >= X^xi
    res = multfn.large_mean_witness(prod, X, c=c.witness_c, data=data, y_min=x_lower)
    return ProductSearchReport(
        label=f"({f1.label})*({f2.label})",
        eta=eta,
        x1=x1,
        x2=x2,
        X=X,
        mean1_abs=m1,
        mean2_abs=m2,
        hypothesis_ok=hyp,
        phi1=d1.phi,
        phi2=d2.phi,
        phi=phi,
        M_triangle=m_tri,
        product_mean_abs=abs(multfn.mean_value(prod, X)),
        witness_y=wit.y,
        witness_mean_abs=abs(wit.mean),
        xi_report=xi,
        x_lower=x_lower,
        restricted_y=res.y,
        restricted_mean_abs=abs(res.mean),
        mean_ok=abs(res.mean) >= xi,
        constants=c.to_dict(),
    )


@dataclass(frozen=True)
class PowerSearchReport:
    label: str
    k: int
    eta: float
    x: float
    mean_abs: float
    hypothesis_ok: bool
    phi: float
    M_triangle: float
    witness_y: float
    witness_mean_abs: float
    xi_report: float
    y_lower: float
    restricted_y: float
    restricted_mean_abs: float
    mean_ok: bool
    constants: dict

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def power_large_sum_search(
    f, x: float, k: int, eta: float, constants: Constants | None = None
) -> PowerSearchReport:
    """Same scan for f^k: phi_k = k phi and M_k <= k^2 M by the triangle
    inequality; target scale eta^{2k^2}."""
    if k < 1:
        raise DomainError("k must be a positive integer")
    if eta <= 0 or eta > 1:
        raise DomainError("eta must lie in (0, 1]")
    c = constants or Constants()
    m = abs(multfn.mean_value(f, x))
    hyp = m >= eta
    d = multfn.find_phi_and_M(f, x)
    t = multfn.distance(f, multfn.ArchimedeanTwist(d.phi), x)
    m_tri = (k * t) ** 2
    data = multfn.HalaszData(x=x, phi=k * d.phi, M=m_tri, grid_trace=[])
    fk = f.power(k)
    wit = multfn.large_mean_witness(fk, x, c=c.witness_c, data=data)
    xi = c.abs_c * eta ** (2 * k * k)
    y_lower = x**xi
    res = multfn.large_mean_witness(fk, x, c=c.witness_c, data=data, y_min=y_lower)
    return PowerSearchReport(
        label=f"({f.label})^{k}",
        k=k,
        eta=eta,
        x=x,
        mean_abs=m,
        hypothesis_ok=hyp,
        phi=k * d.phi,
        M_triangle=m_tri,
        witness_y=wit.y,
        witness_mean_abs=abs(wit.mean),
        xi_report=xi,
        y_lower=y_lower,
        restricted_y=res.y,
        restricted_mean_abs=abs(res.mean),
        mean_ok=abs(res.mean) >= xi,
        constants=c.to_dict(),
    )


# ---------------------------------------------------------------------------
# disk-count experiment


@dataclass(frozen=True)
class ExperimentReport:
    q: int
    conrey: int
    x: float
    x_lo: float
    x_hi: float
    x_range_ok: bool
    N: float | None
    N_cap: float
    N_ok: bool
    phi: float
    phi_bound_first: float
    phi_bound_orderk: float
    rows: list
    constants: dict

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["rows"] = [r.to_dict() for r in self.rows]
        return d


def disk_count_experiment(
    q: int,
    conrey: int,
    x: float,
    L_grid,
    constants: Constants | None = None,
) -> ExperimentReport:
    """disk_count_audit across an L grid plus the hypothesis-range and
    phi-bound diagnostics.  Report-only: at desk scale the x-range
    exp(sqrt(log q)) <= x <= sqrt(q) and the N cap rarely hold together,
    and the report says so instead of asserting the count bound."""
    c = constants or Constants()
    chi = dirichlet.character(q, conrey)
    logx = math.log(x)
    x_lo = math.exp(math.sqrt(math.log(q)))
    x_hi = math.sqrt(q)
    s_val = abs(dirichlet.partial_sum(chi, x).value)
    n_val = x / s_val if s_val > 0 else None
    n_cap = logx**0.01
    n_ok = n_val is not None and 1.0 <= n_val <= n_cap
    order = chi.order
    y0 = logx
    ratio = c.abs_c * x / s_val if s_val > 0 else math.inf
    phi_first = ratio
    # order-k bound computed in log space; high-order characters overflow
    log_orderk = 2 * order * order * math.log(ratio) - math.log(y0)
    phi_orderk = math.exp(log_orderk) if log_orderk < 700 else math.inf
    rows = [zeros.disk_count_audit(chi, x, L, abs_c=c.abs_c) for L in L_grid]
    data = multfn.find_phi_and_M(multfn.CharacterFunction(chi), x)
    return ExperimentReport(
        q=q,
        conrey=conrey,
        x=x,
        x_lo=x_lo,
        x_hi=x_hi,
        x_range_ok=x_lo <= x <= x_hi,
        N=n_val,
        N_cap=n_cap,
        N_ok=n_ok,
        phi=data.phi,
        phi_bound_first=phi_first,
        phi_bound_orderk=phi_orderk,
        rows=rows,
        constants=c.to_dict(),
    )


# ---------------------------------------------------------------------------
# emission

def to_json(obj) -> str:
    """Stable-order JSON for any report object or plain structure."""
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if hasattr(v, "to_dict"):
        return v.to_dict()
    raise TypeError(f"not JSON-serializable: {type(v)!r}")


def rows_to_csv(rows: list) -> str:
    """RFC-4180 CSV with a header row; rows are dicts sharing a key set."""
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(
            {
                k: (f"{v.real!r}{v.imag:+}j" if isinstance(v, complex) else v)
                for k, v in r.items()
            }
        )
    return buf.getvalue()

import math

import pytest

from charzero import dirichlet, plancherel
from charzero.errors import DomainError

CHI4 = dirichlet.character(4, 3)


def test_case_validation():
    with pytest.raises(DomainError):
        plancherel.PlancherelCase(dirichlet.principal_character(4), 0.0, 0.1, 1.0)
    with pytest.raises(DomainError):
        plancherel.PlancherelCase(CHI4, 0.0, 0.7, 1.0)
    with pytest.raises(DomainError):
        plancherel.PlancherelCase(CHI4, 0.0, 0.1, 0.0)


def test_required_n_max_monotone():
    # softer Gaussians (small T) need far more terms
    assert plancherel.required_n_max(0.5, 0.25) > plancherel.required_n_max(0.5, 4.0)
    n = plancherel.required_n_max(0.0, 1.0, tol=1e-9)
    assert n >= plancherel.required_n_max(0.0, 1.0, tol=1e-6)


def test_lhs_tail_honest():
    case = plancherel.PlancherelCase(CHI4, 0.3, 0.25, 1.0)
    v1, tail1, n1 = plancherel.lhs_gaussian_sum(case, tol=1e-8)
    v2, _, n2 = plancherel.lhs_gaussian_sum(case, tol=1e-14)
    assert n2 > n1
    assert abs(v1 - v2) <= tail1 + 1e-12


def test_lhs_against_quadrature_oracle():
    case = plancherel.PlancherelCase(CHI4, 0.0, 0.25, 1.0)
    closed, tail, n_max = plancherel.lhs_gaussian_sum(case, tol=1e-10)
    direct = plancherel.lhs_quadrature_oracle(case, n_max)
    assert abs(closed - direct) <= 1e-6 * (1 + abs(closed))


def test_verify_case_residuals():
    for q, conrey in ((3, 2), (4, 3), (5, 2)):
        chi = dirichlet.character(q, conrey)
        for phi, lam, T in ((0.0, 0.0, 1.0), (0.3, 0.25, 4.0), (-1.7, 0.5, 1.0)):
            res = plancherel.verify_case(plancherel.PlancherelCase(chi, phi, lam, T))
            assert res.residual <= 1e-9
            assert res.lhs_tail < 1e-6 and res.rhs_tail < 1e-6


def test_verify_case_heavy_tail():
    # softest Gaussian with the widest spectral window in the default grid
    res = plancherel.verify_case(plancherel.PlancherelCase(CHI4, 0.0, 0.5, 0.25))
    assert res.residual <= 1e-9
    assert res.n_max > 10**4


def test_conjugate_case_mirrors():
    chi = dirichlet.character(5, 2)
    a = plancherel.verify_case(plancherel.PlancherelCase(chi, 0.4, 0.1, 1.0))
    b = plancherel.verify_case(
        plancherel.PlancherelCase(chi.conjugate(), -0.4, 0.1, 1.0)
    )
    assert b.lhs == pytest.approx(a.lhs.conjugate(), abs=1e-9)
    assert b.rhs == pytest.approx(a.rhs.conjugate(), abs=1e-9)


def test_case_result_dict():
    res = plancherel.verify_case(plancherel.PlancherelCase(CHI4, 0.0, 0.1, 1.0))
    d = res.to_dict()
    assert d["q"] == 4 and d["conrey"] == 3
    assert d["residual"] == res.residual
    assert math.isfinite(d["lhs_re"]) and math.isfinite(d["rhs_im"])


def test_small_grid_runs():
    results = plancherel.run_grid(moduli=(3, 4), lams=(0.0, 0.5), Ts=(1.0,), phis=(0.0,))
    assert len(results) == 4  # two primitive characters, two lams
    assert all(r.residual <= 1e-9 for r in results)

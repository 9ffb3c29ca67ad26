import json
from fractions import Fraction

import pytest

from higgsbetti.bradlow import (
    MaximalCaseProvider,
    SymbolicProvider,
    maximal_first_term,
    maximal_moduli_min,
    maximal_pairs_equivariant,
    maximal_provider_record,
    provider_from_file,
    sigma_min_of,
    sigma_of,
    ww_difference,
    ww_difference_contributions,
    ww_from_invariants,
)
from higgsbetti.errors import ProviderFileError
from higgsbetti.ingredients import jacobian_poincare, sym_poincare
from higgsbetti.params import make_params
from higgsbetti.series import TruncatedSeries, geometric_inverse


def test_sigma_examples():
    p = make_params(2, 2, 1)
    assert sigma_of(p) == 1 and sigma_min_of(p) == Fraction(3, 4)
    p = make_params(2, 0, 0)
    assert sigma_of(p) == 2 and sigma_min_of(p) == Fraction(9, 4) and p.e == 4
    p = make_params(3, 1, 2)
    assert p.e == 8 and sigma_of(p) == Fraction(8 + 4, 3)


def test_ww_at_maximal_point():
    # single top wall: t^4 (1+t)^4 / (1-t^2)
    w = ww_difference(make_params(2, 2, 1), 24)
    want = (jacobian_poincare(2, 24) * geometric_inverse(2, 24)).shifted(4)
    assert w == want


def test_ww_vanishes_for_empty_coprime():
    for (g, d1, d2) in [(2, 1, 0), (2, 2, 3), (3, 1, 0), (3, 2, 3)]:
        p = make_params(g, d1, d2)
        assert p.is_coprime
        assert ww_difference(p, 8 * g).is_zero(), (g, d1, d2)


def test_ww_zero_toledo_boundary_term():
    # tau = 0: single bottom-wall term t^{4g-4} P(J) P(S^{2g-2})/(1-t^2)
    p = make_params(2, 1, 2)
    w = ww_difference(p, 20)
    want = (jacobian_poincare(2, 20) * sym_poincare(2, 2, 20)
            * geometric_inverse(2, 20)).shifted(4)
    assert w == want


def test_ww_matches_invariant_coordinates():
    for g in (2, 3):
        order = 6 * g + 10
        for d1 in range(0, 2 * g + 1):
            for d2 in range(2 * d1 - (3 * g - 3), 2 * d1 + 1):
                p = make_params(g, d1, d2)
                if not p.valid:
                    continue
                assert ww_difference(p, order) == ww_from_invariants(
                    g, p.e, p.sigma, order), (g, d1, d2)


def test_ww_equals_sum_of_contributions_and_shift_invariance():
    order = 30
    p = make_params(3, 4, 3)
    total = TruncatedSeries.zero(order)
    for term in ww_difference_contributions(p, order):
        total = total + term.expand(order)
    assert total == ww_difference(p, order)
    for k in (-2, -1, 1, 2):
        assert ww_difference(p.tensor_shift(k), order) == total


def test_maximal_telescoping():
    for g in (2, 3, 4, 5):
        order = 4 * g + 20
        jac = jacobian_poincare(g, order)
        geo2 = geometric_inverse(2, order)
        assert maximal_first_term(g, order) == jac * jac * geo2 * geo2


def test_maximal_provider_consistency():
    for g in (2, 3):
        order = 6 * g + 12
        p = make_params(g, 2 * g - 2, g - 1)
        pairs = maximal_pairs_equivariant(g, order)
        mm = maximal_moduli_min(g, order)
        assert pairs - mm == ww_difference(p, order)
        assert mm.is_nonnegative()
    # pinned bottom-chamber value at g = 2: (1+t)^4 (1+t^2)
    assert maximal_moduli_min(2, 10) == TruncatedSeries.from_coeffs(
        [1, 4, 7, 8, 7, 4, 1], 10)


def test_provider_queries():
    provider = MaximalCaseProvider()
    assert provider.pairs_equivariant(1, Fraction(1), 2, 10) is not None
    assert provider.pairs_equivariant(2, Fraction(1), 2, 10) is None
    assert provider.moduli_min(1, 2, 10) is not None
    assert provider.moduli_min(3, 2, 10) is None
    sym = SymbolicProvider()
    assert sym.pairs_equivariant(1, Fraction(1), 2, 10) is None
    assert sym.moduli_min(1, 2, 10) is None


def test_provider_file_round_trip(tmp_path):
    record = maximal_provider_record(2, 16)
    path = tmp_path / "provider.json"
    path.write_text(json.dumps(record))
    provider = provider_from_file(path)
    assert provider.pairs_equivariant(1, Fraction(1), 2, 12) == \
        maximal_pairs_equivariant(2, 12)
    assert provider.moduli_min(1, 2, 12) == maximal_moduli_min(2, 12)
    with pytest.raises(ProviderFileError):
        provider.moduli_min(1, 2, 40)  # beyond the stored order


def test_provider_file_mismatch_names_degree(tmp_path):
    record = maximal_provider_record(2, 16)
    coeffs = [int(c) for c in record["pairs_equivariant"]]
    coeffs[4] += 1
    record["pairs_equivariant"] = [str(c) for c in coeffs]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(record))
    with pytest.raises(ProviderFileError, match="difference mismatch at degree 4"):
        provider_from_file(path)


def test_provider_file_nonmaximal_record_with_nonzero_difference(tmp_path):
    # invariants of (g, d1, d2) = (2, 0, 0): e = 4, sigma = 2, and the
    # wall-crossing difference is the nonzero bottom-wall term
    g, e, sigma, order = 2, 4, Fraction(2), 20
    ww = ww_from_invariants(g, e, sigma, order)
    assert not ww.is_zero()
    mm = jacobian_poincare(g, order) * sym_poincare(2, g, order)
    pairs = mm + ww
    record = {
        "g": g, "e": e, "sigma": {"num": 2, "den": 1}, "order": order,
        "pairs_equivariant": [str(c) for c in pairs.coeffs],
        "moduli_min": [str(c) for c in mm.coeffs],
    }
    path = tmp_path / "rec.json"
    path.write_text(json.dumps(record))
    provider = provider_from_file(path)
    assert provider.pairs_equivariant(e, sigma, g, order) == pairs
    assert provider.moduli_min(e, g, order) == mm


def test_provider_file_single_series_derives_other(tmp_path):
    record = maximal_provider_record(2, 16)
    record["pairs_equivariant"] = None
    path = tmp_path / "partial.json"
    path.write_text(json.dumps(record))
    provider = provider_from_file(path)
    assert provider.pairs_equivariant(1, Fraction(1), 2, 14) == \
        maximal_pairs_equivariant(2, 14)

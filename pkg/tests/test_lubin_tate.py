import math
import random

import pytest

from fgl.laws import FormalGroupLaw
from fgl.lubin_tate import (
    LubinTateDatum,
    LubinTateError,
    build_action,
    build_endomorphism,
    build_fgl,
    compare_lubin_tate,
    fraction_field_of,
    integrality_scan,
    multiplicative_datum,
    padic_factorial_valuation,
    standard_datum,
    truncation_tolerance,
)
from fgl.monoids import padic_truncation_of
from fgl.rings import EisensteinExtension, PadicIntegers, RationalField
from fgl.series import TruncatedSeries


# the closed-form oracle for the multiplicative preset: (1+T)^a - 1 has
# binomial coefficients, reduced mod p^k for p-adic a
def binomial_endo_terms(a: int, N: int, mod: int) -> dict:
    return {
        (k,): math.comb(a, k) % mod
        for k in range(1, min(a, N) + 1)
        if math.comb(a, k) % mod
    }


def test_defining_identity_standard():
    Z5 = PadicIntegers(5, 8)
    d = standard_datum(Z5, degree=10)
    law = build_fgl(d, 10)
    assert law.report.all_pass
    # f(F(x,y)) = F(f(x), f(y)) at ring precision
    N = 10
    f = d.f.truncate(N)
    X = TruncatedSeries.variable(Z5, ("x", "y"), N, "x")
    Y = TruncatedSeries.variable(Z5, ("x", "y"), N, "y")
    lhs = f.substitute_single(law.F)
    rhs = law.plus(f.substitute_single(X), f.substitute_single(Y))
    assert lhs == rhs


def test_pi_acts_as_f():
    Z5 = PadicIntegers(5, 8)
    d = standard_datum(Z5, degree=8)
    law = build_fgl(d, 8)
    assert build_endomorphism(d, law, 5).series == d.f.truncate(8)

    E = EisensteinExtension(5, 8, (-5, 0, 1))
    de = standard_datum(E, degree=6)
    lawe = build_fgl(de, 6)
    assert build_endomorphism(de, lawe, E.uniformizer()).series == de.f.truncate(6)


def test_multiplicative_preset_is_exactly_x_plus_y_plus_xy():
    Z5 = PadicIntegers(5, 8)
    law = build_fgl(multiplicative_datum(Z5, degree=8), 8)
    assert law.F.terms == {(1, 0): 1, (0, 1): 1, (1, 1): 1}


def test_multiplicative_endomorphisms_match_binomials():
    Z5 = PadicIntegers(5, 8)
    d = multiplicative_datum(Z5, degree=12)
    law = build_fgl(d, 12)
    mod = 5**8
    assert build_endomorphism(d, law, 2).series.terms == {(1,): 2, (2,): 1}
    for a in (3, 4, 7, 11):
        endo = build_endomorphism(d, law, a)
        assert endo.series.terms == binomial_endo_terms(a, 12, mod)


def test_solver_order_independence():
    Z5 = PadicIntegers(5, 8)
    d = multiplicative_datum(Z5, degree=6)
    asc = build_fgl(d, 6, correction_order="asc")
    desc = build_fgl(d, 6, correction_order="desc")
    assert asc.F == desc.F == build_fgl(d, 6).F


def test_datum_validation():
    Z5 = PadicIntegers(5, 6)
    with pytest.raises(LubinTateError, match="uniformizer"):
        LubinTateDatum(Z5, TruncatedSeries(Z5, ("T",), 5, {(1,): 1, (5,): 1}))
    with pytest.raises(LubinTateError, match="unit"):
        LubinTateDatum(Z5, TruncatedSeries(Z5, ("T",), 5, {(1,): 5, (5,): 5}))
    with pytest.raises(LubinTateError, match="vanish"):
        LubinTateDatum(
            Z5, TruncatedSeries(Z5, ("T",), 5, {(1,): 5, (2,): 1, (5,): 1})
        )
    Q = RationalField()
    with pytest.raises(LubinTateError, match="p-adic"):
        LubinTateDatum(Q, TruncatedSeries(Q, ("T",), 5, {(1,): 5, (5,): 1}))


def test_fraction_field_of_rationals_rejected():
    with pytest.raises(LubinTateError):
        fraction_field_of(RationalField())


def test_random_pairs_compose_and_add():
    # scalars below 5^3, so products and sums keep their canonical integer
    # representatives inside the precision window and the identities are exact
    Z5 = PadicIntegers(5, 6)
    d = standard_datum(Z5, degree=6)
    law = build_fgl(d, 6)
    rng = random.Random(4005)
    cache = {}

    def endo(a):
        if a not in cache:
            cache[a] = build_endomorphism(d, law, a)
        return cache[a]

    for _ in range(12):
        a = rng.randrange(1, 125)
        b = rng.randrange(1, 125)
        assert endo(a).compose(endo(b)) == endo(a * b)
        assert law.plus(endo(a).series, endo(b).series) == endo(a + b).series


def test_scalar_reduction_moves_deep_coefficients():
    # [c] depends on the representative of c one digit beyond ring precision
    # at degree 5: reducing 177*192 mod 5^6 before solving shifts the T^5
    # coefficient by a multiple of 5^5, and by nothing below valuation
    # 6 - v_5(k!) in any degree k
    Z5 = PadicIntegers(5, 6)
    d = standard_datum(Z5, degree=6)
    law = build_fgl(d, 6)
    composite = build_endomorphism(d, law, 177).compose(
        build_endomorphism(d, law, 192)
    )
    reduced = build_endomorphism(d, law, (177 * 192) % 5**6)
    assert composite.series != reduced.series
    delta = composite.series - reduced.series
    assert set(delta.terms) == {(5,)}
    assert Z5.valuation(delta.terms[(5,)]) == 5
    for (k,), c in delta.terms.items():
        assert Z5.valuation(c) >= 6 - padic_factorial_valuation(k, 5)


def test_integrality_scan_blocking_coefficients():
    Z5 = PadicIntegers(5, 8)
    _, report = integrality_scan(build_fgl(multiplicative_datum(Z5, degree=6), 6))
    blocking = report.first_blocking()
    assert blocking.degree == 5
    assert blocking.valuation == -1

    # the standard series is additive below degree q, so the scan only
    # trips at T^5 as well
    _, report2 = integrality_scan(build_fgl(standard_datum(Z5, degree=6), 6))
    assert [e.degree for e in report2.entries if not e.integral] == [5]


def test_comparison_standard_vs_multiplicative():
    # same uniformizer, so the two laws are strictly isomorphic over the ring
    Z5 = PadicIntegers(5, 8)
    cmp = compare_lubin_tate(
        standard_datum(Z5, degree=6), multiplicative_datum(Z5, degree=6), 6
    )
    assert cmp.integrality.all_integral
    assert cmp.verified_in_ring
    assert cmp.h_ring.terms[(1,)] == 1


def test_truncation_action_verifies_with_tolerance():
    Z5 = PadicIntegers(5, 8)
    d = standard_datum(Z5, degree=4)
    law = build_fgl(d, 4)
    monoid = padic_truncation_of(Z5, 1, 2)
    action = build_action(d, law, monoid=monoid)
    report = action.verify()
    assert report.ok
    assert report.checked_pairs == 48
    assert report.skipped_pairs == 16  # pairs whose product hits the cap


def test_truncation_tolerance_profile():
    Z5 = PadicIntegers(5, 6)
    monoid = padic_truncation_of(Z5, 2, 3)
    tol = truncation_tolerance(monoid)
    per_degree = tol(monoid.el((0, 1)), monoid.el((1, 1)), monoid.el((1, 1)))
    # v + n = 3, eaten by v_5(k!): v_5(5!) = 1, v_5(24!) = 4, v_5(25!) = 6
    assert [per_degree(k) for k in (1, 4, 5, 24, 25)] == [3, 3, 2, 0, 0]
    assert padic_factorial_valuation(25, 5) == 6


def test_eisenstein_law_reduces_to_additive_mod_pi():
    E = EisensteinExtension(5, 8, (-5, 0, 1))
    law = build_fgl(standard_datum(E, degree=6), 6)
    for exp, c in law.F.terms.items():
        if exp in ((1, 0), (0, 1)):
            assert c == E.int_payload(1)
        else:
            assert E.valuation(c) >= 1

import math
import random

from fractions import Fraction

import pytest

from fgl.laws import (
    FglEndomorphism,
    FormalGroupLaw,
    LawError,
    MonoidAction,
    NonInvertibleDivision,
    action_from_bundle,
    check_axioms_series,
    endomorphism_from_logarithm,
    exponential,
    formal_inverse,
    from_logarithm,
    logarithm,
)
from fgl.monoids import FreeCommutativeMonoid, RingSubsetMonoid
from fgl.rings import PadicIntegers, RationalField
from fgl.series import TruncatedSeries

Q = RationalField()


def _one_var(terms, N=6, ctx=Q):
    return TruncatedSeries(ctx, ("T",), N, {(k,): v for k, v in terms.items()})


def _log_of_multiplicative(N):
    return _one_var({k: Fraction((-1) ** (k + 1), k) for k in range(1, N + 1)}, N)


def test_builtin_laws_pass_axioms():
    assert FormalGroupLaw.additive(Q, 6).report.all_pass
    assert FormalGroupLaw.multiplicative(Q, 6).report.all_pass
    assert FormalGroupLaw.multiplicative(PadicIntegers(5, 8), 6).report.all_pass


def test_axiom_failure_names_associativity():
    F = TruncatedSeries(Q, ("x", "y"), 4,
                        {(1, 0): 1, (0, 1): 1, (2, 2): 1})
    report = check_axioms_series(F)
    assert not report.all_pass
    bad = report.first_failure()
    assert bad.name == "associativity"
    assert bad.monomial == (1, 1, 2)


def test_axiom_failure_names_commutativity():
    F = TruncatedSeries(Q, ("x", "y"), 3, {(1, 0): 1, (0, 1): 1, (2, 1): 1})
    report = check_axioms_series(F)
    assert report.first_failure().name == "commutativity"


def test_axiom_failure_names_linear_shape():
    F = TruncatedSeries(Q, ("x", "y"), 3, {(1, 0): 1, (0, 1): 2})
    report = check_axioms_series(F)
    assert report.first_failure().name == "linear_shape"


def test_from_series_raises_on_bad_law():
    F = TruncatedSeries(Q, ("x", "y"), 4, {(1, 0): 1, (0, 1): 1, (2, 2): 1})
    with pytest.raises(LawError, match="associativity"):
        FormalGroupLaw.from_series(F)


def test_from_logarithm_of_log_one_plus_t():
    # g(f(x) + f(y)) for f = log(1+T) is exactly x + y + xy at any degree
    for N in (4, 6, 9):
        law, g = from_logarithm(_log_of_multiplicative(N))
        assert law.F.terms == {
            (1, 0): Fraction(1), (0, 1): Fraction(1), (1, 1): Fraction(1)
        }
        assert g == exponential(_log_of_multiplicative(N))


def test_from_logarithm_round_trips_through_logarithm():
    rng = random.Random(2024)
    for _ in range(20):
        coeffs = {1: Fraction(1)}
        for k in range(2, 8):
            coeffs[k] = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
        f = _one_var(coeffs, N=7)
        law, _ = from_logarithm(f)
        assert law.report.all_pass
        assert logarithm(law) == f


def test_from_logarithm_needs_strict_series():
    with pytest.raises(LawError):
        from_logarithm(_one_var({1: 2}))


def test_formal_inverse_of_multiplicative():
    law, _ = from_logarithm(_log_of_multiplicative(6))
    iota = formal_inverse(law)
    # -T/(1+T)
    assert iota.terms == {(k,): Fraction((-1) ** k) for k in range(1, 7)}


def test_formal_inverse_of_additive():
    iota = formal_inverse(FormalGroupLaw.additive(Q, 5))
    assert iota.terms == {(1,): Fraction(-1)}


def test_logarithm_blocks_over_padics():
    law = FormalGroupLaw.multiplicative(PadicIntegers(5, 6), 6)
    with pytest.raises(NonInvertibleDivision) as info:
        logarithm(law)
    assert info.value.denominator == 5
    assert info.value.degree == 5


def test_scalar_endomorphisms_are_binomials():
    f = _log_of_multiplicative(6)
    law, g = from_logarithm(f)
    e3 = endomorphism_from_logarithm(law, f, g, Q.el(3))
    assert e3.series.terms == {
        (k,): Fraction(math.comb(3, k)) for k in range(1, 4)
    }


def test_scalar_endomorphisms_compose_and_add():
    f = _one_var({1: 1, 2: Fraction(1, 3), 4: -2}, N=6)
    law, g = from_logarithm(f)
    rng = random.Random(77)
    for _ in range(15):
        a = Fraction(rng.randint(-6, 6))
        b = Fraction(rng.randint(-6, 6))
        ea = endomorphism_from_logarithm(law, f, g, Q.el(a))
        eb = endomorphism_from_logarithm(law, f, g, Q.el(b))
        eab = endomorphism_from_logarithm(law, f, g, Q.el(a * b))
        esum = endomorphism_from_logarithm(law, f, g, Q.el(a + b))
        assert ea.compose(eb) == eab
        assert law.plus(ea.series, eb.series) == esum.series


def test_endomorphism_verify_catches_non_endo():
    law = FormalGroupLaw.multiplicative(Q, 4)
    bad = FglEndomorphism(law, _one_var({1: 2}, N=4))
    with pytest.raises(LawError):
        bad.verify()


def test_action_on_window_verifies_and_detects_corruption():
    f = _log_of_multiplicative(5)
    law, g = from_logarithm(f)
    window = RingSubsetMonoid(Q, [Fraction(2), Fraction(4)])
    assignment = {
        p: endomorphism_from_logarithm(law, f, g, Q.el(p))
        for p in window.payloads()
    }
    action = MonoidAction(window, law, assignment)
    report = action.verify()
    assert report.ok
    assert report.checked_pairs > 0

    # swap [4] for [5]: composition 2*2=4 must now fail
    assignment[Fraction(4)] = endomorphism_from_logarithm(law, f, g, Q.el(5))
    broken = MonoidAction(window, law, assignment).verify()
    assert not broken.ok
    assert broken.violations[0].kind == "composition"


def test_free_action_checks_commutation():
    f = _one_var({1: 1, 3: Fraction(2, 5)}, N=6)
    law, g = from_logarithm(f)
    M = FreeCommutativeMonoid(("u", "v"))
    action = MonoidAction(M, law, {
        (1, 0): endomorphism_from_logarithm(law, f, g, Q.el(2)),
        (0, 1): endomorphism_from_logarithm(law, f, g, Q.el(3)),
    })
    assert action.verify().ok
    # words act through composition
    e6 = action.endo_for(M.el((1, 1)))
    assert e6 == endomorphism_from_logarithm(law, f, g, Q.el(6))


def test_action_bundle_round_trip():
    f = _log_of_multiplicative(4)
    law, g = from_logarithm(f)
    M = FreeCommutativeMonoid(("m",))
    action = MonoidAction(M, law, {
        (1,): endomorphism_from_logarithm(law, f, g, Q.el(2)),
    })
    bundle = action.to_bundle()
    again = action_from_bundle(bundle)
    assert again.verify().ok
    assert again.to_bundle() == bundle
    assert again.endo_for(M.el((2,))).series == action.endo_for(M.el((2,))).series

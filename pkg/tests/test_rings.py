import random

from fractions import Fraction

import pytest

from fgl.rings import (
    ContextMismatch,
    EisensteinExtension,
    IntegerRing,
    NotAUnit,
    PadicIntegers,
    PolynomialQuotient,
    RationalField,
    RingError,
    context_from_descriptor,
    eisenstein_check,
)


def test_integer_ring_basics():
    Z = IntegerRing()
    a = Z.el(6)
    b = Z.el(-4)
    assert (a + b).payload == 2
    assert (a * b).payload == -24
    assert (-a).payload == -6
    assert (a - a).is_zero()
    assert Z.el(-1).inverse().payload == -1
    with pytest.raises(NotAUnit):
        Z.el(2).inverse()


def test_rational_field():
    Q = RationalField()
    a = Q.el(Fraction(2, 3))
    assert (a.inverse() * a).payload == 1
    assert (Q.from_int(5) + a).payload == Fraction(17, 3)
    with pytest.raises(NotAUnit):
        Q.zero().inverse()


def test_element_context_mixing_rejected():
    with pytest.raises(ContextMismatch):
        IntegerRing().el(1) + RationalField().el(1)


def test_padic_matches_integer_arithmetic():
    # residues mod 5^8 behave exactly like ints reduced mod 5^8
    Z5 = PadicIntegers(5, 8)
    mod = 5**8
    rng = random.Random(20210)
    for _ in range(300):
        x = rng.randrange(-mod, mod)
        y = rng.randrange(-mod, mod)
        assert Z5.normalize(x + y) == Z5.add(Z5.normalize(x), Z5.normalize(y))
        assert Z5.normalize(x * y) == Z5.mul(Z5.normalize(x), Z5.normalize(y))
    for _ in range(100):
        u = rng.randrange(1, mod)
        if u % 5 == 0:
            continue
        inv = Z5.invert(Z5.normalize(u))
        assert (u * inv) % mod == 1


def test_padic_valuation_and_fractions():
    Z5 = PadicIntegers(5, 8)
    assert Z5.valuation(Z5.normalize(50)) == 2
    assert Z5.valuation(Z5.normalize(3)) == 0
    assert Z5.el(Fraction(1, 2)) * 2 == Z5.el(1)
    with pytest.raises(NotAUnit):
        Z5.normalize(Fraction(1, 5))
    with pytest.raises(NotAUnit):
        Z5.invert(Z5.normalize(10))


def test_padic_rejects_bad_p():
    with pytest.raises(RingError):
        PadicIntegers(6, 4)


def test_eisenstein_check_names_condition():
    eisenstein_check(5, (-5, 0, 1))
    with pytest.raises(RingError, match="monic"):
        eisenstein_check(5, (-5, 0, 2))
    with pytest.raises(RingError, match="divisible"):
        eisenstein_check(5, (-5, 3, 1))
    with pytest.raises(RingError, match="valuation > 1"):
        eisenstein_check(5, (-25, 0, 1))


def test_eisenstein_uniformizer_squares_to_p():
    E = EisensteinExtension(5, 8, (-5, 0, 1))
    pi = E.uniformizer()
    assert pi * pi == E.el(5)
    assert pi.valuation() == 1
    assert E.el(5).valuation() == 2
    assert E.el(3).valuation() == 0


def test_eisenstein_unit_inversion():
    E = EisensteinExtension(5, 9, (-10, 0, 1))
    rng = random.Random(7)
    for _ in range(40):
        a = E.normalize((rng.randrange(1, 5**4), rng.randrange(0, 5**4)))
        if E.valuation(a) != 0:
            continue
        assert E.mul(a, E.invert(a)) == E.int_payload(1)
    with pytest.raises(NotAUnit):
        E.invert(E.uniformizer().payload)


def test_eisenstein_shift_down_inverts_pi_multiplication():
    E = EisensteinExtension(5, 8, (-5, 0, 1))
    pi = E.uniformizer().payload
    a = E.normalize((7, 3))
    assert E.valuation(E.mul(a, pi)) == E.valuation(a) + 1
    # shifting down loses one pi of precision, so compare mod pi^7
    down = E.shift_down(E.mul(a, pi))
    assert E.reduce_mod(down, 7) == E.reduce_mod(a, 7)


def test_polynomial_quotient_plain_arithmetic():
    R = PolynomialQuotient(IntegerRing(), ("x", "y"))
    x = R.var("x")
    y = R.var("y")
    left = (x + y) * (x - y)
    assert left == x * x - y * y
    assert (x * y) ** 2 == x * x * y * y


def test_polynomial_quotient_ideal_reduction():
    R = PolynomialQuotient(IntegerRing(), ("g",))
    g = R.normalize({(1,): 1})
    # impose g^2 = 1
    R2 = R.with_ideal([R.add(R.mul(g, g), R.neg(R.int_payload(1)))])
    gg = R2.mul(R2.normalize({(1,): 1}), R2.normalize({(1,): 1}))
    assert gg == R2.int_payload(1)


def test_polynomial_quotient_nonunit_lead_rejected():
    R = PolynomialQuotient(IntegerRing(), ("x",))
    two_x = R.normalize({(1,): 2})
    with pytest.raises(RingError):
        R.with_ideal([two_x])


def test_descriptor_round_trips():
    for ctx in (
        IntegerRing(),
        RationalField(),
        PadicIntegers(7, 5),
        EisensteinExtension(3, 6, (-3, 0, 0, 1)),
    ):
        again = context_from_descriptor(ctx.descriptor())
        assert again.key() == ctx.key()
        value = ctx.normalize(11)
        assert again.value_from_json(ctx.value_to_json(value)) == value

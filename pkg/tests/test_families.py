from fractions import Fraction
from math import factorial

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from lquot import (
    CriticalPoint,
    DomainError,
    Family,
    FamilyDatum,
    Precision,
    closed_form_higher,
    closed_form_higher_exact,
    closed_form_sum,
    closed_form_sum_exact,
    quotient_derivative_convert,
)
from lquot.families import is_fundamental_discriminant
from lquot.symbolic import log_prime

PREC = Precision(160)


def ref_sum(fd, s):
    """Closed form typed in directly from the functional equations, using mpmath's digamma."""
    mp = mpmath
    s = mp.mpf(s.numerator) / s.denominator
    w = mp.mpf(fd.reflection.numerator) / fd.reflection.denominator
    L2pi = mp.log(2 * mp.pi)
    if fd.family is Family.GLD:
        return (-sum(mp.digamma((s + mp.mpf(k.numerator) / k.denominator) / 2)
                     + mp.digamma((w - s + mp.mpf(k.numerator) / k.denominator) / 2) for k in fd.kappa) / 2
                + fd.d * mp.log(mp.pi) - mp.log(fd.N))
    if fd.family is Family.MODULAR:
        return 2 * L2pi - mp.digamma(s) - mp.digamma(w - s) - mp.log(fd.N * fd.D ** 2)
    if fd.family is Family.HILBERT:
        return (2 * fd.n * L2pi - fd.n * (mp.digamma(s) + mp.digamma(w - s))
                - mp.log(fd.normN) - 2 * mp.log(fd.dF))
    return 2 * fd.g * L2pi - sum(mp.digamma(s - mp.mpf(v) / 2) + mp.digamma(w - s - mp.mpf(v) / 2)
                                  for v in range(fd.g))


CASES = [
    (FamilyDatum.gld(7, [0, 1]), Fraction(3, 10)),
    (FamilyDatum.gld(23, [Fraction(1, 2)]), Fraction(1, 2)),
    (FamilyDatum.modular(12), Fraction(6)),
    (FamilyDatum.modular(12, 1, 5), Fraction(57, 10)),
    (FamilyDatum.modular(Fraction(13, 2), 8, 1), Fraction(7, 2)),
    (FamilyDatum.hilbert(10, 3, 49, 2), Fraction(21, 4)),
    (FamilyDatum.siegel(2, 20), Fraction(10)),
    (FamilyDatum.siegel(3, 22), Fraction(73, 6)),
]


@pytest.mark.parametrize("fd,s0", CASES)
def test_closed_form_sum_reference(fd, s0):
    with mpmath.workprec(200):
        got = closed_form_sum(fd, s0, PREC).value
        assert abs(got - ref_sum(fd, s0)) < mpmath.mpf(2) ** -150


@pytest.mark.parametrize("fd,s0", CASES)
def test_exact_equals_numeric(fd, s0):
    with mpmath.workprec(200):
        exact = closed_form_sum_exact(fd, s0).evaluate(PREC).value
        assert abs(exact - closed_form_sum(fd, s0, PREC).value) < mpmath.mpf(2) ** -150
        for m in (1, 2, 3):
            e = closed_form_higher_exact(fd, s0, m).evaluate(PREC).value
            assert abs(e - closed_form_higher(fd, s0, m, PREC).value) < mpmath.mpf(2) ** -140


@settings(max_examples=40, deadline=None)
@given(k=st.integers(3, 30), N=st.integers(1, 300), num=st.integers(1, 59), q=st.integers(2, 60))
def test_modular_exact_random(k, N, num, q):
    s0 = Fraction(num % (q * k - 1) + 1, q)
    with mpmath.workprec(200):
        e = closed_form_sum_exact(FamilyDatum.modular(k, N), s0).evaluate(PREC).value
        assert abs(e - ref_sum(FamilyDatum.modular(k, N), s0)) < mpmath.mpf(2) ** -150


def test_higher_reference():
    fd = FamilyDatum.modular(12, 11)
    s0 = Fraction(13, 2)
    with mpmath.workprec(200):
        for m in (1, 2, 4):
            ref = -(mpmath.polygamma(m, 6.5) + (-1) ** m * mpmath.polygamma(m, 5.5))
            assert abs(closed_form_higher(fd, s0, m, PREC).value - ref) < mpmath.mpf(2) ** -140


def test_centre_parity_is_exact_zero():
    for fd in (FamilyDatum.modular(12), FamilyDatum.siegel(2, 20), FamilyDatum.hilbert(8, 2, 5),
               FamilyDatum.gld(5, [0])):
        centre = fd.reflection / 2
        assert closed_form_higher(fd, centre, 1).value == 0
        assert not closed_form_higher_exact(fd, centre, 3)


def test_siegel_log2_coefficient():
    for g in (2, 4):
        expr = closed_form_sum_exact(FamilyDatum.siegel(g, 40), 20)
        assert expr.coefficient(log_prime(2)) == 4 * g


def test_hilbert_n1_is_modular():
    a = closed_form_sum_exact(FamilyDatum.hilbert(12, 1, 1, 11), Fraction(20, 3))
    b = closed_form_sum_exact(FamilyDatum.modular(12, 11), Fraction(20, 3))
    assert a == b


def test_strip_enforced():
    with pytest.raises(DomainError):
        closed_form_sum(FamilyDatum.modular(12), 12)
    with pytest.raises(DomainError):
        closed_form_sum(FamilyDatum.gld(3, [0]), "1.5")
    with pytest.raises(DomainError):
        closed_form_higher(FamilyDatum.modular(12), 6, 0)
    with pytest.raises(DomainError):
        closed_form_sum_exact(FamilyDatum.modular(12), complex(6, 1))


def test_complex_point():
    fd = FamilyDatum.modular(12)
    v = closed_form_sum(fd, complex(6, 2), PREC)
    with mpmath.workprec(200):
        ref = 2 * mpmath.log(2 * mpmath.pi) - mpmath.digamma(mpmath.mpc(6, 2)) - mpmath.digamma(mpmath.mpc(6, -2))
        assert abs(v.value - ref) < 1e-40


# datum -----------------------------------------------------------------------

def test_datum_validation():
    with pytest.raises(DomainError):
        FamilyDatum.modular(12, 1, 9)         # not fundamental
    with pytest.raises(DomainError):
        FamilyDatum.modular(12, 5, 5)         # not coprime
    with pytest.raises(DomainError):
        FamilyDatum(Family.SIEGEL, g=2, k=Fraction(20), N=3)
    with pytest.raises(DomainError):
        FamilyDatum(Family.MODULAR, N=1, D=1)
    with pytest.raises(DomainError):
        FamilyDatum.siegel(1, 20)
    with pytest.raises(DomainError):
        FamilyDatum.gld(0, [0])
    assert FamilyDatum.gld(5, [0, 1, 1]).d == 3
    assert Family.parse("modular") is Family.MODULAR


def test_fundamental_discriminants():
    fund = [d for d in range(-30, 31) if is_fundamental_discriminant(d)]
    assert fund == [-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 1, 5, 8, 12, 13, 17, 21, 24, 28, 29]


@pytest.mark.parametrize("fd", [c[0] for c in CASES])
def test_datum_text_round_trip(fd):
    assert FamilyDatum.from_text(fd.to_text()) == fd


def test_conductor_and_reflection():
    assert FamilyDatum.modular(12, 3, 5).conductor == 75
    assert FamilyDatum.gld(7, [0]).reflection == 1
    assert FamilyDatum.siegel(2, 20).reflection == 20


def test_critical_point():
    p = CriticalPoint.of("0.3")
    assert p.is_exact and p.exact == Fraction(3, 10)
    assert CriticalPoint.of(Fraction(1, 2)).reflect(Fraction(1)).exact == Fraction(1, 2)
    q = CriticalPoint.of(complex(0.5, 14))
    assert not q.is_exact


# conversion ------------------------------------------------------------------

def test_conversion_known_sequence():
    # L(s) = 1/(1 - s) at s = 0: (L'/L)^(j) = j!, L^(j)/L = j!
    g = [factorial(j) for j in range(6)]
    ratios = quotient_derivative_convert(g, "to_ratios")
    assert [int(r.real) for r in ratios] == [factorial(j) for j in range(1, 7)]
    back = quotient_derivative_convert(ratios, "to_logderivs")
    assert [int(x.real) for x in back] == g
    assert quotient_derivative_convert([]) == []
    with pytest.raises(DomainError):
        quotient_derivative_convert([1], "sideways")

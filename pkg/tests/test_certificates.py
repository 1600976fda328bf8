import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from lquot import (
    Certificate,
    Claim,
    DomainError,
    FamilyDatum,
    FormatError,
    HypothesisError,
    OutOfProvenRangeError,
    Precision,
    PropertyAError,
    Verdict,
    certify_gld,
    certify_halfint_central,
    certify_hilbert,
    certify_modular,
    certify_siegel,
    exact_rank,
    parse_expr,
    rank_certificate,
)
from lquot.certificates import halfint_constant

HALF = Fraction(1, 2)


# GL(d) -------------------------------------------------------------------------

def test_gld_threshold_details():
    cert = certify_gld(FamilyDatum.gld(23, [1]), HALF)
    assert cert.claim is Claim.GLD_NONVANISH
    assert cert.detail("threshold_4pi_exp_gamma").startswith("22.3816")
    assert cert.margin > 0
    assert parse_expr(cert.bound).evaluate().value == cert.bound_value.value


def test_gld_degree_two_at_500():
    # sqrt(500) = 22.36... lies below 4π e^γ = 22.38..., so no certificate
    cert = certify_gld(FamilyDatum.gld(500, [1, 1]), HALF, Precision(256))
    assert cert.verdict is Verdict.NOT_CERTIFIED
    assert cert.detail("N_root_d").startswith("22.36")
    assert certify_gld(FamilyDatum.gld(501, [1, 1]), HALF).verdict is Verdict.CERTIFIED


@settings(max_examples=30, deadline=None)
@given(d=st.integers(1, 3), N=st.integers(1, 20_000))
def test_gld_monotone_in_N(d, N):
    fd = FamilyDatum.gld(N, [1] * d)
    if certify_gld(fd, HALF).certified:
        assert certify_gld(fd.with_(N=N + 1), HALF).certified
        assert certify_gld(fd.with_(N=2 * N), HALF).certified


def test_gld_hypotheses():
    with pytest.raises(HypothesisError):
        certify_gld(FamilyDatum.gld(100, [0]), HALF)        # s0 + κ < 1
    with pytest.raises(HypothesisError):
        certify_gld(FamilyDatum.gld(100, [1]), Fraction(3, 2))
    with pytest.raises(HypothesisError):
        certify_gld(FamilyDatum.gld(100, [1]), complex(0.5, 1))
    with pytest.raises(DomainError):
        certify_gld(FamilyDatum.modular(12), 6)


# modular -----------------------------------------------------------------------

def test_modular_branches():
    assert certify_modular(FamilyDatum.modular(12, 1, 13), 6).certified
    assert not certify_modular(FamilyDatum.modular(12, 1, -11), 6).certified
    remark = certify_modular(FamilyDatum.modular(12, 1, -11), 6, "remark")
    assert remark.claim is Claim.MODULAR_NONVANISH_REMARK and remark.certified
    # remark threshold 4π^2 e^(2γ-2) ≈ 16.95
    assert not certify_modular(FamilyDatum.modular(12, 1, 1), 6, "remark").certified
    assert certify_modular(FamilyDatum.modular(12, 17, 1), 6, "remark").certified


def test_modular_hypotheses():
    fd = FamilyDatum.modular(12, 1, 13)
    with pytest.raises(HypothesisError):
        certify_modular(fd, 5)                         # a/b < 0
    with pytest.raises(HypothesisError):
        certify_modular(fd, Fraction(23, 2))           # a/b > k/2 - 1
    with pytest.raises(HypothesisError):
        certify_modular(fd, 11, "remark")              # a/b > k/2 - 2
    with pytest.raises(HypothesisError):
        certify_modular(FamilyDatum.modular(4, 1, 13), 2, "remark")
    with pytest.raises(DomainError):
        certify_modular(fd, 6, "other")


@settings(max_examples=40, deadline=None)
@given(N=st.integers(1, 200), D=st.sampled_from([1, 5, -3, -4, 8, 13, -11, 17, -7]))
def test_no_false_certificates(N, D):
    from math import gcd
    if gcd(N, D) != 1:
        return
    cert = certify_modular(FamilyDatum.modular(12, N, D), 6)
    with mpmath.workprec(600):
        exact = 2 * mpmath.log(2 * mpmath.pi) + 2 * mpmath.euler - mpmath.log(N * D * D)
    assert cert.certified == (exact < -mpmath.mpf(2) ** -32)
    assert cert.detail("precision_flip") is None


# half-integral weight ------------------------------------------------------------

def test_halfint_constants_bracket():
    with mpmath.workprec(200):
        c1 = halfint_constant(1).real
        c3 = halfint_constant(3).real
        assert mpmath.mpf("5.37218") < c1 < mpmath.mpf("5.37219")
        assert mpmath.mpf("2.23059") < c3 < mpmath.mpf("2.23060")


def test_halfint_certificates():
    cert = certify_halfint_central(Fraction(13, 2), 8)
    assert cert.certified and cert.detail("c") == "1"
    assert certify_halfint_central("15/2", 4).detail("c") == "3"
    # level 4 removes the log(N/4) help
    assert not certify_halfint_central(Fraction(13, 2), 4).certified


def test_halfint_hypotheses():
    with pytest.raises(HypothesisError):
        certify_halfint_central(6, 8)
    with pytest.raises(HypothesisError):
        certify_halfint_central(Fraction(13, 2), 6)
    with pytest.raises(OutOfProvenRangeError):
        certify_halfint_central(Fraction(9, 2), 8)     # c = 1, k <= 6
    with pytest.raises(OutOfProvenRangeError):
        certify_halfint_central(Fraction(7, 2), 8)     # c = 3, k <= 5


# Hilbert -----------------------------------------------------------------------

def test_hilbert_minkowski_range():
    for n in (5, 6, 9):
        dF = {5: 14641, 6: 300125, 9: 10 ** 12}[n]
        assert certify_hilbert(FamilyDatum.hilbert(10, n, dF), 5).certified


def test_hilbert_small_degrees():
    cubic = certify_hilbert(FamilyDatum.hilbert(10, 3, 49), 5)
    assert cubic.certified and cubic.margin == pytest.approx(0.134, abs=1e-3)
    assert certify_hilbert(FamilyDatum.hilbert(10, 4, 725), 5).certified
    quad = certify_hilbert(FamilyDatum.hilbert(8, 2, 5), 4)
    assert not quad.certified and quad.margin == pytest.approx(-0.7748, abs=1e-4)


def test_hilbert_hypotheses():
    with pytest.raises(HypothesisError):
        certify_hilbert(FamilyDatum.hilbert(10, 3, 1), 5)        # Minkowski
    with pytest.raises(HypothesisError):
        certify_hilbert(FamilyDatum.hilbert(10, 3, 23), 5)       # below 49
    with pytest.raises(HypothesisError):
        certify_hilbert(FamilyDatum.hilbert(4, 3, 49), 2)
    with pytest.raises(HypothesisError):
        certify_hilbert(FamilyDatum.hilbert(6, 2, 5), 3)
    with pytest.raises(HypothesisError):
        certify_hilbert(FamilyDatum.hilbert(10, 3, 49), 4)       # a/b < 0
    # a user table can override the defaults
    cert = certify_hilbert(FamilyDatum.hilbert(10, 3, 23), 5, minimal_discriminants={3: 23})
    assert any("23" in a for a in cert.assumptions)


# Siegel ------------------------------------------------------------------------

def test_siegel_margin():
    cert = certify_siegel(FamilyDatum.siegel(2, 30), 15)
    with mpmath.workprec(200):
        psi7 = -mpmath.euler + mpmath.mpf(49) / 20
        expected = 4 * (psi7 - mpmath.log(2 * mpmath.pi))
        assert abs(cert.margin - float(expected)) < 1e-12
    assert cert.detail("psi_7") == "-1*gamma + 49/20"
    assert certify_siegel(FamilyDatum.siegel(2, 20), 10).certified
    with pytest.raises(HypothesisError):
        certify_siegel(FamilyDatum.siegel(3, 19), Fraction(19, 2))
    with pytest.raises(HypothesisError):
        certify_siegel(FamilyDatum.siegel(2, 30), Fraction(33, 2))   # a/b >= (g+1)/2


# rank --------------------------------------------------------------------------

def _exprs(cert):
    return [parse_expr(v) for k, v in cert.details if k.startswith("expr[")]


def test_rank_property_a():
    with pytest.raises(PropertyAError):
        rank_certificate(FamilyDatum.gld(1, [1]), J=[2, 4], s0=HALF)
    cert = rank_certificate(FamilyDatum.gld(1, [1]), J=[2, 3, 5], s0=HALF)
    assert cert.certified and int(cert.detail("rank")) >= 2


def test_rank_variants():
    by_d = rank_certificate(FamilyDatum.modular(12, 1, 1), J=[5, 13, 17], s0=6, vary="D")
    assert by_d.certified
    hil = rank_certificate(FamilyDatum.hilbert(10, 3, 49), J=[2, 3, 5, 7], s0=5)
    assert hil.certified
    sieg = rank_certificate(FamilyDatum.siegel(2, 20), q=9)
    assert sieg.certified
    for cert in (by_d, hil, sieg):
        assert int(cert.detail("rank")) <= exact_rank(_exprs(cert))


def test_rank_coprime_counts():
    for q in (7, 9, 11, 13, 15):
        cert = rank_certificate(FamilyDatum.modular(2), q=q)
        from sympy import totient
        assert cert.detail("psipair_count") == str(int(totient(q)) // 2)
        assert int(cert.detail("guarantee")) == int(totient(q)) // 2 - 2
        assert cert.certified


def test_rank_hypotheses():
    with pytest.raises(HypothesisError):
        rank_certificate(FamilyDatum.modular(2), q=5)
    with pytest.raises(HypothesisError):
        rank_certificate(FamilyDatum.siegel(3, 22), q=9)
    with pytest.raises(HypothesisError):
        rank_certificate(FamilyDatum.siegel(2, 20), q=10)
    with pytest.raises(DomainError):
        rank_certificate(FamilyDatum.siegel(2, 20), J=[2, 3], s0=10)
    with pytest.raises(DomainError):
        rank_certificate(FamilyDatum.gld(1, [1]), q=7)
    with pytest.raises(DomainError):
        rank_certificate(FamilyDatum.gld(1, [1]), J=[2, 3])


# records -----------------------------------------------------------------------

@pytest.mark.parametrize("cert", [
    certify_gld(FamilyDatum.gld(23, [1]), HALF),
    certify_halfint_central(Fraction(13, 2), 8, Precision(256)),
    rank_certificate(FamilyDatum.modular(2), q=7),
])
def test_text_round_trip(cert):
    back = Certificate.from_text(cert.to_text())
    assert back.to_text() == cert.to_text()
    assert back.verdict is cert.verdict
    data = json.loads(json.dumps(cert.to_json()))
    assert data["verdict"] == cert.verdict.value


def test_text_errors():
    with pytest.raises(FormatError):
        Certificate.from_text("claim: RankBound\nverdict: Certified\n")
    with pytest.raises(FormatError):
        Certificate.from_text("no separator here\n")
    text = certify_gld(FamilyDatum.gld(23, [1]), HALF).to_text()
    with pytest.raises(FormatError):
        Certificate.from_text(text + "claim: RankBound\n")

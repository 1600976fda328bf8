"""Non-vanishing and rank certificates.

Each ``certify_*`` function checks the hypotheses of one explicit inequality,
builds the bounding quantity as an exact :class:`ConstExpr`, evaluates it,
and re-evaluates it at twice the precision.  A certificate is issued only
when the quantity is below ``-2^(-bits/4)`` at both precisions.

:func:`rank_certificate` assembles the exact right-hand sides of a family of
identities and reports the rank of their span over the formal symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial, gcd

import mpmath

from .errors import DomainError, FormatError, HypothesisError, OutOfProvenRangeError, PropertyAError
from .families import CriticalPoint, Family, FamilyDatum, closed_form_sum_exact
from .precision import DEFAULT_PRECISION, BigComplex, Precision, as_precision, working
from .symbolic import (
    EULER_GAMMA,
    LOG_PI,
    ConstExpr,
    IntegerSet,
    Kind,
    euler_phi,
    exact_rank,
    log_n_expand,
    log_prime,
    property_a_check,
    psi_expr,
    rank_lower_bound,
)


class Claim(Enum):
    GLD_NONVANISH = "GLdNonvanish"
    MODULAR_NONVANISH = "ModularNonvanish"
    MODULAR_NONVANISH_REMARK = "ModularNonvanishRemark"
    HALFINT_CENTRAL = "HalfIntCentral"
    HILBERT_NONVANISH = "HilbertNonvanish"
    SIEGEL_NONVANISH = "SiegelNonvanish"
    RANK_BOUND = "RankBound"


class Verdict(Enum):
    CERTIFIED = "Certified"
    NOT_CERTIFIED = "NotCertified"


#: minimal discriminants of totally real fields of degree 2, 3, 4 (Q(√5), the
#: cubic field of conductor 7, the quartic field of discriminant 725)
MINIMAL_TOTALLY_REAL_DISCRIMINANT = {2: 5, 3: 49, 4: 725}

ASSUME_NONVANISHING = "L(f, s0) != 0 at the points involved (membership in E(...)) is an input assumption"
ASSUME_FORMAL = "distinct psi symbols are treated as linearly independent over Q"
ASSUME_Q0 = "q is assumed coprime to the non-effective integer q0"
ASSUME_LOGS = "logs of a property-A set are Q-independent by unique factorization"


@dataclass(frozen=True)
class Certificate:
    """Immutable record of one checked inequality or rank bound.

    ``bound`` is the exact quantity (ConstExpr text) that must be negative,
    or for rank claims a description of the expression set.  ``margin`` is
    ``-bound_value`` for inequalities and ``rank - guarantee`` for ranks.
    """

    claim: Claim
    verdict: Verdict
    inputs: tuple[tuple[str, str], ...]
    bound: str
    bound_value: BigComplex
    margin: float
    precision_bits: int
    details: tuple[tuple[str, str], ...] = ()
    assumptions: tuple[str, ...] = ()

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED

    def detail(self, key: str) -> str | None:
        return dict(self.details).get(key)

    # text record --------------------------------------------------------
    def to_text(self) -> str:
        digits = max(25, int(self.precision_bits * 0.30103))
        lines = [
            f"claim: {self.claim.value}",
            f"verdict: {self.verdict.value}",
            f"precision_bits: {self.precision_bits}",
        ]
        lines += [f"input.{k}: {v}" for k, v in self.inputs]
        lines += [
            f"bound: {self.bound}",
            f"bound_value: {self.bound_value.to_string(digits)}",
            f"margin: {self.margin!r}",
        ]
        lines += [f"detail.{k}: {v}" for k, v in self.details]
        lines += [f"assumption: {a}" for a in self.assumptions]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Certificate":
        scalars: dict[str, str] = {}
        inputs, details, assumptions = [], [], []
        for lineno, raw in enumerate(text.splitlines(), 1):
            if not raw.strip():
                continue
            if ": " not in raw and not raw.rstrip().endswith(":"):
                raise FormatError(f"expected 'key: value', got {raw!r}", lineno)
            key, _, val = raw.partition(":")
            key, val = key.strip(), val.strip()
            if key.startswith("input."):
                inputs.append((key[6:], val))
            elif key.startswith("detail."):
                details.append((key[7:], val))
            elif key == "assumption":
                assumptions.append(val)
            elif key in scalars:
                raise FormatError(f"duplicate key {key!r}", lineno)
            else:
                scalars[key] = val
        try:
            bits = int(scalars["precision_bits"])
            return cls(
                claim=Claim(scalars["claim"]),
                verdict=Verdict(scalars["verdict"]),
                inputs=tuple(inputs),
                bound=scalars["bound"],
                bound_value=BigComplex(scalars["bound_value"], Precision(bits)),
                margin=float(scalars["margin"]),
                precision_bits=bits,
                details=tuple(details),
                assumptions=tuple(assumptions),
            )
        except KeyError as exc:
            raise FormatError(f"missing field {exc.args[0]!r}") from None
        except ValueError as exc:
            raise FormatError(str(exc)) from None

    def to_json(self) -> dict:
        digits = max(25, int(self.precision_bits * 0.30103))
        return {
            "claim": self.claim.value,
            "verdict": self.verdict.value,
            "inputs": dict(self.inputs),
            "bound": self.bound,
            "bound_value": self.bound_value.to_string(digits),
            "margin": self.margin,
            "precision_bits": self.precision_bits,
            "details": dict(self.details),
            "assumptions": list(self.assumptions),
        }

    def __str__(self):
        return self.to_text()


# ---------------------------------------------------------------------------
# helpers

def _q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _datum_inputs(fd: FamilyDatum) -> list[tuple[str, str]]:
    out = []
    for line in fd.to_text().splitlines():
        key, _, val = line.partition(" = ")
        out.append((key, val))
    return out


def _negative_certificate(claim: Claim, quantity: ConstExpr, prec: Precision,
                          inputs, details=(), assumptions=()) -> Certificate:
    """Evaluate ``quantity`` at ``prec`` and at doubled precision; certify if both are < -margin."""
    threshold = mpmath.ldexp(1, -prec.bits // 4)
    value = quantity.evaluate(prec)
    check = quantity.evaluate(prec.doubled())
    ok_here = value.real < -threshold
    ok_double = check.real < -threshold
    details = list(details)
    if ok_here != ok_double:
        details.append(("precision_flip", "verdict differs at doubled precision; not certified"))
    verdict = Verdict.CERTIFIED if ok_here and ok_double else Verdict.NOT_CERTIFIED
    details.append(("doubled_precision_value", check.to_string(25)))
    return Certificate(
        claim=claim,
        verdict=verdict,
        inputs=tuple(inputs),
        bound=str(quantity),
        bound_value=value,
        margin=float(-value.real),
        precision_bits=prec.bits,
        details=tuple(details),
        assumptions=tuple(assumptions),
    )


def _const_value(expr_fn, prec: Precision) -> str:
    with working(prec.working) as ctx:
        v = expr_fn(ctx)
        return mpmath.nstr(v, 25)


def _offset(fd: FamilyDatum, s0) -> Fraction:
    """a/b = s0 - k/2 for a rational s0."""
    point = CriticalPoint.of(s0)
    if not point.is_exact:
        raise HypothesisError("s0 must be rational, s0 = k/2 + a/b")
    return point.exact - fd.k / 2


def _two_log_2pi() -> ConstExpr:
    return ConstExpr({log_prime(2): 2, LOG_PI: 2})


# ---------------------------------------------------------------------------
# inequality certificates

def certify_gld(fd: FamilyDatum, s0, prec: Precision | int | None = None) -> Certificate:
    """Certificate that L'/L(s0) + L'/L(1 - s0) < 0, valid when N^(1/d) > 4π e^γ."""
    prec = as_precision(prec)
    if fd.family is not Family.GLD:
        raise DomainError("certify_gld needs GL(d) data")
    point = CriticalPoint.of(s0)
    if not point.is_exact and complex(point.numeric).imag != 0:
        raise HypothesisError("s0 must be real")
    x = point.exact if point.is_exact else Fraction(complex(point.numeric).real)
    if not 0 < x < 1:
        raise HypothesisError(f"s0 = {x} is not in (0, 1)")
    for kap in fd.kappa:
        if not isinstance(kap, Fraction):
            if complex(kap).imag != 0:
                raise HypothesisError(f"local parameter {kap} is not real")
            kap = Fraction(complex(kap).real)
        if x + kap < 1 or 1 - x + kap < 1:
            raise HypothesisError(f"need s0 + κ >= 1 and 1 - s0 + κ >= 1, fails for κ = {_q(kap)}")
    d = fd.d
    quantity = ConstExpr({log_prime(2): 2 * d, EULER_GAMMA: d, LOG_PI: d}) - log_n_expand(fd.N)
    threshold = _const_value(lambda c: 4 * c.pi * c.exp(c.euler), prec)
    root = _const_value(lambda c: c.root(c.mpf(fd.N), d), prec)
    return _negative_certificate(
        Claim.GLD_NONVANISH, quantity, prec,
        _datum_inputs(fd) + [("s0", _q(x))],
        [("threshold_4pi_exp_gamma", threshold), ("N_root_d", root)],
        [ASSUME_NONVANISHING],
    )


def certify_modular(fd: FamilyDatum, s0, branch: str = "primary",
                    prec: Precision | int | None = None) -> Certificate:
    """Certificate for the twisted modular sum at s0 = k/2 + a/b.

    ``branch="primary"`` needs k >= 3, 0 <= a/b <= k/2 - 1 and compares N D^2
    with 4π^2 e^(2γ); ``branch="remark"`` needs k >= 5, 0 <= a/b <= k/2 - 2
    and uses the threshold 4π^2 e^(2γ - 2).
    """
    prec = as_precision(prec)
    if fd.family is not Family.MODULAR:
        raise DomainError("certify_modular needs modular data")
    off = _offset(fd, s0)
    if branch == "primary":
        if fd.k < 3 or not 0 <= off <= fd.k / 2 - 1:
            raise HypothesisError(f"need k >= 3 and 0 <= a/b <= k/2 - 1 (k = {_q(fd.k)}, a/b = {_q(off)})")
        claim, shift, exponent = Claim.MODULAR_NONVANISH, 0, 0
    elif branch == "remark":
        if fd.k < 5 or not 0 <= off <= fd.k / 2 - 2:
            raise HypothesisError(f"need k >= 5 and 0 <= a/b <= k/2 - 2 (k = {_q(fd.k)}, a/b = {_q(off)})")
        claim, shift, exponent = Claim.MODULAR_NONVANISH_REMARK, -2, -2
    else:
        raise DomainError(f"unknown branch {branch!r}")
    quantity = (_two_log_2pi() + ConstExpr.of(EULER_GAMMA, 2) + shift
                - log_n_expand(fd.N) - log_n_expand(abs(fd.D)) * 2)
    threshold = _const_value(lambda c: 4 * c.pi ** 2 * c.exp(2 * c.euler + exponent), prec)
    return _negative_certificate(
        claim, quantity, prec,
        _datum_inputs(fd) + [("s0", _q(fd.k / 2 + off)), ("branch", branch)],
        [("threshold", threshold), ("ND2", str(fd.N * fd.D * fd.D))],
        [ASSUME_NONVANISHING],
    )


def halfint_constant(c: int, prec: Precision = DEFAULT_PRECISION) -> BigComplex:
    """log π - ψ(c/4) for c in {1, 3}."""
    if c not in (1, 3):
        raise DomainError("c must be 1 or 3")
    return (ConstExpr.of(LOG_PI) - psi_expr(0, Fraction(c, 4))).evaluate(prec)


def certify_halfint_central(k, N: int, prec: Precision | int | None = None) -> Certificate:
    """Certificate that L'(f, k/2) != 0 for half-integral weight k and level N ≡ 0 mod 4.

    Writing k/2 = c/4 + [k/2] with c in {1, 3}, the quantity
    log π - ψ(c/4) - Σ_{n<[k/2]} 4/(4n + c) - (1/2) log(N/4) must be negative.
    """
    prec = as_precision(prec)
    k = Fraction(k)
    if k.denominator != 2 or k < Fraction(3, 2):
        raise HypothesisError(f"k = {_q(k)} is not in 1/2 + N")
    if N < 4 or N % 4:
        raise HypothesisError(f"level N = {N} must be a positive multiple of 4")
    half = k / 2
    upper = int(half)  # [k/2]
    c = int((half - upper) * 4)
    if (c == 1 and k <= 6) or (c == 3 and k <= 5):
        raise OutOfProvenRangeError(
            f"k = {_q(k)} is below the range covered by the estimate (k > {6 if c == 1 else 5})")
    harmonic = sum((Fraction(4, 4 * n + c) for n in range(upper)), Fraction(0))
    level = (log_n_expand(N) - ConstExpr.of(log_prime(2), 2)) * Fraction(1, 2)
    constant = ConstExpr.of(LOG_PI) - psi_expr(0, Fraction(c, 4))
    quantity = constant - harmonic - level
    return _negative_certificate(
        Claim.HALFINT_CENTRAL, quantity, prec,
        [("k", _q(k)), ("N", str(N))],
        [("c", str(c)), ("constant_log_pi_minus_psi", constant.evaluate(prec).to_string(25)),
         ("harmonic_sum", _q(harmonic))],
        ["L(f, k/2) != 0 is an input assumption"],
    )


def certify_hilbert(fd: FamilyDatum, s0, prec: Precision | int | None = None,
                    minimal_discriminants: dict[int, int] | None = None) -> Certificate:
    """Certificate for a Hilbert modular form at s0 = k/2 + a/b.

    Hypotheses: k >= 5, n >= 3 and 0 <= a/b <= k/2 - 2, or n = 2 with k >= 8.
    For n >= 5 the discriminant is bounded below through Minkowski's bound;
    for n <= 4 the datum's dF is used after checking it against the table of
    minimal totally real discriminants (overridable).
    """
    prec = as_precision(prec)
    if fd.family is not Family.HILBERT:
        raise DomainError("certify_hilbert needs Hilbert data")
    table = dict(MINIMAL_TOTALLY_REAL_DISCRIMINANT)
    table.update(minimal_discriminants or {})
    n, k = fd.n, fd.k
    off = _offset(fd, s0)
    if n == 2:
        if k < 8:
            raise HypothesisError("degree 2 needs k >= 8")
    elif n >= 3:
        if k < 5:
            raise HypothesisError("need k >= 5")
    else:
        raise HypothesisError("need a base field of degree n >= 2")
    if not 0 <= off <= k / 2 - 2:
        raise HypothesisError(f"need 0 <= a/b <= k/2 - 2, got a/b = {_q(off)}")
    # Minkowski: dF >= (n^n / n!)^2
    if fd.dF * factorial(n) ** 2 < n ** (2 * n):
        raise HypothesisError(f"dF = {fd.dF} violates Minkowski's bound for degree {n}")
    if n in table and fd.dF < table[n]:
        raise HypothesisError(
            f"dF = {fd.dF} is below the minimal totally real discriminant {table[n]} for degree {n}")
    # s0 >= 5/2 (s0 >= 4 when n = 2, k >= 8) and k - s0 >= 2
    low = Fraction(4) if n == 2 else Fraction(5, 2)
    digamma_part = (psi_expr(0, low) + psi_expr(0, Fraction(2))) * n
    if n >= 5:
        log_dF_lower = (log_n_expand(n) * (2 * n) - log_n_expand(factorial(n)) * 2)
        source = "minkowski"
    else:
        log_dF_lower = log_n_expand(fd.dF)
        source = "datum dF (checked against the minimal discriminant table)"
    quantity = _two_log_2pi() * n - log_dF_lower * 2 - digamma_part
    return _negative_certificate(
        Claim.HILBERT_NONVANISH, quantity, prec,
        _datum_inputs(fd) + [("s0", _q(k / 2 + off))],
        [("discriminant_bound", source)],
        [ASSUME_NONVANISHING] + ([f"minimal discriminant table: {table}"] if n <= 4 else []),
    )


def certify_siegel(fd: FamilyDatum, s0, prec: Precision | int | None = None) -> Certificate:
    """Certificate for a Koecher-Maass series at s0 = k/2 + a/b: 2g log 2π - 2g ψ(7) < 0."""
    prec = as_precision(prec)
    if fd.family is not Family.SIEGEL:
        raise DomainError("certify_siegel needs Siegel data")
    g, k = fd.g, fd.k
    if k < 2 * (g + 7):
        raise HypothesisError(f"need k >= 2(g + 7) = {2 * (g + 7)}, got k = {_q(k)}")
    off = _offset(fd, s0)
    if not 0 <= off < Fraction(g + 1, 2):
        raise HypothesisError(f"need 0 <= a/b < (g + 1)/2, got a/b = {_q(off)}")
    quantity = (_two_log_2pi() - psi_expr(0, 7) * 2) * g
    return _negative_certificate(
        Claim.SIEGEL_NONVANISH, quantity, prec,
        _datum_inputs(fd) + [("s0", _q(k / 2 + off))],
        [("psi_7", str(psi_expr(0, 7)))],
        [ASSUME_NONVANISHING],
    )


# ---------------------------------------------------------------------------
# rank certificates

def _coprime_points(q: int) -> list[Fraction]:
    return [Fraction(a, q) for a in range(1, (q + 1) // 2) if 2 * a < q and gcd(a, q) == 1]


def rank_certificate(template: FamilyDatum, J=None, s0=None, q: int | None = None,
                     vary: str | None = None, prec: Precision | int | None = None) -> Certificate:
    """Rank of the span of closed-form right-hand sides.

    Two modes:

    * ``J`` and ``s0``: one identity per member of J, varying the conductor N
      (GL(d), modular), the discriminant D (modular with ``vary="D"``) or the
      level norm (Hilbert).  J must have property A; the guarantee is |J| - 1.
    * ``q`` (>= 7): the points s0 = a/q, 1 <= a < q/2, gcd(a, q) = 1, for a
      fixed modular, Hilbert or (even genus, odd q) Siegel datum; the
      guarantee is φ(q)/2 - 2.
    """
    prec = as_precision(prec)
    fam = template.family
    inputs = _datum_inputs(template)
    assumptions = [ASSUME_NONVANISHING]
    if q is not None:
        if q < 7:
            raise HypothesisError(f"the coprime construction needs q >= 7, got {q}")
        if fam is Family.GLD:
            raise DomainError("the coprime construction is not available for GL(d) data")
        if fam is Family.MODULAR and (template.k.denominator != 1 or template.k < 2):
            raise HypothesisError("the coprime construction needs an integer weight k >= 2")
        if fam is Family.SIEGEL and (template.g % 2 or q % 2 == 0):
            raise HypothesisError("the Siegel construction needs even g and odd q")
        points = _coprime_points(q)
        exprs = [closed_form_sum_exact(template, x) for x in points]
        guarantee = euler_phi(q) // 2 - 2
        inputs.append(("q", str(q)))
        assumptions += [ASSUME_FORMAL, ASSUME_Q0]
        labels = [f"s0={_q(x)}" for x in points]
    else:
        if J is None or s0 is None:
            raise DomainError("give either q, or both J and s0")
        members = [int(j) for j in J]
        vary = vary or {Family.GLD: "N", Family.MODULAR: "N", Family.HILBERT: "normN"}.get(fam)
        if vary is None:
            raise DomainError("rank over a set J is not defined for Siegel data")
        if vary == "D" and fam is not Family.MODULAR:
            raise DomainError("only modular data can vary the discriminant")
        magnitudes = [abs(j) for j in members]
        if len(set(magnitudes)) != len(members):
            raise DomainError("J has repeated elements")
        if not property_a_check(IntegerSet(magnitudes)):
            raise PropertyAError(f"J = {sorted(magnitudes)} does not have property A")
        try:
            data = [template.with_(**{vary: j}) for j in members]
        except DomainError as exc:
            raise HypothesisError(str(exc)) from None
        exprs = [closed_form_sum_exact(fd, s0) for fd in data]
        guarantee = len(members) - 1
        inputs += [("J", ",".join(str(j) for j in members)), ("vary", vary),
                   ("s0", str(CriticalPoint.of(s0)))]
        assumptions.append(ASSUME_LOGS)
        labels = [f"{vary}={j}" for j in members]
    # e_i = v_i - r_i w with w the part shared by every expression
    shared = {s: c for s, c in exprs[0].terms.items()
              if all(e.coefficient(s) == c for e in exprs[1:])}
    w = ConstExpr(shared)
    vs = [e - w for e in exprs]
    rank = rank_lower_bound(vs, w, [-1] * len(vs))
    base_rank = exact_rank(vs)
    pairs = sorted({s for e in exprs for s in e.symbols() if s.kind is Kind.PSI_PAIR},
                   key=lambda s: s.sort_key)
    details = [
        ("rank", str(rank)),
        ("guarantee", str(guarantee)),
        ("independent_part_rank", str(base_rank)),
        ("shared_part", str(w)),
        ("psipair_symbols", " ".join(str(s) for s in pairs) if pairs else "none"),
        ("psipair_count", str(len(pairs))),
    ]
    details += [(f"expr[{lab}]", str(e)) for lab, e in zip(labels, exprs)]
    verdict = Verdict.CERTIFIED if rank >= guarantee else Verdict.NOT_CERTIFIED
    return Certificate(
        claim=Claim.RANK_BOUND,
        verdict=verdict,
        inputs=tuple(inputs),
        bound=f"rank >= {guarantee}",
        bound_value=BigComplex(rank, prec),
        margin=float(rank - guarantee),
        precision_bits=prec.bits,
        details=tuple(details),
        assumptions=tuple(assumptions),
    )


__all__ = [
    "Certificate",
    "Claim",
    "MINIMAL_TOTALLY_REAL_DISCRIMINANT",
    "Verdict",
    "certify_gld",
    "certify_halfint_central",
    "certify_hilbert",
    "certify_modular",
    "certify_siegel",
    "halfint_constant",
    "rank_certificate",
]

"""Functional-equation data for four L-function families and their closed forms.

For each family the sum L'/L(s0) + L'/L(w - s0), with w the reflection
point of the functional equation, equals an explicit combination of digamma
values and logarithms.  This module evaluates that combination numerically
(:func:`closed_form_sum`) and exactly over :mod:`lquot.symbolic`
(:func:`closed_form_sum_exact`), together with the analogous identities for
higher derivatives.

Families
--------
gld       cuspidal automorphic form on GL(d), conductor N, local parameters κ_j,
          functional equation s <-> 1 - s
modular   weight-k modular form of level N twisted by a quadratic character of
          fundamental discriminant D, s <-> k - s (k may be a half-integer)
hilbert   Hilbert modular form of parallel weight k over a totally real field of
          degree n and discriminant dF, level norm normN, s <-> k - s
siegel    Koecher-Maass series of a Siegel form of genus g and weight k, s <-> k - s
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from enum import Enum
from fractions import Fraction
from math import comb, gcd

from .errors import DomainError, FormatError
from .polygamma import psi_mp
from .precision import DEFAULT_PRECISION, BigComplex, Precision, const_mp, to_mp, working
from .symbolic import (
    LOG_PI,
    ConstExpr,
    factorize,
    log_n_expand,
    log_prime,
    psi_expr,
    psi_half_pair,
)


class Family(Enum):
    GLD = "gld"
    MODULAR = "modular"
    HILBERT = "hilbert"
    SIEGEL = "siegel"

    @classmethod
    def parse(cls, name: "str | Family") -> "Family":
        if isinstance(name, Family):
            return name
        key = name.strip().lower()
        aliases = {"automorphicgld": "gld", "modulartwisted": "modular", "gl": "gld"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise DomainError(f"unknown family {name!r}") from None


def is_fundamental_discriminant(D: int) -> bool:
    """True for 1 and for discriminants of quadratic fields."""
    if D == 1:
        return True
    if D == 0:
        return False
    if D % 4 == 1:
        return _squarefree(abs(D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(abs(m))
    return False


def _squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorize(n).values())


def _to_kappa(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return complex(x.replace("i", "j"))
    if isinstance(x, float):
        return Fraction(x) if x.is_integer() else x
    if isinstance(x, complex):
        return x
    raise DomainError(f"cannot use {x!r} as a local parameter")


_FIELDS_BY_FAMILY = {
    Family.GLD: ("N", "kappa"),
    Family.MODULAR: ("N", "k", "D"),
    Family.HILBERT: ("k", "n", "dF", "normN"),
    Family.SIEGEL: ("g", "k"),
}


@dataclass(frozen=True)
class FamilyDatum:
    """Parameters entering a family's functional equation.

    Only the fields relevant to ``family`` are set; the rest stay ``None``.
    ``d`` is derived from ``kappa`` for GL(d) data.
    """

    family: Family
    N: int | None = None
    d: int | None = None
    kappa: tuple = ()
    k: Fraction | None = None
    D: int | None = None
    n: int | None = None
    dF: int | None = None
    normN: int | None = None
    g: int | None = None

    def __post_init__(self):
        fam = Family.parse(self.family)
        object.__setattr__(self, "family", fam)
        if self.k is not None:
            object.__setattr__(self, "k", Fraction(self.k))
        kappa = tuple(_to_kappa(x) for x in self.kappa)
        object.__setattr__(self, "kappa", kappa)
        for name in ("N", "d", "D", "n", "dF", "normN", "g"):
            val = getattr(self, name)
            if val is not None:
                if isinstance(val, bool) or int(val) != val:
                    raise DomainError(f"{name} must be an integer, got {val!r}")
                object.__setattr__(self, name, int(val))
        needed = _FIELDS_BY_FAMILY[fam]
        for name in needed:
            if getattr(self, name) in (None, ()):
                raise DomainError(f"{fam.value} datum needs {name}")
        extra = [f.name for f in fields(self)
                 if f.name not in needed + ("family", "d") and getattr(self, f.name) not in (None, ())]
        if extra:
            raise DomainError(f"{fam.value} datum does not use {', '.join(extra)}")
        getattr(self, f"_check_{fam.value}")()

    def _check_gld(self):
        if self.d is None:
            object.__setattr__(self, "d", len(self.kappa))
        if self.d != len(self.kappa) or self.d < 1:
            raise DomainError(f"d = {self.d} but {len(self.kappa)} local parameters given")
        if self.N < 1:
            raise DomainError("conductor N must be >= 1")
        for x in self.kappa:
            if complex(x).real <= -1:
                raise DomainError(f"local parameter {x} needs real part > -1")

    def _check_modular(self):
        if self.N < 1:
            raise DomainError("level N must be >= 1")
        if (2 * self.k).denominator != 1 or self.k < Fraction(1, 2):
            raise DomainError(f"weight must be a positive half-integer, got {self.k}")
        if not is_fundamental_discriminant(self.D):
            raise DomainError(f"D = {self.D} is not a fundamental discriminant")
        if gcd(self.D, self.N) != 1:
            raise DomainError(f"D = {self.D} and N = {self.N} are not coprime")

    def _check_hilbert(self):
        if self.k.denominator != 1 or self.k < 1:
            raise DomainError(f"Hilbert weight must be a positive integer, got {self.k}")
        if self.n < 1 or self.dF < 1 or self.normN < 1:
            raise DomainError("n, dF and normN must be >= 1")

    def _check_siegel(self):
        if self.g < 2:
            raise DomainError(f"genus must be >= 2, got {self.g}")
        if self.k.denominator != 1 or self.k < 1:
            raise DomainError(f"Siegel weight must be a positive integer, got {self.k}")

    # constructors -------------------------------------------------------
    @classmethod
    def gld(cls, N: int, kappa) -> "FamilyDatum":
        return cls(Family.GLD, N=N, kappa=tuple(kappa))

    @classmethod
    def modular(cls, k, N: int = 1, D: int = 1) -> "FamilyDatum":
        return cls(Family.MODULAR, N=N, k=Fraction(k), D=D)

    @classmethod
    def hilbert(cls, k, n: int, dF: int = 1, normN: int = 1) -> "FamilyDatum":
        return cls(Family.HILBERT, k=Fraction(k), n=n, dF=dF, normN=normN)

    @classmethod
    def siegel(cls, g: int, k) -> "FamilyDatum":
        return cls(Family.SIEGEL, g=g, k=Fraction(k))

    def with_(self, **changes) -> "FamilyDatum":
        return replace(self, **changes)

    @property
    def reflection(self) -> Fraction:
        """w in the functional equation s <-> w - s."""
        return Fraction(1) if self.family is Family.GLD else self.k

    @property
    def conductor(self) -> int:
        if self.family is Family.GLD:
            return self.N
        if self.family is Family.MODULAR:
            return self.N * self.D * self.D
        if self.family is Family.HILBERT:
            return self.normN * self.dF * self.dF
        return 1

    # serialization ------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"family = {self.family.value}"]
        for name in _FIELDS_BY_FAMILY[self.family]:
            val = getattr(self, name)
            if name == "kappa":
                val = ", ".join(_fmt_param(x) for x in val)
            elif isinstance(val, Fraction):
                val = _fmt_param(val)
            lines.append(f"{name} = {val}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FamilyDatum":
        values: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FormatError(f"expected 'key = value', got {raw!r}", lineno)
            key, val = (p.strip() for p in line.split("=", 1))
            if key in values:
                raise FormatError(f"duplicate key {key!r}", lineno)
            values[key] = val
        if "family" not in values:
            raise FormatError("missing 'family' key")
        fam = Family.parse(values.pop("family"))
        kwargs: dict = {}
        for key, val in values.items():
            if key == "kappa":
                kwargs[key] = tuple(_to_kappa(p.strip()) for p in val.split(",") if p.strip())
            elif key == "k":
                kwargs[key] = Fraction(val)
            elif key in ("N", "d", "D", "n", "dF", "normN", "g"):
                try:
                    kwargs[key] = int(val)
                except ValueError:
                    raise FormatError(f"{key} must be an integer, got {val!r}") from None
            else:
                raise FormatError(f"unknown key {key!r}")
        return cls(fam, **kwargs)


def _fmt_param(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(complex(x)).strip("()")


@dataclass(frozen=True)
class CriticalPoint:
    """A point s0, kept exact when rational.

    Decimal strings such as ``"5.7"`` are read as exact rationals.
    """

    exact: Fraction | None = None
    numeric: complex | None = field(default=None, compare=False)

    def __post_init__(self):
        if (self.exact is None) == (self.numeric is None):
            raise DomainError("give exactly one of an exact or a numeric value")

    @classmethod
    def of(cls, x) -> "CriticalPoint":
        if isinstance(x, CriticalPoint):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(exact=Fraction(x))
        if isinstance(x, str):
            try:
                return cls(exact=Fraction(x.strip()))
            except ValueError:
                return cls(numeric=complex(x.strip().replace(" ", "").replace("i", "j")))
        if isinstance(x, float):
            return cls(exact=Fraction(x))
        if isinstance(x, BigComplex):
            return cls(numeric=x)
        if isinstance(x, complex):
            return cls(exact=Fraction(x.real)) if x.imag == 0 else cls(numeric=x)
        raise DomainError(f"cannot interpret {x!r} as a point")

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def real(self) -> float:
        return float(self.exact) if self.is_exact else complex(self.numeric).real

    def mp(self, ctx):
        return to_mp(ctx, self.exact if self.is_exact else self.numeric)

    def reflect(self, w: Fraction) -> "CriticalPoint":
        if self.is_exact:
            return CriticalPoint(exact=w - self.exact)
        if isinstance(self.numeric, BigComplex):
            return CriticalPoint(numeric=-self.numeric + w)
        return CriticalPoint(numeric=complex(w) - complex(self.numeric))

    def __str__(self):
        return _fmt_param(self.exact) if self.is_exact else str(self.numeric)


def _check_strip(fd: FamilyDatum, s0: CriticalPoint) -> None:
    w = fd.reflection
    re = s0.exact if s0.is_exact else s0.real
    if not 0 < re < w:
        raise DomainError(f"Re(s0) = {float(re)} lies outside the critical strip (0, {w})")


def _finish(value, prec: Precision) -> BigComplex:
    with working(prec.bits) as ctx:
        return BigComplex._wrap(+ctx.mpc(value), prec)


def _siegel_shifts(g: int):
    return [Fraction(nu, 2) for nu in range(g)]


# ---------------------------------------------------------------------------
# numeric closed forms

def closed_form_sum(fd: FamilyDatum, s0, prec: Precision = DEFAULT_PRECISION) -> BigComplex:
    """Value of L'/L(s0) + L'/L(w - s0) predicted by the functional equation."""
    s0 = CriticalPoint.of(s0)
    _check_strip(fd, s0)
    with working(prec.working) as ctx:
        s = s0.mp(ctx)
        w = ctx.mpf(fd.reflection.numerator) / fd.reflection.denominator
        t = w - s
        log2pi = ctx.log(2) + const_mp(ctx, "logpi")
        fam = fd.family
        if fam is Family.GLD:
            acc = ctx.mpc(0)
            for kap in fd.kappa:
                kap = to_mp(ctx, kap)
                acc += psi_mp(ctx, 0, (s + kap) / 2) + psi_mp(ctx, 0, (t + kap) / 2)
            value = -acc / 2 + fd.d * const_mp(ctx, "logpi") - ctx.log(fd.N)
        elif fam is Family.MODULAR:
            value = (2 * log2pi - _psi_sym(ctx, 0, s, t) - ctx.log(fd.N) - 2 * ctx.log(abs(fd.D)))
        elif fam is Family.HILBERT:
            value = (-ctx.log(fd.normN) - 2 * ctx.log(fd.dF) + 2 * fd.n * log2pi
                     - fd.n * _psi_sym(ctx, 0, s, t))
        else:
            acc = ctx.mpc(0)
            for shift in _siegel_shifts(fd.g):
                h = ctx.mpf(shift.numerator) / shift.denominator
                acc += _psi_sym(ctx, 0, s - h, t - h)
            value = 2 * fd.g * log2pi - acc
    return _finish(value, prec)


def _psi_sym(ctx, m, s, t, sign=1):
    """ψ^(m)(s) + sign·ψ^(m)(t), evaluating once when s == t."""
    a = psi_mp(ctx, m, s)
    if s == t:
        return a * (1 + sign)
    return a + sign * psi_mp(ctx, m, t)


def closed_form_higher(fd: FamilyDatum, s0, m: int, prec: Precision = DEFAULT_PRECISION) -> BigComplex:
    """(L'/L)^(m)(s0) + (-1)^m (L'/L)^(m)(w - s0) from the functional equation.

    At the centre s0 = w/2 odd orders give exactly zero.
    """
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise DomainError(f"derivative order must be an integer >= 1, got {m!r}")
    s0 = CriticalPoint.of(s0)
    _check_strip(fd, s0)
    sign = -1 if m % 2 else 1  # (-1)^m
    with working(prec.working + 2 * m) as ctx:
        s = s0.mp(ctx)
        w = ctx.mpf(fd.reflection.numerator) / fd.reflection.denominator
        t = w - s
        fam = fd.family
        if fam is Family.GLD:
            acc = ctx.mpc(0)
            for kap in fd.kappa:
                kap = to_mp(ctx, kap)
                acc += _psi_sym(ctx, m, (s + kap) / 2, (t + kap) / 2, sign)
            value = -acc / 2 ** (m + 1)
        elif fam is Family.MODULAR:
            value = -_psi_sym(ctx, m, s, t, sign)
        elif fam is Family.HILBERT:
            value = -fd.n * _psi_sym(ctx, m, s, t, sign)
        else:
            acc = ctx.mpc(0)
            for shift in _siegel_shifts(fd.g):
                h = ctx.mpf(shift.numerator) / shift.denominator
                acc += _psi_sym(ctx, m, s - h, t - h, sign)
            value = -acc
    return _finish(value, prec)


# ---------------------------------------------------------------------------
# exact closed forms

def _exact_point(s0) -> Fraction:
    s0 = CriticalPoint.of(s0)
    if not s0.is_exact:
        raise DomainError("exact closed forms need a rational s0")
    return s0.exact


def _pair_siegel(x: Fraction, g: int, m: int = 0) -> ConstExpr:
    """Σ_{ν<g} ψ^(m)(x - ν/2), pairing ν = 2μ with 2μ + 1 by duplication."""
    out = ConstExpr()
    for mu in range(g // 2):
        out = out + psi_half_pair(m, x - mu - Fraction(1, 2))
    if g % 2:
        out = out + psi_expr(m, x - Fraction(g - 1, 2))
    return out


def closed_form_sum_exact(fd: FamilyDatum, s0) -> ConstExpr:
    """Exact form of :func:`closed_form_sum` for rational s0 (and rational κ)."""
    x = _exact_point(s0)
    _check_strip(fd, CriticalPoint(exact=x))
    w = fd.reflection
    two_log_2pi = ConstExpr({log_prime(2): 2, LOG_PI: 2})
    fam = fd.family
    if fam is Family.GLD:
        acc = ConstExpr()
        for kap in fd.kappa:
            if not isinstance(kap, Fraction):
                raise DomainError("exact closed forms need rational local parameters")
            acc = acc + psi_expr(0, (x + kap) / 2) + psi_expr(0, (w - x + kap) / 2)
        return acc * Fraction(-1, 2) + ConstExpr.of(LOG_PI, fd.d) - log_n_expand(fd.N)
    if fam is Family.MODULAR:
        return (two_log_2pi - psi_expr(0, x) - psi_expr(0, w - x)
                - log_n_expand(fd.N) - log_n_expand(abs(fd.D)) * 2)
    if fam is Family.HILBERT:
        return (two_log_2pi * fd.n - (psi_expr(0, x) + psi_expr(0, w - x)) * fd.n
                - log_n_expand(fd.normN) - log_n_expand(fd.dF) * 2)
    return two_log_2pi * fd.g - _pair_siegel(x, fd.g) - _pair_siegel(w - x, fd.g)


def closed_form_higher_exact(fd: FamilyDatum, s0, m: int) -> ConstExpr:
    """Exact form of :func:`closed_form_higher` for rational s0."""
    if m < 1:
        raise DomainError(f"derivative order must be >= 1, got {m}")
    x = _exact_point(s0)
    _check_strip(fd, CriticalPoint(exact=x))
    w = fd.reflection
    sign = -1 if m % 2 else 1
    fam = fd.family
    if fam is Family.GLD:
        acc = ConstExpr()
        for kap in fd.kappa:
            if not isinstance(kap, Fraction):
                raise DomainError("exact closed forms need rational local parameters")
            acc = acc + psi_expr(m, (x + kap) / 2) + psi_expr(m, (w - x + kap) / 2) * sign
        return acc * Fraction(-1, 2 ** (m + 1))
    if fam is Family.SIEGEL:
        return -(_pair_siegel(x, fd.g, m) + _pair_siegel(w - x, fd.g, m) * sign)
    scale = fd.n if fam is Family.HILBERT else 1
    return -(psi_expr(m, x) + psi_expr(m, w - x) * sign) * scale


# ---------------------------------------------------------------------------
# derivative bookkeeping

def quotient_derivative_convert(seq, direction: str = "to_ratios") -> list[BigComplex]:
    """Switch between [(L'/L)^(j)]_{j<M} and [L^(j)/L]_{1<=j<=M}.

    With g = L'/L and R_j = L^(j)/L one has R_0 = 1 and
    R_{j+1} = Σ_{i<=j} C(j, i) g^(i) R_{j-i}.
    ``direction`` is "to_ratios" or "to_logderivs".
    """
    seq = [x if isinstance(x, BigComplex) else BigComplex(x) for x in seq]
    if not seq:
        return []
    prec = min((x.prec for x in seq), key=lambda p: p.bits)
    with working(prec.working) as ctx:
        vals = [ctx.mpc(x.value) for x in seq]
        M = len(vals)
        if direction == "to_ratios":
            g = vals
            R = [ctx.mpc(1)]
            for j in range(M):
                R.append(ctx.fsum(comb(j, i) * g[i] * R[j - i] for i in range(j + 1)))
            out = R[1:]
        elif direction == "to_logderivs":
            R = [ctx.mpc(1)] + vals
            g = []
            for j in range(M):
                rest = ctx.fsum(comb(j, i) * g[i] * R[j - i] for i in range(j)) if j else 0
                g.append(R[j + 1] - rest)
            out = g
        else:
            raise DomainError(f"unknown direction {direction!r}")
    return [_finish(v, prec) for v in out]


__all__ = [
    "CriticalPoint",
    "Family",
    "FamilyDatum",
    "closed_form_higher",
    "closed_form_higher_exact",
    "closed_form_sum",
    "closed_form_sum_exact",
    "is_fundamental_discriminant",
    "quotient_derivative_convert",
]

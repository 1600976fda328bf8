"""Numerical L-functions from Dirichlet coefficients.

The completed function is assumed to have the shape

    Λ(s) = c0 · Q^s · Γ(λs + μ) · L(s),      Λ(s) = ε Λ(w - s),

with one gamma factor.  This covers Dirichlet characters (λ = 1/2),
holomorphic modular forms and their quadratic twists, Hilbert forms over Q,
and GL(2) data whose two archimedean parameters differ by one.  Writing
x_n = (n/Q)^(1/λ), z = λs + μ and c = λw + 2μ, the Mellin splitting at a
cutoff t gives

    Λ(s) = c0 Σ a(n) x_n^μ [ x_n^-z Γ(z, x_n t) + ε x_n^-(c-z) Γ(c-z, x_n/t) ],

a rapidly convergent series for every s.  For correct data the value is
independent of t.  At t = 1 the right side is symmetric under s -> w - s for
any coefficients whatsoever, so functional-equation and identity checks run
at t = 1 prove nothing; the default cutoff is therefore 5/4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

import numpy as np

from .errors import (
    DomainError,
    FormatError,
    NonFiniteError,
    PoleError,
    TruncationError,
    UnsupportedFamilyError,
    ZeroValueError,
)
from .families import (
    CriticalPoint,
    Family,
    FamilyDatum,
    closed_form_higher,
    closed_form_sum,
)
from .polygamma import gamma_mp, loggamma_mp
from .precision import DEFAULT_PRECISION, BigComplex, Precision, const_mp, to_mp, working


# ---------------------------------------------------------------------------
# incomplete gamma

def _gamma_lower_series(ctx, a, x):
    """γ(a, x) = x^a e^-x Σ x^j / (a (a+1) ... (a+j))."""
    eps = ctx.ldexp(1, -ctx.prec - 4)
    term = 1 / a
    total = term
    j = 1
    while True:
        term *= x / (a + j)
        total += term
        if ctx.fabs(term) < eps * ctx.fabs(total) and ctx.re(a) + j > x:
            break
        j += 1
        if j > 100 * ctx.prec:
            raise ArithmeticError("lower incomplete gamma series did not converge")
    return total * ctx.exp(a * ctx.log(x) - x)


def _gamma_upper_cf(ctx, a, x):
    """Γ(a, x) from its Legendre continued fraction (modified Lentz)."""
    tiny = ctx.ldexp(1, -4 * ctx.prec)
    eps = ctx.ldexp(1, -ctx.prec - 4)
    b = x + 1 - a
    f = b if b != 0 else tiny
    C, Dv = f, ctx.mpc(0)
    for i in range(1, 100 * ctx.prec):
        an = -i * (i - a)
        b += 2
        Dv = b + an * Dv
        Dv = 1 / (Dv if Dv != 0 else tiny)
        C = b + an / C
        if C == 0:
            C = tiny
        delta = C * Dv
        f *= delta
        if ctx.fabs(delta - 1) < eps:
            return ctx.exp(a * ctx.log(x) - x) / f
    raise ArithmeticError("incomplete gamma continued fraction did not converge")


def gammainc_upper_mp(ctx, a, x):
    """Γ(a, x) for complex a and real x > 0 at the current precision."""
    a = ctx.mpc(a)
    x = ctx.mpf(x)
    if x <= 0:
        raise DomainError("incomplete gamma needs x > 0")
    if x > ctx.fabs(a) + 4:
        return _gamma_upper_cf(ctx, a, x)
    if ctx.re(a) < 1:
        # Γ(a, x) = (Γ(a+1, x) - x^a e^-x) / a, stepping up until Re a >= 1
        if ctx.fabs(a - ctx.nint(ctx.re(a))) < ctx.ldexp(1, -ctx.prec // 2) and ctx.re(a) <= 0:
            a = a + ctx.ldexp(1, -ctx.prec // 2)
        return (gammainc_upper_mp(ctx, a + 1, x) - ctx.exp(a * ctx.log(x) - x)) / a
    base = ctx.prec
    extra = 16
    while True:
        ctx.prec = base + extra
        try:
            full = gamma_mp(ctx, a)
            value = full - _gamma_lower_series(ctx, a, x)
        finally:
            ctx.prec = base
        lost = ctx.mag(full) - ctx.mag(value) if value != 0 else extra + base
        if lost < extra - 8:
            return +value
        extra = lost + 32


def gammainc_upper(a, x, prec: Precision = DEFAULT_PRECISION) -> BigComplex:
    """Upper incomplete gamma Γ(a, x) = ∫_x^∞ t^(a-1) e^-t dt, x > 0."""
    with working(prec.working) as ctx:
        value = gammainc_upper_mp(ctx, to_mp(ctx, a), to_mp(ctx, x).real)
    with working(prec.bits) as ctx:
        return BigComplex._wrap(+ctx.mpc(value), prec)


def _upper_bound_mag(sigma: float, X: float) -> float:
    """Upper bound for |Γ(σ + iτ, X)| as a float (X > 0)."""
    from math import exp, log

    if sigma <= 1:
        return exp((sigma - 1) * log(X) - X)
    if X > 2 * (sigma - 1):
        return exp((sigma - 1) * log(X) - X) / (1 - (sigma - 1) / X)
    return float("inf")


# ---------------------------------------------------------------------------
# coefficient data

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@lru_cache(maxsize=4)
def _delta_coefficients(nmax: int) -> tuple[int, ...]:
    # Π(1-q^n)^3 = Σ_k (-1)^k (2k+1) q^(k(k+1)/2); raise to the 8th power.
    cube = {}
    k = 0
    while k * (k + 1) // 2 < nmax:
        cube[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    poly = np.zeros(nmax, dtype=object)
    for e, c in cube.items():
        poly[e] = c
    for _ in range(7):
        nxt = np.zeros(nmax, dtype=object)
        for e, c in cube.items():
            nxt[e:] += c * poly[: nmax - e]
        poly = nxt
    return tuple(int(c) for c in poly)


def ramanujan_tau(nmax: int) -> list[int]:
    """τ(1), ..., τ(nmax) from Δ = q Π (1 - q^n)^24."""
    return list(_delta_coefficients(nmax))


@dataclass(frozen=True)
class CoefficientSeries:
    """Dirichlet coefficients a(1..Nmax) with the data of their functional equation.

    ``growth_exponent`` θ and ``growth_constant`` C bound |a(n)| <= C n^θ.
    ``eps`` is the root number; the series is assumed self-dual.
    """

    coeffs: tuple
    datum: FamilyDatum
    growth_exponent: Fraction = Fraction(0)
    growth_constant: Fraction = Fraction(1)
    eps: complex = 1
    label: str = ""

    def __post_init__(self):
        coeffs = tuple(c if not isinstance(c, int) else Fraction(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not coeffs:
            raise DomainError("coefficient list is empty")
        if abs(abs(complex(self.eps)) - 1) > 1e-12:
            raise DomainError(f"root number must have modulus 1, got {self.eps}")

    @property
    def nmax(self) -> int:
        return len(self.coeffs)

    def truncate(self, nmax: int) -> "CoefficientSeries":
        return CoefficientSeries(self.coeffs[:nmax], self.datum, self.growth_exponent,
                                 self.growth_constant, self.eps, self.label)


def delta_series(nmax: int = 10_000) -> CoefficientSeries:
    """Ramanujan Δ, weight 12, level 1.  |τ(n)| <= d(n) n^(11/2) <= 2 n^6."""
    return CoefficientSeries(tuple(Fraction(t) for t in ramanujan_tau(nmax)),
                             FamilyDatum.modular(12), Fraction(6), Fraction(2), 1, "delta")


def real_character_series(q: int = 5, nmax: int = 2000) -> CoefficientSeries:
    """L(s, χ) for the real primitive character n -> (q/n) of conductor |q|."""
    from .families import is_fundamental_discriminant

    if q == 1 or not is_fundamental_discriminant(q):
        raise DomainError(f"{q} is not the discriminant of a primitive quadratic character")
    parity = 0 if q > 0 else 1
    coeffs = tuple(Fraction(kronecker(q, n)) for n in range(1, nmax + 1))
    datum = FamilyDatum.gld(abs(q), [parity])
    return CoefficientSeries(coeffs, datum, Fraction(0), Fraction(1), 1, f"chi_{q}")


def twist(cs: CoefficientSeries, D: int) -> CoefficientSeries:
    """Quadratic twist a(n) -> (D/n) a(n) of a modular series; conductor N D^2."""
    fd = cs.datum
    if fd.family is not Family.MODULAR or fd.D != 1:
        raise UnsupportedFamilyError("twisting is implemented for untwisted modular data")
    new_fd = FamilyDatum.modular(fd.k, fd.N, D)
    coeffs = tuple(c * kronecker(D, n) for n, c in enumerate(cs.coeffs, 1))
    eps = complex(cs.eps) * kronecker(D, -fd.N)
    return CoefficientSeries(coeffs, new_fd, cs.growth_exponent, cs.growth_constant,
                             _clean_eps(eps), f"{cs.label}_x_{D}" if cs.label else "")


def _clean_eps(eps: complex):
    if eps.imag == 0 and eps.real in (1.0, -1.0):
        return int(eps.real)
    return eps


# ---------------------------------------------------------------------------
# coefficient files

_HEADER_KEYS = {"family", "weight", "level", "degree", "kappa", "discriminant",
                "growth-exponent", "growth-constant", "root-number", "normalization",
                "label", "field-degree", "field-discriminant", "level-norm"}


def write_coefficients(cs: CoefficientSeries, path) -> None:
    fd = cs.datum
    head = [("family", fd.family.value)]
    if fd.family is Family.GLD:
        head += [("degree", fd.d), ("level", fd.N),
                 ("kappa", ", ".join(_fmt(x) for x in fd.kappa))]
    elif fd.family is Family.MODULAR:
        head += [("weight", _fmt(fd.k)), ("level", fd.N), ("discriminant", fd.D)]
    elif fd.family is Family.HILBERT:
        head += [("weight", _fmt(fd.k)), ("field-degree", fd.n),
                 ("field-discriminant", fd.dF), ("level-norm", fd.normN)]
    else:
        raise UnsupportedFamilyError("no coefficient format for Siegel data")
    head += [("growth-exponent", _fmt(cs.growth_exponent)),
             ("growth-constant", _fmt(cs.growth_constant)),
             ("root-number", _fmt_eps(cs.eps)), ("normalization", "arithmetic")]
    if cs.label:
        head.append(("label", cs.label))
    with open(path, "w", encoding="utf-8") as fh:
        for key, val in head:
            fh.write(f"# {key}: {val}\n")
        for n, c in enumerate(cs.coeffs, 1):
            fh.write(f"{n} {_fmt(c)}\n")


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_eps(eps) -> str:
    eps = complex(eps)
    if eps.imag == 0:
        return str(int(eps.real)) if eps.real.is_integer() else repr(eps.real)
    return repr(eps).strip("()")


def read_coefficients(path) -> CoefficientSeries:
    """Parse a coefficient file; errors carry the offending line number."""
    header: dict[str, tuple[str, int]] = {}
    coeffs: list[Fraction] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" not in body:
                    continue  # free comment
                key, val = (p.strip() for p in body.split(":", 1))
                key = key.lower()
                if key not in _HEADER_KEYS:
                    raise FormatError(f"unknown header key {key!r}", lineno)
                if coeffs:
                    raise FormatError("header lines must precede the coefficients", lineno)
                header[key] = (val, lineno)
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"expected 'n a(n)', got {line!r}", lineno)
            try:
                n = int(parts[0])
            except ValueError:
                raise FormatError(f"bad index {parts[0]!r}", lineno) from None
            if n != len(coeffs) + 1:
                raise FormatError(f"expected index {len(coeffs) + 1}, got {n}", lineno)
            try:
                coeffs.append(Fraction(parts[1]))
            except (ValueError, ZeroDivisionError):
                raise FormatError(f"bad coefficient {parts[1]!r}", lineno) from None
    if not coeffs:
        raise FormatError("no coefficients found")

    def get(key, conv, default=None):
        if key not in header:
            if default is None:
                raise FormatError(f"missing header '{key}'")
            return default
        val, lineno = header[key]
        try:
            return conv(val)
        except (ValueError, ZeroDivisionError, DomainError) as exc:
            raise FormatError(f"bad value for {key}: {exc}", lineno) from None

    norm = get("normalization", str)
    if norm != "arithmetic":
        raise FormatError(f"normalization must be 'arithmetic', got {norm!r}",
                          header["normalization"][1])
    family = get("family", Family.parse)
    try:
        if family is Family.GLD:
            kappa = get("kappa", lambda v: [p.strip() for p in v.split(",") if p.strip()])
            datum = FamilyDatum.gld(get("level", int), kappa)
            degree = get("degree", int, datum.d)
            if degree != datum.d:
                raise FormatError(f"degree {degree} does not match {datum.d} kappa values",
                                  header["degree"][1])
        elif family is Family.MODULAR:
            datum = FamilyDatum.modular(get("weight", Fraction), get("level", int),
                                        get("discriminant", int, 1))
        elif family is Family.HILBERT:
            datum = FamilyDatum.hilbert(get("weight", Fraction), get("field-degree", int),
                                        get("field-discriminant", int, 1), get("level-norm", int, 1))
        else:
            raise FormatError("Siegel data has no coefficient format", header["family"][1])
    except DomainError as exc:
        raise FormatError(str(exc)) from None
    eps = get("root-number", lambda v: complex(v.replace("i", "j")), 1)
    try:
        return CoefficientSeries(tuple(coeffs), datum, get("growth-exponent", Fraction),
                                 get("growth-constant", Fraction, Fraction(1)),
                                 _clean_eps(eps), get("label", str, ""))
    except DomainError as exc:
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------------------
# gamma-factor data

@dataclass(frozen=True)
class GammaShape:
    c0: object  # mp constant, built lazily per precision
    Q: object
    lam: Fraction
    mu: object
    w: Fraction


def _shape(ctx, fd: FamilyDatum) -> GammaShape:
    pi = const_mp(ctx, "pi")
    if fd.family is Family.GLD:
        if fd.d == 1:
            mu = to_mp(ctx, fd.kappa[0]) / 2
            return GammaShape(ctx.mpf(1), ctx.sqrt(fd.N / pi), Fraction(1, 2), mu, Fraction(1))
        if fd.d == 2 and complex(fd.kappa[1]) - complex(fd.kappa[0]) == 1:
            kap = to_mp(ctx, fd.kappa[0])
            # Γ_R(s+κ) Γ_R(s+κ+1) = 2^(1-κ) π^(-κ) (2π)^-s Γ(s+κ)
            c0 = ctx.power(2, 1 - kap) * ctx.power(pi, -kap)
            return GammaShape(c0, ctx.sqrt(fd.N) / (2 * pi), Fraction(1), kap, Fraction(1))
        raise UnsupportedFamilyError("numeric GL(d) support covers d = 1 and d = 2 with κ2 = κ1 + 1")
    if fd.family is Family.MODULAR:
        if Fraction(fd.k).denominator != 1:
            raise UnsupportedFamilyError("half-integral weight is handled on the closed-form side only")
        return GammaShape(ctx.mpf(1), abs(fd.D) * ctx.sqrt(fd.N) / (2 * pi),
                          Fraction(1), ctx.mpf(0), fd.k)
    if fd.family is Family.HILBERT:
        if fd.n != 1:
            raise UnsupportedFamilyError("numeric Hilbert support is limited to the base field Q")
        return GammaShape(ctx.mpf(1), fd.dF * ctx.sqrt(fd.normN) / (2 * pi),
                          Fraction(1), ctx.mpf(0), fd.k)
    raise UnsupportedFamilyError("Koecher-Maass series are not evaluated numerically")


def _frac_mp(ctx, x: Fraction):
    return ctx.mpf(x.numerator) / x.denominator


# ---------------------------------------------------------------------------
# evaluation

@dataclass(frozen=True)
class AFEConfig:
    """Numerical settings.

    ``cutoff`` is the Mellin splitting point t (any t > 0 gives the same value
    for correct data; keep t != 1 when checking data, see the module notes);
    ``terms`` caps the number of coefficients used (None: all available);
    ``diff_step`` overrides the finite-difference step of :func:`log_derivative`.
    """

    precision: Precision = DEFAULT_PRECISION
    cutoff: float = 1.25
    terms: int | None = None
    diff_step: float | None = None

    def __post_init__(self):
        if not self.cutoff > 0:
            raise DomainError("cutoff must be positive")
        if self.terms is not None and self.terms < 1:
            raise DomainError("terms must be >= 1")


DEFAULT_CONFIG = AFEConfig()


def _coeff_mp(ctx, c):
    if isinstance(c, Fraction):
        return ctx.mpf(c.numerator) / c.denominator if c.denominator != 1 else ctx.mpf(c.numerator)
    return to_mp(ctx, c)


def _afe_terms_needed(ctx, cs, shape, z, c, t, tol, limit):
    """Smallest M with the certified tail Σ_{n>M} |term_n| below tol."""
    from math import log

    lam = float(shape.lam)
    Q = float(shape.Q)
    mu = float(ctx.re(shape.mu))
    sig1 = float(ctx.re(z))
    sig2 = float(ctx.re(c - z))
    theta = float(cs.growth_exponent)
    C = float(cs.growth_constant)
    ltol = log(tol)
    for n in range(1, limit + 2):
        x = (n / Q) ** (1 / lam)
        b1 = _upper_bound_mag(sig1, x * t)
        b2 = _upper_bound_mag(sig2, x / t)
        if b1 == float("inf") or b2 == float("inf"):
            continue
        # past this point every later term is smaller than the current one
        if x * min(t, 1 / t) <= max(sig1, sig2, 1) + (theta + 2 + abs(mu)) * lam + 1:
            continue
        bound = b1 * x ** (-sig1) + b2 * x ** (-sig2)
        if bound == 0.0 or log(C) + (theta + 2) * log(n) + mu * log(x) + log(bound) < ltol:
            # n^2 |term_n| < tol from here on, so the tail is below 2 tol
            return max(n - 1, 1)
    raise TruncationError(f"{cs.label or 'series'} needs more than {limit} coefficients "
                          f"for tolerance {tol:.1e}")


def _complete_mp(ctx, cs: CoefficientSeries, s, cfg: AFEConfig, tol: float):
    shape = _shape(ctx, cs.datum)
    lam = _frac_mp(ctx, shape.lam)
    z = lam * s + shape.mu
    c = lam * _frac_mp(ctx, shape.w) + 2 * shape.mu
    t = ctx.mpf(cfg.cutoff)
    limit = min(cs.nmax, cfg.terms or cs.nmax)
    M = _afe_terms_needed(ctx, cs, shape, z, c, float(t), tol, limit)
    eps = to_mp(ctx, cs.eps)
    inv_lam = 1 / lam
    total = ctx.mpc(0)
    for n in range(1, M + 1):
        a = cs.coeffs[n - 1]
        if a == 0:
            continue
        x = (n / shape.Q) ** inv_lam
        lx = ctx.log(x)
        first = ctx.exp(-z * lx) * gammainc_upper_mp(ctx, z, x * t)
        second = ctx.exp(-(c - z) * lx) * gammainc_upper_mp(ctx, c - z, x / t)
        total += _coeff_mp(ctx, a) * ctx.exp(shape.mu * lx) * (first + eps * second)
    return shape.c0 * total, shape, z


def complete_l(cs: CoefficientSeries, s, config: AFEConfig = DEFAULT_CONFIG) -> BigComplex:
    """Λ(s), computed with the smoothed approximate functional equation."""
    prec = config.precision
    with working(prec.working + 16) as ctx:
        s = to_mp(ctx, s)
        value, _, _ = _complete_mp(ctx, cs, s, config, 2.0 ** (-prec.working))
    return _round(value, prec)


def _round(value, prec: Precision) -> BigComplex:
    with working(prec.bits) as ctx:
        value = ctx.mpc(value)
        if ctx.isnan(value) or ctx.isinf(value):
            raise NonFiniteError("non-finite L-value")
        return BigComplex._wrap(+value, prec)


def _l_mp(ctx, cs, s, cfg, tol):
    value, shape, z = _complete_mp(ctx, cs, s, cfg, tol)
    if ctx.re(z) <= 0 and ctx.fabs(z - ctx.nint(ctx.re(z))) < ctx.ldexp(1, -ctx.prec // 2):
        raise PoleError(f"gamma factor has a pole at s = {ctx.nstr(s, 10)}")
    factor = shape.c0 * ctx.exp(s * ctx.log(shape.Q) + loggamma_mp(ctx, z))
    return value / factor


def afe_l(cs: CoefficientSeries, s, config: AFEConfig = DEFAULT_CONFIG) -> BigComplex:
    """L(s) anywhere off the gamma-factor poles, via the approximate functional equation."""
    prec = config.precision
    with working(prec.working + 16) as ctx:
        value = _l_mp(ctx, cs, to_mp(ctx, s), config, 2.0 ** (-prec.working))
    return _round(value, prec)


def direct_tail_bound(cs: CoefficientSeries, sigma: float, M: int) -> float:
    """Bound for Σ_{n>M} |a(n)| n^-σ from |a(n)| <= C n^θ (needs σ > θ + 1)."""
    theta = float(cs.growth_exponent)
    if sigma <= theta + 1:
        return float("inf")
    e = sigma - theta - 1
    return float(cs.growth_constant) * M ** (-e) / e


def direct_l(cs: CoefficientSeries, s, config: AFEConfig = DEFAULT_CONFIG,
             tol: float | None = None) -> BigComplex:
    """L(s) = Σ a(n) n^-s summed directly, with a certified tail below ``tol``.

    ``tol`` defaults to 2^(-bits/2).  Raises TruncationError when the
    available coefficients cannot certify it.
    """
    prec = config.precision
    tol = prec.tolerance if tol is None else tol
    limit = min(cs.nmax, config.terms or cs.nmax)
    with working(prec.working) as ctx:
        s = to_mp(ctx, s)
        tail = direct_tail_bound(cs, float(ctx.re(s)), limit)
        if tail > tol:
            raise TruncationError(f"tail bound {tail:.2e} with {limit} terms exceeds {tol:.1e}")
        total = ctx.mpc(0)
        for n in range(1, limit + 1):
            a = cs.coeffs[n - 1]
            if a != 0:
                total += _coeff_mp(ctx, a) * ctx.exp(-s * ctx.log(n))
    return _round(total, prec)


def direct_complete_l(cs: CoefficientSeries, s, config: AFEConfig = DEFAULT_CONFIG,
                      tol: float | None = None) -> BigComplex:
    """Λ(s) from the directly summed Dirichlet series."""
    L = direct_l(cs, s, config, tol)
    prec = config.precision
    with working(prec.working) as ctx:
        s = to_mp(ctx, s)
        shape = _shape(ctx, cs.datum)
        z = _frac_mp(ctx, shape.lam) * s + shape.mu
        factor = shape.c0 * ctx.exp(s * ctx.log(shape.Q) + loggamma_mp(ctx, z))
        value = factor * L.value
    return _round(value, prec)


# ---------------------------------------------------------------------------
# logarithmic derivatives

@lru_cache(maxsize=None)
def _central_weights(order: int, radius: int) -> tuple[Fraction, ...]:
    """Weights w_j, j = -radius..radius, with Σ w_j f(jh) = h^order f^(order)(0) + O(h^(2 radius + 1))."""
    nodes = list(range(-radius, radius + 1))
    size = len(nodes)
    # solve the Vandermonde system Σ w_j j^p = order! δ_{p,order}
    mat = [[Fraction(j) ** p for j in nodes] + [Fraction(factorial(order) if p == order else 0)]
           for p in range(size)]
    for col in range(size):
        piv = next(r for r in range(col, size) if mat[r][col] != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        pv = mat[col][col]
        mat[col] = [v / pv for v in mat[col]]
        for r in range(size):
            if r != col and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    return tuple(row[-1] for row in mat)


def _log_derivative_mp(ctx, cs, s, base, order, h, cfg, tol):
    radius = (order + 2) // 2
    weights = _central_weights(order, radius)
    logs = {}

    def f(j, step):
        key = (j, step)
        if key not in logs:
            logs[key] = ctx.mpc(0) if j == 0 else ctx.log(_l_mp(ctx, cs, s + j * step, cfg, tol) / base)
        return logs[key]

    def stencil(step):
        acc = ctx.mpc(0)
        for j, wj in zip(range(-radius, radius + 1), weights):
            if wj:
                acc += _frac_mp(ctx, wj) * f(j, step)
        return acc / step ** order

    coarse = stencil(h)
    fine = stencil(h / 2)
    accuracy = 2 * radius + 1 - order
    accuracy += accuracy % 2  # central stencils have even error order
    gain = 2 ** accuracy
    return (gain * fine - coarse) / (gain - 1)


def log_derivative(cs: CoefficientSeries, s, order: int = 1,
                   config: AFEConfig = DEFAULT_CONFIG) -> BigComplex:
    """(L'/L)^(order - 1)(s), i.e. the order-th derivative of log L, by finite differences.

    Raises ZeroValueError when |L(s)| < 2^(-bits/4).
    """
    if isinstance(order, bool) or not isinstance(order, int) or order < 1:
        raise DomainError(f"order must be an integer >= 1, got {order!r}")
    prec = config.precision
    bits = prec.bits
    h = config.diff_step or 2.0 ** (-bits / (2 * order + 2))
    # differences of size h^order need order * log2(1/h) extra bits
    extra = int(order * bits / (2 * order + 2)) + 16
    with working(prec.working + extra) as ctx:
        s = to_mp(ctx, s)
        tol = 2.0 ** (-(prec.working + extra))
        base = _l_mp(ctx, cs, s, config, tol)
        if ctx.fabs(base) < ctx.ldexp(1, -bits // 4):
            raise ZeroValueError(f"|L(s)| = {ctx.nstr(ctx.fabs(base), 5)} is numerically zero")
        value = _log_derivative_mp(ctx, cs, s, base, order, ctx.mpf(h), config, tol)
    return _round(value, prec)


# ---------------------------------------------------------------------------
# identity verification

@dataclass(frozen=True)
class IdentityReport:
    lhs: BigComplex
    rhs: BigComplex
    residual: float
    tolerance: float
    m: int
    s0: str
    label: str = ""

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        return (f"{status}  {self.label or 'series'}  s0={self.s0}  m={self.m}  "
                f"lhs={self.lhs.to_string(20)}  rhs={self.rhs.to_string(20)}  "
                f"residual={self.residual:.3e}  tol={self.tolerance:.1e}")


def verify_identity(cs: CoefficientSeries, s0, m: int = 0,
                    config: AFEConfig = DEFAULT_CONFIG, tol: float = 1e-6) -> IdentityReport:
    """Compare L'/L(s0) + L'/L(w - s0) (or its m-th derivative analogue) with the closed form.

    The left side uses only coefficients, the approximate functional equation
    and finite differences.
    """
    fd = cs.datum
    if fd.family is Family.SIEGEL:
        raise UnsupportedFamilyError("Koecher-Maass series are not evaluated numerically")
    if fd.family is Family.HILBERT and fd.n != 1:
        raise UnsupportedFamilyError("numeric Hilbert support is limited to the base field Q")
    point = CriticalPoint.of(s0)
    prec = config.precision
    with working(prec.working) as ctx:
        s = point.mp(ctx)
        t = _frac_mp(ctx, fd.reflection) - s
        s_v, t_v = BigComplex._wrap(+s, prec), BigComplex._wrap(+t, prec)
    left = log_derivative(cs, s_v, m + 1, config)
    if point.is_exact and point.exact * 2 == fd.reflection:
        right_part = left
    else:
        right_part = log_derivative(cs, t_v, m + 1, config)
    lhs = left + right_part * (-1 if m % 2 else 1)
    rhs = closed_form_sum(fd, point, prec) if m == 0 else closed_form_higher(fd, point, m, prec)
    residual = float(abs(lhs - rhs))
    return IdentityReport(lhs, rhs, residual, tol, m, str(point), cs.label)


__all__ = [
    "AFEConfig",
    "CoefficientSeries",
    "IdentityReport",
    "afe_l",
    "complete_l",
    "delta_series",
    "direct_complete_l",
    "direct_l",
    "direct_tail_bound",
    "gammainc_upper",
    "kronecker",
    "log_derivative",
    "ramanujan_tau",
    "read_coefficients",
    "real_character_series",
    "twist",
    "verify_identity",
    "write_coefficients",
]

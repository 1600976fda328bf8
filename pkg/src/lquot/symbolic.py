"""Exact linear combinations of transcendental constants.

A :class:`ConstExpr` is a finite Q-linear combination over a canonical set of
symbols: 1, Euler's γ, π, log π, log p (p prime), the digamma pair
ψ(a/q)+ψ(1-a/q), single polygamma values ψ^(m)(a/q) and odd zeta values.
Polygamma values at rational points are brought into this basis with the
recurrence, the half-point identity ψ^(m)(1/2) = (2^(m+1)-1)ψ^(m)(1), the
value ψ^(2m)(1) = -(2m)! ζ(2m+1), and reflection where the cotangent term is
rational (denominators 2 and 4).

Distinct ψ-symbols are treated as formally independent; every rank computed
here is therefore a rank over the free vector space on the symbols.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, Mapping

from .errors import DomainError, FormatError
from .polygamma import psi_mp
from .precision import DEFAULT_PRECISION, BigComplex, Precision, const_mp, working


# ---------------------------------------------------------------------------
# elementary number theory

def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer by trial division."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def euler_phi(q: int) -> int:
    result = q
    for p in factorize(q):
        result -= result // p
    return result


class IntegerSet(frozenset):
    """Non-empty finite set of positive integers."""

    def __new__(cls, elems: Iterable[int]):
        elems = [int(e) for e in elems]
        if not elems:
            raise DomainError("integer set must be non-empty")
        if any(e == 0 for e in elems):
            raise DomainError("0 is divisible by every prime; property A is undefined")
        if any(e < 0 for e in elems):
            raise DomainError("integer set elements must be positive")
        return super().__new__(cls, elems)


def property_a_check(s: Iterable[int]) -> bool:
    """True iff every element owns a prime dividing no other element."""
    s = IntegerSet(s)
    for n in s:
        others = [m for m in s if m != n]
        if not any(all(m % p for m in others) for p in factorize(n)):
            return False
    return True


# ---------------------------------------------------------------------------
# symbols

class Kind(IntEnum):
    ONE = 0
    EULER_GAMMA = 1
    PI = 2
    LOG_PI = 3
    LOG_PRIME = 4
    PSI_PAIR = 5
    PSI_RAT = 6
    ZETA_ODD = 7


@dataclass(frozen=True)
class ConstSymbol:
    kind: Kind
    m: int = 0
    a: int = 0
    q: int = 0
    p: int = 0
    n: int = 0

    def __post_init__(self):
        k = self.kind
        if k is Kind.LOG_PRIME and not is_prime(self.p):
            raise DomainError(f"log symbol needs a prime, got {self.p}")
        if k is Kind.PSI_PAIR:
            if not (0 < 2 * self.a < self.q) or gcd(self.a, self.q) != 1:
                raise DomainError(f"psipair({self.a}/{self.q}) is not canonical")
        if k is Kind.PSI_RAT:
            if self.m < 0 or not (0 < self.a <= self.q) or gcd(self.a, self.q) != 1:
                raise DomainError(f"psi[{self.m}]({self.a}/{self.q}) is not canonical")
        if k is Kind.ZETA_ODD and (self.n < 3 or self.n % 2 == 0):
            raise DomainError(f"zeta symbol needs an odd integer >= 3, got {self.n}")

    @property
    def sort_key(self):
        return (int(self.kind), self.m, self.q, self.a, self.p, self.n)

    def __lt__(self, other: "ConstSymbol"):
        return self.sort_key < other.sort_key

    def __str__(self):
        k = self.kind
        if k is Kind.ONE:
            return "1"
        if k is Kind.EULER_GAMMA:
            return "gamma"
        if k is Kind.PI:
            return "pi"
        if k is Kind.LOG_PI:
            return "log(pi)"
        if k is Kind.LOG_PRIME:
            return f"log({self.p})"
        if k is Kind.PSI_PAIR:
            return f"psipair({self.a}/{self.q})"
        if k is Kind.PSI_RAT:
            return f"psi[{self.m}]({self.a}/{self.q})"
        return f"zeta({self.n})"

    def evaluate_mp(self, ctx):
        k = self.kind
        if k is Kind.ONE:
            return ctx.mpf(1)
        if k is Kind.EULER_GAMMA:
            return const_mp(ctx, "gamma")
        if k is Kind.PI:
            return const_mp(ctx, "pi")
        if k is Kind.LOG_PI:
            return const_mp(ctx, "logpi")
        if k is Kind.LOG_PRIME:
            return const_mp(ctx, "log", self.p)
        if k is Kind.PSI_PAIR:
            x = ctx.mpf(self.a) / self.q
            return psi_mp(ctx, 0, x) + psi_mp(ctx, 0, 1 - x)
        if k is Kind.PSI_RAT:
            return psi_mp(ctx, self.m, ctx.mpf(self.a) / self.q)
        return const_mp(ctx, "zeta", self.n)


ONE = ConstSymbol(Kind.ONE)
EULER_GAMMA = ConstSymbol(Kind.EULER_GAMMA)
PI = ConstSymbol(Kind.PI)
LOG_PI = ConstSymbol(Kind.LOG_PI)


def log_prime(p: int) -> ConstSymbol:
    return ConstSymbol(Kind.LOG_PRIME, p=p)


def psi_pair(a: int, q: int) -> ConstSymbol:
    return ConstSymbol(Kind.PSI_PAIR, a=a, q=q)


def psi_rat(m: int, a: int, q: int) -> ConstSymbol:
    return ConstSymbol(Kind.PSI_RAT, m=m, a=a, q=q)


def zeta_odd(n: int) -> ConstSymbol:
    return ConstSymbol(Kind.ZETA_ODD, n=n)


# ---------------------------------------------------------------------------
# expressions

Rational = int | Fraction


class ConstExpr:
    """Immutable Q-linear combination of :class:`ConstSymbol` values."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[ConstSymbol, Rational] | Iterable = ()):
        acc: dict[ConstSymbol, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for sym, coef in items:
            if not isinstance(sym, ConstSymbol):
                raise TypeError(f"expected ConstSymbol, got {sym!r}")
            acc[sym] = acc.get(sym, Fraction(0)) + Fraction(coef)
        self._terms = tuple(sorted(((s, c) for s, c in acc.items() if c != 0),
                                   key=lambda sc: sc[0].sort_key))

    @classmethod
    def rational(cls, r: Rational) -> "ConstExpr":
        return cls({ONE: r})

    @classmethod
    def of(cls, sym: ConstSymbol, coef: Rational = 1) -> "ConstExpr":
        return cls({sym: coef})

    @property
    def terms(self) -> dict[ConstSymbol, Fraction]:
        return dict(self._terms)

    def coefficient(self, sym: ConstSymbol) -> Fraction:
        return dict(self._terms).get(sym, Fraction(0))

    def symbols(self) -> list[ConstSymbol]:
        return [s for s, _ in self._terms]

    @property
    def rational_part(self) -> Fraction:
        return self.coefficient(ONE)

    def is_rational(self) -> bool:
        return all(s == ONE for s, _ in self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ConstExpr.rational(other)
        if not isinstance(other, ConstExpr):
            return NotImplemented
        return ConstExpr(list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __neg__(self):
        return ConstExpr((s, -c) for s, c in self._terms)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ConstExpr.rational(other)
        if not isinstance(other, ConstExpr):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return ConstExpr((s, c * scalar) for s, c in self._terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ConstExpr.rational(other)
        if not isinstance(other, ConstExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        return f"ConstExpr({str(self)!r})"

    def __str__(self):
        parts = []
        ordered = [t for t in self._terms if t[0] != ONE] + [t for t in self._terms if t[0] == ONE]
        for sym, coef in ordered:
            mag = _fmt_rational(abs(coef))
            body = mag if sym == ONE else f"{mag}*{sym}"
            if not parts:
                parts.append(("-" if coef < 0 else "") + body)
            else:
                parts.append(("- " if coef < 0 else "+ ") + body)
        return " ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> "ConstExpr":
        return parse_expr(text)

    def evaluate(self, prec: Precision = DEFAULT_PRECISION) -> BigComplex:
        """Numeric value, substituting each symbol at working precision."""
        with working(prec.working) as ctx:
            total = ctx.mpf(0)
            for sym, coef in self._terms:
                total += sym.evaluate_mp(ctx) * (ctx.mpf(coef.numerator) / coef.denominator)
            value = ctx.mpc(total)
        with working(prec.bits) as ctx:
            return BigComplex._wrap(+value, prec)


def _fmt_rational(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


_SYMBOL_PATTERNS = [
    (re.compile(r"gamma$"), lambda g: EULER_GAMMA),
    (re.compile(r"pi$"), lambda g: PI),
    (re.compile(r"log\(pi\)$"), lambda g: LOG_PI),
    (re.compile(r"log\((\d+)\)$"), lambda g: log_prime(int(g[0]))),
    (re.compile(r"psipair\((\d+)/(\d+)\)$"), lambda g: psi_pair(int(g[0]), int(g[1]))),
    (re.compile(r"psi\[(\d+)\]\((\d+)/(\d+)\)$"), lambda g: psi_rat(int(g[0]), int(g[1]), int(g[2]))),
    (re.compile(r"zeta\((\d+)\)$"), lambda g: zeta_odd(int(g[0]))),
]
_RATIONAL = re.compile(r"\d+(/\d+)?$")


def _parse_symbol(text: str) -> ConstSymbol:
    for pattern, build in _SYMBOL_PATTERNS:
        match = pattern.match(text)
        if match:
            try:
                return build(match.groups())
            except DomainError as exc:
                raise FormatError(str(exc)) from None
    raise FormatError(f"unknown symbol {text!r}")


def parse_expr(text: str) -> ConstExpr:
    """Inverse of ``str(ConstExpr)``; coefficients round-trip exactly."""
    src = text.replace(" ", "")
    if not src:
        raise FormatError("empty expression")
    if src == "0":
        return ConstExpr()
    pieces: list[tuple[int, str]] = []
    depth, start, sign = 0, 0, 1
    for i, ch in enumerate(src):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch in "+-" and depth == 0:
            if i > start:
                pieces.append((sign, src[start:i]))
            elif i > 0:
                raise FormatError(f"repeated operator in {text!r}")
            sign = 1 if ch == "+" else -1
            start = i + 1
    if start >= len(src):
        raise FormatError(f"dangling operator in {text!r}")
    pieces.append((sign, src[start:]))
    terms: dict[ConstSymbol, Fraction] = {}
    for sign, piece in pieces:
        if "*" in piece:
            coef_s, sym_s = piece.split("*", 1)
            if not _RATIONAL.match(coef_s):
                raise FormatError(f"bad coefficient {coef_s!r}")
            coef, sym = Fraction(coef_s), _parse_symbol(sym_s)
        elif _RATIONAL.match(piece):
            coef, sym = Fraction(piece), ONE
        else:
            coef, sym = Fraction(1), _parse_symbol(piece)
        terms[sym] = terms.get(sym, Fraction(0)) + sign * coef
    return ConstExpr(terms)


# ---------------------------------------------------------------------------
# reductions

def log_n_expand(n: int) -> ConstExpr:
    """log n as Σ e_p log p."""
    if n < 1:
        raise DomainError(f"log_n_expand needs n >= 1, got {n}")
    return ConstExpr({log_prime(p): e for p, e in factorize(n).items()})


def _shift_sum(m: int, y: Fraction, n: int) -> Fraction:
    """(-1)^m m! Σ_{j<n} (y+j)^-(m+1): the recurrence increment from y to y+n."""
    total = sum((Fraction(1) / (y + j) ** (m + 1) for j in range(n)), Fraction(0))
    return (-1) ** m * factorial(m) * total


def _window(m: int, x: Fraction) -> ConstExpr:
    """Canonical form of ψ^(m)(x) for x in (0, 1]."""
    if x == 1:
        if m == 0:
            return ConstExpr.of(EULER_GAMMA, -1)
        if m % 2 == 0:
            return ConstExpr.of(zeta_odd(m + 1), -factorial(m))
        return ConstExpr.of(psi_rat(m, 1, 1))
    if x == Fraction(1, 2):
        if m == 0:
            return ConstExpr({EULER_GAMMA: -1, log_prime(2): -2})
        return _window(m, Fraction(1)) * (2 ** (m + 1) - 1)
    a, q = x.numerator, x.denominator
    if m > 0:
        return ConstExpr.of(psi_rat(m, a, q))
    if q == 4:
        base = ConstExpr.of(psi_rat(0, 1, 4))
        return base if a == 1 else base + ConstExpr.of(PI)
    if 2 * a < q:
        return ConstExpr.of(psi_rat(0, a, q))
    return ConstExpr({psi_pair(q - a, q): 1, psi_rat(0, q - a, q): -1})


def _cot_pi_rational(x: Fraction) -> int | None:
    """cot(πx) when it is an integer (denominators 2 and 4), else None."""
    r = x - (x.numerator // x.denominator)
    return {Fraction(1, 2): 0, Fraction(1, 4): 1, Fraction(3, 4): -1}.get(r)


def psi_expr(m: int, x: Fraction | int, order: str = "recurrence") -> ConstExpr:
    """Exact canonical form of ψ^(m)(x) for rational x off the poles.

    ``order`` selects whether reflection (when its cotangent is rational) is
    applied before the recurrence ("reflection") or only inside the window
    ("recurrence").  Both must give the same expression.
    """
    x = Fraction(x)
    if m < 0:
        raise DomainError(f"polygamma order must be >= 0, got {m}")
    if x.denominator == 1 and x <= 0:
        raise DomainError(f"ψ^({m}) has a pole at {x}")
    if order == "reflection" and m == 0 and x.denominator != 1:
        cot = _cot_pi_rational(x)
        if cot is not None:
            # ψ(x) = ψ(1-x) - π cot(πx)
            return psi_expr(0, 1 - x) - ConstExpr.of(PI, cot)
    elif order not in ("recurrence", "reflection"):
        raise ValueError(f"unknown reduction order {order!r}")
    if x > 1:
        n = -((-x.numerator) // x.denominator) - 1  # ceil(x) - 1
        y = x - n
        return _window(m, y) + _shift_sum(m, y, n)
    if x <= 0:
        n = (-x.numerator) // x.denominator + 1  # floor(-x) + 1
        return _window(m, x + n) - _shift_sum(m, x, n)
    return _window(m, x)


def reduce_polygamma(m: int, a: int, q: int, shift: int = 0, order: str = "recurrence") -> ConstExpr:
    """Canonical form of ψ^(m)(a/q + shift)."""
    if not (0 < a < q) and not (a == q == 1):
        raise DomainError(f"need 0 < a < q, got a={a}, q={q}")
    if gcd(a, q) != 1:
        raise DomainError(f"a/q must be in lowest terms, got {a}/{q}")
    if shift < 0:
        raise DomainError("shift must be non-negative")
    return psi_expr(m, Fraction(a, q) + shift, order=order)


def psi_half_pair(m: int, x: Fraction) -> ConstExpr:
    """ψ^(m)(x) + ψ^(m)(x + 1/2) via duplication: 2^(m+1) ψ^(m)(2x) (minus 2 log 2 if m = 0)."""
    x = Fraction(x)
    out = psi_expr(m, 2 * x) * 2 ** (m + 1)
    if m == 0:
        out = out - ConstExpr.of(log_prime(2), 2)
    return out


def r_rational(k: int, a: int, q: int) -> Fraction:
    """Σ_{j=1}^{k-1} 1/(j - a/q), the shift from ψ(1 - a/q) to ψ(k - a/q)."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not (0 < a < q) or gcd(a, q) != 1:
        raise DomainError(f"need 0 < a < q coprime, got {a}/{q}")
    x = Fraction(a, q)
    return sum((1 / (j - x) for j in range(1, k)), Fraction(0))


def weight_is_even_integer(k: Fraction) -> bool:
    k = Fraction(k)
    return k.denominator == 1 and k > 0 and k.numerator % 2 == 0


def psik2_expand(m: int, k: Fraction | int | str, beta: int) -> ConstExpr:
    """ψ^(2m)(k/2) as ψ^(2m)(β/4) plus an explicit rational, where 2k ≡ β (mod 4)."""
    k = Fraction(k)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if (2 * k).denominator != 1 or k < Fraction(1, 2):
        raise DomainError(f"k must be a positive half-integer, got {k}")
    if beta not in (1, 2, 3, 4) or (int(2 * k) - beta) % 4:
        raise DomainError(f"2k = {2 * k} is not congruent to beta = {beta} mod 4")
    order = 2 * m
    upper = int(k / 2)  # [k/2]
    primed = Fraction(0)
    if k >= 2:
        primed = sum((Fraction(1, (4 * j + beta) ** (order + 1)) for j in range(upper)), Fraction(0))
        primed *= 4 ** (order + 1) * factorial(order)
    delta = Fraction(2 ** (order + 1) * factorial(order)) / k ** (order + 1) if weight_is_even_integer(k) else 0
    return _window(order, Fraction(beta, 4)) + (primed - delta)


# ---------------------------------------------------------------------------
# ranks

def coefficient_matrix(vs: Iterable[ConstExpr]) -> tuple[list[ConstSymbol], list[list[Fraction]]]:
    vs = list(vs)
    symbols = sorted({s for v in vs for s in v.symbols()}, key=lambda s: s.sort_key)
    rows = [[v.coefficient(s) for s in symbols] for v in vs]
    return symbols, rows


def _bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    mat = [list(r) for r in rows]
    if not mat:
        return 0
    nrows, ncols = len(mat), len(mat[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        p = mat[rank][col]
        for r in range(rank + 1, nrows):
            lead = mat[r][col]
            row = mat[r]
            for c in range(col + 1, ncols):
                row[c] = (row[c] * p - lead * mat[rank][c]) // prev
            row[col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def exact_rank(vs: Iterable[ConstExpr]) -> int:
    """Rank over Q of the expressions, symbols treated as a formal basis."""
    _, rows = coefficient_matrix(vs)
    int_rows = []
    for row in rows:
        den = 1
        for c in row:
            den = den * c.denominator // gcd(den, c.denominator)
        int_rows.append([int(c * den) for c in row])
    return _bareiss_rank(int_rows)


def rank_lower_bound(vs: list[ConstExpr], w: ConstExpr, rs: list[Rational]) -> int:
    """Exact rank of {v_i - r_i w}; at least rank(vs) - 1 when vs is independent."""
    vs = list(vs)
    if not vs:
        raise DomainError("need at least one vector")
    if len(rs) != len(vs):
        raise DomainError("rs and vs must have the same length")
    return exact_rank(v - w * Fraction(r) for v, r in zip(vs, rs))

"""Precision bookkeeping and the arbitrary-precision complex number type.

All arithmetic runs inside a per-thread :class:`mpmath.MPContext`, so
concurrent callers never share a mutable precision setting.  Public values
are :class:`BigComplex` instances, which carry the :class:`Precision` they were
computed at.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

import mpmath

from .errors import NonFiniteError

_local = threading.local()


def context() -> mpmath.MPContext:
    """Return this thread's private mpmath context."""
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = mpmath.MPContext()
        _local.ctx = ctx
    return ctx


@contextmanager
def working(bits: int) -> Iterator[mpmath.MPContext]:
    """Temporarily set the thread context to ``bits`` of mantissa."""
    ctx = context()
    saved = ctx.prec
    ctx.prec = bits
    try:
        yield ctx
    finally:
        ctx.prec = saved


@dataclass(frozen=True)
class Precision:
    """Target mantissa precision plus extra working bits.

    ``guard_bits`` defaults to ``max(32, bits // 8)``.
    """

    bits: int = 128
    guard_bits: int = field(default=-1)

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < 64:
            raise ValueError(f"precision must be at least 64 bits, got {self.bits!r}")
        if self.guard_bits == -1:
            object.__setattr__(self, "guard_bits", max(32, self.bits // 8))
        if self.guard_bits < 0 or self.guard_bits > self.bits:
            raise ValueError(f"guard_bits must lie in [0, bits], got {self.guard_bits}")

    @property
    def working(self) -> int:
        return self.bits + self.guard_bits

    def doubled(self) -> "Precision":
        return Precision(2 * self.bits)

    @property
    def tolerance(self) -> float:
        """2^(-bits/2): the agreement level used for identity checks."""
        return 2.0 ** (-self.bits / 2)


DEFAULT_PRECISION = Precision(128)

Number = Union[int, float, complex, Fraction, str, "BigComplex", mpmath.mpf, mpmath.mpc]


def _check_finite(ctx, value):
    if ctx.isnan(value) or ctx.isinf(value):
        raise NonFiniteError(f"non-finite value {value}")
    return value


def to_mp(ctx, x) -> mpmath.mpc:
    """Convert any supported scalar to an ``mpc`` of the current context."""
    if isinstance(x, BigComplex):
        x = x.value
    elif isinstance(x, Fraction):
        x = ctx.mpf(x.numerator) / x.denominator
    elif isinstance(x, str):
        x = _parse_complex_string(ctx, x)
    return _check_finite(ctx, ctx.mpc(x))


def _parse_complex_string(ctx, text: str):
    text = text.strip().replace(" ", "")
    if "/" in text and "j" not in text:
        frac = Fraction(text)
        return ctx.mpf(frac.numerator) / frac.denominator
    if text.endswith("j") or text.endswith("i"):
        body = text[:-1]
        # split at the last sign that is not part of an exponent
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                re_part, im_part = body[:pos], body[pos:]
                break
        else:
            re_part, im_part = "0", body
        if im_part in ("+", "-", ""):
            im_part += "1"
        return ctx.mpc(ctx.mpf(re_part), ctx.mpf(im_part))
    return ctx.mpf(text)


class BigComplex:
    """Immutable arbitrary-precision complex number tagged with a precision.

    Binary operations between values of different precision are carried out
    at the smaller of the two.
    """

    __slots__ = ("_value", "prec")

    def __init__(self, value: Number, prec: Precision = DEFAULT_PRECISION):
        with working(prec.bits) as ctx:
            self._value = +to_mp(ctx, value)
        self.prec = prec

    @classmethod
    def _wrap(cls, value, prec: Precision) -> "BigComplex":
        obj = cls.__new__(cls)
        obj._value = value
        obj.prec = prec
        return obj

    # Exported values live in the global mpmath context without rounding, so
    # arithmetic on them follows the caller's mpmath.mp precision.
    @property
    def value(self) -> mpmath.mpc:
        return mpmath.mp.make_mpc(self._value._mpc_)

    @property
    def real(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._value.real._mpf_)

    @property
    def imag(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._value.imag._mpf_)

    def is_real(self) -> bool:
        return self._value.imag == 0

    def _binary(self, other, op) -> "BigComplex":
        if isinstance(other, BigComplex):
            prec = self.prec if self.prec.bits <= other.prec.bits else other.prec
        else:
            prec = self.prec
        with working(prec.bits) as ctx:
            out = _check_finite(ctx, op(ctx.mpc(self._value), to_mp(ctx, other)))
        return BigComplex._wrap(out, prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: b * a)

    def __truediv__(self, other):
        def div(a, b):
            if b == 0:
                raise NonFiniteError("division by zero")
            return a / b

        return self._binary(other, div)

    def __rtruediv__(self, other):
        def div(a, b):
            if a == 0:
                raise NonFiniteError("division by zero")
            return b / a

        return self._binary(other, div)

    def __neg__(self):
        return BigComplex._wrap(-self._value, self.prec)

    def __abs__(self) -> mpmath.mpf:
        with working(self.prec.bits) as ctx:
            return mpmath.mp.make_mpf(ctx.fabs(ctx.mpc(self._value))._mpf_)

    def __eq__(self, other):
        if isinstance(other, BigComplex):
            return self._value == other._value
        try:
            with working(self.prec.bits) as ctx:
                return ctx.mpc(self._value) == to_mp(ctx, other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self._value.real, self._value.imag))

    def __complex__(self):
        return complex(self._value)

    def __float__(self):
        if self._value.imag != 0:
            raise TypeError("cannot convert a non-real BigComplex to float")
        return float(self._value.real)

    def to_string(self, digits: int = 25) -> str:
        """Decimal rendering with ``digits`` significant digits."""
        re_s = mpmath.nstr(self._value.real, digits, min_fixed=-5, max_fixed=25)
        if self._value.imag == 0:
            return re_s
        im = self._value.imag
        sign = "-" if im < 0 else "+"
        im_s = mpmath.nstr(abs(im), digits, min_fixed=-5, max_fixed=25)
        return f"{re_s}{sign}{im_s}j"

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"BigComplex({self.to_string()!r}, bits={self.prec.bits})"


def as_precision(prec: Precision | int | None, z=None) -> Precision:
    if isinstance(prec, Precision):
        return prec
    if isinstance(prec, int):
        return Precision(prec)
    if isinstance(z, BigComplex):
        return z.prec
    return DEFAULT_PRECISION


# Constants.  Each cache entry is computed once per working precision and only
# read afterwards.

@lru_cache(maxsize=64)
def _const(name: str, bits: int, arg: int = 0):
    with working(bits) as ctx:
        if name == "gamma":
            return +ctx.euler
        if name == "pi":
            return +ctx.pi
        if name == "log":
            return ctx.log(arg)
        if name == "logpi":
            return ctx.log(ctx.pi)
        if name == "zeta":
            return ctx.zeta(arg)
    raise KeyError(name)


def const_mp(ctx, name: str, arg: int = 0):
    """Constant at the current precision of ``ctx`` (as a context value)."""
    return ctx.mpf(_const(name, ctx.prec, arg))


def euler_gamma(prec: Precision = DEFAULT_PRECISION) -> BigComplex:
    """Euler's constant 0.5772156649..."""
    return BigComplex(_const("gamma", prec.working), prec)


def pi_const(prec: Precision = DEFAULT_PRECISION) -> BigComplex:
    return BigComplex(_const("pi", prec.working), prec)


def log_const(n: int, prec: Precision = DEFAULT_PRECISION) -> BigComplex:
    """Principal logarithm of a positive integer."""
    if n < 1:
        raise ValueError("log_const needs a positive integer")
    return BigComplex(_const("log", prec.working, n), prec)

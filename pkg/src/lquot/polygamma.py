"""Gamma, log-gamma, digamma and polygamma functions at arbitrary precision.

Evaluation shifts the argument upward with the recurrence until it is far
enough from the origin for the Stirling asymptotic series, then sums that
series until the next term (inflated by the usual sector factor) drops below
the working precision.  Bernoulli numbers are generated exactly.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial

from .errors import DomainError, PoleError
from .precision import BigComplex, Precision, as_precision, const_mp, to_mp, working

_bern_lock = threading.Lock()
_bern_even: list[Fraction] = [Fraction(1)]  # B_0, B_2, B_4, ...


def bernoulli_even(j: int) -> Fraction:
    """Exact Bernoulli number B_{2j}."""
    if j < len(_bern_even):
        return _bern_even[j]
    with _bern_lock:
        if j >= len(_bern_even):
            _extend_bernoulli(max(2 * j, 64))
    return _bern_even[j]


def _extend_bernoulli(jmax: int) -> None:
    # Akiyama-Tanigawa; produces B_n with B_1 = +1/2, only even n are kept.
    n = 2 * jmax
    row = [Fraction(0)] * (n + 1)
    evens = []
    for i in range(n + 1):
        row[i] = Fraction(1, i + 1)
        for k in range(i, 0, -1):
            row[k - 1] = k * (row[k - 1] - row[k])
        if i % 2 == 0:
            evens.append(row[0])
    _bern_even[:] = evens


def _check_pole(ctx, z, tol_bits: int) -> None:
    x = z.real
    if x < 0.5:
        n = ctx.nint(x)
        if n <= 0 and ctx.fabs(z - n) < ctx.ldexp(1, -(tol_bits // 2)):
            raise PoleError(f"argument {ctx.nstr(z, 15)} is at a pole (nearest {int(n)})")


def _shift_radius(ctx, m: int) -> int:
    return int(0.4 * ctx.prec) + m + 2


def _shift(ctx, z, m: int, radius: int):
    """Shift ``z`` to the asymptotic region; returns the new z and step count."""
    steps = 0
    if abs(z.imag) < radius:
        if z.real < radius:
            steps = int(ctx.ceil(radius - z.real))
    elif z.real < 0:
        steps = int(ctx.ceil(-z.real)) + 1
    return z + steps, steps


def _stirling_tail(ctx, z, m: int, kind: str):
    """Sum of the Bernoulli part of the Stirling expansion.

    ``kind`` is 'loggamma' or 'psi'.  The loop stops once the next term,
    multiplied by sec(arg z / 2)^(2j+m+2), is below 2^-prec of the leading
    part, which bounds the truncation error for Re z > 0.
    """
    eps = ctx.ldexp(1, -ctx.prec)
    sec_half = 1 / ctx.cos(ctx.arg(z) / 2)
    inv = 1 / z
    inv2 = inv * inv
    total = ctx.mpc(0)
    if kind == "loggamma":
        zpow = inv  # z^-(2j-1)
        scale = ctx.fabs(z * ctx.log(z)) + 1
    elif m == 0:
        zpow = inv2  # z^-2j
        scale = ctx.fabs(ctx.log(z)) + 1
    else:
        zpow = inv ** (m + 2)  # z^-(2j+m)
        scale = ctx.fabs(inv) ** m
    prev = None
    for j in range(1, 10 * ctx.prec):
        b = bernoulli_even(j)
        if kind == "loggamma":
            c = b / (2 * j * (2 * j - 1))
        elif m == 0:
            c = -b / (2 * j)
        else:
            c = b * Fraction(factorial(2 * j + m - 1), factorial(2 * j))
        term = (ctx.mpf(c.numerator) / c.denominator) * zpow
        size = ctx.fabs(term)
        total += term
        bound = size * sec_half ** (2 * j + m + 2)
        if bound < eps * scale:
            return total
        if prev is not None and size > prev and j > 4:
            raise ArithmeticError("Stirling series diverged before convergence")
        prev = size
        zpow *= inv2
    raise ArithmeticError("Stirling series did not converge")


def psi_mp(ctx, m: int, z):
    """ψ^(m)(z) at the current context precision (internal, unrounded)."""
    z = ctx.mpc(z)
    _check_pole(ctx, z, ctx.prec)
    radius = _shift_radius(ctx, m)
    w, steps = _shift(ctx, z, m, radius)
    sign = -1 if m % 2 else 1  # (-1)^m
    mfact = factorial(m)
    acc = ctx.mpc(0)
    for j in range(steps):
        acc += (z + j) ** (-(m + 1))
    acc *= -sign * mfact
    if m == 0:
        lead = ctx.log(w) - 1 / (2 * w)
        return acc + lead + _stirling_tail(ctx, w, 0, "psi")
    lead = factorial(m - 1) / w ** m + mfact / (2 * w ** (m + 1))
    series = lead + _stirling_tail(ctx, w, m, "psi")
    return acc + (1 if m % 2 else -1) * series


def loggamma_mp(ctx, z):
    """Principal log-gamma at the current context precision (internal)."""
    z = ctx.mpc(z)
    _check_pole(ctx, z, ctx.prec)
    w, steps = _shift(ctx, z, 0, _shift_radius(ctx, 0))
    acc = ctx.mpc(0)
    for j in range(steps):
        acc += ctx.log(z + j)
    half_log_2pi = (ctx.log(2) + const_mp(ctx, "logpi")) / 2
    main = (w - ctx.mpf(0.5)) * ctx.log(w) - w + half_log_2pi
    return main + _stirling_tail(ctx, w, 0, "loggamma") - acc


def gamma_mp(ctx, z):
    return ctx.exp(loggamma_mp(ctx, z))


def _finish(value, prec: Precision) -> BigComplex:
    with working(prec.bits) as ctx:
        return BigComplex._wrap(+ctx.mpc(value), prec)


def _order(m) -> int:
    if isinstance(m, bool) or not isinstance(m, int) or m < 0:
        raise DomainError(f"polygamma order must be a non-negative integer, got {m!r}")
    return m


def polygamma(m: int, z, prec: Precision | int | None = None) -> BigComplex:
    """ψ^(m)(z) for z off the non-positive integers; m = 0 gives digamma."""
    m = _order(m)
    prec = as_precision(prec, z)
    with working(prec.bits) as ctx:
        _check_pole(ctx, to_mp(ctx, z), prec.bits)
    with working(prec.working + 2 * m) as ctx:
        value = psi_mp(ctx, m, to_mp(ctx, z))
    return _finish(value, prec)


def digamma(z, prec: Precision | int | None = None) -> BigComplex:
    return polygamma(0, z, prec)


def loggamma(z, prec: Precision | int | None = None) -> BigComplex:
    """log Γ(z) on the principal branch (cut along the negative real axis)."""
    prec = as_precision(prec, z)
    with working(prec.bits) as ctx:
        _check_pole(ctx, to_mp(ctx, z), prec.bits)
    with working(prec.working) as ctx:
        value = loggamma_mp(ctx, to_mp(ctx, z))
    return _finish(value, prec)


def gamma(z, prec: Precision | int | None = None) -> BigComplex:
    prec = as_precision(prec, z)
    with working(prec.bits) as ctx:
        _check_pole(ctx, to_mp(ctx, z), prec.bits)
    with working(prec.working) as ctx:
        value = gamma_mp(ctx, to_mp(ctx, z))
    return _finish(value, prec)

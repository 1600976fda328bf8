"""Reference values computed by routes that share no code with lquot."""

from fractions import Fraction
from math import comb

import mpmath


def digamma_series(z, dps=60):
    """ψ(z) + γ = Σ_{n>=0} [1/(n+1) - 1/(n+z)], summed with Richardson extrapolation."""
    with mpmath.workdps(dps):
        z = mpmath.mpmathify(z)
        s = mpmath.nsum(lambda n: 1 / (n + 1) - 1 / (n + z), [0, mpmath.inf])
        return s - mpmath.euler


def zeta3_apery(terms=120):
    """ζ(3) = (5/2) Σ (-1)^(n+1) / (n^3 C(2n, n)), as an exact rational partial sum."""
    total = Fraction(0)
    for n in range(1, terms + 1):
        total += Fraction((-1) ** (n + 1), n ** 3 * comb(2 * n, n))
    return total * Fraction(5, 2)


def gamma_integral(x, dps=40):
    """Γ(x) = ∫_0^∞ t^(x-1) e^(-t) dt for real x > 0."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        return mpmath.quad(lambda t: t ** (x - 1) * mpmath.exp(-t), [0, 1, 10, 50, mpmath.inf])


def chi5_l(s):
    """L(s, (5/.)) = 5^(-s) Σ_a (5/a) ζ(s, a/5) (Hurwitz zeta), at the current mpmath precision."""
    signs = {1: 1, 2: -1, 3: -1, 4: 1}
    s = mpmath.mpmathify(s)
    return 5 ** (-s) * mpmath.fsum(e * mpmath.zeta(s, mpmath.mpf(a) / 5) for a, e in signs.items())


def tau_hecke_ok(tau, limit):
    """Multiplicativity and the prime-power recursion for τ up to ``limit``."""
    from math import gcd

    t = lambda n: tau[n - 1]
    for m in range(2, 40):
        for n in range(2, 40):
            if m * n <= limit and gcd(m, n) == 1 and t(m * n) != t(m) * t(n):
                return False
    for p in (2, 3, 5, 7):
        pk = p
        while pk * p * p <= limit:
            if t(pk * p * p) != t(p) * t(pk * p) - p ** 11 * t(pk):
                return False
            pk *= p
    return True

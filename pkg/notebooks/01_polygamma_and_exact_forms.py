"""
Polygamma values, exact reductions and the two half-integral constants
=======================================================================

Run with ``python notebooks/01_polygamma_and_exact_forms.py``.
"""

from fractions import Fraction

import mpmath

import lquot
from lquot import Precision, polygamma, psi_expr, psik2_expand
from lquot.certificates import halfint_constant

# %%
# Every numeric routine takes a Precision.  128 bits is the default.
p = Precision(256)
print(polygamma(0, 1, p))               # -γ
print(polygamma(1, Fraction(1, 3), p))
print(polygamma(3, "0.5+2j", p))

# %%
# Values come back as BigComplex.  ``.value`` hands an mpmath number to the
# caller's own mpmath context, unrounded.
with mpmath.workprec(256):
    print(polygamma(2, 1, p).value + 2 * mpmath.zeta(3))   # ~ 1e-77

# %%
# For rational arguments psi_expr returns an exact linear form over a fixed
# basis: gamma, pi, log(pi), log(p), psipair(a/q), psi[m](a/q), zeta(n), 1.
for m, x in [(0, Fraction(1, 2)), (0, Fraction(7, 4)), (2, 1), (1, Fraction(10, 3)), (0, Fraction(-5, 6))]:
    e = psi_expr(m, x)
    print(f"psi[{m}]({x}) = {e}")
    assert e == psi_expr(m, x, order="reflection")

# %%
# The text form parses back to the same expression and evaluates at any
# precision.
e = psi_expr(0, Fraction(2, 7)) - psi_expr(0, Fraction(5, 7))
print(e, "=", e.evaluate(Precision(192)))
assert lquot.parse_expr(str(e)) == e

# %%
# Even-order polygamma at k/2 through a quarter-integer anchor.
for m, k, beta in [(1, 2, 4), (1, Fraction(5, 2), 1), (2, Fraction(7, 2), 3)]:
    e = psik2_expand(m, k, beta)
    print(f"psi[{2 * m}]({Fraction(k) / 2}) = {e}")
    print("   numeric", e.evaluate(), " direct", polygamma(2 * m, Fraction(k) / 2))

# %%
# The half-integral weight estimate needs log π - ψ(1/4) and log π - ψ(3/4).
for c in (1, 3):
    print(f"log(pi) - psi({c}/4) =", halfint_constant(c, Precision(192)).to_string(30))

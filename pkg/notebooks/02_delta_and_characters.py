"""
Ramanujan's Δ, a twist and a Dirichlet character
================================================

Coefficients in, closed-form identities out.  Run with
``python notebooks/02_delta_and_characters.py``.
"""

import tempfile
import time
from fractions import Fraction
from pathlib import Path

from lquot import (
    AFEConfig,
    afe_l,
    complete_l,
    delta_series,
    direct_l,
    read_coefficients,
    real_character_series,
    twist,
    verify_identity,
    write_coefficients,
)
from lquot.afe import direct_tail_bound

# %%
# τ(n) for n <= 10^4 from the product formula.
t0 = time.perf_counter()
delta = delta_series(10_000)
print(f"{delta.nmax} coefficients in {time.perf_counter() - t0:.2f} s;", delta.coeffs[:6])

# %%
# Coefficient files are plain text with a '# key: value' header.
tmp = Path(tempfile.mkdtemp())
write_coefficients(delta, tmp / "delta.coeffs")
print((tmp / "delta.coeffs").read_text().splitlines()[:9])
assert read_coefficients(tmp / "delta.coeffs") == delta

# %%
# Inside the strip L(s) comes from the smoothed functional equation.  The
# splitting point t is arbitrary for correct data.
for t in (0.8, 1.25, 2.0):
    print(f"t = {t}:", afe_l(delta, "6+3j", AFEConfig(cutoff=t)))

# %%
# Far to the right the Dirichlet series itself converges and the two methods
# meet.  With the certified bound |τ(n)| <= 2 n^6 the tail at Re s = 8 is
# still too large to certify 1e-12 from 10^4 terms.
print("direct  L(14) =", direct_l(delta, 14, tol=1e-20))
print("AFE     L(14) =", afe_l(delta, 14))
print("certified tail at sigma = 8:", direct_tail_bound(delta, 8.0, delta.nmax))

# %%
# The identity at the centre s0 = 6: both sides agree.
print(verify_identity(delta, 6, 0, tol=1e-8))
for m in (1, 2, 3):
    print(verify_identity(delta, Fraction(63, 10), m, tol=1e-6))

# %%
# A quadratic twist by 5 (conductor 25) off the centre.
tw = twist(delta_series(3000), 5)
print(verify_identity(tw, Fraction(57, 10), 0, tol=1e-6))

# %%
# The real character mod 5, degree one.
chi = real_character_series(5)
print("L(1/2, chi_5) =", afe_l(chi, "0.5"))
print(verify_identity(chi, Fraction(2, 5), 0, tol=1e-6))

# %%
# Why t != 1: at t = 1 the smoothed sum is symmetric for any coefficients.
from lquot import CoefficientSeries, FamilyDatum  # noqa: E402

fake = CoefficientSeries(chi.coeffs, FamilyDatum.gld(7, [0]), label="chi_5 with level 7")
print(verify_identity(fake, Fraction(2, 5), 0, AFEConfig(cutoff=1.0)))
print(verify_identity(fake, Fraction(2, 5), 0, AFEConfig(cutoff=1.25)))
lam = complete_l(fake, "0.3+1j", AFEConfig(cutoff=1.25))
print("the fake data's completed value depends on t:", lam, complete_l(fake, "0.3+1j", AFEConfig(cutoff=0.8)))

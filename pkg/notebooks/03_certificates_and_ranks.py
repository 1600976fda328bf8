"""
Non-vanishing certificates and rank bounds
==========================================

Run with ``python notebooks/03_certificates_and_ranks.py``.
"""

from fractions import Fraction

from lquot import (
    Certificate,
    FamilyDatum,
    Precision,
    certify_gld,
    certify_halfint_central,
    certify_hilbert,
    certify_modular,
    certify_siegel,
    rank_certificate,
)

half = Fraction(1, 2)

# %%
# Degree one: the verdict flips between N = 22 and N = 23.
for N in range(20, 26):
    c = certify_gld(FamilyDatum.gld(N, [1]), half)
    print(f"N = {N:2d}  {c.verdict.value:13s} margin = {c.margin:+.6f}")
print("threshold", c.detail("threshold_4pi_exp_gamma"))

# %%
# Modular forms: N D^2 against the constant near 125.2, and the weaker
# threshold near 16.95 that needs k >= 5.
for D in (-11, 13):
    for branch in ("primary", "remark"):
        c = certify_modular(FamilyDatum.modular(12, 1, D), 6, branch)
        print(f"D = {D:3d} {branch:8s} {c.verdict.value}")

# %%
# Half-integral weight at the centre.
print(certify_halfint_central(Fraction(13, 2), 8).to_text())

# %%
# Hilbert forms.  Degrees 3 and 4 use the smallest totally real discriminant;
# degree 2 fails by about 0.77 even at the smallest field.
for n, dF, k, s0 in [(5, 14641, 10, 5), (3, 49, 10, 5), (4, 725, 10, 5), (2, 5, 8, 4)]:
    c = certify_hilbert(FamilyDatum.hilbert(k, n, dF), s0)
    print(f"n = {n}: {c.verdict.value:13s} margin = {c.margin:+.4f}")

# %%
# Koecher-Maass series of genus 2.
c = certify_siegel(FamilyDatum.siegel(2, 30), 15, Precision(256))
print(c.bound, "=", c.bound_value)

# %%
# Records are plain text and round-trip exactly.
text = c.to_text()
assert Certificate.from_text(text).to_text() == text

# %%
# Rank of the right-hand sides as N runs over a set with property A.
r = rank_certificate(FamilyDatum.gld(1, [1]), J=[2, 3, 5, 7], s0=half)
print(r.to_text())

# %%
# Coprime points a/q for weight 2: one psipair symbol per point.
for q in (7, 11, 13):
    r = rank_certificate(FamilyDatum.modular(2), q=q)
    print(f"q = {q}: rank {r.detail('rank')} >= {r.detail('guarantee')}, {r.detail('psipair_symbols')}")

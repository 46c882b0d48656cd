"""Evaluate the analytic blowup certificates for a two-Gaussian input.

Walks through the full criteria toolchain: closed-form initial functionals,
the constants c1..c4, the width-bound conjunction check (F + 1 < 0 together
with G < 1), and the two ready-made thresholds on E(0) and Y(0).
"""

import numpy as np

from ptnls import (
    F_function,
    G_function,
    GaussianIC,
    SystemParams,
    check_theorem1,
    constants,
    gaussian_moments,
    lemma1_threshold,
    lemma2_threshold,
)

# Focusing self-interaction, mildly repulsive cross-interaction.
params = SystemParams(gamma=0.5, kappa=1.0, g1=1.0, g2=1.0, g=-0.5)
ic = GaussianIC(ampU=4.0, ampV=2.0, widthU=0.3, widthV=0.1)

initial = gaussian_moments(ic, params)
print("initial functionals:")
print(f"  S0(0) = {initial.s0:.6g}   S1(0) = {initial.s1:.6g}")
print(f"  E(0)  = {initial.energy:.6g}")
print(f"  X(0)  = {initial.msw:.6g}   Y(0) = {initial.mswRate:.6g}")

cc = constants(params)
print(f"constants: c1={cc.c1:.6g} c2={cc.c2:.6g} c3={cc.c3:.6g} "
      f"c4={cc.c4:.6g} beta={cc.beta:.6g}")

report = check_theorem1(initial, params)
print(f"conjunction check satisfied: {report.satisfied}")
if report.satisfied:
    print(f"  certified time T0 = {report.certifiedTime:.6g}")

# Show a few sampled values of the certificate functions.
t = np.linspace(0.0, 0.2, 5)
print("  t        F(t)+1       G(t)")
for ti in t:
    print(f"  {ti:.3f}  {F_function(initial, params, ti) + 1:11.4g}  "
          f"{G_function(initial, params, ti):11.4g}")

# The thresholds certify blowup from a single scalar comparison.
lem1 = lemma1_threshold(initial, params)
lem2 = lemma2_threshold(initial, params)
print(f"energy threshold: E(0) = {initial.energy:.6g} vs bound "
      f"{lem1['E0bound']:.6g} -> satisfied={lem1['satisfied']}")
print(f"width-rate threshold: Y(0) = {initial.mswRate:.6g} vs bound "
      f"{lem2['Y0bound']:.6g} -> satisfied={lem2['satisfied']}")

# A deliberately violent input that the certificates do catch.
strong = gaussian_moments(GaussianIC(12.0, 2.0, 0.12, 0.12), params)
rep2 = check_theorem1(strong, params)
print(f"strong input: E(0) = {strong.energy:.6g}, "
      f"satisfied={rep2.satisfied}, T0={rep2.certifiedTime}")

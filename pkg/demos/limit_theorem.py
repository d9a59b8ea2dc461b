"""
Large-n limit of the time average
=================================

Scaled by n, the time-averaged position tends to an atom at 0 of mass c
plus a uniform law on [0, 1]. The atom is present only when p < q and the
start vertex stays fixed.
"""

import numpy as np

from pathwalk import LimitMixture, WalkParameters, c_coefficient, initial_spec, time_averaged
from pathwalk.limits import growing_start_check, kolmogorov_distance, scaled_cdf, uniform_tail_integral

p = 0.3
for i in (0, 1, 2):
    params = WalkParameters(4000, p)
    c = c_coefficient(params, i)
    pbar = time_averaged(params, initial_spec(params, i))
    ks = kolmogorov_distance(pbar, LimitMixture(c))
    print(f"start {i}: c = {c:.6f}, 1 - c from quadrature = {uniform_tail_integral(params, i):.6f}, KS = {ks:.2e}")

# A few points of the empirical and limiting CDFs.
params = WalkParameters(4000, p)
pbar = time_averaged(params, initial_spec(params, 0))
mix = LimitMixture(c_coefficient(params, 0))
a = np.array([0.01, 0.1, 0.25, 0.5, 0.75, 0.99])
print("a      ", a)
print("F_n(a) ", np.round(scaled_cdf(pbar, a), 5))
print("F(a)   ", np.round(mix.cdf(a), 5))

# Start vertex growing with n: the atom washes out and the limit is uniform.
for name, rule in (("sqrt(n)", lambda n: int(np.sqrt(n))), ("n/2", lambda n: n // 2)):
    report = growing_start_check(p, rule, [500, 1000, 2000, 4000])
    print(f"start ~ {name}: KS to U(0,1) =", ", ".join(f"{d:.2e}" for d in report.distances))

"""
Time-averaged position, three ways
==================================

The long-run average of the position distribution can be read off the
eigenvectors, written out with Chebyshev polynomials, or simply averaged
over a long run of the walk. All three should agree.
"""

import time

import numpy as np

from pathwalk import WalkParameters, initial_spec, time_averaged

params = WalkParameters(n=8, p=0.3)
spec = initial_spec(params, 4)  # interior start, both chiralities with weight 1/2

spectral = time_averaged(params, spec, "spectral")
closed = time_averaged(params, spec, "closed-form")

t0 = time.perf_counter()
cesaro = time_averaged(params, spec, "cesaro", steps=1_000_000)
elapsed = time.perf_counter() - t0

print(" j   spectral        closed form     Cesaro (T=1e6)")
for j, (a, b, c) in enumerate(zip(spectral.masses, closed.masses, cesaro.masses)):
    print(f"{j:2d}   {a:.12f}  {b:.12f}  {c:.12f}")

print("spectral vs closed form:", np.max(np.abs(spectral.masses - closed.masses)))
print("spectral vs Cesaro:     ", np.max(np.abs(spectral.masses - cesaro.masses)))
print(f"Cesaro error estimate:   {cesaro.est_err:.2e}  ({elapsed:.2f} s for 1e6 steps)")

# The walk keeps a memory of where it started: mass piles up near vertex 0 when p < q.
start0 = time_averaged(params, initial_spec(params, 0))
print("start 0, mass at 0:", start0.masses[0])

"""
Step-kernel throughput and norm drift
=====================================

One step of the walk is a 2x2 coin on each interior vertex followed by a
pairwise swap, so a step costs O(n). The compiled loop is timed here.
"""

from pathwalk import WalkParameters, evolution_kernel
from pathwalk.evolution import kernel_throughput

for n in (16, 64, 256, 1024):
    report = kernel_throughput(evolution_kernel(WalkParameters(n, 0.3)), steps=200_000)
    print(
        f"n={n:5d}  {report['steps_per_second']:.3g} steps/s  "
        f"{report['amplitudes_per_second']:.3g} amplitudes/s  drift {report['norm_deviation']:.1e}"
    )

report = kernel_throughput(evolution_kernel(WalkParameters(64, 0.3)), steps=1_000_000)
print(f"n=64 after 1e6 steps: |norm - 1| = {report['norm_deviation']:.2e}")

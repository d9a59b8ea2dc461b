"""
Spectrum of the walk on a short path
====================================

The 2n+2 eigenvalues of the walk come in conjugate pairs sitting above the
eigenvalues of a (n+2) x (n+2) Jacobi matrix, plus the two real points +1
and -1.
"""

import numpy as np

from pathwalk import WalkParameters, full_eigensystem, jacobi_matrix, stationary_measure
from pathwalk.jacobi import bisection_roots, jacobi_spectrum

params = WalkParameters(n=6, p=0.3)

# The Jacobi matrix has zero diagonal; its off-diagonal is sqrt(q), sqrt(pq), ..., sqrt(p).
J = jacobi_matrix(params)
print("off-diagonal:", np.round(J.off_diagonal, 4))

# Closed-form eigenvalues against an independent bisection on the characteristic polynomial.
jac = jacobi_spectrum(params)
print("eigenvalues: ", np.round(jac.eigenvalues, 6))
print("bisection:   ", np.round(bisection_roots(params), 6))

# The eigenvector for +1, squared, is the stationary law of the reflecting random walk.
print("v0^2 - pi:   ", np.max(np.abs(jac.eigenvectors[:, 0] ** 2 - stationary_measure(params))))

# Lift everything to the walk and check the eigenpairs.
spec = full_eigensystem(params)
for k, mu, res in zip(spec.labels, spec.eigenphases, spec.residuals):
    print(f"k={k:+d}  mu={mu.real:+.5f}{mu.imag:+.5f}i  phase={np.angle(mu):+.4f}  residual={res:.1e}")
print(spec.diagnostics)

"""
The extended logarithm of a filtered automorphism
=================================================

Builds an automorphism whose degree-1 part is the trace-3 cat map, checks the
exponential-solvability of its spectrum, and computes the unique derivation
that exponentiates back to it with the principal-branch degree-1 block.
"""

import numpy as np

from lielog import (
    GradedAut,
    eig_unit_circle_obstruction,
    exp_derivation,
    ln_aut,
    principal_log,
    splitting,
)
from lielog.logarithm import SolvabilityError
from lielog.scalars import COMPLEX, zeros_matrix

n, k = 2, 4

# Degree-1 part: eigenvalues (3 +- sqrt 5)/2, both real positive, so the
# multiplicative group they generate meets the unit circle only at 1.
a = np.array([[2.0, 1.0], [1.0, 1.0]], dtype=complex)
verdict = eig_unit_circle_obstruction(a)
print("solvability verdict:", verdict.verdict, "-", verdict.detail)

# Dress the splitting with an IA Hopf part: u_2 sends X1 to [X1, X2].
u2 = zeros_matrix(4, 2, COMPLEX)
u2[1, 0] = 1.0
u2[2, 0] = -1.0
phi = GradedAut(n, k, np.eye(2, dtype=complex), {2: u2}).compose(splitting(a, k))
print("phi is a coproduct-preserving automorphism:", phi.is_hopf())

# The logarithm report carries the derivation, the recomputed residual, and
# flags tied to the structure the input had.
report = ln_aut(phi)
d = report.derivation
print("degree-1 block equals the principal log:",
      np.max(np.abs(np.asarray(d.d1) - principal_log(a))) < 1e-12)
print("residual |exp(D) - phi| =", report.residual)
print("images primitive (Lie derivation):", report.hopf_preserved)

# Round trip through the exponential.
back = exp_derivation(d)
print("exp(D) reproduces phi:", back.close_to(phi, 1e-9))

# A rotation has eigenvalues +-i on the unit circle: rejected with a witness.
rotation = splitting(np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex), k)
try:
    ln_aut(rotation)
except SolvabilityError as exc:
    print("rotation rejected:", exc)

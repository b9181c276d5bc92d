"""
The exponential-solvability verdict
===================================

The logarithm exists when the multiplicative group generated by the
eigenvalues of the degree-1 part (together with their conjugates) meets the
unit circle only at 1.  The check is three-valued: it certifies solvability,
produces an explicit unit-circle witness against it, or honestly reports that
a bounded integer relation search could not decide.
"""

import numpy as np

from lielog import GradedAut, eig_unit_circle_obstruction, ln_aut, splitting
from lielog.scalars import KernelSingular

cases = {
    "identity": np.eye(2),
    "rotation": np.array([[0.0, -1.0], [1.0, 0.0]]),
    "cat map": np.array([[2.0, 1.0], [1.0, 1.0]]),
    "diag(2,-2)": np.diag([2.0, -2.0]),
    "diag(-2,-2)": np.diag([-2.0, -2.0]),
    "diag(-2,4)": np.diag([-2.0, 4.0]),
    "diag(-2,-8)": np.diag([-2.0, -8.0]),
}

for name, a in cases.items():
    verdict = eig_unit_circle_obstruction(a)
    line = f"{name:12s} -> {verdict.verdict:14s} {verdict.detail}"
    if verdict.witness is not None:
        line += f" | witness {verdict.witness}"
        if verdict.exponents:
            line += f" from exponents {verdict.exponents}"
    print(line)

# A negative eigenvalue alone is harmless: the group generated by -2 meets
# the circle only at 1, and the principal log simply picks up an i*pi.
report = ln_aut(splitting(np.diag([-2.0, -2.0]).astype(complex), 3))
print("\nln of diag(-2,-2): residual", report.residual,
      "| degree-1 imag parts", np.diag(np.asarray(report.derivation.d1)).imag)

# An inconclusive verdict can be forced, but the solver still refuses when a
# kernel singularity materializes: for diag(-2, 4) the combination
# ln(-2) + ln(-2) - ln(4) = 2 pi i lands exactly on a zero of the kernel.
try:
    ln_aut(splitting(np.diag([-2.0, 4.0]).astype(complex), 3), force=True)
except KernelSingular as exc:
    print("forced diag(-2,4):", exc)

# The sibling fixture diag(-2,-8) has the same kind of modulus relation but a
# regular kernel, so the forced run succeeds.
report = ln_aut(splitting(np.diag([-2.0, -8.0]).astype(complex), 3), force=True)
print("forced diag(-2,-8): residual", report.residual, "| forced flag", report.forced)

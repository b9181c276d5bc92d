"""
Magnus expansions and the total Johnson map
===========================================

Free-group endomorphisms act on the truncated tensor algebra through a Magnus
expansion: the total Johnson map intertwines the two actions.  Dehn-twist
fixtures for the genus-1 surface feed the construction, and the trace-3
composite runs through the extended logarithm.
"""

import numpy as np

from lielog import (
    boundary_word,
    dehn_fixtures,
    exp_derivation,
    is_symplectic_expansion,
    ln_aut,
    log_unipotent,
    theta_exp,
    total_johnson,
)

# The standard expansion sends x_i to exp(X_i); it is group-like, and at
# truncation depth 3 it is even symplectic for genus 1.
theta = theta_exp(2, 3)
print("theta_exp(x1) =", theta.images[0])
print("group-like:", theta.is_grouplike_expansion())
print("symplectic at k=3:", is_symplectic_expansion(theta, 1))
print("boundary word:", boundary_word(1))

# Named genus-1 mapping classes as free-group endomorphisms.
fx = dehn_fixtures(1)
for name in ("t_a", "t_b", "anosov"):
    print(name, "->", fx[name].images, "induced", fx[name].induced_matrix().tolist())

# A single twist acts unipotently on homology; its Johnson image has a
# Maclaurin logarithm, exactly over the rationals.
theta4 = theta_exp(2, 4)
t_a = total_johnson(theta4, fx["t_a"])
log_t_a = log_unipotent(t_a)
print("twist log blocks:", sorted(log_t_a.d))
print("exact round trip:", exp_derivation(log_t_a) == t_a)

# The composite twist word is hyperbolic on homology (trace 3): outside every
# previously known logarithm domain, inside the solvable one.
anosov = total_johnson(theta4, fx["anosov"]).to_complex()
eigs = np.linalg.eigvals(np.asarray(anosov.A, dtype=complex))
print("composite eigenvalues:", sorted(eigs.real))
report = ln_aut(anosov)
print("extended log residual:", report.residual)
print("derivation blocks:", sorted(report.derivation.d))

# The intertwining identity defining the Johnson map, checked directly.
endo = fx["anosov"]
ok = all(
    anosov.apply(theta4.images[i].to_complex())
    .close_to(theta4.evaluate(endo.images[i]).to_complex(), 1e-12)
    for i in range(2)
)
print("T(theta(x_i)) == theta(phi(x_i)):", ok)

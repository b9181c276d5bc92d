"""Logarithms of filtered automorphisms.

Two routes are provided.  The Maclaurin logarithm handles unipotent inputs
(degree-1 part with all eigenvalues 1) as the finite sum
-sum (id - Phi)^i / i, exactly on the rational backend.  The extended
logarithm handles any automorphism whose degree-1 part passes the
exponential-solvability check: it fixes the degree-1 block to the principal
matrix logarithm and solves for the higher blocks degree by degree, inverting
the analytic kernel (1 - e^{-z})/z of the exponential's directional
derivative on each block.  BCH utilities cross-check the solver.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from .derivations import GradedDerivation, annihilates_omega, exp_derivation, extend
from .scalars import (
    COMPLEX,
    EXACT,
    DomainError,
    KernelSingular,
    default_tol,
    matrix_to_backend,
)
from .spectral import (
    POLE_TOL,
    SolvabilityVerdict,
    _nearest_multiple_2pi_i,
    eig_unit_circle_obstruction,
    phi1_matrix,
    principal_log,
)
from .tensor_algebra import (
    TruncatedTensor,
    basis_dimension,
    words_of_degree,
)


class SolvabilityError(DomainError):
    """The degree-1 part failed the exponential-solvability check."""

    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(
            f"degree-1 part is {verdict.verdict}: {verdict.detail}"
            + (f" (witness {verdict.witness})" if verdict.witness is not None else "")
        )


@dataclass
class LogReport:
    """Result envelope of the extended logarithm.

    The residual is recomputed from scratch when the report is assembled; the
    hopf/omega flags are None unless the corresponding predicate held for the
    input, in which case they record whether the conclusion held for the
    output derivation.
    """

    input_digest: str
    verdict: SolvabilityVerdict
    derivation: GradedDerivation
    residual: float
    hopf_preserved: bool | None = None
    omega_annihilated: bool | None = None
    forced: bool = False
    trace: list = field(default_factory=list)

    @property
    def verified(self):
        return self.residual is not None and not math.isnan(self.residual)


def _digest_aut(phi):
    payload = {
        "n": phi.n,
        "k": phi.k,
        "backend": phi.backend,
        "A": [[repr(x) for x in row] for row in phi.A],
        "u": {
            str(m): [[repr(x) for x in row] for row in blk]
            for m, blk in sorted(phi.u.items())
        },
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def _unipotent_precondition(phi, tol):
    """Check that every eigenvalue of the degree-1 part is 1."""
    if phi.backend == EXACT:
        n = phi.n
        from .scalars import eye_matrix

        nilp = phi.A - eye_matrix(n, EXACT)
        power = nilp
        for _ in range(n):
            if all(x == 0 for x in power.flat):
                return True
            power = power @ nilp
        return all(x == 0 for x in power.flat)
    eigs = np.linalg.eigvals(np.asarray(phi.A, dtype=complex))
    return bool(np.all(np.abs(eigs - 1.0) <= max(tol, 1e-8)))


def log_unipotent(phi, verify=True, tol=None):
    """Maclaurin logarithm -sum_i (id - Phi)^i / i of a unipotent automorphism.

    Exact on the rational backend; the series terminates because (id - Phi)
    is nilpotent on the truncated algebra.  Raises DomainError for
    non-unipotent inputs (use ln_aut for those).
    """
    tol = default_tol(phi.backend) if tol is None else tol
    if not _unipotent_precondition(phi, tol):
        raise DomainError(
            "degree-1 part is not unipotent; the Maclaurin series does not "
            "converge. Use ln_aut for exponential-solvable inputs."
        )
    n, k, backend = phi.n, phi.k, phi.backend
    cap = basis_dimension(n, k) + 1
    images = []
    for i in range(n):
        v = TruncatedTensor.generator(n, k, i + 1, backend)
        total = TruncatedTensor.zero(n, k, backend)
        for step in range(1, cap + 1):
            v = v - phi.apply(v)  # (id - Phi)^step applied to the generator
            if backend == EXACT:
                if v.is_zero(0):
                    break
                total = total - v.scale(Fraction(1, step))
            else:
                if v.is_zero(1e-250):
                    break
                total = total - v.scale(1.0 / step)
        else:
            raise DomainError("Maclaurin series failed to terminate")
        images.append(total)
    deriv = extend(images)
    if verify:
        _verify_derivation_property(deriv, phi)
    return deriv


def _verify_derivation_property(deriv, phi):
    """Spot-check that the Maclaurin sum acts as the Leibniz extension.

    Compares the extension of the generator images with the direct series on
    a sample of degree-2 basis words.
    """
    n, k, backend = phi.n, phi.k, phi.backend
    if k < 3:
        return
    sample = words_of_degree(n, 2)[: min(4, n * n)]
    cap = basis_dimension(n, k) + 1
    for w in sample:
        v = TruncatedTensor(n, k, {w: 1}, backend)
        total = TruncatedTensor.zero(n, k, backend)
        for step in range(1, cap + 1):
            v = v - phi.apply(v)
            if v.is_zero(0 if backend == EXACT else 1e-250):
                break
            coeff = Fraction(-1, step) if backend == EXACT else -1.0 / step
            total = total + v.scale(coeff)
        direct = deriv.apply(TruncatedTensor(n, k, {w: 1}, backend))
        if not direct.close_to(total, 0 if backend == EXACT else 1e-9):
            raise DomainError(
                "Maclaurin sum is not a derivation on the sampled words"
            )


def _degree_rows(n, m):
    offset = basis_dimension(n, m)
    return offset, offset + n**m


def _tensor_derivation_lift(d1, m):
    """Lift of an n x n matrix to H^(x m) as a derivation: sum over positions."""
    n = d1.shape[0]
    eye = np.eye(n, dtype=complex)
    total = np.zeros((n**m, n**m), dtype=complex)
    for pos in range(m):
        factors = [eye] * m
        factors[pos] = np.asarray(d1, dtype=complex)
        block = factors[0]
        for f in factors[1:]:
            block = np.kron(block, f)
        total += block
    return total


def _ad_operator(d1, m):
    """ad of the d1-lift on Hom(H, H^(x m)), acting on column-stacked matrices."""
    n = d1.shape[0]
    lift = _tensor_derivation_lift(d1, m)
    d1c = np.asarray(d1, dtype=complex)
    return np.kron(np.eye(n), lift) - np.kron(d1c.T, np.eye(n**m))


def ln_aut(
    phi,
    tol=None,
    pole_tol=POLE_TOL,
    exponent_bound=8,
    force=False,
    verdict=None,
    initial_blocks=None,
):
    """The extended logarithm: the unique derivation D with exp(D) = Phi and
    degree-1 block the principal logarithm of Phi's degree-1 part.

    Runs on the complex backend (exact inputs are converted).  The input is
    rejected when the solvability check returns not_solvable, and when it
    returns inconclusive unless force=True; a forced run is recorded in the
    report.  Raises KernelSingular when an eigenvalue of the block ad-operator
    falls within pole_tol of 2 pi i m (m != 0).

    initial_blocks seeds the solver's higher-degree state before the forward
    pass (a diagnostic hook: by uniqueness the result must not depend on it).
    """
    tol = 1e-9 if tol is None else tol
    original = phi
    phi = phi.to_complex()
    n, k = phi.n, phi.k
    a = np.asarray(phi.A, dtype=complex)
    if verdict is None:
        verdict = eig_unit_circle_obstruction(a, exponent_bound=exponent_bound)
    if verdict.verdict == "not_solvable":
        raise SolvabilityError(verdict)
    if verdict.verdict == "inconclusive" and not force:
        raise SolvabilityError(verdict)

    x_block = principal_log(a)
    blocks = {1: x_block}
    if initial_blocks:
        for m, blk in initial_blocks.items():
            if not 2 <= int(m) < k:
                raise DomainError("initial block degree out of range")
            blocks[int(m)] = np.asarray(blk, dtype=complex)
    phi_mat = np.asarray(phi.to_matrix(), dtype=complex)
    trace = []
    for m in range(2, k):
        current = GradedDerivation(n, k, dict(blocks), COMPLEX)
        exp_mat = scipy.linalg.expm(np.asarray(current.to_matrix(), dtype=complex))
        residual_mat = np.linalg.solve(exp_mat, phi_mat)
        lo, hi = _degree_rows(n, m)
        r_block = residual_mat[lo:hi, 1 : n + 1]
        ad_op = _ad_operator(x_block, m)
        ad_eigs = np.linalg.eigvals(ad_op)
        min_dist = min((_nearest_multiple_2pi_i(z) for z in ad_eigs), default=math.inf)
        if min_dist < pole_tol:
            raise KernelSingular(
                f"ad-operator eigenvalue within {pole_tol} of 2 pi i m at degree {m}"
            )
        kernel_mat = phi1_matrix(ad_op)
        z_vec = np.linalg.solve(kernel_mat, r_block.flatten(order="F"))
        z_block = z_vec.reshape((n**m, n), order="F")
        if m in blocks:
            z_block = blocks[m] + z_block  # correct any seeded initial state
        if np.max(np.abs(z_block)) > 0:
            blocks[m] = z_block
        trace.append(
            {
                "degree": m,
                "residual_block": float(np.max(np.abs(r_block))),
                "kernel_margin": float(min_dist),
            }
        )

    derivation = GradedDerivation(n, k, blocks, COMPLEX)
    exp_final = np.asarray(exp_derivation(derivation).to_matrix(), dtype=complex)
    residual = float(np.max(np.abs(exp_final - phi_mat)))

    hopf_flag = None
    if original.is_hopf(tol):
        from .tensor_algebra import is_primitive

        hopf_flag = all(
            is_primitive(img, tol) for img in derivation.generator_images()
        )
    omega_flag = None
    if n % 2 == 0 and k >= 3:
        g = n // 2
        if original.preserves_omega(g, tol):
            omega_flag = annihilates_omega(derivation, g, tol)

    return LogReport(
        input_digest=_digest_aut(original),
        verdict=verdict,
        derivation=derivation,
        residual=residual,
        hopf_preserved=hopf_flag,
        omega_annihilated=omega_flag,
        forced=force and verdict.verdict == "inconclusive",
        trace=trace,
    )


# ---------------------------------------------------------------------------
# BCH utilities
# ---------------------------------------------------------------------------


@dataclass
class BchResult:
    derivation: GradedDerivation
    order: int
    certified: bool
    warning: str | None = None
    terms: int = 0


def _dynkin_words(order, max_y):
    """Words over {x, y} of length <= order with at most max_y letters y,
    skipping words whose right-nested bracket vanishes trivially (repeated
    last letter)."""
    stack = ["x"] + (["y"] if max_y > 0 else [])
    while stack:
        word = stack.pop()
        if len(word) < 2 or word[-1] != word[-2]:
            yield word
        if len(word) < order:
            for letter in ("x", "y"):
                nxt = word + letter
                if nxt.count("y") <= max_y:
                    stack.append(nxt)


def _dynkin_coefficient(word):
    """Total Dynkin coefficient of a word: the sum over all decompositions of
    the word into syllables x^r y^s of (-1)^(p-1) / (p L prod r_i! s_i!).

    Dynamic program over prefixes; table[j][p] accumulates prod 1/(r_i! s_i!)
    over decompositions of the length-j prefix into p syllables.
    """
    length = len(word)
    table = [[Fraction(0)] * (length + 1) for _ in range(length + 1)]
    table[0][0] = Fraction(1)
    for j in range(1, length + 1):
        for i in range(j):
            seg = word[i:j]
            # valid syllable: a block of x's followed by a block of y's
            r = 0
            while r < len(seg) and seg[r] == "x":
                r += 1
            if "x" in seg[r:]:
                continue
            s = len(seg) - r
            weight = Fraction(1, math.factorial(r) * math.factorial(s))
            for p in range(j):
                if table[i][p]:
                    table[j][p + 1] += table[i][p] * weight
    total = Fraction(0)
    for p in range(1, length + 1):
        if table[length][p]:
            total += Fraction((-1) ** (p - 1), p) * table[length][p]
    return total / length


def bch_series(x, y, order=None, max_y=None):
    """Truncated Dynkin form of log(exp(X) o exp(Y)).

    Y must be IA so that terms with many Y letters vanish (a bracket with
    >= k-1 occurrences of an IA derivation raises degree past the truncation).
    For X and Y both IA the sum with order >= k-2 is the exact logarithm.
    """
    x._check_compatible(y)
    n, k, backend = x.n, x.k, x.backend
    exact_zero_tol = 0 if backend == EXACT else None
    if not y.is_ia(exact_zero_tol):
        raise DomainError("bch_series requires an IA second argument")
    both_ia = x.is_ia(exact_zero_tol)
    if order is None:
        order = k if both_ia else 3 * k
    if max_y is None:
        max_y = k - 2  # terms with >= k-1 Y letters vanish
    letters = {"x": x, "y": y}

    bracket_cache = {}

    def nested_bracket(word):
        # right-nested [l1, [l2, [... [l_{p-1}, l_p] ...]]]
        if word in bracket_cache:
            return bracket_cache[word]
        if len(word) == 1:
            out = letters[word[0]]
        else:
            inner_val = nested_bracket(word[1:])
            out = letters[word[0]].bracket(inner_val)
        bracket_cache[word] = out
        return out

    total = GradedDerivation.zero(n, k, backend)
    terms = 0
    top_order_mag = 0.0
    for word in _dynkin_words(order, max_y):
        value = nested_bracket(word)
        if value.is_zero(0):
            continue
        coeff = _dynkin_coefficient(word)
        if coeff == 0:
            continue
        if backend != EXACT:
            coeff = float(coeff)
        total = total + value.scale(coeff)
        terms += 1
        if len(word) >= order - 1:
            top_order_mag = max(
                top_order_mag, float(abs(coeff)) * float(value.max_abs())
            )
    certified = bool(both_ia and order >= k - 2)
    warning = None
    if not certified:
        warning = (
            f"series truncated at order {order}; largest top-order term "
            f"magnitude {top_order_mag:.3e}"
        )
    return BchResult(
        derivation=total, order=order, certified=certified, warning=warning, terms=terms
    )


def bch_single_y_kernel(x, y, pole_tol=POLE_TOL):
    """Closed form of log(exp(X) o exp(Y)) at k = 3 via the analytic kernel.

    At k = 3 every BCH term with two or more Y letters vanishes, so the
    logarithm is X plus the kernel z/(1 - e^{-z}) of ad(X) applied to Y,
    evaluated here by inverting (1 - e^{-z})/z on the degree-2 block
    (convention pinned against bch_series: compose means exp(Y) acts first).
    X must have only a degree-1 block and Y must be IA.
    """
    x._check_compatible(y)
    if x.k != 3:
        raise DomainError("the single-Y kernel form is specific to k = 3")
    if any(m != 1 for m in x.d):
        raise DomainError("X must have only a degree-1 block")
    if not y.is_ia(0 if y.backend == EXACT else None):
        raise DomainError("Y must be IA")
    n = x.n
    x1 = np.asarray(matrix_to_backend(x.d1, COMPLEX), dtype=complex)
    y2 = np.asarray(matrix_to_backend(y.block(2), COMPLEX), dtype=complex)
    ad_op = _ad_operator(x1, 2)
    ad_eigs = np.linalg.eigvals(ad_op)
    min_dist = min((_nearest_multiple_2pi_i(z) for z in ad_eigs), default=math.inf)
    if min_dist < pole_tol:
        raise KernelSingular(
            f"ad-operator eigenvalue within {pole_tol} of 2 pi i m"
        )
    kernel_mat = phi1_matrix(ad_op)
    z_vec = np.linalg.solve(kernel_mat, y2.flatten(order="F"))
    z_block = z_vec.reshape((n**2, n), order="F")
    return GradedDerivation(n, 3, {1: x1, 2: z_block}, COMPLEX)

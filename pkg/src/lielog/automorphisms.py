"""Filtered algebra automorphisms of the truncated tensor algebra.

An automorphism is stored in semidirect coordinates (A, u): an invertible
degree-1 matrix A together with linear maps u_m: H -> H^(x m) for
2 <= m < k.  It sends the generator with coordinate vector a to
A a + sum_m u_m(A a) and extends multiplicatively.  The GL part acts first:
as a linear map the automorphism is (extension of u) o (tensor lift of A).

Coordinates: degree-m words are indexed lexicographically, matching iterated
Kronecker products with the first letter most significant; u_m is an
n^m x n matrix whose column i holds the coordinates of u_m(x_{i+1}).
"""

from __future__ import annotations

import numpy as np

from . import rational_linalg
from .free_lie import omega_tensor
from .scalars import (
    COMPLEX,
    EXACT,
    DimensionMismatch,
    DomainError,
    default_tol,
    eye_matrix,
    kron_all,
    matrices_close,
    matrix_backend,
    matrix_max_abs,
    matrix_to_backend,
    zeros_matrix,
)
from .tensor_algebra import (
    TruncatedTensor,
    is_grouplike,
    is_primitive,
    mul,
    word_basis,
    word_index_map,
    words_of_degree,
)


def _compositions(m, parts):
    """Ordered compositions of m into `parts` positive integers."""
    if parts == 1:
        yield (m,)
        return
    for first in range(1, m - parts + 2):
        for rest in _compositions(m - first, parts - 1):
            yield (first,) + rest


def matrix_inverse(a, backend):
    if backend == EXACT:
        return rational_linalg.inverse(a)
    return np.linalg.inv(a)


def kron_power(a, j, backend):
    if j == 0:
        return eye_matrix(1, backend)
    out = a
    for _ in range(j - 1):
        out = np.kron(out, a)
    return out


class GradedAut:
    """Filtered automorphism of T/T_k in semidirect (A, u) coordinates."""

    __slots__ = ("n", "k", "backend", "A", "u", "_images", "_word_images")

    def __init__(self, n, k, A, u=None, backend=None):
        self.n = n
        self.k = k
        self.backend = matrix_backend(A) if backend is None else backend
        A = matrix_to_backend(A, self.backend) if matrix_backend(A) != self.backend else A
        if A.shape != (n, n):
            raise DimensionMismatch(f"degree-1 part must be {n}x{n}")
        self.A = A
        blocks = {}
        for m, mat in (u or {}).items():
            m = int(m)
            if not 2 <= m < k:
                raise DomainError(f"u block degree {m} outside 2..{k - 1}")
            if mat.shape != (n**m, n):
                raise DimensionMismatch(f"u_{m} must be {n ** m}x{n}")
            if matrix_max_abs(mat) != 0:
                blocks[m] = matrix_to_backend(mat, self.backend)
        self.u = blocks
        self._images = None
        self._word_images = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, n, k, backend=EXACT):
        return cls(n, k, eye_matrix(n, backend), {}, backend)

    @classmethod
    def splitting(cls, A, k, backend=None):
        """The GL splitting: u = 0, degree-j words transform by A^(x j)."""
        backend = matrix_backend(A) if backend is None else backend
        return cls(A.shape[0], k, A, {}, backend)

    @classmethod
    def from_generator_images(cls, images):
        """Reconstruct (A, u) from generator image tensors.

        The degree-1 parts must form an invertible matrix.
        """
        n, k, backend = images[0].n, images[0].k, images[0].backend
        if len(images) != n:
            raise DomainError(f"expected {n} generator images")
        A = zeros_matrix(n, n, backend)
        for i, img in enumerate(images):
            if img.constant_term != 0:
                raise DomainError("generator image has a nonzero constant term")
            for w, c in img.degree_component(1).coeffs.items():
                A[w[0] - 1, i] = c
        a_inv = matrix_inverse(A, backend)
        u = {}
        for m in range(2, k):
            gm = zeros_matrix(n**m, n, backend)
            nonzero = False
            index = {w: r for r, w in enumerate(words_of_degree(n, m))}
            for i, img in enumerate(images):
                for w, c in img.degree_component(m).coeffs.items():
                    gm[index[w], i] = c
                    nonzero = True
            if nonzero:
                u[m] = gm @ a_inv
        return cls(n, k, A, u, backend)

    # -- basic structure ----------------------------------------------------

    def u_block(self, m):
        blk = self.u.get(m)
        return zeros_matrix(self.n**m, self.n, self.backend) if blk is None else blk

    def _check_compatible(self, other):
        if (self.n, self.k) != (other.n, other.k):
            raise DimensionMismatch("GradedAut (n,k) mismatch")
        if self.backend != other.backend:
            raise DimensionMismatch("GradedAut backend mismatch")

    def generator_images(self):
        """Image tensors of the generators (cached)."""
        if self._images is None:
            images = []
            for i in range(self.n):
                coeffs = {}
                col = self.A[:, i]
                for j in range(self.n):
                    if col[j] != 0:
                        coeffs[(j + 1,)] = col[j]
                for m, mat in self.u.items():
                    vec = mat @ col
                    for r, w in enumerate(words_of_degree(self.n, m)):
                        if vec[r] != 0:
                            coeffs[w] = vec[r]
                images.append(TruncatedTensor(self.n, self.k, coeffs, self.backend))
            self._images = images
        return self._images

    def _word_image(self, word):
        if self._word_images is None:
            self._word_images = {(): TruncatedTensor.unit(self.n, self.k, self.backend)}
        cached = self._word_images.get(word)
        if cached is None:
            prefix = self._word_image(word[:-1])
            cached = mul(prefix, self.generator_images()[word[-1] - 1])
            self._word_images[word] = cached
        return cached

    def apply(self, t):
        """Apply the automorphism to a tensor (multiplicative extension)."""
        if (t.n, t.k) != (self.n, self.k) or t.backend != self.backend:
            raise DimensionMismatch("tensor does not match the automorphism")
        out = TruncatedTensor.zero(self.n, self.k, self.backend)
        for w, c in t.coeffs.items():
            out = out + self._word_image(w).scale(c)
        return out

    def to_matrix(self):
        """Dense matrix of the action on the word basis (degree-graded order)."""
        basis = word_basis(self.n, self.k)
        index = word_index_map(self.n, self.k)
        dim = len(basis)
        mat = zeros_matrix(dim, dim, self.backend)
        for col, w in enumerate(basis):
            img = self._word_image(w)
            for ww, c in img.coeffs.items():
                mat[index[ww], col] = c
        return mat

    # -- group structure ----------------------------------------------------

    def compose(self, other):
        """self o other via the closed-form partition sum on (A, u) data."""
        self._check_compatible(other)
        n, k, backend = self.n, self.k, self.backend
        a_inv = matrix_inverse(self.A, backend)
        c = self.A @ other.A
        w = {}
        ident = eye_matrix(n, backend)
        for m in range(2, k):
            total = self.u_block(m).copy()
            for ell in range(2, m + 1):
                v_ell = other.u.get(ell)
                if v_ell is None:  # v_1 = 0 and absent blocks contribute nothing
                    continue
                conj_v = kron_power(self.A, ell, backend) @ v_ell @ a_inv
                for comp in _compositions(m, ell):
                    if any(i != 1 and i not in self.u for i in comp):
                        # a zero factor kills the Kronecker product
                        continue
                    factors = [ident if i == 1 else self.u[i] for i in comp]
                    total = total + kron_all(factors) @ conj_v
            if matrix_max_abs(total) != 0:
                w[m] = total
        return GradedAut(n, k, c, w, backend)

    def inverse(self):
        """Group inverse, solved degree by degree."""
        n, k, backend = self.n, self.k, self.backend
        a_inv = matrix_inverse(self.A, backend)
        inv = GradedAut(n, k, a_inv, {}, backend)
        for m in range(2, k):
            defect = self.compose(inv).u_block(m)
            if matrix_max_abs(defect) == 0:
                continue
            # the only term of the partition sum containing v_m is A^(x m) v_m A^-1
            correction = (
                kron_power(a_inv, m, backend) @ (-defect) @ self.A
            )
            blocks = dict(inv.u)
            blocks[m] = correction
            inv = GradedAut(n, k, a_inv, blocks, backend)
        return inv

    def ia_decompose(self):
        """Split off the GL part: self = IA part o splitting(A)."""
        ia = self.compose(GradedAut.splitting(matrix_inverse(self.A, self.backend), self.k))
        return ia, self.A

    # -- predicates ----------------------------------------------------------

    def is_ia(self, tol=None):
        tol = default_tol(self.backend) if tol is None else tol
        return matrices_close(self.A, eye_matrix(self.n, self.backend), tol)

    def is_identity(self, tol=None):
        tol = default_tol(self.backend) if tol is None else tol
        if not self.is_ia(tol):
            return False
        return all(matrix_max_abs(b) <= tol for b in self.u.values())

    def is_hopf(self, tol=None):
        """True iff the coproduct is preserved, i.e. generator images primitive."""
        return all(is_primitive(img, tol) for img in self.generator_images())

    def preserves_omega(self, g, tol=None):
        """True iff the symplectic tensor is fixed.

        Membership in the omega-preserving group at level k-1 is certified by
        calling this on a lift at level k (one level above the claim).
        """
        if self.n != 2 * g:
            raise DomainError("preserves_omega requires n = 2g")
        w = omega_tensor(g, self.k, self.backend)
        return self.apply(w).close_to(w, tol)

    # -- conversions / comparison --------------------------------------------

    def to_complex(self):
        if self.backend == COMPLEX:
            return self
        return GradedAut(
            self.n,
            self.k,
            matrix_to_backend(self.A, COMPLEX),
            {m: matrix_to_backend(b, COMPLEX) for m, b in self.u.items()},
            COMPLEX,
        )

    def close_to(self, other, tol=None):
        self._check_compatible(other)
        tol = default_tol(self.backend) if tol is None else tol
        if not matrices_close(self.A, other.A, tol):
            return False
        for m in set(self.u) | set(other.u):
            if not matrices_close(self.u_block(m), other.u_block(m), tol):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, GradedAut):
            return NotImplemented
        if (self.n, self.k, self.backend) != (other.n, other.k, other.backend):
            return False
        return self.close_to(other, 0)

    def __hash__(self):
        return hash((self.n, self.k, self.backend))

    def __repr__(self):
        return (
            f"GradedAut(n={self.n}, k={self.k}, backend={self.backend}, "
            f"u blocks={sorted(self.u)})"
        )


# Functional aliases matching the operation names.

def apply(phi, t):
    return phi.apply(t)


def compose(phi, psi):
    return phi.compose(psi)


def inverse(phi):
    return phi.inverse()


def splitting(A, k, backend=None):
    return GradedAut.splitting(A, k, backend)


def ia_decompose(phi):
    return phi.ia_decompose()


def is_hopf(phi, tol=None):
    return phi.is_hopf(tol)


def preserves_omega(phi, g, tol=None):
    return phi.preserves_omega(g, tol)


def gl_action_on_hom(A, f, j, backend=None):
    """(A f)(v) = A^(x j) f(A^-1 v) on Hom(H, H^(x j)) matrices."""
    backend = matrix_backend(A) if backend is None else backend
    return kron_power(A, j, backend) @ f @ matrix_inverse(A, backend)


def transporter(theta, theta_prime, check_grouplike=True):
    """The unique Hopf automorphism U with U o theta = theta'.

    theta and theta_prime expose .images (generator image tensors), .n, .k.
    Solved degree by degree; uniqueness comes from the invertibility of the
    degree-1 parts.
    """
    images = list(theta.images)
    images_p = list(theta_prime.images)
    n, k, backend = images[0].n, images[0].k, images[0].backend
    if (theta_prime.images[0].n, theta_prime.images[0].k) != (n, k):
        raise DimensionMismatch("expansions do not share (n, k)")
    if check_grouplike:
        for img in images + images_p:
            if not is_grouplike(img):
                raise DomainError("transporter requires group-like expansions")

    def base_matrix(imgs):
        m = zeros_matrix(n, n, backend)
        for i, img in enumerate(imgs):
            for w, c in img.degree_component(1).coeffs.items():
                m[w[0] - 1, i] = c
        return m

    m0 = base_matrix(images)
    m1 = base_matrix(images_p)
    b = m1 @ matrix_inverse(m0, backend)
    m1_inv = matrix_inverse(m1, backend)
    current = GradedAut(n, k, b, {}, backend)
    for m in range(2, k):
        delta = zeros_matrix(n**m, n, backend)
        nonzero = False
        index = {w: r for r, w in enumerate(words_of_degree(n, m))}
        for i in range(n):
            defect = (images_p[i] - current.apply(images[i])).degree_component(m)
            for w, c in defect.coeffs.items():
                delta[index[w], i] = c
                nonzero = True
        if not nonzero:
            continue
        blocks = dict(current.u)
        blocks[m] = delta @ m1_inv
        current = GradedAut(n, k, b, blocks, backend)
    return current

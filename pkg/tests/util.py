"""Shared random samplers for the test suite.

Exact-backend samples use small integer (Fraction) coefficients so that
identities can be asserted with equality rather than tolerance.
"""

import itertools
import random
from fractions import Fraction

import numpy as np

from lielog.automorphisms import GradedAut
from lielog.derivations import GradedDerivation
from lielog.free_lie import LiePoly, lyndon_basis, lyndon_bracket_tensor
from lielog.scalars import EXACT, eye_matrix, zeros_matrix
from lielog.tensor_algebra import TruncatedTensor, words_of_degree


def random_tensor(rng, n, k, backend=EXACT, density=0.4, zero_constant=False,
                  lo=-3, hi=3):
    coeffs = {}
    for m in range(0 if not zero_constant else 1, k):
        for w in itertools.product(range(1, n + 1), repeat=m):
            if rng.random() < density:
                if backend == EXACT:
                    c = Fraction(rng.randint(lo, hi))
                else:
                    c = complex(rng.uniform(lo, hi), rng.uniform(lo, hi))
                if c != 0:
                    coeffs[tuple(w)] = c
    return TruncatedTensor(n, k, coeffs, backend)


def random_lie_poly(rng, n, k, density=0.6, lo=-3, hi=3):
    coeffs = {}
    for m, words in lyndon_basis(n, k).items():
        for w in words:
            if rng.random() < density:
                c = Fraction(rng.randint(lo, hi))
                if c != 0:
                    coeffs[w] = c
    return LiePoly(n, k, coeffs)


def random_primitive_block(rng, n, k, m, terms=3, lo=-2, hi=2):
    """An n^m x n exact matrix whose columns are primitive degree-m tensors."""
    words = lyndon_basis(n, k)[m]
    index = {w: r for r, w in enumerate(words_of_degree(n, m))}
    mat = zeros_matrix(n**m, n, EXACT)
    nonzero = False
    for col in range(n):
        for _ in range(terms):
            if rng.random() < 0.7:
                w = rng.choice(words)
                c = Fraction(rng.randint(lo, hi))
                if c:
                    t = lyndon_bracket_tensor(w, n, k, EXACT).scale(c)
                    for ww, cc in t.coeffs.items():
                        mat[index[ww], col] += cc
                    nonzero = True
    return mat if nonzero else None


def random_block(rng, n, k, m, density=0.5, lo=-2, hi=2):
    """An arbitrary exact n^m x n block (not necessarily primitive columns)."""
    mat = zeros_matrix(n**m, n, EXACT)
    nonzero = False
    for r in range(n**m):
        for c in range(n):
            if rng.random() < density:
                v = Fraction(rng.randint(lo, hi))
                if v:
                    mat[r, c] = v
                    nonzero = True
    return mat if nonzero else None


def random_ia_hopf_aut(rng, n, k, terms=3):
    """IA automorphism with primitive u-columns (hence a Hopf automorphism)."""
    blocks = {}
    for m in range(2, k):
        mat = random_primitive_block(rng, n, k, m, terms=terms)
        if mat is not None:
            blocks[m] = mat
    return GradedAut(n, k, eye_matrix(n, EXACT), blocks)


def random_ia_aut(rng, n, k, density=0.5):
    """IA automorphism with arbitrary (generally non-Hopf) blocks."""
    blocks = {}
    for m in range(2, k):
        mat = random_block(rng, n, k, m, density=density)
        if mat is not None:
            blocks[m] = mat
    return GradedAut(n, k, eye_matrix(n, EXACT), blocks)


def random_ia_derivation(rng, n, k, density=0.5, hopf=False):
    blocks = {}
    for m in range(2, k):
        mat = (
            random_primitive_block(rng, n, k, m)
            if hopf
            else random_block(rng, n, k, m, density=density)
        )
        if mat is not None:
            blocks[m] = mat
    return GradedDerivation(n, k, blocks)


def random_invertible_exact(rng, n, lo=-3, hi=3):
    """Random exact invertible n x n matrix (unimodular-ish by retries)."""
    while True:
        mat = zeros_matrix(n, n, EXACT)
        for i in range(n):
            for j in range(n):
                mat[i, j] = Fraction(rng.randint(lo, hi))
        arr = np.array([[float(x) for x in row] for row in mat])
        if abs(np.linalg.det(arr)) > 0.5:
            return mat


def seeded(seed=0):
    return random.Random(seed)

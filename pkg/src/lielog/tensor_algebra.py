"""The truncated free associative algebra on n noncommuting generators.

Elements live in the quotient by the ideal of words of length >= k, and are
stored as sparse coefficient maps keyed by words (tuples of generator indices
in 1..n).  The coalgebra structure is the one in which every generator is
primitive, so the coproduct of a word is the sum over all ways of splitting
its letter positions into two complementary (order-preserving) subwords.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .scalars import (
    COMPLEX,
    DEFAULT_TOL,
    EXACT,
    DimensionMismatch,
    DomainError,
    check_backend,
    default_tol,
    one,
    same_backend,
    to_scalar,
    zero,
)

# A word is a tuple of generator indices; () is the empty word (degree 0).


def validate_word(word, n, k):
    if len(word) >= k:
        raise DomainError(f"word {word} has length >= truncation depth {k}")
    for letter in word:
        if not 1 <= letter <= n:
            raise DomainError(f"letter {letter} outside 1..{n}")
    return tuple(word)


def words_of_degree(n, m):
    """All words of length m over 1..n in lexicographic order."""
    return [tuple(w) for w in itertools.product(range(1, n + 1), repeat=m)]


def word_basis(n, k):
    """All words of length < k, ordered by (degree, lexicographic)."""
    out = []
    for m in range(k):
        out.extend(words_of_degree(n, m))
    return out


def word_index_map(n, k):
    return {w: i for i, w in enumerate(word_basis(n, k))}


def basis_dimension(n, k):
    return sum(n**m for m in range(k))


class TruncatedTensor:
    """Element of the rank-n free associative algebra truncated at degree k."""

    __slots__ = ("n", "k", "backend", "coeffs")

    def __init__(self, n, k, coeffs=None, backend=EXACT):
        if k < 2:
            raise DomainError("truncation depth k must be >= 2")
        self.n = n
        self.k = k
        self.backend = check_backend(backend)
        data = {}
        if coeffs:
            for word, value in coeffs.items():
                word = validate_word(word, n, k)
                value = to_scalar(value, backend)
                if value != 0:
                    data[word] = value
        self.coeffs = data

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n, k, backend=EXACT):
        return cls(n, k, {}, backend)

    @classmethod
    def unit(cls, n, k, backend=EXACT):
        return cls(n, k, {(): one(backend)}, backend)

    @classmethod
    def generator(cls, n, k, i, backend=EXACT):
        if not 1 <= i <= n:
            raise DomainError(f"generator index {i} outside 1..{n}")
        return cls(n, k, {(i,): one(backend)}, backend)

    # -- basic queries ------------------------------------------------------

    def coefficient(self, word):
        return self.coeffs.get(tuple(word), zero(self.backend))

    @property
    def constant_term(self):
        return self.coeffs.get((), zero(self.backend))

    def degree_component(self, m):
        return TruncatedTensor(
            self.n,
            self.k,
            {w: c for w, c in self.coeffs.items() if len(w) == m},
            self.backend,
        )

    def max_abs(self):
        if not self.coeffs:
            return 0
        return max(abs(c) for c in self.coeffs.values())

    def is_zero(self, tol=None):
        tol = default_tol(self.backend) if tol is None else tol
        if tol == 0:
            return not self.coeffs
        return self.max_abs() <= tol

    # -- ring operations ----------------------------------------------------

    def _check_compatible(self, other):
        if (self.n, self.k) != (other.n, other.k):
            raise DimensionMismatch(
                f"(n,k) mismatch: ({self.n},{self.k}) vs ({other.n},{other.k})"
            )
        same_backend(self, other)

    def __add__(self, other):
        self._check_compatible(other)
        data = dict(self.coeffs)
        for w, c in other.coeffs.items():
            s = data.get(w)
            s = c if s is None else s + c
            if s == 0:
                data.pop(w, None)
            else:
                data[w] = s
        out = TruncatedTensor.zero(self.n, self.k, self.backend)
        out.coeffs = data
        return out

    def __neg__(self):
        out = TruncatedTensor.zero(self.n, self.k, self.backend)
        out.coeffs = {w: -c for w, c in self.coeffs.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        value = to_scalar(scalar, self.backend)
        out = TruncatedTensor.zero(self.n, self.k, self.backend)
        if value != 0:
            out.coeffs = {w: value * c for w, c in self.coeffs.items()}
        return out

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def __mul__(self, other):
        if isinstance(other, TruncatedTensor):
            return mul(self, other)
        return self.scale(other)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncatedTensor):
            return NotImplemented
        return (
            (self.n, self.k, self.backend) == (other.n, other.k, other.backend)
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.n, self.k, self.backend, frozenset(self.coeffs.items())))

    def close_to(self, other, tol=None):
        self._check_compatible(other)
        return (self - other).is_zero(tol)

    # -- conversions --------------------------------------------------------

    def to_complex(self):
        if self.backend == COMPLEX:
            return self
        return TruncatedTensor(
            self.n, self.k, {w: complex(c) for w, c in self.coeffs.items()}, COMPLEX
        )

    def to_vector(self, index=None):
        """Dense coefficient vector over word_basis(n, k) (a plain list)."""
        index = word_index_map(self.n, self.k) if index is None else index
        vec = [zero(self.backend)] * len(index)
        for w, c in self.coeffs.items():
            vec[index[w]] = c
        return vec

    @classmethod
    def from_vector(cls, n, k, vec, backend):
        basis = word_basis(n, k)
        return cls(n, k, {w: v for w, v in zip(basis, vec)}, backend)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for w in sorted(self.coeffs, key=lambda w: (len(w), w)):
            c = self.coeffs[w]
            mono = "*".join(f"X{i}" for i in w) if w else "1"
            parts.append(f"({c})*{mono}" if w else f"({c})")
        return " + ".join(parts)


def mul(a, b):
    """Concatenation product; words of length >= k are discarded."""
    a._check_compatible(b)
    k = a.k
    data = {}
    for wa, ca in a.coeffs.items():
        for wb, cb in b.coeffs.items():
            if len(wa) + len(wb) >= k:
                continue
            w = wa + wb
            s = data.get(w)
            s = ca * cb if s is None else s + ca * cb
            data[w] = s
    out = TruncatedTensor.zero(a.n, a.k, a.backend)
    out.coeffs = {w: c for w, c in data.items() if c != 0}
    return out


class TensorSquare:
    """Element of the tensor square of T/T_k, truncated by total degree.

    Sparse map (word, word) -> scalar with len(w1) + len(w2) < k.  The total
    degree truncation (rather than per-factor truncation) is forced by the
    coproduct: splitting a discarded word of length >= k can produce pairs
    whose factors are both short, so the coproduct only descends to the
    quotient in which those pairs are killed.  With this convention the
    exponential of a primitive element is group-like at every finite depth.
    """

    __slots__ = ("n", "k", "backend", "coeffs")

    def __init__(self, n, k, coeffs=None, backend=EXACT):
        self.n = n
        self.k = k
        self.backend = check_backend(backend)
        data = {}
        if coeffs:
            for (w1, w2), value in coeffs.items():
                w1 = validate_word(w1, n, k)
                w2 = validate_word(w2, n, k)
                if len(w1) + len(w2) >= k:
                    raise DomainError(
                        f"pair {(w1, w2)} has total degree >= truncation depth {k}"
                    )
                value = to_scalar(value, backend)
                if value != 0:
                    data[(w1, w2)] = value
        self.coeffs = data

    @classmethod
    def zero(cls, n, k, backend=EXACT):
        return cls(n, k, {}, backend)

    def _check_compatible(self, other):
        if (self.n, self.k) != (other.n, other.k):
            raise DimensionMismatch("TensorSquare (n,k) mismatch")
        same_backend(self, other)

    def __add__(self, other):
        self._check_compatible(other)
        data = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = data.get(key)
            s = c if s is None else s + c
            if s == 0:
                data.pop(key, None)
            else:
                data[key] = s
        out = TensorSquare.zero(self.n, self.k, self.backend)
        out.coeffs = data
        return out

    def __neg__(self):
        out = TensorSquare.zero(self.n, self.k, self.backend)
        out.coeffs = {key: -c for key, c in self.coeffs.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Componentwise product (a (x) b)(c (x) d) = ac (x) bd, truncated."""
        self._check_compatible(other)
        k = self.k
        data = {}
        for (a1, a2), ca in self.coeffs.items():
            for (b1, b2), cb in other.coeffs.items():
                if len(a1) + len(b1) + len(a2) + len(b2) >= k:
                    continue
                key = (a1 + b1, a2 + b2)
                s = data.get(key)
                s = ca * cb if s is None else s + ca * cb
                data[key] = s
        out = TensorSquare.zero(self.n, self.k, self.backend)
        out.coeffs = {key: c for key, c in data.items() if c != 0}
        return out

    def max_abs(self):
        if not self.coeffs:
            return 0
        return max(abs(c) for c in self.coeffs.values())

    def is_zero(self, tol=None):
        tol = default_tol(self.backend) if tol is None else tol
        if tol == 0:
            return not self.coeffs
        return self.max_abs() <= tol

    def __eq__(self, other):
        if not isinstance(other, TensorSquare):
            return NotImplemented
        return (
            (self.n, self.k, self.backend) == (other.n, other.k, other.backend)
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.n, self.k, self.backend, frozenset(self.coeffs.items())))


def outer(a, b):
    """a (x) b as a TensorSquare (pairs of total degree >= k are discarded)."""
    a._check_compatible(b)
    data = {}
    for wa, ca in a.coeffs.items():
        for wb, cb in b.coeffs.items():
            if len(wa) + len(wb) >= a.k:
                continue
            data[(wa, wb)] = ca * cb
    out = TensorSquare.zero(a.n, a.k, a.backend)
    out.coeffs = data
    return out


def coproduct(a):
    """Algebra-map extension of X_i |-> 1 (x) X_i + X_i (x) 1.

    On a word the coproduct is the sum over all subsets S of letter positions
    of (subword on S) (x) (subword on the complement).
    """
    out = TensorSquare.zero(a.n, a.k, a.backend)
    data = {}
    for word, c in a.coeffs.items():
        m = len(word)
        for r in range(m + 1):
            for positions in itertools.combinations(range(m), r):
                left = tuple(word[i] for i in positions)
                right = tuple(word[i] for i in range(m) if i not in positions)
                key = (left, right)
                s = data.get(key)
                s = c if s is None else s + c
                data[key] = s
    out.coeffs = {key: c for key, c in data.items() if c != 0}
    return out


def is_primitive(a, tol=None):
    """True iff coproduct(a) = 1 (x) a + a (x) 1 within tol."""
    unit = TruncatedTensor.unit(a.n, a.k, a.backend)
    defect = coproduct(a) - outer(unit, a) - outer(a, unit)
    return defect.is_zero(tol)


def is_grouplike(u, tol=None):
    """True iff coproduct(u) = u (x) u within tol.  Requires constant term 1."""
    tol_c = default_tol(u.backend) if tol is None else tol
    if abs(u.constant_term - one(u.backend)) > tol_c:
        raise DomainError("group-like test requires constant term 1")
    defect = coproduct(u) - outer(u, u)
    return defect.is_zero(tol)


def tensor_exp(a):
    """exp(a) = sum a^m / m!  Requires zero constant term; the sum is finite."""
    if a.constant_term != 0:
        raise DomainError("tensor_exp requires zero constant term")
    result = TruncatedTensor.unit(a.n, a.k, a.backend)
    power = TruncatedTensor.unit(a.n, a.k, a.backend)
    for m in range(1, a.k):
        power = mul(power, a)
        if power.is_zero(0):
            break
        if a.backend == EXACT:
            result = result + power.scale(Fraction(1, math.factorial(m)))
        else:
            result = result + power.scale(1.0 / math.factorial(m))
    return result


def tensor_log(u):
    """log(u) = sum (-1)^(m-1) (u-1)^m / m.  Requires constant term 1."""
    c = u.constant_term
    if u.backend == EXACT:
        if c != 1:
            raise DomainError("tensor_log requires constant term exactly 1")
    elif abs(c - 1) > DEFAULT_TOL:
        raise DomainError("tensor_log requires constant term 1 within tolerance")
    r = u - TruncatedTensor.unit(u.n, u.k, u.backend)
    result = TruncatedTensor.zero(u.n, u.k, u.backend)
    power = TruncatedTensor.unit(u.n, u.k, u.backend)
    for m in range(1, u.k):
        power = mul(power, r)
        if power.is_zero(0):
            break
        coeff = Fraction((-1) ** (m - 1), m) if u.backend == EXACT else ((-1.0) ** (m - 1)) / m
        result = result + power.scale(coeff)
    return result


def tensor_inverse(u):
    """Inverse in the unit group: requires an invertible constant term.

    Writes u = c(1 + r) with r in the augmentation ideal and sums the finite
    geometric series (1 + r)^-1 = sum (-r)^m.
    """
    c = u.constant_term
    if c == 0:
        raise DomainError("tensor_inverse requires a nonzero constant term")
    cinv = (Fraction(1) / c) if u.backend == EXACT else (1.0 / c)
    neg_r = TruncatedTensor.unit(u.n, u.k, u.backend) - u.scale(cinv)
    result = TruncatedTensor.unit(u.n, u.k, u.backend)
    power = TruncatedTensor.unit(u.n, u.k, u.backend)
    for _ in range(1, u.k):
        power = mul(power, neg_r)
        if power.is_zero(0):
            break
        result = result + power
    return result.scale(cinv)

"""Tensor products of highest-weight gl(2)-modules in the monomial model.

The s-th factor with highest-weight parameter m_s is realized on C[x^(s)];
a product of Verma modules becomes C[x^(1),...,x^(n)] via
e21^{j_1} v x ... x e21^{j_n} v  |->  (x^(1))^{j_1} ... (x^(n))^{j_n}.
The action per factor is

    e12 = -x d^2/dx^2 + m d/dx,   e21 = x,
    e11 = -2x d/dx + m,           e22 = 0,

so weights are tracked through e11 eigenvalues and total degree: the weight
space of e11-eigenvalue (sum m_s - 2k) is the span of monomials of total
degree k, and "degree l" encodes the second weight coordinate l.

Monomial bases are ordered graded-reverse-lexicographically, fixed globally,
so every matrix here is deterministic across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numcore import (
    as_exact,
    as_float,
    exact_array,
    identity,
    is_exact_scalar,
    kernel_basis,
    rref,
    solve_linear,
)

__all__ = [
    "NonSeparatingError",
    "ProblemInstance",
    "WeightVector",
    "ShQuotient",
    "weight_space_basis",
    "weight_space_dim",
    "generator_matrix",
    "degree_diagonal",
    "singular_basis",
    "singular_matrix",
    "shapovalov_gram",
    "sh_quotient",
]


class NonSeparatingError(ValueError):
    """Weight data violates: sum(m) - 2l + 1 + i != 0 for i = 1..l."""


def _check_z(z):
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            if z[i] == z[j]:
                raise ValueError(f"marked points must be distinct, z[{i}] == z[{j}]")


@dataclass(frozen=True)
class ProblemInstance:
    """Weight data m, level l, and marked points z.

    z entries are either all exact rationals (ints, Fractions, 'p/q'
    strings) or all floats/complex; the choice fixes the scalar domain of
    every matrix built from the instance.
    """

    m: tuple
    l: int
    z: tuple

    def __init__(self, m, l, z, require_separating=True):
        m = tuple(int(v) for v in m)
        if any(v < 0 for v in m):
            raise ValueError("highest-weight parameters m_s must be >= 0")
        l = int(l)
        if l < 0:
            raise ValueError("l must be >= 0")
        if len(z) != len(m):
            raise ValueError("z and m must have the same length")
        if all(is_exact_scalar(v) or isinstance(v, str) for v in z):
            z = tuple(as_exact(v) for v in z)
        else:
            z = tuple(complex(v) for v in z)
        _check_z(z)
        if require_separating:
            for i in range(1, l + 1):
                if sum(m) - 2 * l + 1 + i == 0:
                    raise NonSeparatingError(
                        f"sum(m) - 2l + 1 + {i} = 0: the pair (m, l) is not separating"
                    )
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def ltilde(self) -> int:
        return sum(self.m) + 1 - self.l

    @property
    def exact(self) -> bool:
        return bool(self.z) and isinstance(self.z[0], Fraction)

    @property
    def dominant(self) -> bool:
        return sum(self.m) - 2 * self.l >= 0

    def to_float(self) -> "ProblemInstance":
        return ProblemInstance(self.m, self.l, tuple(as_float(v) for v in self.z),
                               require_separating=False)


def weight_space_dim(n: int, k: int) -> int:
    if k < 0:
        return 0
    return math.comb(k + n - 1, n - 1)


def weight_space_basis(inst: ProblemInstance, k: int):
    """Multi-indices of total degree k, graded-reverse-lexicographic order."""
    if k < 0:
        return []
    n = inst.n
    idx = [tuple(c) for c in _compositions(k, n)]
    return sorted(idx, key=lambda j: j[::-1])


def _compositions(k, n):
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(k - first, n - 1):
            yield (first,) + rest


def _basis_index(inst, k):
    basis = weight_space_basis(inst, k)
    return basis, {j: i for i, j in enumerate(basis)}


def generator_matrix(inst: ProblemInstance, a: int, b: int, s: int, k: int) -> np.ndarray:
    """Exact matrix of e_ab^{(s)} from level k to its target level.

    (1,2) lowers the level by one, (2,1) raises it, diagonal generators
    preserve it; e22 is the zero operator in this model.  Rows are indexed
    by the target-level basis, columns by the level-k basis.
    """
    if (a, b) not in {(1, 1), (1, 2), (2, 1), (2, 2)}:
        raise ValueError("generator indices must be in {1,2}")
    if not 0 <= s < inst.n:
        raise ValueError("factor index out of range")
    ms = inst.m[s]
    src, _ = _basis_index(inst, k)
    if (a, b) == (1, 2):
        tgt, tpos = _basis_index(inst, k - 1)
        M = exact_array([[0] * len(src) for _ in range(len(tgt))]) if tgt else \
            np.empty((0, len(src)), dtype=object)
        for c, j in enumerate(src):
            if j[s] == 0:
                continue
            jj = j[:s] + (j[s] - 1,) + j[s + 1:]
            M[tpos[jj], c] = Fraction(j[s] * (ms - j[s] + 1))
        return M
    if (a, b) == (2, 1):
        tgt, tpos = _basis_index(inst, k + 1)
        M = exact_array([[0] * len(src) for _ in range(len(tgt))])
        for c, j in enumerate(src):
            jj = j[:s] + (j[s] + 1,) + j[s + 1:]
            M[tpos[jj], c] = Fraction(1)
        return M
    M = exact_array([[0] * len(src) for _ in range(len(src))])
    if (a, b) == (1, 1):
        for c, j in enumerate(src):
            M[c, c] = Fraction(ms - 2 * j[s])
    return M


def degree_diagonal(inst: ProblemInstance, s: int, k: int) -> np.ndarray:
    """Diagonal matrix of the degree in factor s on the level-k basis.

    This is the untwisted action of e22^{(s)} (equivalently m_s minus the
    untwisted e11^{(s)}); the model above stores weights in shifted form,
    and operators quadratic in the diagonal generators need this matrix.
    """
    src, _ = _basis_index(inst, k)
    M = exact_array([[0] * len(src) for _ in range(len(src))])
    for c, j in enumerate(src):
        M[c, c] = Fraction(j[s])
    return M


@dataclass(frozen=True)
class WeightVector:
    """Element of the level-k weight space as a monomial-coefficient map."""

    coeffs: tuple          # ((multi_index, coefficient), ...)
    k: int

    @staticmethod
    def from_dict(d: dict, k: int) -> "WeightVector":
        items = tuple(sorted(((j, c) for j, c in d.items() if c),
                             key=lambda t: t[0][::-1]))
        for j, _ in items:
            if sum(j) != k:
                raise ValueError("multi-index level mismatch")
        return WeightVector(items, k)

    @staticmethod
    def from_array(v, inst: ProblemInstance, k: int) -> "WeightVector":
        basis = weight_space_basis(inst, k)
        return WeightVector.from_dict({j: v[i] for i, j in enumerate(basis)}, k)

    def to_array(self, inst: ProblemInstance) -> np.ndarray:
        basis, pos = _basis_index(inst, self.k)
        exact = all(is_exact_scalar(c) or isinstance(c, Fraction) for _, c in self.coeffs)
        if exact:
            v = np.empty(len(basis), dtype=object)
            v[...] = Fraction(0)
        else:
            v = np.zeros(len(basis), dtype=complex)
        for j, c in self.coeffs:
            v[pos[j]] = c
        return v

    def is_zero(self) -> bool:
        return not self.coeffs


def singular_matrix(inst: ProblemInstance) -> np.ndarray:
    """Columns spanning ker E12 inside the level-l space (exact)."""
    l = inst.l
    E12 = sum(generator_matrix(inst, 1, 2, s, l) for s in range(inst.n))
    cols = kernel_basis(E12)
    d = weight_space_dim(inst.n, l)
    S = np.empty((d, len(cols)), dtype=object)
    for j, v in enumerate(cols):
        S[:, j] = v
    return S


def singular_basis(inst: ProblemInstance):
    """Basis of the singular subspace at level l, as WeightVectors."""
    S = singular_matrix(inst)
    return [WeightVector.from_array(S[:, j], inst, inst.l) for j in range(S.shape[1])]


def shapovalov_gram(inst: ProblemInstance, k: int) -> np.ndarray:
    """Gram matrix of the tensor contravariant form on the level-k basis.

    Diagonal in the monomial basis; the entry at multi-index j is
    prod_s [ j_s! * prod_{r=0}^{j_s-1} (m_s - r) ], which is the unique
    normalization making e12 and e21 mutually adjoint with <v, v> = 1
    on the highest-weight vector.
    """
    basis = weight_space_basis(inst, k)
    G = exact_array([[0] * len(basis) for _ in range(len(basis))])
    for i, j in enumerate(basis):
        val = Fraction(1)
        for s, js in enumerate(j):
            val *= math.factorial(js)
            for r in range(js):
                val *= inst.m[s] - r
        G[i, i] = val
    return G


@dataclass(frozen=True)
class ShQuotient:
    """Quotient of the singular subspace by the radical of the Gram form.

    sh is the projection in singular-basis coordinates (dim_L x dim_SingM);
    lift is a right inverse embedding the quotient back (sh @ lift = I);
    radical columns span ker(sh).
    """

    basis: tuple      # WeightVectors lifting the quotient basis
    sh: np.ndarray
    lift: np.ndarray
    radical: np.ndarray
    gram_sing: np.ndarray

    @property
    def dim(self) -> int:
        return self.sh.shape[0]


def sh_quotient(inst: ProblemInstance) -> ShQuotient:
    S = singular_matrix(inst)
    dS = S.shape[1]
    G = shapovalov_gram(inst, inst.l)
    R = S.T @ G @ S
    ker = kernel_basis(R)
    _, pivots = rref(R)
    q = len(pivots)
    lift = np.empty((dS, q), dtype=object)
    lift[...] = Fraction(0)
    for c, p in enumerate(pivots):
        lift[p, c] = Fraction(1)
    radical = np.empty((dS, len(ker)), dtype=object)
    for c, v in enumerate(ker):
        radical[:, c] = v
    B = np.hstack([lift, radical]) if dS else np.empty((0, 0), dtype=object)
    if dS:
        Binv = solve_linear(B, identity(dS))
        P = Binv[:q, :]
    else:
        P = np.empty((0, 0), dtype=object)
    vecs = tuple(WeightVector.from_array(S @ lift[:, c], inst, inst.l) for c in range(q))
    return ShQuotient(basis=vecs, sh=P, lift=lift, radical=radical, gram_sing=R)

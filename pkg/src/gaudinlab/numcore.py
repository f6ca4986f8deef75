"""Scalar domains, dense univariate polynomials, and linear-algebra kernels.

Two scalar domains are supported and never mixed silently:

* exact      -- ``fractions.Fraction`` entries, numpy arrays of dtype object;
* float      -- ``complex`` entries, numpy arrays of dtype complex128.

Conversion between domains is always explicit (``to_float_array``,
``to_float_scalar``).  Exact mode is the default for constructions; the
float domain is entered for eigen-decomposition and root-finding only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral

import numpy as np

__all__ = [
    "DomainError",
    "SingularMatrixError",
    "InconsistentSystemError",
    "Tolerances",
    "Dual",
    "UniPoly",
    "as_exact",
    "as_float",
    "is_exact_array",
    "exact_array",
    "float_array",
    "to_float_array",
    "identity",
    "zeros_like_domain",
    "max_abs",
    "rref",
    "rank_of",
    "kernel_basis",
    "solve_linear",
    "solve_consistent",
    "wronskian",
]


class DomainError(TypeError):
    """Raised when exact and float scalars are mixed implicitly."""


class SingularMatrixError(ValueError):
    """Square solve hit a rank-deficient matrix; carries the rank defect."""

    def __init__(self, defect, msg=None):
        self.defect = defect
        super().__init__(msg or f"singular matrix (rank defect {defect})")


class InconsistentSystemError(ValueError):
    """An overdetermined linear system admitted no solution."""


@dataclass(frozen=True)
class Tolerances:
    """Default numeric gates; every field can be overridden per call."""

    svd_rel: float = 1e-10      # relative singular-value cutoff for rank/kernel
    cluster: float = 1e-7       # eigenvalue clustering, unit max-norm scale
    residual: float = 1e-8      # scheme / eigenvector residual gate
    consistency: float = 1e-10  # coordinate-model agreement gate


DEFAULT_TOL = Tolerances()


# ---------------------------------------------------------------------------
# scalars

def as_exact(x):
    """Coerce int / Fraction / 'p/q' string to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise DomainError(f"cannot coerce {x!r} to an exact rational")


def as_float(x):
    if isinstance(x, Fraction):
        return complex(x.numerator) / complex(x.denominator)
    return complex(x)


def is_exact_scalar(x) -> bool:
    return isinstance(x, (Fraction, Integral)) and not isinstance(x, bool)


def scalar_zero(exact: bool):
    return Fraction(0) if exact else 0j


def scalar_one(exact: bool):
    return Fraction(1) if exact else 1 + 0j


def exact_sqrt(x: Fraction) -> Fraction:
    """Square root of a nonnegative rational that is a perfect square."""
    if x < 0:
        raise ValueError("negative radicand")
    a = math.isqrt(x.numerator)
    b = math.isqrt(x.denominator)
    if a * a != x.numerator or b * b != x.denominator:
        raise ValueError(f"{x} is not a perfect rational square")
    return Fraction(a, b)


# ---------------------------------------------------------------------------
# dual numbers (forward derivative through exact rational pipelines)

class Dual:
    """a + b*eps with eps^2 = 0; works over Fraction or complex parts."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = a
        self.b = b

    @staticmethod
    def lift(x):
        return x if isinstance(x, Dual) else Dual(x, 0)

    def __add__(self, o):
        o = Dual.lift(o)
        return Dual(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __sub__(self, o):
        o = Dual.lift(o)
        return Dual(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return Dual.lift(o) - self

    def __mul__(self, o):
        o = Dual.lift(o)
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = Dual.lift(o)
        return Dual(self.a / o.a, (self.b * o.a - self.a * o.b) / (o.a * o.a))

    def __rtruediv__(self, o):
        return Dual.lift(o) / self

    def __eq__(self, o):
        o = Dual.lift(o)
        return self.a == o.a and self.b == o.b

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"Dual({self.a!r}, {self.b!r})"


# ---------------------------------------------------------------------------
# dense univariate polynomials

class UniPoly:
    """Dense univariate polynomial, coefficients in ascending degree.

    Coefficients live in one scalar domain (Fraction, complex, or Dual);
    trailing zeros are trimmed so the leading coefficient of a nonzero
    polynomial is nonzero.  Instances are immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors
    @staticmethod
    def zero():
        return UniPoly(())

    @staticmethod
    def const(c):
        return UniPoly((c,))

    @staticmethod
    def x(exact=True):
        one = scalar_one(exact)
        return UniPoly((one * 0, one))

    @staticmethod
    def monomial(k, c):
        return UniPoly((0 * c,) * k + (c,))

    @staticmethod
    def from_roots(roots, exact=True):
        p = UniPoly.const(scalar_one(exact))
        for r in roots:
            p = p * UniPoly((-r, scalar_one(exact)))
        return p

    @staticmethod
    def from_descending(coeffs):
        return UniPoly(tuple(reversed(list(coeffs))))

    # -- queries
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    # -- arithmetic
    def __add__(self, o):
        if not isinstance(o, UniPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(tuple(self[k] + o[k] for k in range(n)))

    def __sub__(self, o):
        if not isinstance(o, UniPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(tuple(self[k] - o[k] for k in range(n)))

    def __neg__(self):
        return UniPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, o):
        if isinstance(o, UniPoly):
            if self.is_zero() or o.is_zero():
                return UniPoly.zero()
            out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(o.coeffs):
                    out[i + j] = out[i + j] + a * b
            return UniPoly(tuple(out))
        return UniPoly(tuple(c * o for c in self.coeffs))

    def __rmul__(self, o):
        return self * o

    def deriv(self) -> "UniPoly":
        return UniPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, k: int) -> "UniPoly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return UniPoly((0 * self.coeffs[0],) * k + self.coeffs)

    def divmod(self, d: "UniPoly"):
        """Euclidean division; exact over Fractions, naive over floats."""
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = d.degree
        lead = d.coeffs[-1]
        if len(rem) - 1 < dd:
            return UniPoly.zero(), self
        q = [0] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k] / lead
            q[k - dd] = c
            if c:
                for j in range(dd + 1):
                    rem[k - dd + j] = rem[k - dd + j] - c * d.coeffs[j]
        return UniPoly(tuple(q)), UniPoly(tuple(rem[:dd]))

    def max_abs(self) -> float:
        if not self.coeffs:
            return 0.0
        return max(abs(as_float(c)) for c in self.coeffs)

    def to_float(self) -> "UniPoly":
        return UniPoly(tuple(as_float(c) for c in self.coeffs))

    def __eq__(self, o):
        return isinstance(o, UniPoly) and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c})*x^{k}" if k else f"({c})")
        return "UniPoly(" + " + ".join(terms) + ")"


def wronskian(f: UniPoly, g: UniPoly) -> UniPoly:
    """f'g - fg'."""
    return f.deriv() * g - f * g.deriv()


# ---------------------------------------------------------------------------
# matrices: numpy arrays, dtype object (exact) or complex128 (float)

def is_exact_array(A: np.ndarray) -> bool:
    return A.dtype == object


def exact_array(rows) -> np.ndarray:
    A = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            A[i, j] = as_exact(v)
    return A


def float_array(rows) -> np.ndarray:
    return np.array(rows, dtype=complex)


def to_float_array(A: np.ndarray) -> np.ndarray:
    """Explicit exact -> float conversion."""
    if not is_exact_array(A):
        return np.asarray(A, dtype=complex)
    out = np.zeros(A.shape, dtype=complex)
    flat = out.reshape(-1)
    for i, v in enumerate(A.reshape(-1)):
        flat[i] = as_float(v)
    return out


def identity(n: int, exact: bool = True) -> np.ndarray:
    if not exact:
        return np.eye(n, dtype=complex)
    A = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            A[i, j] = Fraction(i == j)
    return A


def zeros_like_domain(shape, exact: bool) -> np.ndarray:
    if exact:
        A = np.empty(shape, dtype=object)
        A[...] = Fraction(0)
        return A
    return np.zeros(shape, dtype=complex)


def max_abs(A: np.ndarray) -> float:
    if A.size == 0:
        return 0.0
    if is_exact_array(A):
        return max(abs(as_float(v)) for v in A.flat)
    return float(np.abs(A).max())


def _rref_inplace(M: list) -> list:
    """Row-reduce a list of Fraction rows in place; returns pivot columns."""
    if not M:
        return []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        pv = M[r][c]
        M[r] = [v / pv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return pivots


def rref(A: np.ndarray):
    """Reduced row echelon form of an exact matrix; (R, pivot columns)."""
    if not is_exact_array(A):
        raise DomainError("rref is exact-mode only")
    M = [list(row) for row in A]
    pivots = _rref_inplace(M)
    return exact_array(M) if M else A.copy(), pivots


def rank_of(A: np.ndarray, tol: float | None = None) -> int:
    if A.size == 0:
        return 0
    if is_exact_array(A):
        return len(rref(A)[1])
    tol = DEFAULT_TOL.svd_rel if tol is None else tol
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def kernel_basis(A: np.ndarray, tol: float | None = None) -> list:
    """Basis of the right null space as a list of 1-D vectors.

    Exact mode demands tol in {None, 0}; float mode counts singular values
    below tol * max(singular values) as zero (default 1e-10 relative).
    """
    m, n = A.shape
    if n == 0:
        return []
    if is_exact_array(A):
        if tol not in (None, 0):
            raise DomainError("exact kernel_basis takes tol = 0")
        if m == 0:
            return [identity(n)[:, j] for j in range(n)]
        R, pivots = rref(A)
        free = [j for j in range(n) if j not in pivots]
        basis = []
        for f in free:
            v = np.empty(n, dtype=object)
            v[...] = Fraction(0)
            v[f] = Fraction(1)
            for r, c in enumerate(pivots):
                v[c] = -R[r, f]
            basis.append(v)
        return basis
    tol = DEFAULT_TOL.svd_rel if tol is None else tol
    if m == 0:
        return [np.eye(n, dtype=complex)[:, j] for j in range(n)]
    u, s, vh = np.linalg.svd(A)
    smax = s[0] if s.size else 0.0
    nz = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return [vh[i].conj() for i in range(nz, n)]


def solve_linear(A: np.ndarray, rhs: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Solve a square invertible system; exact in rational mode."""
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("solve_linear expects a square matrix")
    if is_exact_array(A):
        rhs2 = rhs.reshape(n, -1)
        M = [list(A[i]) + list(rhs2[i]) for i in range(n)]
        pivots = _rref_inplace(M)
        if len(pivots) < n or any(p >= n for p in pivots):
            raise SingularMatrixError(n - sum(1 for p in pivots if p < n))
        X = exact_array([row[n:] for row in M])
        return X.reshape(rhs.shape)
    tol = DEFAULT_TOL.svd_rel if tol is None else tol
    r = rank_of(A, tol)
    if r < n:
        raise SingularMatrixError(n - r)
    return np.linalg.solve(A, rhs)


def solve_consistent(A: np.ndarray, rhs: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Solve a (possibly overdetermined) consistent system A x = rhs.

    Exact mode: Gaussian elimination with a consistency check.  Float mode:
    least squares; residual above tol * scale raises InconsistentSystemError.
    """
    m, n = A.shape
    rhs2 = rhs.reshape(m, -1)
    if is_exact_array(A):
        M = [list(A[i]) + list(rhs2[i]) for i in range(m)]
        pivots = _rref_inplace(M)
        k = rhs2.shape[1]
        for p in pivots:
            if p >= n:
                raise InconsistentSystemError("exact system has no solution")
        for i in range(len(pivots), m):
            if any(M[i][n + j] != 0 for j in range(k)):
                raise InconsistentSystemError("exact system has no solution")
        if len(pivots) < n:
            raise SingularMatrixError(n - len(pivots), "underdetermined system")
        X = exact_array([M[r][n:] for r in range(n)])
        return X.reshape(n) if rhs.ndim == 1 else X
    tol = DEFAULT_TOL.residual if tol is None else tol
    x, *_ = np.linalg.lstsq(A, rhs2, rcond=None)
    resid = max_abs(A @ x - rhs2)
    scale = max(1.0, max_abs(A) * max(1.0, max_abs(x)))
    if resid > tol * scale:
        raise InconsistentSystemError(f"least-squares residual {resid:.3e} exceeds gate")
    return x.reshape((n,) if rhs.ndim == 1 else (n, rhs2.shape[1]))

"""Gaudin Hamiltonians as explicit matrices and the algebra they generate.

The Hamiltonian attached to the s-th marked point is

    H_s = sum_{r != s} (m_s m_r - Omega_{s,r}) / (z_s - z_r),

with Omega the permutation-type invariant built from all four gl(2)
generators per factor.  The monomial model of gl2rep stores the diagonal
generators in shifted form, so Omega is assembled here from the factor
degree diagonals:  t11 = m - deg,  t22 = deg,  which are the untwisted
diagonal actions on each factor.

Matrices are produced on three nested spaces: the full level-l weight
space (H_big), the singular subspace (H_sing), and the Shapovalov
quotient (H_L).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .gl2rep import (
    ProblemInstance,
    ShQuotient,
    degree_diagonal,
    generator_matrix,
    shapovalov_gram,
    sh_quotient,
    singular_matrix,
)
from .numcore import (
    InconsistentSystemError,
    UniPoly,
    identity,
    is_exact_array,
    kernel_basis,
    max_abs,
    solve_consistent,
    solve_linear,
    to_float_array,
    zeros_like_domain,
    DEFAULT_TOL,
)

__all__ = [
    "GaudinSystem",
    "build_gaudin",
    "polynomial_valued_kernel",
    "apply_universal_operator",
    "bethe_algebra_basis",
    "induced_map_kernel",
    "annihilator_ideal",
]


@dataclass(frozen=True)
class GaudinSystem:
    """Hamiltonians of one instance on the three nested spaces.

    G lists the numerator coefficients of sum_s H_sing[s]/(x - z_s) in
    descending powers: G[0] is the x^{n-2} coefficient, which equals
    l (sum(m) + 1 - l) Id on the singular subspace.
    """

    inst: ProblemInstance
    H_big: tuple
    H_sing: tuple
    H_L: tuple
    G: tuple
    sing: np.ndarray          # level-l coordinates of the singular basis
    shq: ShQuotient
    gram: np.ndarray          # Shapovalov Gram on the level-l basis
    gram_sing: np.ndarray
    E12: np.ndarray           # raising operator, level l -> level l-1

    @property
    def dim_sing_m(self) -> int:
        return self.sing.shape[1]

    @property
    def dim_sing_l(self) -> int:
        return self.shq.dim


def _zpoly_coeffs(inst, skip=None):
    one = 1 if inst.exact else (1 + 0j)
    p = UniPoly.const(one)
    for r, zr in enumerate(inst.z):
        if r == skip:
            continue
        p = p * UniPoly((-zr, one))
    return p


def _int_array(A: np.ndarray) -> np.ndarray:
    """Integer-valued exact matrix as Python ints (cheap exact products)."""
    out = np.empty(A.shape, dtype=object)
    flat = out.reshape(-1)
    for i, v in enumerate(A.reshape(-1)):
        flat[i] = int(v)
    return out


def build_gaudin(inst: ProblemInstance) -> GaudinSystem:
    n, l = inst.n, inst.l
    exact = inst.exact

    e12_lo = [generator_matrix(inst, 1, 2, s, l) for s in range(n)]
    e12_hi = [generator_matrix(inst, 1, 2, s, l + 1) for s in range(n)]
    e21_lo = [generator_matrix(inst, 2, 1, s, l - 1) for s in range(n)]
    e21_hi = [generator_matrix(inst, 2, 1, s, l) for s in range(n)]
    degs = [degree_diagonal(inst, s, l) for s in range(n)]
    E12_raw = sum(e12_lo[1:], e12_lo[0])
    conv = _int_array if exact else to_float_array
    e12_lo = [conv(M) for M in e12_lo]
    e12_hi = [conv(M) for M in e12_hi]
    e21_lo = [conv(M) for M in e21_lo]
    e21_hi = [conv(M) for M in e21_hi]
    degs = [conv(M) for M in degs]
    d = degs[0].shape[0]
    eye = conv(identity(d))

    def omega(s, r):
        t11s = inst.m[s] * eye - degs[s]
        t11r = inst.m[r] * eye - degs[r]
        return (t11s @ t11r + degs[s] @ degs[r]
                + e12_hi[s] @ e21_hi[r] + e21_lo[s] @ e12_lo[r])

    H_big = []
    for s in range(n):
        acc = zeros_like_domain((d, d), exact)
        for r in range(n):
            if r == s:
                continue
            acc = acc + (inst.m[s] * inst.m[r] * eye - omega(s, r)) * \
                (1 / (inst.z[s] - inst.z[r]))
        H_big.append(acc)

    S = singular_matrix(inst)
    shq = sh_quotient(inst)
    gram = shapovalov_gram(inst, l)
    E12 = E12_raw if exact else to_float_array(E12_raw)
    if not exact:
        S = to_float_array(S)
        gram = to_float_array(gram)
        shq = replace(shq, sh=to_float_array(shq.sh),
                      lift=to_float_array(shq.lift),
                      radical=to_float_array(shq.radical),
                      gram_sing=to_float_array(shq.gram_sing))
    gram_sing = shq.gram_sing
    P, C = shq.sh, shq.lift

    H_sing = [solve_consistent(S, Hb @ S) if S.shape[1] else
              zeros_like_domain((0, 0), exact) for Hb in H_big]
    H_L = [P @ Hs @ C for Hs in H_sing]

    N = _matrix_numerator_for(inst, H_sing)
    G = [N[n - 2 - i] for i in range(n - 1)]

    return GaudinSystem(inst=inst, H_big=tuple(H_big), H_sing=tuple(H_sing),
                        H_L=tuple(H_L), G=tuple(G), sing=S, shq=shq,
                        gram=gram, gram_sing=gram_sing, E12=E12)


def _space_mats(sys: GaudinSystem, space: str):
    if space == "sing_m":
        return list(sys.H_sing)
    if space == "sing_l":
        return list(sys.H_L)
    raise ValueError("space must be 'sing_m' or 'sing_l'")


def _matrix_numerator_for(inst: ProblemInstance, mats):
    """Coefficients N_k of sum_s mats[s] * prod_{r != s}(x - z_r)."""
    d = mats[0].shape[0]
    exact = inst.exact
    N = [zeros_like_domain((d, d), exact) for _ in range(inst.n)]
    for s in range(inst.n):
        w = _zpoly_coeffs(inst, skip=s)
        for k in range(w.degree + 1):
            if w[k]:
                N[k] = N[k] + mats[s] * w[k]
    return N


def apply_universal_operator(sys: GaudinSystem, space: str, coeffs):
    """Coefficient vectors of  A v'' + B v' + N v  for a vector polynomial.

    coeffs lists the vector coefficients of v(x) in descending powers
    (v = coeffs[0] x^deg + ... + coeffs[deg]); the result is ascending.
    """
    inst = sys.inst
    mats = _space_mats(sys, space)
    d = mats[0].shape[0] if mats[0].size else 0
    exact = inst.exact
    deg = len(coeffs) - 1
    A = _zpoly_coeffs(inst)
    B = UniPoly.zero()
    for s, ms in enumerate(inst.m):
        B = B + _zpoly_coeffs(inst, skip=s) * (-ms)
    N = _matrix_numerator_for(inst, mats)
    top = deg + inst.n - 1
    out = [zeros_like_domain((d,), exact) for _ in range(top + 1)]
    for j, vj in enumerate(coeffs):
        pj = deg - j
        for k in range(A.degree + 1):
            if pj >= 2 and A[k]:
                out[k + pj - 2] = out[k + pj - 2] + (pj * (pj - 1) * A[k]) * vj
        for k in range(B.degree + 1):
            if pj >= 1 and B[k]:
                out[k + pj - 1] = out[k + pj - 1] + (pj * B[k]) * vj
        for k in range(len(N)):
            out[k + pj] = out[k + pj] + N[k] @ vj
    return out


def polynomial_valued_kernel(sys: GaudinSystem, space: str, v0, deg: int,
                             tol: float | None = None):
    """Vector coefficients v_1..v_deg with D(v0 x^deg + v1 x^{deg-1} + ...) = 0.

    deg must be l or lt = sum(m)+1-l.  For deg = lt the coefficient at
    index lt - l (the x^l term) is pinned to zero, which removes the
    freedom of adding multiples of the degree-l solution.  Solved block
    by block, highest power first; the trailing equations not used by the
    elimination are verified and raise InconsistentSystemError on failure.
    """
    inst = sys.inst
    l, lt, n = inst.l, inst.ltilde, inst.n
    if deg not in (l, lt):
        raise ValueError(f"deg must be {l} or {lt}")
    mats = _space_mats(sys, space)
    d = mats[0].shape[0]
    exact = inst.exact
    tol = DEFAULT_TOL.residual if tol is None else tol
    v0 = v0 if exact else np.asarray(v0, dtype=complex)
    skip = lt - l if (deg == lt and 1 <= lt - l <= deg) else None

    A = _zpoly_coeffs(inst)
    B = UniPoly.zero()
    for s, ms in enumerate(inst.m):
        B = B + _zpoly_coeffs(inst, skip=s) * (-ms)
    N = _matrix_numerator_for(inst, mats)
    scale = max(1.0, max_abs(v0), max((max_abs(Nk) for Nk in N), default=0.0))

    vs = [v0]
    for i in range(1, deg + 1):
        pj_i = deg - i
        rhs = zeros_like_domain((d,), exact)
        for j in range(0, i):
            vj = vs[j]
            pj = deg - j
            kA = n - (i - j)
            if pj >= 2 and 0 <= kA <= A.degree and A[kA]:
                rhs = rhs + (pj * (pj - 1) * A[kA]) * vj
            kB = n - 1 - (i - j)
            if pj >= 1 and 0 <= kB <= B.degree and B[kB]:
                rhs = rhs + (pj * B[kB]) * vj
            kN = n - 2 - (i - j)
            if 0 <= kN < len(N):
                rhs = rhs + N[kN] @ vj
        if i == skip:
            resid = max_abs(rhs)
            if (exact and resid != 0.0) or (not exact and resid > tol * scale):
                raise InconsistentSystemError(
                    f"pinned coefficient equation has residual {resid:.3e}")
            vs.append(zeros_like_domain((d,), exact))
            continue
        blk = zeros_like_domain((d, d), exact) + N[n - 2]
        cscal = pj_i * (pj_i - 1) + pj_i * B[n - 1]
        for r in range(d):
            blk[r, r] = blk[r, r] + cscal
        vs.append(solve_linear(blk, -rhs))

    full = apply_universal_operator(sys, space, vs)
    resid = max((max_abs(c) for c in full), default=0.0)
    if (exact and resid != 0.0) or (not exact and resid > tol * scale):
        raise InconsistentSystemError(
            f"trailing kernel equations have residual {resid:.3e}")
    return vs[1:]


class _ExactReducer:
    """Incremental row reduction over Fractions for span/rank bookkeeping."""

    def __init__(self):
        self.rows = []   # (pivot index, reduced row)

    def add(self, v) -> bool:
        v = list(v)
        for p, row in self.rows:
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            return False
        inv = 1 / v[piv]
        self.rows.append((piv, [a * inv for a in v]))
        return True


class _FloatReducer:
    """Incremental orthonormal span tracking with a relative gate."""

    def __init__(self, tol):
        self.tol = tol
        self.Q = []

    def add(self, v) -> bool:
        v = np.asarray(v, dtype=complex)
        norm0 = np.linalg.norm(v)
        if norm0 == 0:
            return False
        for _ in range(2):
            for q in self.Q:
                v = v - np.vdot(q, v) * q
        norm = np.linalg.norm(v)
        if norm <= self.tol * norm0:
            return False
        self.Q.append(v / norm)
        return True


def bethe_algebra_basis(mats, tol: float | None = None):
    """Basis of the unital matrix algebra generated by a commuting family.

    Monomial closure degree by degree with rank checks; terminates because
    the dimension is bounded by (matrix size)^2.
    """
    if not mats:
        raise ValueError("need at least one generator")
    d = mats[0].shape[0]
    if d == 0:
        return []
    exact = is_exact_array(mats[0])
    red = _ExactReducer() if exact else _FloatReducer(
        DEFAULT_TOL.svd_rel if tol is None else tol)
    basis = []
    eye = identity(d, exact)
    red.add(eye.reshape(-1))
    basis.append(eye)
    frontier = [eye]
    while frontier:
        nxt = []
        for F in frontier:
            for H in mats:
                prod = F @ H
                if red.add(prod.reshape(-1)):
                    basis.append(prod)
                    nxt.append(prod)
        frontier = nxt
    return basis


def induced_map_kernel(algebra, sh: np.ndarray, tol: float | None = None):
    """Elements of span(algebra) whose composition with sh vanishes.

    These are exactly the operators mapping the singular subspace into the
    radical, i.e. the kernel of the quotient-algebra map.
    """
    if not algebra:
        return []
    exact = is_exact_array(algebra[0])
    cols = [(sh @ F).reshape(-1) for F in algebra]
    M = np.empty((len(cols[0]), len(cols)), dtype=object if exact else complex)
    for j, c in enumerate(cols):
        M[:, j] = c
    combos = kernel_basis(M, 0 if exact else tol)
    return [_combine(algebra, c) for c in combos]


def annihilator_ideal(algebra, kernel, tol: float | None = None):
    """Basis of J = { f in span(algebra) : f g = 0 for every g in kernel }."""
    if not algebra:
        return []
    if not kernel:
        return list(algebra)
    exact = is_exact_array(algebra[0])
    blocks = []
    for K in kernel:
        blocks.append([(F @ K).reshape(-1) for F in algebra])
    nrows = sum(len(b[0]) for b in blocks)
    M = np.empty((nrows, len(algebra)), dtype=object if exact else complex)
    r = 0
    for b in blocks:
        h = len(b[0])
        for j, col in enumerate(b):
            M[r:r + h, j] = col
        r += h
    combos = kernel_basis(M, 0 if exact else tol)
    return [_combine(algebra, c) for c in combos]


def _combine(mats, coeffs):
    acc = mats[0] * coeffs[0]
    for F, c in zip(mats[1:], coeffs[1:]):
        acc = acc + F * c
    return acc

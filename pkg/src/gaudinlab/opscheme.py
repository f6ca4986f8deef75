"""Second-order operators with prescribed exponents and polynomial kernels.

Coordinates and conventions:

* h = (h_1,...,h_n) are the residues of the degree-zero term of the monic
  operator  d^2/dx^2 - sum_s m_s/(x-z_s) d/dx + sum_s h_s/(x-z_s);
* p(x,a) = x^l + a_1 x^{l-1} + ... + a_l is the distinguished kernel
  candidate of degree l;
* ptilde(x,atilde) is the second kernel candidate, monic of degree
  lt = sum(m)+1-l with the coefficient of x^l pinned to zero (the
  index lt-l is omitted from atilde);
* q_{-1} = sum h_s, q_0 = sum z_s h_s - l*lt, and for i >= 1 the value
  q_i(a,h) is the coefficient of x^{l+n-2-i} in the cleared-denominator
  polynomial D_h(p(.,a)).

All functions are generic over the scalar domain (Fraction, complex, and
dual numbers for derivative extraction), so exact pipelines stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import cmath
import numpy as np

from .gl2rep import ProblemInstance
from .numcore import (
    DomainError,
    InconsistentSystemError,
    SingularMatrixError,
    UniPoly,
    as_float,
    exact_sqrt,
    solve_consistent,
    wronskian,
)

__all__ = [
    "SeparatingConditionError",
    "NotAdmissibleError",
    "MalformedPairError",
    "DhOperator",
    "SchemePoint",
    "p_of_a",
    "ptilde_of",
    "apply_Dh",
    "q_coefficients",
    "a_of_h",
    "h_of_a",
    "h_from_numerator",
    "residual_system",
    "ptilde_solve",
    "exponents_at",
    "wronskian_check",
    "operator_from_kernel_pair",
    "schubert_dimension",
]


class SeparatingConditionError(ValueError):
    """A triangular diagonal entry i*(sum(m)-2l+i+1) vanished."""

    def __init__(self, i):
        self.i = i
        super().__init__(f"separating condition fails at i = {i}")


class NotAdmissibleError(ValueError):
    """Both kernel polynomials vanish at some marked point."""


class MalformedPairError(ValueError):
    """Kernel pair fails the Wronskian divisibility required of the cycle."""


def _is_exactish(v) -> bool:
    from .numcore import Dual, is_exact_scalar
    if isinstance(v, Dual):
        return _is_exactish(v.a)
    return is_exact_scalar(v)


def p_of_a(a) -> UniPoly:
    """Monic polynomial x^l + a_1 x^{l-1} + ... + a_l."""
    a = list(a)
    l = len(a)
    one = Fraction(1) if all(_is_exactish(v) for v in a) else 1 + 0j
    return UniPoly(tuple(reversed(a)) + (one,)) if l else UniPoly.const(one)


def ptilde_of(inst: ProblemInstance, atilde) -> UniPoly:
    """Monic degree-lt polynomial with zero x^l coefficient.

    atilde lists the coefficients indexed 1..lt with index lt-l skipped,
    matching the omitted coordinate of the second kernel polynomial.
    """
    lt, l = inst.ltilde, inst.l
    if lt <= l:
        raise ValueError("second kernel polynomial needs sum(m) + 1 - l > l")
    atilde = list(atilde)
    if len(atilde) != lt - 1:
        raise ValueError(f"expected {lt - 1} coefficients, got {len(atilde)}")
    one = Fraction(1) if all(_is_exactish(v) for v in atilde) else 1 + 0j
    coeffs = [one * 0] * (lt + 1)
    coeffs[lt] = one
    it = iter(atilde)
    for i in range(1, lt + 1):
        if i == lt - l:
            continue
        coeffs[lt - i] = next(it)
    return UniPoly(tuple(coeffs))


def _zpoly(inst, skip=None) -> UniPoly:
    one = Fraction(1) if inst.exact else 1 + 0j
    p = UniPoly.const(one)
    for r, zr in enumerate(inst.z):
        if r == skip:
            continue
        p = p * UniPoly((-zr, one))
    return p


@dataclass(frozen=True)
class SchemePoint:
    """One point of the scheme: coordinates, multiplicity, check residuals.

    atilde may be None when no second polynomial kernel element was found;
    residuals maps check names to nonnegative numbers (exact checks store
    exact zeros as 0.0).
    """

    h: tuple
    a: tuple
    atilde: tuple | None
    multiplicity: int
    residuals: dict


@dataclass(frozen=True)
class DhOperator:
    """The cleared-denominator operator  A u'' + B u' + C u  on polynomials."""

    inst: ProblemInstance
    h: tuple

    def __post_init__(self):
        if self.inst.exact and any(isinstance(v, complex) for v in self.h):
            raise DomainError("float h on an exact instance; convert the instance first")

    @property
    def A(self) -> UniPoly:
        return _zpoly(self.inst)

    @property
    def B(self) -> UniPoly:
        acc = UniPoly.zero()
        for s, ms in enumerate(self.inst.m):
            acc = acc + _zpoly(self.inst, skip=s) * (-ms)
        return acc

    @property
    def C(self) -> UniPoly:
        acc = UniPoly.zero()
        for s, hs in enumerate(self.h):
            acc = acc + _zpoly(self.inst, skip=s) * hs
        return acc


def apply_Dh(op: DhOperator, u: UniPoly) -> UniPoly:
    """prod(x-z_s) * [u'' - sum m_s/(x-z_s) u' + sum h_s/(x-z_s) u]."""
    return op.A * u.deriv().deriv() + op.B * u.deriv() + op.C * u


def q_coefficients(inst: ProblemInstance, a, h):
    """(q_{-1}, q_0, [q_1, ..., q_{l+n-2}]) at the given coordinates."""
    l, n, lt = inst.l, inst.n, inst.ltilde
    h = tuple(h)
    qm1 = sum(h[1:], h[0])
    q0 = sum(z * hs for z, hs in zip(inst.z, h)) - l * lt
    w = apply_Dh(DhOperator(inst, h), p_of_a(a))
    qs = [w[l + n - 2 - i] for i in range(1, l + n - 1)]
    return qm1, q0, qs


def _unit_like(values) -> tuple:
    exact = all(_is_exactish(v) for v in values) if values else True
    return (Fraction(1), Fraction(0)) if exact else (1 + 0j, 0j)


def _solve_noswap(M, rhs):
    """Gauss-Jordan without row swaps; needs invertible natural pivots.

    Suited to the (lower-Hessenberg) triangular systems of this module and
    generic over scalars, including dual numbers.
    """
    k = len(M)
    M = [row[:] for row in M]
    rhs = rhs[:]
    for c in range(k):
        piv = M[c][c]
        if not piv:
            raise SingularMatrixError(1, f"zero pivot at position {c}")
        inv = 1 / piv
        M[c] = [v * inv for v in M[c]]
        rhs[c] = rhs[c] * inv
        for i in range(k):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [u - f * v for u, v in zip(M[i], M[c])]
                rhs[i] = rhs[i] - f * rhs[c]
    return rhs


def _a_of_h_raw(inst: ProblemInstance, h):
    """Solve q_i(a, h) = 0, i = 1..l, without precondition checks."""
    l = inst.l
    if l == 0:
        return []
    one, zero = _unit_like(list(h))
    base = q_coefficients(inst, [zero] * l, h)[2][:l]
    cols = []
    for j in range(l):
        a = [zero] * l
        a[j] = one
        qj = q_coefficients(inst, a, h)[2][:l]
        cols.append([qj[i] - base[i] for i in range(l)])
    M = [[cols[j][i] for j in range(l)] for i in range(l)]
    rhs = [-v for v in base]
    return _solve_noswap(M, rhs)


def a_of_h(inst: ProblemInstance, h, tol: float = 1e-6):
    """Unique a with q_1 = ... = q_l = 0, by triangular elimination.

    Requires q_{-1}(h) = q_0(h) = 0 (within tol * scale in float mode) and
    the separating condition; the offending index is reported otherwise.
    """
    for i in range(1, inst.l + 1):
        if i * (sum(inst.m) - 2 * inst.l + i + 1) == 0:
            raise SeparatingConditionError(i)
    h = tuple(h)
    qm1 = sum(h[1:], h[0])
    q0 = sum(z * hs for z, hs in zip(inst.z, h)) - inst.l * inst.ltilde
    scale = max(1.0, max(abs(as_float(v)) for v in h) if h else 0.0,
                float(inst.l * abs(inst.ltilde)))
    if abs(as_float(qm1)) > tol * scale or abs(as_float(q0)) > tol * scale:
        raise ValueError(
            f"h is off the constraint plane: q_-1 = {qm1}, q_0 = {q0}")
    return _a_of_h_raw(inst, h)


def h_of_a(inst: ProblemInstance, a):
    """Recover h from a: numerator coefficients first, then simple fractions.

    The numerator g(x) = g_0 x^{n-2} + ... + g_{n-2} is pinned by
    g_0 = l*lt and the vanishing of the leading coefficients of
    A p'' + B p' + g p; the returned h automatically satisfies
    q_{-1}(h) = q_0(h) = 0.
    """
    l, n, lt = inst.l, inst.n, inst.ltilde
    a = list(a)
    if len(a) != l:
        raise ValueError(f"expected {l} coordinates, got {len(a)}")
    exact = inst.exact and all(_is_exactish(v) for v in a)
    one, zero = (Fraction(1), Fraction(0)) if exact else (1 + 0j, 0j)
    p = p_of_a(a)
    zp = _zpoly(inst)
    base_expr = zp * p.deriv().deriv()
    for s, ms in enumerate(inst.m):
        base_expr = base_expr + _zpoly(inst, skip=s) * (-ms) * p.deriv()

    def qhat(g):
        gpoly = UniPoly(tuple(reversed(g)))
        e = base_expr + gpoly * p
        return [e[l + n - 2 - i] for i in range(n - 1)]

    g0 = one * (l * lt)
    k = n - 2
    base = qhat([g0] + [zero] * k)
    if k:
        cols = []
        for j in range(k):
            g = [g0] + [zero] * k
            g[1 + j] = one
            col = qhat(g)
            cols.append([col[i] - base[i] for i in range(n - 1)])
        M = [[cols[j][i + 1] for j in range(k)] for i in range(k)]
        rhs = [-base[i + 1] for i in range(k)]
        grest = _solve_noswap(M, rhs)
    else:
        grest = []
    g = UniPoly(tuple(reversed([g0] + list(grest))))
    return h_from_numerator(inst, g)


def h_from_numerator(inst: ProblemInstance, g: UniPoly):
    """Partial fractions: h_s = g(z_s) / prod_{r != s}(z_s - z_r)."""
    if g.degree > inst.n - 2:
        raise ValueError("numerator degree exceeds n - 2")
    hs = []
    for s, zs in enumerate(inst.z):
        den = 1
        for r, zr in enumerate(inst.z):
            if r != s:
                den = den * (zs - zr)
        hs.append(g(zs) / den)
    return hs


def residual_system(inst: ProblemInstance, a):
    """q_j(a, h(a)) for j = n-1, ..., l+n-2; all zero iff a is on the scheme."""
    h = h_of_a(inst, a)
    _, _, qs = q_coefficients(inst, a, h)
    return qs[inst.n - 2:]


def ptilde_solve(inst: ProblemInstance, h, tol: float | None = None):
    """Coefficients of the second kernel polynomial, or raise.

    Solves the overdetermined linear system 'all coefficients of
    D_h(ptilde) vanish' for the lt-1 unknowns; inconsistency means the
    operator has no second polynomial kernel element (the point lies on
    the degree-l scheme but not on the all-polynomial one).
    """
    l, n, lt = inst.l, inst.n, inst.ltilde
    if lt <= l:
        raise ValueError("second kernel polynomial needs sum(m) + 1 - l > l")
    h = tuple(h)
    qm1 = sum(h[1:], h[0])
    q0 = sum(z * hs for z, hs in zip(inst.z, h)) - l * lt
    scale = max(1.0, max(abs(as_float(v)) for v in h) if h else 0.0,
                float(l * abs(lt)))
    pre_tol = 1e-6 if tol is None else max(tol, 1e-6)
    if abs(as_float(qm1)) > pre_tol * scale or abs(as_float(q0)) > pre_tol * scale:
        raise ValueError(f"h is off the constraint plane: q_-1 = {qm1}, q_0 = {q0}")
    nunk = lt - 1
    exact = all(_is_exactish(v) for v in h)
    one, zero = (Fraction(1), Fraction(0)) if exact else (1 + 0j, 0j)
    op = DhOperator(inst, h)

    def coeffs_of(atilde):
        w = apply_Dh(op, ptilde_of(inst, atilde))
        return [w[lt + n - 2 - i] for i in range(1, lt + n - 1)]

    base = coeffs_of([zero] * nunk)
    neq = len(base)
    if nunk == 0:
        resid = max(abs(as_float(v)) for v in base) if base else 0.0
        if (exact and any(base)) or resid > (1e-8 if tol is None else tol) * scale:
            raise InconsistentSystemError("no second polynomial kernel element")
        return []
    if exact:
        M = np.empty((neq, nunk), dtype=object)
        rhs = np.empty(neq, dtype=object)
    else:
        M = np.zeros((neq, nunk), dtype=complex)
        rhs = np.zeros(neq, dtype=complex)
    for j in range(nunk):
        at = [zero] * nunk
        at[j] = one
        col = coeffs_of(at)
        for i in range(neq):
            M[i, j] = col[i] - base[i]
    for i in range(neq):
        rhs[i] = -base[i]
    sol = solve_consistent(M, rhs, tol=tol)
    return list(sol)


def exponents_at(op: DhOperator, s: int | None):
    """Indicial roots at the marked point z_s (s = 0..n-1) or infinity (None).

    Finite points return (0, m_s + 1)-ordered roots; infinity returns the
    descending pair, computed from the actual operator coefficients.
    """
    inst = op.inst
    if s is not None:
        zs = inst.z[s]
        p0 = op.B(zs) / op.A.deriv()(zs)
        return (0 * p0, 1 - p0)
    qm1 = sum(op.h[1:], op.h[0])
    if (qm1 != 0) if inst.exact else abs(qm1) > 1e-6 * max(1.0, max_abs_h(op.h)):
        raise ValueError("exponents at infinity need q_{-1}(h) = 0")
    cinf = op.C[inst.n - 2]
    tr = 1 + sum(inst.m)
    disc = tr * tr - 4 * cinf
    if isinstance(cinf, Fraction) or isinstance(cinf, int):
        root = exact_sqrt(Fraction(disc))
        r1 = Fraction(-tr + root, 2)
        r2 = Fraction(-tr - root, 2)
        return (r1, r2)
    root = cmath.sqrt(disc)
    r1, r2 = (-tr + root) / 2, (-tr - root) / 2
    if (r1.real, r1.imag) < (r2.real, r2.imag):
        r1, r2 = r2, r1
    return (r1, r2)


def max_abs_h(h) -> float:
    return max(abs(as_float(v)) for v in h) if h else 0.0


def wronskian_check(inst: ProblemInstance, atilde, a) -> UniPoly:
    """Wr(ptilde, p) - (lt - l) prod (x - z_s)^{m_s}; zero on the cycle."""
    pt = ptilde_of(inst, atilde)
    p = p_of_a(a)
    one = Fraction(1) if inst.exact else 1 + 0j
    target = UniPoly.const(one * (inst.ltilde - inst.l))
    for s, zs in enumerate(inst.z):
        for _ in range(inst.m[s]):
            target = target * UniPoly((-zs, one))
    return wronskian(pt, p) - target


def operator_from_kernel_pair(inst: ProblemInstance, ptilde: UniPoly, p: UniPoly,
                              tol: float = 1e-8):
    """Monic-free form (b0, b1, b2) of the operator annihilating span(ptilde, p).

    The 3x3 kernel determinant gives  B0 u'' + B1 u' + B2 u  with
    B0 = Wr(ptilde, p); all three are divisible by
    (lt-l) prod (x-z_s)^{m_s-1}, and the quotient triple has
    b0 = prod(x-z_s) and b2 of degree n-2 with leading coefficient lt*l.
    The residues of b2/b0 reproduce the h coordinates of the point.
    """
    lt, l = inst.ltilde, inst.l
    one = Fraction(1) if inst.exact else 1 + 0j
    scale = max(1.0, ptilde.max_abs(), p.max_abs())
    for s, zs in enumerate(inst.z):
        vt, vp = ptilde(zs), p(zs)
        bad = (vt == 0 and vp == 0) if inst.exact else \
            (abs(as_float(vt)) <= tol * scale and abs(as_float(vp)) <= tol * scale)
        if bad:
            raise NotAdmissibleError(f"both kernel polynomials vanish at z_{s}")
    B0 = wronskian(ptilde, p)
    d2t, d2p = ptilde.deriv().deriv(), p.deriv().deriv()
    B1 = -(d2t * p - ptilde * d2p)
    B2 = d2t * p.deriv() - ptilde.deriv() * d2p
    den = UniPoly.const(one * (lt - l))
    extra = UniPoly.const(one)
    for s, zs in enumerate(inst.z):
        ms = inst.m[s]
        if ms >= 1:
            for _ in range(ms - 1):
                den = den * UniPoly((-zs, one))
        else:
            extra = extra * UniPoly((-zs, one))
    out = []
    cscale = max(1.0, B0.max_abs(), B1.max_abs(), B2.max_abs()) * max(1.0, extra.max_abs())
    for Bi in (B0, B1, B2):
        qpoly, rem = (Bi * extra).divmod(den)
        if inst.exact:
            if not rem.is_zero():
                raise MalformedPairError("kernel pair fails exact divisibility")
        elif rem.max_abs() > tol * cscale:
            raise MalformedPairError(
                f"kernel pair divisibility residual {rem.max_abs():.3e}")
        out.append(qpoly)
    drift = out[0] - _zpoly(inst)
    if (inst.exact and not drift.is_zero()) or \
            (not inst.exact and drift.max_abs() > tol * cscale):
        raise MalformedPairError("Wronskian is not the prescribed zero divisor")
    return tuple(out)


def schubert_dimension(m, l: int) -> int:
    """Multiplicity of the irreducible of highest weight sum(m) - 2l in the
    tensor product of the irreducibles V_{m_s}, by iterated two-factor
    decomposition (V_a x V_b = V_{|a-b|} + V_{|a-b|+2} + ... + V_{a+b})."""
    target = sum(m) - 2 * l
    if target < 0:
        return 0
    mult = {0: 1}
    for ms in m:
        nxt = {}
        for w, c in mult.items():
            for t in range(abs(w - ms), w + ms + 1, 2):
                nxt[t] = nxt.get(t, 0) + c
        mult = nxt
    return mult.get(target, 0)

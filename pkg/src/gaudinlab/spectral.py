"""Joint eigen-decomposition of the commuting family and scheme matching.

The spectrum of the family is read off a seeded random integer combination
of the generators: eigenvalue clusters of the combination give the points,
generalized-eigenspace dimensions give multiplicities, and the h-tuple at a
point is the Rayleigh value of each generator on the cluster's invariant
subspace.  Every point is then pushed through the scheme-side checks and
the residuals are recorded, never just booleans.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from .gl2rep import ProblemInstance
from .numcore import (
    DEFAULT_TOL,
    Dual,
    InconsistentSystemError,
    is_exact_array,
    max_abs,
    to_float_array,
)
from .opscheme import (
    DhOperator,
    MalformedPairError,
    NotAdmissibleError,
    SchemePoint,
    _a_of_h_raw,
    apply_Dh,
    exponents_at,
    h_from_numerator,
    operator_from_kernel_pair,
    p_of_a,
    ptilde_of,
    ptilde_solve,
    q_coefficients,
    residual_system,
    wronskian_check,
)

__all__ = [
    "ClusterAmbiguityError",
    "NonSimplePointError",
    "SingularJacobianError",
    "SpectrumReport",
    "joint_spectrum",
    "match_spectrum_to_scheme",
    "grothendieck_weights",
    "diagonalizability_check",
]


class ClusterAmbiguityError(RuntimeError):
    """Two eigenvalue clusters are too close to separate; reseed."""


class NonSimplePointError(ValueError):
    """An operation requiring multiplicity-one points got a fat point."""


class SingularJacobianError(ValueError):
    """The defining equations are not transversal at a claimed simple point."""


@dataclass
class SpectrumReport:
    """Multiplicity-weighted spectrum with per-point scheme residuals."""

    points: list
    total_multiplicity: int
    all_simple: bool
    residual_summary: dict
    seed: int
    space_dim: int
    bethe_vectors: list = field(default_factory=list)


def _as_float_mats(mats):
    out = []
    for M in mats:
        out.append(to_float_array(M) if is_exact_array(M) else np.asarray(M, dtype=complex))
    return out


def joint_spectrum(mats, seed: int, tol: float | None = None):
    """[(h, multiplicity, orthonormal invariant basis), ...] of the family.

    mats must commute (checked exactly upstream); exact input is converted
    here, the one sanctioned entry into float mode.  Raises
    ClusterAmbiguityError when two clusters run closer than 10*tol, in
    which case the caller should reseed.
    """
    tol = DEFAULT_TOL.cluster if tol is None else tol
    mats = _as_float_mats(mats)
    n = len(mats)
    d = mats[0].shape[0]
    if d == 0:
        return []
    rng = np.random.default_rng(seed)
    c = rng.integers(1, 998, size=n)
    T = sum(int(cs) * H for cs, H in zip(c, mats))
    scale = max(1.0, float(np.abs(T).max()))
    Tn = T / scale
    eigs = np.linalg.eigvals(Tn)

    # single-linkage clustering at distance tol
    order = sorted(range(d), key=lambda i: (eigs[i].real, eigs[i].imag))
    parent = list(range(d))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for ii in range(d):
        for jj in range(ii + 1, d):
            if abs(eigs[order[ii]] - eigs[order[jj]]) <= tol:
                ri, rj = find(order[ii]), find(order[jj])
                if ri != rj:
                    parent[ri] = rj
    groups = {}
    for i in range(d):
        groups.setdefault(find(i), []).append(i)
    clusters = sorted(groups.values(),
                      key=lambda g: (np.mean([eigs[i] for i in g]).real,
                                     np.mean([eigs[i] for i in g]).imag))
    centers = [complex(np.mean([eigs[i] for i in g])) for g in clusters]
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            if abs(centers[i] - centers[j]) < 10 * tol:
                raise ClusterAmbiguityError(
                    f"cluster centers {centers[i]:.6g} and {centers[j]:.6g} "
                    f"within 10*tol; reseed")

    out = []
    for idx, g in enumerate(clusters):

        def selector(lam, _idx=idx):
            return int(np.argmin([abs(lam - cc) for cc in centers])) == _idx

        _, Z, sdim = scipy.linalg.schur(Tn, output="complex", sort=selector)
        if sdim != len(g):
            raise ClusterAmbiguityError(
                f"invariant subspace dimension {sdim} != cluster size {len(g)}")
        Q = Z[:, :sdim]
        h = tuple(complex(np.trace(Q.conj().T @ H @ Q)) / sdim for H in mats)
        out.append((h, int(sdim), Q))
    assert sum(m for _, m, _ in out) == d
    return out


def _point_residuals(inst: ProblemInstance, h, tol):
    """All scheme-side checks at one h-tuple; residuals, never booleans."""
    finst = inst if not inst.exact else inst.to_float()
    l, n, lt = inst.l, inst.n, inst.ltilde
    h = tuple(complex(v) for v in h)
    res = {}
    hscale = max(1.0, max(abs(v) for v in h), float(l * abs(lt)))
    res["q_minus1"] = abs(sum(h)) / hscale
    res["q_0"] = abs(sum(z * hs for z, hs in zip(finst.z, h)) - l * lt) / hscale
    a = [complex(v) for v in _a_of_h_raw(finst, h)]
    ascale = max(hscale, max((abs(v) for v in a), default=0.0))
    res["scheme"] = max((abs(v) for v in residual_system(finst, a)),
                        default=0.0) / ascale
    op = DhOperator(finst, h)
    dev = 0.0
    for s in range(n):
        e = exponents_at(op, s)
        dev = max(dev, abs(e[0]), abs(e[1] - (inst.m[s] + 1)))
    einf = exponents_at(op, None)
    dev = max(dev, abs(einf[0] + l), abs(einf[1] - (l - 1 - sum(inst.m))))
    res["exponents"] = dev / max(1.0, float(lt))
    atilde = None
    if lt > l:
        try:
            atilde = [complex(v) for v in ptilde_solve(finst, h, tol=tol)]
        except InconsistentSystemError as err:
            res["ptilde"] = float("inf")
            res["ptilde_error"] = str(err)
    if atilde is not None:
        pscale = max(ascale, max((abs(v) for v in atilde), default=0.0))
        res["ptilde"] = apply_Dh(op, ptilde_of(finst, atilde)).max_abs() / pscale
        wr = wronskian_check(finst, atilde, a)
        res["wronskian"] = wr.max_abs() / pscale
        try:
            b0, b1, b2 = operator_from_kernel_pair(
                finst, ptilde_of(finst, atilde), p_of_a(a), tol=tol)
            hrec = h_from_numerator(finst, b2)
            res["kernel_pair_roundtrip"] = max(
                abs(hr - hs) for hr, hs in zip(hrec, h)) / hscale
            b2lead = b2.leading() if not b2.is_zero() else 0.0
            res["b2_leading"] = abs(b2lead - lt * l) / max(1.0, lt * l)
        except NotAdmissibleError as err:
            res["kernel_pair_roundtrip"] = float("inf")
            res["admissible_error"] = str(err)
        except MalformedPairError as err:
            res["kernel_pair_roundtrip"] = float("inf")
            res["malformed_pair_error"] = str(err)
    return a, atilde, res


def match_spectrum_to_scheme(inst: ProblemInstance, spectrum,
                             tol: float | None = None,
                             seed: int = 0) -> SpectrumReport:
    """Verify every joint-spectrum point against the scheme equations.

    Per-point failures are recorded as infinite residuals in the report
    rather than aborting the run.
    """
    tol = DEFAULT_TOL.residual if tol is None else tol
    points = []
    dim = spectrum[0][2].shape[0] if spectrum else 0
    for h, mult, _Q in spectrum:
        a, atilde, res = _point_residuals(inst, h, tol)
        points.append(SchemePoint(
            h=tuple(complex(v) for v in h), a=tuple(a),
            atilde=tuple(atilde) if atilde is not None else None,
            multiplicity=mult, residuals=res))
    summary = {}
    for p in points:
        for k, v in p.residuals.items():
            if isinstance(v, (int, float)):
                summary[k] = max(summary.get(k, 0.0), float(v))
    return SpectrumReport(points=points,
                          total_multiplicity=sum(p.multiplicity for p in points),
                          all_simple=all(p.multiplicity == 1 for p in points),
                          residual_summary=summary, seed=seed, space_dim=dim)


def _jacobian_functions(inst: ProblemInstance, h):
    """q_{-1}, q_0, and the composed defining polynomials at possibly-dual h."""
    l, lt, n = inst.l, inst.ltilde, inst.n
    qm1 = sum(h[1:], h[0])
    q0 = sum(z * hs for z, hs in zip(inst.z, h)) - l * lt
    vals = [qm1, q0]
    if n > 2:
        a = _a_of_h_raw(inst, h)
        qs = q_coefficients(inst, a, h)[2]
        vals.extend(qs[l: l + n - 2])
    return vals


def _exact_det(M):
    n = len(M)
    M = [row[:] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] * inv
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def grothendieck_weights(inst: ProblemInstance, points, tol: float | None = None):
    """Inverse Jacobian weights of the n defining polynomials at simple points.

    The induced bilinear form (f, g) = sum_p f(p) g(p) w_p is symmetric and,
    on functions separating the points, nondegenerate.  The overall residue
    normalization is a convention of this routine; only properties invariant
    under a global rescaling of the weights should be relied on.
    """
    tol = DEFAULT_TOL.residual if tol is None else tol
    weights = []
    for p in points:
        if p.multiplicity != 1:
            raise NonSimplePointError(
                f"point with multiplicity {p.multiplicity}")
        h = p.h
        n = inst.n
        exact = inst.exact and all(isinstance(v, Fraction) for v in h)
        if exact:
            cols = []
            for v in range(n):
                hd = [Dual(hs, Fraction(int(v == s))) for s, hs in enumerate(h)]
                vals = _jacobian_functions(inst, hd)
                cols.append([Dual.lift(val).b for val in vals])
            J = _exact_det([[cols[v][i] for v in range(n)] for i in range(n)])
            if J == 0:
                raise SingularJacobianError("exact Jacobian vanished")
            weights.append(Fraction(1) / J)
            continue
        finst = inst.to_float() if inst.exact else inst
        hs = [complex(v) for v in h]
        scale = max(1.0, max(abs(v) for v in hs))
        step = 1e-6 * scale
        Jm = np.zeros((n, n), dtype=complex)
        for v in range(n):
            hp = hs.copy(); hp[v] += step
            hm = hs.copy(); hm[v] -= step
            fp = _jacobian_functions(finst, hp)
            fm = _jacobian_functions(finst, hm)
            for i in range(n):
                Jm[i, v] = (complex(fp[i]) - complex(fm[i])) / (2 * step)
        sv = np.linalg.svd(Jm, compute_uv=False)
        if sv[0] == 0 or sv[-1] <= tol * sv[0]:
            raise SingularJacobianError(
                f"Jacobian condition {sv[-1]:.3e}/{sv[0]:.3e} is numerically singular")
        weights.append(1 / complex(np.linalg.det(Jm)))
    return weights


def diagonalizability_check(mats, tol: float | None = None, seed: int = 0):
    """(all eigenspaces genuine, worst residual) for the commuting family.

    True iff every generalized eigenspace carries a full basis of true
    eigenvectors: the restriction of each generator to each cluster
    subspace must be scalar within tol * |H|.
    """
    tol = DEFAULT_TOL.residual if tol is None else tol
    mats = _as_float_mats(mats)
    if mats[0].shape[0] == 0:
        return True, 0.0
    spectrum = None
    for attempt in range(5):
        try:
            spectrum = joint_spectrum(mats, seed=seed + attempt)
            break
        except ClusterAmbiguityError:
            continue
    if spectrum is None:
        raise ClusterAmbiguityError("no seed separated the clusters")
    worst = 0.0
    for h, mult, Q in spectrum:
        for s, H in enumerate(mats):
            dev = H @ Q - h[s] * Q
            worst = max(worst, max_abs(dev) / max(max_abs(H), 1e-30))
    return worst < tol, worst

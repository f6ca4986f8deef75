"""Command-line front end: spectrum, schubert, and verify subcommands.

Configs and reports are JSON; exact rationals travel as "p/q" strings and
complex numbers as [re, im] pairs, so exact data round-trips losslessly.
Exit code 0 means every per-point and global residual passed its gate;
otherwise the failed check names are listed on standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np
import jsonschema

from .gaudin import (
    annihilator_ideal,
    bethe_algebra_basis,
    build_gaudin,
    induced_map_kernel,
)
from .gl2rep import ProblemInstance, weight_space_dim
from .numcore import DEFAULT_TOL, Tolerances, max_abs, identity
from .opscheme import schubert_dimension
from .sov import VerificationError, bethe_vector
from .spectral import (
    ClusterAmbiguityError,
    SingularJacobianError,
    grothendieck_weights,
    diagonalizability_check,
    joint_spectrum,
    match_spectrum_to_scheme,
)

__all__ = ["CONFIG_SCHEMA", "cmd_spectrum", "cmd_schubert", "cmd_verify", "main"]


CONFIG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["m", "l", "z"],
    "additionalProperties": False,
    "properties": {
        "m": {"type": "array", "minItems": 2,
              "items": {"type": "integer", "minimum": 0}},
        "l": {"type": "integer", "minimum": 0},
        "z": {"type": "array", "minItems": 2,
              "items": {"type": ["string", "number"]}},
        "mode": {"enum": ["exact", "float"]},
        "seed": {"type": "integer"},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "svd_rel": {"type": "number", "exclusiveMinimum": 0},
                "cluster": {"type": "number", "exclusiveMinimum": 0},
                "residual": {"type": "number", "exclusiveMinimum": 0},
                "consistency": {"type": "number", "exclusiveMinimum": 0},
            },
        },
    },
}

_ENV_PREFIX = "GAUDINLAB_TOL_"


class ConfigError(ValueError):
    pass


def _tolerances(config) -> Tolerances:
    vals = {f: getattr(DEFAULT_TOL, f) for f in ("svd_rel", "cluster",
                                                 "residual", "consistency")}
    vals.update(config.get("tolerances", {}))
    for f in vals:
        env = os.environ.get(_ENV_PREFIX + f.upper())
        if env is not None:
            vals[f] = float(env)
    return Tolerances(**vals)


def load_config(config: dict):
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ConfigError(f"config schema violation: {e.message}") from e
    mode = config.get("mode", "exact")
    z = config["z"]
    if mode == "exact":
        for v in z:
            if isinstance(v, float) and not float(v).is_integer():
                raise ConfigError(
                    "exact mode needs rational z entries ('p/q' strings or integers)")
        zz = [Fraction(v) if isinstance(v, str) else Fraction(int(v)) for v in z]
    else:
        zz = [complex(Fraction(v)) if isinstance(v, str) else complex(v) for v in z]
    if len(set(zz)) != len(zz):
        raise ConfigError("marked points z must be pairwise distinct")
    inst = ProblemInstance(config["m"], config["l"], zz)
    return inst, mode, int(config.get("seed", 0)), _tolerances(config)


def _ser(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and v == float("inf"):
        return "inf"
    return v

def _ser_seq(seq):
    return [_ser(v) for v in seq]


def _resid(value) -> float:
    """Exact residuals report as literal 0.0; floats pass through."""
    return float(value)


def run_pipeline(inst: ProblemInstance, seed: int, tol: Tolerances):
    """Build everything for one instance; returns (report dict, failures)."""
    t0 = time.perf_counter()
    failures = []
    gate = tol.residual

    def check(name, residual, limit=None):
        residual = _resid(residual)
        if residual > (gate if limit is None else limit):
            failures.append(name)
        return residual

    sysd = build_gaudin(inst)
    n, l, lt = inst.n, inst.l, inst.ltilde
    dim_m, dim_l = sysd.dim_sing_m, sysd.dim_sing_l
    schub = schubert_dimension(inst.m, l)

    hb_scale = max(1.0, max(max_abs(H) for H in sysd.H_big))
    comm = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            comm = max(comm, max_abs(sysd.H_big[i] @ sysd.H_big[j]
                                     - sysd.H_big[j] @ sysd.H_big[i]))
    hsum = max_abs(sum(sysd.H_big[1:], sysd.H_big[0]))
    exact = inst.exact
    eye_m = identity(dim_m, exact)
    zw = sum((sysd.H_sing[s] * inst.z[s] for s in range(1, n)),
             sysd.H_sing[0] * inst.z[0]) - (l * lt) * eye_m if dim_m else None
    g0 = sysd.G[0] - (l * lt) * eye_m if dim_m else None
    shap = 0.0
    for H in sysd.H_big:
        shap = max(shap, max_abs(sysd.gram @ H - H.T @ sysd.gram))
    for H in sysd.H_sing:
        shap = max(shap, max_abs(sysd.gram_sing @ H - H.T @ sysd.gram_sing))

    alg_m = bethe_algebra_basis(list(sysd.H_sing)) if dim_m else []
    alg_l = bethe_algebra_basis(list(sysd.H_L)) if dim_l else []
    ker = induced_map_kernel(alg_m, sysd.shq.sh) if alg_m else []
    ann = annihilator_ideal(alg_m, ker) if alg_m else []

    global_checks = {
        "commutators": check("commutators", comm / hb_scale),
        "hamiltonian_sum": check("hamiltonian_sum", hsum / hb_scale),
        "z_weighted_identity": check(
            "z_weighted_identity", max_abs(zw) / hb_scale if zw is not None else 0.0),
        "g0_identity": check(
            "g0_identity", max_abs(g0) / hb_scale if g0 is not None else 0.0),
        "shapovalov_symmetry": check(
            "shapovalov_symmetry", shap / (hb_scale * max(1.0, max_abs(sysd.gram)))),
        "dim_sing_m_vs_count": check(
            "dim_sing_m_vs_count",
            abs(dim_m - (weight_space_dim(n, l) - weight_space_dim(n, l - 1)))),
        "dim_sing_l_vs_schubert": check("dim_sing_l_vs_schubert", abs(dim_l - schub)),
        "bethe_dim_vs_sing_l": check("bethe_dim_vs_sing_l", abs(len(alg_l) - dim_l)),
        "annihilator_dim_vs_sing_l": check(
            "annihilator_dim_vs_sing_l", abs(len(ann) - dim_l)),
    }

    # spectral side (float lane)
    spec_l = spec_m = None
    for attempt in range(6):
        try:
            spec_l = joint_spectrum(list(sysd.H_L), seed=seed + attempt,
                                    tol=tol.cluster)
            spec_m = joint_spectrum(list(sysd.H_sing), seed=seed + attempt,
                                    tol=tol.cluster)
            break
        except ClusterAmbiguityError:
            continue
    if spec_l is None or spec_m is None:
        failures.append("cluster_separation")
        spec_l, spec_m = [], []

    report_l = match_spectrum_to_scheme(inst, spec_l, tol=gate, seed=seed)
    report_m = match_spectrum_to_scheme(inst, spec_m, tol=gate, seed=seed)
    check("spectrum_total_sing_l", abs(report_l.total_multiplicity - dim_l))
    check("spectrum_total_sing_m", abs(report_m.total_multiplicity - dim_m))
    for rep, tag in ((report_l, "sing_l"), (report_m, "sing_m")):
        for k, v in rep.residual_summary.items():
            if k in ("ptilde", "wronskian", "kernel_pair_roundtrip") and tag == "sing_m":
                continue  # guaranteed only on the quotient side
            check(f"{tag}_{k}", v)

    # trace identity on both spaces
    trace_resid = 0.0
    for mats, rep, dim in ((sysd.H_L, report_l, dim_l), (sysd.H_sing, report_m, dim_m)):
        if dim == 0:
            continue
        for s in range(n):
            tr = sum(complex(mats[s][i, i]) for i in range(dim))
            acc = sum(p.multiplicity * p.h[s] for p in rep.points)
            trace_resid = max(trace_resid,
                              abs(acc - tr) / (dim * max(1.0, max_abs(mats[s]))))
    check("trace_identity", trace_resid)

    # Bethe vectors on the quotient spectrum
    bethe_entries = []
    bmax = 0.0
    omega_ls = []
    finst = inst.to_float() if exact else inst
    fsys = build_gaudin(finst) if (exact and report_l.points) else sysd
    for p in report_l.points:
        try:
            bv = bethe_vector(finst, fsys, p, tol=gate)
        except VerificationError as err:
            failures.append("bethe_vector")
            bethe_entries.append({"h": _ser_seq(p.h), "error": str(err)})
            continue
        bmax = max(bmax, max(bv.eigen_residuals, default=0.0), bv.e12_residual)
        omega_ls.append(np.asarray(bv.omega_L, dtype=complex))
        roots = sorted(np.roots([1.0] + [complex(v) for v in p.a]).tolist(),
                       key=lambda c: (c.real, c.imag)) if l else []
        bethe_entries.append({
            "h": _ser_seq(p.h),
            "bethe_roots": _ser_seq(roots),
            "eigen_residuals": _ser_seq(bv.eigen_residuals),
            "e12_residual": _ser(bv.e12_residual),
            "via_subspace": bv.via_subspace,
        })
    check("bethe_eigen_residual", bmax)
    span_rank = 0
    if omega_ls and dim_l:
        W = np.stack(omega_ls, axis=1)
        s = np.linalg.svd(W, compute_uv=False)
        span_rank = int(np.sum(s > tol.svd_rel * s[0])) if s.size and s[0] > 0 else 0
        if report_l.all_simple:
            check("bethe_span_rank", abs(span_rank - dim_l))

    groth = None
    if report_l.all_simple and report_l.points:
        try:
            ws = grothendieck_weights(inst, report_l.points, tol=gate)
            funcs = [[1.0] * len(report_l.points)] + \
                [[complex(p.h[s]) for p in report_l.points] for s in range(n)]
            gram = np.array([[sum(w * (fi * fj) for w, fi, fj in zip(ws, f1, f2))
                              for f2 in funcs] for f1 in funcs])
            sym = float(np.abs(gram - gram.T).max())
            groth = {"weights": _ser_seq(ws),
                     "form_symmetry": check("grothendieck_symmetry", sym)}
        except SingularJacobianError as err:
            failures.append("grothendieck_jacobian")
            groth = {"error": str(err)}

    def point_dict(p):
        return {
            "h": _ser_seq(p.h),
            "a": _ser_seq(p.a),
            "atilde": _ser_seq(p.atilde) if p.atilde is not None else None,
            "multiplicity": p.multiplicity,
            "residuals": {k: _ser(v) for k, v in p.residuals.items()},
        }

    report = {
        "dims": {
            "weight_space": weight_space_dim(n, l),
            "sing_m": dim_m,
            "sing_l": dim_l,
            "schubert": schub,
            "bethe_algebra_sing_m": len(alg_m),
            "bethe_algebra_sing_l": len(alg_l),
            "annihilator": len(ann),
        },
        "global_checks": global_checks,
        "spectrum_sing_l": {
            "seed": seed,
            "total_multiplicity": report_l.total_multiplicity,
            "all_simple": report_l.all_simple,
            "points": [point_dict(p) for p in report_l.points],
            "residual_summary": {k: _ser(v) for k, v in
                                 report_l.residual_summary.items()},
        },
        "spectrum_sing_m": {
            "seed": seed,
            "total_multiplicity": report_m.total_multiplicity,
            "all_simple": report_m.all_simple,
            "points": [point_dict(p) for p in report_m.points],
        },
        "trace_identity": trace_resid,
        "bethe_vectors": bethe_entries,
        "bethe_span_rank": span_rank,
        "grothendieck": groth,
        "timing": time.perf_counter() - t0,
    }
    return report, failures


def cmd_spectrum(config: dict):
    inst, mode, seed, tol = load_config(config)
    report, failures = run_pipeline(inst, seed, tol)
    report = {
        "instance": {
            "m": list(inst.m), "l": inst.l, "z": _ser_seq(inst.z),
            "mode": mode, "seed": seed,
        },
        **report,
        "failures": failures,
    }
    return report, failures


def cmd_schubert(m, l: int) -> int:
    return schubert_dimension(tuple(m), l)


def _sample_z(rng, n: int, kind: str):
    while True:
        if kind == "real":
            z = rng.uniform(-3.0, 3.0, size=n)
            z = [complex(v) for v in z]
        else:
            z = [complex(a, b) for a, b in
                 zip(rng.uniform(-3.0, 3.0, size=n), rng.uniform(-1.5, 1.5, size=n))]
        if min(abs(z[i] - z[j]) for i in range(n) for j in range(i + 1, n)) > 0.5:
            return z


def cmd_verify(config: dict, samples: int):
    """Re-run the pipeline across seeded random z draws (real and complex).

    Checks that the multiplicity-weighted point counts are constant across
    draws and equal the space dimensions, and that real draws produce a
    simple, honestly diagonalizable spectrum.
    """
    if samples < 1:
        raise ConfigError("samples must be >= 1")
    inst0, mode, seed, tol = load_config(config)
    rng = np.random.default_rng(seed)
    runs = []
    failures = []
    counts = []
    for k in range(samples):
        kind = "real" if k % 2 == 0 else "complex"
        z = _sample_z(rng, inst0.n, kind)
        inst = ProblemInstance(inst0.m, inst0.l, z)
        rep, fails = run_pipeline(inst, seed + 1000 * k, tol)
        entry = {
            "z": _ser_seq(inst.z),
            "kind": kind,
            "totals": {"sing_m": rep["spectrum_sing_m"]["total_multiplicity"],
                       "sing_l": rep["spectrum_sing_l"]["total_multiplicity"]},
            "distinct_points": {
                "sing_m": len(rep["spectrum_sing_m"]["points"]),
                "sing_l": len(rep["spectrum_sing_l"]["points"])},
            "all_simple": rep["spectrum_sing_l"]["all_simple"],
            "failures": fails,
        }
        counts.append((entry["totals"]["sing_m"], entry["totals"]["sing_l"]))
        if fails:
            failures.append(f"sample_{k}:" + ",".join(fails))
        if kind == "real":
            sysd = build_gaudin(inst)
            ok_l, worst = diagonalizability_check(list(sysd.H_L), tol=tol.residual,
                                                  seed=seed + 17 * k)
            entry["diagonalizable"] = bool(ok_l)
            entry["diagonalizability_residual"] = worst
            if not (ok_l and entry["all_simple"]):
                failures.append(f"sample_{k}:real_z_multiplicity_one")
        runs.append(entry)
    if len(set(counts)) != 1:
        failures.append("counts_vary_across_z")
    report = {
        "instance": {"m": list(inst0.m), "l": inst0.l, "mode": mode, "seed": seed},
        "samples": runs,
        "counts_constant": len(set(counts)) == 1,
        "failures": failures,
    }
    return report, failures


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="gaudinlab",
        description="Commuting spectra of Gaudin Hamiltonians versus schemes "
                    "of second-order operators with polynomial kernels")
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("spectrum", help="full verification pipeline for one instance")
    ps.add_argument("--config", required=True, help="JSON config file")
    ps.add_argument("--out", help="write the JSON report here instead of stdout")

    pb = sub.add_parser("schubert", help="tensor-multiplicity dimension count")
    pb.add_argument("--m", required=True, help="comma-separated weights, e.g. 1,1,1")
    pb.add_argument("--l", required=True, type=int)

    pv = sub.add_parser("verify", help="re-run the pipeline across random z draws")
    pv.add_argument("--config", required=True)
    pv.add_argument("--samples", required=True, type=int)
    pv.add_argument("--out")

    args = ap.parse_args(argv)
    try:
        if args.command == "schubert":
            print(cmd_schubert([int(v) for v in args.m.split(",")], args.l))
            return 0
        with open(args.config) as fh:
            config = json.load(fh)
        if args.command == "spectrum":
            report, failures = cmd_spectrum(config)
        else:
            report, failures = cmd_verify(config, args.samples)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if failures:
        print("failed checks: " + ", ".join(failures), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

from fractions import Fraction as F

import numpy as np
import pytest

from gaudinlab import (
    ProblemInstance,
    annihilator_ideal,
    bethe_algebra_basis,
    build_gaudin,
    induced_map_kernel,
    polynomial_valued_kernel,
)
from gaudinlab.gaudin import apply_universal_operator
from gaudinlab.numcore import InconsistentSystemError, identity, max_abs

from conftest import random_exact_instance


def exact_vec(vals):
    v = np.empty(len(vals), dtype=object)
    for i, x in enumerate(vals):
        v[i] = F(x)
    return v


class TestBuildGaudin:
    def test_E1_closed_form(self, E1):
        # two linear constraints (sum H = 0, sum z_s H_s = l*lt) pin the
        # n = 2 restriction: H_1 = l*lt/(z_1 - z_2) = -2
        s = build_gaudin(E1)
        assert s.H_sing[0][0, 0] == F(-2)
        assert s.H_sing[1][0, 0] == F(2)

    def test_E3_closed_form(self, E3):
        s = build_gaudin(E3)
        assert s.H_sing[0][0, 0] == F(-6)

    def test_sum_zero_everywhere(self, rng):
        for _ in range(6):
            inst = random_exact_instance(rng, max_level_dim=20)
            s = build_gaudin(inst)
            assert max_abs(sum(s.H_big[1:], s.H_big[0])) == 0.0

    def test_commutativity_exact(self, rng):
        for _ in range(6):
            inst = random_exact_instance(rng, max_level_dim=20)
            s = build_gaudin(inst)
            for i in range(inst.n):
                for j in range(i + 1, inst.n):
                    comm = s.H_big[i] @ s.H_big[j] - s.H_big[j] @ s.H_big[i]
                    assert max_abs(comm) == 0.0

    def test_weighted_sum_identity_on_sing(self, rng):
        for _ in range(6):
            inst = random_exact_instance(rng, max_level_dim=20)
            s = build_gaudin(inst)
            if not s.dim_sing_m:
                continue
            acc = sum((s.H_sing[k] * inst.z[k] for k in range(1, inst.n)),
                      s.H_sing[0] * inst.z[0])
            tgt = identity(s.dim_sing_m) * F(inst.l * inst.ltilde)
            assert max_abs(acc - tgt) == 0.0

    def test_g0_identity(self, rng):
        for _ in range(5):
            inst = random_exact_instance(rng, max_level_dim=20)
            s = build_gaudin(inst)
            if s.dim_sing_m:
                tgt = identity(s.dim_sing_m) * F(inst.l * inst.ltilde)
                assert max_abs(s.G[0] - tgt) == 0.0

    def test_shapovalov_symmetry(self, rng):
        for _ in range(5):
            inst = random_exact_instance(rng, max_level_dim=20)
            s = build_gaudin(inst)
            for H in s.H_big:
                assert max_abs(s.gram @ H - H.T @ s.gram) == 0.0
            for H in s.H_sing:
                assert max_abs(s.gram_sing @ H - H.T @ s.gram_sing) == 0.0

    def test_quotient_well_defined(self, rng):
        # Hamiltonians preserve the radical, so the quotient action exists
        for _ in range(5):
            inst = random_exact_instance(rng, max_level_dim=20)
            s = build_gaudin(inst)
            W = s.shq.radical
            if W.shape[1] and s.dim_sing_l:
                for H in s.H_sing:
                    assert max_abs(s.shq.sh @ (H @ W)) == 0.0

    def test_float_matches_exact(self, E2):
        se = build_gaudin(E2)
        sf = build_gaudin(E2.to_float())
        from gaudinlab.numcore import to_float_array
        for A, B in zip(se.H_big, sf.H_big):
            assert np.abs(to_float_array(A) - B).max() < 1e-12


class TestPolynomialKernel:
    def test_E1_unique_coefficients(self, E1):
        s = build_gaudin(E1)
        (v1,) = polynomial_valued_kernel(s, "sing_m", exact_vec([1]), 1)
        assert v1[0] == F(-1, 2)

    def test_E1_degree_lt_on_quotient(self, E1):
        s = build_gaudin(E1)
        v1, v2 = polynomial_valued_kernel(s, "sing_l", exact_vec([1]), 2)
        assert v1[0] == 0 and v2[0] == 0

    def test_deg_zero(self):
        inst = ProblemInstance([1, 1], 0, [0, 1])
        s = build_gaudin(inst)
        assert polynomial_valued_kernel(s, "sing_m", exact_vec([1]), 0) == []

    def test_solution_annihilated(self, rng):
        # the defining property, checked coefficient by coefficient
        for _ in range(5):
            inst = random_exact_instance(rng, max_level_dim=20)
            s = build_gaudin(inst)
            d = s.dim_sing_m
            if not d:
                continue
            v0 = exact_vec([int(rng.integers(-3, 4)) for _ in range(d)])
            if max_abs(v0) == 0:
                v0[0] = F(1)
            vs = polynomial_valued_kernel(s, "sing_m", v0, inst.l)
            out = apply_universal_operator(s, "sing_m", [v0] + vs)
            assert max(max_abs(c) for c in out) == 0.0

    def test_quotient_pair_annihilated(self, rng):
        for _ in range(5):
            inst = random_exact_instance(rng, max_level_dim=20, dominant=True,
                                         min_sing_l=1)
            s = build_gaudin(inst)
            d = s.dim_sing_l
            v0 = exact_vec([int(rng.integers(-3, 4)) for _ in range(d)])
            if max_abs(v0) == 0:
                v0[0] = F(1)
            for deg in (inst.l, inst.ltilde):
                vs = polynomial_valued_kernel(s, "sing_l", v0, deg)
                out = apply_universal_operator(s, "sing_l", [v0] + vs)
                assert max(max_abs(c) for c in out) == 0.0

    def test_bad_degree_rejected(self, E1):
        s = build_gaudin(E1)
        with pytest.raises(ValueError):
            polynomial_valued_kernel(s, "sing_m", exact_vec([1]), 3)

    def test_second_degree_inconsistent_outside_full_scheme(self):
        # m=(1,3), l=2: the singular-space point admits no degree-lt kernel
        # element, so the pinned-coefficient equation cannot be satisfied
        inst = ProblemInstance([1, 3], 2, [0, 1])
        s = build_gaudin(inst)
        with pytest.raises(InconsistentSystemError):
            polynomial_valued_kernel(s, "sing_m", exact_vec([1]), inst.ltilde)

    def test_l0_second_kernel_constant_pinned(self):
        # for l = 0 the pinned coefficient is the constant term
        inst = ProblemInstance([2, 1], 0, [0, 1])
        s = build_gaudin(inst)
        vs = polynomial_valued_kernel(s, "sing_l", exact_vec([1]), inst.ltilde)
        assert vs[-1][0] == 0
        out = apply_universal_operator(s, "sing_l", [exact_vec([1])] + vs)
        assert max(max_abs(c) for c in out) == 0.0

    def test_midsize_exact_identities(self):
        # a 15-dim weight space: the identities stay literal zeros
        inst = ProblemInstance([3, 3, 3], 4, ["0", "1", "-2/3"])
        s = build_gaudin(inst)
        assert (s.dim_sing_m, s.dim_sing_l) == (5, 2)
        assert max_abs(sum(s.H_big[1:], s.H_big[0])) == 0.0
        for i in range(3):
            for j in range(i + 1, 3):
                assert max_abs(s.H_big[i] @ s.H_big[j]
                               - s.H_big[j] @ s.H_big[i]) == 0.0
        tgt = identity(5) * F(inst.l * inst.ltilde)
        acc = sum((s.H_sing[k] * inst.z[k] for k in range(1, 3)),
                  s.H_sing[0] * inst.z[0])
        assert max_abs(acc - tgt) == 0.0
        assert len(bethe_algebra_basis(list(s.H_L))) == 2


class TestBetheAlgebra:
    def test_single_scalar(self):
        m = np.empty((1, 1), dtype=object)
        m[0, 0] = F(5)
        assert len(bethe_algebra_basis([m])) == 1

    def test_E2_quotient_dim(self, E2):
        s = build_gaudin(E2)
        assert len(bethe_algebra_basis(list(s.H_L))) == 2

    def test_E3_sing_dim(self, E3):
        s = build_gaudin(E3)
        assert len(bethe_algebra_basis(list(s.H_sing))) == 1

    def test_dim_equals_sing_l_dominant(self, rng):
        for _ in range(5):
            inst = random_exact_instance(rng, max_level_dim=20, dominant=True,
                                         min_sing_l=1)
            s = build_gaudin(inst)
            assert len(bethe_algebra_basis(list(s.H_L))) == s.dim_sing_l

    def test_dim_equals_sing_m_separating(self, rng):
        for _ in range(5):
            inst = random_exact_instance(rng, max_level_dim=18)
            s = build_gaudin(inst)
            if s.dim_sing_m:
                assert len(bethe_algebra_basis(list(s.H_sing))) == s.dim_sing_m


class TestAnnihilator:
    def test_zero_kernel_gives_whole_algebra(self, E1):
        s = build_gaudin(E1)
        alg = bethe_algebra_basis(list(s.H_sing))
        ker = induced_map_kernel(alg, s.shq.sh)
        assert ker == []
        assert len(annihilator_ideal(alg, ker)) == len(alg)

    def test_dead_quotient(self):
        inst = ProblemInstance([1, 2], 2, [0, 1])
        s = build_gaudin(inst)
        alg = bethe_algebra_basis(list(s.H_sing))
        ker = induced_map_kernel(alg, s.shq.sh)
        assert len(annihilator_ideal(alg, ker)) == 0 == s.dim_sing_l

    def test_E2(self, E2):
        s = build_gaudin(E2)
        alg = bethe_algebra_basis(list(s.H_sing))
        ker = induced_map_kernel(alg, s.shq.sh)
        assert len(annihilator_ideal(alg, ker)) == 2

    def test_dim_matches_sing_l(self, rng):
        for _ in range(6):
            inst = random_exact_instance(rng, max_level_dim=18)
            s = build_gaudin(inst)
            if not s.dim_sing_m:
                continue
            alg = bethe_algebra_basis(list(s.H_sing))
            ker = induced_map_kernel(alg, s.shq.sh)
            J = annihilator_ideal(alg, ker)
            assert len(J) == s.dim_sing_l
            # J really annihilates the kernel
            for f in J:
                for g in ker:
                    assert max_abs(f @ g) == 0.0

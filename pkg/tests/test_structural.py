"""The decision procedures: pencil sampling, algebraic route, controllability."""

import random
from fractions import Fraction

import pytest

from sfspectrum import (
    ChannelSubset,
    MultiChannelSystem,
    NotLinearlyParameterized,
    NumericSystem,
    ParamMatrix,
    ParamPoint,
    ParamPoly,
    closed_loop_generic_rank,
    decide_linear,
    decide_polynomial,
    fixed_spectrum,
    generic_dims,
    markov_identity,
    structurally_controllable,
)
from sfspectrum.structural import (
    REASON_GENERIC_RANK,
    REASON_PENCIL_DROP,
    REASON_PROPER_SUBSPACE,
    char_poly_exact,
    pencil_drop_at_point,
    poly_gcd,
)
from sfspectrum.system import all_subsets
from sfspectrum.ensembles import random_binary_system

p = ParamPoly.param
F = Fraction


class TestExactHelpers:
    def test_char_poly_companion(self):
        # companion matrix of t^2 - 3t + 2 = (t-1)(t-2)
        M = [[F(0), F(-2)], [F(1), F(3)]]
        assert char_poly_exact(M) == [F(1), F(-3), F(2)]

    def test_poly_gcd_shared_factor(self):
        # (t-1)(t-2) and (t-1)(t+5)
        a = [F(1), F(-3), F(2)]
        b = [F(1), F(4), F(-5)]
        assert poly_gcd(a, b) == [F(1), F(-1)]

    def test_poly_gcd_coprime(self):
        assert poly_gcd([F(1), F(0)], [F(1), F(-3)]) == [F(1)]


class TestDecidePolynomial:
    def test_worked_example_no_sfs(self, worked_system):
        verdict = decide_polynomial(worked_system, trials=10, seed=4)
        assert not verdict.has_sfs
        assert verdict.route == "pencil-sampling"
        assert verdict.witness is None and verdict.reason is None
        assert all(d["certified"] for d in verdict.diagnostics["subsets"])

    def test_no_inputs_or_outputs_is_sfs(self):
        sys_ = MultiChannelSystem(
            n=2,
            channels=((0, 0),),
            A=ParamMatrix.from_rows([[p(0), 0], [0, p(1)]], 2),
            B_blocks=(ParamMatrix.zeros(2, 0, 2),),
            C_blocks=(ParamMatrix.zeros(0, 2, 2),),
            q=2,
        )
        verdict = decide_polynomial(sys_, seed=8)
        assert verdict.has_sfs
        assert verdict.reason == REASON_PENCIL_DROP
        assert verdict.witness == ChannelSubset(())

    def test_scalar_chain_no_sfs(self):
        sys_ = MultiChannelSystem(
            n=1,
            channels=((1, 1),),
            A=ParamMatrix.from_rows([[p(0)]], 3),
            B_blocks=(ParamMatrix.from_rows([[p(1)]], 3),),
            C_blocks=(ParamMatrix.from_rows([[p(2)]], 3),),
            q=3,
        )
        assert not decide_polynomial(sys_, seed=2).has_sfs

    def test_certificates_replay_on_fresh_points(self, worked_system):
        rng = random.Random(77)
        for s in all_subsets(2):
            for _ in range(5):
                values = [F(rng.randint(-300, 300)) for _ in range(4)]
                assert not pencil_drop_at_point(
                    worked_system, s, values, seed=rng.randrange(2**31)
                )


class TestMarkovIdentity:
    def test_full_subset_vacuous(self, worked_system):
        assert markov_identity(worked_system, ChannelSubset.of(0, 1))

    def test_worked_example_first_channel_nonzero(self, worked_system):
        # complement output times first input block is p1*p2, not zero
        assert not markov_identity(worked_system, ChannelSubset.of(0), seed=5)

    def test_zero_input_block(self):
        sys_ = MultiChannelSystem(
            n=1,
            channels=((1, 1),),
            A=ParamMatrix.from_rows([[p(0)]], 2),
            B_blocks=(ParamMatrix.zeros(1, 1, 2),),
            C_blocks=(ParamMatrix.from_rows([[p(1)]], 2),),
            q=2,
        )
        assert markov_identity(sys_, ChannelSubset.of(0))


class TestGenericDims:
    def test_empty_subset_convention(self, worked_system):
        dims = generic_dims(worked_system, ChannelSubset(()))
        assert dims.ctrb_dim == 0
        assert dims.unobs_dim == 0  # stacked C observes everything generically

    def test_empty_complement_convention(self, worked_system):
        dims = generic_dims(worked_system, ChannelSubset.of(0, 1))
        assert dims.unobs_dim == 2
        assert dims.ctrb_dim == 2

    def test_monotone_in_subset(self):
        for seed in range(15):
            sys_ = random_binary_system(seed=seed + 400)
            by_subset = {
                s.members: generic_dims(sys_, s, seed=seed) for s in all_subsets(sys_.k)
            }
            for s in all_subsets(sys_.k):
                for t in all_subsets(sys_.k):
                    if set(s.members) <= set(t.members):
                        assert by_subset[s.members].ctrb_dim <= by_subset[t.members].ctrb_dim
                        assert by_subset[s.members].unobs_dim <= by_subset[t.members].unobs_dim


class TestDecideLinear:
    def test_worked_example_no_sfs(self, worked_system):
        verdict = decide_linear(worked_system, seed=6)
        assert not verdict.has_sfs
        assert verdict.diagnostics["closed_loop_grank"] == 2
        markov_by_subset = {
            tuple(d["subset"]): d["markov_zero"] for d in verdict.diagnostics["subsets"]
        }
        assert markov_by_subset[(1,)] is False and markov_by_subset[(2,)] is False
        assert markov_by_subset[()] is True and markov_by_subset[(1, 2)] is True

    def test_unobservable_system_is_sfs(self):
        sys_ = MultiChannelSystem(
            n=1,
            channels=((1, 1),),
            A=ParamMatrix.from_rows([[p(0)]], 2),
            B_blocks=(ParamMatrix.from_rows([[p(1)]], 2),),
            C_blocks=(ParamMatrix.zeros(1, 1, 2),),
            q=2,
        )
        verdict = decide_linear(sys_, seed=3)
        assert verdict.has_sfs
        assert verdict.reason == REASON_PROPER_SUBSPACE
        assert verdict.witness == ChannelSubset(())

    def test_rejects_nonlinear(self, counterexample_system):
        with pytest.raises(NotLinearlyParameterized):
            decide_linear(counterexample_system)

    def test_generic_rank_deficient_route(self):
        # two states sharing one parameter on the diagonal, no inputs/outputs
        sys_ = MultiChannelSystem(
            n=2,
            channels=((0, 0),),
            A=ParamMatrix.from_rows([[p(0), 0], [0, 0]], 1),
            B_blocks=(ParamMatrix.zeros(2, 0, 1),),
            C_blocks=(ParamMatrix.zeros(0, 2, 1),),
            q=1,
        )
        verdict = decide_linear(sys_, seed=1)
        assert verdict.has_sfs
        assert verdict.reason == REASON_GENERIC_RANK
        assert closed_loop_generic_rank(sys_) == 1


class TestConventionExercises:
    def test_input_only_channel(self):
        # one input, no outputs: the feedback pattern is empty, the closed
        # loop is A itself, and the zero eigenvalue is structurally fixed
        sys_ = MultiChannelSystem(
            n=1,
            channels=((1, 0),),
            A=ParamMatrix.zeros(1, 1, 1),
            B_blocks=(ParamMatrix.from_rows([[p(0)]], 1),),
            C_blocks=(ParamMatrix.zeros(0, 1, 1),),
            q=1,
        )
        v_linear = decide_linear(sys_, seed=2)
        assert v_linear.has_sfs and v_linear.reason == REASON_GENERIC_RANK
        v_pencil = decide_polynomial(sys_, seed=2)
        assert v_pencil.has_sfs
        assert closed_loop_generic_rank(sys_) == 0

    def test_pencil_witness_matches_numeric_route(self):
        # a subset reported as witness must actually drop the pencil at
        # random numeric points, i.e. appear among the fixed-spectrum
        # witnesses there
        rng = random.Random(21)
        checked = 0
        for seed in range(120):
            sys_ = random_binary_system(seed=seed + 31_000)
            verdict = decide_polynomial(sys_, trials=10, seed=seed)
            if verdict.reason != REASON_PENCIL_DROP:
                continue
            checked += 1
            for _ in range(3):
                values = tuple(F(rng.randint(-40, 40)) for _ in range(sys_.q))
                ns = NumericSystem.from_system(sys_, ParamPoint(values=values, seed=0))
                result = fixed_spectrum(ns)
                witnesses = {
                    w.members for fe in result.fixed_eigenvalues for w in fe.witnesses
                }
                assert verdict.witness.members in witnesses
            if checked >= 8:
                break
        assert checked >= 5


class TestAgreementInvariants:
    def test_routes_agree_on_random_linear_systems(self):
        for seed in range(60):
            sys_ = random_binary_system(seed=seed + 5000)
            v1 = decide_polynomial(sys_, trials=10, seed=seed)
            v2 = decide_linear(sys_, trials=10, seed=seed + 1)
            assert v1.has_sfs == v2.has_sfs, f"seed {seed + 5000}"

    def test_no_sfs_implies_empty_fixed_spectrum_at_random_points(self):
        rng = random.Random(12)
        checked = 0
        for seed in range(40):
            sys_ = random_binary_system(seed=seed + 7000)
            if decide_polynomial(sys_, seed=seed).has_sfs:
                continue
            checked += 1
            for _ in range(3):
                values = tuple(F(rng.randint(-40, 40)) for _ in range(sys_.q))
                ns = NumericSystem.from_system(sys_, ParamPoint(values=values, seed=0))
                assert fixed_spectrum(ns).is_empty
            if checked >= 5:
                break
        assert checked >= 3

    def test_generic_rank_deficiency_pins_zero_eigenvalue(self):
        rng = random.Random(13)
        checked = 0
        for seed in range(200):
            sys_ = random_binary_system(seed=seed + 11000)
            verdict = decide_linear(sys_, seed=seed)
            if verdict.reason != REASON_GENERIC_RANK:
                continue
            checked += 1
            for _ in range(3):
                values = tuple(F(rng.randint(-30, 30)) for _ in range(sys_.q))
                ns = NumericSystem.from_system(sys_, ParamPoint(values=values, seed=0))
                result = fixed_spectrum(ns)
                assert any(abs(fe.value) < 1e-6 for fe in result.fixed_eigenvalues)
            if checked >= 5:
                break
        assert checked >= 3


class TestStructurallyControllable:
    def test_scalar_pair(self):
        A = ParamMatrix.from_rows([[p(0)]], 2)
        B = ParamMatrix.from_rows([[p(1)]], 2)
        assert structurally_controllable(A, B)

    def test_zero_input(self):
        A = ParamMatrix.from_rows([[p(0)]], 1)
        B = ParamMatrix.zeros(1, 1, 1)
        assert not structurally_controllable(A, B)

    def test_two_state_chain(self):
        A = ParamMatrix.from_rows([[0, 0], [p(0), 0]], 2)
        B = ParamMatrix.from_rows([[p(1)], [0]], 2)
        assert structurally_controllable(A, B)

    def test_chain_direction_matters(self):
        A = ParamMatrix.from_rows([[0, p(0)], [0, 0]], 2)
        B = ParamMatrix.from_rows([[0], [p(1)]], 2)
        # [B, AB] = [[0, p1 p2], [p2, 0]]: p1 appears; controllable
        assert structurally_controllable(A, B)
        # reversed chain: x1 is unreachable, [A2 B2] already rank deficient
        A2 = ParamMatrix.from_rows([[0, 0], [p(0), 0]], 2)
        B2 = ParamMatrix.from_rows([[0], [p(1)]], 2)
        assert not structurally_controllable(A2, B2)

    def test_full_rank_but_parameter_never_appears(self):
        # diagonal A makes [A B] full rank, yet x2 is untouched by the input:
        # p2 never enters B, AB, A^2 B, so the pair is not controllable
        A = ParamMatrix.from_rows([[p(0), 0], [0, p(1)]], 3)
        B = ParamMatrix.from_rows([[p(2)], [0]], 3)
        from sfspectrum.polymatrix import grank as _grank
        from sfspectrum.polymatrix import ParamMatrix as _PM

        assert _grank(_PM.hstack([A, B])) == 2
        assert not structurally_controllable(A, B)

    def test_rejects_nonlinear_pair(self):
        A = ParamMatrix.from_rows([[p(0) * p(0)]], 1)
        B = ParamMatrix.from_rows([[1]], 1)
        with pytest.raises(NotLinearlyParameterized):
            structurally_controllable(A, B)

    def test_implies_pointwise_controllability_generically(self):
        rng = random.Random(3)
        from sfspectrum.polymatrix import FIELD_PRIME, rank_exact

        found = 0
        for seed in range(40):
            n = rng.randint(1, 3)
            m = rng.randint(1, 2)
            q = n * n + n * m
            idx = iter(range(q))
            A = ParamMatrix.from_rows(
                [
                    [p(next(idx)) if rng.random() < 0.5 else 0 for _ in range(n)]
                    for _ in range(n)
                ],
                q,
            )
            B = ParamMatrix.from_rows(
                [
                    [p(next(idx)) if rng.random() < 0.6 else 0 for _ in range(m)]
                    for _ in range(n)
                ],
                q,
            )
            if not structurally_controllable(A, B, seed=seed):
                continue
            found += 1
            for trial in range(5):
                values = [rng.randrange(FIELD_PRIME) for _ in range(q)]
                An = A.evaluate_at(values, FIELD_PRIME)
                Bn = B.evaluate_at(values, FIELD_PRIME)
                from sfspectrum.structural import _mat_mul_mod

                blocks = []
                M = Bn
                for _ in range(n):
                    blocks.append(M)
                    M = _mat_mul_mod(An, M, FIELD_PRIME)
                krylov = [sum((blk[i] for blk in blocks), []) for i in range(n)]
                assert rank_exact(krylov, FIELD_PRIME) == n
        assert found >= 5

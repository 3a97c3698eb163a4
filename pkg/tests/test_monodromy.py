import os
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pdt import linalg as la
from pdt import monodromy as mono
from pdt.errors import MalformedInputError, NeedsBaseChangeError, NotTypeIVError
from pdt.monodromy import Case
from pdt.qspace import Subspace, orthogonal_complement

from families import eichler, nilpotent, random_nilpotent, random_orthogonal, tube_space, unit

SP = tube_space(1, 1)
E1, F1, E2, F2, P, Q = (unit(6, i) for i in range(6))


def jordan_weights(space, n):
    """W_k from a Jordan basis (sympy): in a chain of length L the vector N^j v has weight L - 1 - 2j."""
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in n])
    p, j = m.jordan_form()
    d = len(n)
    weights = []
    i = 0
    while i < d:
        length = 1
        while i + length < d and j[i + length - 1, i + length] == 1:
            length += 1
        weights += [-(length - 1) + 2 * t for t in range(length)]
        i += length
    cols = [tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in p.col(c)) for c in range(d)]
    out = {}
    for k in range(-3, 4):
        out[k] = Subspace(space, [c for c, w in zip(cols, weights) if w <= k])
    return out


class TestLog:
    def test_identity(self):
        nd = mono.log_unipotent(mono.MonodromyOperator(SP, la.identity(6)))
        assert la.is_zero_matrix(nd.N)

    @pytest.mark.parametrize("u", [E2, tuple(a - b for a, b in zip(E2, F2))])
    def test_round_trip(self, u):
        n0 = mono.wedge_matrix(SP, E1, u)
        t = mono.exp_series(n0)
        assert mono.log_unipotent(mono.MonodromyOperator(SP, t)).N == n0
        assert la.is_zero_matrix(la.mat_pow(la.mat_sub(t, la.identity(6)), 2)) == (SP.dot(u, u) == 0)

    def test_not_unipotent(self):
        t = la.mat_scale(-1, mono.exp_series(mono.wedge_matrix(SP, E1, E2)))
        with pytest.raises(NeedsBaseChangeError):
            mono.MonodromyOperator(SP, t)
        assert mono.unipotent_power(SP, t) == 2

    def test_unipotent_power_respects_env_bound(self, monkeypatch):
        rot = la.block_diag(la.identity(4), la.mat([[0, -1], [1, 0]]))
        assert mono.unipotent_power(SP, rot) == 4
        monkeypatch.setenv("PDT_MAX_ORDER", "3")
        with pytest.raises(NeedsBaseChangeError):
            mono.unipotent_power(SP, rot)

    def test_not_orthogonal(self):
        t = la.diag([2, 1, 1, 1, 1, 1])
        with pytest.raises(MalformedInputError):
            mono.MonodromyOperator(SP, t)


class TestClassify:
    def test_case_one(self):
        nd = mono.classify_nilpotent(SP, la.zeros(6))
        assert nd.case == Case.I and nd.J.dim == 0

    def test_case_two(self):
        nd = nilpotent(SP, E1, E2)
        assert nd.case == Case.II
        assert nd.J == Subspace(SP, [E1, E2]) and nd.J.is_totally_isotropic()
        assert nd.J0 == nd.J

    def test_case_three(self):
        nd = nilpotent(SP, E1, tuple(a - b for a, b in zip(E2, F2)))
        assert nd.case == Case.III
        assert nd.u_norm == -2 and nd.polarized
        assert nd.J0 == Subspace(SP, [E1])
        assert not la.is_zero_matrix(la.matmul(nd.N, nd.N))

    def test_case_three_unpolarized(self):
        nd = nilpotent(SP, E1, P)
        assert nd.case == Case.III and not nd.polarized

    def test_rank_too_big(self):
        n = la.mat_add(mono.wedge_matrix(SP, E1, P), mono.wedge_matrix(SP, F1, Q))
        with pytest.raises(NotTypeIVError):
            mono.classify_nilpotent(SP, n)

    def test_not_in_lie_algebra(self):
        n = la.outer(E1, E2)
        with pytest.raises(NotTypeIVError):
            mono.classify_nilpotent(SP, n)

    @pytest.mark.parametrize("case", ["II", "III"])
    def test_random_normal_form(self, case):
        rng = random.Random(11)
        for _ in range(20):
            nd = random_nilpotent(rng, case)
            sp = nd.space
            assert nd.case == Case(case)
            assert sp.dot(nd.e, nd.e) == 0 and sp.dot(nd.e, nd.u) == 0
            assert mono.wedge_matrix(sp, nd.e, nd.u) == nd.N
            assert Subspace(sp, la.nullspace(nd.N, sp.dim)) == orthogonal_complement(nd.J)
            if case == "III" and nd.u_norm < 0:
                # (N^2 a . a) = -(u.u)(a.e)^2 <= 0
                n2 = la.matmul(nd.N, nd.N)
                for i in range(sp.dim):
                    a = unit(sp.dim, i)
                    val = sp.dot(la.matvec(n2, a), a)
                    assert val == -nd.u_norm * sp.dot(a, nd.e) ** 2


class TestOneParam:
    def test_identity_at_zero_and_t_at_one(self):
        nd0 = nilpotent(SP, E1, tuple(a - b for a, b in zip(E2, F2)))
        t = mono.exp_series(nd0.N)
        nd = mono.classify_nilpotent(SP, mono.log_unipotent(mono.MonodromyOperator(SP, t)).N)
        assert mono.one_param(nd, 0) == la.identity(6)
        assert mono.one_param(nd, 1) == t

    def test_case_one_is_identity(self):
        nd = mono.classify_nilpotent(SP, la.zeros(6))
        assert mono.one_param(nd, Fraction(7, 3)) == la.identity(6)

    @settings(max_examples=50, deadline=None)
    @given(st.fractions(max_denominator=9, min_value=-5, max_value=5), st.sampled_from(["II", "III"]), st.integers(0, 10**6))
    def test_closed_form_is_exponential_and_orthogonal(self, w, case, seed):
        nd = random_nilpotent(random.Random(seed), case, 6)
        m = mono.one_param(nd, w)
        assert m == mono.exp_series(nd.N, w)
        g = nd.space.gram
        assert la.matmul(la.transpose(m), la.matmul(g, m)) == g

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from(["II", "III"]), st.integers(0, 10**6))
    def test_log_exp_round_trip(self, case, seed):
        nd = random_nilpotent(random.Random(seed), case, 7)
        t = mono.exp_series(nd.N)
        assert mono.log_unipotent(mono.MonodromyOperator(nd.space, t)).N == nd.N


class TestWeightFiltration:
    def test_case_one(self):
        wf = mono.weight_filtration(mono.classify_nilpotent(SP, la.zeros(6)))
        assert wf.steps == ((0, SP.full()),)

    def test_case_two(self):
        nd = nilpotent(SP, E1, E2)
        wf = mono.weight_filtration(nd)
        assert wf[-2].dim == 0 and wf[-1] == Subspace(SP, [E1, E2])
        assert wf[0] == orthogonal_complement(wf[-1]) and wf[1] == SP.full()

    def test_case_three(self):
        nd = nilpotent(SP, E1, tuple(a - b for a, b in zip(E2, F2)))
        wf = mono.weight_filtration(nd)
        n2 = la.matmul(nd.N, nd.N)
        assert wf[-2] == Subspace(SP, la.transpose(n2)) == Subspace(SP, [E1])
        assert wf[-1] == wf[-2] and wf[0] == wf[1] == orthogonal_complement(wf[-2])

    @pytest.mark.parametrize("case", ["II", "III"])
    def test_agrees_with_jordan_basis_oracle(self, case):
        rng = random.Random(5)
        for _ in range(8):
            nd = random_nilpotent(rng, case, rng.randint(5, 8))
            wf = mono.weight_filtration(nd)
            oracle = jordan_weights(nd.space, nd.N)
            for k in range(-3, 4):
                assert wf[k] == oracle[k], k

    @pytest.mark.parametrize("case", ["II", "III"])
    def test_generic_recursion_agrees_with_jordan_basis_oracle(self, case):
        rng = random.Random(6)
        for _ in range(8):
            nd = random_nilpotent(rng, case, rng.randint(5, 8))
            jm = mono.jacobson_morozov(nd.space, nd.N)
            oracle = jordan_weights(nd.space, nd.N)
            for k in range(-3, 4):
                assert jm[k] == oracle[k], k

    @pytest.mark.parametrize("case", ["II", "III"])
    def test_n_lowers_weight_by_two(self, case):
        rng = random.Random(9)
        for _ in range(10):
            nd = random_nilpotent(rng, case)
            wf = mono.weight_filtration(nd)
            for k in range(-2, 3):
                assert wf[k].contains(wf[k - 1])
                for v in wf[k].basis:
                    assert wf[k - 2].contains_vector(la.matvec(nd.N, v))


def test_random_orthogonal_helper_preserves_form():
    g = random_orthogonal(random.Random(1), SP)
    assert la.matmul(la.transpose(g), la.matmul(SP.gram, g)) == SP.gram
    assert eichler(SP, E1, P) != la.identity(6)

import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unclab.exponents import INF, ExponentPair
from unclab.regime_oracle import (
    AsymProfile,
    AsymTerm,
    LogArg,
    Verdict,
    H_profile,
    classify_nonsymmetric,
    classify_symmetric,
    consistency_nonsym_vs_H,
    discrete_constant_profile,
    local_constant_profile,
    sweep_consistency,
)

F = Fraction
PQ = [1, F(4, 3), 2, 3, INF]
GRID = [F(1, 10), F(1, 2), 1, 2]
SYM_GRID = [F(1, 4), F(1, 2), 1]


class TestNonsymmetric:
    @pytest.mark.parametrize("p, q, alpha, beta, verdict", [
        (2, 2, 1, 1, Verdict.HOLDS),
        (INF, 1, 1, F(2, 5), Verdict.FAILS),
        (1, 1, 1, 1, Verdict.HOLDS),
    ])
    def test_examples(self, p, q, alpha, beta, verdict):
        assert classify_nonsymmetric(1, ExponentPair(p, q), alpha, beta) is verdict

    @given(st.sampled_from(PQ), st.sampled_from(PQ), st.sampled_from(GRID),
           st.sampled_from(GRID), st.sampled_from(GRID), st.sampled_from([1, 2]))
    def test_monotone_in_beta(self, p, q, alpha, b1, b2, d):
        lo, hi = sorted((b1, b2))
        e = ExponentPair(p, q)
        if classify_nonsymmetric(d, e, alpha, lo) is Verdict.HOLDS:
            assert classify_nonsymmetric(d, e, alpha, hi) is Verdict.HOLDS


class TestSymmetric:
    @pytest.mark.parametrize("p, A, B, verdict", [
        (2, (1, 1), (1, 1), Verdict.HOLDS),
        (INF, (F(1, 4), 1), (1, F(2, 5)), Verdict.HOLDS),
        (INF, (F(1, 4), 1), (1, F(3, 10)), Verdict.FAILS),
    ])
    def test_examples(self, p, A, B, verdict):
        assert classify_symmetric(1, p, A, B) is verdict

    @pytest.mark.parametrize("A, B", list(itertools.product(
        itertools.product(SYM_GRID, repeat=2), itertools.product(SYM_GRID, repeat=2))))
    def test_duality_at_two(self, A, B):
        assert classify_symmetric(1, 2, A, B) is classify_symmetric(1, 2, B, A)

    def test_nonpositive_weights_rejected(self):
        with pytest.raises(ValueError):
            classify_symmetric(1, 2, (0, 1), (1, 1))

    def test_small_p_rejected(self):
        with pytest.raises(ValueError):
            classify_symmetric(1, F(3, 2), (1, 1), (1, 1))


class TestLocalProfile:
    def test_square_case(self):
        prof = local_constant_profile(1, ExponentPair(2, 2), (0, 1))
        assert prof.small == AsymTerm(F(1, 2))
        assert prof.large == AsymTerm(0)
        assert prof.render("t") == "t^0.5 | 1"

    def test_infinite_case(self):
        assert local_constant_profile(1, ExponentPair(2, 2), (F(1, 2), 1)).infinite

    def test_mixed_case_with_log(self):
        prof = local_constant_profile(1, ExponentPair(INF, 1), (F(1, 4), 1))
        assert prof.large == AsymTerm(F(1, 2))
        assert prof.small == AsymTerm(1, 1, LogArg.NEAR_ZERO)

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            local_constant_profile(1, ExponentPair(2, 2), (-1, 0))


class TestDiscreteProfile:
    @pytest.mark.parametrize("p, q, gamma, term", [
        (2, 4, 0, AsymTerm(F(1, 4))),
        (1, INF, 0, AsymTerm(0)),
        (INF, 2, F(1, 2), AsymTerm(0, F(1, 2))),
        (2, INF, F(1, 2), AsymTerm(0, F(1, 2))),
        (4, 1, 0, AsymTerm(F(1, 4))),
    ])
    def test_examples(self, p, q, gamma, term):
        prof = discrete_constant_profile(1, ExponentPair(p, q), gamma)
        assert prof.large == term and prof.small is None

    def test_negative_gamma_rejected(self):
        with pytest.raises(ValueError):
            discrete_constant_profile(1, ExponentPair(2, 2), -1)

    @pytest.mark.parametrize("p, q", [(1, 1), (1, 2), (F(4, 3), 2), (2, 2), (2, 3), (F(4, 3), 4)])
    @pytest.mark.parametrize("d", [1, 2])
    def test_overlap_with_local_profile(self, p, q, d):
        # above the critical weight both constants are bounded
        e = ExponentPair(p, q)
        gamma = d * (1 - e.inv_p - e.inv_q) + F(1, 4)
        if gamma < 0:
            gamma = F(1, 4)
        assert discrete_constant_profile(d, e, gamma).large == AsymTerm(0)


class TestHProfile:
    def test_heisenberg(self):
        prof = H_profile(1, ExponentPair(2, 2), (1, 1), (1, 1))
        assert prof.small == prof.large == AsymTerm(F(1, 2))
        assert prof.render() == "x^0.5 | x^0.5"

    def test_infinite(self):
        assert H_profile(1, ExponentPair(INF, 1), (1, 1), (1, F(2, 5))).infinite

    def test_sup_norm_case(self):
        prof = H_profile(1, ExponentPair(2, INF), (1, 1), (1, 1))
        assert prof.small == prof.large == AsymTerm(F(1, 3))

    @given(st.sampled_from(PQ), st.sampled_from(PQ), st.sampled_from(GRID), st.sampled_from(GRID),
           st.sampled_from(GRID), st.sampled_from(GRID), st.sampled_from(GRID))
    def test_finiteness_monotone_in_B2(self, p, q, a1, a2, b1, b2, b2_bigger):
        e = ExponentPair(p, q)
        lo, hi = sorted((b2, b2_bigger))
        if H_profile(1, e, (a1, a2), (b1, lo)).is_finite:
            assert H_profile(1, e, (a1, a2), (b1, hi)).is_finite


def _allowed_logpows(e):
    # 1/p' = 1 - 1/p, 1/r = 1/q - 1/p and 1/2 - 1/p
    return {F(0), 1 - e.inv_p, F(1, 2) - e.inv_p, e.inv_q - e.inv_p}


class TestProfileShapes:
    @pytest.mark.parametrize("p, q", list(itertools.product(PQ, PQ)))
    def test_log_exponents_come_from_the_known_set(self, p, q):
        e = ExponentPair(p, q)
        allowed = _allowed_logpows(e)
        seen = set()
        weights = [F(0), F(1, 4), F(1, 2), F(3, 4), 1, 2]
        for D in itertools.product(weights, repeat=2):
            prof = local_constant_profile(1, e, D)
            if prof.is_finite:
                seen |= {t.logpow for t in (prof.small, prof.large) if t is not None}
        for g in weights:
            seen.add(discrete_constant_profile(1, e, g).large.logpow)
        assert seen <= allowed

    def test_profile_equality_and_render(self):
        a = AsymProfile(AsymTerm(F(1, 2)), AsymTerm(0))
        assert a == AsymProfile(AsymTerm(0.5), AsymTerm(0))
        assert AsymProfile(infinite=True).render() == "INFINITE"
        assert AsymTerm(0, F(1, 2)).render("M") == "log(M+1)^0.5"


class TestConsistency:
    def test_examples(self):
        assert consistency_nonsym_vs_H(1, ExponentPair(2, 2), 1, 1).consistent
        assert consistency_nonsym_vs_H(1, ExponentPair(INF, 1), 1, F(2, 5)).consistent

    def test_full_grid(self):
        cells = sweep_consistency([1, 2], PQ, PQ, GRID, GRID)
        assert len(cells) == 2 * 5 * 5 * 4 * 4
        bad = [(key, c.detail) for key, c in cells if not c.consistent]
        assert not bad

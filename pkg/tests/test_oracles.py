from __future__ import annotations

import pytest

from cpnets.core import ClassSpec, SwapInstance, evaluate_swap, instance_space
from cpnets.oracles import (
    CorruptionMode,
    CorruptionSet,
    InfeasibleParameters,
    OracleAnswer,
    OracleKind,
    OracleSession,
    corruption_bound,
    f_ball,
    hopeless_corruption_set,
    sample_corruption_set,
    session_transcript,
    swap_from_dict,
    swap_to_dict,
)

from .conftest import SPEC3


def x_abc_abar(v=0):
    return SwapInstance((0, 0, 0), (1, 0, 0), v)


def test_perfect_oracle_truth(parity):
    s = OracleSession(OracleKind.PERFECT, SPEC3, target=parity)
    assert s.answer(x_abc_abar()) is OracleAnswer.YES
    assert s.answer(x_abc_abar().reversed()) is OracleAnswer.NO


def test_perfect_reconstructs_bitvector(parity):
    s = OracleSession(OracleKind.PERFECT, SPEC3, target=parity)
    for x in instance_space(SPEC3):
        want = OracleAnswer.YES if evaluate_swap(parity, x) else OracleAnswer.NO
        assert s.answer(x) is want


def test_limited_unknown_and_persistence(parity):
    x = x_abc_abar()
    L = CorruptionSet(frozenset({x}))
    s = OracleSession(OracleKind.LIMITED, SPEC3, target=parity, corruption=L)
    assert s.answer(x) is OracleAnswer.UNKNOWN
    assert s.distinct_queries == 1
    assert s.answer(x) is OracleAnswer.UNKNOWN
    assert s.distinct_queries == 1  # repeats are served from the log
    assert s.queries_asked == 2
    assert len(s.log) == 1


def test_malicious_flips_exactly_l(parity):
    x = x_abc_abar()
    L = CorruptionSet(frozenset({x}))
    s = OracleSession(OracleKind.MALICIOUS, SPEC3, target=parity, corruption=L)
    assert s.answer(x) is OracleAnswer.NO  # flip of the true Yes
    for y in instance_space(SPEC3):
        if y != x:
            want = OracleAnswer.YES if evaluate_swap(parity, y) else OracleAnswer.NO
            assert s.answer(y) is want


def test_corruption_set_covers_both_directions(parity):
    x = x_abc_abar()
    L = CorruptionSet(frozenset({x}))
    assert x in L and x.reversed() in L


def test_f_ball_example():
    spec = ClassSpec(4, 2, 1)
    x = SwapInstance((0, 0, 0, 0), (0, 1, 0, 0), 1)
    ball = f_ball(x, 1, spec)
    assert len(ball) == 3  # C(n-1, 1) with m=2
    expected = {
        SwapInstance((1, 0, 0, 0), (1, 1, 0, 0), 1),
        SwapInstance((0, 0, 1, 0), (0, 1, 1, 0), 1),
        SwapInstance((0, 0, 0, 1), (0, 1, 0, 1), 1),
    }
    assert set(ball) == expected
    # value pair order is preserved
    assert all(y.value_pair == x.value_pair for y in ball)


def test_f_ball_full_distance():
    spec = ClassSpec(4, 2, 1)
    x = SwapInstance((0, 0, 0, 0), (0, 1, 0, 0), 1)
    far = f_ball(x, 3, spec)
    assert far == [SwapInstance((1, 0, 1, 1), (1, 1, 1, 1), 1)]
    with pytest.raises(ValueError):
        f_ball(x, 4, spec)


def test_f_ball_sizes_m3():
    spec = ClassSpec(3, 3, 1)
    x = SwapInstance((0, 0, 0), (0, 2, 0), 1)
    assert len(f_ball(x, 1, spec)) == 2 * 2  # C(2,1) * (m-1)
    assert len(f_ball(x, 2, spec)) == 4


def test_sample_corruption_certificates(parity):
    spec = ClassSpec(7, 2, 1)
    target = None
    # any binary target works; reuse a separable 7-variable net
    from cpnets.core import CpNet, Cpt

    target = CpNet(
        spec, tuple(Cpt.from_rows(v, (), {(): (0, 1)}) for v in range(7))
    )
    for mode in CorruptionMode:
        L = sample_corruption_set(spec, target, mode, seed=3)
        assert L.certificate(spec) <= corruption_bound(spec, mode)
        # deterministic under the seed
        again = sample_corruption_set(spec, target, mode, seed=3)
        assert L.members == again.members


def test_sample_corruption_zero_bound():
    spec = ClassSpec(5, 2, 1)
    from cpnets.core import CpNet, Cpt

    target = CpNet(spec, tuple(Cpt.from_rows(v, (), {(): (0, 1)}) for v in range(5)))
    L = sample_corruption_set(spec, target, CorruptionMode.MALICIOUS_BOUND, seed=0)
    assert len(L) == 0  # floor(4/2) - 1 - 1 = 0
    lim = sample_corruption_set(spec, target, CorruptionMode.LIMITED_BOUND, seed=0)
    assert lim.certificate(spec) <= 1


def test_sample_corruption_infeasible():
    spec = ClassSpec(4, 2, 1)  # violates n > 2k + 2
    from cpnets.core import CpNet, Cpt

    target = CpNet(spec, tuple(Cpt.from_rows(v, (), {(): (0, 1)}) for v in range(4)))
    with pytest.raises(InfeasibleParameters):
        sample_corruption_set(spec, target, CorruptionMode.MALICIOUS_BOUND, seed=0)


def test_hopeless_sizes():
    spec = ClassSpec(3, 2, 1)
    L, _, _ = hopeless_corruption_set(spec, 2, {0: 1})
    assert len(L) == 2  # 2^(n-1-k)
    spec2 = ClassSpec(3, 2, 2)
    L2, _, _ = hopeless_corruption_set(spec2, 2, {0: 1, 1: 0})
    assert len(L2) == 1


def test_hopeless_nets_differ_exactly_on_l():
    spec = ClassSpec(4, 2, 2)
    L, net1, net2 = hopeless_corruption_set(spec, 1, {0: 1, 2: 0})
    for x in instance_space(spec):
        differ = evaluate_swap(net1, x) != evaluate_swap(net2, x)
        assert differ == (x in L)


def test_human_session_uses_provider():
    answers = iter([OracleAnswer.YES, OracleAnswer.NO])
    s = OracleSession(OracleKind.HUMAN, SPEC3, provider=lambda x: next(answers))
    x = x_abc_abar()
    assert s.answer(x) is OracleAnswer.YES
    assert s.answer(x) is OracleAnswer.YES  # persistent: provider not re-asked
    assert s.answer(x.reversed()) is OracleAnswer.NO


def test_session_requires_target_or_provider():
    with pytest.raises(ValueError):
        OracleSession(OracleKind.PERFECT, SPEC3)
    with pytest.raises(ValueError):
        OracleSession(OracleKind.HUMAN, SPEC3)


def test_transcript_shape(parity):
    s = OracleSession(OracleKind.PERFECT, SPEC3, target=parity)
    s.answer(x_abc_abar())
    s.answer(x_abc_abar())
    t = session_transcript(s)
    assert t["kind"] == "perfect"
    assert t["distinct"] == 1
    assert t["queries"] == [{"x": swap_to_dict(x_abc_abar()), "answer": "yes"}]
    assert swap_from_dict(t["queries"][0]["x"]) == x_abc_abar()

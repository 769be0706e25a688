from __future__ import annotations

import json
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpnets.core import (
    ClassSpec,
    Completeness,
    CpNet,
    Cpt,
    NotASwap,
    SwapInstance,
    canonical_swap,
    complement,
    complete_extension,
    dominates,
    evaluate_swap,
    induced_preference_graph,
    instance_space,
    is_consistent,
    max_edges,
    max_size,
    net_from_json,
    net_to_dict,
    net_to_json,
    strictly_subsumes,
    subsumes,
)

from .conftest import SPEC3


def swap(first, second, v):
    return SwapInstance(tuple(first), tuple(second), v)


# One instance ordering with the 12 canonical binary swaps at n=3:
# A-swaps over contexts (b,c), then B-swaps over (a,c), then C-swaps over (a,b),
# each context block enumerated with the unbarred value (0) first.
REFERENCE_ORDER = [
    swap((0, 0, 0), (1, 0, 0), 0),
    swap((0, 0, 1), (1, 0, 1), 0),
    swap((0, 1, 0), (1, 1, 0), 0),
    swap((0, 1, 1), (1, 1, 1), 0),
    swap((0, 0, 0), (0, 1, 0), 1),
    swap((0, 0, 1), (0, 1, 1), 1),
    swap((1, 0, 0), (1, 1, 0), 1),
    swap((1, 0, 1), (1, 1, 1), 1),
    swap((0, 0, 0), (0, 0, 1), 2),
    swap((0, 1, 0), (0, 1, 1), 2),
    swap((1, 0, 0), (1, 0, 1), 2),
    swap((1, 1, 0), (1, 1, 1), 2),
]

PARITY_LABELS = [1, 1, 1, 1, 1, 1, 0, 0, 1, 0, 0, 1]
CYC_LABELS = [1, 1, 1, 1, 1, 1, 0, 1, 1, 0, 0, 0]


def test_parity_swap_labels(parity):
    assert [evaluate_swap(parity, x) for x in REFERENCE_ORDER] == PARITY_LABELS


def test_cyc_swap_labels(cyc_consistent):
    assert [evaluate_swap(cyc_consistent, x) for x in REFERENCE_ORDER] == CYC_LABELS


def test_swap_validation():
    with pytest.raises(NotASwap):
        SwapInstance((0, 0), (1, 1), 0)
    with pytest.raises(NotASwap):
        SwapInstance((0, 0), (0, 0), 0)
    with pytest.raises(NotASwap):
        SwapInstance((0, 0), (1, 0), 1)  # wrong swapped index


def test_canonical_swap_orders_by_value():
    x = canonical_swap((1, 0), (0, 0))
    assert x.first == (0, 0) and x.second == (1, 0) and x.swapped == 0
    assert x.is_canonical()
    assert not x.reversed().is_canonical()


def test_instance_space_sizes():
    for n, m in [(2, 2), (3, 2), (2, 3), (3, 3)]:
        spec = ClassSpec(n, m, 0)
        plain = instance_space(spec)
        full = instance_space(spec, redundancies=True)
        assert len(plain) == n * m ** (n - 1) * m * (m - 1) // 2
        assert len(full) == n * m ** n * (m - 1)
        assert len(set(plain)) == len(plain)


def test_instance_space_matches_reference_set():
    assert set(instance_space(SPEC3)) == set(REFERENCE_ORDER)


def test_cpt_rejects_dummy_parent():
    rows = {(0,): (0, 1), (1,): (0, 1)}
    cpt = Cpt.from_rows(1, (0,), rows)
    with pytest.raises(ValueError, match="dummy"):
        CpNet(ClassSpec(2, 2, 1), (Cpt.from_rows(0, (), {(): (0, 1)}), cpt))


def test_cpt_rejects_partial_rows():
    cpt = Cpt.from_rows(1, (0,), {(0,): (0, 1)})
    with pytest.raises(ValueError, match="every parent context"):
        CpNet(ClassSpec(2, 2, 1), (Cpt.from_rows(0, (), {(): (0, 1)}), cpt))


def test_empty_rows_need_incomplete_spec():
    cpt = Cpt.from_rows(0, (), {(): None})
    other = Cpt.from_rows(1, (), {(): (0, 1)})
    with pytest.raises(ValueError, match="complete-only"):
        CpNet(ClassSpec(2, 2, 0), (cpt, other))
    CpNet(ClassSpec(2, 2, 0, Completeness.ALLOW_INCOMPLETE), (cpt, other))


def test_empty_row_distinguishes_parent():
    # a parent separating an empty row from a specified one is not a dummy
    spec = ClassSpec(2, 2, 1, Completeness.ALLOW_INCOMPLETE)
    cpt = Cpt.from_rows(1, (0,), {(0,): (0, 1), (1,): None})
    net = CpNet(spec, (Cpt.from_rows(0, (), {(): (0, 1)}), cpt))
    assert net.size() == 2


def test_acyclicity_enforced(cyc_consistent):
    with pytest.raises(ValueError, match="cyclic"):
        CpNet(cyc_consistent.spec, cyc_consistent.cpts)


def test_cyclic_consistency_pair(cyc_consistent, cyc_inconsistent):
    assert is_consistent(cyc_consistent)
    assert not is_consistent(cyc_inconsistent)


def test_acyclic_implies_consistent(cls_3_2_2):
    assert all(is_consistent(net) for net in cls_3_2_2.nets)


def test_dominance_on_parity(parity):
    # abc is parity's optimum; everything improves towards it
    assert dominates(parity, (0, 0, 0), (1, 1, 1))
    assert not dominates(parity, (1, 1, 1), (0, 0, 0))
    assert not dominates(parity, (0, 0, 0), (0, 0, 0))


def test_preference_graph_edge_count(parity):
    g = induced_preference_graph(parity)
    assert g.number_of_nodes() == 8
    # complete net: every unordered swap pair contributes exactly one edge
    assert g.number_of_edges() == 12


def test_max_size_and_edges():
    assert max_size(ClassSpec(3, 2, 2)) == 7
    assert max_size(ClassSpec(3, 2, 0)) == 3
    assert max_size(ClassSpec(4, 3, 2)) == 2 * 9 + 4
    assert max_edges(ClassSpec(7, 2, 6)) == 21
    assert max_edges(ClassSpec(3, 2, 1)) == 2


def test_subsumption_chain(dense, fan, sparse):
    assert subsumes(dense, sparse)
    assert subsumes(fan, sparse)
    assert strictly_subsumes(dense, sparse)
    assert not subsumes(sparse, fan)
    assert subsumes(dense, dense) and not strictly_subsumes(dense, dense)


def test_maximal_net_size(dense, fan, sparse):
    assert dense.size() == max_size(SPEC3) == 7
    assert fan.size() == 5
    assert sparse.size() == 4


def test_complement_inverts_labels(parity):
    inv = complement(parity)
    for x in instance_space(SPEC3):
        assert evaluate_swap(inv, x) == 1 - evaluate_swap(parity, x)


def test_complete_extension_prunes():
    spec = ClassSpec(2, 2, 1, Completeness.ALLOW_INCOMPLETE)
    cpt = Cpt.from_rows(1, (0,), {(0,): (0, 1), (1,): None})
    net = CpNet(spec, (Cpt.from_rows(0, (), {(): (0, 1)}), cpt))
    ext = complete_extension(net)
    # filling (1,) with the identity order makes variable 0 a dummy parent
    assert ext.cpts[1].parents == ()
    assert ext.spec.completeness is Completeness.COMPLETE_ONLY


def test_json_roundtrip(parity, sparse):
    for net in (parity, sparse):
        assert net_to_dict(net_from_json(net_to_json(net))) == net_to_dict(net)
    data = json.loads(net_to_json(parity))
    assert set(data) == {"n", "m", "k", "cpts"}
    assert all(set(c) == {"variable", "parents", "rows"} for c in data["cpts"])


def test_json_autodetects_incompleteness():
    spec = ClassSpec(2, 2, 0, Completeness.ALLOW_INCOMPLETE)
    net = CpNet(spec, (Cpt.from_rows(0, (), {(): None}), Cpt.from_rows(1, (), {(): (0, 1)})))
    back = net_from_json(net_to_json(net))
    assert back.spec.completeness is Completeness.ALLOW_INCOMPLETE


@st.composite
def random_nets(draw):
    n = draw(st.integers(2, 4))
    k = draw(st.integers(0, min(2, n - 1)))
    spec = ClassSpec(n, 2, k)
    order = list(range(n))
    cpts = []
    for pos, v in enumerate(order):
        npar = draw(st.integers(0, min(k, pos)))
        parents = tuple(sorted(draw(st.permutations(order[:pos]))[:npar]))
        while True:
            rows = {
                ctx: draw(st.sampled_from([(0, 1), (1, 0)]))
                for ctx in product(range(2), repeat=npar)
            }
            cpt = Cpt.from_rows(v, parents, rows)
            try:
                from cpnets.core import _validate_cpt

                _validate_cpt(cpt, spec)
                break
            except ValueError:
                continue
        cpts.append(cpt)
    return CpNet(spec, tuple(cpts))


@settings(max_examples=40, deadline=None)
@given(random_nets())
def test_complete_net_complementarity(net):
    # exactly one direction of every swap is entailed by a complete net
    for x in instance_space(net.spec):
        assert evaluate_swap(net, x) + evaluate_swap(net, x.reversed()) == 1


@settings(max_examples=40, deadline=None)
@given(random_nets())
def test_random_acyclic_nets_are_consistent(net):
    assert is_consistent(net)


@settings(max_examples=40, deadline=None)
@given(random_nets())
def test_size_within_bound(net):
    assert net.size() <= max_size(net.spec)
    assert net.edge_count() <= max_edges(net.spec)

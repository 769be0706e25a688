"""(m, z, k)-universal sets and the context sets / swap expressions they impose.

A set of length-z vectors over {0..m-1} is (m, z, k)-universal if its
projection onto every k-subset of coordinates realizes all m^k patterns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from .core import (
    BudgetExceeded,
    ClassSpec,
    CpNet,
    SwapInstance,
    evaluate_swap,
    insert_index,
)


@dataclass(frozen=True)
class UniversalSet:
    m: int
    z: int
    k: int
    vectors: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, m: int, z: int, k: int, vectors: Iterable[Sequence[int]]) -> "UniversalSet":
        return cls(m, z, k, tuple(sorted(set(tuple(v) for v in vectors))))

    def __len__(self) -> int:
        return len(self.vectors)


def is_universal(s: UniversalSet) -> bool:
    """Check that every (k-coordinate-set, pattern) pair is covered."""
    if any(len(v) != s.z or any(not 0 <= x < s.m for x in v) for v in s.vectors):
        return False
    for coords in combinations(range(s.z), s.k):
        seen = {tuple(v[c] for c in coords) for v in s.vectors}
        if len(seen) < s.m ** s.k:
            return False
    return True


def construct_product(m: int, z: int, k: int) -> UniversalSet:
    """Per k-subset of coordinates, one vector per pattern, other coordinates 0."""
    if not 0 <= k <= z:
        raise ValueError("need 0 <= k <= z")
    vectors = set()
    for coords in combinations(range(z), k):
        for pattern in product(range(m), repeat=k):
            vec = [0] * z
            for c, val in zip(coords, pattern):
                vec[c] = val
            vectors.add(tuple(vec))
    return UniversalSet.of(m, z, k, vectors)


def construct_minimal(m: int, z: int, k: int, budget: int = 5_000_000) -> UniversalSet:
    """Exact smallest universal set, by iterative deepening over candidate sizes.

    Search effort is bounded by ``budget`` expanded nodes; exceeding it
    raises BudgetExceeded (intended for z <= 6, m <= 3).
    """
    if not 0 <= k <= z:
        raise ValueError("need 0 <= k <= z")
    all_vecs = list(product(range(m), repeat=z))
    coord_sets = list(combinations(range(z), k))
    targets = {
        (ci, pattern) for ci, coords in enumerate(coord_sets) for pattern in product(range(m), repeat=k)
    }
    cover = {
        vec: frozenset((ci, tuple(vec[c] for c in coords)) for ci, coords in enumerate(coord_sets))
        for vec in all_vecs
    }
    per_vec = len(coord_sets)
    nodes = 0

    def search(start: int, chosen: list, uncovered: set, slots: int) -> Optional[list]:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("exact universal-set search budget exceeded")
        if not uncovered:
            return chosen
        if slots == 0 or (len(uncovered) + per_vec - 1) // per_vec > slots:
            return None
        for i in range(start, len(all_vecs)):
            if len(all_vecs) - i < slots:
                break
            vec = all_vecs[i]
            gained = cover[vec] & uncovered
            if not gained:
                continue
            found = search(i + 1, chosen + [vec], uncovered - gained, slots - 1)
            if found is not None:
                return found
        return None

    for size in range(m ** k, len(all_vecs) + 1):
        found = search(0, [], set(targets), size)
        if found is not None:
            return UniversalSet.of(m, z, k, found)
    raise RuntimeError("unreachable: the full space is always universal")


def context_set(u: UniversalSet, v: int, spec: ClassSpec) -> list[tuple[int, ...]]:
    """Lift the vectors onto the n-1 non-v variables, preserving variable order.

    Returns contexts as value tuples over V \\ {v}, in the sorted vector order.
    """
    if u.z != spec.n - 1:
        raise ValueError("universal set length must be n-1")
    return [tuple(vec) for vec in u.vectors]


@dataclass(frozen=True)
class SwapExpression:
    """For each context, m-1 chained swaps realizing a total order over one variable."""

    variable: int
    swaps: tuple[SwapInstance, ...]


def swap_expression(
    contexts: Sequence[Sequence[int]],
    v: int,
    orders: Sequence[Sequence[int]],
) -> SwapExpression:
    """Build the m-1 chained swaps per context; ``orders[i]`` governs ``contexts[i]``."""
    if len(orders) != len(contexts):
        raise ValueError("need one order per context")
    swaps = []
    for ctx, order in zip(contexts, orders):
        for a, b in zip(order, order[1:]):
            swaps.append(
                SwapInstance(insert_index(ctx, v, a), insert_index(ctx, v, b), v)
            )
    return SwapExpression(v, tuple(swaps))


def swap_expression_for_net(net: CpNet, v: int, u: UniversalSet) -> SwapExpression:
    """Swap expression of the context set imposed by ``u`` and ``v``, ordered by the net.

    Contexts whose governing row is empty fall back to the identity order
    (their chained swaps are then entailed in neither direction).
    """
    spec = net.spec
    contexts = context_set(u, v, spec)
    cpt = net.cpts[v]
    orders = []
    for ctx in contexts:
        full = insert_index(ctx, v, 0)
        row = cpt.row(tuple(full[p] for p in cpt.parents))
        orders.append(row if row is not None else tuple(range(spec.m)))
    return swap_expression(contexts, v, orders)


def universal_to_text(u: UniversalSet) -> str:
    return "\n".join("".join(str(x) for x in vec) for vec in u.vectors) + "\n"


def universal_from_text(text: str, m: int, k: int) -> UniversalSet:
    vectors = [tuple(int(ch) for ch in line.strip()) for line in text.splitlines() if line.strip()]
    if not vectors:
        raise ValueError("no vectors found")
    return UniversalSet.of(m, len(vectors[0]), k, vectors)


def universal_to_json(u: UniversalSet) -> str:
    return json.dumps({"m": u.m, "z": u.z, "k": u.k, "vectors": [list(v) for v in u.vectors]})


def universal_from_json(text: str) -> UniversalSet:
    data = json.loads(text)
    return UniversalSet.of(data["m"], data["z"], data["k"], data["vectors"])

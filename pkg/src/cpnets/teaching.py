"""Constructive teaching sets for CP-net concepts.

Three constructions: positive chains for maximal concepts, universal-set
context coverage plus conflict-pair completions for arbitrary complete
concepts, and a direction-doubled variant for incomplete concepts.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import (
    ClassSpec,
    Completeness,
    CpNet,
    SwapInstance,
    evaluate_swap,
    insert_index,
    max_size,
)
from .classes import ConceptClass
from .universal import UniversalSet, swap_expression_for_net


class NotMaximal(ValueError):
    """The net is strictly subsumed within its class, so the chain construction fails."""


@dataclass(frozen=True)
class ConflictPair:
    """Two same-variable swaps whose contexts differ only at one parent.

    Under the target, x is entailed and x2 is not; this witnesses that
    ``witness_parent`` is a parent of ``child``.
    """

    x: SwapInstance
    x2: SwapInstance
    child: int
    witness_parent: int

    def __post_init__(self) -> None:
        if self.x.swapped != self.child or self.x2.swapped != self.child:
            raise ValueError("both swaps must swap the child variable")
        if self.x.value_pair != self.x2.value_pair:
            raise ValueError("swaps must agree on the child's value pair")
        pos = self.witness_parent if self.witness_parent < self.child else self.witness_parent - 1
        diffs = [i for i, (a, b) in enumerate(zip(self.x.context, self.x2.context)) if a != b]
        if diffs != [pos]:
            raise ValueError("contexts must differ exactly at the witness parent")


@dataclass(frozen=True)
class TeachingSet:
    examples: tuple[tuple[SwapInstance, int], ...]
    target: CpNet

    def __len__(self) -> int:
        return len(self.examples)


def teaching_set_maximal(net: CpNet, spec: ClassSpec) -> TeachingSet:
    """(m-1) chained positive swaps per statement; only sound for maximal concepts."""
    if net.size() != max_size(spec):
        raise NotMaximal(f"net has size {net.size()} < {max_size(spec)}")
    examples = []
    for cpt in net.cpts:
        v = cpt.variable
        for ctx, order in cpt.rows:
            full = [0] * spec.n
            for p, val in zip(cpt.parents, ctx):
                full[p] = val
            base = tuple(full[:v] + full[v + 1:])
            for a, b in zip(order, order[1:]):
                x = SwapInstance(insert_index(base, v, a), insert_index(base, v, b), v)
                examples.append((x, 1))
    return TeachingSet(tuple(examples), net)


def _conflict_completion(
    net: CpNet, v: int, parent: int, positives: list[SwapInstance]
) -> tuple[SwapInstance, SwapInstance]:
    """Least (x, x') with x entailed, x' not, contexts differing only at ``parent``."""
    spec = net.spec
    best = None
    for x in positives:
        for w in range(spec.m):
            if w == x.first[parent]:
                continue
            first = x.first[:parent] + (w,) + x.first[parent + 1:]
            second = x.second[:parent] + (w,) + x.second[parent + 1:]
            x2 = SwapInstance(first, second, v)
            if evaluate_swap(net, x2) == 0:
                key = (x.first, x.second, x2.first, x2.second)
                if best is None or key < best[0]:
                    best = (key, x, x2)
    if best is None:
        raise ValueError(f"no conflict pair for child {v} given parent {parent}")
    return best[1], best[2]


def teaching_set_universal(net: CpNet, spec: ClassSpec, u: UniversalSet) -> TeachingSet:
    """Per-variable swap expressions over the universal context set, plus one
    non-entailed completion per dependency edge."""
    examples: dict[SwapInstance, int] = {}
    for v in range(spec.n):
        expr = swap_expression_for_net(net, v, u)
        for x in expr.swaps:
            examples[x] = 1
        for parent in net.cpts[v].parents:
            x, x2 = _conflict_completion(net, v, parent, list(expr.swaps))
            ConflictPair(x, x2, v, parent)
            examples[x2] = 0
    return TeachingSet(tuple(examples.items()), net)


def teaching_set_incomplete(net: CpNet, spec: ClassSpec, u: UniversalSet) -> TeachingSet:
    """As the universal construction, with both directions of every chained swap."""
    examples: dict[SwapInstance, int] = {}
    for v in range(spec.n):
        expr = swap_expression_for_net(net, v, u)
        for x in expr.swaps:
            examples[x] = evaluate_swap(net, x)
            examples[x.reversed()] = evaluate_swap(net, x.reversed())
        positives = [x for x in examples if x.swapped == v and examples[x] == 1]
        for parent in net.cpts[v].parents:
            ordered = sorted(positives, key=lambda s: (s.first, s.second))
            x, x2 = _conflict_completion(net, v, parent, ordered)
            ConflictPair(x, x2, v, parent)
            examples.setdefault(x2, 0)
    return TeachingSet(tuple(examples.items()), net)


def find_conflict_pair(net: CpNet, child: int, witness_parent: int) -> ConflictPair | None:
    """Exhaustive search for a conflict pair; exists iff witness_parent is a parent."""
    spec = net.spec
    if witness_parent == child:
        return None
    for ctx in product(range(spec.m), repeat=spec.n - 1):
        for i, j in product(range(spec.m), repeat=2):
            if i == j:
                continue
            x = SwapInstance(insert_index(ctx, child, i), insert_index(ctx, child, j), child)
            if evaluate_swap(net, x) != 1:
                continue
            for w in range(spec.m):
                if w == x.first[witness_parent]:
                    continue
                first = x.first[:witness_parent] + (w,) + x.first[witness_parent + 1:]
                second = x.second[:witness_parent] + (w,) + x.second[witness_parent + 1:]
                x2 = SwapInstance(first, second, child)
                if evaluate_swap(net, x2) == 0:
                    return ConflictPair(x, x2, child, witness_parent)
    return None


def verify_teaching_set(t: TeachingSet, cls: ConceptClass) -> bool:
    """True iff exactly one concept of the class fits all examples and it is the target."""
    consistent = []
    for bits, net in zip(cls.labels, cls.nets):
        if net is None:
            raise ValueError("verification needs CP-net provenance for every concept")
        if all(evaluate_swap(net, x) == label for x, label in t.examples):
            consistent.append(bits)
    return consistent == [cls.bitvector(t.target)]

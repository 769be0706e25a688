"""Brute-force enumeration of CP-net concept classes at desk scale.

Computes VC dimension, teaching dimension (per concept, class max, class
min), recursive teaching dimension, structural properties, and the
audited lower-bound formula for bounded acyclic CP-net classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import networkx as nx

from .core import (
    BudgetExceeded,
    ClassSpec,
    Completeness,
    CpNet,
    Cpt,
    SwapInstance,
    evaluate_swap,
    insert_index,
    instance_space,
)


class DomainError(ValueError):
    """Argument outside the formula's domain."""


@dataclass(frozen=True)
class ConceptClass:
    """Explicit concept class: label bitmasks over an ordered instance list.

    ``labels[i]`` has bit ``j`` set iff concept i labels ``instances[j]``
    with 1.  ``nets[i]`` is the CP-net provenance, when one exists.
    """

    spec: ClassSpec
    instances: tuple[SwapInstance, ...]
    labels: tuple[int, ...]
    nets: tuple[Optional[CpNet], ...]

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate label vectors")
        if len(self.nets) != len(self.labels):
            raise ValueError("need one provenance entry per concept")

    def __len__(self) -> int:
        return len(self.labels)

    def bitvector(self, net: CpNet) -> int:
        return labels_of(net, self.instances)

    def concept_index(self, concept: Union[int, CpNet]) -> int:
        bits = concept if isinstance(concept, int) else self.bitvector(concept)
        return self.labels.index(bits)


def labels_of(net: CpNet, instances: Sequence[SwapInstance]) -> int:
    bits = 0
    for j, x in enumerate(instances):
        if evaluate_swap(net, x):
            bits |= 1 << j
    return bits


def _minimal_cpts(v: int, spec: ClassSpec) -> list[Cpt]:
    """All minimal CPTs for variable v over every parent set of size <= k."""
    orders: list[Optional[tuple[int, ...]]] = [tuple(p) for p in permutations(range(spec.m))]
    if spec.completeness is Completeness.ALLOW_INCOMPLETE:
        orders.append(None)
    out = []
    others = [w for w in range(spec.n) if w != v]
    for size in range(spec.k + 1):
        for parents in combinations(others, size):
            contexts = list(product(range(spec.m), repeat=size))
            for fill in product(orders, repeat=len(contexts)):
                rows = dict(zip(contexts, fill))
                try:
                    cpt = Cpt.from_rows(v, parents, rows)
                    # re-run full validation (minimality) via a throwaway net check
                    from .core import _validate_cpt

                    _validate_cpt(cpt, spec)
                except ValueError:
                    continue
                out.append(cpt)
    return out


def _enumeration_cost(spec: ClassSpec) -> int:
    per_order = len(list(permutations(range(spec.m))))
    if spec.completeness is Completeness.ALLOW_INCOMPLETE:
        per_order += 1
    per_var = sum(
        comb(spec.n - 1, s) * per_order ** (spec.m ** s) for s in range(spec.k + 1)
    )
    return per_var ** spec.n


def enumerate_class(spec: ClassSpec, budget: int = 5_000_000) -> ConceptClass:
    """All k-bounded acyclic CP-nets of the spec, deduplicated by label vector.

    The instance space is the redundancy-free swap space for complete-only
    classes and the full (both-directions) swap space otherwise.
    """
    if _enumeration_cost(spec) > budget:
        raise BudgetExceeded(f"enumeration cost estimate exceeds budget {budget}")
    instances = tuple(
        instance_space(spec, redundancies=spec.completeness is Completeness.ALLOW_INCOMPLETE)
    )
    candidates = [_minimal_cpts(v, spec) for v in range(spec.n)]
    seen: dict[int, CpNet] = {}
    for cpts in product(*candidates):
        g = nx.DiGraph()
        g.add_nodes_from(range(spec.n))
        g.add_edges_from((p, cpt.variable) for cpt in cpts for p in cpt.parents)
        if not nx.is_directed_acyclic_graph(g):
            continue
        net = CpNet(spec, tuple(cpts))
        bits = labels_of(net, instances)
        if bits not in seen:
            seen[bits] = net
    labels = tuple(seen.keys())
    return ConceptClass(spec, instances, labels, tuple(seen[b] for b in labels))


def synthetic_class(
    instances_count: int, labelings: Iterable[int], spec: Optional[ClassSpec] = None
) -> ConceptClass:
    """Concept class from raw bitmasks over a synthetic instance list."""
    spec = spec or ClassSpec(instances_count, 2, 0)
    xs = instance_space(ClassSpec(instances_count, 2, 0))[:instances_count]
    labels = tuple(dict.fromkeys(labelings))
    return ConceptClass(spec, tuple(xs), labels, (None,) * len(labels))


def project(cls: ConceptClass, indices: Sequence[int]) -> ConceptClass:
    """Restrict the class to a sub-instance-space, deduplicating concepts."""
    seen: dict[int, Optional[CpNet]] = {}
    for bits, net in zip(cls.labels, cls.nets):
        sub = 0
        for new_j, j in enumerate(indices):
            if bits >> j & 1:
                sub |= 1 << new_j
        if sub not in seen:
            seen[sub] = net
    instances = tuple(cls.instances[j] for j in indices)
    labels = tuple(seen.keys())
    return ConceptClass(cls.spec, instances, labels, tuple(seen[b] for b in labels))


def separable_indices(cls: ConceptClass) -> list[int]:
    """One instance per (variable, value pair): the all-zero-context swap."""
    spec = cls.spec
    picks = []
    for v in range(spec.n):
        for i, j in combinations(range(spec.m), 2):
            zero = (0,) * (spec.n - 1)
            x = SwapInstance(insert_index(zero, v, i), insert_index(zero, v, j), v)
            picks.append(cls.instances.index(x))
    return picks


def shatters(cls: ConceptClass, subset: Sequence[int]) -> bool:
    arr = np.asarray(cls.labels, dtype=np.int64)
    mask = 0
    for j in subset:
        mask |= 1 << j
    return len(np.unique(arr & mask)) == 2 ** len(subset)


def vcd(cls: ConceptClass, budget: int = 20_000_000) -> int:
    """Exact VC dimension by descending-size shattering search."""
    arr = np.asarray(cls.labels, dtype=np.int64)
    t = len(cls.instances)
    upper = min(t, len(cls).bit_length() - 1)
    work = 0
    for size in range(upper, 0, -1):
        full = 1 << size
        for subset in combinations(range(t), size):
            work += 1
            if work > budget:
                raise BudgetExceeded("shattering search budget exceeded")
            mask = 0
            for j in subset:
                mask |= 1 << j
            if len(np.unique(arr & mask)) == full:
                return size
    return 0


def _td_sweep(labels: Sequence[int], t: int, stop_after: Optional[set] = None) -> list[int]:
    """Teaching dimension of every concept: smallest distinguishing subset size.

    If ``stop_after`` is given, returns as soon as every index in it is
    resolved (other entries may be left as -1).
    """
    arr = np.asarray(labels, dtype=np.int64)
    td = [-1] * len(labels)
    if len(labels) == 1:
        return [0]
    pending = set(range(len(labels)))
    watched = stop_after if stop_after is not None else pending
    for size in range(1, t + 1):
        for subset in combinations(range(t), size):
            mask = 0
            for j in subset:
                mask |= 1 << j
            masked = arr & mask
            _, inv, counts = np.unique(masked, return_inverse=True, return_counts=True)
            for i in np.nonzero(counts[inv] == 1)[0]:
                i = int(i)
                if td[i] < 0:
                    td[i] = size
                    pending.discard(i)
        if not pending & watched:
            return td
    for i in pending:  # pragma: no cover - distinct labels always separable
        td[i] = t
    return td


def td(cls: ConceptClass, concept: Union[int, CpNet]) -> int:
    i = cls.concept_index(concept)
    return _td_sweep(cls.labels, len(cls.instances), stop_after={i})[i]


def td_class(cls: ConceptClass) -> int:
    return max(_td_sweep(cls.labels, len(cls.instances)))


def td_min(cls: ConceptClass) -> int:
    tds = _td_sweep(cls.labels, len(cls.instances))
    return min(tds)


def rtd(cls: ConceptClass) -> int:
    """Max over the recursive peeling sequence of the minimum teaching dimension."""
    labels = list(cls.labels)
    t = len(cls.instances)
    best = 0
    while labels:
        tds = _td_sweep(labels, t)
        low = min(tds)
        best = max(best, low)
        labels = [b for b, d in zip(labels, tds) if d > low]
    return best


def structural_report(cls: ConceptClass, budget: int = 1 << 22) -> dict:
    """Maximum / maximal / intersection-closed / extremal flags, all definitional."""
    t = len(cls.instances)
    if 2 ** t > budget:
        raise BudgetExceeded("structural checks require enumerating all labelings")
    d = vcd(cls)
    arr = np.asarray(cls.labels, dtype=np.int64)
    label_set = set(cls.labels)

    is_maximum = len(cls) == sum(comb(t, i) for i in range(d + 1))

    is_maximal = True
    for candidate in range(2 ** t):
        if candidate in label_set:
            continue
        extended = np.append(arr, np.int64(candidate))
        upper = min(t, len(extended).bit_length() - 1)
        grew = False
        for size in range(upper, d, -1):
            full = 1 << size
            for subset in combinations(range(t), size):
                mask = 0
                for j in subset:
                    mask |= 1 << j
                if len(np.unique(extended & mask)) == full:
                    grew = True
                    break
            if grew:
                break
        if not grew:
            is_maximal = False
            break

    is_intersection_closed = all(
        (a & b) in label_set for a, b in combinations(cls.labels, 2)
    )

    is_extremal = True
    for size in range(1, d + 1):
        for subset in combinations(range(t), size):
            mask = 0
            for j in subset:
                mask |= 1 << j
            masked = arr & mask
            if len(np.unique(masked)) != 1 << size:
                continue
            outside = arr & ~np.int64(mask)
            strongly = False
            for group in np.unique(outside):
                if len(np.unique(masked[outside == group])) == 1 << size:
                    strongly = True
                    break
            if not strongly:
                is_extremal = False
                break
        if not is_extremal:
            break

    return {
        "is_maximum": is_maximum,
        "is_maximal": is_maximal,
        "is_intersection_closed": is_intersection_closed,
        "is_extremal": is_extremal,
    }


def kz_lower_bound(n: int, k: int, e: int) -> Fraction:
    """The audited piecewise lower-bound formula for binary bounded acyclic classes.

    Evaluates with u = e/k kept exact (as in the audit's own evaluation),
    and r = floor(log2((n - u)/k)).
    """
    if not 0 <= k < n:
        raise DomainError("need 0 <= k < n")
    if k == 0:
        return Fraction(1)
    if not k <= e <= comb(n, 2):
        raise DomainError("need k <= e <= C(n,2)")
    u = Fraction(e, k)
    q = (n - u) / k
    if q <= 0:
        raise DomainError("log argument (n - u)/k is non-positive")
    r = 0
    if q >= 1:
        while q >= 2:
            q /= 2
            r += 1
    else:
        while q < 1:
            q *= 2
            r -= 1
    if k == 1:
        return u * (r + 1)
    return u * (2 ** k + k * (r - 1) - 1)

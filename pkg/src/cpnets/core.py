"""Data model for conditional preference networks (CP-nets).

A CP-net is a directed graph over ``n`` variables, each with a uniform
domain of ``m`` values, where every variable carries a conditional
preference table (CPT): for each assignment (context) to its parents, a
total order over the variable's domain, or an empty entry meaning "no
preference stated".  Swap instances -- pairs of outcomes differing in
exactly one variable -- are the atomic queries and examples throughout
the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import networkx as nx

VERTEX_BUDGET = 1 << 20


class NotASwap(ValueError):
    """The two outcomes do not differ in exactly one variable."""


class BudgetExceeded(RuntimeError):
    """An explicit computation budget would be exceeded."""


class Completeness(Enum):
    COMPLETE_ONLY = "complete"
    ALLOW_INCOMPLETE = "incomplete"


@dataclass(frozen=True)
class ClassSpec:
    """Parameters of a CP-net class: n variables, domain size m, indegree bound k."""

    n: int
    m: int
    k: int
    completeness: Completeness = Completeness.COMPLETE_ONLY

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.m < 2:
            raise ValueError("m must be >= 2")
        if not 0 <= self.k <= self.n - 1:
            raise ValueError("k must satisfy 0 <= k <= n-1")

    def outcomes(self) -> Iterator[tuple[int, ...]]:
        return product(range(self.m), repeat=self.n)


Outcome = tuple[int, ...]


@dataclass(frozen=True)
class SwapInstance:
    """An ordered pair of outcomes differing in exactly the ``swapped`` variable."""

    first: Outcome
    second: Outcome
    swapped: int

    def __post_init__(self) -> None:
        if len(self.first) != len(self.second):
            raise NotASwap("outcomes have different lengths")
        diffs = [i for i, (a, b) in enumerate(zip(self.first, self.second)) if a != b]
        if diffs != [self.swapped]:
            raise NotASwap(f"outcomes differ at {diffs}, not exactly at {self.swapped}")

    @property
    def context(self) -> tuple[int, ...]:
        """Values of all non-swapped variables, in variable order."""
        return without_index(self.first, self.swapped)

    @property
    def value_pair(self) -> tuple[int, int]:
        return (self.first[self.swapped], self.second[self.swapped])

    def reversed(self) -> "SwapInstance":
        return SwapInstance(self.second, self.first, self.swapped)

    def is_canonical(self) -> bool:
        return self.first[self.swapped] < self.second[self.swapped]


def without_index(values: Sequence[int], i: int) -> tuple[int, ...]:
    return tuple(values[:i]) + tuple(values[i + 1:])


def insert_index(values: Sequence[int], i: int, value: int) -> tuple[int, ...]:
    return tuple(values[:i]) + (value,) + tuple(values[i:])


def canonical_swap(o: Sequence[int], o2: Sequence[int]) -> SwapInstance:
    """Order a swap pair deterministically: smaller value first at the swapped variable."""
    o, o2 = tuple(o), tuple(o2)
    diffs = [i for i, (a, b) in enumerate(zip(o, o2)) if a != b]
    if len(o) != len(o2) or len(diffs) != 1:
        raise NotASwap(f"{o} / {o2} do not differ in exactly one variable")
    v = diffs[0]
    if o[v] < o2[v]:
        return SwapInstance(o, o2, v)
    return SwapInstance(o2, o, v)


def instance_space(spec: ClassSpec, redundancies: bool = False) -> list[SwapInstance]:
    """All swap instances, in deterministic lexicographic order.

    Without redundancies, one canonical instance per unordered pair
    (size n * m^(n-1) * C(m,2)); with redundancies, both directions
    (size n * m^n * (m-1)).
    """
    out: list[SwapInstance] = []
    for v in range(spec.n):
        for ctx in product(range(spec.m), repeat=spec.n - 1):
            for i, j in combinations(range(spec.m), 2):
                x = SwapInstance(insert_index(ctx, v, i), insert_index(ctx, v, j), v)
                out.append(x)
                if redundancies:
                    out.append(x.reversed())
    return out


@dataclass(frozen=True)
class Cpt:
    """Conditional preference table: one row per context over the parents.

    A row's order is a permutation of {0..m-1}, most-preferred first, or
    ``None`` for an unspecified (empty) statement.
    """

    variable: int
    parents: tuple[int, ...]
    rows: tuple[tuple[tuple[int, ...], Optional[tuple[int, ...]]], ...]
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", dict(self.rows))

    @classmethod
    def from_rows(
        cls,
        variable: int,
        parents: Iterable[int],
        rows: Mapping[tuple[int, ...], Optional[Sequence[int]]],
    ) -> "Cpt":
        parents = tuple(sorted(parents))
        packed = tuple(
            (tuple(ctx), tuple(order) if order is not None else None)
            for ctx, order in sorted(rows.items())
        )
        return cls(variable, parents, packed)

    def row(self, context: Sequence[int]) -> Optional[tuple[int, ...]]:
        return self._index[tuple(context)]

    def statement_count(self) -> int:
        return sum(1 for _, order in self.rows if order is not None)


def _validate_cpt(cpt: Cpt, spec: ClassSpec) -> None:
    if cpt.variable in cpt.parents:
        raise ValueError("variable cannot be its own parent")
    if len(cpt.parents) > spec.k:
        raise ValueError(f"variable {cpt.variable} has more than k={spec.k} parents")
    if tuple(sorted(set(cpt.parents))) != cpt.parents:
        raise ValueError("parents must be sorted and distinct")
    contexts = [ctx for ctx, _ in cpt.rows]
    expected = list(product(range(spec.m), repeat=len(cpt.parents)))
    if contexts != expected:
        raise ValueError("rows must cover every parent context exactly once")
    for _, order in cpt.rows:
        if order is None:
            if spec.completeness is Completeness.COMPLETE_ONLY:
                raise ValueError("empty rows are not allowed in a complete-only class")
        elif sorted(order) != list(range(spec.m)):
            raise ValueError(f"row order {order} is not a permutation of 0..{spec.m - 1}")
    # Minimality: every parent must be relevant.  An empty row counts as a
    # distinct row value, so a parent separating empty from specified is relevant.
    for axis, p in enumerate(cpt.parents):
        relevant = False
        for ctx, order in cpt.rows:
            if ctx[axis] != 0:
                continue
            for other in range(1, spec.m):
                ctx2 = ctx[:axis] + (other,) + ctx[axis + 1:]
                if cpt.row(ctx2) != order:
                    relevant = True
                    break
            if relevant:
                break
        if not relevant:
            raise ValueError(f"parent {p} of variable {cpt.variable} is a dummy parent")


@dataclass(frozen=True)
class CpNet:
    """A CP-net: one CPT per variable.  Validated on construction.

    ``allow_cyclic=True`` waives the acyclicity requirement; it exists
    only so the consistency checker (and tests) can express CP-nets with
    cyclic dependency graphs.
    """

    spec: ClassSpec
    cpts: tuple[Cpt, ...]
    allow_cyclic: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.cpts) != self.spec.n:
            raise ValueError("need exactly one CPT per variable")
        for v, cpt in enumerate(self.cpts):
            if cpt.variable != v:
                raise ValueError("CPTs must be listed in variable order")
            _validate_cpt(cpt, self.spec)
        if not self.allow_cyclic and not nx.is_directed_acyclic_graph(self.dependency_graph()):
            raise ValueError("dependency graph is cyclic")

    def dependency_graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.spec.n))
        for cpt in self.cpts:
            for p in cpt.parents:
                g.add_edge(p, cpt.variable)
        return g

    def size(self) -> int:
        """Number of specified (non-empty) statements."""
        return sum(cpt.statement_count() for cpt in self.cpts)

    def edge_count(self) -> int:
        return sum(len(cpt.parents) for cpt in self.cpts)


def evaluate_swap(net: CpNet, x: SwapInstance) -> int:
    """1 iff the net entails x.1 over x.2; 0 on reversed or unstated preference."""
    cpt = net.cpts[x.swapped]
    ctx = tuple(x.first[p] for p in cpt.parents)
    order = cpt.row(ctx)
    if order is None:
        return 0
    return 1 if order.index(x.first[x.swapped]) < order.index(x.second[x.swapped]) else 0


def induced_preference_graph(net: CpNet, budget: int = VERTEX_BUDGET) -> nx.DiGraph:
    """Digraph over all m^n outcomes with an edge worse -> better per entailed swap."""
    spec = net.spec
    if spec.m ** spec.n > budget:
        raise BudgetExceeded(f"{spec.m}^{spec.n} outcomes exceed budget {budget}")
    g = nx.DiGraph()
    g.add_nodes_from(spec.outcomes())
    for v in range(spec.n):
        for ctx in product(range(spec.m), repeat=spec.n - 1):
            for i, j in combinations(range(spec.m), 2):
                x = SwapInstance(insert_index(ctx, v, i), insert_index(ctx, v, j), v)
                if evaluate_swap(net, x):
                    g.add_edge(x.second, x.first)
                elif evaluate_swap(net, x.reversed()):
                    g.add_edge(x.first, x.second)
    return g


def is_consistent(net: CpNet, budget: int = VERTEX_BUDGET) -> bool:
    """True iff the induced preference graph has no directed cycle."""
    return nx.is_directed_acyclic_graph(induced_preference_graph(net, budget))


def dominates(net: CpNet, o: Sequence[int], o2: Sequence[int], budget: int = VERTEX_BUDGET) -> bool:
    """True iff the net entails o over o2 (a chain of improving flips from o2 to o)."""
    o, o2 = tuple(o), tuple(o2)
    if o == o2:
        return False
    g = induced_preference_graph(net, budget)
    return nx.has_path(g, o2, o)


def max_size(spec: ClassSpec) -> int:
    """Largest statement count of any k-bounded acyclic CP-net."""
    n, m, k = spec.n, spec.m, spec.k
    return (n - k) * m ** k + (m ** k - 1) // (m - 1)


def max_edges(spec: ClassSpec) -> int:
    """Largest edge count of any k-bounded acyclic dependency graph."""
    n, k = spec.n, spec.k
    return (n - k) * k + k * (k - 1) // 2


def subsumes(net: CpNet, net2: CpNet) -> bool:
    """True iff every specified statement of net2 appears in net under an extended context."""
    if (net.spec.n, net.spec.m) != (net2.spec.n, net2.spec.m):
        raise ValueError("nets must share n and m")
    for v in range(net.spec.n):
        cpt, cpt2 = net.cpts[v], net2.cpts[v]
        if not set(cpt2.parents) <= set(cpt.parents):
            if cpt2.statement_count() > 0:
                return False
            continue
        positions = [cpt.parents.index(p) for p in cpt2.parents]
        for ctx2, order2 in cpt2.rows:
            if order2 is None:
                continue
            if not any(
                order == order2 and all(ctx[pos] == val for pos, val in zip(positions, ctx2))
                for ctx, order in cpt.rows
            ):
                return False
    return True


def strictly_subsumes(net: CpNet, net2: CpNet) -> bool:
    return subsumes(net, net2) and net.cpts != net2.cpts


def _prune_dummy_parents(cpt: Cpt, spec: ClassSpec) -> Cpt:
    parents = list(cpt.parents)
    rows = dict(cpt.rows)
    changed = True
    while changed and parents:
        changed = False
        for axis, p in enumerate(parents):
            dummy = all(
                rows[ctx] == rows[ctx[:axis] + (w,) + ctx[axis + 1:]]
                for ctx in rows
                if ctx[axis] == 0
                for w in range(1, spec.m)
            )
            if dummy:
                rows = {
                    without_index(ctx, axis): order
                    for ctx, order in rows.items()
                    if ctx[axis] == 0
                }
                del parents[axis]
                changed = True
                break
    return Cpt.from_rows(cpt.variable, parents, rows)


def complete_extension(net: CpNet) -> CpNet:
    """Fill every empty row with the identity order and prune dummy parents."""
    spec = ClassSpec(net.spec.n, net.spec.m, net.spec.k, Completeness.COMPLETE_ONLY)
    fill = tuple(range(net.spec.m))
    cpts = []
    for cpt in net.cpts:
        rows = {ctx: (order if order is not None else fill) for ctx, order in cpt.rows}
        cpts.append(_prune_dummy_parents(Cpt.from_rows(cpt.variable, cpt.parents, rows), spec))
    return CpNet(spec, tuple(cpts))


def complement(net: CpNet) -> CpNet:
    """Reverse every specified order; inverts all swap labels of a complete net."""
    cpts = tuple(
        Cpt.from_rows(
            cpt.variable,
            cpt.parents,
            {ctx: (order[::-1] if order is not None else None) for ctx, order in cpt.rows},
        )
        for cpt in net.cpts
    )
    return CpNet(net.spec, cpts, allow_cyclic=net.allow_cyclic)


# ---------------------------------------------------------------------------
# Serialization

def net_to_dict(net: CpNet) -> dict:
    return {
        "n": net.spec.n,
        "m": net.spec.m,
        "k": net.spec.k,
        "cpts": [
            {
                "variable": cpt.variable,
                "parents": list(cpt.parents),
                "rows": [
                    {"context": list(ctx), "order": list(order) if order is not None else None}
                    for ctx, order in cpt.rows
                ],
            }
            for cpt in net.cpts
        ],
    }


def net_from_dict(data: Mapping, completeness: Optional[Completeness] = None) -> CpNet:
    if completeness is None:
        incomplete = any(
            row["order"] is None for cpt in data["cpts"] for row in cpt["rows"]
        )
        completeness = (
            Completeness.ALLOW_INCOMPLETE if incomplete else Completeness.COMPLETE_ONLY
        )
    spec = ClassSpec(data["n"], data["m"], data["k"], completeness)
    cpts = tuple(
        Cpt.from_rows(
            c["variable"],
            c["parents"],
            {tuple(r["context"]): r["order"] for r in c["rows"]},
        )
        for c in sorted(data["cpts"], key=lambda c: c["variable"])
    )
    return CpNet(spec, cpts)


def net_to_json(net: CpNet, indent: Optional[int] = 2) -> str:
    return json.dumps(net_to_dict(net), indent=indent)


def net_from_json(text: str) -> CpNet:
    return net_from_dict(json.loads(text))


def _default_names(n: int) -> list[str]:
    return [f"x{i}" for i in range(n)]


def dependency_dot(net: CpNet, names: Optional[Sequence[str]] = None) -> str:
    names = list(names) if names else _default_names(net.spec.n)
    lines = ["digraph dependencies {"]
    for v in range(net.spec.n):
        lines.append(f'  {v} [label="{names[v]}"];')
    for cpt in net.cpts:
        for p in cpt.parents:
            lines.append(f"  {p} -> {cpt.variable};")
    lines.append("}")
    return "\n".join(lines)


def preference_graph_dot(net: CpNet, budget: int = VERTEX_BUDGET) -> str:
    g = induced_preference_graph(net, budget)
    label = lambda o: "".join(str(v) for v in o)
    lines = ["digraph preferences {"]
    for o in g.nodes:
        lines.append(f'  "{label(o)}";')
    for a, b in g.edges:
        lines.append(f'  "{label(a)}" -> "{label(b)}";')
    lines.append("}")
    return "\n".join(lines)

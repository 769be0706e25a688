"""Exact learners from membership queries.

Tree learner (test sets + parent binary search), k-bounded binary learner
(universal-set context probing + recursive conflict refinement), their
incomplete-net variants, and majority-vote wrappers robust to limited
and malicious oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Optional, Sequence

from .core import (
    ClassSpec,
    Completeness,
    CpNet,
    Cpt,
    SwapInstance,
    insert_index,
)
from .oracles import OracleAnswer, OracleSession, f_ball
from .universal import UniversalSet, context_set, is_universal


class OracleContradiction(RuntimeError):
    """Answers are mutually inconsistent with any target of the assumed class."""


class NoParentFound(RuntimeError):
    """The parent binary search ran out of candidates."""


class UniversalSetTooWeak(ValueError):
    """The supplied set fails the universality check for these parameters."""


class MajorityTie(RuntimeError):
    """A majority vote tied; the corruption preconditions must be violated."""


class RobustStrategy:
    LIM = "lim"
    MAL = "mal"


@dataclass
class LearnResult:
    net: CpNet
    queries_used: int
    transcript: OracleSession


def _label(oracle, x: SwapInstance) -> int:
    ans = oracle.answer(x)
    if ans is OracleAnswer.UNKNOWN:
        raise OracleContradiction("complete-mode learner received an Unknown answer")
    return 1 if ans is OracleAnswer.YES else 0


def _label_pair(oracle, x: SwapInstance) -> tuple[int, int]:
    # an Unknown means neither direction is entailed, so the reverse query is free
    ans = oracle.answer(x)
    if ans is OracleAnswer.UNKNOWN:
        return 0, 0
    fwd = 1 if ans is OracleAnswer.YES else 0
    back = oracle.answer(x.reversed())
    bwd = 1 if back is OracleAnswer.YES else 0
    if fwd == 1 and bwd == 1:
        raise OracleContradiction(f"both directions of {x} answered Yes")
    return fwd, bwd


def _session_of(oracle) -> OracleSession:
    return oracle.session if isinstance(oracle, RobustOracle) else oracle


def find_parent(
    oracle,
    x: SwapInstance,
    x2: SwapInstance,
    candidates: Sequence[int],
    doubled: bool = False,
) -> int:
    """Binary search for a variable whose value separates two conflicting swaps.

    x and x2 swap the same variable with the same value pair but carry
    different labels; candidates are the context positions where they may
    differ.  Maintains a conflicting endpoint pair throughout: the queried
    midpoint takes x-side values on the first ceil-half of the remaining
    candidates and x2-side values on the rest.
    """
    v = x.swapped
    if x2.swapped != v or x2.value_pair != x.value_pair:
        raise ValueError("swaps must agree on variable and value pair")
    ask = (lambda y: _label_pair(oracle, y)[0]) if doubled else (lambda y: _label(oracle, y))
    alpha, beta = x, x2
    label_alpha, label_beta = ask(alpha), ask(beta)
    if label_alpha == label_beta:
        raise NoParentFound("the two swaps carry equal labels")
    remaining = [c for c in candidates if alpha.first[c] != beta.first[c]]
    if not remaining:
        raise NoParentFound("no candidate separates the two contexts")
    while len(remaining) > 1:
        half = (len(remaining) + 1) // 2
        keep, move = remaining[:half], remaining[half:]
        first, second = list(alpha.first), list(alpha.second)
        for c in move:
            first[c], second[c] = beta.first[c], beta.second[c]
        gamma = SwapInstance(tuple(first), tuple(second), v)
        if ask(gamma) == label_alpha:
            alpha, remaining = gamma, keep
        else:
            beta, remaining = gamma, move
    return remaining[0]


def _test_outcome(spec: ClassSpec, i: int, j: int, r: int) -> tuple[int, ...]:
    """All variables at value j except variable i at value r."""
    ctx = (j,) * (spec.n - 1)
    return insert_index(ctx, i, r)


def _sorted_test_set(oracle, spec: ClassSpec, i: int, j: int) -> tuple[int, ...]:
    if spec.m == 2:
        # one canonical query; its cached label is reused by the parent search
        x = SwapInstance(_test_outcome(spec, i, j, 0), _test_outcome(spec, i, j, 1), i)
        return (0, 1) if _label(oracle, x) else (1, 0)

    def cmp(a: int, b: int) -> int:
        x = SwapInstance(_test_outcome(spec, i, j, a), _test_outcome(spec, i, j, b), i)
        return -1 if _label(oracle, x) else 1

    return tuple(sorted(range(spec.m), key=cmp_to_key(cmp)))


def _conflict_swaps(
    spec: ClassSpec, i: int, j1: int, j2: int, order1: Sequence[int], order2: Sequence[int]
) -> tuple[SwapInstance, SwapInstance]:
    """A value pair adjacent in order1 but inverted in order2, in both contexts."""
    if spec.m == 2:
        # the canonical swaps were already asked while sorting the test sets
        x = SwapInstance(_test_outcome(spec, i, j1, 0), _test_outcome(spec, i, j1, 1), i)
        x2 = SwapInstance(_test_outcome(spec, i, j2, 0), _test_outcome(spec, i, j2, 1), i)
        return x, x2
    pos2 = {val: p for p, val in enumerate(order2)}
    for a, b in zip(order1, order1[1:]):
        if pos2[a] > pos2[b]:
            x = SwapInstance(_test_outcome(spec, i, j1, a), _test_outcome(spec, i, j1, b), i)
            x2 = SwapInstance(_test_outcome(spec, i, j2, a), _test_outcome(spec, i, j2, b), i)
            return x, x2
    raise OracleContradiction("orders differ but no adjacent pair is inverted")


def learn_tree_complete(oracle, spec: ClassSpec) -> LearnResult:
    """Exact learner for complete tree-structured (k <= 1) targets."""
    session = _session_of(oracle)
    start = session.distinct_queries
    cpts = []
    for i in range(spec.n):
        orders = [_sorted_test_set(oracle, spec, i, j) for j in range(spec.m)]
        if all(o == orders[0] for o in orders):
            cpts.append(Cpt.from_rows(i, (), {(): orders[0]}))
            continue
        j2 = next(j for j in range(spec.m) if orders[j] != orders[0])
        x, x2 = _conflict_swaps(spec, i, 0, j2, orders[0], orders[j2])
        candidates = [c for c in range(spec.n) if c != i]
        p = find_parent(oracle, x, x2, candidates)
        cpts.append(Cpt.from_rows(i, (p,), {(w,): orders[w] for w in range(spec.m)}))
    net = CpNet(spec, tuple(cpts))
    return LearnResult(net, session.distinct_queries - start, session)


def learn_tree_incomplete(oracle, spec: ClassSpec) -> LearnResult:
    """Tree learner over possibly-empty rows: every query asked in both directions."""
    if spec.m != 2:
        raise ValueError("the incomplete tree learner is binary-domain only")
    session = _session_of(oracle)
    start = session.distinct_queries
    out_spec = ClassSpec(spec.n, spec.m, spec.k, Completeness.ALLOW_INCOMPLETE)

    def row_at(i: int, j: int) -> Optional[tuple[int, ...]]:
        x = SwapInstance(_test_outcome(spec, i, j, 0), _test_outcome(spec, i, j, 1), i)
        fwd, bwd = _label_pair(oracle, x)
        if fwd:
            return (0, 1)
        return (1, 0) if bwd else None

    cpts = []
    for i in range(spec.n):
        rows = [row_at(i, j) for j in range(2)]
        if rows[0] == rows[1]:
            cpts.append(Cpt.from_rows(i, (), {(): rows[0]}))
            continue
        # pick a direction entailed in exactly one of the two contexts
        pick = rows[0] if rows[0] is not None else rows[1]
        a, b = pick
        x = SwapInstance(_test_outcome(spec, i, 0, a), _test_outcome(spec, i, 0, b), i)
        x2 = SwapInstance(_test_outcome(spec, i, 1, a), _test_outcome(spec, i, 1, b), i)
        candidates = [c for c in range(spec.n) if c != i]
        p = find_parent(oracle, x, x2, candidates, doubled=True)
        cpts.append(Cpt.from_rows(i, (p,), {(w,): rows[w] for w in range(2)}))
    net = CpNet(out_spec, tuple(cpts))
    return LearnResult(net, session.distinct_queries - start, session)


def _check_universal(spec: ClassSpec, u: UniversalSet) -> None:
    if spec.m != 2:
        raise ValueError("the k-bounded learner is binary-domain only")
    if u.z != spec.n - 1 or u.k < spec.k or not is_universal(u):
        raise UniversalSetTooWeak(
            f"need a (2, {spec.n - 1}, {spec.k})-universal set"
        )


def _context_swap(ctx: Sequence[int], v: int) -> SwapInstance:
    return SwapInstance(insert_index(ctx, v, 0), insert_index(ctx, v, 1), v)


def _refine_parents(oracle, spec, v, observed, distinguisher, doubled):
    """Grow the parent set until no two sampled contexts with equal parent
    values disagree, then read the CPT rows off the sample."""
    parents: list[int] = []
    parts = [list(observed)]
    while True:
        conflict = None
        for part in parts:
            for a in range(len(part)):
                for b in range(a + 1, len(part)):
                    if part[a][1] != part[b][1]:
                        conflict = (part[a], part[b])
                        break
                if conflict:
                    break
            if conflict:
                break
        if conflict is None:
            break
        if len(parents) == spec.k:
            raise OracleContradiction("conflicts persist with k parents found")
        (ctx1, row1), (ctx2, row2) = conflict
        x, x2 = distinguisher(ctx1, row1, ctx2, row2, v)
        candidates = [
            c for c in range(spec.n)
            if c != v and x.first[c] != x2.first[c] and c not in parents
        ]
        p = find_parent(oracle, x, x2, candidates, doubled=doubled)
        parents.append(p)
        parts = [
            [entry for entry in part if entry[0][p] == w]
            for part in parts
            for w in range(2)
        ]
        parts = [part for part in parts if part]
    parents.sort()
    rows = {}
    for entry_ctx, row in observed:
        pattern = tuple(entry_ctx[p] for p in parents)
        rows.setdefault(pattern, row)
    return parents, rows


def learn_kbounded_complete(oracle, spec: ClassSpec, u: UniversalSet) -> LearnResult:
    """Exact learner for complete binary k-bounded targets, guided by a
    universal context set."""
    _check_universal(spec, u)
    session = _session_of(oracle)
    start = session.distinct_queries

    def distinguisher(ctx1, row1, ctx2, row2, v):
        if row1 == (0, 1):
            return _context_swap_full(ctx1, v), _context_swap_full(ctx2, v)
        return _context_swap_full(ctx2, v), _context_swap_full(ctx1, v)

    cpts = []
    for v in range(spec.n):
        observed = []
        for ctx in context_set(u, v, spec):
            full = insert_index(ctx, v, 0)
            label = _label(oracle, SwapInstance(full, insert_index(ctx, v, 1), v))
            observed.append((full, (0, 1) if label else (1, 0)))
        parents, rows = _refine_parents(oracle, spec, v, observed, distinguisher, doubled=False)
        cpts.append(Cpt.from_rows(v, parents, rows))
    net = CpNet(spec, tuple(cpts))
    return LearnResult(net, session.distinct_queries - start, session)


def _context_swap_full(full: Sequence[int], v: int) -> SwapInstance:
    first = tuple(full[:v]) + (0,) + tuple(full[v + 1:])
    second = tuple(full[:v]) + (1,) + tuple(full[v + 1:])
    return SwapInstance(first, second, v)


def learn_kbounded_incomplete(oracle, spec: ClassSpec, u: UniversalSet) -> LearnResult:
    """k-bounded learner over possibly-empty rows: direction-doubled queries."""
    _check_universal(spec, u)
    session = _session_of(oracle)
    start = session.distinct_queries
    out_spec = ClassSpec(spec.n, spec.m, spec.k, Completeness.ALLOW_INCOMPLETE)

    def distinguisher(ctx1, row1, ctx2, row2, v):
        # a direction entailed under row1 but not row2, or vice versa
        for row, mine, other in ((row1, ctx1, ctx2), (row2, ctx2, ctx1)):
            if row is not None:
                a, b = row
                x = _directed_swap(mine, v, a, b)
                x2 = _directed_swap(other, v, a, b)
                return x, x2
        raise OracleContradiction("two empty rows cannot conflict")

    cpts = []
    for v in range(spec.n):
        observed = []
        for ctx in context_set(u, v, spec):
            full = insert_index(ctx, v, 0)
            fwd, bwd = _label_pair(oracle, _context_swap_full(full, v))
            row = (0, 1) if fwd else (1, 0) if bwd else None
            observed.append((full, row))
        parents, rows = _refine_parents(oracle, spec, v, observed, distinguisher, doubled=True)
        cpts.append(Cpt.from_rows(v, parents, rows))
    net = CpNet(out_spec, tuple(cpts))
    return LearnResult(net, session.distinct_queries - start, session)


def _directed_swap(full: Sequence[int], v: int, a: int, b: int) -> SwapInstance:
    first = tuple(full[:v]) + (a,) + tuple(full[v + 1:])
    second = tuple(full[:v]) + (b,) + tuple(full[v + 1:])
    return SwapInstance(first, second, v)


# ---------------------------------------------------------------------------
# Corruption-robust answering

def robust_answer(oracle: OracleSession, x: SwapInstance, strategy: str, spec: ClassSpec) -> int:
    """Majority-vote answer resilient to limited/malicious corruption.

    lim: ask x itself, fall back to the distance-1 neighborhood only on
    Unknown; mal: never trust x, always take the neighborhood majority.
    """
    if strategy == RobustStrategy.LIM:
        direct = oracle.answer(x)
        if direct is not OracleAnswer.UNKNOWN:
            return 1 if direct is OracleAnswer.YES else 0
        votes = [oracle.answer(y) for y in f_ball(x, 1, spec)]
        votes = [v for v in votes if v is not OracleAnswer.UNKNOWN]
    elif strategy == RobustStrategy.MAL:
        votes = [oracle.answer(y) for y in f_ball(x, 1, spec)]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    yes = sum(1 for v in votes if v is OracleAnswer.YES)
    no = len(votes) - yes
    if yes == no:
        raise MajorityTie(f"{yes}-{no} vote on {x}")
    return 1 if yes > no else 0


@dataclass
class RobustOracle:
    """Adapter exposing robust_answer through the plain oracle interface."""

    session: OracleSession
    strategy: str
    spec: ClassSpec

    def answer(self, x: SwapInstance) -> OracleAnswer:
        label = robust_answer(self.session, x, self.strategy, self.spec)
        return OracleAnswer.YES if label else OracleAnswer.NO


def learn_with_corruption(
    oracle: OracleSession,
    spec: ClassSpec,
    strategy: str,
    u: Optional[UniversalSet] = None,
) -> LearnResult:
    """Run the clean learner with every query routed through the majority vote."""
    robust = RobustOracle(oracle, strategy, spec)
    if u is None:
        if spec.k > 1:
            raise ValueError("k > 1 requires a universal set")
        return learn_tree_complete(robust, spec)
    return learn_kbounded_complete(robust, spec, u)

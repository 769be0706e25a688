"""Membership-query answer sources and adversarial corruption sets.

All oracles are persistent: a repeated instance is served from the log
without re-asking, and only distinct instances are charged.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product
from typing import Callable, Mapping, Optional

from .core import (
    ClassSpec,
    CpNet,
    Cpt,
    SwapInstance,
    canonical_swap,
    evaluate_swap,
    insert_index,
    instance_space,
)


class InfeasibleParameters(ValueError):
    """Corruption bounds are negative for these class parameters."""


class OracleAnswer(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class OracleKind(Enum):
    PERFECT = "perfect"
    LIMITED = "limited"
    MALICIOUS = "malicious"
    HUMAN = "human"


class CorruptionMode(Enum):
    LIMITED_BOUND = "limited"
    MALICIOUS_BOUND = "malicious"


@dataclass(frozen=True)
class CorruptionSet:
    """The adversary's fixed instance set L, stored in canonical direction."""

    members: frozenset[SwapInstance]

    def __contains__(self, x: SwapInstance) -> bool:
        return x in self.members or x.reversed() in self.members

    def __len__(self) -> int:
        return len(self.members)

    def certificate(self, spec: ClassSpec) -> int:
        """max over all canonical instances x of |F1(x) ∩ L|."""
        best = 0
        for x in instance_space(spec):
            best = max(best, sum(1 for y in f_ball(x, 1, spec) if y in self))
        return best


@dataclass
class OracleSession:
    """One answer source with an append-only log and distinct-query charging."""

    kind: OracleKind
    spec: ClassSpec
    target: Optional[CpNet] = None
    corruption: Optional[CorruptionSet] = None
    provider: Optional[Callable[[SwapInstance], OracleAnswer]] = None
    log: list[tuple[SwapInstance, OracleAnswer]] = field(default_factory=list)
    queries_asked: int = 0
    distinct_queries: int = 0
    _cache: dict[SwapInstance, OracleAnswer] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind is OracleKind.HUMAN:
            if self.provider is None:
                raise ValueError("a human session needs an answer provider")
        elif self.target is None:
            raise ValueError(f"a {self.kind.value} session needs a target net")
        if self.kind in (OracleKind.LIMITED, OracleKind.MALICIOUS) and self.corruption is None:
            self.corruption = CorruptionSet(frozenset())

    def answer(self, x: SwapInstance) -> OracleAnswer:
        self.queries_asked += 1
        if x in self._cache:
            return self._cache[x]
        if self.kind is OracleKind.HUMAN:
            ans = self.provider(x)
        else:
            truth = OracleAnswer.YES if evaluate_swap(self.target, x) else OracleAnswer.NO
            if self.kind is OracleKind.PERFECT or x not in self.corruption:
                ans = truth
            elif self.kind is OracleKind.LIMITED:
                ans = OracleAnswer.UNKNOWN
            else:
                ans = OracleAnswer.NO if truth is OracleAnswer.YES else OracleAnswer.YES
        self._cache[x] = ans
        self.log.append((x, ans))
        self.distinct_queries += 1
        return ans


def answer(session: OracleSession, x: SwapInstance) -> OracleAnswer:
    return session.answer(x)


def f_ball(x: SwapInstance, t: int, spec: ClassSpec) -> list[SwapInstance]:
    """Swaps sharing x's variable and value pair, context Hamming distance exactly t."""
    if not 1 <= t <= spec.n - 1:
        raise ValueError("need 1 <= t <= n-1")
    v = x.swapped
    ctx = x.context
    i, j = x.value_pair
    out = []
    for positions in combinations(range(spec.n - 1), t):
        choices = [[w for w in range(spec.m) if w != ctx[p]] for p in positions]
        for vals in product(*choices):
            new_ctx = list(ctx)
            for p, w in zip(positions, vals):
                new_ctx[p] = w
            out.append(SwapInstance(insert_index(new_ctx, v, i), insert_index(new_ctx, v, j), v))
    return out


def corruption_bound(spec: ClassSpec, mode: CorruptionMode) -> int:
    if mode is CorruptionMode.LIMITED_BOUND:
        return spec.n - 2 - 2 * spec.k
    return (spec.n - 1) // 2 - spec.k - 1


def sample_corruption_set(
    spec: ClassSpec, target: CpNet, mode: CorruptionMode, seed: int
) -> CorruptionSet:
    """Seeded greedy insertion keeping every instance's F1 overlap within the
    mode's per-ball bound."""
    if spec.m != 2:
        raise InfeasibleParameters("corruption experiments are binary-domain only")
    if spec.n <= 2 * spec.k + 2:
        raise InfeasibleParameters("need n > 2k + 2")
    bound = corruption_bound(spec, mode)
    if bound < 0:
        raise InfeasibleParameters(f"per-ball bound {bound} is negative")
    rng = random.Random(seed)
    candidates = instance_space(spec)
    rng.shuffle(candidates)
    chosen: set[SwapInstance] = set()
    overlap: dict[SwapInstance, int] = {}
    for x in candidates:
        neighbors = f_ball(x, 1, spec)
        if all(overlap.get(y, 0) + 1 <= bound for y in neighbors):
            chosen.add(x)
            for y in neighbors:
                overlap[y] = overlap.get(y, 0) + 1
    return CorruptionSet(frozenset(chosen))


def hopeless_corruption_set(
    spec: ClassSpec, v: int, context_over_parents: Mapping[int, int]
) -> tuple[CorruptionSet, CpNet, CpNet]:
    """An L of size 2^(n-1-k) on which a limited oracle hides one statement.

    Returns L plus two nets that agree on every instance outside L: one
    where v's preference under the given parent context is reversed, one
    where v has no parents at all.
    """
    if spec.m != 2:
        raise ValueError("binary domains only")
    parents = tuple(sorted(context_over_parents))
    k = len(parents)
    if not 1 <= k <= spec.n - 1 or k > spec.k:
        raise ValueError("need 1 <= |parents| <= k")
    if v in parents:
        raise ValueError("v cannot be its own parent")
    gamma = tuple(context_over_parents[p] for p in parents)

    base = (0, 1)
    rows = {
        ctx: (base[::-1] if ctx == gamma else base)
        for ctx in product(range(2), repeat=k)
    }
    cpts1, cpts2 = [], []
    for w in range(spec.n):
        if w == v:
            cpts1.append(Cpt.from_rows(v, parents, rows))
        else:
            cpts1.append(Cpt.from_rows(w, (), {(): base}))
        cpts2.append(Cpt.from_rows(w, (), {(): base}))
    n1 = CpNet(spec, tuple(cpts1))
    n2 = CpNet(spec, tuple(cpts2))

    members = set()
    for ctx in product(range(2), repeat=spec.n - 1):
        full0 = insert_index(ctx, v, 0)
        if tuple(full0[p] for p in parents) == gamma:
            members.add(canonical_swap(full0, insert_index(ctx, v, 1)))
    return CorruptionSet(frozenset(members)), n1, n2


# ---------------------------------------------------------------------------
# Transcript serialization

def swap_to_dict(x: SwapInstance) -> dict:
    return {"first": list(x.first), "second": list(x.second), "swapped": x.swapped}


def swap_from_dict(data: Mapping) -> SwapInstance:
    return SwapInstance(tuple(data["first"]), tuple(data["second"]), data["swapped"])


def session_transcript(session: OracleSession) -> dict:
    return {
        "kind": session.kind.value,
        "queries": [
            {"x": swap_to_dict(x), "answer": ans.value} for x, ans in session.log
        ],
        "distinct": session.distinct_queries,
    }

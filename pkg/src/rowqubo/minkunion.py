"""Min-k-Union instances with an exhaustive and a greedy solver."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapacityError, DomainError, UsageError
from .trace import ToggleSets

__all__ = [
    "MinKUnionInstance",
    "Selection",
    "from_toggle_sets",
    "solve_exact",
    "solve_greedy",
    "DEFAULT_ENUMERATION_CAP",
]

DEFAULT_ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class MinKUnionInstance:
    """Ground set ``V``, an ordered collection of subsets and the count ``k``.

    Set ``j`` in ``sets`` is the set labelled ``M_j``; the order is part of
    the instance.
    """

    ground_set: tuple[int, ...]
    sets: tuple[frozenset[int], ...]
    k: int

    def __init__(self, ground_set: Iterable[int], sets: Iterable[Iterable[int]], k: int):
        ground = tuple(sorted(set(ground_set)))
        coll = tuple(frozenset(s) for s in sets)
        members = set(ground)
        for j, s in enumerate(coll):
            stray = s - members
            if stray:
                raise DomainError(f"set {j} has elements {sorted(stray)} outside the ground set")
        if not 0 <= k <= len(coll):
            raise UsageError(f"k={k} must lie in [0, {len(coll)}] (number of sets)")
        object.__setattr__(self, "ground_set", ground)
        object.__setattr__(self, "sets", coll)
        object.__setattr__(self, "k", int(k))

    @property
    def num_sets(self) -> int:
        return len(self.sets)

    @property
    def num_elements(self) -> int:
        return len(self.ground_set)

    def union_of(self, indices: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for j in indices:
            out |= self.sets[j]
        return frozenset(out)

    def selection(self, indices: Iterable[int]) -> "Selection":
        """Build a Selection, recomputing union and objective from the sets."""
        idx = tuple(sorted(set(indices)))
        if any(not 0 <= j < self.num_sets for j in idx):
            raise DomainError(f"set indices {idx} out of range for {self.num_sets} sets")
        union = tuple(sorted(self.union_of(idx)))
        return Selection(idx, union, len(union))

    def is_feasible(self, sel: "Selection") -> bool:
        return len(sel.indices) == self.k


@dataclass(frozen=True)
class Selection:
    indices: tuple[int, ...]
    union: tuple[int, ...]
    objective: int


def from_toggle_sets(ts: ToggleSets, k: int, ground_set_policy: str = "union") -> MinKUnionInstance:
    """One set per address bit.

    ``ground_set_policy="union"`` keeps only elements that occur in some set;
    ``"all"`` uses every transition index ``1..num_transitions``.
    """
    if k > ts.width or k < 0:
        raise UsageError(f"cannot choose k={k} row bits from a {ts.width}-bit address")
    if ground_set_policy == "union":
        ground = set().union(*ts.sets) if ts.sets else set()
    elif ground_set_policy == "all":
        ground = set(range(1, ts.num_transitions + 1))
    else:
        raise UsageError(f"unknown ground-set policy {ground_set_policy!r}")
    return MinKUnionInstance(ground, ts.sets, k)


def _masks(inst: MinKUnionInstance) -> list[int]:
    pos = {v: i for i, v in enumerate(inst.ground_set)}
    return [sum(1 << pos[v] for v in s) for s in inst.sets]


def solve_exact(inst: MinKUnionInstance, enumerate_all: bool = False,
                cap: int = DEFAULT_ENUMERATION_CAP) -> Selection | list[Selection]:
    """Enumerate every k-subset of the sets in lexicographic order.

    Returns the first optimal selection, or with ``enumerate_all`` every
    optimal selection in lexicographic order of index tuples.
    """
    total = math.comb(inst.num_sets, inst.k)
    if total > cap:
        raise CapacityError(
            f"C({inst.num_sets},{inst.k}) = {total} selections exceeds the enumeration cap {cap}; "
            "use solve_greedy or a QUBO sampler instead")
    masks = _masks(inst)
    best = None
    winners: list[tuple[int, ...]] = []
    for combo in itertools.combinations(range(inst.num_sets), inst.k):
        m = 0
        for j in combo:
            m |= masks[j]
        size = m.bit_count()
        if best is None or size < best:
            best = size
            winners = [combo]
        elif size == best and enumerate_all:
            winners.append(combo)
    if enumerate_all:
        return [inst.selection(c) for c in winners]
    return inst.selection(winners[0])


def solve_greedy(inst: MinKUnionInstance) -> Selection:
    """Add the set that grows the union least, lowest index on ties."""
    chosen: list[int] = []
    covered: frozenset[int] = frozenset()
    remaining = list(range(inst.num_sets))
    for _ in range(inst.k):
        j = min(remaining, key=lambda c: (len(inst.sets[c] - covered), c))
        chosen.append(j)
        remaining.remove(j)
        covered = covered | inst.sets[j]
    return inst.selection(chosen)

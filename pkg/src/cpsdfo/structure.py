"""Subspace structure detection for CPS problems.

Given the element domains of a CPS problem, this module computes, for
every variable, the list of elements that depend on it; merges variables
whose lists coincide into groups (the coordinate subspaces that can be
polled with restricted evaluations); and packs the groups greedily into
collections whose element lists are pairwise disjoint, so that all
groups of one collection can be polled and the observed decreases add
up exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .problem import CpsProblem

__all__ = [
    "StructureAnalysis",
    "invert_structure",
    "group_identical",
    "greedy_collections",
    "analyze",
]


def invert_structure(problem: CpsProblem) -> list[tuple[int, ...]]:
    """For each variable, the ascending list of elements that use it."""
    touching: list[list[int]] = [[] for _ in range(problem.n)]
    for i, el in enumerate(problem.elements):
        for j in el.domain:
            touching[j].append(i)
    return [tuple(t) for t in touching]


def group_identical(
    touching: list[tuple[int, ...]],
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Merge variables with identical element lists.

    Returns ``(groups, group_elements)`` where ``groups[k]`` is the
    ascending tuple of variables in group ``k`` and ``group_elements[k]``
    is their shared element list.  Groups are ordered by their smallest
    member, so the first variable of the problem always lies in group 0.
    """
    groups: list[list[int]] = []
    group_elements: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], list[int]] = {}
    for j, e in enumerate(touching):
        g = seen.get(e)
        if g is None:
            seen[e] = g = [j]
            groups.append(g)
            group_elements.append(e)
        else:
            g.append(j)
    return [tuple(g) for g in groups], group_elements


def greedy_collections(
    group_elements: list[tuple[int, ...]],
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """First-fit packing of groups into element-disjoint collections.

    The first collection is seeded with group 0; the remaining groups
    are scanned in ascending order and added whenever their element list
    is disjoint from everything already in the collection.  When a scan
    completes, the smallest unassigned group seeds the next collection.

    Returns ``(collections, collection_elements)`` where
    ``collections[h]`` lists the member groups and
    ``collection_elements[h]`` the union of their element lists.
    """
    unassigned = list(range(len(group_elements)))
    collections: list[tuple[int, ...]] = []
    collection_elements: list[tuple[int, ...]] = []
    while unassigned:
        current = [unassigned[0]]
        union = set(group_elements[unassigned[0]])
        rest: list[int] = []
        for k in unassigned[1:]:
            y = group_elements[k]
            if union.isdisjoint(y):
                current.append(k)
                union.update(y)
            else:
                rest.append(k)
        collections.append(tuple(current))
        collection_elements.append(tuple(sorted(union)))
        unassigned = rest
    return collections, collection_elements


@dataclass(frozen=True)
class StructureAnalysis:
    """Everything the structured solver needs to know about a problem.

    Attributes
    ----------
    touching : per-variable ascending element lists.
    groups : variable groups with identical element lists, ordered by
        smallest member.
    group_elements : shared element list of each group.
    collections : greedy packing of group indices into element-disjoint
        collections.
    collection_elements : union of the element lists of each collection.
    max_domain : largest element domain size (the published per-problem
        structure tables report this column next to q, t and the largest
        group size).
    """

    n: int
    q: int
    touching: tuple[tuple[int, ...], ...]
    groups: tuple[tuple[int, ...], ...]
    group_elements: tuple[tuple[int, ...], ...]
    collections: tuple[tuple[int, ...], ...]
    collection_elements: tuple[tuple[int, ...], ...]
    max_domain: int

    @cached_property
    def group_arrays(self) -> tuple[np.ndarray, ...]:
        """Index arrays for the groups; built on first use."""
        return tuple(np.asarray(g, dtype=np.intp) for g in self.groups)

    @property
    def r(self) -> int:
        """Number of variable groups."""
        return len(self.groups)

    @property
    def t(self) -> int:
        """Number of collections."""
        return len(self.collections)

    def summary(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "r": self.r,
            "t": self.t,
            "max_domain": self.max_domain,
            "max_touching": max(len(e) for e in self.touching),
            "max_group": max(len(g) for g in self.groups),
        }

    def stats_table(self) -> tuple[int, int, int, int]:
        """The (q, max element size, t, max group size) quadruple."""
        return (self.q, self.max_domain, self.t, max(len(g) for g in self.groups))

    def validate(self) -> None:
        """Check the internal invariants; raises AssertionError on failure."""
        seen_vars = sorted(j for g in self.groups for j in g)
        assert seen_vars == list(range(self.n)), "groups must partition the variables"
        for k, g in enumerate(self.groups):
            for j in g:
                assert self.touching[j] == self.group_elements[k]
        firsts = [g[0] for g in self.groups]
        assert firsts == sorted(firsts), "groups must be ordered by smallest member"
        seen_groups = sorted(k for c in self.collections for k in c)
        assert seen_groups == list(range(self.r)), "collections must partition groups"
        for h, coll in enumerate(self.collections):
            union: set[int] = set()
            for k in coll:
                y = set(self.group_elements[k])
                assert union.isdisjoint(y), "collection element lists must be disjoint"
                union.update(y)
            assert tuple(sorted(union)) == self.collection_elements[h]


def analyze(problem: CpsProblem) -> StructureAnalysis:
    """Run the full structure pipeline on one problem."""
    touching = invert_structure(problem)
    groups, group_elements = group_identical(touching)
    collections, collection_elements = greedy_collections(group_elements)
    return StructureAnalysis(
        n=problem.n,
        q=problem.q,
        touching=tuple(touching),
        groups=tuple(groups),
        group_elements=tuple(group_elements),
        collections=tuple(collections),
        collection_elements=tuple(collection_elements),
        max_domain=max(len(el.domain) for el in problem.elements),
    )

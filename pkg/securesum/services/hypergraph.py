from itertools import combinations
import logging
from typing import Dict, Iterable, List

from securesum.domain.hypergraph import (
    CollusionFamily,
    FeasibilityVerdict,
    KeyHypergraph,
    UserSet,
    format_users,
)
from securesum.exceptions import HypergraphError


logger = logging.getLogger(__name__)


class UnionFind:
    """
    Disjoint sets over node indices with path halving and union by size.
    """

    def __init__(self, nodes: Iterable[int]) -> None:
        self.parent: Dict[int, int] = {v: v for v in nodes}
        self.size: Dict[int, int] = {v: 1 for v in self.parent}

    def find(self, v: int) -> int:
        parent = self.parent
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def groups(self) -> List[UserSet]:
        """
        Components ordered by their smallest member.
        """
        members: Dict[int, List[int]] = {}
        for v in sorted(self.parent):
            members.setdefault(self.find(v), []).append(v)
        return sorted((frozenset(m) for m in members.values()), key=min)


def components(graph: KeyHypergraph) -> List[UserSet]:
    uf = UnionFind(graph.nodes)
    for edge in graph.edges:
        first, *rest = sorted(edge)
        for v in rest:
            uf.union(first, v)
    return uf.groups()


def is_connected(graph: KeyHypergraph) -> bool:
    """
    True iff every bipartition of the nodes is crossed by some edge. Size-1 edges
    never merge anything.
    """
    return len(components(graph)) == 1


def induced_subgraph(graph: KeyHypergraph, removed: Iterable[int]) -> KeyHypergraph:
    """
    Delete the ``removed`` users and every edge incident to one of them: a key known to
    a colluder protects nothing. Remaining nodes are renumbered 1..K' in order and
    ``labels`` keeps their original indices.
    """
    removed_set = frozenset(removed)
    if any(u < 1 or u > graph.user_count for u in removed_set):
        raise HypergraphError(
            f"cannot remove {format_users(removed_set)} "
            f"from a graph on {graph.user_count} users"
        )
    kept = [v for v in graph.nodes if v not in removed_set]
    if len(kept) < 2:
        raise HypergraphError(
            f"removing {format_users(removed_set)} leaves fewer than 2 users"
        )
    new_index = {v: i + 1 for i, v in enumerate(kept)}
    edges = [
        [new_index[v] for v in sorted(edge)]
        for edge in graph.edges
        if not edge & removed_set
    ]
    return KeyHypergraph(len(kept), edges, labels=[graph.labels[v - 1] for v in kept])


def feasibility(graph: KeyHypergraph, family: CollusionFamily) -> FeasibilityVerdict:
    """
    Secure summation is feasible iff the graph stays connected after deleting each
    colluding set in ``family`` together with its incident edges. The witness of an
    infeasible instance is (component of the first remaining user, everybody else).
    """
    for colluders in family:
        remainder = induced_subgraph(graph, colluders)
        parts = components(remainder)
        if len(parts) > 1:
            first = remainder.label_set(parts[0])
            rest = remainder.label_set(v for part in parts[1:] for v in part)
            logger.debug(
                "Removing %s disconnects the key hypergraph into %d components",
                format_users(colluders),
                len(parts),
            )
            return FeasibilityVerdict(False, colluders, (first, rest))
    return FeasibilityVerdict(True)


def symmetric_pattern(user_count: int, group_size: int) -> KeyHypergraph:
    if not 1 <= group_size <= user_count:
        raise HypergraphError(f"group size {group_size} outside [1, {user_count}]")
    return KeyHypergraph(
        user_count, list(combinations(range(1, user_count + 1), group_size))
    )

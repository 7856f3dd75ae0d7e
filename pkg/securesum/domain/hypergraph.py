from itertools import combinations
from typing import FrozenSet, Iterable, Optional, Tuple

import attr

from securesum.domain.dataclass import dataclass
from securesum.exceptions import HypergraphError


UserSet = FrozenSet[int]


def user_set(users: Iterable[int]) -> UserSet:
    return frozenset(int(u) for u in users)


def format_users(users: Iterable[int]) -> str:
    return "{" + ",".join(str(u) for u in sorted(users)) + "}"


def _to_edges(edges: Iterable[Iterable[int]]) -> Tuple[UserSet, ...]:
    return tuple(user_set(e) for e in edges)


@dataclass(frozen=True)
class KeyHypergraph:
    """
    Users are nodes, key-sharing groups are (hyper)edges. Node indices are 1-based.

    Duplicate edges are kept: each one stands for an independent key on the same
    group. ``labels`` maps node ``i`` to ``labels[i - 1]``, the user's index in the
    graph this one was induced from (the identity for a top-level graph).
    """

    user_count: int
    edges: Tuple[UserSet, ...] = attr.ib(converter=_to_edges)
    labels: Tuple[int, ...] = attr.ib(
        default=None, converter=attr.converters.optional(tuple)
    )

    def __attrs_post_init__(self):
        if self.user_count < 2:
            raise HypergraphError(
                f"a key hypergraph needs K >= 2 users, got {self.user_count}"
            )
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(1, self.user_count + 1)))
        if len(self.labels) != self.user_count:
            raise HypergraphError("one label is required per node")
        for i, edge in enumerate(self.edges):
            if not edge:
                raise HypergraphError(f"edge #{i + 1} is empty")
            if min(edge) < 1 or max(edge) > self.user_count:
                raise HypergraphError(
                    f"edge #{i + 1} {format_users(edge)} has members "
                    f"outside [1..{self.user_count}]"
                )

    @property
    def nodes(self) -> Tuple[int, ...]:
        return tuple(range(1, self.user_count + 1))

    def label_set(self, users: Iterable[int]) -> UserSet:
        """
        Translate node indices of this graph into user indices of the original graph.
        """
        return frozenset(self.labels[u - 1] for u in users)

    def labelled_edges(self) -> Tuple[UserSet, ...]:
        return tuple(self.label_set(e) for e in self.edges)


def _check_collusion(instance, attribute, sets):
    for s in sets:
        if s and (min(s) < 1 or max(s) > instance.user_count):
            raise HypergraphError(
                f"colluding set {format_users(s)} has members "
                f"outside [1..{instance.user_count}]"
            )
        if len(s) > instance.user_count - 2:
            raise HypergraphError(
                f"colluding set {format_users(s)} is larger than "
                f"K-2 = {instance.user_count - 2}"
            )


@dataclass(frozen=True)
class CollusionFamily:
    """
    The colluding user sets to audit, exactly as listed. The empty set (the server on
    its own) is a legitimate member. The family is not closed under subsets; use
    ``subset_closure`` for that.
    """

    user_count: int
    sets: Tuple[UserSet, ...] = attr.ib(converter=_to_edges, validator=_check_collusion)

    @classmethod
    def of_size(cls, user_count: int, size: int) -> "CollusionFamily":
        return cls(user_count, combinations(range(1, user_count + 1), size))

    @classmethod
    def up_to_size(cls, user_count: int, size: int) -> "CollusionFamily":
        sets = [
            s
            for t in range(0, size + 1)
            for s in combinations(range(1, user_count + 1), t)
        ]
        return cls(user_count, sets)

    def subset_closure(self) -> "CollusionFamily":
        seen = set()
        closed = []
        for s in sorted(self.sets, key=lambda s: (len(s), sorted(s))):
            for t in range(len(s) + 1):
                for sub in combinations(sorted(s), t):
                    sub_set = frozenset(sub)
                    if sub_set not in seen:
                        seen.add(sub_set)
                        closed.append(sub_set)
        closed.sort(key=lambda s: (len(s), sorted(s)))
        return CollusionFamily(self.user_count, closed)

    def __iter__(self):
        return iter(self.sets)

    def __len__(self):
        return len(self.sets)


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool

    violating: Optional[UserSet] = None
    """
    The first colluding set whose removal disconnects the graph.
    """

    partition: Optional[Tuple[UserSet, UserSet]] = None
    """
    A bipartition of the remaining users (original labels) crossed by no edge.
    """

    def describe(self) -> str:
        if self.feasible:
            return "FEASIBLE"
        assert self.violating is not None and self.partition is not None
        left, right = self.partition
        return (
            f"INFEASIBLE: T={format_users(self.violating)}, "
            f"partition {format_users(left)} | {format_users(right)}"
        )

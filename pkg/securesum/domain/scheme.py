from enum import Enum
from typing import Optional, Tuple

import attr

from securesum.domain.audit import AuditReport
from securesum.domain.dataclass import dataclass
from securesum.domain.field import FieldSpec
from securesum.domain.hypergraph import CollusionFamily, KeyHypergraph
from securesum.domain.linalg import FieldMatrix, FieldVector


class SchemeKind(Enum):
    CODED = "coded"
    SYMMETRIC = "symmetric"
    GENERAL = "general"

    @property
    def groupwise(self) -> bool:
        return self is not SchemeKind.CODED


@dataclass(frozen=True)
class SchemeParams:
    kind: SchemeKind
    K: int
    spec: FieldSpec

    L: int
    """
    Input length in symbols.
    """

    L_X: int
    """
    Message length in symbols.
    """

    T: int = 0
    """
    Largest colluding set the scheme is built (and audited) for.
    """

    G: Optional[int] = None
    m: int = 1

    L_Z: Optional[int] = None
    L_Zsum: Optional[int] = None

    L_S: Optional[int] = None
    """
    Uniform groupwise key length. For general schemes this is the longest edge key.
    """

    edge_key_lengths: Tuple[int, ...] = attr.ib(default=(), converter=tuple)
    hypergraph: Optional[KeyHypergraph] = None
    collusion: Optional[CollusionFamily] = None

    padded: bool = False
    """
    General schemes only: every edge key is zero padded to ``L_S`` symbols.
    """


@dataclass(frozen=True)
class Scheme:
    """
    A fully materialized secure summation scheme.

    ``groups[g]`` lists the members of key group ``g`` in ascending order and
    ``precoding[g][j]`` is the L x |S_g| matrix applied by member ``groups[g][j]``.
    Coded schemes have no groups; their precoding is the identity on N_k.
    """

    params: SchemeParams
    groups: Tuple[Tuple[int, ...], ...] = ()
    precoding: Tuple[Tuple[FieldMatrix, ...], ...] = ()
    certificate: Optional[AuditReport] = None

    @property
    def kind(self) -> SchemeKind:
        return self.params.kind

    @property
    def spec(self) -> FieldSpec:
        return self.params.spec

    def key_length(self, g: int) -> int:
        return self.precoding[g][0].cols

    def block(self, g: int, k: int) -> Optional[FieldMatrix]:
        """
        H_G^k, or ``None`` when user k is not in group g (the block is zero).
        """
        members = self.groups[g]
        if k not in members:
            return None
        return self.precoding[g][members.index(k)]

    def groups_of(self, k: int) -> Tuple[int, ...]:
        return tuple(g for g, members in enumerate(self.groups) if k in members)

    def with_certificate(self, report: AuditReport) -> "Scheme":
        return attr.evolve(self, certificate=report)


@dataclass(frozen=True)
class KeyRealization:
    source: FieldVector
    """
    Z_Σ: the concatenated source-key symbols every user key is a function of.
    """

    per_user: Tuple[FieldVector, ...]
    """
    Z_1, ..., Z_K.
    """

    per_edge: Tuple[FieldVector, ...] = ()
    """
    S_G for each key group, in scheme group order (groupwise kinds only).
    """


@dataclass(frozen=True)
class LinearView:
    """
    A scheme written as linear maps of the source key z: user k holds
    ``Z_k = user_keys[k-1] @ z`` and sends ``X_k = W_k + precoders[k-1] @ z``.
    """

    spec: FieldSpec
    K: int
    L: int
    key_dim: int
    user_keys: Tuple[FieldMatrix, ...]
    precoders: Tuple[FieldMatrix, ...]


@dataclass(frozen=True)
class PrecodingGroup:
    members: Tuple[int, ...]
    matrices: Tuple[FieldMatrix, ...]
    """
    Precoding of the G-1 smallest members, in ascending member order.
    """


@dataclass(frozen=True)
class PrecodingFixtureFile:
    """
    Externally supplied symmetric precoding, e.g. hand-picked matrices over a small
    field.
    """

    groups: Tuple[PrecodingGroup, ...]

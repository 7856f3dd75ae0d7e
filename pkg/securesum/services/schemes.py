from itertools import combinations
import logging
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from registrable import Registrable

from securesum.domain.config import InstanceConfig
from securesum.domain.field import FieldSpec
from securesum.domain.hypergraph import CollusionFamily, KeyHypergraph
from securesum.domain.linalg import FieldMatrix, FieldVector
from securesum.domain.scheme import (
    KeyRealization,
    LinearView,
    Scheme,
    SchemeKind,
    SchemeParams,
)
from securesum.exceptions import (
    CapacityBoundsError,
    CertificateNotFoundError,
    DimensionMismatchError,
    InfeasibleError,
    MissingSeedError,
    SchemaError,
)
from securesum.services.capacity import check_bounds
from securesum.services.linalg import mat_sum, mat_vec, vec_add, vec_concat, vec_sum
from securesum.services.random_stream import RandomStream


logger = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 64

SCHEME_KIND = "scheme"

PrecodingFixture = Mapping[Tuple[int, ...], Sequence[FieldMatrix]]
"""
Externally supplied precoding: for each group (members ascending), the matrices of
its G-1 smallest members. The largest member absorbs the negated sum.
"""


def as_spec(q: Union[int, FieldSpec]) -> FieldSpec:
    return q if isinstance(q, FieldSpec) else FieldSpec(q)


###############################################################################
# Arbitrarily coded keys


def coded_params(K: int, L: int, q: Union[int, FieldSpec], T: int = 0) -> SchemeParams:
    check_bounds(K, T)
    if L < 1:
        raise DimensionMismatchError(f"input length L={L} must be positive")
    return SchemeParams(
        kind=SchemeKind.CODED,
        K=K,
        spec=as_spec(q),
        L=L,
        L_X=L,
        T=T,
        L_Z=L,
        L_Zsum=(K - 1) * L,
    )


def coded_keygen(
    K: int, L: int, q: Union[int, FieldSpec], stream: RandomStream, T: int = 0
) -> Tuple[Scheme, KeyRealization]:
    """
    K-1 i.i.d. uniform pads N_1..N_{K-1}; users k < K hold N_k and user K holds the
    negated sum, so the keys of all users add up to zero.
    """
    from securesum.services.audit import audit_scheme

    params = coded_params(K, L, q, T)
    scheme = Scheme(params)
    report = audit_scheme(scheme, CollusionFamily.up_to_size(K, T), with_mi=False)
    scheme = scheme.with_certificate(report)
    return scheme, draw_keys(scheme, stream)


###############################################################################
# Symmetric groupwise keys


def symmetric_params(
    K: int, T: int, G: int, q: Union[int, FieldSpec], m: int = 1
) -> SchemeParams:
    """
    Minimal block shape L = C(K-T, G) * m, L_S = (K-T-1) * m.
    """
    check_bounds(K, T)
    if not 1 <= G <= K:
        raise CapacityBoundsError(f"group size G={G} outside [1, K={K}]")
    if G > K - T:
        raise InfeasibleError(
            f"every group of {G} users meets some colluding set of {T} users "
            f"(G > K-T = {K - T}), so no key stays hidden"
        )
    if m < 1:
        raise DimensionMismatchError(f"block multiplier m={m} must be positive")
    L = comb(K - T, G) * m
    return SchemeParams(
        kind=SchemeKind.SYMMETRIC,
        K=K,
        spec=as_spec(q),
        L=L,
        L_X=L,
        T=T,
        G=G,
        m=m,
        L_S=(K - T - 1) * m,
    )


def symmetric_groups(K: int, G: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(combinations(range(1, K + 1), G))


def draw_symmetric_precoding(
    params: SchemeParams,
    stream: Optional[RandomStream],
    fixture: Optional[PrecodingFixture] = None,
) -> Scheme:
    """
    Uncertified symmetric precoding: the G-1 smallest members of each group get
    uniform L x L_S matrices (or the fixture's), the largest gets minus their sum.
    """
    assert params.G is not None and params.L_S is not None
    spec, L, L_S = params.spec, params.L, params.L_S
    groups = symmetric_groups(params.K, params.G)
    precoding: List[Tuple[FieldMatrix, ...]] = []
    for g, members in enumerate(groups):
        if fixture is not None:
            if members not in fixture:
                raise DimensionMismatchError(
                    f"fixture has no matrices for group {list(members)}"
                )
            free = list(fixture[members])
            if len(free) != len(members) - 1:
                raise DimensionMismatchError(
                    f"fixture gives {len(free)} matrices for group {list(members)}, "
                    f"expected {len(members) - 1}"
                )
            for matrix in free:
                if matrix.shape != (L, L_S) or matrix.spec != spec:
                    raise DimensionMismatchError(
                        f"fixture matrix for group {list(members)} is "
                        f"{matrix.rows}x{matrix.cols} "
                        f"over F_{matrix.spec.q}, expected {L}x{L_S} over F_{spec.q}"
                    )
        else:
            assert stream is not None
            group_stream = stream.split("group", g)
            free = [
                FieldMatrix(spec, group_stream.uniform_array(spec, (L, L_S)))
                for _ in members[:-1]
            ]
        last = -mat_sum(free) if free else FieldMatrix.zeros(spec, L, L_S)
        precoding.append(tuple(free) + (last,))
    return Scheme(params, groups, tuple(precoding))


def symmetric_keygen(
    K: int,
    T: int,
    G: int,
    q: Union[int, FieldSpec],
    m: int,
    stream: Optional[RandomStream],
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    fixture: Optional[PrecodingFixture] = None,
    workers: int = 1,
) -> Scheme:
    """
    Sample-and-verify: draw precoding, check the rank certificate of every colluding
    set of at most T users, and resample until all pass. A fixture is checked once.
    """
    from securesum.services.audit import audit_scheme

    params = symmetric_params(K, T, G, q, m)
    if G == 1:
        raise InfeasibleError(
            "singleton groups must have zero precoding to cancel, so they hide nothing"
        )
    family = CollusionFamily.up_to_size(K, T)
    attempts = 1 if fixture is not None else max_attempts
    if fixture is None and stream is None:
        raise MissingSeedError()
    for attempt in range(1, attempts + 1):
        scheme = draw_symmetric_precoding(
            params,
            stream.split("precoding", attempt) if stream is not None else None,
            fixture,
        )
        report = audit_scheme(scheme, family, with_mi=False, workers=workers)
        if report.all_pass:
            logger.info(
                "Symmetric precoding (K=%d, T=%d, G=%d, q=%d) certified on attempt %d",
                K,
                T,
                G,
                params.spec.q,
                attempt,
            )
            return scheme.with_certificate(report)
        logger.warning(
            "Attempt %d: %d of %d rank certificates failed, resampling",
            attempt,
            len(report.failures()),
            len(report.per_collusion),
        )
    raise CertificateNotFoundError(attempts, params.spec.q, m)


###############################################################################
# General groupwise keys on a hypergraph


def general_params(
    graph: KeyHypergraph,
    q: Union[int, FieldSpec],
    collusion: Optional[CollusionFamily] = None,
    pad_keys: bool = False,
) -> SchemeParams:
    if collusion is None:
        collusion = CollusionFamily(graph.user_count, [[]])
    natural = [len(edge) - 1 for edge in graph.edges]
    L_S = max(natural, default=0)
    return SchemeParams(
        kind=SchemeKind.GENERAL,
        K=graph.user_count,
        spec=as_spec(q),
        L=1,
        L_X=1,
        T=max((len(s) for s in collusion), default=0),
        L_S=L_S,
        edge_key_lengths=[L_S] * len(natural) if pad_keys else natural,
        hypergraph=graph,
        collusion=collusion,
        padded=pad_keys,
    )


def general_keygen(
    graph: KeyHypergraph,
    q: Union[int, FieldSpec],
    collusion: Optional[CollusionFamily] = None,
    pad_keys: bool = False,
) -> Scheme:
    """
    Deterministic precoding: on an edge with members u_1 < ... < u_g, user u_j applies
    the j-th standard basis row of length g-1 and u_g applies the all -1 row. Padded
    keys get zero columns. Feasibility is not checked here; the attached certificate
    reports it for the configured colluding sets.
    """
    from securesum.services.audit import audit_scheme

    params = general_params(graph, q, collusion, pad_keys)
    spec = params.spec
    groups = tuple(tuple(sorted(edge)) for edge in graph.edges)
    precoding = []
    for members, width in zip(groups, params.edge_key_lengths):
        g = len(members)
        rows = np.zeros((g, width), dtype=np.int64)
        rows[: g - 1, : g - 1] = np.eye(g - 1, dtype=np.int64)
        rows[g - 1, : g - 1] = -1
        precoding.append(tuple(FieldMatrix(spec, rows[j : j + 1]) for j in range(g)))
    scheme = Scheme(params, groups, tuple(precoding))
    assert params.collusion is not None
    report = audit_scheme(scheme, params.collusion, with_mi=False)
    return scheme.with_certificate(report)


###############################################################################
# Keys, messages and decoding


def draw_keys(scheme: Scheme, stream: RandomStream) -> KeyRealization:
    params, spec = scheme.params, scheme.spec
    if scheme.kind is SchemeKind.CODED:
        pads = [
            FieldVector(spec, stream.split("pad", k).uniform_array(spec, (params.L,)))
            for k in range(1, params.K)
        ]
        closing = FieldVector(spec, -vec_sum(pads).values)
        return KeyRealization(vec_concat(spec, pads), tuple(pads) + (closing,))
    per_edge = tuple(
        FieldVector(
            spec,
            stream.split("group-key", g).uniform_array(spec, (scheme.key_length(g),)),
        )
        for g in range(len(scheme.groups))
    )
    per_user = tuple(
        vec_concat(spec, [per_edge[g] for g in scheme.groups_of(k)])
        for k in range(1, params.K + 1)
    )
    return KeyRealization(vec_concat(spec, per_edge), per_user, per_edge)


def linear_view(scheme: Scheme) -> LinearView:
    params, spec = scheme.params, scheme.spec
    K, L = params.K, params.L
    if scheme.kind is SchemeKind.CODED:
        key_dim = (K - 1) * L
        selections = []
        for k in range(1, K + 1):
            a = np.zeros((L, key_dim), dtype=np.int64)
            if k < K:
                a[:, (k - 1) * L : k * L] = np.eye(L, dtype=np.int64)
            else:
                for j in range(K - 1):
                    a[:, j * L : (j + 1) * L] = -np.eye(L, dtype=np.int64)
            selections.append(FieldMatrix(spec, a))
        return LinearView(spec, K, L, key_dim, tuple(selections), tuple(selections))

    widths = [scheme.key_length(g) for g in range(len(scheme.groups))]
    if widths:
        offsets = np.concatenate([[0], np.cumsum(widths)]).astype(int)
    else:
        offsets = np.array([0])
    key_dim = int(offsets[-1])
    user_keys, precoders = [], []
    for k in range(1, K + 1):
        mine = scheme.groups_of(k)
        a = np.zeros((sum(widths[g] for g in mine), key_dim), dtype=np.int64)
        p = np.zeros((L, key_dim), dtype=np.int64)
        row = 0
        for g in mine:
            start, stop = offsets[g], offsets[g + 1]
            a[row : row + widths[g], start:stop] = np.eye(widths[g], dtype=np.int64)
            row += widths[g]
            block = scheme.block(g, k)
            assert block is not None
            p[:, start:stop] = block.values
        user_keys.append(FieldMatrix(spec, a))
        precoders.append(FieldMatrix(spec, p))
    return LinearView(spec, K, L, key_dim, tuple(user_keys), tuple(precoders))


def _split_user_key(
    scheme: Scheme, k: int, user_key: FieldVector
) -> Dict[int, FieldVector]:
    pieces: Dict[int, FieldVector] = {}
    offset = 0
    for g in scheme.groups_of(k):
        width = scheme.key_length(g)
        pieces[g] = FieldVector(scheme.spec, user_key.values[offset : offset + width])
        offset += width
    if offset != user_key.length:
        raise DimensionMismatchError(
            f"user {k} holds a key of {user_key.length} symbols, expected {offset}"
        )
    return pieces


def encode_message(
    scheme: Scheme, k: int, W_k: FieldVector, keys: KeyRealization
) -> FieldVector:
    """
    X_k from W_k and user k's own key Z_k only.
    """
    params = scheme.params
    if not 1 <= k <= params.K:
        raise DimensionMismatchError(f"user index {k} outside [1..{params.K}]")
    if W_k.length != params.L:
        raise DimensionMismatchError(
            f"input of user {k} has {W_k.length} symbols, expected L={params.L}"
        )
    Z_k = keys.per_user[k - 1]
    if scheme.kind is SchemeKind.CODED:
        return vec_add(W_k, Z_k)
    message = W_k
    for g, S_g in _split_user_key(scheme, k, Z_k).items():
        block = scheme.block(g, k)
        assert block is not None
        message = vec_add(message, mat_vec(block, S_g))
    return message


def decode_sum(messages: Sequence[FieldVector]) -> FieldVector:
    """
    The server's only operation: add up the K messages. Zero-sum keys cancel.
    """
    return vec_sum(list(messages))


###############################################################################
# Builders selected by the configured scheme kind


class SchemeBuilder(Registrable):
    """
    Turns an instance config into a scheme. Registered under the config ``kind``.
    """

    randomized: bool = True

    def build(
        self,
        instance: InstanceConfig,
        stream: Optional[RandomStream],
        fixture: Optional[PrecodingFixture] = None,
        workers: int = 1,
    ) -> Scheme:
        raise NotImplementedError


@SchemeBuilder.register("coded")
class CodedSchemeBuilder(SchemeBuilder):
    def build(self, instance, stream, fixture=None, workers=1):
        if stream is None:
            raise MissingSeedError()
        if instance.K is None:
            raise SchemaError("a coded instance needs the user count 'K'")
        scheme, _ = coded_keygen(
            instance.K, instance.L, instance.q, stream, T=instance.T
        )
        return scheme


@SchemeBuilder.register("symmetric")
class SymmetricSchemeBuilder(SchemeBuilder):
    def build(self, instance, stream, fixture=None, workers=1):
        if instance.K is None or instance.G is None:
            raise SchemaError("a symmetric instance needs 'K' and 'G'")
        return symmetric_keygen(
            instance.K,
            instance.T,
            instance.G,
            instance.q,
            instance.m,
            stream,
            max_attempts=instance.max_attempts,
            fixture=fixture,
            workers=workers,
        )


@SchemeBuilder.register("general")
class GeneralSchemeBuilder(SchemeBuilder):
    randomized = False

    def build(self, instance, stream, fixture=None, workers=1):
        from securesum.services.config import hypergraph_from_instance

        graph, family = hypergraph_from_instance(instance)
        return general_keygen(graph, instance.q, family, pad_keys=instance.pad_keys)

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
import logging
from typing import Callable, Iterable, List, Optional, Tuple, TypeVar

import numpy as np

from securesum.domain.audit import AuditReport, MICheck, RankCertificate
from securesum.domain.hypergraph import CollusionFamily, UserSet, format_users, user_set
from securesum.domain.linalg import FieldMatrix
from securesum.domain.scheme import LinearView, Scheme, SchemeKind
from securesum.exceptions import HypergraphError, StateSpaceTooLargeError
from securesum.services.capacity import rate_report
from securesum.services.linalg import (
    mat_sum,
    rank,
    reduced_product,
    stack_blocks,
    vstack,
)
from securesum.services.schemes import linear_view


logger = logging.getLogger(__name__)

DEFAULT_MI_LIMIT = 1 << 24

MI_CHUNK = 1 << 16

AUDIT_REPORT_KIND = "audit_report"

A = TypeVar("A")
B = TypeVar("B")


def _parallel_map(fn: Callable[[A], B], items: Iterable[A], workers: int) -> List[B]:
    """
    Map in input order, on a thread pool when ``workers > 1``.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _check_collusion(scheme: Scheme, T: Iterable[int]) -> UserSet:
    K = scheme.params.K
    colluders = user_set(T)
    if any(u < 1 or u > K for u in colluders):
        raise HypergraphError(
            f"colluding set {format_users(colluders)} outside [1..{K}]"
        )
    if len(colluders) > K - 2:
        raise HypergraphError(
            f"colluding set {format_users(colluders)} leaves fewer than 2 honest users"
        )
    return colluders


###############################################################################
# Rank certificates


def assemble_certificate_matrix(scheme: Scheme, T: Iterable[int]) -> FieldMatrix:
    """
    The block matrix of a groupwise scheme restricted to honest users (block rows,
    ascending) and key groups no colluder belongs to (block columns, scheme order).
    """
    colluders = _check_collusion(scheme, T)
    L = scheme.params.L
    honest = [k for k in range(1, scheme.params.K + 1) if k not in colluders]
    hidden = [
        g
        for g, members in enumerate(scheme.groups)
        if colluders.isdisjoint(members)
    ]
    layout = [[scheme.block(g, k) for g in hidden] for k in honest]
    return stack_blocks(
        layout,
        spec=scheme.spec,
        row_heights=[L] * len(honest),
        col_widths=[scheme.key_length(g) for g in hidden],
    )


def _coded_rank(view: LinearView, colluders: UserSet) -> int:
    """
    Rank of the honest users' precoded keys on the part of the source key the
    colluders do not know.
    """
    known = vstack(
        view.spec, [view.user_keys[k - 1] for k in sorted(colluders)], view.key_dim
    )
    honest = [view.precoders[k - 1] for k in range(1, view.K + 1) if k not in colluders]
    both = vstack(view.spec, [known] + honest, view.key_dim)
    return rank(both) - rank(known)


def rank_certificate(scheme: Scheme, T: Iterable[int]) -> RankCertificate:
    """
    A linear scheme hides everything but the sum from the server together with the
    users in ``T`` exactly when the honest users' precoding reaches rank
    ``(K - |T| - 1) * L``.
    """
    colluders = _check_collusion(scheme, T)
    params = scheme.params
    required = (params.K - len(colluders) - 1) * params.L
    if scheme.kind is SchemeKind.CODED:
        found = _coded_rank(linear_view(scheme), colluders)
    else:
        found = rank(assemble_certificate_matrix(scheme, colluders))
    if found != required:
        logger.debug(
            "Rank certificate for T=%s failed: required %d, found %d",
            format_users(colluders),
            required,
            found,
        )
    return RankCertificate(colluders, required, found, found == required)


###############################################################################
# Exhaustive mutual information


def state_space(scheme: Scheme) -> int:
    """
    Number of equally likely (inputs, source key) tuples: q^(K*L + |Z_Σ|).
    """
    view = linear_view(scheme)
    return scheme.spec.q ** (view.K * view.L + view.key_dim)


def _exact_log(num: np.ndarray, den: np.ndarray, q: int) -> Optional[np.ndarray]:
    """
    Integer exponents e with num / den == q^e, or ``None`` if some ratio is not a power
    of q.
    """
    exponents = np.rint(np.log(num / den) / np.log(q)).astype(np.int64)
    powers = np.power(np.int64(q), np.abs(exponents))
    exact = np.where(exponents >= 0, num == den * powers, den == num * powers)
    if not exact.all():
        return None
    return exponents


class _Enumeration:
    """
    Counts of (W, X, C) over a contiguous range of states, C being what the colluders
    and the server know besides the messages: ΣW, W_T and Z_T.
    """

    def __init__(self, view: LinearView, colluders: UserSet) -> None:
        self.view = view
        self.q = view.spec.q
        self.colluders = sorted(colluders)
        self.width_w = view.K * view.L
        self.digits = self.width_w + view.key_dim
        self.powers = np.power(np.int64(self.q), np.arange(self.digits, dtype=np.int64))
        self.precoders_t = [p.values.T for p in view.precoders]
        self.keys_t = [view.user_keys[k - 1].values.T for k in self.colluders]

    def rows(self, start: int, stop: int) -> np.ndarray:
        q, K, L = self.q, self.view.K, self.view.L
        index = np.arange(start, stop, dtype=np.int64)
        digits = (index[:, None] // self.powers[None, :]) % q
        W = digits[:, : self.width_w].reshape(-1, K, L)
        z = digits[:, self.width_w :]
        X = np.stack(
            [
                (W[:, k] + reduced_product(z, self.precoders_t[k], q)) % q
                for k in range(K)
            ],
            axis=1,
        )
        known = [W.sum(axis=1) % q]
        known += [W[:, k - 1] for k in self.colluders]
        known += [reduced_product(z, a_t, q) for a_t in self.keys_t]
        observed = [W.reshape(len(index), -1), X.reshape(len(index), -1)]
        return np.concatenate(observed + known, axis=1)

    def count(self, bounds: Tuple[int, int]) -> Tuple[np.ndarray, np.ndarray]:
        return np.unique(self.rows(*bounds), axis=0, return_counts=True)


def _merge(parts: List[Tuple[np.ndarray, np.ndarray]]) -> Tuple[np.ndarray, np.ndarray]:
    rows = np.concatenate([r for r, _ in parts])
    counts = np.concatenate([c for _, c in parts])
    unique, inverse = np.unique(rows, axis=0, return_inverse=True)
    merged = np.zeros(len(unique), dtype=np.int64)
    np.add.at(merged, inverse.reshape(-1), counts)
    return unique, merged


def _marginal(rows: np.ndarray, counts: np.ndarray, columns: np.ndarray) -> np.ndarray:
    """
    For every row, the total count of rows agreeing with it on ``columns``.
    """
    _, inverse = np.unique(rows[:, columns], axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    totals = np.zeros(inverse.max() + 1 if len(inverse) else 0, dtype=np.int64)
    np.add.at(totals, inverse, counts)
    return totals[inverse]


def mi_bruteforce(
    scheme: Scheme,
    T: Iterable[int],
    limit: int = DEFAULT_MI_LIMIT,
    workers: int = 1,
) -> MICheck:
    """
    I(W_1..W_K ; X_1..X_K | ΣW, (W_k, Z_k) for k in T) in q-ary units, by enumerating
    every input and source key tuple.

    All states are equally likely, so every probability is a count over the state total.
    When every log term is an integer power of q the result is an exact rational;
    otherwise only ``mi_float`` is set.
    """
    colluders = _check_collusion(scheme, T)
    states = state_space(scheme)
    if states > limit:
        raise StateSpaceTooLargeError(states, limit)

    enumeration = _Enumeration(linear_view(scheme), colluders)
    shards = [
        (start, min(start + MI_CHUNK, states))
        for start in range(0, states, MI_CHUNK)
    ]
    logger.debug(
        "Enumerating %d states for T=%s in %d shards",
        states,
        format_users(colluders),
        len(shards),
    )
    rows, counts = _merge(_parallel_map(enumeration.count, shards, workers))

    w = enumeration.width_w
    all_columns = np.arange(rows.shape[1])
    c_columns = all_columns[2 * w :]
    n_c = _marginal(rows, counts, c_columns)
    n_wc = _marginal(rows, counts, np.concatenate([all_columns[:w], c_columns]))
    n_xc = _marginal(rows, counts, all_columns[w:])

    num = counts * n_c
    den = n_wc * n_xc
    q = scheme.spec.q
    mi_float = float(np.sum(counts / states * np.log(num / den)) / np.log(q))
    exponents = _exact_log(num, den, q)
    mi_value = None
    if exponents is not None:
        mi_value = Fraction(int(np.sum(counts * exponents)), states)
        mi_float = float(mi_value)
    return MICheck(colluders, states, mi_value, max(mi_float, 0.0))


###############################################################################
# Full audit


def zero_sum_holds(scheme: Scheme) -> bool:
    """
    The precoded keys of all users add up to zero for every source key, i.e. the
    precoding blocks of every key group sum to zero.
    """
    view = linear_view(scheme)
    return not mat_sum(list(view.precoders)).values.any()


def audit_scheme(
    scheme: Scheme,
    family: CollusionFamily,
    mi_limit: int = DEFAULT_MI_LIMIT,
    with_mi: bool = True,
    workers: int = 1,
) -> AuditReport:
    """
    Rank certificate for every colluding set in ``family`` (the server alone is always
    included), exhaustive MI where the state space is within ``mi_limit``, and the
    achieved rates against the capacity region. A failing entry records its error
    instead of aborting the others.
    """
    if family.user_count != scheme.params.K:
        raise HypergraphError(
            f"colluding sets over {family.user_count} users do not fit a scheme of "
            f"{scheme.params.K} users"
        )
    sets = list(family)
    if frozenset() not in sets:
        sets.insert(0, frozenset())

    def certify(T: UserSet) -> RankCertificate:
        try:
            return rank_certificate(scheme, T)
        except Exception as e:
            logger.warning("Rank certificate for T=%s raised: %s", format_users(T), e)
            return RankCertificate(T, None, None, False, error=str(e))

    per_collusion = tuple(_parallel_map(certify, sets, workers))

    mi_checks: Tuple[MICheck, ...] = ()
    if with_mi:
        states = state_space(scheme)
        if states > mi_limit:
            logger.info(
                "Skipping MI checks: %d states exceed the limit of %d", states, mi_limit
            )
        else:

            def measure(T: UserSet) -> MICheck:
                try:
                    return mi_bruteforce(scheme, T, limit=mi_limit)
                except Exception as e:
                    logger.warning("MI check for T=%s raised: %s", format_users(T), e)
                    return MICheck(T, states, error=str(e))

            mi_checks = tuple(_parallel_map(measure, sets, workers))

    return AuditReport(
        per_collusion,
        mi_checks,
        rates=rate_report(scheme.params),
        zero_sum=zero_sum_holds(scheme),
    )

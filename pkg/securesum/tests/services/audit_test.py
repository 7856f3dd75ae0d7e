from fractions import Fraction
import random

import attr
import pytest

from securesum.domain.audit import RankCertificate
from securesum.domain.field import FieldSpec
from securesum.domain.hypergraph import CollusionFamily, KeyHypergraph
from securesum.domain.linalg import FieldMatrix
from securesum.exceptions import HypergraphError, StateSpaceTooLargeError
from securesum.services import audit
from securesum.services.audit import (
    assemble_certificate_matrix,
    audit_scheme,
    mi_bruteforce,
    rank_certificate,
    state_space,
    zero_sum_holds,
)
from securesum.services.hypergraph import feasibility
from securesum.services.linalg import mat_sum
from securesum.services.random_stream import RandomStream
from securesum.services.schemes import (
    coded_keygen,
    draw_symmetric_precoding,
    general_keygen,
    symmetric_keygen,
    symmetric_params,
)


def test_q5_fixture_certificate(q5_scheme):
    certificate = rank_certificate(q5_scheme, [4, 5])
    assert (certificate.required, certificate.found, certificate.passed) == (6, 6, True)
    assert assemble_certificate_matrix(q5_scheme, [4, 5]).shape == (9, 6)
    for T in CollusionFamily.up_to_size(5, 2):
        assert rank_certificate(q5_scheme, T).passed


def test_general_certificates(four_users):
    scheme = general_keygen(four_users, 5)
    ok = rank_certificate(scheme, [3])
    assert (ok.required, ok.found, ok.passed) == (2, 2, True)
    bad = rank_certificate(scheme, [4])
    assert bad.required == 2
    assert bad.found <= 1
    assert not bad.passed


def test_certificate_rejects_bad_collusion(q5_scheme):
    with pytest.raises(HypergraphError):
        rank_certificate(q5_scheme, [1, 2, 3, 4])
    with pytest.raises(HypergraphError):
        rank_certificate(q5_scheme, [6])


def test_audit_symmetric_five_users():
    scheme = symmetric_keygen(5, 2, 2, 251, 1, RandomStream(1))
    report = audit_scheme(scheme, CollusionFamily.up_to_size(5, 2))
    assert len(report.per_collusion) == 16
    assert report.all_pass
    assert report.mi_checks == ()
    assert report.rates.is_optimal()


def test_audit_coded_rates():
    scheme, _ = coded_keygen(3, 1, 251, RandomStream(0))
    report = audit_scheme(scheme, CollusionFamily(3, [[]]), with_mi=False)
    assert report.all_pass
    assert report.rates.optimal == {"R": True, "R_Z": True, "R_ZΣ": True}


def test_audit_general_infeasible(four_users):
    scheme = general_keygen(four_users, 5, CollusionFamily(4, [[4]]))
    report = audit_scheme(scheme, CollusionFamily(4, [[4]]), with_mi=False)
    # The server alone is always audited.
    assert [c.T for c in report.per_collusion] == [frozenset(), frozenset({4})]
    assert [c.passed for c in report.per_collusion] == [True, False]
    assert not report.all_pass
    assert report.failures()[0].T == frozenset({4})
    assert scheme.certificate == report


def test_audit_rejects_family_of_other_size(four_users):
    scheme = general_keygen(four_users, 5)
    with pytest.raises(HypergraphError):
        audit_scheme(scheme, CollusionFamily(5, [[]]))


@pytest.mark.parametrize("q", [2, 3])
def test_coded_scheme_leaks_nothing(q):
    scheme, _ = coded_keygen(3, 1, q, RandomStream(0))
    for T in CollusionFamily.up_to_size(3, 1):
        check = mi_bruteforce(scheme, T)
        assert check.state_space == q ** 5
        assert check.exact
        assert check.mi_value == 0


def test_general_scheme_leaks_nothing(four_users):
    scheme = general_keygen(four_users, 2)
    for T in ([], [3]):
        check = mi_bruteforce(scheme, T)
        assert check.state_space == 2 ** 8
        assert check.mi_value == 0
        assert not check.leaks


def test_keyless_scheme_leaks_one_unit():
    scheme = general_keygen(KeyHypergraph(2, []), 2)
    check = mi_bruteforce(scheme, [])
    assert check.state_space == 4
    assert check.mi_value == Fraction(1)
    assert check.mi_float == pytest.approx(1.0)
    assert check.leaks


def test_keyless_scheme_in_larger_field():
    scheme = general_keygen(KeyHypergraph(3, []), 3)
    check = mi_bruteforce(scheme, [])
    # Two of the three inputs stay hidden behind nothing.
    assert check.mi_value == Fraction(2)


def test_state_space_limit(q5_scheme):
    assert state_space(q5_scheme) == 5 ** 35
    with pytest.raises(StateSpaceTooLargeError) as e:
        mi_bruteforce(q5_scheme, [])
    assert e.value.limit == 1 << 24
    report = audit_scheme(q5_scheme, CollusionFamily(5, [[]]), with_mi=True)
    assert report.mi_checks == ()


def test_sharded_enumeration_matches_serial(monkeypatch):
    params = symmetric_params(3, 0, 2, 2)
    scheme = draw_symmetric_precoding(params, RandomStream(4))
    serial = mi_bruteforce(scheme, [])
    monkeypatch.setattr(audit, "MI_CHUNK", 1000)
    sharded = mi_bruteforce(scheme, [], workers=3)
    assert serial == sharded


def test_parallel_audit_matches_serial():
    scheme = symmetric_keygen(4, 1, 2, 251, 1, RandomStream(9))
    family = CollusionFamily.up_to_size(4, 1)
    serial = audit_scheme(scheme, family, workers=1)
    assert serial == audit_scheme(scheme, family, workers=4)


def test_failing_certificate_has_no_ranks(monkeypatch, four_users):
    def broken(scheme, T):
        raise ValueError("singular layout")

    scheme = general_keygen(four_users, 5, CollusionFamily(4, [[3]]))
    monkeypatch.setattr(audit, "rank_certificate", broken)
    report = audit_scheme(scheme, CollusionFamily(4, [[3]]), with_mi=False)
    assert [entry.error for entry in report.per_collusion] == ["singular layout"] * 2
    for entry in report.per_collusion:
        assert entry.found is None and not entry.passed
    assert not report.secure


def test_certificate_pass_flag_must_match_ranks():
    assert RankCertificate(frozenset(), 2, 2, True).passed
    with pytest.raises(ValueError):
        RankCertificate(frozenset(), 2, 1, True)
    with pytest.raises(ValueError):
        RankCertificate(frozenset(), None, None, True)


def corrupt(scheme, stream: RandomStream):
    """
    Zero one non-last block of a random group, then restore the zero sum through the
    last member, so the scheme stays correct but may lose security.
    """
    g = stream.uniform_int(len(scheme.groups))
    group = list(scheme.precoding[g])
    j = stream.uniform_int(len(group) - 1)
    group[j] = FieldMatrix.zeros(scheme.spec, *group[j].shape)
    group[-1] = -mat_sum(group[:-1])
    precoding = list(scheme.precoding)
    precoding[g] = tuple(group)
    return attr.evolve(scheme, precoding=tuple(precoding), certificate=None)


def test_zero_sum_check():
    scheme = draw_symmetric_precoding(symmetric_params(3, 0, 2, 5), RandomStream(0))
    assert zero_sum_holds(scheme)
    group = list(scheme.precoding[0])
    group[0] = FieldMatrix.zeros(scheme.spec, *group[0].shape)
    broken = attr.evolve(scheme, precoding=(tuple(group),) + scheme.precoding[1:])
    if scheme.precoding[0][0].values.any():
        assert not zero_sum_holds(broken)


# (K, T, G, q): every joint state space stays below 2^16.
SMALL_CONFIGS = [
    (3, 0, 2, 2),
    (3, 1, 2, 2),
    (3, 1, 2, 3),
    (4, 2, 2, 2),
    (4, 1, 3, 2),
    (3, 0, 3, 3),
]


def test_rank_certificate_agrees_with_exact_mi():
    disagreements = []
    outcomes = set()
    for i in range(50):
        K, T, G, q = SMALL_CONFIGS[i % len(SMALL_CONFIGS)]
        stream = RandomStream(i)
        params = symmetric_params(K, T, G, q)
        scheme = draw_symmetric_precoding(params, stream.split("draw"))
        if i >= 25:
            scheme = corrupt(scheme, stream.split("corrupt"))
        assert zero_sum_holds(scheme)
        for colluders in CollusionFamily.up_to_size(K, T):
            passed = rank_certificate(scheme, colluders).passed
            check = mi_bruteforce(scheme, colluders)
            assert check.exact
            outcomes.add(passed)
            if passed != (check.mi_value == 0):
                disagreements.append((K, T, G, q, i, sorted(colluders)))
    assert disagreements == []
    assert outcomes == {True, False}


def _random_hypergraph(rng: random.Random) -> KeyHypergraph:
    K = rng.randint(2, 6)
    edges = [
        rng.sample(range(1, K + 1), rng.randint(1, K)) for _ in range(rng.randint(1, 6))
    ]
    return KeyHypergraph(K, edges)


def test_general_certificates_match_feasibility():
    rng = random.Random(2024)
    found = {True: 0, False: 0}
    for _ in range(20000):
        if min(found.values()) >= 100:
            break
        graph = _random_hypergraph(rng)
        K = graph.user_count
        family = CollusionFamily.up_to_size(K, rng.randint(0, K - 2))
        verdict = feasibility(graph, family)
        if found[verdict.feasible] >= 100:
            continue
        found[verdict.feasible] += 1

        report = general_keygen(graph, 5, family).certificate
        assert report.all_pass == verdict.feasible
        if not verdict.feasible:
            failing = {c.T for c in report.failures()}
            assert verdict.violating in failing
    assert found == {True: 100, False: 100}


def test_mi_matches_certificate_on_general_schemes():
    rng = random.Random(7)
    for _ in range(20):
        K = rng.randint(2, 4)
        edges = [
            rng.sample(range(1, K + 1), rng.randint(2, K))
            for _ in range(rng.randint(0, 3))
        ]
        graph = KeyHypergraph(K, edges)
        scheme = general_keygen(graph, 2)
        if state_space(scheme) > 1 << 14:
            continue
        for T in CollusionFamily.up_to_size(K, K - 2):
            leaks = mi_bruteforce(scheme, T).mi_value != 0
            assert rank_certificate(scheme, T).passed != leaks


def test_field_of_audit_is_scheme_field(q5_scheme):
    assert q5_scheme.spec == FieldSpec(5)

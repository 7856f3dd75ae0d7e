from fractions import Fraction
import json

import pytest

from securesum.domain.audit import AuditReport, MICheck
from securesum.domain.field import FieldSpec
from securesum.domain.hypergraph import CollusionFamily, KeyHypergraph
from securesum.domain.linalg import FieldMatrix, FieldVector
from securesum.domain.scheme import Scheme
from securesum.domain.transcript import Transcript
from securesum.exceptions import SchemaError
from securesum.services.audit import AUDIT_REPORT_KIND, audit_scheme, mi_bruteforce
from securesum.services.random_stream import RandomStream
from securesum.services.schemes import SCHEME_KIND, coded_keygen, general_keygen
from securesum.services.serde import (
    converter,
    deserialize,
    dump_artifact,
    load_artifact,
    read_artifact,
    serialize,
    write_artifact,
)
from securesum.services.simulation import TRANSCRIPT_KIND, run


F5 = FieldSpec(5)


def test_value_shapes():
    assert converter.unstructure(F5) == {"q": 5}
    vector = FieldVector.of(F5, [1, 7])
    assert converter.unstructure(vector) == {"q": 5, "entries": [1, 2]}
    assert converter.unstructure(FieldMatrix.of(F5, [[1, 2], [3, 4]])) == {
        "rows": 2,
        "cols": 2,
        "q": 5,
        "entries": [[1, 2], [3, 4]],
    }
    assert converter.unstructure(Fraction(2, 3)) == "2/3"
    assert converter.unstructure(Fraction(4, 2)) == "2"
    assert converter.unstructure(frozenset({3, 1, 2})) == [1, 2, 3]


def test_empty_matrices():
    m = deserialize(FieldMatrix, serialize(FieldMatrix.zeros(F5, 1, 0)))
    assert m.shape == (1, 0)
    m = deserialize(FieldMatrix, serialize(FieldMatrix.zeros(F5, 0, 3)))
    assert m.shape == (0, 3)


def test_matrix_shape_is_checked():
    bad = {"rows": 2, "cols": 2, "q": 5, "entries": [[1, 2]]}
    with pytest.raises(SchemaError):
        converter.structure(bad, FieldMatrix)


def test_artifact_header():
    text = dump_artifact(SCHEME_KIND, coded_keygen(3, 1, 5, RandomStream(0))[0])
    data = json.loads(text)
    assert data["schema"] == 1
    assert data["kind"] == "scheme"
    assert data["params"]["kind"] == "coded"
    assert data["params"]["spec"] == {"q": 5}
    assert text.endswith("}\n")
    assert list(data) == sorted(data)


def test_scheme_file(tmp_path, q5_scheme):
    path = write_artifact(tmp_path / "out" / "scheme.json", SCHEME_KIND, q5_scheme)
    loaded = read_artifact(path, SCHEME_KIND, Scheme)
    assert loaded == q5_scheme
    assert loaded.certificate.all_pass
    assert dump_artifact(SCHEME_KIND, loaded) == path.read_text(encoding="utf-8")


def test_general_scheme_keeps_hypergraph(four_users):
    scheme = general_keygen(four_users, 5)
    loaded = load_artifact(SCHEME_KIND, Scheme, dump_artifact(SCHEME_KIND, scheme))
    assert loaded.params.hypergraph == four_users
    assert loaded.params.collusion == scheme.params.collusion
    assert loaded.precoding == scheme.precoding


def test_audit_report_with_exact_mi():
    scheme, _ = coded_keygen(3, 1, 2, RandomStream(0))
    report = audit_scheme(scheme, CollusionFamily.up_to_size(3, 1))
    assert len(report.mi_checks) == 4
    text = dump_artifact(AUDIT_REPORT_KIND, report)
    assert '"mi_value": "0"' in text
    assert load_artifact(AUDIT_REPORT_KIND, AuditReport, text) == report


def test_transcript_file(four_users):
    scheme = general_keygen(four_users, 251)
    transcript = run(scheme, 3, inputs=[[1], [2], [3], [4]])
    text = dump_artifact(TRANSCRIPT_KIND, transcript)
    assert load_artifact(TRANSCRIPT_KIND, Transcript, text) == transcript
    redacted = run(scheme, 3, inputs=[[1], [2], [3], [4]], redact_keys=True)
    assert json.loads(dump_artifact(TRANSCRIPT_KIND, redacted))["keys"] is None


def test_mi_check_round_trip():
    check = mi_bruteforce(general_keygen(KeyHypergraph(2, []), 3), [])
    assert deserialize(MICheck, serialize(check)) == check


@pytest.mark.parametrize(
    "text, message",
    [
        ("not json", "not a JSON document"),
        ("[1, 2]", "JSON object"),
        ('{"kind": "scheme"}', "schema"),
        ('{"kind": "scheme", "schema": 2}', "schema"),
        ('{"kind": "transcript", "schema": 1}', "expected a scheme file"),
        ('{"kind": "scheme", "schema": 1, "params": {}}', "malformed scheme file"),
    ],
)
def test_schema_errors(text, message):
    with pytest.raises(SchemaError) as e:
        load_artifact(SCHEME_KIND, Scheme, text)
    assert message in str(e.value)

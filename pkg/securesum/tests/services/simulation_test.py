import attr
import pytest

from securesum.domain.linalg import FieldVector
from securesum.exceptions import DimensionMismatchError, TranscriptIntegrityError
from securesum.services.random_stream import RandomStream
from securesum.services.schemes import coded_keygen, general_keygen, symmetric_keygen
from securesum.services.serde import write_artifact
from securesum.services.simulation import (
    TRANSCRIPT_KIND,
    load_transcript,
    pad_inputs,
    run,
    verify_transcript,
)


@pytest.fixture(scope="module")
def scheme():
    return symmetric_keygen(3, 0, 2, 251, 1, RandomStream(7))


def test_inputs_are_zero_padded(scheme):
    W = pad_inputs(scheme, [[1], [2, 3], []])
    assert [w.to_list() for w in W] == [[1, 0, 0], [2, 3, 0], [0, 0, 0]]
    with pytest.raises(DimensionMismatchError):
        pad_inputs(scheme, [[1], [2]])
    with pytest.raises(DimensionMismatchError):
        pad_inputs(scheme, [[1, 2, 3, 4], [], []])


def test_run_decodes_the_sum(scheme):
    transcript = run(scheme, 1, inputs=[[1], [2], [3]])
    assert transcript.decoded.to_list() == [6, 0, 0]
    assert transcript.summary.decoded_ok
    assert transcript.summary.certified
    assert transcript.summary.seed == 1
    assert transcript.keys is not None
    # Keys actually mask the inputs.
    unmasked = [[1, 0, 0], [2, 0, 0], [3, 0, 0]]
    assert [m.to_list() for m in transcript.messages] != unmasked


def test_run_is_deterministic(scheme):
    assert run(scheme, 5) == run(scheme, 5)
    assert run(scheme, 5).keys != run(scheme, 6).keys


def test_random_inputs_wrap_around(scheme):
    transcript = run(scheme, 9)
    assert all(0 <= x < 251 for w in transcript.inputs for x in w.to_list())
    assert transcript.summary.decoded_ok


def test_redacted_keys(scheme):
    transcript = run(scheme, 1, inputs=[[1], [2], [3]], redact_keys=True)
    assert transcript.keys is None
    assert transcript.messages == run(scheme, 1, inputs=[[1], [2], [3]]).messages


def test_coded_and_general_runs(four_users):
    coded, _ = coded_keygen(4, 2, 5, RandomStream(2))
    transcript = run(coded, 3, inputs=[[4, 4], [4, 4], [4, 4], [4, 4]])
    assert transcript.decoded.to_list() == [1, 1]

    general = general_keygen(four_users, 5)
    transcript = run(general, 3, inputs=[[1], [1], [1], [1]])
    assert transcript.decoded.to_list() == [4]
    assert len(transcript.keys.per_edge) == 3


def test_tampered_transcripts(scheme):
    transcript = run(scheme, 1, inputs=[[1], [2], [3]])
    assert verify_transcript(transcript) is transcript

    wrong_sum = attr.evolve(transcript, decoded=FieldVector.of(scheme.spec, [7, 0, 0]))
    with pytest.raises(TranscriptIntegrityError):
        verify_transcript(wrong_sum)

    inputs = list(transcript.inputs)
    inputs[0] = FieldVector.of(scheme.spec, [2, 0, 0])
    with pytest.raises(TranscriptIntegrityError):
        verify_transcript(attr.evolve(transcript, inputs=tuple(inputs)))


def test_load_transcript(tmp_path, scheme):
    transcript = run(scheme, 4, inputs=[[1], [2], [3]])
    path = write_artifact(tmp_path / "transcript.json", TRANSCRIPT_KIND, transcript)
    assert load_transcript(path) == transcript

    broken = attr.evolve(transcript, decoded=FieldVector.of(scheme.spec, [0, 0, 0]))
    write_artifact(path, TRANSCRIPT_KIND, broken)
    with pytest.raises(TranscriptIntegrityError):
        load_transcript(path)

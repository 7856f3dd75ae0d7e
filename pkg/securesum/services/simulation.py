import logging
from pathlib import Path
from typing import Optional, Sequence, Union

from securesum.domain.linalg import FieldVector
from securesum.domain.scheme import Scheme
from securesum.domain.transcript import RunSummary, Transcript
from securesum.exceptions import DimensionMismatchError, TranscriptIntegrityError
from securesum.services.linalg import vec_sum
from securesum.services.random_stream import RandomStream
from securesum.services.schemes import decode_sum, draw_keys, encode_message
from securesum.services.serde import read_artifact


logger = logging.getLogger(__name__)

TRANSCRIPT_KIND = "transcript"


def pad_inputs(
    scheme: Scheme, inputs: Sequence[Sequence[int]]
) -> Sequence[FieldVector]:
    """
    One input per user, zero padded on the right to the scheme's input length L.
    """
    K, L = scheme.params.K, scheme.params.L
    if len(inputs) != K:
        raise DimensionMismatchError(
            f"expected inputs for {K} users, got {len(inputs)}"
        )
    padded = []
    for k, values in enumerate(inputs, start=1):
        if len(values) > L:
            raise DimensionMismatchError(
                f"input of user {k} has {len(values)} symbols, the scheme takes L={L}"
            )
        padding = [0] * (L - len(values))
        padded.append(FieldVector.of(scheme.spec, list(values) + padding))
    return padded


def random_inputs(scheme: Scheme, stream: RandomStream) -> Sequence[FieldVector]:
    spec, L = scheme.spec, scheme.params.L
    return [
        FieldVector(spec, stream.split("user", k).uniform_array(spec, (L,)))
        for k in range(1, scheme.params.K + 1)
    ]


def run(
    scheme: Scheme,
    seed: int,
    inputs: Optional[Sequence[Sequence[int]]] = None,
    redact_keys: bool = False,
) -> Transcript:
    """
    One protocol execution: draw keys, let every user encode its input, add up the
    messages. Inputs are drawn uniformly when none are given.
    """
    stream = RandomStream(seed)
    keys = draw_keys(scheme, stream.split("keys"))
    if inputs is None:
        W = random_inputs(scheme, stream.split("inputs"))
    else:
        W = pad_inputs(scheme, inputs)
    messages = [
        encode_message(scheme, k, W[k - 1], keys)
        for k in range(1, scheme.params.K + 1)
    ]
    decoded = decode_sum(messages)
    decoded_ok = decoded == vec_sum(W)
    if not decoded_ok:
        logger.error("Decoded sum %s differs from the input sum", decoded.to_list())
    certified = scheme.certificate.all_pass if scheme.certificate is not None else None
    return Transcript(
        scheme.params,
        tuple(W),
        tuple(messages),
        decoded,
        RunSummary(decoded_ok, certified, seed),
        None if redact_keys else keys,
    )


def verify_transcript(transcript: Transcript) -> Transcript:
    """
    A transcript is consistent when its messages add up to the recorded sum and that
    sum equals the sum of the recorded inputs.
    """
    if decode_sum(transcript.messages) != transcript.decoded:
        raise TranscriptIntegrityError(
            "recorded messages do not add up to the decoded sum"
        )
    if vec_sum(transcript.inputs) != transcript.decoded:
        raise TranscriptIntegrityError("decoded sum differs from the sum of the inputs")
    return transcript


def load_transcript(path: Union[str, Path]) -> Transcript:
    return verify_transcript(read_artifact(path, TRANSCRIPT_KIND, Transcript))

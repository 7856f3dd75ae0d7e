from typing import Optional, Tuple

from securesum.domain.dataclass import dataclass
from securesum.domain.linalg import FieldVector
from securesum.domain.scheme import KeyRealization, SchemeParams


@dataclass(frozen=True)
class RunSummary:
    decoded_ok: bool
    """
    Whether the decoded sum equals the sum of the inputs.
    """

    certified: Optional[bool] = None
    """
    Whether the scheme's attached certificate passed, if it carries one.
    """

    seed: Optional[int] = None


@dataclass(frozen=True)
class Transcript:
    """
    One execution of the protocol: every user sends one message, the server adds them.
    """

    params: SchemeParams
    inputs: Tuple[FieldVector, ...]
    messages: Tuple[FieldVector, ...]
    decoded: FieldVector
    summary: RunSummary

    keys: Optional[KeyRealization] = None
    """
    ``None`` when the transcript was written with redacted keys.
    """

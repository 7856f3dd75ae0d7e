import hashlib
import struct
from typing import List

import attr
import numpy as np

from securesum.domain.dataclass import dataclass
from securesum.domain.field import FieldElement, FieldSpec


WORDS_PER_BLOCK = 8

WORD_RANGE = 1 << 32


@dataclass
class RandomStream:
    """
    Seedable, splittable, deterministic stream of 32-bit words.

    Block ``i`` of a stream is ``SHA-256("{seed}/{label}/{index}/{i}")`` read as eight
    little-endian words, so a sub-stream is fully determined by its ``(label, index)``
    and the same draws come out whether sub-streams are consumed serially or by
    different workers. Statistical uniformity only, this is not a CSPRNG.
    """

    seed: int
    label: str = "root"
    index: int = 0

    _counter: int = 0
    _buffer: List[int] = attr.ib(default=attr.Factory(list))

    def split(self, label: str, index: int = 0) -> "RandomStream":
        return RandomStream(self.seed, f"{self.label}.{self.index}:{label}", index)

    def next_word(self) -> int:
        if not self._buffer:
            block = hashlib.sha256(
                f"{self.seed}/{self.label}/{self.index}/{self._counter}".encode("ascii")
            ).digest()
            self._counter += 1
            # Reversed so that pop() yields words in block order.
            self._buffer = list(reversed(struct.unpack("<8I", block)))
        return self._buffer.pop()

    def uniform_int(self, n: int) -> int:
        """
        Uniform integer in ``[0, n)`` by rejection: words below ``2^32 mod n`` are
        discarded so that every residue has the same number of preimages.
        """
        if not 0 < n <= WORD_RANGE:
            raise ValueError(f"cannot sample uniformly from [0, {n})")
        threshold = WORD_RANGE % n
        while True:
            word = self.next_word()
            if word >= threshold:
                return word % n

    def uniform_array(self, spec: FieldSpec, shape) -> np.ndarray:
        count = int(np.prod(shape)) if shape else 1
        draws = [self.uniform_int(spec.q) for _ in range(count)]
        return np.array(draws, dtype=np.int64).reshape(shape)


def uniform_sample(spec: FieldSpec, stream: RandomStream) -> FieldElement:
    return FieldElement(stream.uniform_int(spec.q), spec)

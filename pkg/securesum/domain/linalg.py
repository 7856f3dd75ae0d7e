from typing import Iterable, List, Sequence, Tuple, Union

import attr
import numpy as np

from securesum.domain.field import FieldElement, FieldSpec


def _as_residues(values, spec: FieldSpec, ndim: int) -> np.ndarray:
    """
    Coerce plain ints (or field elements) into a read-only int64 array of canonical
    residues.
    """
    if isinstance(values, np.ndarray):
        array = values.astype(np.int64, copy=True)
    else:
        array = np.array(
            [[int(x) for x in row] for row in values]
            if ndim == 2
            else [int(x) for x in values],
            dtype=np.int64,
        )
    if ndim == 2 and array.size == 0 and array.ndim != 2:
        array = array.reshape(0, 0)
    if array.ndim != ndim:
        raise ValueError(
            f"expected a {ndim}-dimensional array, got shape {array.shape}"
        )
    array %= spec.q
    array.setflags(write=False)
    return array


@attr.s(slots=True, frozen=True, eq=False, repr=False)
class FieldVector:
    """
    A length-n vector over F_q, stored as canonical residues.
    """

    spec: FieldSpec = attr.ib()
    values: np.ndarray = attr.ib()

    def __attrs_post_init__(self):
        object.__setattr__(self, "values", _as_residues(self.values, self.spec, 1))

    @classmethod
    def of(cls, spec: FieldSpec, values: Iterable[Union[int, FieldElement]]):
        return cls(spec, list(values))

    @classmethod
    def zeros(cls, spec: FieldSpec, length: int):
        return cls(spec, np.zeros(length, dtype=np.int64))

    @property
    def length(self) -> int:
        return int(self.values.shape[0])

    @property
    def entries(self) -> Tuple[FieldElement, ...]:
        return tuple(FieldElement(int(v), self.spec) for v in self.values)

    def to_list(self) -> List[int]:
        return [int(v) for v in self.values]

    def __len__(self):
        return self.length

    def __getitem__(self, i: int) -> FieldElement:
        return FieldElement(int(self.values[i]), self.spec)

    def __eq__(self, other):
        if not isinstance(other, FieldVector):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.spec, tuple(self.to_list())))

    def __repr__(self):
        return f"FieldVector(q={self.spec.q}, {self.to_list()})"


@attr.s(slots=True, frozen=True, eq=False, repr=False)
class FieldMatrix:
    """
    A dense rows x cols matrix over F_q, row-major, stored as canonical residues.
    Zero-sized dimensions are allowed (a size-1 key group has a 1x0 precoding row).
    """

    spec: FieldSpec = attr.ib()
    values: np.ndarray = attr.ib()

    def __attrs_post_init__(self):
        object.__setattr__(self, "values", _as_residues(self.values, self.spec, 2))

    @classmethod
    def of(cls, spec: FieldSpec, rows: Sequence[Sequence[Union[int, FieldElement]]]):
        return cls(spec, rows)

    @classmethod
    def from_array(cls, spec: FieldSpec, array: np.ndarray):
        return cls(spec, np.asarray(array))

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int):
        return cls(spec, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, spec: FieldSpec, n: int):
        return cls(spec, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def cols(self) -> int:
        return int(self.values.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> Tuple[FieldElement, ...]:
        return tuple(FieldElement(int(v), self.spec) for v in self.values.ravel())

    def to_lists(self) -> List[List[int]]:
        return [[int(v) for v in row] for row in self.values]

    def column(self, j: int) -> FieldVector:
        return FieldVector(self.spec, self.values[:, j])

    def __getitem__(self, index: Tuple[int, int]) -> FieldElement:
        i, j = index
        return FieldElement(int(self.values[i, j]), self.spec)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix.from_array(self.spec, -self.values)

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.spec, self.shape, self.values.tobytes()))

    def __repr__(self):
        return f"FieldMatrix(q={self.spec.q}, {self.to_lists()})"

"""
Exact linear algebra over F_q on top of numpy int64 arrays.

Every entry is a canonical residue below 2^31, so a single product fits in int64;
products are reduced before they are summed.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from securesum.domain.field import FieldSpec, inverse_mod
from securesum.domain.linalg import FieldMatrix, FieldVector
from securesum.exceptions import (
    DimensionMismatchError,
    FieldMismatchError,
    RaggedLayoutError,
)


def _check_spec(left: FieldSpec, right: FieldSpec) -> None:
    if left != right:
        raise FieldMismatchError(left, right)


def reduced_product(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """
    ``a @ b mod q`` without int64 overflow for any q < 2^31.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for j in range(a.shape[1]):
        out = (out + np.outer(a[:, j], b[j, :]) % q) % q
    return out


def mat_vec(matrix: FieldMatrix, vector: FieldVector) -> FieldVector:
    _check_spec(matrix.spec, vector.spec)
    if matrix.cols != vector.length:
        raise DimensionMismatchError(
            f"cannot multiply a {matrix.rows}x{matrix.cols} matrix "
            f"by a length-{vector.length} vector"
        )
    column = vector.values.reshape(-1, 1)
    product = reduced_product(matrix.values, column, matrix.spec.q)
    return FieldVector(matrix.spec, product.ravel())


def mat_mul(left: FieldMatrix, right: FieldMatrix) -> FieldMatrix:
    _check_spec(left.spec, right.spec)
    if left.cols != right.rows:
        raise DimensionMismatchError(
            f"cannot multiply {left.rows}x{left.cols} by {right.rows}x{right.cols}"
        )
    product = reduced_product(left.values, right.values, left.spec.q)
    return FieldMatrix(left.spec, product)


def transpose(matrix: FieldMatrix) -> FieldMatrix:
    return FieldMatrix(matrix.spec, matrix.values.T)


def vec_add(left: FieldVector, right: FieldVector) -> FieldVector:
    _check_spec(left.spec, right.spec)
    if left.length != right.length:
        raise DimensionMismatchError(
            f"cannot add vectors of length {left.length} and {right.length}"
        )
    return FieldVector(left.spec, (left.values + right.values) % left.spec.q)


def vec_sum(vectors: Sequence[FieldVector]) -> FieldVector:
    if not vectors:
        raise DimensionMismatchError("cannot sum an empty list of vectors")
    total = vectors[0]
    for v in vectors[1:]:
        total = vec_add(total, v)
    return total


def vec_concat(spec: FieldSpec, vectors: Sequence[FieldVector]) -> FieldVector:
    for v in vectors:
        _check_spec(spec, v.spec)
    if not vectors:
        return FieldVector.zeros(spec, 0)
    return FieldVector(spec, np.concatenate([v.values for v in vectors]))


def mat_sum(matrices: Sequence[FieldMatrix]) -> FieldMatrix:
    first = matrices[0]
    total = np.zeros(first.shape, dtype=np.int64)
    for m in matrices:
        _check_spec(first.spec, m.spec)
        if m.shape != first.shape:
            raise DimensionMismatchError(
                f"cannot add {first.shape} and {m.shape} matrices"
            )
        total = (total + m.values) % first.spec.q
    return FieldMatrix(first.spec, total)


def vstack(spec: FieldSpec, matrices: Sequence[FieldMatrix], cols: int) -> FieldMatrix:
    if not matrices:
        return FieldMatrix.zeros(spec, 0, cols)
    for m in matrices:
        _check_spec(spec, m.spec)
        if m.cols != cols:
            raise DimensionMismatchError(f"expected {cols} columns, got {m.cols}")
    return FieldMatrix(spec, np.vstack([m.values for m in matrices]))


def row_reduce(matrix: FieldMatrix) -> Tuple[FieldMatrix, List[int]]:
    """
    Reduced row echelon form and pivot columns.

    Pivots are chosen column by column, taking the first row at or below the current
    one with a nonzero entry, so results are reproducible.
    """
    q = matrix.spec.q
    a = matrix.values.copy()
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.flatnonzero(a[r:, c])
        if nonzero.size == 0:
            continue
        p = r + int(nonzero[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] * inverse_mod(int(a[r, c]), q) % q
        factors = a[:, c].copy()
        factors[r] = 0
        a = (a - np.outer(factors, a[r]) % q) % q
        pivots.append(c)
        r += 1
    return FieldMatrix(matrix.spec, a), pivots


def rank(matrix: FieldMatrix) -> int:
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    _, pivots = row_reduce(matrix)
    return len(pivots)


def stack_blocks(
    layout: Sequence[Sequence[Optional[FieldMatrix]]],
    spec: Optional[FieldSpec] = None,
    row_heights: Optional[Sequence[int]] = None,
    col_widths: Optional[Sequence[int]] = None,
) -> FieldMatrix:
    """
    Assemble a block matrix. ``None`` blocks are zero; their size comes from the other
    blocks in the same block row / column or from ``row_heights`` / ``col_widths``,
    which are required when a whole block row or column is absent.
    """
    n_block_rows = len(layout)
    n_block_cols = len(layout[0]) if layout else (len(col_widths) if col_widths else 0)
    if any(len(row) != n_block_cols for row in layout):
        raise RaggedLayoutError("every block row needs the same number of blocks")

    heights: List[Optional[int]] = (
        list(row_heights) if row_heights is not None else [None] * n_block_rows
    )
    widths: List[Optional[int]] = (
        list(col_widths) if col_widths is not None else [None] * n_block_cols
    )
    if len(heights) != n_block_rows or len(widths) != n_block_cols:
        raise RaggedLayoutError("declared block sizes do not match the grid")

    for i, row in enumerate(layout):
        for j, block in enumerate(row):
            if block is None:
                continue
            if spec is None:
                spec = block.spec
            _check_spec(spec, block.spec)
            if heights[i] is None:
                heights[i] = block.rows
            if widths[j] is None:
                widths[j] = block.cols
            if (block.rows, block.cols) != (heights[i], widths[j]):
                raise RaggedLayoutError(
                    f"block ({i}, {j}) is {block.rows}x{block.cols}, "
                    f"expected {heights[i]}x{widths[j]}"
                )

    if spec is None:
        raise RaggedLayoutError("an all-absent layout needs an explicit field spec")
    if any(h is None for h in heights) or any(w is None for w in widths):
        raise RaggedLayoutError(
            "an all-absent block row or column needs a declared size"
        )

    row_offsets = np.concatenate([[0], np.cumsum(heights)]).astype(int)
    col_offsets = np.concatenate([[0], np.cumsum(widths)]).astype(int)
    out = np.zeros((int(row_offsets[-1]), int(col_offsets[-1])), dtype=np.int64)
    for i, row in enumerate(layout):
        for j, block in enumerate(row):
            if block is not None:
                rows = slice(row_offsets[i], row_offsets[i + 1])
                cols = slice(col_offsets[j], col_offsets[j + 1])
                out[rows, cols] = block.values
    return FieldMatrix(spec, out)

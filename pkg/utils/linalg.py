"""
Exact linear algebra over a FieldCtx.
"""

from typing import List, Sequence

from utils.field import FieldCtx, FieldElem

Matrix = List[List[FieldElem]]


def bareiss_determinant(matrix: Sequence[Sequence[FieldElem]], ctx: FieldCtx) -> FieldElem:
    """
    Fraction-free (Bareiss) determinant with row pivoting.

    Every division in the elimination is exact, so over Q the intermediate
    entries stay minors of the input instead of growing fractions.

    Args:
        matrix: Square matrix of elements of ctx
        ctx: Coefficient domain

    Returns:
        det(matrix); the empty matrix has determinant 1
    """
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    if size == 0:
        return ctx.one()

    m = [[ctx.element(x) for x in row] for row in matrix]
    sign = 1
    prev = ctx.one()
    for k in range(size - 1):
        if m[k][k].is_zero():
            swap = next((r for r in range(k + 1, size) if not m[r][k].is_zero()), None)
            if swap is None:
                return ctx.zero()
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) / prev
            m[i][k] = ctx.zero()
        prev = pivot
    det = m[size - 1][size - 1]
    return det if sign == 1 else -det


def submatrix(matrix: Sequence[Sequence[FieldElem]], rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return [[matrix[r][c] for c in cols] for r in rows]

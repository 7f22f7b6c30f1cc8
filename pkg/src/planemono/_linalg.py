"""Exact dense linear algebra over the rationals for small systems."""

from fractions import Fraction


def as_fraction_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def solve(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly by Gauss-Jordan elimination.

    Raises ``ZeroDivisionError`` if the matrix is singular.
    """
    n = len(matrix)
    aug = [row[:] + [Fraction(b)] for row, b in zip(as_fraction_matrix(matrix), rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        piv = aug[col][col]
        aug[col] = [x / piv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def determinant(matrix):
    a = as_fraction_matrix(matrix)
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = a[r][col] / a[col][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return det


def leading_principal_minors(matrix):
    return [determinant([row[:k] for row in matrix[:k]]) for k in range(1, len(matrix) + 1)]


def is_negative_definite(matrix):
    """Sylvester's criterion applied to ``-matrix``."""
    neg = [[-x for x in row] for row in matrix]
    return all(d > 0 for d in leading_principal_minors(neg))


def mat_vec(matrix, vec):
    return [sum((Fraction(a) * b for a, b in zip(row, vec)), Fraction(0)) for row in matrix]

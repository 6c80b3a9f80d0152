"""Small exact linear algebra over ``fractions.Fraction``.

Matrices are tuples of row tuples, vectors are tuples. Nothing here ever
touches floating point.
"""

from fractions import Fraction


def as_fraction(value):
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted in exact arithmetic: %r" % value)
    return Fraction(value)


def vector(values):
    return tuple(as_fraction(v) for v in values)


def matrix(rows):
    return tuple(vector(row) for row in rows)


def identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a))


def matmul(a, b):
    cols = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def matvec(a, v):
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def diag(values):
    n = len(values)
    return tuple(
        tuple(as_fraction(values[i]) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def columns_to_matrix(cols):
    return transpose(tuple(vector(c) for c in cols))


def inverse(a):
    """Gauss-Jordan inverse. Raises ZeroDivisionError if ``a`` is singular."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    work = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def det(a):
    """Determinant by fraction-exact elimination."""
    n = len(a)
    work = [list(row) for row in a]
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            result = -result
        p = work[col][col]
        result *= p
        for r in range(col + 1, n):
            f = work[r][col] / p
            if f:
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return result


def add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def scale(c, v):
    return tuple(c * x for x in v)


def fmt(value):
    """Render a rational as ``p/q`` (or ``p`` when integral)."""
    return str(as_fraction(value))


def fmt_vector(v, sep=", "):
    return sep.join(fmt(x) for x in v)

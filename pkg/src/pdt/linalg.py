"""Exact dense linear algebra over Q (and any exact field with the same operators).

Matrices are tuples of row tuples, vectors are tuples.  Nothing here touches
floating point.  The elimination routines only use ``+ - * /`` and ``== 0``
so they also run over :class:`pdt.cyclotomic.CyclotomicElement`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence

from .errors import MalformedInputError

Vector = tuple
Matrix = tuple


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are accepted only when integral; anything else is rejected so that
    inexact data never leaks into exact computations.
    """
    if isinstance(x, bool):
        raise MalformedInputError(f"expected a rational, got boolean {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInputError(f"cannot parse rational {x!r}") from exc
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    raise MalformedInputError(f"expected a rational (int or 'p/q' string), got {x!r}")


def vec(entries: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in entries)


def mat(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise MalformedInputError("ragged matrix rows")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def diag(entries: Sequence) -> Matrix:
    n = len(entries)
    return tuple(
        tuple(to_fraction(entries[i]) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        k = len(b)
        for r in b:
            rows.append((Fraction(0),) * offset + tuple(r) + (Fraction(0),) * (n - offset - k))
        offset += k
    return tuple(rows)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def dot(u: Sequence, v: Sequence):
    acc = 0
    for x, y in zip(u, v):
        if x != 0 and y != 0:
            acc = acc + x * y
    return acc


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in a)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in r) for r in a)


def mat_pow(a: Matrix, k: int) -> Matrix:
    result = identity(len(a))
    for _ in range(k):
        result = matmul(result, a)
    return result


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for r in a for x in r)


def is_symmetric(a: Matrix) -> bool:
    n = len(a)
    return all(len(r) == n for r in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n)
    )


def outer(u: Sequence, v: Sequence) -> Matrix:
    return tuple(tuple(x * y for y in v) for x in u)


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form with leading entries 1; zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(a: Sequence[Sequence], ncols: int | None = None, one=Fraction(1)) -> list[Vector]:
    """Basis of {x : a x = 0}; one vector per free column, free entry = 1."""
    if ncols is None:
        if not a:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(a[0])
    r, pivots = rref(a) if a else ([], [])
    zero = one - one
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = one
        for row, pc in zip(r, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(a: Matrix, b: Sequence) -> Vector | None:
    """One solution of a x = b, or None if inconsistent."""
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(r, pivots):
        x[pc] = row[n]
    return tuple(x)


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + list(e) for row, e in zip(a, identity(n))]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise MalformedInputError("matrix is singular")
    return tuple(tuple(row[n:]) for row in r)


def det(a: Matrix) -> Fraction:
    m = [list(r) for r in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def primitive_integer(v: Sequence[Fraction]) -> Vector:
    """Scale a nonzero rational vector to coprime integers, first nonzero entry positive."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise MalformedInputError("zero vector has no primitive representative")
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return tuple(Fraction(x // g) for x in ints)


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

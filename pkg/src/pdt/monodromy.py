"""Unipotent monodromy: logarithm, case I/II/III classification, exp(wN), weight filtrations."""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .errors import MalformedInputError, NeedsBaseChangeError, NotTypeIVError
from .qspace import QuadraticSpace, Subspace, orthogonal_complement, radical, subspace_intersect

DEFAULT_MAX_ORDER = 60


class Case(str, Enum):
    I = "I"
    II = "II"
    III = "III"


def _check_square(space: QuadraticSpace, m: la.Matrix, name: str) -> la.Matrix:
    m = la.mat(m)
    d = space.dim
    if len(m) != d or any(len(r) != d for r in m):
        raise MalformedInputError(f"{name} must be a {d} x {d} matrix")
    return m


def preserves_form(space: QuadraticSpace, t: la.Matrix) -> bool:
    return la.matmul(la.matmul(la.transpose(t), space.gram), t) == space.gram


def is_infinitesimally_orthogonal(space: QuadraticSpace, n: la.Matrix) -> bool:
    g = space.gram
    return la.is_zero_matrix(la.mat_add(la.matmul(la.transpose(n), g), la.matmul(g, n)))


@dataclass(frozen=True)
class MonodromyOperator:
    space: QuadraticSpace
    T: la.Matrix

    def __post_init__(self):
        t = _check_square(self.space, self.T, "T")
        object.__setattr__(self, "T", t)
        if not preserves_form(self.space, t):
            raise MalformedInputError("T does not preserve the quadratic form")
        a = la.mat_sub(t, la.identity(self.space.dim))
        if not la.is_zero_matrix(la.mat_pow(a, 3)):
            raise NeedsBaseChangeError(
                "(T - 1)^3 != 0; replace T by a unipotent power (see unipotent_power)"
            )


def unipotent_power(space: QuadraticSpace, t: la.Matrix, max_order: int | None = None) -> int:
    """Smallest k >= 1 with (T^k - 1)^3 = 0, searching up to max_order.

    The bound defaults to the PDT_MAX_ORDER environment variable, else 60.
    """
    if max_order is None:
        max_order = int(os.environ.get("PDT_MAX_ORDER", DEFAULT_MAX_ORDER))
    t = _check_square(space, t, "T")
    ident = la.identity(space.dim)
    power = ident
    for k in range(1, max_order + 1):
        power = la.matmul(power, t)
        if la.is_zero_matrix(la.mat_pow(la.mat_sub(power, ident), 3)):
            return k
    raise NeedsBaseChangeError(f"no power T^k with k <= {max_order} is unipotent of the required kind")


@dataclass(frozen=True)
class NilpotentData:
    space: QuadraticSpace
    N: la.Matrix
    case: Case | None = None
    e: tuple | None = None
    u: tuple | None = None
    J: Subspace | None = None
    J0: Subspace | None = None

    @property
    def u_norm(self) -> Fraction | None:
        return None if self.u is None else self.space.dot(self.u, self.u)

    @property
    def polarized(self) -> bool:
        """Case III requires u.u < 0 for a polarized limit; cases I/II impose nothing."""
        return self.case != Case.III or self.u_norm < 0


def exp_series(n: la.Matrix, w=1) -> la.Matrix:
    """I + wN + w^2 N^2 / 2 (exact when N^3 = 0)."""
    d = len(n)
    n2 = la.matmul(n, n)
    half_w2 = w * w / 2 if not isinstance(w, int) else Fraction(w * w, 2)
    return tuple(
        tuple(
            (1 if i == j else 0) + w * n[i][j] + half_w2 * n2[i][j]
            for j in range(d)
        )
        for i in range(d)
    )


def log_unipotent(m: MonodromyOperator) -> NilpotentData:
    """N = log T = (T - 1) - (T - 1)^2 / 2; exp(N) = T is re-checked exactly."""
    a = la.mat_sub(m.T, la.identity(m.space.dim))
    n = la.mat_sub(a, la.mat_scale(Fraction(1, 2), la.matmul(a, a)))
    if exp_series(n) != m.T:
        raise AssertionError("exp(log T) != T")
    return NilpotentData(m.space, n)


def wedge_matrix(space: QuadraticSpace, e: Sequence, u: Sequence) -> la.Matrix:
    """Matrix of a -> (a.e) u - (a.u) e."""
    ge = la.matvec(space.gram, e)
    gu = la.matvec(space.gram, u)
    return la.mat_sub(la.outer(u, ge), la.outer(e, gu))


def classify_nilpotent(space: QuadraticSpace, n: la.Matrix) -> NilpotentData:
    """Case I/II/III together with a canonical pair (e, u) and J, J0."""
    n = _check_square(space, n, "N")
    if not la.is_zero_matrix(la.mat_pow(n, 3)):
        raise NotTypeIVError("N^3 != 0")
    if not is_infinitesimally_orthogonal(space, n):
        raise NotTypeIVError("N is not in the orthogonal Lie algebra (N^T G + G N != 0)")
    if la.is_zero_matrix(n):
        return NilpotentData(space, n, Case.I, None, None, space.zero(), space.zero())

    image = Subspace(space, la.transpose(n))  # column space
    if image.dim != 2:
        raise NotTypeIVError(f"rank N = {image.dim}, expected 2")
    kernel = Subspace(space, la.nullspace(n, space.dim))
    meet = subspace_intersect(image, kernel)
    if meet.dim == 0:
        raise NotTypeIVError("im N meets ker N trivially")
    e = la.primitive_integer(meet.basis[0])
    if space.dot(e, e) != 0:
        raise NotTypeIVError("candidate e is not isotropic")

    ge = la.matvec(space.gram, e)
    test = next((i for i in range(space.dim) if ge[i] != 0), None)
    if test is None:
        raise NotTypeIVError("form is degenerate along e")
    a = tuple(Fraction(int(i == test)) for i in range(space.dim))
    na = la.matvec(n, a)
    u = tuple(x / ge[test] for x in na)
    if wedge_matrix(space, e, u) != n:
        raise NotTypeIVError("N is not of the form a -> (a.e)u - (a.u)e")
    if space.dot(e, u) != 0:
        raise NotTypeIVError("e.u != 0")

    j = Subspace(space, [e, u])
    uu = space.dot(u, u)
    case = Case.II if uu == 0 else Case.III
    return NilpotentData(space, n, case, e, u, j, radical(j))


def one_param(nd: NilpotentData, w) -> la.Matrix:
    """exp(wN) via a + w(a.e)u - w(a.u)e - w^2/2 (u.u)(a.e)e; identity in case I."""
    space = nd.space
    d = space.dim
    if nd.case in (None, Case.I) or nd.e is None:
        if nd.case is None and not la.is_zero_matrix(nd.N):
            return exp_series(nd.N, w)
        return la.identity(d)
    e, u = nd.e, nd.u
    ge = la.matvec(space.gram, e)
    gu = la.matvec(space.gram, u)
    uu = space.dot(u, u)
    c = -w * w * uu / 2
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            x = (1 if i == j else 0) + w * (u[i] * ge[j] - e[i] * gu[j]) + c * e[i] * ge[j]
            row.append(x)
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class WeightFiltration:
    steps: tuple  # ((k, Subspace), ...) increasing in k

    def __getitem__(self, k: int) -> Subspace:
        lo, hi = self.steps[0], self.steps[-1]
        if k < lo[0]:
            return lo[1].ambient.zero()
        if k > hi[0]:
            return hi[1]
        return dict(self.steps)[k]

    @property
    def indices(self) -> list[int]:
        return [k for k, _ in self.steps]


def weight_filtration(nd: NilpotentData) -> WeightFiltration:
    """Closed-form limit weight filtration (weight-zero centering)."""
    space = nd.space
    h = space.full()
    if nd.case == Case.I:
        return WeightFiltration(((0, h),))
    if nd.case == Case.II:
        jp = orthogonal_complement(nd.J)
        return WeightFiltration(((-2, space.zero()), (-1, nd.J), (0, jp), (1, h)))
    if nd.case == Case.III:
        j0p = orthogonal_complement(nd.J0)
        return WeightFiltration(((-2, nd.J0), (-1, nd.J0), (0, j0p), (1, j0p), (2, h)))
    raise MalformedInputError("weight_filtration needs classified NilpotentData")


def jacobson_morozov(space: QuadraticSpace, n: la.Matrix) -> WeightFiltration:
    """Generic weight filtration of a nilpotent N by Deligne's recursion.

    With N^(m+1) = 0: W_m = H, W_{m-1} = ker N^m, W_{-m} = im N^m, and the steps in
    between come from the induced N on ker N^m / im N^m (same recipe, m - 1).
    Independent of the (e, u) normal form; used as an oracle for :func:`weight_filtration`.
    """
    n = _check_square(space, n, "N")
    m = 0
    while not la.is_zero_matrix(la.mat_pow(n, m + 1)):
        m += 1
        if m > space.dim:
            raise MalformedInputError("N is not nilpotent")
    out: dict[int, Subspace] = {k: space.zero() for k in range(-m - 1, 0)}
    out.update({k: space.full() for k in range(0, m + 1)})
    a, b = space.full(), space.zero()
    for level in range(m, 0, -1):
        nm = la.mat_pow(n, level)
        low = Subspace(space, list(b.basis) + [la.matvec(nm, v) for v in a.basis])
        high = _preimage(space, nm, a, b)
        out[-level], out[level - 1] = low, high
        a, b = high, low
    return WeightFiltration(tuple(sorted(out.items())))


def _preimage(space, m: la.Matrix, a: Subspace, b: Subspace) -> Subspace:
    """{x in A : M x in B}."""
    if not a.basis:
        return a
    images = [la.matvec(m, v) for v in a.basis]
    ann = b.annihilator()
    rows = [tuple(la.dot(r, img) for img in images) for r in ann]
    if not rows:
        return a
    coeffs = la.nullspace(rows, len(images))
    vecs = [
        tuple(sum((c * v[i] for c, v in zip(k, a.basis)), Fraction(0)) for i in range(space.dim))
        for k in coeffs
    ]
    return Subspace(space, vecs)

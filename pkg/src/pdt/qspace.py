"""Rational quadratic spaces and their subspaces.

All computations are exact over Q.  A :class:`Subspace` stores its basis in
reduced row-echelon form, so two subspaces are equal iff their stored bases
are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg as la
from .cyclotomic import CyclotomicElement, SUPPORTED_ORDERS
from .errors import (
    ClassificationError,
    DimensionMismatchError,
    ImpossibleConfigurationError,
    MalformedInputError,
    UnsupportedInputError,
)


def congruence_diagonalize(gram: la.Matrix) -> tuple[list[Fraction], la.Matrix]:
    """Symmetric Gaussian reduction: returns (d, P) with P gram P^T = diag(d).

    Rows of P are the new basis vectors.  Pivots are taken on the diagonal;
    when the remaining diagonal vanishes but some a_ij does not, basis vector
    i is replaced by i + j (then a_ii = 2 a_ij != 0).  Zero pivots count
    toward the nullity.
    """
    n = len(gram)
    a = [list(r) for r in gram]
    p = [list(r) for r in la.identity(n)]
    d: list[Fraction] = []
    order: list[int] = []
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and a[i][j] != 0), None
            )
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            p[i] = [x + y for x, y in zip(p[i], p[j])]
            piv = i
        pv = a[piv][piv]
        for i in active:
            if i == piv or a[i][piv] == 0:
                continue
            f = a[i][piv] / pv
            for k in range(n):
                a[i][k] -= f * a[piv][k]
            for k in range(n):
                a[k][i] -= f * a[k][piv]
            p[i] = [x - f * y for x, y in zip(p[i], p[piv])]
        d.append(pv)
        order.append(piv)
        active.remove(piv)
    d.extend(Fraction(0) for _ in active)
    return d, tuple(tuple(p[i]) for i in order + active)


def signature_of_gram(gram: la.Matrix) -> tuple[int, int, int]:
    if not la.is_symmetric(gram):
        raise MalformedInputError("Gram matrix is not symmetric")
    d, _ = congruence_diagonalize(gram)
    return (
        sum(1 for x in d if x > 0),
        sum(1 for x in d if x < 0),
        sum(1 for x in d if x == 0),
    )


@dataclass(frozen=True)
class QuadraticSpace:
    """Q^d with a symmetric bilinear form given by its Gram matrix."""

    gram: la.Matrix

    def __post_init__(self):
        g = la.mat(self.gram)
        if not g or any(len(r) != len(g) for r in g):
            raise MalformedInputError("Gram matrix must be square and nonempty")
        if not la.is_symmetric(g):
            raise MalformedInputError("Gram matrix is not symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def dim(self) -> int:
        return len(self.gram)

    @cached_property
    def signature(self) -> tuple[int, int, int]:
        return signature_of_gram(self.gram)

    @property
    def nondegenerate(self) -> bool:
        return self.signature[2] == 0

    def dot(self, u: Sequence, v: Sequence):
        """u . v = u^T G v; entries may be any exact or complex scalars."""
        acc = 0
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            row = self.gram[i]
            s = 0
            for j, vj in enumerate(v):
                if row[j] != 0 and vj != 0:
                    s = s + row[j] * vj
            acc = acc + ui * s
        return acc

    def restricted_gram(self, basis: Sequence[Sequence]) -> la.Matrix:
        gb = [la.matvec(self.gram, b) for b in basis]
        return tuple(tuple(la.dot(bi, gj) for gj in gb) for bi in basis)

    def full(self) -> "Subspace":
        return Subspace(self, la.identity(self.dim))

    def zero(self) -> "Subspace":
        return Subspace(self, ())

    def span(self, vectors: Sequence[Sequence]) -> "Subspace":
        return Subspace(self, vectors)

    def __hash__(self):
        return hash(self.gram)


def signature(space: QuadraticSpace) -> tuple[int, int, int]:
    """Inertia (p, q, r) computed by exact congruence reduction."""
    return space.signature


@dataclass(frozen=True, eq=False)
class Subspace:
    """Rational subspace of a quadratic space, basis kept in canonical RREF."""

    ambient: QuadraticSpace
    basis: tuple = field(default=())

    def __post_init__(self):
        d = self.ambient.dim
        rows = [la.vec(v) for v in self.basis]
        if any(len(r) != d for r in rows):
            raise DimensionMismatchError(f"basis vectors must have length {d}")
        reduced, _ = la.rref(rows) if rows else ([], [])
        object.__setattr__(self, "basis", tuple(tuple(r) for r in reduced))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.ambient.dim - self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        rows = ", ".join("[" + " ".join(la.fmt(x) for x in r) + "]" for r in self.basis)
        return f"Subspace(dim={self.dim}, basis=[{rows}])"

    @cached_property
    def gram(self) -> la.Matrix:
        return self.ambient.restricted_gram(self.basis)

    @cached_property
    def signature(self) -> tuple[int, int, int]:
        if not self.basis:
            return (0, 0, 0)
        return signature_of_gram(self.gram)

    def contains_vector(self, v: Sequence) -> bool:
        v = la.vec(v)
        if all(x == 0 for x in v):
            return True
        return la.rank(list(self.basis) + [v]) == self.dim

    def contains(self, other: "Subspace") -> bool:
        _same_ambient(self, other)
        return all(self.contains_vector(v) for v in other.basis)

    def coordinates(self, v: Sequence) -> tuple | None:
        """Coefficients of v in the stored basis, or None if v is not in the span."""
        if not self.basis:
            return () if all(x == 0 for x in v) else None
        return la.solve(la.transpose(self.basis), la.vec(v))

    def annihilator(self) -> list[la.Vector]:
        """Euclidean annihilator (linear equations cutting out the subspace)."""
        if not self.basis:
            return list(la.identity(self.ambient.dim))
        return la.nullspace(self.basis, self.ambient.dim)

    def is_totally_isotropic(self) -> bool:
        return la.is_zero_matrix(self.gram)


def _same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient != b.ambient:
        raise DimensionMismatchError("subspaces live in different quadratic spaces")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    return Subspace(a.ambient, a.basis + b.basis)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Kernel of the stacked annihilator equations of a and b."""
    _same_ambient(a, b)
    eqs = a.annihilator() + b.annihilator()
    if not eqs:
        return Subspace(a.ambient, la.identity(a.ambient.dim))
    return Subspace(a.ambient, la.nullspace(eqs, a.ambient.dim))


def intersect_all(subspaces: Sequence[Subspace]) -> Subspace:
    result = subspaces[0]
    for s in subspaces[1:]:
        result = subspace_intersect(result, s)
    return result


def radical(v: Subspace) -> Subspace:
    """V0 = {x in V : x.y = 0 for all y in V}."""
    if not v.basis:
        return v
    coeffs = la.nullspace(v.gram, v.dim)
    vectors = [
        tuple(sum((c * b[i] for c, b in zip(k, v.basis)), Fraction(0)) for i in range(v.ambient.dim))
        for k in coeffs
    ]
    return Subspace(v.ambient, vectors)


def perp_of_vectors(space: QuadraticSpace, vectors: Sequence[Sequence]) -> Subspace:
    """{x : x.v = 0 for all v}, valid for any form (no nondegeneracy needed)."""
    rows = [la.matvec(space.gram, v) for v in vectors]
    rows = [r for r in rows if any(x != 0 for x in r)]
    if not rows:
        return space.full()
    return Subspace(space, la.nullspace(rows, space.dim))


def orthogonal_complement(v: Subspace) -> Subspace:
    if not v.ambient.nondegenerate:
        raise UnsupportedInputError("orthogonal complement requires a nondegenerate ambient form")
    return perp_of_vectors(v.ambient, v.basis)


class SubspaceClass(str, Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    TYPE3 = "Type3"


@dataclass(frozen=True)
class Classification:
    """Result of :func:`classify_subspace` with the checked side conditions."""

    tag: SubspaceClass
    radical: Subspace
    perp: Subspace
    perp_signature: tuple[int, int, int]
    side_conditions: dict

    @property
    def holds(self) -> bool:
        return all(self.side_conditions.values())


def _is_psd(sig: tuple[int, int, int]) -> bool:
    return sig[1] == 0


def _is_nsd(sig: tuple[int, int, int]) -> bool:
    return sig[0] == 0


def classify_subspace(v: Subspace) -> Classification:
    """Type of a positive semidefinite rational subspace of a signature (n, 2) space.

    ``side_conditions`` for Type2 contains both the literal statement
    ``perp_negative_semidefinite`` and ``perp_positive_semidefinite_with_radical``
    (V0 <= V^perp <= V0^perp); only the latter holds in general.
    """
    space = v.ambient
    p, q, r = space.signature
    if r != 0 or q != 2:
        raise MalformedInputError(f"ambient signature must be (n, 2); got {space.signature}")
    v0 = radical(v)
    sig = v.signature
    if sig[1] != 0:
        if v0.dim == 0:
            raise ClassificationError(
                f"V has trivial radical but is indefinite (signature {sig}); not a limit datum"
            )
        raise ClassificationError(f"V is not positive semidefinite (signature {sig})")
    if v0.dim >= 3:
        raise ImpossibleConfigurationError(
            "a totally isotropic subspace of dimension >= 3 cannot exist in signature (n, 2)"
        )
    perp = orthogonal_complement(v)
    psig = perp.signature
    if v0.dim == 0:
        tag = SubspaceClass.TYPE1
        checks = {
            "V_positive_definite": sig[0] == v.dim,
            "perp_signature_is_(dim-2,2)": psig == (perp.dim - 2, 2, 0),
        }
    elif v0.dim == 2:
        tag = SubspaceClass.TYPE2
        v0perp = orthogonal_complement(v0)
        checks = {
            "perp_negative_semidefinite": _is_nsd(psig),
            "perp_positive_semidefinite_with_radical": _is_psd(psig)
            and perp.contains(v0)
            and v0perp.contains(perp),
        }
    else:
        tag = SubspaceClass.TYPE3
        checks = {
            "perp_contains_radical": perp.contains(v0),
            "perp_signature_nonpositive_index_le_1": psig[1] <= 1,
        }
    return Classification(tag, v0, perp, psig, checks)


# -- mu_l eigenspaces ---------------------------------------------------------


@dataclass(frozen=True)
class EigenspaceData:
    space: QuadraticSpace
    rho: la.Matrix
    l: int
    chi_basis: tuple  # vectors with CyclotomicElement entries
    herm_signature: tuple[int, int]
    herm_nullity: int = 0

    @property
    def dim(self) -> int:
        return len(self.chi_basis)

    def real_model(self) -> Subspace:
        """Rational subspace whose complexification is H_chi + conj(H_chi)."""
        vectors = []
        for v in self.chi_basis:
            vectors.append(tuple(x.a for x in v))
            vectors.append(tuple(x.b for x in v))
        return Subspace(self.space, vectors)


def _to_cyc(l: int, m: la.Matrix) -> list[list[CyclotomicElement]]:
    return [[CyclotomicElement(l, x) for x in row] for row in m]


def hermitian(space: QuadraticSpace, a: Sequence, b: Sequence):
    """h(a, b) = a . conj(b) for vectors over Q(zeta)."""
    return space.dot(a, [x.conjugate() for x in b])


def eigenspace_chi(space: QuadraticSpace, rho: la.Matrix, l: int) -> EigenspaceData:
    """Q(zeta_l)-basis of the zeta_l-eigenspace of rho with its hermitian signature."""
    if l not in SUPPORTED_ORDERS:
        raise UnsupportedInputError(f"l = {l}: Q(zeta_l) is not of degree <= 2")
    if l < 3:
        raise MalformedInputError("the tautological character needs l >= 3")
    rho = la.mat(rho)
    d = space.dim
    if len(rho) != d or any(len(r) != d for r in rho):
        raise MalformedInputError("rho must be a d x d matrix")
    if la.mat_pow(rho, l) != la.identity(d):
        raise MalformedInputError(f"rho^{l} is not the identity")
    if la.matmul(la.matmul(la.transpose(rho), space.gram), rho) != space.gram:
        raise MalformedInputError("rho does not preserve the form")

    z = CyclotomicElement.zeta(l)
    m = _to_cyc(l, rho)
    for i in range(d):
        m[i][i] = m[i][i] - z
    one = CyclotomicElement(l, 1)
    basis = tuple(la.nullspace(m, d, one=one))

    for a in basis:
        if la.matvec(_to_cyc(l, rho), a) != tuple(z * x for x in a):
            raise AssertionError("eigenvector check failed")
        for b in basis:
            if space.dot(a, b) != 0:
                raise AssertionError("H_chi is not isotropic")

    # restriction of scalars: Q-basis {v_i, zeta v_i}, form Re h
    qbasis = [v for a in basis for v in (a, tuple(z * x for x in a))]
    k2 = len(qbasis)
    real_form = tuple(
        tuple(hermitian(space, qbasis[i], qbasis[j]).real_part() for j in range(k2))
        for i in range(k2)
    )
    if k2:
        p2, q2, r2 = signature_of_gram(real_form)
    else:
        p2 = q2 = r2 = 0
    return EigenspaceData(space, rho, l, basis, (p2 // 2, q2 // 2), r2 // 2)

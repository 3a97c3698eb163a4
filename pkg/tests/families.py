"""Shared test data: the tube family in U + U + diag(...) and random exact inputs."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from pdt import linalg as la
from pdt import monodromy as mono
from pdt.gauss import GaussQ
from pdt.qspace import QuadraticSpace

U = ((0, 1), (1, 0))


def tube_space(*extra) -> QuadraticSpace:
    """Basis (e1, f1, e2, f2, p1, p2, ...) with e.f = 1 and p_i . p_i = extra[i]."""
    blocks = [la.mat(U), la.mat(U)]
    if extra:
        blocks.append(la.diag(extra))
    return QuadraticSpace(la.block_diag(*blocks))


def unit(d: int, i: int) -> la.Vector:
    return tuple(Fraction(int(k == i)) for k in range(d))


def nilpotent(space: QuadraticSpace, e, u) -> mono.NilpotentData:
    return mono.classify_nilpotent(space, mono.wedge_matrix(space, la.vec(e), la.vec(u)))


def alpha(space: QuadraticSpace, z: np.ndarray) -> np.ndarray:
    """-(z.z)/2 e1 + f1 + z for z in the span of the basis vectors after f1."""
    g = np.array([[float(x) for x in r] for r in space.gram])[2:, 2:]
    zz = z @ g @ z
    return np.concatenate([[-zz / 2, 1.0], z]).astype(complex)


def rand_q(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def rand_gauss(rng: random.Random, bound: int = 5) -> GaussQ:
    return GaussQ(rand_q(rng, bound), rand_q(rng, bound))


def rand_vector(rng: random.Random, d: int, bound: int = 5) -> la.Vector:
    return tuple(rand_q(rng, bound) for _ in range(d))


def rand_invertible(rng: random.Random, d: int, bound: int = 3) -> la.Matrix:
    while True:
        m = tuple(tuple(Fraction(rng.randint(-bound, bound)) for _ in range(d)) for _ in range(d))
        if la.det(m) != 0:
            return m


def rand_isotropic_pair(rng: random.Random, space: QuadraticSpace):
    """A random isotropic e and some u with u.e = 0, both nonzero, by conjugating e1, e2 + c f2 + ...

    Conjugation is by a random element of the orthogonal group generated by
    Eichler transvections, so the pair is not aligned with the coordinate axes.
    """
    d = space.dim
    e = unit(d, 0)
    u = tuple(Fraction(0) if i < 2 else rand_q(rng, 3) for i in range(d))
    g = random_orthogonal(rng, space)
    return la.matvec(g, e), la.matvec(g, u)


def eichler(space: QuadraticSpace, e, a) -> la.Matrix:
    """x -> x + (x.e) a - (x.a) e - (a.a)/2 (x.e) e for isotropic e and a perp e."""
    ge = la.matvec(space.gram, e)
    ga = la.matvec(space.gram, a)
    aa = Fraction(space.dot(a, a))
    d = space.dim
    return tuple(
        tuple(
            Fraction(int(i == j)) + a[i] * ge[j] - e[i] * ga[j] - aa / 2 * e[i] * ge[j]
            for j in range(d)
        )
        for i in range(d)
    )


def random_orthogonal(rng: random.Random, space: QuadraticSpace, steps: int = 3) -> la.Matrix:
    d = space.dim
    g = la.identity(d)
    for k in range(steps):
        e = unit(d, 0 if k % 2 == 0 else 1)
        a = tuple(Fraction(0) if i < 2 else Fraction(rng.randint(-2, 2)) for i in range(d))
        g = la.matmul(eichler(space, e, a), g)
    return g


def random_nilpotent(rng: random.Random, case: str, d: int | None = None) -> mono.NilpotentData:
    """Random case II or III data in U + U + diag(1, ..., 1), moved off the axes by an orthogonal map."""
    d = d or rng.randint(5, 10)
    space = tube_space(*([1] * (d - 4)))
    p = [Fraction(rng.randint(-3, 3)) for _ in range(d - 4)]
    if case == "II":
        y = Fraction(rng.choice([-2, -1, 1, 2]))
        x = -sum(c * c for c in p) / (2 * y)
    else:
        x, y = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))
        if 2 * x * y + sum(c * c for c in p) == 0:
            x += 1
            if 2 * x * y + sum(c * c for c in p) == 0:
                y += 1
    e = unit(d, 0)
    u = (Fraction(0), Fraction(0), x, y, *p)
    g = random_orthogonal(rng, space)
    return nilpotent(space, la.matvec(g, e), la.matvec(g, u))


def rand_gauss_vector(rng: random.Random, d: int, bound: int = 5) -> tuple:
    return tuple(rand_gauss(rng, bound) for _ in range(d))


def gauss_matvec(m: la.Matrix, v) -> tuple:
    return tuple(sum((GaussQ(x) * y for x, y in zip(row, v)), GaussQ(0)) for row in m)


def random_plane_data(rng: random.Random, d: int):
    """(space, e0, e1, f, alpha): isotropic plane span{e0, e1}, f in e0^perp, exact Gaussian alpha."""
    space = tube_space(*[rng.choice([1, 2, 3]) for _ in range(d - 4)])
    g = random_orthogonal(rng, space)
    e0 = la.matvec(g, unit(d, 0))
    e1 = la.matvec(g, unit(d, 2))
    f0 = tuple(GaussQ(0) if i == 1 else rand_gauss(rng, 4) for i in range(d))
    f = gauss_matvec(g, f0)
    while True:
        a = rand_gauss_vector(rng, d)
        if space.dot(a, e0) != 0:
            return space, e0, e1, f, a


# (name, extra diagonal of the tube space, pool of positive normals); cutting fixtures are subsets
ARRANGEMENT_POOLS = [
    ("n2", (), [(0, 0, 1, 1), (0, 0, 1, 2), (0, 0, 2, 1)]),
    ("n3", (1,), [(0, 0, 0, 0, 1), (0, 0, 1, 1, 0), (0, 0, 1, 1, 1), (1, 1, 0, 0, 1), (0, 0, 1, 2, 1)]),
    ("n4", (1, 1), [(0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1), (0, 0, 0, 0, 1, 1), (0, 0, 1, 1, 1, -1)]),
]


def arrangement_fixtures(max_cut: int = 4):
    """All subsets of each pool with at most max_cut hyperplanes through the line spanned by e1."""
    out = []
    for name, extra, pool in ARRANGEMENT_POOLS:
        for r in range(len(pool) + 1):
            for sub in itertools.combinations(pool, r):
                cutting = sum(1 for v in sub if v[1] == 0)
                if cutting <= max_cut:
                    out.append((f"{name}-{''.join(str(pool.index(v)) for v in sub) or 'empty'}", extra, list(sub)))
    return out

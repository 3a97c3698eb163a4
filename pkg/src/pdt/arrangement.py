"""Arrangement combinatorics: K1, K_J, cone decompositions of C_e, stratum posets, ball strata.

Everything that decides membership or order is exact.  Floating point is used
only to *find* witness points of cone cells (a second-order-cone program);
every witness is rationalized and re-verified exactly before it is accepted.
"""

from __future__ import annotations

import itertools
import random
from math import gcd, lcm
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import linalg as la
from .errors import DimensionMismatchError, MalformedInputError
from .qspace import (
    EigenspaceData,
    QuadraticSpace,
    Subspace,
    congruence_diagonalize,
    intersect_all,
    orthogonal_complement,
    perp_of_vectors,
    radical,
    signature_of_gram,
    subspace_intersect,
    subspace_sum,
)

SIGN = {1: "+", -1: "-", 0: "0"}


# -- arrangements -----------------------------------------------------------------


@dataclass(frozen=True)
class Arrangement:
    """Finite list of rational hyperplanes of signature (n - 1, 2) in a space of signature (n, 2)."""

    space: QuadraticSpace
    hyperplanes: tuple = ()

    def __post_init__(self):
        p, q, r = self.space.signature
        if q != 2 or r != 0 or p < 2:
            raise MalformedInputError(f"ambient signature must be (n, 2) with n >= 2; got {self.space.signature}")
        seen: list[Subspace] = []
        for h in self.hyperplanes:
            if h.ambient != self.space:
                raise DimensionMismatchError("hyperplane lives in a different space")
            if h.dim != self.space.dim - 1:
                raise MalformedInputError(f"member of dimension {h.dim} is not a hyperplane")
            if h.signature != (p - 1, 2, 0):
                raise MalformedInputError(f"member has signature {h.signature}, expected {(p - 1, 2, 0)}")
            if h not in seen:
                seen.append(h)
        object.__setattr__(self, "hyperplanes", tuple(seen))

    @classmethod
    def from_normals(cls, space: QuadraticSpace, normals: Iterable[Sequence]) -> "Arrangement":
        return cls(space, tuple(perp_of_vectors(space, [la.vec(v)]) for v in normals))

    @property
    def normals(self) -> tuple[la.Vector, ...]:
        return tuple(la.primitive_integer(orthogonal_complement(h).basis[0]) for h in self.hyperplanes)


@dataclass(frozen=True)
class IsotropicDatum:
    kind: str  # "line" | "plane"
    subspace: Subspace

    def __post_init__(self):
        want = {"line": 1, "plane": 2}.get(self.kind)
        if want is None:
            raise MalformedInputError(f"unknown isotropic kind {self.kind!r}")
        if self.subspace.dim != want:
            raise MalformedInputError(f"isotropic {self.kind} must have dimension {want}")
        if not self.subspace.is_totally_isotropic():
            raise MalformedInputError(f"isotropic {self.kind} is not totally isotropic")

    @property
    def generator(self) -> la.Vector:
        return la.primitive_integer(self.subspace.basis[0])


def _flats(arr: Arrangement) -> dict[Subspace, frozenset]:
    """All nonzero proper intersections of members, with the members containing each."""
    hs = arr.hyperplanes
    out: dict[Subspace, frozenset] = {}
    frontier = []
    for h in hs:
        if h not in out:
            out[h] = frozenset(i for i, g in enumerate(hs) if g.contains(h))
            frontier.append(h)
    while frontier:
        nxt = []
        for k in frontier:
            for h in hs:
                if h.contains(k):
                    continue
                m = subspace_intersect(k, h)
                if m.dim == 0 or m in out:
                    continue
                out[m] = frozenset(i for i, g in enumerate(hs) if g.contains(m))
                nxt.append(m)
        frontier = nxt
    return out


def _sorted_subspaces(subs: Iterable[Subspace]) -> list[Subspace]:
    return sorted(subs, key=lambda s: (-s.dim, s.basis))


def build_K1(arr: Arrangement) -> list[Subspace]:
    """Intersections of members whose orthogonal complement is positive definite."""
    out = []
    for k in _flats(arr):
        perp = orthogonal_complement(k)
        if perp.signature == (perp.dim, 0, 0):
            out.append(k)
    return _sorted_subspaces(out)


def K_J_plane(arr: Arrangement, j: IsotropicDatum) -> Subspace:
    """J^perp intersected with every member containing J."""
    if j.kind != "plane":
        raise MalformedInputError("K_J needs an isotropic plane")
    jp = orthogonal_complement(j.subspace)
    return intersect_all([jp] + [h for h in arr.hyperplanes if h.contains(j.subspace)])


# -- cone decompositions ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConeCell:
    """A relatively open cell of the decomposition of C_e, given by its sign vector."""

    J: IsotropicDatum
    generator_e: la.Vector
    sign_vector: tuple  # entries "+", "-", "0" over the distinct descended hyperplanes
    witness: la.Vector  # rational point of the cell, coordinates along the complement
    K_sigma: Subspace
    dim: int

    @property
    def is_chamber(self) -> bool:
        return "0" not in self.sign_vector

    def is_face_of(self, other: "ConeCell") -> bool:
        return self.sign_vector != other.sign_vector and all(
            a == "0" or a == b for a, b in zip(self.sign_vector, other.sign_vector)
        )

    def label(self) -> str:
        return "".join(self.sign_vector) or "C"


def K_sigma(cell: ConeCell) -> Subspace:
    return cell.K_sigma


@dataclass
class ConeDecomposition:
    """Chambers and lower-dimensional cells of C_e cut by the members through J."""

    J: IsotropicDatum
    e: la.Vector
    complement: tuple
    form: la.Matrix
    functionals: tuple  # descended functionals, one per distinct trace
    members: tuple  # hyperplane indices realizing each functional
    cone_witness: la.Vector
    cells: list = field(default_factory=list)

    @property
    def chambers(self) -> list[ConeCell]:
        return [c for c in self.cells if c.is_chamber]

    def __iter__(self):
        return iter(self.chambers)

    def __len__(self):
        return len(self.chambers)

    def face_pairs(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i, a in enumerate(self.cells)
            for j, b in enumerate(self.cells)
            if a.is_face_of(b)
        ]


def _qform(q: la.Matrix, x, y):
    return la.dot(x, la.matvec(q, y))


def _lorentz_frame(q: la.Matrix):
    """Exact congruence P q P^T = diag(d) plus the float scaling to unit Lorentz form."""
    d, p = congruence_diagonalize(q)
    neg = [i for i, x in enumerate(d) if x < 0]
    if len(neg) != 1 or any(x == 0 for x in d):
        raise MalformedInputError(f"form on J^perp/J is not Lorentzian (diagonal {list(map(str, d))})")
    return d, p, neg[0]


class _Feasibility:
    """Finds rational points y with q(y) < 0, q(w0, y) < 0 and prescribed strict signs."""

    def __init__(self, q: la.Matrix, w0: la.Vector, rng: random.Random):
        self.q = q
        self.w0 = w0
        self.rng = rng
        self.g = la.matvec(q, w0)  # component functional: g . y < 0

    def find(self, basis: list, funcs: list, signs: list) -> la.Vector | None:
        """Point y = sum z_i basis_i of the open cell, or None when it is empty."""
        q = self.q
        qz = tuple(tuple(_qform(q, a, b) for b in basis) for a in basis)
        lz = [tuple(la.dot(f, b) for b in basis) for f in funcs]
        gz = tuple(la.dot(self.g, b) for b in basis)
        sig = signature_of_gram(qz) if basis else (0, 0, 0)
        if sig[1] == 0:
            return None
        d, p, t = _lorentz_frame(qz)
        scale = np.array([abs(float(x)) ** 0.5 for x in d])
        pf = np.array([[float(x) for x in r] for r in p])
        # z = P^T x, x_i = x'_i / scale_i
        to_z = pf.T / scale  # z = to_z @ x'
        x0 = np.zeros(len(basis))
        x0[t] = 1.0
        tsign = -1.0 if float(np.array([float(x) for x in gz]) @ (to_z @ x0)) > 0 else 1.0

        # a few cheap samples catch the wide cells; the SOCP settles thin and empty ones
        for _ in range(8):
            y = self._verify(self._sample(to_z, t, tsign, len(basis)), basis, qz, lz, signs, gz)
            if y is not None:
                return y
        sol, certain = self._socp(to_z, t, tsign, lz, signs, gz)
        if sol is not None:
            y = self._verify(sol, basis, qz, lz, signs, gz)
            if y is not None:
                return y
        if certain:
            return None
        for _ in range(200):
            y = self._verify(self._sample(to_z, t, tsign, len(basis)), basis, qz, lz, signs, gz)
            if y is not None:
                return y
        return None

    def _socp(self, to_z, t, tsign, lz, signs, gz):
        """Maximize the common margin s of all strict inequalities.

        Returns (point or None, certain) where ``certain`` means the solver proved the
        margin is zero, so the open cell is empty.
        """
        import cvxpy as cp

        m = to_z.shape[1]
        x = cp.Variable(m)
        s = cp.Variable()
        rest = [i for i in range(m) if i != t]
        cons = [tsign * x[t] <= 1]
        if rest:
            cons.append(cp.norm(x[rest]) + s <= tsign * x[t])
        else:
            cons.append(s <= tsign * x[t])
        for f, sg in zip(lz, signs):
            fv = np.array([float(v) for v in f]) @ to_z
            nrm = float(np.linalg.norm(fv)) or 1.0
            cons.append(sg * (fv @ x) / nrm >= s)
        prob = cp.Problem(cp.Maximize(s), cons)
        try:
            prob.solve(solver=cp.CLARABEL)
        except Exception:  # noqa: BLE001 - any solver failure falls back to sampling
            try:
                prob.solve()
            except Exception:  # noqa: BLE001
                return None, False
        if prob.status == "infeasible":
            return None, True
        if prob.status not in ("optimal", "optimal_inaccurate") or s.value is None:
            return None, False
        if s.value <= 1e-9:
            return None, prob.status == "optimal"
        return to_z @ np.asarray(x.value, float), False

    def _sample(self, to_z, t, tsign, m):
        x = np.array([self.rng.uniform(-1, 1) for _ in range(m)])
        rest = [i for i in range(m) if i != t]
        nrm = float(np.linalg.norm(x[rest])) if rest else 0.0
        x[t] = tsign * (nrm + self.rng.uniform(0.01, 1.0))
        return to_z @ x

    @staticmethod
    def _verify(z, basis, qz, lz, signs, gz):
        zmax = float(np.max(np.abs(z))) or 1.0
        z = z / zmax
        # cheap float screen before exact rational checks
        qf = np.array([[float(v) for v in r] for r in qz])
        if float(z @ qf @ z) > 1e-12 or float(np.array([float(v) for v in gz]) @ z) > 1e-12:
            return None
        for f, sg in zip(lz, signs):
            if sg * float(np.array([float(v) for v in f]) @ z) < -1e-12:
                return None
        for den in (4, 16, 64, 256, 1024, 10**4, 10**6, 10**9):
            zr = tuple(Fraction(float(v)).limit_denominator(den) for v in z)
            if all(v == 0 for v in zr):
                continue
            if _qform(qz, zr, zr) >= 0 or la.dot(gz, zr) >= 0:
                continue
            if all((la.dot(f, zr) > 0) if sg > 0 else (la.dot(f, zr) < 0) for f, sg in zip(lz, signs)):
                common = 1
                for v in zr:
                    common = lcm(common, v.denominator)
                zi = tuple(v * common for v in zr)
                return tuple(
                    sum((c * b[i] for c, b in zip(zi, basis)), Fraction(0)) for i in range(len(basis[0]))
                )
        return None


def _default_cone_witness(q: la.Matrix) -> la.Vector:
    d, p, t = _lorentz_frame(q)
    return la.primitive_integer(p[t])


def _lift(decomp_e, complement, ys) -> list:
    d = len(decomp_e)
    out = [tuple(decomp_e)]
    for y in ys:
        out.append(tuple(sum((c * w[i] for c, w in zip(y, complement)), Fraction(0)) for i in range(d)))
    return out


def cone_decomposition(
    arr: Arrangement,
    J: IsotropicDatum,
    e: Sequence | None = None,
    cone_witness: Sequence | None = None,
    seed: int = 0,
) -> ConeDecomposition:
    """Cells (chambers and their faces) of the cone C_e cut by the members containing J.

    Coordinates on J^perp/J are taken along :func:`period.tube_complement`.  The
    component of {y . y < 0} is the one containing ``cone_witness`` (default: a
    canonical timelike vector).
    """
    from .period import tube_complement

    space = arr.space
    if J.kind != "line":
        raise MalformedInputError("cone decompositions are attached to isotropic lines")
    e = la.vec(e) if e is not None else J.generator
    if Subspace(space, [e]) != J.subspace:
        raise MalformedInputError("e does not generate J")
    complement = tube_complement(space, e)
    q = space.restricted_gram(complement)
    n = space.signature[0]
    if signature_of_gram(q) != (n - 1, 1, 0):
        raise MalformedInputError(f"J^perp/J has signature {signature_of_gram(q)}, expected {(n - 1, 1, 0)}")
    w0 = la.vec(cone_witness) if cone_witness is not None else _default_cone_witness(q)
    if len(w0) != len(complement) or _qform(q, w0, w0) >= 0:
        raise MalformedInputError("cone witness must satisfy y . y < 0")

    # descended functionals l(y) = (sum y_i w_i) . v, deduplicated up to scale
    funcs: list[la.Vector] = []
    members: list[list[int]] = []
    for idx, (h, v) in enumerate(zip(arr.hyperplanes, arr.normals)):
        if not h.contains_vector(e):
            continue
        ell = la.primitive_integer(tuple(space.dot(w, v) for w in complement))
        if ell in funcs:
            members[funcs.index(ell)].append(idx)
        else:
            funcs.append(ell)
            members.append([idx])

    m = len(complement)
    feas = _Feasibility(q, w0, random.Random(seed))
    full = [tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m)]

    def vanishing(z: frozenset) -> list:
        return la.nullspace([funcs[i] for i in sorted(z)], m) if z else full

    def closure(z: frozenset) -> frozenset:
        b = vanishing(z)
        return frozenset(i for i, f in enumerate(funcs) if all(la.dot(f, v) == 0 for v in b))

    def meets_cone(b) -> bool:
        if not b:
            return False
        return signature_of_gram(tuple(tuple(_qform(q, x, y) for y in b) for x in b))[1] > 0

    flats = [frozenset()]
    seen = {frozenset()}
    queue = [frozenset()]
    while queue:
        z = queue.pop(0)
        for i in range(len(funcs)):
            if i in z:
                continue
            z2 = closure(z | {i})
            if z2 in seen:
                continue
            seen.add(z2)
            if meets_cone(vanishing(z2)):
                flats.append(z2)
                queue.append(z2)

    cells: list[ConeCell] = []
    for z in flats:
        basis = vanishing(z)
        free = [i for i in range(len(funcs)) if i not in z]
        partial: list[tuple[list, la.Vector]] = []
        y = feas.find(basis, [], [])
        if y is None:
            continue
        partial = [([], y)]
        for i in free:
            nxt = []
            for signs, _ in partial:
                for sg in (1, -1):
                    cand = signs + [sg]
                    y = feas.find(basis, [funcs[j] for j in free[: len(cand)]], cand)
                    if y is not None:
                        nxt.append((cand, y))
            partial = nxt
        k_sigma = Subspace(space, _lift(e, complement, basis))
        for signs, y in partial:
            full_signs = []
            it = iter(signs)
            for i in range(len(funcs)):
                full_signs.append("0" if i in z else SIGN[next(it)])
            cells.append(ConeCell(J, e, tuple(full_signs), y, k_sigma, len(basis)))
    cells.sort(key=lambda c: (-c.dim, c.sign_vector))
    return ConeDecomposition(J, e, complement, q, tuple(funcs), tuple(tuple(x) for x in members), w0, cells)


def evaluate_signs(decomp: ConeDecomposition, y: Sequence) -> tuple:
    """Exact sign vector of a point of J^perp/J (complement coordinates)."""
    out = []
    for f in decomp.functionals:
        v = la.dot(f, y)
        out.append(SIGN[(v > 0) - (v < 0)])
    return tuple(out)


# -- stratum posets -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StratumIndex:
    tag: str  # Interior | K1 | K2 | Sigma (ball strata: Interior | K1' | K2')
    K: Subspace
    label: str
    group: str = ""
    cell: ConeCell | None = None

    @property
    def radical_dim(self) -> int:
        return radical(self.K).dim


@dataclass
class StratumPoset:
    nodes: list
    less: set  # all strict relations (i, j): node i < node j
    view: str = "faces"

    @property
    def cover_relations(self) -> list[tuple[int, int]]:
        covers = []
        for a, b in sorted(self.less):
            if not any((a, c) in self.less and (c, b) in self.less for c in range(len(self.nodes))):
                covers.append((a, b))
        return covers

    def count(self, tag: str) -> int:
        return sum(1 for n in self.nodes if n.tag == tag)

    def to_dot(self) -> str:
        lines = ["digraph strata {", "  rankdir=BT;"]
        for i, n in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{n.tag} {n.label} (dim K={n.K.dim})"];')
        for a, b in self.cover_relations:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines)


def _transitive_closure(n: int, rel: set) -> set:
    reach = [[(i, j) in rel for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    out = {(i, j) for i in range(n) for j in range(n) if reach[i][j]}
    if any(i == j for i, j in out):
        raise AssertionError("stratum order has a cycle")
    return out


def _basis_label(s: Subspace) -> str:
    return "[" + ", ".join("(" + ",".join(la.fmt(x) for x in v) + ")" for v in s.basis) + "]"


def strata_poset(
    arr: Arrangement,
    isotropics: Sequence[IsotropicDatum] = (),
    view: str = "faces",
    seed: int = 0,
    cone_witnesses: dict | None = None,
) -> StratumPoset:
    """Interior, K1, one K_J per plane and the Sigma_J cells per line, ordered by inclusion.

    ``view="faces"`` keeps every cell of each Sigma_J (ordered by the face relation);
    ``view="quotient"`` merges cells of one Sigma_J with equal K_sigma.
    """
    if view not in ("faces", "quotient"):
        raise MalformedInputError("view must be 'faces' or 'quotient'")
    space = arr.space
    for iso in isotropics:
        if iso.subspace.ambient != space:
            raise DimensionMismatchError("isotropic datum lives in a different space")
    nodes = [StratumIndex("Interior", space.zero(), "H+")]
    for k in build_K1(arr):
        nodes.append(StratumIndex("K1", k, _basis_label(orthogonal_complement(k))))
    for n, iso in enumerate(isotropics):
        if iso.kind == "plane":
            nodes.append(StratumIndex("K2", K_J_plane(arr, iso), f"J{n}", f"J{n}"))
    for n, iso in enumerate(isotropics):
        if iso.kind != "line":
            continue
        wit = (cone_witnesses or {}).get(n)
        decomp = cone_decomposition(arr, iso, cone_witness=wit, seed=seed)
        group = f"J{n}"
        if view == "faces":
            for c in decomp.cells:
                nodes.append(StratumIndex("Sigma", c.K_sigma, f"{group}:{c.label()}", group, c))
        else:
            by_k: dict[Subspace, list[ConeCell]] = {}
            for c in decomp.cells:
                by_k.setdefault(c.K_sigma, []).append(c)
            for k, cs in by_k.items():
                label = f"{group}:" + "|".join(c.label() for c in cs)
                nodes.append(StratumIndex("Sigma", k, label, group, cs[0]))

    rel = set()
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if i == j:
                continue
            if view == "faces" and a.tag == b.tag == "Sigma" and a.group == b.group:
                if a.cell.is_face_of(b.cell):
                    rel.add((i, j))
            elif b.K.contains(a.K) and a.K != b.K:
                rel.add((i, j))
    return StratumPoset(nodes, _transitive_closure(len(nodes), rel), view)


# -- ball quotient strata ------------------------------------------------------------------


def _orbit_span(space: QuadraticSpace, rho: la.Matrix, v: la.Vector, l: int) -> Subspace:
    vecs, cur = [], v
    for _ in range(l):
        vecs.append(cur)
        cur = la.matvec(rho, cur)
    return Subspace(space, vecs)


def ball_strata(
    eig: EigenspaceData,
    normals: Sequence[Sequence] = (),
    lines: Sequence[tuple[Sequence, Sequence]] = (),
) -> StratumPoset:
    """Self-indexed strata K'1 and K'2 for a ball quotient, in the rational model of H_chi.

    A member of H' is H_chi intersected with v^perp for a rational v; its rational
    model is R cap (rho-orbit of v)^perp with R the real model of H_chi.  A line J'
    is spanned by a + b zeta (a, b rational), and J = span_Q{a, b} is its rational hull.
    """
    from .cyclotomic import CyclotomicElement

    space, rho, l = eig.space, eig.rho, eig.l
    r = eig.real_model()
    members = []
    for v in normals:
        v = la.vec(v)
        if len(v) != space.dim:
            raise DimensionMismatchError("normal has the wrong length")
        w = subspace_intersect(r, orthogonal_complement(_orbit_span(space, rho, v, l)))
        if w == r:
            raise MalformedInputError("normal is orthogonal to H_chi; it cuts out no hyperplane")
        if w not in members:
            members.append(w)

    def hyperbolic(k: Subspace) -> bool:
        p, q, z = k.signature
        return q == 2 and z == 0

    flats: list[Subspace] = list(members)
    frontier = list(members)
    while frontier:
        nxt = []
        for k in frontier:
            for h in members:
                m = subspace_intersect(k, h)
                if m.dim and m not in flats:
                    flats.append(m)
                    nxt.append(m)
        frontier = nxt
    k1 = [k for k in _sorted_subspaces(flats) if hyperbolic(k)]

    nodes = [StratumIndex("Interior", space.zero(), "ball")]
    nodes += [StratumIndex("K1'", k, _basis_label(k)) for k in k1]
    z = CyclotomicElement.zeta(l)
    for n, (a, b) in enumerate(lines):
        a, b = la.vec(a), la.vec(b)
        x = tuple(CyclotomicElement(l, ai, bi) for ai, bi in zip(a, b))
        if all(c == 0 for c in x):
            raise MalformedInputError("line generator is zero")
        rx = tuple(sum((CyclotomicElement(l, rho[i][j]) * x[j] for j in range(space.dim)), CyclotomicElement(l, 0)) for i in range(space.dim))
        if rx != tuple(z * c for c in x):
            raise MalformedInputError(f"line {n} is not in H_chi")
        if space.dot(x, [c.conjugate() for c in x]) != 0:
            raise MalformedInputError(f"line {n} is not isotropic for the hermitian form")
        j = Subspace(space, [a, b])
        if j.dim != 2 or not j.is_totally_isotropic():
            raise MalformedInputError(f"J' + conj(J') for line {n} is not a rational isotropic plane")
        containing = [h for h in members if h.contains(j)]
        k = intersect_all([subspace_intersect(orthogonal_complement(j), r)] + containing)
        nodes.append(StratumIndex("K2'", k, f"J'{n}", f"J'{n}"))

    rel = {
        (i, jx)
        for i, p in enumerate(nodes)
        for jx, q in enumerate(nodes)
        if i != jx and q.K.contains(p.K) and p.K != q.K
    }
    return StratumPoset(nodes, _transitive_closure(len(nodes), rel), "ball")


def type3_nodes(poset: StratumPoset) -> list[int]:
    """Indices of nodes whose K has a one-dimensional radical."""
    return [i for i, n in enumerate(poset.nodes) if n.radical_dim == 1]


# -- isotropic enumeration -------------------------------------------------------------------


def enumerate_isotropic(space: QuadraticSpace, height_bound: int) -> list[IsotropicDatum]:
    """Isotropic lines and planes spanned by primitive integer vectors of height <= bound."""
    if height_bound < 1:
        raise MalformedInputError("height bound must be >= 1")

    rng = range(-height_bound, height_bound + 1)
    vecs = []
    for c in itertools.product(rng, repeat=space.dim):
        lead = next((x for x in c if x != 0), 0)
        if lead <= 0:
            continue
        g = 0
        for x in c:
            g = gcd(g, x)
        if g != 1:
            continue
        v = la.vec(c)
        if space.dot(v, v) == 0:
            vecs.append(v)
    out = [IsotropicDatum("line", Subspace(space, [v])) for v in vecs]
    planes: list[Subspace] = []
    for a, b in itertools.combinations(vecs, 2):
        if space.dot(a, b) == 0:
            p = Subspace(space, [a, b])
            if p not in planes:
                planes.append(p)
    out += [IsotropicDatum("plane", p) for p in planes]
    return out


# -- hypothesis checkers -------------------------------------------------------------------------


@dataclass
class HypothesisReport:
    name: str
    passed: bool
    checks: dict
    failures: list
    info: dict

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures,
            "info": self.info,
        }


def _nonpositive_vector(k: Subspace) -> la.Vector:
    """A nonzero vector of K with v . v <= 0 (K must not be positive definite)."""
    d, p = congruence_diagonalize(k.gram)
    i = next(i for i, x in enumerate(d) if x <= 0)
    coeffs = p[i]
    return tuple(sum((c * b[t] for c, b in zip(coeffs, k.basis)), Fraction(0)) for t in range(k.ambient.dim))


def _two_dim_intersections(arr: Arrangement) -> list[Subspace]:
    return _sorted_subspaces(k for k in _flats(arr) if k.dim == 2)


def codim2_criterion(
    arr: Arrangement, isotropics: Sequence[IsotropicDatum] = (), seed: int = 0
) -> HypothesisReport:
    """dim H >= 5 and no 2-dimensional intersection of members is negative semidefinite.

    Informational: 2-dimensional intersections that are merely not positive definite,
    and Sigma_J cells whose K_sigma is 2-dimensional (one-dimensional cells).
    """
    space = arr.space
    failures = []
    dim_ok = space.dim >= 5
    if not dim_ok:
        failures.append({"reason": "dim H < 5", "dim": space.dim})
    not_pd = []
    nsd_ok = True
    for k in _two_dim_intersections(arr):
        sig = k.signature
        if sig[0] == 2:
            continue
        w = _nonpositive_vector(k)
        entry = {"subspace": k.basis, "signature": sig, "witness": w}
        not_pd.append(entry)
        if sig[0] == 0:
            nsd_ok = False
            failures.append({"reason": "negative semidefinite 2-dimensional intersection", **entry})
    small_cells = []
    for n, iso in enumerate(isotropics):
        if iso.kind != "line":
            continue
        for c in cone_decomposition(arr, iso, seed=seed).cells:
            if c.K_sigma.dim <= 2:
                small_cells.append({"line": n, "cell": c.label(), "dim_K_sigma": c.K_sigma.dim})
    checks = {"dim_at_least_5": dim_ok, "no_negative_semidefinite_2d_intersection": nsd_ok}
    info = {"not_positive_definite_2d": not_pd, "sigma_cells_with_dim_K_le_2": small_cells}
    return HypothesisReport("codim2", all(checks.values()), checks, failures, info)


def invar_hypothesis(arr: Arrangement) -> HypothesisReport:
    """Every non-isotropic 2-dimensional intersection of members takes a positive value."""
    failures = []
    checked = 0
    for k in _two_dim_intersections(arr):
        if k.is_totally_isotropic():
            continue
        checked += 1
        if k.signature[0] == 0:
            failures.append({"subspace": k.basis, "signature": k.signature, "witness": _nonpositive_vector(k)})
    return HypothesisReport(
        "invar", not failures, {"positive_on_nonisotropic_2d": not failures}, failures, {"checked": checked}
    )

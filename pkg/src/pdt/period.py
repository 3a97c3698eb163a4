"""Points of the period domain, untwisting of sampled period maps, limit lines and transvections.

Complex vectors come in two modes.  Exact vectors are tuples of :class:`GaussQ`
(rational and integer entries are promoted); numeric vectors are complex numpy
arrays.  Every function keeps the mode of its inputs, so identities can be
checked with zero tolerance on Gaussian-rational data.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import (
    ClassificationError,
    InconsistentSamplesError,
    MalformedInputError,
    NoConvergenceError,
    OutsideChartError,
)
from .gauss import GaussQ
from .monodromy import MonodromyOperator, NilpotentData, classify_nilpotent, log_unipotent, one_param
from .qspace import QuadraticSpace, Subspace, classify_subspace, perp_of_vectors

EPS = 1e-9
EXTRAPOLATION_TOL = 1e-6


# -- modes --------------------------------------------------------------------


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (GaussQ, Rational)) and not isinstance(x, bool)


def is_exact(v) -> bool:
    return not isinstance(v, np.ndarray) and all(_is_exact_scalar(x) for x in v)


def as_cvec(v):
    """Normalize a vector to exact (tuple of GaussQ) or numeric (complex ndarray) mode."""
    if isinstance(v, np.ndarray):
        return v.astype(complex)
    v = list(v)
    if not v:
        raise MalformedInputError("empty vector")
    if all(_is_exact_scalar(x) for x in v):
        return tuple(x if isinstance(x, GaussQ) else GaussQ(x) for x in v)
    return np.array([complex(x) for x in v], dtype=complex)


def _gram_f(space: QuadraticSpace) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in space.gram])


def conj(v):
    if isinstance(v, np.ndarray):
        return v.conj()
    return tuple(x.conjugate() for x in v)


def real_part(v):
    if isinstance(v, np.ndarray):
        return v.real
    return tuple(x.re for x in v)


def imag_part(v):
    if isinstance(v, np.ndarray):
        return v.imag
    return tuple(x.im for x in v)


def bil(space: QuadraticSpace, a, b):
    """Complex-bilinear extension a . b (no conjugation)."""
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return complex(np.asarray(a, dtype=complex) @ _gram_f(space) @ np.asarray(b, dtype=complex))
    z = space.dot(a, b)
    return z if isinstance(z, GaussQ) else GaussQ(z)


def herm(space: QuadraticSpace, a):
    """a . conj(a), a real number (Fraction in exact mode)."""
    z = bil(space, a, conj(a))
    return z.re if isinstance(z, GaussQ) else (z.real if isinstance(z, complex) else Fraction(z))


def _euclid2(v) -> float:
    v = as_cvec(v)
    if isinstance(v, np.ndarray):
        return float(np.vdot(v, v).real)
    return float(sum(x.abs2() for x in v))


def _imag(z):
    if isinstance(z, GaussQ):
        return z.im
    if isinstance(z, complex):
        return z.imag
    return Fraction(0)


def _abs2(z):
    if isinstance(z, GaussQ):
        return z.abs2()
    return abs(z) ** 2


# -- the domain -----------------------------------------------------------------


def hodge_norm(space: QuadraticSpace, alpha):
    """-alpha . conj(alpha); positive on the domain."""
    return -herm(space, as_cvec(alpha))


def same_component(space: QuadraticSpace, alpha, beta, tol: float = EPS) -> bool:
    """Sign of det [B(x_i, y_j)] for the frames (Re alpha, Im alpha), (Re beta, Im beta).

    On the domain both frames span negative definite planes, so the sign of the
    pairing determinant is the relative orientation of the two planes.
    """
    alpha, beta = as_cvec(alpha), as_cvec(beta)
    fa = (real_part(alpha), imag_part(alpha))
    fb = (real_part(beta), imag_part(beta))
    exact = is_exact(alpha) and is_exact(beta)

    def pair(x, y):
        if exact:
            return space.dot(x, y)
        return float(np.asarray(x, float) @ _gram_f(space) @ np.asarray(y, float))

    for frame in (fa, fb):
        g = [[pair(x, y) for y in frame] for x in frame]
        dg = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        scale = _euclid2(alpha if frame is fa else beta) ** 2
        if (dg == 0) if exact else abs(dg) <= tol * max(scale, 1e-300):
            raise MalformedInputError("degenerate frame: real and imaginary parts are dependent")
    m = [[pair(x, y) for y in fb] for x in fa]
    return m[0][0] * m[1][1] - m[0][1] * m[1][0] > 0


@dataclass(frozen=True)
class DomainWitness:
    """A chosen point of H_+, fixing which component of the domain is meant."""

    space: QuadraticSpace
    basepoint: tuple | np.ndarray

    def __post_init__(self):
        bp = as_cvec(self.basepoint)
        object.__setattr__(self, "basepoint", bp)
        if not _in_cone(self.space, bp, EPS):
            raise MalformedInputError("witness does not satisfy a.a = 0 and a.conj(a) < 0")


def _in_cone(space: QuadraticSpace, alpha, tol: float) -> bool:
    n2 = _euclid2(alpha)
    aa = bil(space, alpha, alpha)
    if is_exact(alpha):
        iso = aa == 0
    else:
        iso = abs(aa) < tol * n2
    return iso and herm(space, alpha) < 0


def in_domain(alpha, witness: DomainWitness, tol: float = EPS) -> bool:
    alpha = as_cvec(alpha)
    if _euclid2(alpha) == 0:
        raise MalformedInputError("zero vector")
    space = witness.space
    if not _in_cone(space, alpha, tol):
        return False
    return same_component(space, alpha, witness.basepoint, tol)


def oriented_plane_sign(space: QuadraticSpace, alpha, e0, e1):
    """Im((alpha . e0)(conj(alpha) . e1)); its sign separates the components."""
    alpha = as_cvec(alpha)
    return _imag(bil(space, alpha, la.vec(e0)) * bil(space, conj(alpha), la.vec(e1)))


# -- tube chart -----------------------------------------------------------------


def tube_complement(space: QuadraticSpace, e: Sequence) -> tuple[la.Vector, ...]:
    """Canonical complement of J = Qe inside J^perp (basis vectors of e^perp, one dropped)."""
    e = la.vec(e)
    if space.dot(e, e) != 0 or all(x == 0 for x in e):
        raise MalformedInputError("e must be a nonzero isotropic vector")
    jp = perp_of_vectors(space, [e])
    chosen: list = [e]
    out = []
    for b in jp.basis:
        if la.rank(chosen + [b]) > len(chosen):
            chosen.append(b)
            out.append(b)
    return tuple(out)


def tube_form(space: QuadraticSpace, complement: Sequence[Sequence]) -> la.Matrix:
    """Gram matrix of J^perp/J in the coordinates of the complement."""
    return space.restricted_gram([la.vec(w) for w in complement])


def tube_coords(space: QuadraticSpace, alpha, e: Sequence, complement=None, tol: float = EPS):
    """p_e(alpha) = Im(alpha / (alpha . e)) as coordinates along a complement of J in J^perp."""
    alpha = as_cvec(alpha)
    e = la.vec(e)
    if complement is None:
        complement = tube_complement(space, e)
    complement = [la.vec(w) for w in complement]
    ae = bil(space, alpha, e)
    if _abs2(ae) == 0 or (not is_exact(alpha) and abs(ae) <= tol * _euclid2(alpha) ** 0.5):
        raise OutsideChartError("alpha . e = 0: alpha lies in J^perp")
    if is_exact(alpha):
        p = imag_part(tuple(x / ae for x in alpha))
        cols = la.transpose([e] + complement)
        c = la.solve(cols, p)
        if c is None:
            raise AssertionError("p_e(alpha) is not in J^perp")
        return tuple(c[1:])
    p = (alpha / ae).imag
    basis = np.array([[float(x) for x in v] for v in [e] + complement]).T
    c, *_ = np.linalg.lstsq(basis, p, rcond=None)
    return c[1:]


def in_tube_cone(space: QuadraticSpace, y, complement) -> bool:
    q = tube_form(space, complement)
    if all(_is_exact_scalar(x) for x in y) and not isinstance(y, np.ndarray):
        return la.dot(y, la.matvec(q, y)) < 0
    qf = np.array([[float(x) for x in r] for r in q])
    y = np.asarray(y, float)
    return float(y @ qf @ y) < 0


# -- transvections --------------------------------------------------------------


def _exact_matrix(rows) -> tuple:
    return tuple(tuple(x if isinstance(x, GaussQ) else GaussQ(x) for x in r) for r in rows)


def apply(m, v):
    """Matrix-vector product in the mode of the inputs."""
    if isinstance(m, np.ndarray) or isinstance(v, np.ndarray):
        return np.asarray(m, dtype=complex) @ np.asarray(v, dtype=complex)
    return tuple(sum((x * y for x, y in zip(row, v)), GaussQ(0)) for row in m)


def compose(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.asarray(a, dtype=complex) @ np.asarray(b, dtype=complex)
    bt = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), GaussQ(0)) for col in bt) for row in a)


def _scalar(x):
    if _is_exact_scalar(x):
        return x if isinstance(x, GaussQ) else GaussQ(x)
    return complex(x)


def _build(space: QuadraticSpace, entry, exact: bool):
    d = space.dim
    rows = [[entry(i, j) for j in range(d)] for i in range(d)]
    if exact:
        return _exact_matrix(rows)
    return np.array(rows, dtype=complex)


def psi_tau(space: QuadraticSpace, e0: Sequence, e1: Sequence, tau):
    """alpha -> alpha + tau((alpha . e0) e1 - (alpha . e1) e0) for an isotropic plane span{e0, e1}."""
    e0, e1 = la.vec(e0), la.vec(e1)
    if space.dot(e0, e0) or space.dot(e1, e1) or space.dot(e0, e1):
        raise MalformedInputError("e0, e1 must span a totally isotropic plane")
    if la.rank([e0, e1]) != 2:
        raise MalformedInputError("e0, e1 are linearly dependent")
    tau = _scalar(tau)
    g0, g1 = la.matvec(space.gram, e0), la.matvec(space.gram, e1)

    def entry(i, j):
        return (1 if i == j else 0) + tau * (e1[i] * g0[j] - e0[i] * g1[j])

    return _build(space, entry, isinstance(tau, GaussQ))


def psi_ef(space: QuadraticSpace, e: Sequence, f):
    """alpha -> alpha + (alpha . e) f - (alpha . f) e - 1/2 (f . f)(alpha . e) e."""
    e = la.vec(e)
    if space.dot(e, e) != 0:
        raise MalformedInputError("e must be isotropic")
    f = as_cvec(f)
    ef = bil(space, e, f)
    exact = is_exact(f)
    if (ef != 0) if exact else abs(ef) > EPS * max(_euclid2(f), 1.0) ** 0.5:
        raise MalformedInputError("f must be orthogonal to e")
    ge = la.matvec(space.gram, e)
    if exact:
        gf = [sum((space.gram[i][k] * f[k] for k in range(space.dim)), GaussQ(0)) for i in range(space.dim)]
    else:
        gf = _gram_f(space) @ f
    c = bil(space, f, f) / 2

    def entry(i, j):
        return (1 if i == j else 0) + f[i] * ge[j] - e[i] * gf[j] - c * e[i] * ge[j]

    return _build(space, entry, exact)


def p_e(space: QuadraticSpace, alpha, e: Sequence):
    """Im(alpha / (alpha . e)) as a vector of H (lies in e^perp)."""
    alpha = as_cvec(alpha)
    ae = bil(space, alpha, la.vec(e))
    if _abs2(ae) == 0:
        raise OutsideChartError("alpha . e = 0")
    if is_exact(alpha):
        return imag_part(tuple(x / ae for x in alpha))
    return (alpha / ae).imag


def psi_tau_norm_rhs(space: QuadraticSpace, alpha, e0, e1, tau):
    """alpha . conj(alpha) - 4 Im(tau) Im((alpha . e0)(conj(alpha) . e1))."""
    alpha = as_cvec(alpha)
    return herm(space, alpha) - 4 * _imag(_scalar(tau)) * oriented_plane_sign(space, alpha, e0, e1)


def psi_ef_norm_rhs(space: QuadraticSpace, alpha, e, f):
    """alpha . conj(alpha) + 4|alpha . e|^2 (p_e(alpha) . Im f + 1/2 Im f . Im f)."""
    alpha, f = as_cvec(alpha), as_cvec(f)
    e = la.vec(e)
    pe = p_e(space, alpha, e)
    imf = imag_part(f)
    if is_exact(alpha) and is_exact(f):
        inner = space.dot(pe, imf) + space.dot(imf, imf) / 2
    else:
        g = _gram_f(space)
        pe, imf = np.asarray(pe, float), np.asarray(imf, float)
        inner = float(pe @ g @ imf + 0.5 * imf @ g @ imf)
    return herm(space, alpha) + 4 * _abs2(bil(space, alpha, e)) * inner


# -- sampled period maps ----------------------------------------------------------


@dataclass(frozen=True)
class PeriodSampleSet:
    """Samples (w, alpha(w)) of a lifted period map with P(w + 1) = T P(w)."""

    monodromy: MonodromyOperator
    samples: tuple = field(default=())

    def __post_init__(self):
        clean = []
        for w, alpha in self.samples:
            w = complex(w)
            if w.imag <= 0:
                raise MalformedInputError(f"sample w = {w} is not in the upper half-plane")
            a = np.asarray([complex(x) for x in alpha], dtype=complex)
            if a.shape != (self.monodromy.space.dim,):
                raise MalformedInputError("sample vector has the wrong length")
            clean.append((w, a))
        object.__setattr__(self, "samples", tuple(clean))

    @property
    def space(self) -> QuadraticSpace:
        return self.monodromy.space


def _parallel(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return na == nb
    proj = np.vdot(b, a) / np.vdot(b, b)
    return float(np.linalg.norm(a - proj * b)) <= tol * na


def _one_param_f(nd: NilpotentData, w: complex) -> np.ndarray:
    m = one_param(nd, w)
    return np.array([[complex(x) for x in r] for r in m], dtype=complex)


def untwist(
    ps: PeriodSampleSet,
    nd: NilpotentData | None = None,
    tol: float = EPS,
    check_domain: bool = True,
) -> list[tuple[complex, np.ndarray]]:
    """(s, exp(-wN) alpha(w)) with s = exp(2 pi i w); checks single-valuedness projectively."""
    space = ps.space
    if nd is None:
        nd = classify_nilpotent(space, log_unipotent(ps.monodromy).N)
    out = []
    for w, alpha in ps.samples:
        if check_domain and not _in_cone(space, alpha, max(tol, 1e-12)):
            raise InconsistentSamplesError(f"sample at w = {w} is not in the isotropic negative cone")
        s = cmath.exp(2j * cmath.pi * w)
        out.append((s, _one_param_f(nd, -w) @ alpha))
    for i in range(len(out)):
        for j in range(i):
            si, sj = out[i][0], out[j][0]
            if abs(si - sj) <= tol * max(1.0, abs(si)) and not _parallel(out[i][1], out[j][1], max(tol, 1e-7)):
                raise InconsistentSamplesError(
                    f"samples {j} and {i} have equal s but different untwisted lines (P(w + 1) != T P(w))"
                )
    return out


@dataclass(frozen=True)
class LimitLine:
    vector: np.ndarray
    residual: float
    degree: int
    samples: int


def normalize_line(v: np.ndarray) -> np.ndarray:
    """Unit Euclidean length, first non-negligible coordinate on the positive real axis."""
    v = np.asarray(v, dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise MalformedInputError("zero vector has no line")
    v = v / n
    k = next(i for i in range(len(v)) if abs(v[i]) > 1e-8)
    return v * (abs(v[k]) / v[k])


def limit_line(
    ps: PeriodSampleSet,
    nd: NilpotentData | None = None,
    degree: int = 3,
    tol: float = EXTRAPOLATION_TOL,
    check_domain: bool = True,
) -> LimitLine:
    """Extrapolate the untwisted samples to s = 0 by a least-squares polynomial fit.

    Each untwisted vector is first put in the affine chart of its dominant
    coordinate so that the fitted quantity is holomorphic in s even when the
    samples are arbitrary representatives of their lines.
    """
    pts = untwist(ps, nd, check_domain=check_domain)
    if not pts:
        raise NoConvergenceError("no samples", {"samples": 0})
    s = np.array([p[0] for p in pts])
    phi = np.array([p[1] for p in pts])
    ref = phi[int(np.argmin(np.abs(s)))]
    k = int(np.argmax(np.abs(ref)))
    if np.any(np.abs(phi[:, k]) == 0):
        raise NoConvergenceError("chart coordinate vanishes on a sample", {"chart": k})
    chart = phi / phi[:, k : k + 1]

    deg = min(degree, len(pts) - 1)
    scale = float(np.max(np.abs(s))) or 1.0
    x = s / scale
    vander = np.vander(x, deg + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(vander, chart, rcond=None)
    fitted = vander @ coef
    resid = float(np.max(np.linalg.norm(fitted - chart, axis=1)) / max(np.max(np.linalg.norm(chart, axis=1)), 1e-300))
    diag = {"residual": resid, "degree": deg, "samples": len(pts), "chart_coordinate": k}
    if not np.isfinite(resid) or resid > tol:
        raise NoConvergenceError(f"extrapolation residual {resid:.3e} exceeds {tol:.1e}", diag)
    return LimitLine(normalize_line(coef[0]), resid, deg, len(pts))


def accumulation_line(nd: NilpotentData, f_lim) -> np.ndarray:
    """N^k F_lim for the largest k with N^k F_lim != 0: where the lines P(w) accumulate as Im w grows."""
    n = np.array([[float(x) for x in r] for r in nd.N])
    v = np.asarray(f_lim, dtype=complex)
    scale = np.linalg.norm(v)
    cur = v
    for _ in range(2):
        nxt = n @ cur
        if np.linalg.norm(nxt) <= 1e-12 * scale * max(1.0, np.abs(n).max()):
            break
        cur = nxt
    return normalize_line(cur)


def check_limit_orthogonality(space: QuadraticSpace, f_line, v: Subspace, tol: float = 1e-8) -> dict:
    """max over the basis of V of |v . F| / |F|, with pass/fail against tol."""
    f = np.asarray(as_cvec(f_line), dtype=complex) if not isinstance(f_line, np.ndarray) else f_line
    norm = float(np.linalg.norm(f))
    if norm == 0:
        raise MalformedInputError("F is the zero vector")
    g = _gram_f(space)
    ratios = []
    for b in v.basis:
        bv = np.array([float(x) for x in b])
        ratios.append(float(abs(bv @ g @ f)) / (norm * float(np.linalg.norm(bv))))
    worst = max(ratios, default=0.0)
    return {"max_ratio": worst, "ratios": ratios, "passed": worst <= tol, "tol": tol}


# -- limit mixed Hodge structure on V* ------------------------------------------------


@dataclass(frozen=True)
class LimitMHS:
    tag: str
    radical: Subspace
    weights: dict
    f_on_radical: bool
    f_required_on_radical: bool

    @property
    def consistent(self) -> bool:
        return self.f_on_radical or not self.f_required_on_radical


def limit_mhs(v: Subspace, f) -> LimitMHS:
    """Weights on (V/V0)* and V0* and whether the line F restricts nontrivially to V0.

    F is given by a vector of H acting on V through the form.  (V/V0)* has weight 0;
    V0* is pure of weight 3 - dim V0, so a line F inside it has weight 1 (dim V0 = 2)
    or 2 (dim V0 = 1), in line with type = weight + 1.
    """
    try:
        cls = classify_subspace(v)
    except ClassificationError as exc:
        raise ClassificationError(f"V must be positive semidefinite: {exc}") from exc
    v0 = cls.radical
    f = as_cvec(f)
    vals = [bil(v.ambient, la.vec(b), f) for b in v0.basis]
    if is_exact(f):
        on_radical = any(x != 0 for x in vals)
    else:
        on_radical = any(abs(x) > EPS * _euclid2(f) ** 0.5 for x in vals)
    weights = {"(V/V0)*": 0}
    if v0.dim:
        weights["V0*"] = 3 - v0.dim
    return LimitMHS(cls.tag.value, v0, weights, on_radical, v0.dim > 0)

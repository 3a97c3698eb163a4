"""Finite classifiers for degenerations and the worked mu_4 example checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import MalformedInputError, NotABoundaryPairError
from .qspace import QuadraticSpace, eigenspace_chi


# -- boundary pairs ------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPairDatum:
    weight_of_F: int
    context: str = ""


def boundary_pair_type(d: BoundaryPairDatum | int) -> int:
    """The type of any smoothing of a boundary pair: w(F) + 1."""
    w = d.weight_of_F if isinstance(d, BoundaryPairDatum) else d
    if isinstance(w, bool) or not isinstance(w, int) or w not in (0, 1, 2):
        raise NotABoundaryPairError(f"w(F) = {w!r} is not in {{0, 1, 2}}")
    return w + 1


# -- singularity labels ------------------------------------------------------------------


class SingularityKind(str, Enum):
    ADE = "ADE"
    SIMPLE_ELLIPTIC = "SimpleElliptic"
    CUSP = "Cusp"
    OTHER = "Other"


@dataclass(frozen=True)
class SingularityLabel:
    kind: SingularityKind
    detail: str = ""  # ADE subtype or simple-elliptic degree

    @classmethod
    def parse(cls, text: str) -> "SingularityLabel":
        t = text.strip()
        if not t:
            raise MalformedInputError("empty singularity label")
        head, _, tail = t.partition(":")
        if head == "SimpleElliptic":
            if tail and not tail.isdigit():
                raise MalformedInputError(f"simple-elliptic degree must be an integer: {text!r}")
            return cls(SingularityKind.SIMPLE_ELLIPTIC, tail)
        if head == "Cusp":
            return cls(SingularityKind.CUSP, tail)
        if head == "Other":
            return cls(SingularityKind.OTHER, tail)
        if _is_ade(t):
            return cls(SingularityKind.ADE, t)
        raise MalformedInputError(f"unknown singularity label {text!r}")

    def __str__(self) -> str:
        if self.kind == SingularityKind.ADE:
            return self.detail
        return f"{self.kind.value}:{self.detail}" if self.detail else self.kind.value


def _is_ade(t: str) -> bool:
    if len(t) < 2 or not t[1:].isdigit():
        return False
    k = int(t[1:])
    return (t[0] == "A" and k >= 1) or (t[0] == "D" and k >= 4) or (t[0] == "E" and k in (6, 7, 8))


class DegenerationType(str, Enum):
    FINITE = "FiniteMonodromy"
    TYPE2 = "Type2"
    TYPE3 = "Type3"
    UNKNOWN = "Unknown"


def k3_degeneration_type(sings: Sequence[SingularityLabel | str]) -> DegenerationType:
    """Monodromy type of a quartic degeneration read off its singularities.

    Only rational double points: finite monodromy.  A cusp gives type 3, otherwise a
    simple-elliptic point gives type 2.  An unclassified label blocks the answer.
    """
    labels = [s if isinstance(s, SingularityLabel) else SingularityLabel.parse(s) for s in sings]
    kinds = {s.kind for s in labels}
    if SingularityKind.OTHER in kinds:
        return DegenerationType.UNKNOWN
    if SingularityKind.CUSP in kinds:
        return DegenerationType.TYPE3
    if SingularityKind.SIMPLE_ELLIPTIC in kinds:
        return DegenerationType.TYPE2
    return DegenerationType.FINITE


# -- Kulikov models ------------------------------------------------------------------------


class Component(str, Enum):
    K3 = "K3"
    RATIONAL = "Rational"
    ELLIPTIC_RULED = "EllipticRuled"


class DualComplex(str, Enum):
    POINT = "Point"
    INTERVAL = "Interval"
    SPHERE = "TriangulatedTwoSphere"


class DoubleCurves(str, Enum):
    NONE = "None"
    GENUS_ONE = "SmoothGenusOne"
    RATIONAL_CYCLES = "RationalCycles"


@dataclass(frozen=True)
class KulikovFiber:
    components: tuple
    dual_complex: DualComplex
    double_curves: DoubleCurves

    @classmethod
    def build(cls, components: Sequence[str], dual_complex: str, double_curves: str) -> "KulikovFiber":
        try:
            comps = tuple(Component(c) for c in components)
            dc = DualComplex(dual_complex)
            curves = DoubleCurves(double_curves)
        except ValueError as exc:
            raise MalformedInputError(str(exc)) from exc
        return cls(comps, dc, curves)

    def violations(self) -> list[str]:
        c, out = self.components, []
        if not c:
            out.append("at least one component is required")
        if self.dual_complex == DualComplex.POINT:
            if c != (Component.K3,):
                out.append("Point: exactly one component, a K3 surface")
            if self.double_curves != DoubleCurves.NONE:
                out.append("Point: no double curves")
        elif self.dual_complex == DualComplex.INTERVAL:
            if len(c) < 2:
                out.append("Interval: a chain of at least two surfaces")
            elif c[0] != Component.RATIONAL or c[-1] != Component.RATIONAL:
                out.append("Interval: the end components are rational")
            if any(x != Component.ELLIPTIC_RULED for x in c[1:-1]):
                out.append("Interval: the middle components are elliptic ruled")
            if self.double_curves != DoubleCurves.GENUS_ONE:
                out.append("Interval: double curves are smooth genus one curves")
        else:
            if any(x != Component.RATIONAL for x in c):
                out.append("TriangulatedTwoSphere: all components are rational")
            if self.double_curves != DoubleCurves.RATIONAL_CYCLES:
                out.append("TriangulatedTwoSphere: double curves form cycles of rational curves")
        return out


def kulikov_classify(f: KulikovFiber) -> int:
    bad = f.violations()
    if bad:
        raise MalformedInputError("inconsistent Kulikov fiber: " + "; ".join(bad))
    return {DualComplex.POINT: 1, DualComplex.INTERVAL: 2, DualComplex.SPHERE: 3}[f.dual_complex]


CANONICAL_KULIKOV = {
    "smooth": KulikovFiber((Component.K3,), DualComplex.POINT, DoubleCurves.NONE),
    "chain": KulikovFiber(
        (Component.RATIONAL, Component.ELLIPTIC_RULED, Component.RATIONAL),
        DualComplex.INTERVAL,
        DoubleCurves.GENUS_ONE,
    ),
    "sphere": KulikovFiber((Component.RATIONAL,) * 4, DualComplex.SPHERE, DoubleCurves.RATIONAL_CYCLES),
}


# -- the Gauss lattice ---------------------------------------------------------------------------


GAUSS_GRAM = la.diag([-2, -2])
GAUSS_RHO = la.mat([[0, -1], [1, 0]])


def discriminant_group(gram: la.Matrix) -> list[la.Vector]:
    """Representatives in [0, 1)^d of L^dual / L for an even lattice with nonsingular Gram."""
    ginv = la.inverse(gram)
    d = len(gram)
    size = abs(la.det(gram))
    # L^dual is spanned by the columns of G^{-1}; enumerate fractional parts of small combinations
    bound = int(size)
    seen: dict[tuple, la.Vector] = {}
    for coeffs in itertools.product(range(bound), repeat=d):
        x = la.matvec(ginv, coeffs)
        frac = tuple(v - (v.numerator // v.denominator) for v in x)
        seen.setdefault(frac, frac)
        if len(seen) == size:
            break
    return sorted(seen.values())


def discriminant_form(gram: la.Matrix, x: la.Vector) -> Fraction:
    """q(x) = x . x modulo 2Z, in [0, 2)."""
    v = la.dot(x, la.matvec(gram, x))
    return v - 2 * math.floor(v / 2)


def isotropic_subgroups(gram: la.Matrix) -> list[list[la.Vector]]:
    """Nontrivial subgroups of the discriminant group on which q vanishes mod 2Z."""
    group = discriminant_group(gram)
    nonzero = [x for x in group if any(v != 0 for v in x)]

    def add(a, b):
        return tuple((u + v) - ((u + v).numerator // (u + v).denominator) for u, v in zip(a, b))

    out = []
    for r in range(1, len(nonzero) + 1):
        for subset in itertools.combinations(nonzero, r):
            closed = all(add(a, b) in subset or all(v == 0 for v in add(a, b)) for a in subset for b in subset)
            if closed and all(discriminant_form(gram, x) == 0 for x in subset):
                out.append(list(subset))
    return out


@dataclass
class GaussLatticeReport:
    signature: tuple
    g_squared_is_minus_one: bool
    discriminant_order: int
    discriminant_values: list  # q on the nonzero classes, mod 2Z in [0, 2)
    isotropic_subgroups: int
    has_even_overlattice: bool
    self_intersection: Fraction
    herm_signature: tuple

    @property
    def ok(self) -> bool:
        return (
            self.signature == (0, 2, 0)
            and self.g_squared_is_minus_one
            and self.discriminant_order == 4
            and not self.has_even_overlattice
            and self.self_intersection == -2
        )


def gauss_lattice_report() -> GaussLatticeReport:
    space = QuadraticSpace(GAUSS_GRAM)
    g2 = la.matmul(GAUSS_RHO, GAUSS_RHO)
    gamma = la.vec((1, 0))
    minus = la.matvec(g2, gamma) == tuple(-x for x in gamma) and g2 == la.mat_scale(-1, la.identity(2))
    group = discriminant_group(GAUSS_GRAM)
    values = [discriminant_form(GAUSS_GRAM, x) for x in group if any(v != 0 for v in x)]
    iso = isotropic_subgroups(GAUSS_GRAM)
    eig = eigenspace_chi(space, GAUSS_RHO, 4)
    return GaussLatticeReport(
        signature=space.signature,
        g_squared_is_minus_one=minus,
        discriminant_order=len(group),
        discriminant_values=values,
        isotropic_subgroups=len(iso),
        has_even_overlattice=bool(iso),
        self_intersection=space.dot(gamma, gamma),
        herm_signature=eig.herm_signature,
    )


# -- the tube integral -----------------------------------------------------------------------------


MIN_POINTS = 16


def tube_integrand(t: np.ndarray, theta: np.ndarray, epsilon: float = 1.0) -> np.ndarray:
    """Pull-back of dz' ^ dz'' / (z' - z'')^2 to (t, theta) for the tube around z' = z''.

    z' = (1 + t) eps e^{i theta} / 2 and z'' = (t - 1) eps e^{i theta} / 2, so
    z' - z'' = eps e^{i theta} and z' + z'' = t eps e^{i theta}.
    """
    r = epsilon * np.exp(1j * theta)
    dzp_dt, dzpp_dt = r / 2, r / 2
    dzp_dth = 1j * (1 + t) * r / 2
    dzpp_dth = 1j * (t - 1) * r / 2
    jac = dzp_dt * dzpp_dth - dzp_dth * dzpp_dt
    return jac / r**2


def tube_integral_check(epsilon: float = 1.0, quadrature_points: int = 64) -> complex:
    """Gauss-Legendre in t on [-1, 1] times the trapezoid rule in theta on [0, 2 pi]."""
    if quadrature_points < MIN_POINTS:
        raise MalformedInputError(f"need at least {MIN_POINTS} quadrature points per direction")
    if not epsilon > 0:
        raise MalformedInputError("epsilon must be positive")
    nodes, weights = np.polynomial.legendre.leggauss(quadrature_points)
    theta = np.arange(quadrature_points) * (2 * np.pi / quadrature_points)
    tt, th = np.meshgrid(nodes, theta, indexing="ij")
    vals = tube_integrand(tt, th, epsilon)
    return complex(np.sum(weights[:, None] * vals) * (2 * np.pi / quadrature_points))

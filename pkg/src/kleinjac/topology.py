"""Homology of X: generating cycles, intersection numbers, sigma_# and the adapted basis.

Cycles are built from lassos based at a common point ``P0`` left of all branch
points: a straight spoke to a small circle around one branch point and back.
A single lasso swaps the sheets, so the product of two angularly consecutive
lassos lifts to a closed cycle on X. The first ``2g`` of the ``2g+1``
consecutive products form a Z-basis of ``H_1(X, Z)``; their intersection form
is brought to the standard block form by exact integer symplectic reduction.

Intersection sign convention: a transversal crossing of ``c1`` by ``c2``
contributes ``+1`` when the tangent of ``c1`` is obtained from the tangent of
``c2`` by a counterclockwise turn of less than ``pi``. With this sign a canonical
basis ``alpha.beta = -1`` yields a normalized period matrix with positive
definite imaginary part.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import errors, intlinalg
from .config import DEFAULT, Tolerances
from .curve import CurveDescriptor, SurfacePath, segment_clearance, select_branch, trace

CIRCLE_VERTICES = 24
MAX_RETRIES = 8


@dataclass(frozen=True)
class Cycle:
    """Integer 1-chain ``sum(coef * path)`` of closed lifted paths."""

    terms: tuple[tuple[int, SurfacePath], ...]

    @classmethod
    def from_path(cls, path: SurfacePath) -> "Cycle":
        if not path.closed:
            raise ValueError("a cycle needs closed paths")
        return cls(((1, path),))

    @classmethod
    def combine(cls, coeffs, cycles) -> "Cycle":
        acc: dict[SurfacePath, int] = {}
        for a, c in zip(coeffs, cycles):
            a = int(a)
            if a == 0:
                continue
            for b, p in c.terms:
                acc[p] = acc.get(p, 0) + a * b
        return cls(tuple((n, p) for p, n in acc.items() if n != 0))

    def __neg__(self) -> "Cycle":
        return Cycle(tuple((-a, p) for a, p in self.terms))

    def conjugate(self, curve: CurveDescriptor) -> "Cycle":
        """Image under sigma."""
        return Cycle(tuple((a, p.conjugate(curve)) for a, p in self.terms))

    @property
    def paths(self) -> tuple[SurfacePath, ...]:
        return tuple(p for _, p in self.terms)


@dataclass(frozen=True)
class HomologyBasis:
    """Cycles ``alpha_1..alpha_g, beta_1..beta_g`` (or gamma/delta after adaptation)."""

    cycles: tuple[Cycle, ...]
    intersection: np.ndarray

    @property
    def genus(self) -> int:
        return len(self.cycles) // 2

    def reordered(self, perm) -> "HomologyBasis":
        perm = list(perm)
        m = self.intersection[np.ix_(perm, perm)]
        return HomologyBasis(tuple(self.cycles[i] for i in perm), intlinalg.as_int_matrix(m))


@dataclass(frozen=True)
class SigmaHomologyAction:
    """Integer matrix of sigma_# in a basis; column k is the image of basis cycle k."""

    matrix: np.ndarray

    def check(self) -> None:
        s = self.matrix
        n = s.shape[0]
        if not intlinalg.equal(s @ s, intlinalg.identity(n)):
            raise errors.NonIntegralCoefficient("sigma_# is not an involution")
        j = intlinalg.standard_J(n // 2)
        if not intlinalg.equal(s.T @ j @ s, -j):
            raise errors.NonIntegralCoefficient("sigma_# is not anti-symplectic")


def _cross(u, v):
    return (np.conj(u) * v).imag


def _crossing_sum(curve: CurveDescriptor, p: SurfacePath, q: SurfacePath, tol: Tolerances):
    """Signed crossing count of the lifts; ``None`` if some crossing is degenerate."""
    t1 = trace(curve, p, tol)
    t2 = trace(curve, q, tol)
    a, b = t1.x[:-1], t1.x[1:]
    c, d = t2.x[:-1], t2.x[1:]
    r = (b - a)[:, None]
    s = (d - c)[None, :]
    qp = c[None, :] - a[:, None]
    den = _cross(r, s)
    scale = np.abs(r) * np.abs(s)
    parallel = np.abs(den) <= 1e-13 * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        tp = _cross(qp, s) / den
        tq = _cross(qp, r) / den
    if np.any(parallel & (np.abs(_cross(qp, r)) <= 1e-12 * np.abs(r) * (np.abs(qp) + np.abs(s)))):
        overlap = parallel & (np.abs(_cross(qp, r)) <= 1e-12 * np.abs(r) * (np.abs(qp) + np.abs(s)))
        # collinear segments: degenerate only if they actually overlap
        ii, jj = np.nonzero(overlap)
        for i, j in zip(ii, jj):
            rr = r[i, 0]
            s0 = ((c[j] - a[i]) * np.conj(rr)).real / abs(rr) ** 2
            s1 = ((d[j] - a[i]) * np.conj(rr)).real / abs(rr) ** 2
            if max(s0, s1) > 0 and min(s0, s1) < 1:
                return None
    hit = ~parallel & (tp >= 0) & (tp < 1) & (tq >= 0) & (tq < 1)
    if not np.any(hit):
        return 0.0
    eps = 1e-9
    near = hit & ((tp < eps) | (tp > 1 - eps) | (tq < eps) | (tq > 1 - eps))
    if np.any(near):
        return None
    ii, jj = np.nonzero(hit)
    xc = a[ii] + tp[ii, jj] * (b - a)[ii]
    y1 = select_branch(curve, xc, t1.y[ii])
    y2 = select_branch(curve, xc, t2.y[jj])
    same = 0.5 * (1.0 + (y1 / y2).real)
    sign = -np.sign(den[ii, jj])
    return float(np.sum(sign * same))


def _path_clearance(curve, path, tol) -> float:
    tr = trace(curve, path, tol)
    return float(np.min(np.abs(tr.x[:, None] - curve.bp[None, :])))


@functools.lru_cache(maxsize=65536)
def _path_intersection(curve, p, q, tol, seed):
    rng = np.random.default_rng(seed)
    dmin = min(_path_clearance(curve, p, tol), _path_clearance(curve, q, tol))
    for attempt in range(MAX_RETRIES):
        phi = 0.7371 + 2 * np.pi * rng.random() if attempt else 0.7371
        eps = 0.05 * dmin * (0.5 + 0.5 * rng.random() if attempt else 1.0) * np.exp(1j * phi)
        total = _crossing_sum(curve, p, q.shifted(curve, eps), tol)
        if total is None:
            continue
        n = round(total)
        if abs(total - n) > 0.25:
            raise errors.NonTransversal(f"crossing sum {total} is not near an integer")
        return int(n)
    raise errors.NonTransversal("no transversal perturbation found")


def path_intersection(curve, p: SurfacePath, q: SurfacePath, tol: Tolerances = DEFAULT, seed: int = 0) -> int:
    if not (p.closed and q.closed):
        raise ValueError("intersection numbers need closed paths")
    return _path_intersection(curve, p, q, tol, seed)


def intersection_number(curve, c1, c2, tol: Tolerances = DEFAULT, seed: int = 0) -> int:
    """Algebraic intersection number of two cycles (or closed paths) on X."""
    if isinstance(c1, SurfacePath):
        c1 = Cycle.from_path(c1)
    if isinstance(c2, SurfacePath):
        c2 = Cycle.from_path(c2)
    return sum(a * b * path_intersection(curve, p, q, tol, seed) for a, p in c1.terms for b, q in c2.terms)


def intersection_matrix(curve, cycles, tol: Tolerances = DEFAULT, seed: int = 0) -> np.ndarray:
    n = len(cycles)
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = intersection_number(curve, cycles[i], cycles[j], tol, seed)
            m[i][j] = v
            m[j][i] = -v
    return intlinalg.as_int_matrix(m)


def circle_waypoints(center: complex, radius: float, start_dir: complex, n: int = CIRCLE_VERTICES):
    """Counterclockwise polygon on a circle, starting at ``center + radius*start_dir``."""
    return [center + radius * start_dir * np.exp(2j * np.pi * k / n) for k in range(n)]


def loop_around(center: complex, radius: float, sheet: int = 1, n: int = 64) -> SurfacePath:
    """Closed counterclockwise polygonal circle."""
    return SurfacePath(tuple(circle_waypoints(center, radius, 1.0, n)), sheet, True)


def _base_point_candidates(curve: CurveDescriptor, seed: int):
    bps = curve.bp
    sep = _separation(bps)
    span = float(np.ptp(bps.real) + np.max(np.abs(bps.imag)))
    left = float(np.min(bps.real)) - max(span, sep, 1.0)
    rng = np.random.default_rng(seed)
    yield complex(left, 0.1371 * sep)
    centre = complex(np.mean(bps.real), 0.0)
    extent = float(np.max(np.abs(bps - centre)))
    for factor in (1.5, 2.5, 4.0):
        for k in range(48):
            yield centre + factor * extent * np.exp(1j * (np.pi + 0.0137 + 2 * np.pi * k / 48))
    for _ in range(MAX_RETRIES * 4):
        yield complex(left - rng.random() * span, (rng.random() - 0.5) * sep)


def _separation(bps) -> float:
    d = np.abs(bps[:, None] - bps[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(np.min(d))


@dataclass(frozen=True)
class LassoSystem:
    base: complex
    order: tuple[int, ...]
    approach: tuple[complex, ...]
    circles: tuple[tuple[complex, ...], ...]

    def loop_waypoints(self, k: int) -> list[complex]:
        """Waypoints of the k-th lasso (in angular order), starting at the base."""
        return [self.base, self.approach[k], *self.circles[k][1:], self.approach[k]]


def lasso_system(curve: CurveDescriptor, tol: Tolerances = DEFAULT, seed: int = 0) -> LassoSystem:
    """Base point plus one lasso per branch point, with straight spokes.

    Circle radii start at 0.3 of the nearest separation and shrink when another
    spoke passes close by; a base point is rejected if any radius would drop
    below 0.1 of the separation.
    """
    bps = curve.bp
    n = len(bps)
    d = np.abs(bps[:, None] - bps[None, :])
    d[np.diag_indices_from(d)] = np.inf
    nearest = np.min(d, axis=1)
    for base in _base_point_candidates(curve, seed):
        angles = np.angle(bps - base)
        if np.min(np.diff(np.sort(angles))) < 1e-6:
            continue
        rho = 0.3 * nearest.copy()
        for i in range(n):
            for j in range(n):
                if j != i:
                    rho[j] = min(rho[j], segment_clearance(base, bps[i], bps[j : j + 1]) / 1.5)
        if np.any(rho < 0.1 * nearest):
            continue
        approach = [bps[i] - rho[i] * (bps[i] - base) / abs(bps[i] - base) for i in range(n)]
        order = tuple(int(i) for i in np.argsort(angles))
        circles = tuple(
            tuple(circle_waypoints(bps[i], rho[i], (approach[i] - bps[i]) / rho[i])) for i in order
        )
        return LassoSystem(base, order, tuple(approach[i] for i in order), circles)
    raise errors.CutCollision("could not route lassos clear of the branch points")


def generating_cycles(curve: CurveDescriptor, tol: Tolerances = DEFAULT, seed: int = 0) -> list[Cycle]:
    """The ``2g+1`` products of angularly consecutive lassos, lifted from sheet +1."""
    ls = lasso_system(curve, tol, seed)
    out = []
    for k in range(len(ls.order) - 1):
        wps = ls.loop_waypoints(k) + ls.loop_waypoints(k + 1)
        out.append(Cycle.from_path(SurfacePath(tuple(wps), 1, True)))
    return out


def canonical_homology_basis(curve: CurveDescriptor, tol: Tolerances = DEFAULT, seed: int = 0) -> HomologyBasis:
    """Canonical basis with intersection matrix exactly ``[[0, -I], [I, 0]]``."""
    g = curve.genus
    gens = generating_cycles(curve, tol, seed)[: 2 * g]
    k = intersection_matrix(curve, gens, tol, seed)
    if abs(intlinalg.det(k)) != 1:
        raise errors.CutCollision(f"generating cycles are not a basis (det {intlinalg.det(k)})")
    p = intlinalg.symplectic_reduce(k)
    cycles = tuple(Cycle.combine(p[:, j], gens) for j in range(2 * g))
    jmat = intlinalg.as_int_matrix(p.T @ k @ p)
    assert intlinalg.equal(jmat, intlinalg.standard_J(g))
    return HomologyBasis(cycles, jmat)


def coordinates(curve, basis: HomologyBasis, cycle, tol: Tolerances = DEFAULT, seed: int = 0) -> np.ndarray:
    """Integer coordinates of ``cycle`` in ``basis``, recovered from intersection numbers."""
    v = [intersection_number(curve, cycle, b, tol, seed) for b in basis.cycles]
    n = intlinalg.solve_integer(basis.intersection.T, intlinalg.as_int_matrix([[x] for x in v]))
    if n is None:
        raise errors.NonIntegralCoefficient("cycle coordinates are not integral")
    return n[:, 0]


def sigma_homology_matrix(curve, basis: HomologyBasis, tol: Tolerances = DEFAULT, seed: int = 0) -> SigmaHomologyAction:
    """Matrix of sigma_# obtained by conjugating every basis cycle and reading off coordinates."""
    cols = [coordinates(curve, basis, c.conjugate(curve), tol, seed) for c in basis.cycles]
    s = intlinalg.as_int_matrix(np.column_stack(cols))
    action = SigmaHomologyAction(s)
    action.check()
    return action


def adapt_basis_to_sigma(basis: HomologyBasis, action: SigmaHomologyAction):
    """Canonical basis whose first g cycles are sigma_#-fixed, with the transformed action.

    Returns ``(new_basis, new_action, change)`` where ``change`` has the new
    basis vectors as columns in the old coordinates.
    """
    s = action.matrix
    g = basis.genus
    n = 2 * g
    j = intlinalg.standard_J(g)
    eye = intlinalg.identity(n)
    if intlinalg.equal(s[:, :g], eye[:, :g]):
        change = eye
    else:
        fixed, rest = intlinalg.integer_kernel(s - eye)
        if fixed.shape[1] != g:
            raise errors.FixedRankDeficient(f"fixed lattice has rank {fixed.shape[1]}, expected {g}")
        if not intlinalg.equal(fixed.T @ j @ fixed, intlinalg.as_int_matrix([[0] * g for _ in range(g)])):
            raise errors.FixedRankDeficient("fixed lattice is not isotropic")
        change = intlinalg.complete_lagrangian(fixed, rest)
    new_s = intlinalg.as_int_matrix(intlinalg.inverse(change) @ s @ change)
    cycles = tuple(Cycle.combine(change[:, k], basis.cycles) for k in range(n))
    new_int = intlinalg.as_int_matrix(change.T @ basis.intersection @ change)
    new_basis = HomologyBasis(cycles, new_int)
    new_action = SigmaHomologyAction(new_s)
    new_action.check()
    if not intlinalg.equal(new_s[:, :g], eye[:, :g]):
        raise errors.FixedRankDeficient("adapted basis is not fixed by sigma_#")
    return new_basis, new_action, change


def adapted_basis(curve, tol: Tolerances = DEFAULT, seed: int = 0):
    """Full pipeline: canonical basis, sigma_#, adaptation."""
    basis = canonical_homology_basis(curve, tol, seed)
    action = sigma_homology_matrix(curve, basis, tol, seed)
    return adapt_basis_to_sigma(basis, action)

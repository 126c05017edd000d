"""Period lattice, Abel-Jacobi map, the involutions sigma_0 / sigma_1 and the real locus.

All vectors live in C^g with coordinates taken against the adapted, sigma-invariant
basis of holomorphic differentials, so sigma_1 is plain coordinatewise conjugation.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from . import errors
from .config import DEFAULT, Tolerances
from .curve import CurveDescriptor, SurfacePath, SurfacePoint, end_sheet, segment_clearance, trace
from .divisors import Divisor, degree, sigma_star
from .periods import PeriodData, branch_tail, infinity_start_y, infinity_tail, integrate_path
from .topology import circle_waypoints

MAX_GENUS_COMPONENTS = 3


@dataclass(frozen=True, eq=False)
class Lattice:
    """The lattice spanned by the columns of ``[I | tau]`` in C^g."""

    generators: np.ndarray

    @functools.cached_property
    def real_matrix(self) -> np.ndarray:
        return np.vstack([self.generators.real, self.generators.imag])

    @functools.cached_property
    def _inv(self) -> np.ndarray:
        return np.linalg.inv(self.real_matrix)

    @property
    def genus(self) -> int:
        return self.generators.shape[0]

    def coords(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        return self._inv @ np.concatenate([v.real, v.imag])

    def vector(self, n) -> np.ndarray:
        return self.generators @ np.asarray(n, dtype=float)

    def distance(self, v) -> float:
        """Euclidean distance from ``v`` to the nearest lattice point."""
        c = self.coords(v)
        base = np.round(c)
        v = np.asarray(v, dtype=complex)
        best = np.linalg.norm(v - self.vector(base))
        if 2 * self.genus <= 6:
            for off in itertools.product((-1, 0, 1), repeat=2 * self.genus):
                d = np.linalg.norm(v - self.vector(base + np.array(off)))
                best = min(best, d)
        return float(best)

    def conjugation_residual(self) -> float:
        """How far the conjugate of each generator lies from the lattice."""
        return max(self.distance(np.conj(col)) for col in self.generators.T)


@dataclass(frozen=True, eq=False)
class JacobianPoint:
    """Reduced representative in C^g / L.

    ``coords`` are the real coordinates against the generators, in ``[-1/2, 1/2)``;
    ``reduction_residual`` is the length of the lattice vector subtracted during
    reduction and ``residual`` the distance from ``value`` to the lattice.
    """

    value: np.ndarray
    coords: np.ndarray
    shift: tuple[int, ...]
    reduction_residual: float
    residual: float

    def to_json(self) -> dict:
        return {
            "value": [[z.real, z.imag] for z in self.value],
            "residual": self.residual,
        }


def lattice_from_periods(periods: PeriodData) -> Lattice:
    return lattice_from_tau(periods.tau)


def lattice_from_tau(tau) -> Lattice:
    """Lattice with generators ``[I | tau]``; raises ``RankDeficient`` if degenerate."""
    tau = np.atleast_2d(np.asarray(tau, dtype=complex))
    g = tau.shape[0]
    gens = np.hstack([np.eye(g, dtype=complex), tau])
    real = np.vstack([gens.real, gens.imag])
    cond = np.linalg.cond(real)
    if not np.isfinite(cond) or cond > 1e10:
        raise errors.RankDeficient(f"lattice generators are degenerate (cond {cond:.3g})")
    return Lattice(gens)


def reduce_mod_lattice(lattice: Lattice, v) -> JacobianPoint:
    v = np.asarray(v, dtype=complex).reshape(-1)
    c = lattice.coords(v)
    n = np.floor(c + 0.5)
    shift = lattice.vector(n)
    value = v - shift
    return JacobianPoint(
        value, c - n, tuple(int(k) for k in n), float(np.linalg.norm(shift)), lattice.distance(value)
    )


# -- routing -----------------------------------------------------------------


def _nearest_bp_distance(curve, x) -> float:
    return float(np.min(np.abs(curve.bp - x)))


def _separation(curve) -> float:
    d = np.abs(curve.bp[:, None] - curve.bp[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(np.min(d))


def _dedupe(wps):
    out = [wps[0]]
    for w in wps[1:]:
        if abs(w - out[-1]) > 0:
            out.append(w)
    return out


def route(curve: CurveDescriptor, x0: complex, xt: complex, strategy: str = "hv") -> list[complex]:
    """Rectilinear x-plane route from ``x0`` to ``xt`` keeping clear of branch points.

    ``"hv"`` runs horizontally first, ``"vh"`` vertically first; either falls back
    to a five-leg route through a horizontal level between branch points.
    """
    sep = _separation(curve)
    need = min(0.2 * sep, 0.5 * _nearest_bp_distance(curve, x0), 0.5 * _nearest_bp_distance(curve, xt))
    offsets = [0.0]
    for k in (0.13, 0.27, 0.41, 0.55, 0.8, 1.1):
        offsets += [k * sep, -k * sep]
    if strategy not in ("hv", "vh"):
        raise ValueError(f"unknown routing strategy {strategy!r}")

    def clear(wps):
        return all(segment_clearance(a, b, curve.bp) >= need for a, b in zip(wps[:-1], wps[1:]))

    for d in offsets:
        if strategy == "hv":
            wps = [x0, complex(xt.real + d, x0.imag), complex(xt.real + d, xt.imag), xt]
        else:
            wps = [x0, complex(x0.real + d, x0.imag), complex(x0.real + d, xt.imag), xt]
        wps = _dedupe(wps)
        if clear(wps):
            return wps
    # fall back to a horizontal highway at a level between rows of branch points
    ims = np.unique(np.round(curve.bp.imag, 12))
    levels = list(0.5 * (ims[:-1] + ims[1:])) + [ims[0] - sep, ims[-1] + sep]
    levels.sort(key=lambda m: abs(m - x0.imag) + abs(m - xt.imag))
    for m in levels:
        for d1 in offsets:
            for d2 in offsets:
                a, b = x0.real + d1, xt.real + d2
                wps = _dedupe([x0, complex(a, x0.imag), complex(a, m), complex(b, m), complex(b, xt.imag), xt])
                if clear(wps):
                    return wps
    raise errors.BranchTooClose(f"no clear route from {x0} to {xt}")


def _flip_loop(curve: CurveDescriptor, x0: complex) -> list[complex]:
    """Lasso from ``x0`` around one branch point; following it swaps the sheets."""
    bps = curve.bp
    d = np.abs(bps[:, None] - bps[None, :])
    d[np.diag_indices_from(d)] = np.inf
    for i in np.argsort(np.abs(bps - x0)):
        b = bps[i]
        rho = min(0.3 * float(np.min(d[i])), 0.5 * abs(b - x0))
        u = (b - x0) / abs(b - x0)
        q = b - rho * u
        others = np.delete(bps, i)
        if segment_clearance(x0, q, others) < 1.5 * rho:
            continue
        circle = circle_waypoints(b, rho, -u)
        return [x0, q, *circle[1:], q, x0]
    raise errors.BranchTooClose("no sheet-swapping lasso available")


def path_to_point(curve: CurveDescriptor, base: SurfacePoint, x_target: complex, sheet, strategy: str = "hv") -> SurfacePath:
    """Lifted path from ``base`` to ``(x_target, sheet)``; ``sheet=None`` accepts either lift."""
    wps = route(curve, base.x, x_target, strategy)
    path = SurfacePath(tuple(wps), base.sheet, False)
    if sheet is None or len(wps) == 1 and sheet == base.sheet:
        return path
    if end_sheet(curve, path) != sheet:
        wps = _flip_loop(curve, base.x) + wps[1:]
        path = SurfacePath(tuple(_dedupe(wps)), base.sheet, False)
    return path


def default_basepoint(curve: CurveDescriptor) -> SurfacePoint:
    """Sheet +1 point over the anchor ``x = 0``."""
    return curve.point(0.0, 1)


@functools.lru_cache(maxsize=16384)
def _point_integral(curve, pt, base, tol, strategy):
    if pt.is_infinite:
        r = curve.infinity_radius
        x_r = complex(r, 0.0)
        y_r = infinity_start_y(curve, x_r, pt.x)
        path = path_to_point(curve, base, x_r, curve.sheet_of(x_r, y_r), strategy)
        tr = trace(curve, path, tol)
        tail, sym = infinity_tail(curve, tr.x[-1], tr.y[-1], tol)
        assert sym == pt.x
        return integrate_path(curve, path, tol) + tail
    bi = curve.branch_index(pt.x, tol)
    if bi is not None:
        b = curve.bp[bi]
        d = np.abs(np.delete(curve.bp, bi) - b)
        direction = (base.x - b) / abs(base.x - b) if base.x != b else 1.0
        xs = b + 0.25 * float(np.min(d)) * direction
        path = path_to_point(curve, base, xs, None, strategy)
        tr = trace(curve, path, tol)
        return integrate_path(curve, path, tol) + branch_tail(curve, bi, tr.x[-1], tr.y[-1], tol)
    path = path_to_point(curve, base, pt.x, pt.sheet, strategy)
    return integrate_path(curve, path, tol)


def point_integral(curve, pt: SurfacePoint, base: SurfacePoint | None = None, tol: Tolerances = DEFAULT, strategy: str = "hv") -> np.ndarray:
    """Integrals of the monomial differentials from ``base`` to ``pt`` along a routed path."""
    base = base or default_basepoint(curve)
    return _point_integral(curve, pt, base, tol, strategy).copy()


def abel_jacobi(curve, periods: PeriodData, d: Divisor, basepoint: SurfacePoint | None = None, tol: Tolerances = DEFAULT, strategy: str = "hv") -> JacobianPoint:
    """Abel-Jacobi image of a degree-zero divisor, reduced modulo the period lattice."""
    if degree(d) != 0:
        raise errors.DegreeNonzero(f"divisor has degree {degree(d)}")
    total = np.zeros(curve.genus, dtype=complex)
    for pt, n in d.support:
        total += n * point_integral(curve, pt, basepoint, tol, strategy)
    return reduce_mod_lattice(lattice_from_periods(periods), periods.normalization @ total)


def sigma1(lattice: Lattice, z) -> JacobianPoint:
    """Coordinatewise conjugation on C^g / L."""
    v = z.value if isinstance(z, JacobianPoint) else np.asarray(z, dtype=complex)
    return reduce_mod_lattice(lattice, np.conj(v))


def sigma0_class(curve, periods: PeriodData, d: Divisor, basepoint=None, tol: Tolerances = DEFAULT) -> JacobianPoint:
    """Class of ``sigma^* D``, i.e. sigma_0 applied to the class of ``D``."""
    return abel_jacobi(curve, periods, sigma_star(curve, d), basepoint, tol)


def is_sigma1_fixed(lattice: Lattice, z, tol: Tolerances = DEFAULT) -> tuple[bool, float]:
    v = z.value if isinstance(z, JacobianPoint) else np.asarray(z, dtype=complex)
    res = lattice.distance(v - np.conj(v))
    return res < tol.lattice, res


def same_real_component(lattice: Lattice, z1, z2, tol: Tolerances = DEFAULT) -> bool:
    """Whether two sigma_1-fixed points differ by a real vector plus a lattice vector."""
    g = lattice.genus
    im_tau = lattice.generators[:, g:].imag
    m = np.linalg.solve(im_tau, np.imag(np.asarray(z1) - np.asarray(z2)))
    return bool(np.all(np.abs(m - np.round(m)) < tol.lattice))


def fixed_component_representatives(lattice: Lattice, tol: Tolerances = DEFAULT) -> list[JacobianPoint]:
    """One half-period representative per connected component of the fixed locus of sigma_1."""
    g = lattice.genus
    if g > MAX_GENUS_COMPONENTS:
        raise errors.GenusTooLarge(f"component enumeration supports g <= {MAX_GENUS_COMPONENTS}")
    tau = lattice.generators[:, g:]
    reps: list[JacobianPoint] = []
    for n in itertools.product((0, 1), repeat=g):
        for a in itertools.product((0, 1), repeat=g):
            z = reduce_mod_lattice(lattice, 0.5 * (np.array(a, dtype=complex) + tau @ np.array(n)))
            fixed, _ = is_sigma1_fixed(lattice, z, tol)
            if not fixed:
                continue
            if not any(same_real_component(lattice, z.value, r.value, tol) for r in reps):
                reps.append(z)
    return reps


# -- harmonic forms on Y -----------------------------------------------------


@dataclass(frozen=True)
class HarmonicFormY:
    """Real harmonic 1-form on Y, by its real coefficients against the adapted basis."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))


def omega_from_eta(eta: HarmonicFormY) -> np.ndarray:
    """Holomorphic form ``pi^* eta + i * star(pi^* eta)`` as adapted coefficients."""
    return np.array(eta.coeffs, dtype=complex)


def eta_from_omega(coeffs, tol: Tolerances = DEFAULT) -> HarmonicFormY:
    """Inverse of :func:`omega_from_eta`; rejects forms that are not sigma-invariant."""
    c = np.asarray(coeffs, dtype=complex)
    if np.any(np.abs(c.imag) > tol.sigma_real):
        raise errors.NotSigmaInvariant("coefficients have a non-real part")
    return HarmonicFormY(tuple(c.real))


def form_involution_matrix(curve, periods: PeriodData, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Real 2g x 2g matrix of ``omega -> conj(sigma^* omega)`` on adapted coefficients.

    Built from quadrature over the conjugated gamma cycles, not from the sigma_#
    matrix.
    """
    from .periods import conjugate_cycle_periods

    g = periods.genus
    q = periods.normalization @ conjugate_cycle_periods(curve, periods.basis, tol)[:, :g]
    b = np.conj(q.T)
    return np.block([[b.real, b.imag], [b.imag, -b.real]])


def invariant_form_dimension(curve, periods: PeriodData, tol: Tolerances = DEFAULT) -> int:
    """Real dimension of the space of sigma-invariant holomorphic forms."""
    t = form_involution_matrix(curve, periods, tol)
    sv = np.linalg.svd(t - np.eye(t.shape[0]), compute_uv=False)
    return int(t.shape[0] - np.sum(sv > 1e-6))

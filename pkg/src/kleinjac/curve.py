"""The curve ``y**2 = p(x)``, its points, the real structure and continuation of ``y``.

Sheet convention
----------------
A finite point of the curve is labelled ``(x, sheet)`` with ``y = sheet * Y(x)``
where ``Y`` is a fixed reference branch of ``sqrt(p)``. ``Y`` is the product of
``sqrt(lead)`` and one square-root factor per branch point, each factor being
analytic off a vertical ray: upward from a branch point in the upper half-plane,
downward from one in the lower half-plane. No ray meets the real axis, so ``Y``
is continuous along it, and its overall sign is fixed at the anchor ``x = 0``
where ``Y(0)`` has argument in ``(-pi/2, pi/2]``. On a valid curve ``p(0) < 0``,
so ``Y(0) = +i*sqrt(|p(0)|)``.

The two points over ``x = oo`` are the symbols ``INF_PLUS`` and ``INF_MINUS``:
``y / x**(g+1)`` tends to ``+sqrt(lead)`` at ``INF_PLUS`` (principal root, so
``+i*sqrt(|lead|)``) and to ``-sqrt(lead)`` at ``INF_MINUS``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from . import errors
from .config import DEFAULT, Tolerances

INF_PLUS = "inf+"
INF_MINUS = "inf-"
INFINITIES = (INF_PLUS, INF_MINUS)

# Continuation step relative to the distance to the nearest branch point.
STEP_FRACTION = 0.15


def parse_coeffs(items: Sequence) -> tuple[Fraction, ...]:
    """Parse ``"num/den"`` strings (or numbers) into exact rationals, lowest degree first."""
    out = []
    for it in items:
        if isinstance(it, float):
            out.append(Fraction(it).limit_denominator(10**12))
        else:
            out.append(Fraction(str(it).strip()))
    return tuple(out)


@dataclass(frozen=True)
class CurveDescriptor:
    coeffs: tuple[Fraction, ...]
    genus: int
    branch_points: tuple[complex, ...]
    validity: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @functools.cached_property
    def lead(self) -> float:
        return float(self.coeffs[-1])

    @functools.cached_property
    def upper(self) -> np.ndarray:
        """Branch points with positive imaginary part, in cut order."""
        return np.array(self.branch_points[0::2])

    @functools.cached_property
    def bp(self) -> np.ndarray:
        return np.array(self.branch_points)

    @functools.cached_property
    def scale(self) -> float:
        return float(np.max(np.abs(self.bp)))

    @functools.cached_property
    def _poly(self) -> np.ndarray:
        return np.array([float(c) for c in reversed(self.coeffs)])

    @functools.cached_property
    def _sqrt_lead(self) -> complex:
        return complex(np.sqrt(complex(self.lead)))

    @functools.cached_property
    def _anchor_sign(self) -> float:
        y0 = self._raw_branch(np.array([0j]))[0]
        if abs(y0.real) <= 1e-12 * abs(y0):
            return 1.0 if y0.imag > 0 else -1.0
        return 1.0 if y0.real > 0 else -1.0

    @property
    def infinity_radius(self) -> float:
        return 10.0 * self.scale

    def p(self, x):
        return np.polyval(self._poly, x)

    def _raw_branch(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)[..., None]
        up = np.exp(-0.25j * np.pi) * np.sqrt(1j * (x - self.upper))
        down = np.exp(-0.75j * np.pi) * np.sqrt(-1j * (x - self.upper.conjugate()))
        return self._sqrt_lead * np.prod(up * down, axis=-1)

    def reference_branch(self, x):
        """Value of the sheet-(+1) branch ``Y(x)``."""
        return self._anchor_sign * self._raw_branch(x)

    def y_at(self, x: complex, sheet: int) -> complex:
        return complex(sheet * self.reference_branch(np.array([x]))[0])

    def sheet_of(self, x: complex, y: complex) -> int:
        """Sheet label of the point ``(x, y)``; ``+1`` at branch points."""
        ref = self.reference_branch(np.array([x]))[0]
        if abs(ref) < 1e-300 or self.branch_index(x) is not None:
            return 1
        return 1 if (y / ref).real > 0 else -1

    def branch_index(self, x: complex, tol: Tolerances = DEFAULT):
        if isinstance(x, str):
            return None
        d = np.abs(self.bp - x)
        i = int(np.argmin(d))
        return i if d[i] <= tol.point_eq * self.scale else None

    def point(self, x, sheet: int = 1, tol: Tolerances = DEFAULT) -> "SurfacePoint":
        """Build a canonical point: branch points snap to sheet +1, y is cached."""
        if isinstance(x, str):
            if x not in INFINITIES:
                raise ValueError(f"unknown point symbol {x!r}")
            return SurfacePoint(x, 1)
        x = complex(x)
        if sheet not in (1, -1):
            raise ValueError("sheet must be +1 or -1")
        i = self.branch_index(x, tol)
        if i is not None:
            return SurfacePoint(complex(self.bp[i]), 1, 0j)
        return SurfacePoint(x, sheet, self.y_at(x, sheet))

    def point_from_y(self, x: complex, y: complex) -> "SurfacePoint":
        return self.point(x, self.sheet_of(x, y))

    def to_json(self) -> dict:
        return {
            "coeffs": [str(c) for c in self.coeffs],
            "genus": self.genus,
            "branch_points": [[b.real, b.imag] for b in self.branch_points],
            "validity": dict(self.validity),
        }


@dataclass(frozen=True)
class SurfacePoint:
    """A point of X: finite ``x`` with a sheet label, or one of the infinity symbols."""

    x: complex | str
    sheet: int = 1
    y_value: complex | None = field(default=None, compare=False, hash=False)

    @property
    def is_infinite(self) -> bool:
        return isinstance(self.x, str)

    def to_json(self, mult: int | None = None) -> dict:
        x = self.x if self.is_infinite else [self.x.real, self.x.imag]
        rec = {"x": x, "sheet": self.sheet}
        if mult is not None:
            rec["mult"] = mult
        return rec


@dataclass(frozen=True)
class SurfacePath:
    """Piecewise-linear path in the x-plane, lifted to X by its starting sheet.

    A closed path returns implicitly from the last waypoint to the first.
    """

    waypoints: tuple[complex, ...]
    start_sheet: int = 1
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "waypoints", tuple(complex(w) for w in self.waypoints))

    @property
    def vertices(self) -> tuple[complex, ...]:
        if self.closed and self.waypoints[-1] != self.waypoints[0]:
            return self.waypoints + (self.waypoints[0],)
        return self.waypoints

    def reversed(self, curve: CurveDescriptor) -> "SurfacePath":
        """Same geometric path traversed backwards, starting on its own end sheet."""
        tr = trace(curve, self)
        end_sheet = curve.sheet_of(tr.x[-1], tr.y[-1])
        return SurfacePath(tuple(reversed(self.vertices)), end_sheet, False)

    def conjugate(self, curve: CurveDescriptor) -> "SurfacePath":
        """Image of the path under sigma."""
        x0 = self.waypoints[0]
        y0 = curve.y_at(x0, self.start_sheet)
        xc = x0.conjugate()
        return SurfacePath(
            tuple(w.conjugate() for w in self.waypoints),
            curve.sheet_of(xc, y0.conjugate()),
            self.closed,
        )

    def shifted(self, curve: CurveDescriptor, eps: complex) -> "SurfacePath":
        """Translate by a small ``eps``, keeping the start on the nearby lift."""
        x0 = self.waypoints[0]
        y0 = curve.y_at(x0, self.start_sheet)
        x1 = x0 + eps
        y1 = y0 * np.sqrt(curve.p(x1) / curve.p(x0))
        return SurfacePath(
            tuple(w + eps for w in self.waypoints), curve.sheet_of(x1, y1), self.closed
        )


@dataclass(frozen=True)
class Trace:
    """Refined nodes of a lifted path; ``wp_index[i]`` is the node of waypoint ``i``."""

    x: np.ndarray
    y: np.ndarray
    wp_index: tuple[int, ...]

    @property
    def end_y(self) -> complex:
        return complex(self.y[-1])


def segment_clearance(a: complex, b: complex, pts: np.ndarray) -> float:
    """Minimum distance from the segment [a, b] to the points ``pts``."""
    d = b - a
    if d == 0:
        return float(np.min(np.abs(pts - a)))
    t = np.clip(((pts - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return float(np.min(np.abs(a + t * d - pts)))


def _refine(a: complex, b: complex, bps: np.ndarray) -> list[complex]:
    length = abs(b - a)
    if length == 0:
        return []
    out = []
    s = 0.0
    while s < length:
        x = a + (b - a) * (s / length)
        h = STEP_FRACTION * float(np.min(np.abs(bps - x)))
        s = min(s + h, length)
        out.append(b if s >= length else a + (b - a) * (s / length))
    return out


def select_branch(curve: CurveDescriptor, x: np.ndarray, guess: np.ndarray) -> np.ndarray:
    """The square root of ``p(x)`` closest to ``guess``."""
    r = np.sqrt(curve.p(x).astype(complex))
    flip = (r * np.conj(guess)).real < 0
    return np.where(flip, -r, r)


def _trace(curve: CurveDescriptor, path: SurfacePath, clearance: float) -> Trace:
    verts = path.vertices
    hard = clearance * curve.scale
    bps = curve.bp
    for a, b in zip(verts[:-1], verts[1:]):
        if segment_clearance(a, b, bps) < hard:
            raise errors.BranchTooClose(f"segment {a} -> {b} passes within {hard:g} of a branch point")
    if len(verts) == 1 and float(np.min(np.abs(bps - verts[0]))) < hard:
        raise errors.BranchTooClose(f"point {verts[0]} is a branch point")
    nodes = [verts[0]]
    idx = [0]
    for a, b in zip(verts[:-1], verts[1:]):
        nodes.extend(_refine(a, b, bps))
        idx.append(len(nodes) - 1)
    x = np.array(nodes, dtype=complex)
    px = curve.p(x)
    y0 = curve.y_at(verts[0], path.start_sheet)
    if len(x) > 1:
        ratio = px[1:] / px[:-1]
        if np.any(np.abs(np.angle(ratio)) >= np.pi / 2 * 1.999):
            raise errors.BranchTooClose("continuation step too coarse")
        guess = y0 * np.concatenate(([1.0], np.cumprod(np.sqrt(ratio))))
        y = select_branch(curve, x, guess)
    else:
        y = np.array([y0])
    if path.closed:
        # wp_index for the implicit closing vertex is dropped from the public list
        idx = idx[: len(path.waypoints)]
    return Trace(x, y, tuple(idx))


@functools.lru_cache(maxsize=4096)
def _trace_cached(curve, path, clearance):
    return _trace(curve, path, clearance)


def trace(curve: CurveDescriptor, path: SurfacePath, tol: Tolerances = DEFAULT) -> Trace:
    return _trace_cached(curve, path, tol.clearance)


def continue_y(curve: CurveDescriptor, path: SurfacePath, tol: Tolerances = DEFAULT) -> list[complex]:
    """Analytically continue ``y`` along ``path``; returns ``y`` at each waypoint.

    Raises :class:`SheetMismatch` for a closed path whose lift does not close up.
    """
    tr = trace(curve, path, tol)
    if path.closed:
        y_end = tr.y[-1]
        y_start = tr.y[0]
        if abs(y_end - y_start) > 1e-6 * max(abs(y_start), 1.0):
            raise errors.SheetMismatch("lift of the closed path ends on the other sheet")
    return [complex(tr.y[i]) for i in tr.wp_index]


def end_sheet(curve: CurveDescriptor, path: SurfacePath, tol: Tolerances = DEFAULT) -> int:
    tr = trace(curve, path, tol)
    return curve.sheet_of(tr.x[-1], tr.y[-1])


def sigma_point(curve: CurveDescriptor, pt: SurfacePoint) -> SurfacePoint:
    """The anti-holomorphic involution ``(x, y) -> (conj x, conj y)``."""
    if pt.is_infinite:
        return SurfacePoint(INF_MINUS if pt.x == INF_PLUS else INF_PLUS, 1)
    xc = pt.x.conjugate()
    if curve.branch_index(pt.x) is not None:
        return curve.point(xc, 1)
    y = pt.y_value if pt.y_value is not None else curve.y_at(pt.x, pt.sheet)
    return curve.point(xc, curve.sheet_of(xc, y.conjugate()))


def hodge_star(a: float, b: float) -> tuple[float, float]:
    """Hodge star of ``a dx + b dy``, returned as the coefficient pair ``(-b, a)``."""
    return (-b, a)


def _exact_checks(coeffs: tuple[Fraction, ...]):
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x)
    real_roots = poly.count_roots()
    squarefree = sympy.degree(sympy.gcd(poly, poly.diff(x)), x) == 0
    return real_roots, squarefree


def validate_curve(coeffs: Sequence) -> CurveDescriptor:
    """Check the imaginary-curve conditions and compute branch points.

    ``coeffs`` are lowest degree first. Raises a :class:`CurveError` subclass
    naming the first failed condition.
    """
    cs = parse_coeffs(coeffs)
    if not cs:
        raise errors.DegenerateCurve("empty coefficient list")
    if cs[-1] == 0:
        raise errors.DegenerateCurve("leading coefficient is zero")
    deg = len(cs) - 1
    if deg < 2:
        raise errors.DegenerateCurve(f"p has degree {deg}")
    if deg % 2:
        raise errors.OddDegree(f"p has odd degree {deg}")
    if cs[-1] > 0:
        raise errors.OrientableCover("leading coefficient is positive: sigma has fixed points")
    real_roots, squarefree = _exact_checks(cs)
    if real_roots:
        raise errors.RealBranchPoint(f"p has {real_roots} real root(s)")
    if not squarefree:
        raise errors.RepeatedRoot("p is not squarefree")
    genus = deg // 2 - 1
    if genus < 1:
        raise errors.DegenerateCurve("genus 0 curve")

    fc = np.array([float(c) for c in reversed(cs)])
    roots = np.roots(fc)
    dfc = np.polyder(fc)
    roots = roots - np.polyval(fc, roots) / np.polyval(dfc, roots)  # one Newton polish
    upper = [r for r in roots if r.imag > 0]
    lower = [r for r in roots if r.imag < 0]
    if len(upper) != len(lower) or len(upper) != genus + 1:
        raise errors.RealBranchPoint("numerical roots are not split by the real axis")
    paired = []
    remaining = list(lower)
    for b in upper:
        j = int(np.argmin([abs(b - r.conjugate()) for r in remaining]))
        partner = remaining.pop(j)
        paired.append((b + partner.conjugate()) / 2)
    paired.sort(key=lambda b: (round(b.real, 12), abs(b.imag)))
    bps = []
    for b in paired:
        bps.extend([complex(b), complex(b).conjugate()])
    residual = max(abs(np.polyval(fc, b)) for b in bps) / max(1.0, np.max(np.abs(fc)))
    validity = {
        "even_degree": True,
        "negative_leading": True,
        "no_real_roots": True,
        "squarefree": True,
        "root_residual": float(residual),
    }
    return CurveDescriptor(cs, genus, tuple(bps), validity)

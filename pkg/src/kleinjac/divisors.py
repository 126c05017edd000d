"""Divisors on X and on the Klein surface Y = X / sigma.

A point of Y is stored as its canonical representative on X: the member of
``{P, sigma P}`` with ``Im x > 0``; for real ``x`` the member on sheet +1; for the
pair of infinities, ``INF_PLUS``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from . import errors
from .config import DEFAULT, Tolerances
from .curve import INF_MINUS, INF_PLUS, CurveDescriptor, SurfacePoint, sigma_point


def _same_point(p: SurfacePoint, q: SurfacePoint, eq_tol: float) -> bool:
    if p.is_infinite or q.is_infinite:
        return p.x == q.x
    return p.sheet == q.sheet and abs(p.x - q.x) <= eq_tol


def _sort_key(item):
    pt, _ = item
    if pt.is_infinite:
        return (1, 0.0, 0.0, 0 if pt.x == INF_PLUS else 1)
    return (0, pt.x.real, pt.x.imag, -pt.sheet)


def _merge(pairs, eq_tol: float):
    acc: list[list] = []
    for pt, n in pairs:
        n = int(n)
        for slot in acc:
            if _same_point(slot[0], pt, eq_tol):
                slot[1] += n
                break
        else:
            acc.append([pt, n])
    return tuple(sorted(((p, n) for p, n in acc if n != 0), key=_sort_key))


@dataclass(frozen=True, eq=False)
class Divisor:
    """Finite integer combination of points of X, stored canonically merged."""

    support: tuple[tuple[SurfacePoint, int], ...] = ()
    eq_tol: float = field(default=1e-9, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "support", _merge(self.support, self.eq_tol))

    def _new(self, pairs):
        return type(self)(tuple(pairs), self.eq_tol)

    def __add__(self, other: "Divisor"):
        return self._new(self.support + other.support)

    def __neg__(self):
        return self._new((p, -n) for p, n in self.support)

    def __sub__(self, other: "Divisor"):
        return self + (-other)

    def __rmul__(self, k: int):
        return self._new((p, k * n) for p, n in self.support)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Divisor) or len(self.support) != len(other.support):
            return False
        diff = self - other
        return not diff.support

    def __hash__(self):
        return hash(len(self.support))

    def __len__(self) -> int:
        return len(self.support)

    def __iter__(self):
        return iter(self.support)

    def to_json(self) -> list[dict]:
        return [p.to_json(n) for p, n in self.support]


class QuotientDivisor(Divisor):
    """Divisor on Y, keyed by canonical representatives."""


def degree(d: Divisor) -> int:
    return sum(n for _, n in d.support)


def eq_tolerance(curve: CurveDescriptor, tol: Tolerances = DEFAULT) -> float:
    return tol.point_eq * curve.scale


def make_divisor(curve: CurveDescriptor, items: Iterable, tol: Tolerances = DEFAULT) -> Divisor:
    """Build a divisor from ``(point, mult)`` pairs; a point may be given as ``(x, sheet)`` or a symbol."""
    pairs = []
    for pt, n in items:
        if not isinstance(pt, SurfacePoint):
            pt = curve.point(pt, 1, tol) if isinstance(pt, str) else curve.point(pt[0], pt[1], tol)
        pairs.append((pt, n))
    return Divisor(tuple(pairs), eq_tolerance(curve, tol))


def y_representative(curve: CurveDescriptor, pt: SurfacePoint) -> SurfacePoint:
    """Canonical representative of the Y-point ``{pt, sigma(pt)}``."""
    if pt.is_infinite:
        return SurfacePoint(INF_PLUS, 1)
    im = pt.x.imag
    if im > 0 or (im == 0 and pt.sheet == 1):
        return pt
    return sigma_point(curve, pt)


def make_quotient_divisor(curve: CurveDescriptor, items: Iterable, tol: Tolerances = DEFAULT) -> QuotientDivisor:
    d = make_divisor(curve, items, tol)
    return QuotientDivisor(tuple((y_representative(curve, p), n) for p, n in d.support), d.eq_tol)


def sigma_star(curve: CurveDescriptor, d: Divisor) -> Divisor:
    """``sum m_j x_j -> sum m_j sigma(x_j)``."""
    return Divisor(tuple((sigma_point(curve, p), n) for p, n in d.support), d.eq_tol)


def pullback(curve: CurveDescriptor, d: QuotientDivisor) -> Divisor:
    """Each Y-point ``y`` with weight ``n`` contributes ``n x + n sigma(x)``."""
    pairs = []
    for p, n in d.support:
        pairs.append((p, n))
        pairs.append((sigma_point(curve, p), n))
    return Divisor(tuple(pairs), d.eq_tol)


def pushforward(curve: CurveDescriptor, e: Divisor) -> QuotientDivisor:
    return QuotientDivisor(tuple((y_representative(curve, p), n) for p, n in e.support), e.eq_tol)


def is_sigma_fixed(curve: CurveDescriptor, d: Divisor) -> bool:
    return sigma_star(curve, d) == d


def descend(curve: CurveDescriptor, d: Divisor) -> QuotientDivisor:
    """The unique ``D`` on Y with ``pullback(D) == d``; ``d`` must be sigma-fixed."""
    half = pushforward(curve, d)
    if any(n % 2 for _, n in half.support):
        raise errors.DivisorError("divisor is not a pullback from Y")
    q = QuotientDivisor(tuple((p, n // 2) for p, n in half.support), d.eq_tol)
    if pullback(curve, q) != d:
        raise errors.DivisorError("divisor is not sigma-fixed")
    return q


def div_of_x_translate(curve: CurveDescriptor, a: complex, allow_branch: bool = False, tol: Tolerances = DEFAULT) -> Divisor:
    """Divisor of the function ``x - a``: two zeros over ``a`` and simple poles at both infinities."""
    a = complex(a)
    poles = [(INF_PLUS, -1), (INF_MINUS, -1)]
    if curve.branch_index(a, tol) is not None:
        if not allow_branch:
            raise errors.BranchValue(f"{a} is a branch point")
        return make_divisor(curve, [((a, 1), 2)] + poles, tol)
    return make_divisor(curve, [((a, 1), 1), ((a, -1), 1)] + poles, tol)


def divisor_from_json(curve: CurveDescriptor, records: list[dict], tol: Tolerances = DEFAULT) -> Divisor:
    items = []
    for rec in records:
        x = rec["x"]
        if isinstance(x, str):
            pt = x
        else:
            pt = (complex(x[0], x[1]), int(rec.get("sheet", 1)))
        items.append((pt, int(rec["mult"])))
    return make_divisor(curve, items, tol)


def is_principal_X(curve, d: Divisor, periods, basepoint=None, tol: Tolerances = DEFAULT):
    """Abel's criterion. Returns ``(principal, residual, reason)``."""
    from .jacobian import abel_jacobi, lattice_from_periods

    if degree(d) != 0:
        return False, float("inf"), "DegreeNonzero"
    if not d.support:
        return True, 0.0, "empty"
    z = abel_jacobi(curve, periods, d, basepoint, tol)
    res = lattice_from_periods(periods).distance(z.value)
    return res < tol.lattice, res, "abel"


def is_principal_Y(curve, d: QuotientDivisor, periods, basepoint=None, tol: Tolerances = DEFAULT):
    """Principality on Y, decided through the pullback to X."""
    return is_principal_X(curve, pullback(curve, d), periods, basepoint, tol)

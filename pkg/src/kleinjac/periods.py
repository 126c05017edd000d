"""Integration of the holomorphic differentials ``x**(k-1) dx / y`` and period matrices.

Every lifted path is cut into the short pieces produced by the continuation
(each much shorter than its distance to the branch locus), so on a piece the
integrand is analytic in a wide neighbourhood and ``y`` is obtained from the
value at the piece start as ``y0 * sqrt(p(x) / p(x0))`` with the principal root.
Each piece gets 32-point Gauss-Legendre with adaptive bisection.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from . import errors
from .config import DEFAULT, Tolerances
from .curve import CurveDescriptor, SurfacePath, trace
from .topology import Cycle, HomologyBasis

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _gl_pieces(f, a, b, ya, tol: Tolerances):
    """Adaptive GL on pieces ``[a_i, b_i]`` with ``y = ya_i`` known at ``a_i``.

    ``f(x, anchor, y_anchor)`` returns integrand values shaped (pieces, nodes, g).
    """
    anchor = a

    def rule(a, b, anchor, ya):
        half = 0.5 * (b - a)
        x = (0.5 * (a + b))[:, None] + half[:, None] * GL_NODES[None, :]
        w = (half[:, None] * GL_WEIGHTS[None, :])[..., None]
        wv = w * f(x, anchor, ya)
        return np.sum(wv, axis=1), np.sum(np.abs(wv), axis=1)

    total = 0j
    whole, _ = rule(a, b, anchor, ya)
    for _depth in range(tol.max_depth + 1):
        mid = 0.5 * (a + b)
        left, sl = rule(a, mid, anchor, ya)
        right, sr = rule(mid, b, anchor, ya)
        refined = left + right
        scale = np.maximum(np.max(np.abs(refined), axis=1), 1e-3 * np.max(sl + sr, axis=1))
        err = np.max(np.abs(refined - whole), axis=1)
        ok = err <= tol.quad * np.maximum(scale, 1e-300)
        total = total + np.sum(refined[ok], axis=0)
        if np.all(ok):
            return total
        bad = ~ok
        a, b = np.concatenate([a[bad], mid[bad]]), np.concatenate([mid[bad], b[bad]])
        anchor = np.concatenate([anchor[bad], anchor[bad]])
        ya = np.concatenate([ya[bad], ya[bad]])
        whole = np.concatenate([left[bad], right[bad]])
    raise errors.QuadratureStall("Gauss-Legendre bisection did not converge")


def _monomials(x, g):
    return np.stack([x**k for k in range(g)], axis=-1)


def _path_integrand(curve: CurveDescriptor):
    g = curve.genus

    def f(x, anchor, ya):
        y = ya[:, None] * np.sqrt(curve.p(x) / curve.p(anchor)[:, None])
        return _monomials(x, g) / y[..., None]

    return f


@functools.lru_cache(maxsize=8192)
def _integrate_path(curve, path, tol):
    tr = trace(curve, path, tol)
    if len(tr.x) < 2:
        return np.zeros(curve.genus, dtype=complex)
    return _gl_pieces(_path_integrand(curve), tr.x[:-1], tr.x[1:], tr.y[:-1], tol)


def integrate_path(curve: CurveDescriptor, path: SurfacePath, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Integrals of all ``g`` monomial differentials along ``path``."""
    return _integrate_path(curve, path, tol).copy()


def integrate_form(curve: CurveDescriptor, k: int, path: SurfacePath, tol: Tolerances = DEFAULT) -> complex:
    """Integral of ``x**(k-1) dx / y`` along the lifted ``path`` (``1 <= k <= g``)."""
    if not 1 <= k <= curve.genus:
        raise ValueError(f"k must lie in 1..{curve.genus}")
    return complex(_integrate_path(curve, path, tol)[k - 1])


def integrate_cycle(curve, cycle: Cycle, tol: Tolerances = DEFAULT) -> np.ndarray:
    out = np.zeros(curve.genus, dtype=complex)
    for a, p in cycle.terms:
        out += a * _integrate_path(curve, p, tol)
    return out


def _reverse_poly(curve):
    # t**(2g+2) p(1/t) / lead, highest power first
    return np.array([float(c) for c in curve.coeffs]) / curve.lead


def infinity_tail(curve: CurveDescriptor, x_start: complex, y_start: complex, tol: Tolerances = DEFAULT):
    """Integral from ``(x_start, y_start)`` radially out to the point at infinity it reaches.

    Uses the chart ``t = 1/x`` in which every holomorphic differential is regular.
    Returns ``(integrals, symbol)``.
    """
    from .curve import INF_MINUS, INF_PLUS

    g = curve.genus
    rp = _reverse_poly(curve)
    t0 = 1.0 / x_start
    w0 = t0 ** (g + 1) * y_start
    sq = np.sqrt(complex(curve.lead))
    ratio = w0 / (sq * np.sqrt(np.polyval(rp, t0)))
    s = 1.0 if ratio.real > 0 else -1.0

    def f(s_var, a, ya):
        t = t0 * (1.0 - s_var)
        w = s * sq * np.sqrt(np.polyval(rp, t))
        return t0 * np.stack([t ** (g - 1 - k) for k in range(g)], axis=-1) / w[..., None]

    val = _gl_pieces(f, np.array([0.0 + 0j]), np.array([1.0 + 0j]), np.array([1.0 + 0j]), tol)
    return val, (INF_PLUS if s > 0 else INF_MINUS)


def infinity_start_y(curve: CurveDescriptor, x_start: complex, symbol: str) -> complex:
    """The ``y`` at ``x_start`` whose radial continuation reaches ``symbol``."""
    from .curve import INF_PLUS

    g = curve.genus
    t0 = 1.0 / x_start
    s = 1.0 if symbol == INF_PLUS else -1.0
    w0 = s * np.sqrt(complex(curve.lead)) * np.sqrt(np.polyval(_reverse_poly(curve), t0))
    return complex(w0 / t0 ** (g + 1))


def branch_tail(curve: CurveDescriptor, b_index: int, x_start: complex, y_start: complex, tol: Tolerances = DEFAULT):
    """Integral from ``(x_start, y_start)`` straight into the branch point ``bp[b_index]``.

    Uses the local parameter ``u`` with ``x = b + u**2``.
    """
    g = curve.genus
    b = curve.bp[b_index]
    others = np.delete(curve.bp, b_index)
    u0 = np.sqrt(x_start - b)

    def q(u):
        return curve.lead * np.prod((b + u[..., None] ** 2) - others, axis=-1)

    h0 = y_start / u0
    q0 = q(np.array([u0]))[0]

    def f(s_var, a, ya):
        u = u0 * (1.0 - s_var)
        h = h0 * np.sqrt(q(u) / q0)
        x = b + u**2
        return -u0 * 2.0 * _monomials(x, g) / h[..., None]

    return _gl_pieces(f, np.array([0.0 + 0j]), np.array([1.0 + 0j]), np.array([1.0 + 0j]), tol)


@dataclass(frozen=True)
class PeriodData:
    """Periods of the monomial differentials and the normalized (adapted) data.

    ``full_periods[k, c]`` integrates ``x**k dx / y`` over basis cycle ``c``;
    the adapted differentials are ``omega_j = sum_k normalization[j, k] x**k dx / y``.
    """

    full_periods: np.ndarray
    normalization: np.ndarray
    tau: np.ndarray
    quality: dict = field(default_factory=dict)
    basis: HomologyBasis | None = field(default=None, compare=False, repr=False)

    @property
    def genus(self) -> int:
        return self.tau.shape[0]

    def to_json(self) -> dict:
        def cm(m):
            return [[[z.real, z.imag] for z in row] for row in np.atleast_2d(m)]

        return {
            "full_periods": cm(self.full_periods),
            "normalization": cm(self.normalization),
            "tau": cm(self.tau),
            "quality": dict(self.quality),
        }


def period_matrix(curve: CurveDescriptor, basis: HomologyBasis, tol: Tolerances = DEFAULT) -> PeriodData:
    """Full and normalized period matrices for ``basis``."""
    g = curve.genus
    full = np.column_stack([integrate_cycle(curve, c, tol) for c in basis.cycles])
    a_block = full[:, :g]
    cond = np.linalg.cond(a_block)
    if not np.isfinite(cond) or cond > tol.cond_max:
        raise errors.SingularPeriodBlock(f"gamma-period block has condition number {cond:.3g}")
    c = np.linalg.inv(a_block)
    tau = c @ full[:, g:]
    pd = PeriodData(full, c, tau, {}, basis)
    return PeriodData(full, c, tau, riemann_validate(pd), basis)


def riemann_validate(periods: PeriodData) -> dict:
    """Symmetry defect of tau, smallest eigenvalue of Im tau, and the gamma-block defect."""
    tau = periods.tau
    g = tau.shape[0]
    gamma_block = periods.normalization @ periods.full_periods[:, :g]
    im = tau.imag
    return {
        "symmetry_defect": float(np.max(np.abs(tau - tau.T))),
        "min_eig_im_tau": float(np.min(np.linalg.eigvalsh(0.5 * (im + im.T)))),
        "gamma_block_defect": float(np.max(np.abs(gamma_block - np.eye(g)))),
    }


def conjugate_cycle_periods(curve, basis: HomologyBasis, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Monomial integrals over the sigma-images of the basis cycles, by direct quadrature."""
    return np.column_stack([integrate_cycle(curve, c.conjugate(curve), tol) for c in basis.cycles])


def sigma_invariance_residual(curve, basis: HomologyBasis, periods: PeriodData, tol: Tolerances = DEFAULT) -> float:
    """``max |int_{sigma c} omega_j - conj(int_c omega_j)|`` over basis cycles and j."""
    conj_periods = periods.normalization @ conjugate_cycle_periods(curve, basis, tol)
    direct = periods.normalization @ periods.full_periods
    return float(np.max(np.abs(conj_periods - np.conj(direct))))


def is_positive_definite(m: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(0.5 * (m + m.T))
    except np.linalg.LinAlgError:
        return False
    return True

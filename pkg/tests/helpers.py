"""Random test data: points, divisors and translates."""

import numpy as np

from kleinjac import INF_MINUS, INF_PLUS, make_divisor, make_quotient_divisor


def separation(curve):
    d = np.abs(curve.bp[:, None] - curve.bp[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(np.min(d))


def random_x(curve, rng, clearance=0.08):
    """Complex x in a box around the branch points, away from all of them."""
    r = 1.3 * curve.scale
    sep = separation(curve)
    while True:
        x = complex(rng.uniform(-r, r), rng.uniform(-r, r))
        if np.min(np.abs(curve.bp - x)) > clearance * sep:
            return x


def random_point(curve, rng, special=True):
    """Finite generic point, occasionally a branch point or a point at infinity."""
    u = rng.random()
    if special and u < 0.08:
        return INF_PLUS if rng.random() < 0.5 else INF_MINUS
    if special and u < 0.16:
        b = curve.bp[rng.integers(len(curve.bp))]
        return (complex(b), 1)
    return (random_x(curve, rng), int(rng.choice([1, -1])))


def random_divisor(curve, rng, size=4, degree0=False, special=True):
    items = [(random_point(curve, rng, special), int(rng.integers(-3, 4)) or 1) for _ in range(size)]
    if degree0:
        total = sum(n for _, n in items)
        items.append((random_point(curve, rng, special), -total))
    return make_divisor(curve, items)


def random_quotient_divisor(curve, rng, size=3, degree0=False, special=True):
    items = [(random_point(curve, rng, special), int(rng.integers(-3, 4)) or 1) for _ in range(size)]
    if degree0:
        total = sum(n for _, n in items)
        items.append((random_point(curve, rng, special), -total))
    return make_quotient_divisor(curve, items)


def div_of_y_minus_poly(curve, q):
    """Divisor of ``y - q(x)`` with ``deg q <= g`` (``q`` lowest degree first).

    Zeros are the roots of ``p - q^2`` on the sheet where ``y = q(x)``; the
    poles have order ``g + 1`` at both points at infinity.
    """
    p = np.array([float(c) for c in curve.coeffs])
    q = np.asarray(q, dtype=float)
    r = p.copy()
    r[: 2 * len(q) - 1] -= np.polynomial.polynomial.polymul(q, q)
    xs = np.polynomial.polynomial.polyroots(r)
    dr = np.polynomial.polynomial.polyder(r)
    xs = xs - np.polynomial.polynomial.polyval(xs, r) / np.polynomial.polynomial.polyval(xs, dr)
    g = curve.genus
    items = [(curve.point_from_y(complex(x), complex(np.polynomial.polynomial.polyval(x, q))), 1) for x in xs]
    items += [(INF_PLUS, -(g + 1)), (INF_MINUS, -(g + 1))]
    return make_divisor(curve, items)

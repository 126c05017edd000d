import numpy as np

from kleinjac import analyze, canonical_homology_basis, validate_curve
from kleinjac import intlinalg as il
from kleinjac.curve import SurfacePath
from kleinjac.errors import RepeatedRoot
from kleinjac.topology import (
    Cycle,
    SigmaHomologyAction,
    adapt_basis_to_sigma,
    coordinates,
    generating_cycles,
    intersection_matrix,
    intersection_number,
    loop_around,
)
from oracles import ellipse_chain, ellipse_points, trapezoid_periods


def test_g1_basis_shape(g1):
    b = canonical_homology_basis(g1)
    assert len(b.cycles) == 2
    assert il.equal(b.intersection, [[0, -1], [1, 0]])


def test_intersection_matrix_is_standard(shipped):
    c, an = shipped
    g = c.genus
    j = il.standard_J(g)
    assert il.equal(an.basis.intersection, j)
    # recompute from the cycles themselves rather than trusting the stored form
    assert il.equal(intersection_matrix(c, an.basis.cycles), j)
    assert il.equal(intersection_matrix(c, an.raw_basis.cycles), j)


def test_g2_generators_unimodular(g2):
    gens = generating_cycles(g2)[:4]
    k = intersection_matrix(g2, gens)
    assert abs(il.det(k)) == 1


def test_alpha_beta_signs(shipped):
    c, an = shipped
    g = c.genus
    a1, b1 = an.basis.cycles[0], an.basis.cycles[g]
    assert intersection_number(c, a1, b1) == -1
    assert intersection_number(c, b1, a1) == 1


def test_self_intersection_zero(shipped):
    c, an = shipped
    for cyc in an.basis.cycles:
        assert intersection_number(c, cyc, cyc) == 0


def _ellipse_cycles(c, n=400):
    """Closed ellipse cycles routed independently of the lasso construction."""
    out = []
    ch = ellipse_chain(c.bp)
    for m in range(len(ch) - 1):
        x, dx = ellipse_points(c.bp[ch[m]], c.bp[ch[m + 1]], c.bp, 4000)
        _, y0, closes = trapezoid_periods(c.coeffs, x, dx, 1)
        assert closes
        xp = x[:: 4000 // n]
        for sheet in (1, -1):
            out.append(Cycle.from_path(SurfacePath(tuple(xp), sheet * c.sheet_of(xp[0], y0), True)))
    return out


def test_antisymmetry_random_pairs(shipped):
    c, an = shipped
    cycles = _ellipse_cycles(c) + list(an.basis.cycles)
    rng = np.random.default_rng(11)
    for _ in range(10):
        i, j = rng.choice(len(cycles), 2, replace=False)
        assert intersection_number(c, cycles[i], cycles[j]) == -intersection_number(c, cycles[j], cycles[i])


def test_crossings_match_coordinates(shipped):
    # signed crossing count equals the bilinear form evaluated on integer coordinates
    c, an = shipped
    cycles = _ellipse_cycles(c)
    coords = [coordinates(c, an.basis, cyc) for cyc in cycles]
    j = an.basis.intersection
    rng = np.random.default_rng(5)
    for _ in range(10):
        i, k = rng.choice(len(cycles), 2, replace=False)
        u, v = coords[i].reshape(-1, 1), coords[k].reshape(-1, 1)
        assert intersection_number(c, cycles[i], cycles[k]) == int((u.T @ j @ v)[0, 0])


def test_opposite_sheet_is_negative_cycle(g2):
    cycles = _ellipse_cycles(g2)
    basis = analyze(g2).basis
    for up, down in zip(cycles[::2], cycles[1::2]):
        assert np.array_equal(coordinates(g2, basis, up), -coordinates(g2, basis, down))


def test_sigma_action_exact(shipped):
    c, an = shipped
    g = c.genus
    j = il.standard_J(g)
    eye = il.identity(2 * g)
    for s in (an.raw_action.matrix, an.action.matrix):
        assert il.equal(s @ s, eye)
        assert il.equal(s.T @ j @ s, -j)


def test_adapted_fixes_first_half(shipped):
    c, an = shipped
    g = c.genus
    eye = il.identity(2 * g)
    assert il.equal(an.action.matrix[:, :g], eye[:, :g])
    assert abs(il.det(an.change)) == 1
    assert il.equal(an.change.T @ il.standard_J(g) @ an.change, il.standard_J(g))


def test_conjugation_symmetric_cycle_maps_to_plus_minus_itself(g1):
    # an ellipse around the cut {i, -i} is carried to itself as a set by sigma
    an = analyze(g1)
    x, dx = ellipse_points(1j, -1j, g1.bp, 4000)
    _, y0, closes = trapezoid_periods(g1.coeffs, x, dx, 1)
    path = SurfacePath(tuple(x[::10]), g1.sheet_of(x[0], y0), True)
    cyc = Cycle.from_path(path)
    v = coordinates(g1, an.basis, cyc)
    w = coordinates(g1, an.basis, cyc.conjugate(g1))
    assert np.array_equal(w, v) or np.array_equal(w, -v)
    assert sum(abs(int(t)) for t in v) == 1


def test_adaptation_identity_when_already_fixed(g1):
    an = analyze(g1)
    new, act, change = adapt_basis_to_sigma(an.basis, an.action)
    assert il.equal(change, il.identity(2))
    assert il.equal(act.matrix, an.action.matrix)


def test_adaptation_of_permuted_basis(g2):
    # start from a canonical basis where sigma_# does not fix the first half
    an = analyze(g2)
    g = 2
    j = il.standard_J(g)
    # symplectic swap gamma_1 <-> delta_1 (with a sign to keep J)
    perm = il.as_int_matrix([[0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1]])
    assert il.equal(perm.T @ j @ perm, j)
    cycles = tuple(Cycle.combine(perm[:, k], an.basis.cycles) for k in range(4))
    basis = type(an.basis)(cycles, j)
    s = il.as_int_matrix(il.inverse(perm) @ an.action.matrix @ perm)
    assert not il.equal(s[:, :g], il.identity(4)[:, :g])
    new, act, change = adapt_basis_to_sigma(basis, SigmaHomologyAction(s))
    assert il.equal(act.matrix[:, :g], il.identity(4)[:, :g])
    assert il.equal(new.intersection, j)
    assert il.equal(intersection_matrix(g2, new.cycles), j)


def test_loop_around_pair_is_closed_cycle(g1):
    cyc = Cycle.from_path(loop_around(0j, 1.5, 1))
    assert intersection_number(g1, cyc, cyc) == 0


def _random_imaginary_curve(rng, g):
    # -(prod (x - b)(x - conj b)) with b in the upper half-plane, integer coefficients
    p = np.poly1d([-1.0])
    for _ in range(g + 1):
        b = complex(rng.integers(-4, 5), rng.integers(1, 5))
        p *= np.poly1d([1.0, -2 * b.real, abs(b) ** 2])
    return [int(round(t)) for t in p.coeffs[::-1]]


def test_adaptation_on_random_curves():
    rng = np.random.default_rng(11)
    done = 0
    while done < 12:
        g = 1 + done % 3
        try:
            c = validate_curve(_random_imaginary_curve(rng, g))
        except RepeatedRoot:
            continue
        an = analyze(c)
        s, j = an.action.matrix, il.standard_J(g)
        assert il.equal(intersection_matrix(c, an.basis.cycles), j)
        assert il.equal(s[:, :g], il.identity(2 * g)[:, :g])
        assert il.equal(s.T @ j @ s, -j)
        done += 1

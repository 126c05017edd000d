import numpy as np
import pytest

from kleinjac import analyze, errors
from kleinjac.curve import INF_MINUS, INF_PLUS, SurfacePoint, sigma_point
from kleinjac.divisors import (
    Divisor,
    QuotientDivisor,
    degree,
    descend,
    div_of_x_translate,
    divisor_from_json,
    is_principal_X,
    is_principal_Y,
    is_sigma_fixed,
    make_divisor,
    make_quotient_divisor,
    pullback,
    pushforward,
    sigma_star,
    y_representative,
)
from helpers import random_divisor, random_quotient_divisor, random_x


def test_degree_examples(g1):
    p, q = (0.3 + 0.2j, 1), (1.1 - 0.4j, -1)
    assert degree(Divisor()) == 0
    assert degree(make_divisor(g1, [(p, 2), (q, -2)])) == 0
    assert degree(make_divisor(g1, [(p, 3), (q, 1)])) == 4


def test_merging_and_zero_removal(g1):
    d = make_divisor(g1, [((0.5 + 0.5j, 1), 2), ((0.5 + 0.5j + 1e-13, 1), -2), ((0.5 + 0.5j, -1), 1)])
    assert len(d) == 1
    assert d.support[0][0].sheet == -1


def test_sigma_star_properties(shipped):
    c, _ = shipped
    rng = np.random.default_rng(1)
    for _ in range(30):
        d = random_divisor(c, rng)
        assert sigma_star(c, sigma_star(c, d)) == d
        assert degree(sigma_star(c, d)) == degree(d)


def test_sigma_stable_pair(g1):
    p = g1.point(0.7 + 0.3j, -1)
    d = Divisor(((p, 2), (sigma_point(g1, p), 2)))
    assert sigma_star(g1, d) == d


def test_pullback_examples(g2):
    y0 = g2.point(0.4 + 1.7j, 1)
    q = QuotientDivisor(((y0, 1),))
    assert pullback(g2, q) == Divisor(((y0, 1), (sigma_point(g2, y0), 1)))


def test_pushforward_of_sigma_pair(g2):
    p = g2.point(-1.1 - 0.8j, 1)
    e = Divisor(((p, 1), (sigma_point(g2, p), 1)))
    assert pushforward(g2, e) == QuotientDivisor(((y_representative(g2, p), 2),))


@pytest.mark.parametrize("seed", range(3))
def test_exact_identities_on_random_divisors(shipped, seed):
    c, _ = shipped
    rng = np.random.default_rng(100 + seed)
    for _ in range(40):
        d = random_quotient_divisor(c, rng, size=4)
        e = random_divisor(c, rng, size=4)
        assert pushforward(c, pullback(c, d)) == 2 * d
        assert pullback(c, pushforward(c, e)) == e + sigma_star(c, e)
        assert degree(pullback(c, d)) == 2 * degree(d)
        assert degree(pushforward(c, e)) == degree(e)
        assert degree(sigma_star(c, e)) == degree(e)
        assert is_sigma_fixed(c, pullback(c, d))
        assert descend(c, pullback(c, d)) == d


def test_non_fixed_divisor_does_not_descend(g1):
    p = g1.point(0.2 + 0.9j, 1)
    d = Divisor(((p, 1),))
    assert not is_sigma_fixed(g1, d)
    with pytest.raises(errors.DivisorError):
        descend(g1, d)
    with pytest.raises(errors.DivisorError):
        descend(g1, Divisor(((p, 1), (sigma_point(g1, p), 2))))


def test_y_representatives(g1):
    lower = g1.point(0.3 - 0.5j, 1)
    rep = y_representative(g1, lower)
    assert rep.x.imag > 0
    assert y_representative(g1, rep) == rep
    assert y_representative(g1, g1.point(INF_MINUS)).x == INF_PLUS
    real = g1.point(0.5, -1)
    assert y_representative(g1, real) == y_representative(g1, sigma_point(g1, real))
    assert y_representative(g1, real).sheet == 1


def test_div_x_translate(g1):
    d = div_of_x_translate(g1, 3)
    assert degree(d) == 0
    assert d == make_divisor(g1, [((3, 1), 1), ((3, -1), 1), (INF_PLUS, -1), (INF_MINUS, -1)])


def test_div_x_translate_conjugates(g2):
    a = 0.7 + 1.2j
    assert sigma_star(g2, div_of_x_translate(g2, a)) == div_of_x_translate(g2, np.conj(a))


def test_div_x_translate_at_branch_point(g1):
    with pytest.raises(errors.BranchValue):
        div_of_x_translate(g1, 1j)
    d = div_of_x_translate(g1, 1j, allow_branch=True)
    assert d == make_divisor(g1, [((1j, 1), 2), (INF_PLUS, -1), (INF_MINUS, -1)])


def test_json_round_trip(g2):
    rng = np.random.default_rng(9)
    d = random_divisor(g2, rng, size=5)
    assert divisor_from_json(g2, d.to_json()) == d


def test_principal_translates(shipped):
    c, an = shipped
    rng = np.random.default_rng(21)
    for _ in range(5):
        ok, res, _ = is_principal_X(c, div_of_x_translate(c, random_x(c, rng)), an.periods)
        assert ok and res < 1e-6


def test_principal_div_x_minus_3(g1):
    ok, res, _ = is_principal_X(g1, div_of_x_translate(g1, 3), analyze(g1).periods)
    assert ok and res < 1e-6


def test_point_minus_conjugate_not_principal(g1):
    p = g1.point(0.6 + 0.35j, 1)
    d = Divisor(((p, 1), (sigma_point(g1, p), -1)))
    ok, res, _ = is_principal_X(g1, d, analyze(g1).periods)
    assert not ok and res > 1e-2


def test_empty_and_degree_guard(g1):
    pd = analyze(g1).periods
    assert is_principal_X(g1, Divisor(), pd) == (True, 0.0, "empty")
    ok, res, reason = is_principal_X(g1, make_divisor(g1, [((0.5j + 0.5, 1), 1)]), pd)
    assert not ok and reason == "DegreeNonzero"


def test_principal_on_Y(shipped):
    c, an = shipped
    # pi(a, +1) - pi(oo) pulls back to div(x - a) for real a
    d = make_quotient_divisor(c, [((3.0, 1), 1), (INF_PLUS, -1)])
    ok, res, _ = is_principal_Y(c, d, an.periods)
    assert ok and res < 1e-6
    # pushforward of a principal sigma-stable divisor
    e = pushforward(c, div_of_x_translate(c, 3.0))
    assert is_principal_Y(c, e, an.periods)[0]
    assert is_principal_Y(c, QuotientDivisor(), an.periods)[0]


def test_generic_quotient_not_principal(g1):
    d = make_quotient_divisor(g1, [((0.4 + 0.7j, 1), 1), ((-1.3 + 0.2j, -1), -1)])
    ok, res, _ = is_principal_Y(g1, d, analyze(g1).periods)
    assert not ok and res > 1e-2


def test_surface_point_is_hashable():
    assert len({SurfacePoint(1j, 1), SurfacePoint(1j, 1), SurfacePoint(1j, -1)}) == 2

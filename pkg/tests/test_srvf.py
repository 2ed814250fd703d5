import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from elastic_shapes.errors import GroupMismatch, InvalidGamma
from elastic_shapes.matgroup import SpecialLinear, SpecialOrthogonal, mat_exp
from elastic_shapes.srvf import (
    DiscreteGroupCurve,
    Reparametrization,
    SrvPair,
    StepMap,
    ac_distance,
    combine,
    g_act,
    gamma_act,
    l2_distance,
    l2_inner,
    product_geodesic,
    srvf_forward,
    srvf_inverse,
    uniform_grid,
)

from helpers import (
    random_element,
    random_group_curve,
    random_pair,
    random_skew,
    random_step_map,
)

seeds = st.integers(0, 2**32 - 1)
GROUPS = [SpecialOrthogonal(3), SpecialLinear(3), SpecialOrthogonal(2), SpecialLinear(2)]
group_st = st.sampled_from(GROUPS)


def random_warp(rng, knots=6, flat=False):
    t = np.concatenate([[0.0], np.sort(rng.uniform(0.02, 0.98, knots - 2)), [1.0]])
    s = np.concatenate([[0.0], np.sort(rng.uniform(0.0, 1.0, knots - 2)), [1.0]])
    if flat:
        s[2] = s[1]
    return Reparametrization(t, s)


# -- forward transform


def test_forward_of_constant_curve():
    g0 = mat_exp(random_skew(np.random.default_rng(1), 3))
    alpha = DiscreteGroupCurve(SpecialOrthogonal(3), np.repeat(g0[None], 6, axis=0))
    pair = srvf_forward(alpha)
    np.testing.assert_array_equal(pair.start, g0)
    np.testing.assert_array_equal(pair.q.values, 0.0)


@pytest.mark.parametrize("speed", [1.0, 2.5, 0.3])
def test_forward_of_one_parameter_subgroup(speed):
    rng = np.random.default_rng(2)
    v = random_skew(rng, 3, norm=speed)
    g0 = mat_exp(random_skew(rng, 3))
    t = uniform_grid(10)
    alpha = DiscreteGroupCurve(SpecialOrthogonal(3), np.array([g0 @ mat_exp(ti * v) for ti in t]))
    pair = srvf_forward(alpha)
    np.testing.assert_allclose(pair.start, g0)
    np.testing.assert_allclose(pair.q.values, np.repeat((v / np.sqrt(speed))[None], 10, axis=0), atol=1e-12)


# -- inverse transform


def test_inverse_of_zero_map():
    g = SpecialLinear(2)
    e = np.array([[2.0, 1.0], [1.0, 1.0]])
    curve = srvf_inverse(SrvPair(g, e, StepMap.uniform(np.zeros((4, 2, 2)))))
    np.testing.assert_array_equal(curve.samples, np.repeat(e[None], 5, axis=0))


def test_inverse_of_constant_unit_map():
    rng = np.random.default_rng(3)
    v = random_skew(rng, 3, norm=1.0)
    pair = SrvPair(SpecialOrthogonal(3), np.eye(3), StepMap.uniform(np.repeat(v[None], 8, axis=0)))
    curve = srvf_inverse(pair)
    for ti, a in zip(curve.times, curve.samples):
        np.testing.assert_allclose(a, mat_exp(ti * v), atol=1e-13)


@given(seeds, group_st, st.integers(1, 30))
def test_inverse_then_forward_is_identity(seed, group, n):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng, group, n)
    back = srvf_forward(srvf_inverse(pair))
    np.testing.assert_allclose(back.start, pair.start, atol=1e-12)
    np.testing.assert_allclose(back.q.breaks, pair.q.breaks, atol=1e-15)
    assert np.max(np.abs(back.q.values - pair.q.values)) < 1e-9


@given(seeds, group_st, st.integers(1, 30))
def test_forward_then_inverse_is_identity(seed, group, n):
    rng = np.random.default_rng(seed)
    alpha = random_group_curve(rng, group, n)
    back = srvf_inverse(srvf_forward(alpha))
    assert np.max(np.abs(back.samples - alpha.samples)) < 1e-9


@given(seeds, group_st)
def test_inverse_at_arbitrary_times_follows_subgroups(seed, group):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng, group, 5)
    knots = srvf_inverse(pair).samples
    t = rng.uniform(0, 1, 7)
    out = srvf_inverse(pair, times=t).samples
    for ti, a in zip(t, out):
        k = min(int(ti * 5), 4)
        v = pair.q.values[k]
        expected = knots[k] @ mat_exp((ti - k / 5) * np.linalg.norm(v) * v)
        np.testing.assert_allclose(a, expected, atol=1e-12)


# -- step maps


def test_step_map_validation():
    with pytest.raises(ValueError):
        StepMap(np.array([0.0, 0.6, 0.5, 1.0]), np.zeros((3, 2)))
    with pytest.raises(ValueError):
        StepMap(np.array([0.0, 0.5]), np.zeros((1, 2)))


@given(seeds)
def test_refine_and_resample_preserve_the_map(seed):
    rng = np.random.default_rng(seed)
    q = StepMap.uniform(rng.normal(size=(4, 2)))
    fine = q.refine(uniform_grid(12))
    assert l2_distance(q, fine) == 0.0
    np.testing.assert_allclose(fine.resample(4).values, q.values, atol=1e-14)


@given(seeds)
def test_l2_inner_matches_fine_quadrature(seed):
    rng = np.random.default_rng(seed)
    a = StepMap(np.concatenate([[0], np.sort(rng.uniform(0, 1, 3)), [1]]), rng.normal(size=(4, 2, 2)))
    b = StepMap.uniform(rng.normal(size=(3, 2, 2)))
    m = 200000
    mids = (np.arange(m) + 0.5) / m
    quad = np.sum(a(mids) * b(mids)) / m
    assert l2_inner(a, b) == pytest.approx(quad, abs=1e-3)
    assert l2_distance(a, a) == 0.0


# -- reparametrizations


def test_gamma_identity_leaves_q_unchanged():
    rng = np.random.default_rng(4)
    q = random_step_map(rng, SpecialOrthogonal(3), 6)
    out = gamma_act(q, Reparametrization.identity())
    assert l2_distance(out, q) == 0.0


def test_gamma_flat_first_half_zeroes_output():
    q = StepMap.uniform(np.ones((4, 2, 2)))
    gamma = Reparametrization(np.array([0.0, 0.5, 1.0]), np.array([0.0, 0.0, 1.0]))
    out = gamma_act(q, gamma)
    mids = np.linspace(0.01, 0.49, 20)
    np.testing.assert_array_equal(out(mids), 0.0)
    np.testing.assert_allclose(out(mids + 0.5), np.sqrt(2.0))


def test_gamma_preserves_norm_of_constant_map():
    # PL interpolant of s -> s^2 (positive slope everywhere)
    t = np.linspace(0, 1, 17)
    gamma = Reparametrization(t, t**2 + 1e-3 * t * (1 - t))
    v = random_skew(np.random.default_rng(5), 3)
    q = StepMap.uniform(np.repeat(v[None], 5, axis=0))
    out = gamma_act(q, gamma)
    assert out.l2_norm() == pytest.approx(q.l2_norm(), rel=1e-13)
    # change of variables oracle by fine quadrature
    m = 400000
    mids = (np.arange(m) + 0.5) / m
    vals = q(gamma(mids)) * np.sqrt(gamma.derivative(mids))[:, None, None]
    assert out.l2_norm() ** 2 == pytest.approx(np.sum(vals**2) / m, rel=1e-5)


def test_invalid_gamma():
    with pytest.raises(InvalidGamma):
        Reparametrization(np.array([0.0, 0.5, 1.0]), np.array([0.0, 0.7, 0.6]))
    with pytest.raises(InvalidGamma):
        Reparametrization(np.array([0.0, 1.0]), np.array([0.1, 1.0]))
    with pytest.raises(InvalidGamma):
        gamma_act(StepMap.uniform(np.zeros((2, 2))), lambda t: t)


@given(seeds)
def test_gamma_composition(seed):
    rng = np.random.default_rng(seed)
    q = random_step_map(rng, SpecialLinear(2), 5)
    g1, g2 = random_warp(rng), random_warp(rng)
    # (q * g1) * g2 = q * (g1 o g2); build g1 o g2 on the union of knots
    t = np.union1d(g2.t, np.interp(g1.t, g2.s, g2.t))
    comp = Reparametrization(t, g1(g2(t)))
    lhs = gamma_act(gamma_act(q, g1), g2)
    rhs = gamma_act(q, comp)
    assert l2_distance(lhs, rhs) < 1e-9


@given(seeds)
def test_gamma_inverse(seed):
    rng = np.random.default_rng(seed)
    gamma = random_warp(rng)
    inv = gamma.inverse()
    t = rng.uniform(0, 1, 20)
    np.testing.assert_allclose(inv(gamma(t)), t, atol=1e-12)
    with pytest.raises(InvalidGamma):
        random_warp(rng, flat=True).inverse()


# -- group action and distance


def test_g_act_examples():
    rng = np.random.default_rng(6)
    group = SpecialOrthogonal(3)
    pair = random_pair(rng, group, 4)
    same = g_act(pair, np.eye(3))
    np.testing.assert_array_equal(same.start, pair.start)
    assert same.q is pair.q
    home = g_act(pair, pair.start.T)
    np.testing.assert_allclose(home.start, np.eye(3), atol=1e-14)
    with pytest.raises(GroupMismatch):
        g_act(pair, 2 * np.eye(3))


@given(seeds, group_st)
def test_g_act_matches_left_translation(seed, group):
    rng = np.random.default_rng(seed)
    alpha = random_group_curve(rng, group, 7)
    g = random_element(rng, group)
    moved = DiscreteGroupCurve(group, g @ alpha.samples)
    lhs = srvf_forward(moved)
    rhs = g_act(srvf_forward(alpha), g)
    np.testing.assert_allclose(lhs.start, rhs.start, atol=1e-12)
    np.testing.assert_allclose(lhs.q.values, rhs.q.values, atol=1e-9)


@given(seeds, group_st)
def test_actions_commute(seed, group):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng, group, 5)
    g = random_element(rng, group)
    gamma = random_warp(rng)
    a = g_act(SrvPair(group, pair.start, gamma_act(pair.q, gamma)), g)
    b = SrvPair(group, g_act(pair, g).start, gamma_act(g_act(pair, g).q, gamma))
    np.testing.assert_array_equal(a.start, b.start)
    assert l2_distance(a.q, b.q) == 0.0


def test_ac_distance_examples():
    rng = np.random.default_rng(7)
    group = SpecialOrthogonal(3)
    pair = random_pair(rng, group, 4)
    assert ac_distance(pair, pair) == 0.0
    v, w = random_skew(rng, 3), random_skew(rng, 3)
    a = SrvPair(group, np.eye(3), StepMap.uniform(np.repeat(v[None], 3, axis=0)))
    b = SrvPair(group, np.eye(3), StepMap.uniform(np.repeat(w[None], 5, axis=0)))
    assert ac_distance(a, b) == pytest.approx(np.linalg.norm(v - w), rel=1e-14)
    with pytest.raises(GroupMismatch):
        ac_distance(a, SrvPair(SpecialLinear(3), np.eye(3), a.q))


@given(seeds, group_st)
def test_ac_distance_is_a_metric(seed, group):
    rng = np.random.default_rng(seed)
    a, b, c = (random_pair(rng, group, int(rng.integers(1, 8))) for _ in range(3))
    dab, dba = ac_distance(a, b), ac_distance(b, a)
    assert dab >= 0
    if group.kind == "SO":
        assert dab == dba
    else:
        assert dab == pytest.approx(dba, abs=1e-9)
    assert ac_distance(a, c) <= dab + ac_distance(b, c) + 1e-9


@given(seeds, group_st)
def test_ac_distance_reparametrization_invariant(seed, group):
    rng = np.random.default_rng(seed)
    a, b = random_pair(rng, group, 6), random_pair(rng, group, 4)
    gamma = random_warp(rng)
    a2 = SrvPair(group, a.start, gamma_act(a.q, gamma))
    b2 = SrvPair(group, b.start, gamma_act(b.q, gamma))
    assert abs(ac_distance(a2, b2) - ac_distance(a, b)) < 1e-9


@given(seeds, group_st)
def test_ac_distance_left_invariant(seed, group):
    rng = np.random.default_rng(seed)
    a, b = random_pair(rng, group, 6), random_pair(rng, group, 6)
    g = random_element(rng, group)
    assert abs(ac_distance(g_act(a, g), g_act(b, g)) - ac_distance(a, b)) < 1e-9


# -- product geodesic


def test_product_geodesic_endpoints_and_midpoint():
    rng = np.random.default_rng(8)
    group = SpecialLinear(3)
    a, b = random_pair(rng, group, 4), random_pair(rng, group, 6)
    p0, p1 = product_geodesic(a, b, 0.0), product_geodesic(a, b, 1.0)
    np.testing.assert_array_equal(p0.start, a.start)
    np.testing.assert_array_equal(p1.start, b.start)
    assert l2_distance(p0.q, a.q) == 0.0 and l2_distance(p1.q, b.q) == 0.0
    q = random_step_map(rng, group, 5)
    zero = SrvPair(group, np.eye(3), q.scaled(0.0))
    mid = product_geodesic(zero, SrvPair(group, np.eye(3), q), 0.5)
    np.testing.assert_allclose(mid.start, np.eye(3), atol=1e-14)
    assert l2_distance(mid.q, q.scaled(0.5)) < 1e-15


@pytest.mark.parametrize("group", [SpecialOrthogonal(3), SpecialLinear(3)], ids=repr)
def test_product_geodesic_length(group):
    rng = np.random.default_rng(9)
    a, b = random_pair(rng, group, 5), random_pair(rng, group, 3)
    pts = [product_geodesic(a, b, s) for s in np.linspace(0, 1, 101)]
    length = sum(ac_distance(x, y) for x, y in zip(pts[:-1], pts[1:]))
    assert length == pytest.approx(ac_distance(a, b), abs=1e-4)


def test_combine_common_refinement():
    a = StepMap(np.array([0.0, 0.3, 1.0]), np.array([1.0, 2.0]))
    b = StepMap(np.array([0.0, 0.6, 1.0]), np.array([10.0, 20.0]))
    c = combine(a, b, 1.0, 1.0)
    np.testing.assert_allclose(c.breaks, [0.0, 0.3, 0.6, 1.0])
    np.testing.assert_allclose(c.values, [11.0, 12.0, 22.0])

import numpy as np
import pytest

from core.dm import (
    AuxCardinalities,
    FrontierBound,
    InnerAuxDistribution,
    InnerBoundForm,
    OuterAuxDistribution,
    RateEquivocationPoint,
    binary_symmetric,
    cascade_crossover,
    conditional_mi,
    cooperative_mac_rate,
    degraded_binary_wiretap,
    eavesdropper_copy,
    entropy,
    enumerate_frontier,
    from_components,
    inner_bound_point,
    joint_law,
    noiseless_secure,
    outer_bound_point,
    pareto,
    random_channel,
    upper_concave_envelope,
    wthi_lower_bound,
    wthi_objective,
    wyner_reduction_check,
)
from core.dm.channel import check_stochastic
from core.dm.information import brute_force_mi
from core.dm.lattice import DistributionLattice, TableFactor, simplex_lattice, simplex_size
from core.errors import (
    DimensionMismatchError,
    LatticeBudgetExceeded,
    NumericalDomainError,
    OverlappingVariablesError,
    ProbabilityTableError,
)
from core.numerics import binary_entropy
from core.queue import EvaluationPool
from pipelines.self_check_pipeline import random_inner, random_joint, random_outer

WYNER = binary_entropy(0.22) - binary_entropy(0.1)
UNARY = AuxCardinalities(n_u=1, n_v=1, identity_prefix=True)
UNIFORM_BIT = np.array([0.5, 0.5])


def y_equals_x1() -> np.ndarray:
    # p(y | x1, x2) for binary X1, unary X2.
    return np.eye(2)[:, None, :]


def secure_inner() -> InnerAuxDistribution:
    return InnerAuxDistribution.independent(UNIFORM_BIT, [1.0])


def secure_outer() -> OuterAuxDistribution:
    return OuterAuxDistribution(
        p_u=np.ones(1),
        p_v1v2_u=UNIFORM_BIT.reshape(1, 2, 1),
        p_x1x2=np.einsum("ax,bw->abxw", np.eye(2), np.eye(1)),
    )


# ---------------------------------------------------------------------------
# Information engine
# ---------------------------------------------------------------------------

def test_mutual_information_anchors():
    independent = np.outer([0.3, 0.7], [0.6, 0.4])
    assert conditional_mi(independent, [0], [1]) == pytest.approx(0.0, abs=1e-15)
    copy = np.diag(UNIFORM_BIT)
    assert conditional_mi(copy, [0], [1]) == pytest.approx(1.0, abs=1e-15)
    bsc = 0.5 * binary_symmetric(0.1)
    assert conditional_mi(bsc, [0], [1]) == pytest.approx(1.0 - binary_entropy(0.1), abs=1e-12)
    assert conditional_mi(bsc, [0], [1]) == pytest.approx(0.53100, abs=1e-5)


def test_mutual_information_matches_direct_summation():
    rng = np.random.default_rng(0)
    for _ in range(200):
        table = random_joint(rng)
        assert conditional_mi(table, [0], [1], [2]) == pytest.approx(
            brute_force_mi(table, [0], [1], [2]), abs=1e-12)


def test_chain_rule():
    rng = np.random.default_rng(1)
    for _ in range(200):
        table = random_joint(rng)
        lhs = conditional_mi(table, [0, 1], [2])
        rhs = conditional_mi(table, [0], [2]) + conditional_mi(table, [1], [2], [0])
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_mutual_information_rejects_overlap():
    with pytest.raises(OverlappingVariablesError):
        conditional_mi(np.full((2, 2), 0.25), [0], [0, 1])


def test_entropy_of_uniform_table():
    assert entropy(np.full((2, 4), 0.125)) == pytest.approx(3.0)


# ---------------------------------------------------------------------------
# Channels and distributions
# ---------------------------------------------------------------------------

def test_row_sum_violation_names_the_row():
    law = np.full((2, 2, 2, 2), 0.25)
    law[1, 0, 0, 0] -= 0.001
    with pytest.raises(ProbabilityTableError) as info:
        check_stochastic("law", law, event_axes=2)
    assert info.value.row == (1, 0)
    assert "(1, 0)" in str(info.value)


def test_channel_constructors():
    ch = degraded_binary_wiretap(0.1, 0.15)
    assert ch.shape == (2, 1, 2, 2)
    z_given_x = ch.eavesdropper_channel()[:, 0, :]
    np.testing.assert_allclose(z_given_x, binary_symmetric(cascade_crossover(0.1, 0.15)), atol=1e-15)
    assert cascade_crossover(0.1, 0.15) == pytest.approx(0.22)
    with pytest.raises(NumericalDomainError):
        binary_symmetric(1.2)
    with pytest.raises(DimensionMismatchError):
        from_components(np.ones((2, 2, 1)), np.ones((3, 2, 1)))


def test_joint_law_normalization_and_point_mass():
    rng = np.random.default_rng(2)
    ch = random_channel(rng, 2, 3, 2, 2)
    dist = random_inner(rng, 2, 3)
    assert joint_law(dist, ch).total == pytest.approx(1.0, abs=1e-10)
    outer = random_outer(rng, 2, 3)
    assert joint_law(outer, ch).total == pytest.approx(1.0, abs=1e-10)

    point = InnerAuxDistribution.independent([1.0], [1.0], p_x1=np.array([[0.0, 1.0]]))
    table = joint_law(point, noiseless_secure()).table
    assert table.max() == 1.0 and table.sum() == 1.0


def test_joint_law_rejects_mismatched_prefix():
    dist = InnerAuxDistribution.independent(UNIFORM_BIT, [1.0], p_x1=np.full((2, 3), 1.0 / 3.0))
    with pytest.raises(DimensionMismatchError):
        joint_law(dist, noiseless_secure())


def test_outer_form_of_an_inner_distribution_dominates_it():
    rng = np.random.default_rng(4)
    for _ in range(10):
        ch = random_channel(rng)
        dist = random_inner(rng, 2, 2)
        inner = inner_bound_point(dist, ch, 0.5)
        outer = outer_bound_point(dist.as_outer(), ch, 0.5)
        assert outer.dominates(inner, tol=1e-12)


# ---------------------------------------------------------------------------
# Region corners
# ---------------------------------------------------------------------------

def test_rate_equivocation_point_invariant():
    with pytest.raises(NumericalDomainError):
        RateEquivocationPoint(r=0.2, re=0.3)
    with pytest.raises(NumericalDomainError):
        RateEquivocationPoint(r=-0.1, re=0.0)


def test_inner_noiseless_secure_bit():
    point = inner_bound_point(secure_inner(), noiseless_secure(), 0.0)
    assert (point.r, point.re) == pytest.approx((1.0, 1.0))


def test_inner_eavesdropper_sees_everything():
    point = inner_bound_point(secure_inner(), eavesdropper_copy(y_equals_x1()), 0.0)
    assert (point.r, point.re) == pytest.approx((1.0, 0.0), abs=1e-12)


def test_inner_degraded_wiretap():
    point = inner_bound_point(secure_inner(), degraded_binary_wiretap(0.1, 0.15), 0.0)
    assert point.r == pytest.approx(1.0 - binary_entropy(0.1), abs=1e-12)
    assert point.re == pytest.approx(WYNER, abs=1e-12)


def test_inner_forms_agree_when_helper_is_unary():
    rng = np.random.default_rng(6)
    ch = random_channel(rng, 2, 1, 2, 2)
    for _ in range(10):
        dist = random_inner(rng, 2, 1)
        charged = inner_bound_point(dist, ch, 0.3, InnerBoundForm.CHARGED)
        literal = inner_bound_point(dist, ch, 0.3, InnerBoundForm.UNCHARGED)
        assert charged.r == pytest.approx(literal.r, abs=1e-12)
        assert charged.re == pytest.approx(literal.re, abs=1e-12)


def test_helper_interferer_objective_matches_inner_corner():
    rng = np.random.default_rng(8)
    for _ in range(20):
        ch = random_channel(rng)
        dist = random_inner(rng, 2, 2, n_u=1, n_v=1)
        assert wthi_objective(dist, ch) == pytest.approx(inner_bound_point(dist, ch, 0.0).re, abs=1e-9)
    with pytest.raises(NumericalDomainError):
        wthi_objective(random_inner(rng, 2, 2), ch)


def test_outer_noiseless_secure_bit():
    point = outer_bound_point(secure_outer(), noiseless_secure(), 0.0)
    assert (point.r, point.re) == pytest.approx((1.0, 1.0))


def test_outer_symmetric_outputs_leak_everything():
    rng = np.random.default_rng(9)
    for _ in range(50):
        ch = eavesdropper_copy(rng.dirichlet(np.ones(2), size=(2, 2)))
        point = outer_bound_point(random_outer(rng, 2, 2), ch, float(rng.uniform(0.0, 2.0)))
        assert point.re <= 1e-12


def test_outer_degraded_wiretap():
    point = outer_bound_point(secure_outer(), degraded_binary_wiretap(0.1, 0.15), 0.0)
    assert (point.r, point.re) == pytest.approx((1.0 - binary_entropy(0.1), WYNER), abs=1e-12)


# ---------------------------------------------------------------------------
# Lattice searches
# ---------------------------------------------------------------------------

def test_simplex_lattice():
    points = simplex_lattice(3, 4)
    assert len(points) == simplex_size(3, 4) == 15
    np.testing.assert_allclose(points.sum(axis=1), 1.0)
    assert len({tuple(p) for p in points}) == 15


def test_distribution_lattice_size_and_order():
    lattice = DistributionLattice([
        TableFactor("a", (), (2,)),
        TableFactor("b", (2,), (2,)),
        TableFactor("c", (1,), (3,), fixed=np.full((1, 3), 1.0 / 3.0)),
    ], 2)
    cells = list(lattice)
    assert lattice.size == len(cells) == 3 * 9
    assert set(cells[0]) == {"a", "b", "c"}
    np.testing.assert_allclose(cells[0]["a"], [0.0, 1.0])


def test_noiseless_frontier_contains_secure_bit():
    for bound in (FrontierBound.INNER, FrontierBound.OUTER):
        report = enumerate_frontier(noiseless_secure(), 1.0, bound, cards=UNARY, grid_step=0.25)
        assert report.max_re == pytest.approx(1.0)
        assert any(p.r == pytest.approx(1.0) and p.re == pytest.approx(1.0) for p in report.points)
        assert report.max_r == pytest.approx(1.0)


def test_symmetric_outputs_give_zero_frontier():
    rng = np.random.default_rng(12)
    ch = eavesdropper_copy(rng.dirichlet(np.ones(2), size=(2, 2)))
    cards = AuxCardinalities(n_u=1, n_v=1, identity_prefix=True)
    for bound in (FrontierBound.INNER, FrontierBound.OUTER):
        report = enumerate_frontier(ch, 0.5, bound, cards=cards, grid_step=0.25)
        assert all(p.re <= 1e-12 for p in report.points)


def test_degraded_inner_frontier_close_to_wiretap_capacity():
    report = enumerate_frontier(degraded_binary_wiretap(0.1, 0.15), 0.0, FrontierBound.INNER,
                                cards=UNARY, grid_step=1.0 / 16)
    assert abs(report.max_re - WYNER) <= 0.03
    assert report.envelope
    assert report.to_dict()["label"] == report.label


def test_budget_is_enforced():
    ch = random_channel(np.random.default_rng(13))
    with pytest.raises(LatticeBudgetExceeded) as info:
        enumerate_frontier(ch, 0.0, cards=UNARY, grid_step=0.125, budget=10)
    assert info.value.lattice_size == 81
    report = enumerate_frontier(ch, 0.0, cards=UNARY, grid_step=0.125, budget=10, truncate=True)
    assert report.truncated is True
    assert report.evaluated == 10


def test_frontier_is_independent_of_worker_count():
    ch = random_channel(np.random.default_rng(14))
    reports = []
    for workers in (1, 4):
        with EvaluationPool(workers) as pool:
            reports.append(enumerate_frontier(ch, 0.5, FrontierBound.OUTER, cards=UNARY,
                                              grid_step=0.125, pool=pool))
    assert reports[0].to_dict() == reports[1].to_dict()


@pytest.mark.slow
def test_inner_within_outer():
    rng = np.random.default_rng(15)
    step = 0.125
    for _ in range(20):
        ch = random_channel(rng)
        inner = enumerate_frontier(ch, 0.5, FrontierBound.INNER, cards=UNARY, grid_step=step)
        outer = enumerate_frontier(ch, 0.5, FrontierBound.OUTER, cards=UNARY, grid_step=step)
        for p in inner.points:
            assert any(q.dominates(p, tol=2 * step) for q in outer.points)


def test_pareto_and_envelope():
    pts = [RateEquivocationPoint(1.0, 0.2), RateEquivocationPoint(0.5, 0.5),
           RateEquivocationPoint(0.4, 0.3), RateEquivocationPoint(1.0, 0.1)]
    assert pareto(pts) == [RateEquivocationPoint(0.5, 0.5), RateEquivocationPoint(1.0, 0.2)]
    envelope = upper_concave_envelope(pareto(pts))
    assert envelope[-1].r == pytest.approx(1.0)
    assert max(p.re for p in envelope) == pytest.approx(0.5)
    assert upper_concave_envelope([]) == []


@pytest.mark.parametrize("main,cascade,oracle", [(0.1, 0.15, WYNER), (0.1, 0.0, 0.0), (0.0, 0.5, 1.0)])
def test_wyner_reduction(main, cascade, oracle):
    check = wyner_reduction_check(main, cascade, grid_step=1.0 / 32)
    assert check.oracle == pytest.approx(oracle, abs=1e-12)
    assert check.computed <= oracle + 1e-9
    assert abs(check.computed - oracle) <= 0.02


def test_helper_interferer_lower_bound():
    assert wthi_lower_bound(noiseless_secure(), grid_step=0.5, cards=UNARY) == pytest.approx(1.0)
    leaky = eavesdropper_copy(np.random.default_rng(16).dirichlet(np.ones(2), size=(2, 2)))
    assert wthi_lower_bound(leaky, grid_step=0.25, cards=UNARY) == pytest.approx(0.0, abs=1e-12)
    degraded = wthi_lower_bound(degraded_binary_wiretap(0.1, 0.15), grid_step=1.0 / 32, cards=UNARY)
    assert degraded >= WYNER - 0.02


def test_cooperative_mac_rate():
    y_is_x2 = np.broadcast_to(np.eye(2)[None, :, :], (2, 2, 2))
    silent_z = np.ones((2, 2, 1))
    helper_only = from_components(y_is_x2, silent_z)
    assert cooperative_mac_rate(helper_only, 0.5, grid_step=0.5).value == pytest.approx(0.5)
    assert cooperative_mac_rate(noiseless_secure(), 0.0, grid_step=0.5).value == pytest.approx(1.0)

    p_y = np.random.default_rng(17).dirichlet(np.ones(2), size=(2, 2))
    hidden = cooperative_mac_rate(from_components(p_y, silent_z), 0.3, grid_step=0.25).value
    exposed = cooperative_mac_rate(eavesdropper_copy(p_y), 0.3, grid_step=0.25).value
    assert hidden == pytest.approx(exposed, abs=1e-12)

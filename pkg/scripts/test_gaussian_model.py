import math

import pytest

from core.errors import NumericalDomainError
from core.gaussian import (
    INFINITE,
    GaussianMacChannel,
    NetworkGeometry,
    compile_geometry,
    path_loss_gain,
    upper_bound_value,
)


@pytest.mark.parametrize("distance,expected", [(1.0, 1.0), (0.5, 2.0), (0.0, 100.0), (0.05, 20.0)])
def test_path_loss_gain(distance, expected):
    assert path_loss_gain(distance, 2.0, 0.01) == pytest.approx(expected, rel=1e-12)


def test_path_loss_gain_exponent():
    assert path_loss_gain(2.0, 4.0, 0.01) == pytest.approx(0.25)


def test_gain_strictly_decreases_above_the_clamp():
    distances = [0.01, 0.05, 0.1, 0.5, 0.95, 1.0, 1.05, 2.0, 10.0]
    for gamma in (1.0, 2.0, 3.5):
        gains = [path_loss_gain(d, gamma, 0.01) for d in distances]
        assert all(a > b for a, b in zip(gains, gains[1:]))


def test_gain_is_flat_below_the_clamp():
    assert path_loss_gain(0.0, 2.0, 0.01) == path_loss_gain(0.005, 2.0, 0.01) == path_loss_gain(0.01, 2.0, 0.01)


def _moved(point, angle, shift):
    x, y = point
    c, s = math.cos(angle), math.sin(angle)
    return (c * x - s * y + shift[0], s * x + c * y + shift[1])


@pytest.mark.parametrize("angle,shift", [(0.0, (3.0, -2.0)), (math.pi / 3, (0.0, 0.0)), (2.1, (-7.5, 0.25))])
def test_compile_is_invariant_under_rigid_motion(angle, shift):
    g = NetworkGeometry(pos_enc1=(0.1, 0.2), pos_enc2=(0.7, -0.4), pos_dest=(1.3, 0.5),
                        pos_eave=(-0.6, 1.1), gamma=3.0, c12=2.0)
    moved = NetworkGeometry(
        pos_enc1=_moved(g.pos_enc1, angle, shift),
        pos_enc2=_moved(g.pos_enc2, angle, shift),
        pos_dest=_moved(g.pos_dest, angle, shift),
        pos_eave=_moved(g.pos_eave, angle, shift),
        gamma=3.0, c12=2.0,
    )
    before, after = compile_geometry(g), compile_geometry(moved)
    assert after.gains == pytest.approx(before.gains, abs=1e-12)
    assert after.c12 == before.c12


@pytest.mark.parametrize("args", [(-1.0, 2.0, 0.01), (1.0, 0.0, 0.01), (1.0, 2.0, 0.0), (math.inf, 2.0, 0.01)])
def test_path_loss_gain_domain(args):
    with pytest.raises(NumericalDomainError):
        path_loss_gain(*args)


def test_compile_line_network():
    ch = compile_geometry(NetworkGeometry.line_network(d=0.5))
    assert ch.gains == pytest.approx((1.0, 2.0, 2.0 / 3.0, 1.0), rel=1e-12)
    assert (ch.p1, ch.p2, ch.sigma1_sq, ch.sigma2_sq, ch.c12) == (1.0, 1.0, 1.0, 1.0, 0.0)


def test_compile_unit_distances():
    g = NetworkGeometry(pos_enc1=(0, 0), pos_enc2=(1, 1), pos_dest=(1, 0), pos_eave=(0, 1))
    assert compile_geometry(g).gains == pytest.approx((1.0, 1.0, 1.0, 1.0))


def test_compile_coincident_helper_is_clamped():
    g = NetworkGeometry.line_network().with_enc2(1.0)
    assert compile_geometry(g).h2d == pytest.approx(100.0)


def test_reversed_roles_swaps_receivers():
    g = NetworkGeometry.line_network(d=0.5)
    r = g.reversed_roles()
    assert (r.pos_dest, r.pos_eave) == (g.pos_eave, g.pos_dest)
    forward, backward = compile_geometry(g), compile_geometry(r)
    assert (backward.h1d, backward.h2d) == (forward.h1e, forward.h2e)


def test_geometry_validation():
    with pytest.raises(NumericalDomainError):
        NetworkGeometry(gamma=0.0)
    with pytest.raises(NumericalDomainError):
        NetworkGeometry(min_distance=-1.0)
    with pytest.raises(NumericalDomainError):
        NetworkGeometry(pos_enc1=(0.0, 0.0, 1.0))


@pytest.mark.parametrize("overrides", [
    {"sigma1_sq": 0.0},
    {"sigma2_sq": -1.0},
    {"p1": -0.1},
    {"p2": math.inf},
    {"c12": -1.0},
    {"c12": math.nan},
    {"h1d": math.nan},
])
def test_channel_validation(overrides):
    fields = dict(h1d=1.0, h2d=1.0, h1e=1.0, h2e=1.0)
    fields.update(overrides)
    with pytest.raises(NumericalDomainError):
        GaussianMacChannel(**fields)


def test_channel_accepts_unlimited_conference():
    ch = GaussianMacChannel(1.0, 0.5, 0.3, 0.2, c12=INFINITE)
    assert math.isinf(ch.c12)
    assert ch.with_c12(2.0).c12 == 2.0


def test_scaling_leaves_bounds_unchanged():
    ch = GaussianMacChannel(0.9, -1.3, 0.4, 0.7, sigma1_sq=0.8, sigma2_sq=1.7, p1=2.0, p2=0.5)
    for c in (0.25, 3.0):
        for psi in (-1.0, -0.3, 0.0, 0.6, 1.0):
            assert upper_bound_value(ch.scaled(c), psi) == pytest.approx(upper_bound_value(ch, psi), abs=1e-12)

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricbundle.corpus import corpus_fans, p1p1, p2, surface_fan
from toricbundle.fan import (
    FanError,
    cartier_data,
    divisor_positivity,
    intersection_number,
    make_fan,
    normal_form,
    pairing,
    polytope,
    validate_fan,
    wall_relation,
    walls,
)
from toricbundle.polyhedra import lattice_points


def test_p2_walls_and_relations():
    fan = p2()
    ws = walls(fan)
    assert [w.tau for w in ws] == [(0,), (1,), (2,)]
    for w in ws:
        # left_ray + right_ray = b * tau on P^2 with b = -1 (e.g. (1,0)+(0,1) = -(-1,-1))
        assert wall_relation(fan, w) == (-1,)
        assert pairing(w.normal, fan.rays[w.left_ray]) > 0
        assert pairing(w.normal, fan.rays[w.tau[0]]) == 0


def test_p1p1_wall_relations_are_zero():
    fan = p1p1()
    assert all(wall_relation(fan, w) == (0,) for w in walls(fan))


def test_validate_fan():
    assert validate_fan(p2()).smooth and validate_fan(p2()).complete
    # weighted projective plane P(1,1,2): complete but not smooth
    wpp = make_fan([(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
    rep = validate_fan(wpp)
    assert rep.complete and not rep.smooth
    # missing a cone: not complete
    rep = validate_fan(make_fan([(-1, -1), (1, 0), (0, 1)], [(0, 1), (1, 2)]))
    assert not rep.complete


def test_bad_rays_rejected():
    with pytest.raises(FanError):
        validate_fan(make_fan([(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)]))
    with pytest.raises(FanError):
        validate_fan(make_fan([(1, 0), (1, 0), (-1, -1)], [(0, 1), (1, 2), (0, 2)]))


def test_p2_hyperplane():
    fan = p2()
    D = (1, 0, 0)
    assert divisor_positivity(fan, D).ample
    assert all(intersection_number(fan, D, w) == 1 for w in walls(fan))
    assert len(lattice_points(polytope(fan, D))) == 3
    assert normal_form(fan, (0, 1, 0)) == (1, 0, 0)
    assert normal_form(fan, (0, 0, 1)) == (1, 0, 0)
    assert not divisor_positivity(fan, (-1, 0, 0)).nef


def test_cartier_data_sign_convention():
    fan = p2()
    for cone, m in zip(fan.max_cones, cartier_data(fan, (1, 2, 3))):
        for i in cone:
            assert pairing(m, fan.rays[i]) == (1, 2, 3)[i]


fans = st.sampled_from(sorted(corpus_fans().items()))


@settings(max_examples=80, deadline=None)
@given(fans, st.data())
def test_kleiman_on_walls(named, data):
    name, fan = named
    D = tuple(data.draw(st.lists(st.integers(-3, 3), min_size=fan.nrays, max_size=fan.nrays)))
    pos = divisor_positivity(fan, D)
    numbers = [intersection_number(fan, D, w) for w in walls(fan)]
    assert pos.nef == all(x >= 0 for x in numbers)
    assert pos.ample == all(x > 0 for x in numbers)


@settings(max_examples=80, deadline=None)
@given(fans, st.data())
def test_normal_form_is_class_invariant(named, data):
    name, fan = named
    D = tuple(data.draw(st.lists(st.integers(-3, 3), min_size=fan.nrays, max_size=fan.nrays)))
    u = data.draw(st.lists(st.integers(-2, 2), min_size=fan.dim, max_size=fan.dim))
    shifted = tuple(d + pairing(u, r) for d, r in zip(D, fan.rays))
    assert normal_form(fan, D) == normal_form(fan, shifted)
    assert divisor_positivity(fan, D) == divisor_positivity(fan, shifted)
    assert all(intersection_number(fan, D, w) == intersection_number(fan, shifted, w) for w in walls(fan))


def test_surface_fan_is_smooth_complete():
    rep = validate_fan(surface_fan())
    assert rep.smooth and rep.complete
    assert len(walls(surface_fan())) == 6

import io
import itertools
import random
from math import sqrt as fsqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bf_dist, bf_norm, pointsets, random_set
from ffembed.errors import EmptySet, NoSqrtMinusOne, SpaceMismatch, ZeroDistance
from ffembed.gf import field_new
from ffembed.space import (
    PointSet,
    Space,
    degrees,
    dist,
    distance_set,
    edge_degree,
    isotropic_line,
    norm,
    pair_count,
    pointset_from_text,
    pointset_to_text,
    read_pointset,
    sphere,
    write_pointset,
)


def S(q, d):
    return Space.of(q, d)


@pytest.mark.parametrize(
    "q,coords,expected", [(5, (0, 0), 0), (5, (1, 2), 0), (7, (1, 1, 1), 3), (3, (2, 2), 2)]
)
def test_norm(q, coords, expected):
    x = S(q, len(coords)).point(coords)
    assert norm(x) == expected
    assert norm(x) == bf_norm(x.coords)


def test_dist_examples():
    sp = S(5, 2)
    x, y = sp.point((0, 0)), sp.point((1, 2))
    assert dist(x, x) == 0
    assert dist(x, y) == 0
    assert dist(S(3, 2).point((0, 0)), S(3, 2).point((1, 0))) == 1
    with pytest.raises(SpaceMismatch):
        dist(x, S(5, 3).point((0, 0, 0)))


def test_distance_set_examples():
    sp = S(3, 2)
    assert distance_set(PointSet.from_points(sp, [(1, 1)])) == {0}
    assert distance_set(isotropic_line(field_new(5))) == {0}
    assert {int(v) for v in distance_set(PointSet.full(sp))} == {0, 1, 2}
    with pytest.raises(EmptySet):
        distance_set(PointSet.empty(sp))


@pytest.mark.parametrize("q", [5, 13, 17, 9, 25])
def test_isotropic_line(q):
    L = isotropic_line(field_new(q))
    assert len(L) == q
    assert distance_set(L) == {0}
    for t in range(1, q):
        assert pair_count(L, t) == 0


def test_isotropic_line_f5_points():
    L = isotropic_line(field_new(5))
    assert [tuple(int(c) for c in p.coords) for p in L] == [(s, 2 * s % 5) for s in range(5)]


@pytest.mark.parametrize("q", [3, 7, 11])
def test_isotropic_line_needs_root(q):
    with pytest.raises(NoSqrtMinusOne):
        isotropic_line(field_new(q))


def test_pair_count_examples():
    full = PointSet.full(S(3, 2))
    assert pair_count(full, 1) == 36
    assert pair_count(PointSet.from_points(S(3, 2), [(0, 1)]), 1) == 0
    assert pair_count(isotropic_line(field_new(5)), 1) == 0
    with pytest.raises(ZeroDistance):
        pair_count(full, 0)


def test_edge_degree_examples():
    sp = S(3, 2)
    full = PointSet.full(sp)
    assert all(edge_degree(full, 1, x) == 4 for x in full)
    assert edge_degree(PointSet.empty(sp), 1, sp.point((0, 0))) == 0
    assert sum(edge_degree(full, 1, x) for x in full) == 36
    with pytest.raises(ZeroDistance):
        edge_degree(full, 0, sp.point((0, 0)))


def test_sphere_examples():
    F3 = field_new(3)
    pts = {tuple(int(c) for c in p.coords) for p in sphere(F3, 2, 1)}
    assert pts == {(0, 1), (0, 2), (1, 0), (2, 0)}
    assert len(sphere(field_new(5), 2, 0)) == 9
    assert len(sphere(F3, 1, 2)) == 0


@pytest.mark.parametrize("q,d", [(3, 1), (3, 2), (5, 2), (7, 2), (9, 2), (3, 3), (5, 3)])
def test_spheres_partition_space(q, d):
    F = field_new(q)
    sizes = [len(sphere(F, d, t)) for t in range(q)]
    assert sum(sizes) == q**d
    brute = [0] * q
    for p in PointSet.full(S(q, d)):
        brute[bf_norm(p.coords).code] += 1
    assert sizes == brute


@pytest.mark.parametrize("q,d", [(3, 2), (5, 2), (9, 2), (3, 3)])
def test_pair_count_matches_brute_force(q, d):
    rnd = random.Random(q * 10 + d)
    E = random_set(S(q, d), rnd)
    pts = E.points()
    for t in range(1, q):
        brute = sum(1 for x, y in itertools.product(pts, pts) if bf_dist(x, y).code == t)
        assert pair_count(E, t) == brute
        assert int(degrees(E, t).sum()) == brute


def test_point_order_is_lexicographic():
    E = PointSet.from_points(S(5, 2), [(3, 1), (0, 4), (3, 0), (0, 4)])
    assert [tuple(int(c) for c in p.coords) for p in E] == [(0, 4), (3, 0), (3, 1)]
    assert len(E) == 3


@pytest.mark.parametrize("q,d", [(3, 2), (9, 2), (25, 1), (7, 3)])
def test_text_round_trip(q, d):
    E = random_set(S(q, d), random.Random(1))
    text = pointset_to_text(E, ["note"])
    assert text.splitlines()[0] == f"{q} {d}"
    assert text.splitlines()[1] == "# note"
    assert pointset_from_text(text) == E
    buf = io.StringIO()
    write_pointset(E, buf)
    buf.seek(0)
    assert read_pointset(buf) == E


def test_extension_coordinates_are_digit_strings():
    E = PointSet.from_points(S(9, 2), [(5, 1)])
    assert pointset_to_text(E).splitlines()[1] == "12 01"


def test_bad_text():
    with pytest.raises(SpaceMismatch):
        pointset_from_text("3 2\n0 1 2\n")
    with pytest.raises(ValueError):
        pointset_from_text("3 2\n0 3\n")


@settings(max_examples=60, deadline=None)
@given(pointsets(qs=(3, 5, 7, 9, 11), ds=(2, 3)), st.data())
def test_iosevich_rudnev_property(E, data):
    q, d = E.space.q, E.space.d
    t = data.draw(st.integers(1, q - 1))
    err = abs(pair_count(E, t) - len(E) ** 2 / q)
    assert err <= 2 * q ** ((d - 1) / 2) * len(E) + 1e-9
    assert err <= 2 * fsqrt(q ** (d - 1)) * len(E) + 1e-9


@settings(max_examples=40, deadline=None)
@given(pointsets(qs=(3, 5, 7), ds=(2,)), st.data())
def test_translation_invariance(E, data):
    q = E.space.q
    v = E.space.point([data.draw(st.integers(0, q - 1)) for _ in range(2)])
    t = data.draw(st.integers(1, q - 1))
    moved = E.translate(v)
    assert len(moved) == len(E)
    assert pair_count(moved, t) == pair_count(E, t)
    assert sum(edge_degree(E, t, x) for x in E) == pair_count(E, t)


@settings(max_examples=40, deadline=None)
@given(pointsets(qs=(3, 5, 9), ds=(1, 2)))
def test_distance_set_brute_force(E):
    pts = E.points()
    assert distance_set(E) == {bf_dist(x, y) for x in pts for y in pts}


def test_membership_and_positions():
    E = PointSet.from_points(S(5, 2), [(0, 1), (2, 3)])
    sp = E.space
    assert sp.point((2, 3)) in E and sp.point((1, 1)) not in E
    assert E.position_of(sp.point((2, 3))) == 1
    assert list(E.contains_index(np.array([1, 13, 0]))) == [True, True, False]

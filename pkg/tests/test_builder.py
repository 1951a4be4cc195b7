import math

import networkx as nx
import pytest

from conftest import family_for
from vtplanar.builder import (
    BuildError,
    build_ball,
    check_rotation_systems,
    edge_lengths,
    face_words,
    glue,
    growth_class,
    interior_vertices,
    orbit_word,
    recover_scheme,
    sphere_sizes,
)
from vtplanar.scheme_core import scheme_key


@pytest.mark.parametrize(
    "tv, vef",
    [
        ((3, 3, 3), (4, 6, 4)),
        ((3, 3, 3, 3), (6, 12, 8)),
        ((4, 4, 4), (8, 12, 6)),
        ((5, 5, 5), (20, 30, 12)),
        ((3, 5, 3, 5), (30, 60, 32)),
        ((4, 6, 10), (120, 180, 62)),
    ],
)
def test_spherical_graphs_close(tv, vef):
    ball = build_ball(family_for(tv).scheme, tv, 1)
    assert ball.closed
    assert ball.counts() == vef
    v, e, f = vef
    assert v - e + f == 2
    assert not check_rotation_systems(ball)
    assert nx.is_connected(ball.to_networkx())


def test_grid_ball_sizes():
    s = family_for((4, 4, 4, 4)).scheme
    assert len(build_ball(s, (4, 4, 4, 4), 2)) == 13
    assert len(build_ball(s, (4, 4, 4, 4), 3)) == 25
    assert sphere_sizes(s, (4, 4, 4, 4), 3) == [1, 4, 8, 12]


@pytest.mark.parametrize("tv", [(4, 4, 4, 4), (6, 6, 6), (3, 6, 3, 6), (7, 7, 7), (3, 4, 3, 3, 5)])
def test_coordinates_have_equal_edge_lengths(tv):
    ball = build_ball(family_for(tv).scheme, tv, 3)
    assert not check_rotation_systems(ball)
    lengths = edge_lengths(ball)
    assert max(abs(l - ball.length) for l in lengths) < 1e-9


def test_example4_ball(ex4):
    ball = build_ball(ex4, (3, 4, 3, 3, 5), 3)
    assert not check_rotation_systems(ball)
    assert max(abs(l - ball.length) for l in edge_lengths(ball)) < 1e-9
    sizes = {len(w) for _, w in face_words(ball)}
    assert sizes == {3, 4, 5}
    assert all(g == 1 for g in ball.gluings)


def test_example5_ball_is_a_tree_of_blocks(ex5):
    ball = build_ball(ex5, "3,inf,3,4,inf", 4)
    assert not check_rotation_systems(ball)
    g = ball.to_networkx()
    # the root is a cut vertex
    assert ball.root in set(nx.articulation_points(g))
    assert {len(w) for _, w in face_words(ball)} == {3, 4}


@pytest.mark.parametrize("which", ["ex4", "ex5"])
def test_recover_round_trip(which, ex4, ex5):
    s, tv = (ex4, (3, 4, 3, 3, 5)) if which == "ex4" else (ex5, (3, math.inf, 3, 4, math.inf))
    ball = build_ball(s, tv, 3, coords=False)
    assert scheme_key(recover_scheme(ball)) == scheme_key(s)


def test_recover_needs_radius_two(ex4):
    ball = build_ball(ex4, (3, 4, 3, 3, 5), 1, coords=False)
    with pytest.raises(BuildError):
        recover_scheme(ball)


def test_glue_completes_a_boundary_vertex(ex4):
    ball = build_ball(ex4, (3, 4, 3, 3, 5), 2)
    before = set(interior_vertices(ball))
    v = next(v for v in range(len(ball)) if v not in before)
    glue(ex4, ball, v, coords=True)
    assert ball.is_complete(v)
    assert not check_rotation_systems(ball)
    with pytest.raises(BuildError):
        glue(ex4, ball, v)


def test_radius_must_be_positive(ex4):
    with pytest.raises(BuildError):
        build_ball(ex4, (3, 4, 3, 3, 5), 0)


def test_invalid_type_vector_is_rejected(ex4):
    with pytest.raises(BuildError):
        build_ball(ex4, (4, 4, 4, 4, 4), 2)


def test_growth_classes(ex5):
    grid = family_for((4, 4, 4, 4)).scheme
    assert growth_class(grid, (4, 4, 4, 4)) == "quadratic"
    assert growth_class(family_for((7, 7, 7)).scheme, (7, 7, 7)) == "exponential"
    assert growth_class(ex5, "3,inf,3,4,inf") == "exponential"
    with pytest.raises(BuildError):
        growth_class(family_for((5, 5, 5)).scheme, (5, 5, 5))


def test_orbit_word_matches_face(ex4):
    assert len(orbit_word(ex4, 1)) == 1
    assert len(orbit_word(ex4, 2)) == 3

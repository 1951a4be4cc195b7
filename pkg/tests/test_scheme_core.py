import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EX4_PAIR, EX5_PAIR
from vtplanar.scheme_core import (
    INF,
    EdgeNeighborhood,
    LabelingScheme,
    SchemeError,
    VectorPair,
    apply_map,
    are_isomorphic,
    automorphisms,
    canonical_key,
    canonical_pair,
    connectivity_of,
    eq_count,
    flag_classes,
    flag_index,
    index_flag,
    isomorphism_maps,
    make_neighborhood,
    neighborhood_data,
    rearrange,
    reflect,
    relabel,
    rotate,
    scheme_key,
    twist,
    validate_scheme,
)


@st.composite
def pairs(draw, min_degree=3, max_degree=6, max_inf=3):
    d = draw(st.integers(min_degree, max_degree))
    xi = draw(st.lists(st.integers(1, 3), min_size=d, max_size=d))
    phi = draw(st.lists(st.integers(0, 3), min_size=d, max_size=d))
    if phi.count(INF) > max_inf:
        phi = [c if c != INF else 1 for c in phi]
    return VectorPair(tuple(xi), tuple(phi))


@st.composite
def words(draw, pair):
    """Random generator word: rotations, reflections, rearrangements, twists."""
    out = []
    p = pair
    for _ in range(draw(st.integers(0, 6))):
        kind = draw(st.sampled_from(["rot", "refl", "rearr", "twist"]))
        if kind == "rot":
            p = rotate(p, draw(st.integers(0, p.degree - 1)))
        elif kind == "refl":
            p = reflect(p)
        elif kind == "rearr" and p.infinite_count:
            t = len(p.blocks())
            p = rearrange(p, draw(st.permutations(range(t))))
        elif kind == "twist" and p.infinite_count:
            p = twist(p, draw(st.integers(0, len(p.blocks()) - 1)))
        out.append(kind)
    return p


def test_pair_rejects_bad_input():
    with pytest.raises(SchemeError):
        VectorPair((1, 1), (1,))
    with pytest.raises(SchemeError):
        VectorPair((1,), (1,))
    with pytest.raises(SchemeError):
        VectorPair((0, 1, 1), (1, 1, 1))
    with pytest.raises(SchemeError):
        VectorPair((1, 1, 1), (1, -1, 1))


def test_face_of_uses_locking():
    p = VectorPair((1, 2, 3), (4, 5, 6))
    assert p.face_of((0, 1)) == 4
    assert p.face_of((0, -1)) == 6
    assert p.face_of((2, 1)) == 6


def test_blocks_end_at_infinite_faces():
    assert EX5_PAIR.blocks() == ((4, 0), (1, 2, 3))
    assert VectorPair((1, 1, 1), (1, 1, 1)).blocks() == ((0, 1, 2),)


def test_reflect_is_an_involution_and_keeps_locking():
    p = VectorPair((1, 2, 3, 4), (5, 6, 7, 8))
    r = reflect(p)
    assert reflect(r) == p
    # each edge keeps its two neighbouring faces
    for i in range(4):
        j = r.xi.index(p.xi[i])
        assert {r.face_of((j, 1)), r.face_of((j, -1))} == {p.face_of((i, 1)), p.face_of((i, -1))}


def test_twist_and_rearrange_need_infinite_faces():
    p = VectorPair((1, 2, 3), (1, 2, 3))
    with pytest.raises(SchemeError):
        twist(p, 0)
    with pytest.raises(SchemeError):
        rearrange(p, (1, 0))
    assert rearrange(p, (0,)) == p


def test_twist_reverses_one_block():
    t = twist(EX5_PAIR, 1)
    assert t.xi[1:4] == EX5_PAIR.xi[1:4][::-1]
    assert t.infinite_count == EX5_PAIR.infinite_count


def test_isomorphism_group_sizes():
    # no infinite faces: the dihedral group of order 2d
    assert len(isomorphism_maps(VectorPair((1, 2, 3, 4, 5), (1, 2, 3, 4, 5)))) == 10
    # two blocks: one order, two flips each, five shifts
    assert len(isomorphism_maps(EX5_PAIR)) == 1 * 4 * 5


def test_automorphisms_of_uniform_star():
    p = VectorPair((1, 1, 1, 1), (1, 1, 1, 1))
    assert len(automorphisms(p)) == 8


def test_relabel_first_occurrence():
    assert relabel(VectorPair((3, 1, 3), (0, 5, 2))) == VectorPair((1, 2, 1), (0, 1, 2))


def test_eq_count_example4():
    n, classes = eq_count(EX4_PAIR, 1)
    assert n == 2
    assert sorted(map(sorted, classes)) == [[0], [4]]
    assert len(set(flag_classes(EX4_PAIR))) == 10


def test_flag_index_round_trip():
    for k in range(12):
        assert flag_index(index_flag(k)) == k


def test_example5_configurations():
    # two automorphism-related flags merge: 1- = 5+ and 1+ = 5-
    cls = flag_classes(EX5_PAIR)
    assert len(set(cls)) == 8
    assert cls[flag_index((0, -1))] == cls[flag_index((4, 1))]
    assert cls[flag_index((0, 1))] == cls[flag_index((4, -1))]


def test_make_neighborhood_locking():
    nb = make_neighborhood(EX5_PAIR, 1, 0, False)
    assert nb is not None
    assert nb.color == 1
    nd = neighborhood_data(EX5_PAIR, nb)
    assert not nd.reverses


def test_validate_scheme_reports_conditions(ex4):
    assert validate_scheme(ex4).ok
    missing = LabelingScheme(ex4.pair, ex4.neighborhoods[:-1])
    rep = validate_scheme(missing)
    assert any(v.startswith("(iii)") for v in rep.violations)
    three = VectorPair((1, 1, 1), (1, 2, 3))
    rep = validate_scheme(LabelingScheme(three, ()))
    assert any(v.startswith("(ii)") for v in rep.violations)


def test_incoherent_neighborhood_is_rejected():
    with pytest.raises(SchemeError):
        EdgeNeighborhood(1, EX4_PAIR, EX4_PAIR)
    # locked, but its extremities are not stars of the pair it is used with
    other = VectorPair((1, 2, 2, 3, 1), (3, 1, 2, 2, 3))
    nb = EdgeNeighborhood(1, other, other)
    s = LabelingScheme(EX4_PAIR, (nb,))
    assert not validate_scheme(s).ok


def test_connectivity_classes(ex4, ex5):
    assert connectivity_of(ex4.pair) == "3-connected"
    assert connectivity_of(ex5.pair) == "1-separable"


def test_scheme_key_is_rotation_invariant(ex4):
    rotated = rotate(ex4.pair, 2)
    data = {c: nd for c, nd in ex4.data().items()}
    nbs = tuple(make_neighborhood(rotated, (nd.i + 2) % 5, (nd.j + 2) % 5, nd.reverses) for nd in data.values())
    assert scheme_key(LabelingScheme(rotated, nbs)) == scheme_key(ex4)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_canonical_form_is_idempotent_and_orbit_constant(data):
    p = data.draw(pairs())
    q = data.draw(words(p))
    c = canonical_pair(p)
    assert canonical_pair(c) == c
    assert canonical_pair(q) == c
    assert canonical_key(q) == canonical_key(p)
    assert are_isomorphic(p, q)


@settings(max_examples=200, deadline=None)
@given(pairs())
def test_maps_preserve_locking(p):
    for m in isomorphism_maps(p):
        q = apply_map(p, m)
        for i in range(p.degree):
            j = m.perm[i]
            f = m.flip[i]
            assert q.xi[j] == p.xi[i]
            assert q.face_of((j, f)) == p.face_of((i, 1))
            assert q.face_of((j, -f)) == p.face_of((i, -1))


@settings(max_examples=200, deadline=None)
@given(pairs())
def test_flag_classes_are_automorphism_orbits(p):
    cls = flag_classes(p)
    assert len(set(cls)) <= 2 * p.degree
    for m in automorphisms(p):
        for k in range(2 * p.degree):
            assert cls[flag_index(m.map_flag(index_flag(k)))] == cls[k]

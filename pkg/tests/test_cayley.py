import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import families, family_for
from vtplanar.border_automaton import default_type_vector, scheme_automaton
from vtplanar.cayley_analysis import (
    _graph_automorphisms,
    configuration_count,
    divide,
    is_cayley,
    is_prime,
    multiply,
    prime_degree_taxonomy,
    regular_subgroup,
    stabilizer,
    taxonomy_agrees,
)
from vtplanar.scheme_core import SchemeError, scheme_key, validate_scheme


def test_stabilizer_kinds(ex4, ex5):
    s = stabilizer(family_for((5, 5, 5)).scheme)
    assert (s.kind, s.order) == ("dihedral", 6)
    grid = stabilizer(family_for((4, 4, 4, 4)).scheme)
    assert (grid.kind, grid.order) == ("dihedral", 8)
    assert stabilizer(ex4).kind == "trivial"
    assert stabilizer(ex4).order == 1


def test_multiply_rejects_bad_factor(ex4):
    with pytest.raises(SchemeError):
        multiply(ex4, 1)
    with pytest.raises(SchemeError):
        multiply(ex4, 5, max_degree=20)


def test_divide_finds_the_largest_factor(ex4):
    ten = multiply(ex4, 2)
    assert ten.degree == 10
    got, k = divide(ten)
    assert k == 2
    assert scheme_key(got) == scheme_key(ex4)
    assert divide(ex4) == (ex4, 1)
    # a uniform star also divides by the larger factor
    six = multiply(family_for((5, 5, 5)).scheme, 2)
    assert divide(six)[1] == 3


def _small_families():
    out = []
    for d in (3, 4):
        out += [f for f in families(d) if f.scheme.pair.infinite_count <= 1]
    return out


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_multiply_divide_round_trip(seed, k):
    fams = _small_families()
    s = fams[seed % len(fams)].scheme
    if s.degree * k > 9:
        k = 2
    m = multiply(s, k)
    assert validate_scheme(m).ok
    assert configuration_count(m) == configuration_count(s)
    base, got = divide(m, k)
    assert got == k
    assert scheme_key(base) == scheme_key(s)
    # multiplied schemes always have a nontrivial rotation
    assert stabilizer(m).rotation_order >= k


def test_regular_subgroup_of_cyclic_group():
    n = 7
    perms = [tuple((i + s) % n for i in range(n)) for s in range(n)]
    perms += [tuple((s - i) % n for i in range(n)) for s in range(n)]
    group = regular_subgroup(perms)
    assert group is not None and len(group) == n


def test_petersen_graph_is_not_cayley():
    perms = _graph_automorphisms(nx.petersen_graph())
    assert len(perms) == 120
    assert regular_subgroup(perms) is None


def test_cube_is_cayley():
    v = is_cayley(family_for((4, 4, 4)).scheme, (4, 4, 4))
    assert v.verdict == "Cayley"


@pytest.mark.parametrize(
    "tv, verdict",
    [
        ((4, 4, 4, 4), "Cayley"),
        ((6, 6, 6), "Cayley"),
        ((5, 5, 5), "NotCayley"),
        ((3, 5, 3, 5), "NotCayley"),
        ((7, 7, 7), "NotCayley"),
    ],
)
def test_verdicts(tv, verdict):
    assert is_cayley(family_for(tv).scheme, tv).verdict == verdict


def test_rotation_free_scheme_is_its_own_witness(ex4):
    v = is_cayley(ex4, (3, 4, 3, 3, 5))
    assert v.verdict == "Cayley"
    assert v.witness is ex4


def test_aperiodic_families_are_not_cayley(ex5):
    assert is_cayley(ex5, "3,inf,3,4,inf").verdict == "NotCayley"
    for fam in families(4):
        if fam.periodicity == "A":
            tv = default_type_vector(fam.ptv)
            assert is_cayley(fam.scheme, tv).verdict == "NotCayley"


def test_prime_taxonomy_on_degree3():
    for fam in families(3):
        if fam.connectivity != "3-connected":
            continue
        tv = default_type_vector(fam.ptv)
        assert taxonomy_agrees(fam.scheme, tv, is_cayley(fam.scheme, tv))


def test_taxonomy_needs_prime_degree_and_three_connected(ex5):
    assert is_prime(5) and not is_prime(4) and not is_prime(1)
    with pytest.raises(SchemeError):
        prime_degree_taxonomy(family_for((4, 4, 4, 4)).scheme, (4, 4, 4, 4))
    with pytest.raises(SchemeError):
        prime_degree_taxonomy(ex5, "3,inf,3,4,inf")


def test_multiply_keeps_the_automaton_size():
    s = family_for((6, 6, 6)).scheme
    assert len(scheme_automaton(multiply(s, 2)).states) == len(scheme_automaton(s).states)

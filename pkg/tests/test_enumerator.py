import itertools

import pytest

from conftest import families
from vtplanar.border_automaton import build_automaton, check_face_equivalence
from vtplanar.enumerator import (
    _rgs,
    counts,
    degree2_family,
    enumerate_neighborhoods,
    enumerate_pairs,
    enumerate_schemes,
    families_validating,
    degree3_exclusions,
    schemes_of_pair,
)
from vtplanar.geometry import is_degree3_exception
from vtplanar.scheme_core import (
    LabelingScheme,
    VectorPair,
    canonical_key,
    eq_count,
    inv_flag_relation,
    make_neighborhood,
    neighborhood_data,
    scheme_key_from_data,
    validate_scheme,
)


def brute_force_keys(d: int) -> set:
    """Every colouring and every gluing, deduplicated by scheme key only."""
    keys = set()
    for xi in itertools.product(range(1, d + 1), repeat=d):
        for phi in itertools.product(range(0, d + 1), repeat=d):
            pair = VectorPair(xi, phi)
            colors = pair.edge_colors()
            options = []
            for c in colors:
                pos = [i for i in range(d) if xi[i] == c]
                opts = []
                for i in pos:
                    for j in pos:
                        for rev in (False, True):
                            nb = make_neighborhood(pair, i, j, rev)
                            if nb is not None:
                                opts.append(nb)
                options.append(opts)
            for nbs in itertools.product(*options):
                s = LabelingScheme(pair, nbs)
                if not validate_scheme(s).ok:
                    continue
                data = [neighborhood_data(pair, nb) for nb in nbs]
                rel = inv_flag_relation(pair, data)
                if any(len(v) > 1 for v in rel.values()):
                    continue
                if not check_face_equivalence(build_automaton(pair, data)):
                    continue
                keys.add(scheme_key_from_data(pair, data))
    return keys


def test_rgs_counts_are_bell_numbers():
    assert [sum(1 for _ in _rgs(n, 1)) for n in range(1, 6)] == [1, 2, 5, 15, 52]


def test_enumerated_pairs_are_canonical():
    for p in enumerate_pairs(4):
        assert canonical_key(p) == p
        assert all(eq_count(p, c)[0] <= 2 for c in p.edge_colors())


def test_enumerate_pairs_rejects_small_degree():
    with pytest.raises(ValueError):
        enumerate_pairs(1)


def test_degree_range_is_checked():
    with pytest.raises(ValueError):
        enumerate_schemes(1)
    with pytest.raises(ValueError):
        enumerate_schemes(7)


def test_degree2_closed_form():
    fam = degree2_family()
    assert fam.periodicity == "P"
    assert enumerate_schemes(2) == [fam]


def test_degree3_matches_brute_force_oracle():
    fast = {f.key for f in families(3)}
    assert fast == brute_force_keys(3)


def test_frozen_counts():
    # regression values from the brute-force-checked enumerator
    assert counts(families(3)) == (15, 0)
    assert counts(families(4)) == (50, 1)


def test_families_are_distinct_and_sorted():
    fams = families(4)
    keys = [f.key for f in fams]
    assert keys == sorted(set(keys))


def test_neighborhoods_of_a_pair_are_coherent():
    p = VectorPair((1, 1, 1, 1), (1, 1, 1, 1))
    nbs = enumerate_neighborhoods(p, 1)
    assert nbs
    for nb in nbs:
        assert neighborhood_data(p, nb) is not None


def test_schemes_of_pair_are_valid():
    for p in enumerate_pairs(3):
        for fam in schemes_of_pair(p):
            assert validate_scheme(fam.scheme).ok


def test_excluded_degree3_type_vectors_are_not_validated():
    fams = families(3)
    for tv in degree3_exclusions(20):
        assert is_degree3_exception(tv)
        assert not families_validating(fams, tv)


def test_parallel_enumeration_matches_serial():
    assert [f.key for f in enumerate_schemes(3, jobs=2)] == [f.key for f in families(3)]

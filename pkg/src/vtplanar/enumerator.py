"""Exhaustive enumeration of labeling schemes up to isomorphism."""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

from .border_automaton import (
    PrimitiveTypeVector,
    align_type_vector,
    build_automaton,
    check_face_equivalence,
    is_aperiodic,
    primitive_type_vector,
)
from .geometry import is_degree3_exception  # noqa: F401
from .scheme_core import (
    INF,
    EdgeNeighborhood,
    LabelingScheme,
    NeighborhoodData,
    VectorPair,
    canonical_key,
    connectivity_of,
    eq_count,
    flag_classes,
    flag_index,
    make_neighborhood,
    neighborhood_canonical,
    scheme_key_from_data,
)

log = logging.getLogger(__name__)

MAX_DEGREE = 6


@dataclass(frozen=True)
class SchemeFamily:
    scheme: LabelingScheme
    ptv: PrimitiveTypeVector
    periodicity: str  # "P" or "A"
    connectivity: str
    key: tuple

    @property
    def degree(self) -> int:
        return self.scheme.degree

    @property
    def reverses(self) -> dict[int, bool]:
        return {c: nd.reverses for c, nd in self.scheme.data().items()}


def _rgs(d: int, start: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``d`` over ``start, start+1, ...``."""

    def rec(prefix, top):
        if len(prefix) == d:
            yield tuple(prefix)
            return
        for c in range(start, top + 2):
            yield from rec(prefix + [c], max(top, c))

    yield from rec([], start - 1)


def _face_vectors(d: int) -> Iterator[tuple[int, ...]]:
    # finite colors appear in first-occurrence order; INF may go anywhere
    for mask in itertools.product((False, True), repeat=d):
        n = d - sum(mask)
        for fin in _rgs(n, 1) if n else [()]:
            it = iter(fin)
            yield tuple(INF if m else next(it) for m in mask)


def _pairs_for_xi(xi: tuple[int, ...]) -> list[VectorPair]:
    out = []
    for phi in _face_vectors(len(xi)):
        p = VectorPair(xi, phi)
        if canonical_key(p) != p:
            continue
        if all(eq_count(p, c)[0] <= 2 for c in p.edge_colors()):
            out.append(p)
    return out


def enumerate_pairs(d: int) -> list[VectorPair]:
    """Canonical locked pairs of degree ``d`` with at most two classes per edge color."""
    if d < 2:
        raise ValueError("degree must be at least 2")
    out = []
    for xi in _rgs(d, 1):
        out.extend(_pairs_for_xi(xi))
    return sorted(out)


def enumerate_neighborhoods(pair: VectorPair, color: int) -> list[EdgeNeighborhood]:
    """Coherent neighborhoods of one color, one per canonical form."""
    n, classes = eq_count(pair, color)
    if n > 2:
        return []
    seen = {}
    for a in classes:
        for b in classes:
            if n == 2 and a == b:
                continue
            for i in a:
                for j in b:
                    for rev in (False, True):
                        nb = make_neighborhood(pair, i, j, rev)
                        if nb is not None:
                            seen.setdefault(neighborhood_canonical(nb), nb)
    return [seen[k] for k in sorted(seen)]


def _choice_data(pair: VectorPair, classes: dict, choice: tuple[bool, ...]):
    """Gluing data for one reversal choice, or None if faces do not lock
    or the crossing relation is multi-valued."""
    cls = flag_classes(pair)
    data = []
    rel: dict[int, set[int]] = {}
    for (c, cl), rev in zip(classes.items(), choice):
        i, j = cl[0][0], cl[-1][0]
        sign = -1 if rev else 1
        for b in (1, -1):
            if pair.face_of((i, b)) != pair.face_of((j, -b * sign)):
                return None
            x, y = cls[flag_index((i, b))], cls[flag_index((j, -b * sign))]
            rel.setdefault(x, set()).add(y)
            rel.setdefault(y, set()).add(x)
        data.append(NeighborhoodData(c, i, j, sign))
    if any(len(v) > 1 for v in rel.values()):
        return None
    return data


def _scheme(pair: VectorPair, data: list[NeighborhoodData]) -> LabelingScheme:
    nbs = tuple(make_neighborhood(pair, nd.i, nd.j, nd.reverses) for nd in data)
    return LabelingScheme(pair, nbs)


def schemes_of_pair(pair: VectorPair) -> list[SchemeFamily]:
    """All valid schemes on one canonical pair, deduplicated."""
    classes = {}
    for c in pair.edge_colors():
        n, cl = eq_count(pair, c)
        if n > 2:
            return []
        classes[c] = cl
    found: dict[tuple, SchemeFamily] = {}
    for choice in itertools.product((False, True), repeat=len(classes)):
        data = _choice_data(pair, classes, choice)
        if data is None:
            continue
        aut = build_automaton(pair, data)
        if not check_face_equivalence(aut):
            continue
        key = scheme_key_from_data(pair, data)
        if key in found:
            continue
        found[key] = SchemeFamily(
            _scheme(pair, data),
            primitive_type_vector(aut),
            "A" if is_aperiodic(aut) else "P",
            connectivity_of(pair),
            key,
        )
    return list(found.values())


def _work(xi: tuple[int, ...]) -> list[SchemeFamily]:
    out = []
    for p in _pairs_for_xi(xi):
        out.extend(schemes_of_pair(p))
    return out


def degree2_family() -> SchemeFamily:
    """The cycle: the single degree-2 family, handled in closed form."""
    pair = VectorPair((1, 1), (1, 1))
    data = [NeighborhoodData(1, 0, 1, 1)]
    aut = build_automaton(pair, data)
    return SchemeFamily(
        _scheme(pair, data),
        primitive_type_vector(aut),
        "P",
        connectivity_of(pair),
        scheme_key_from_data(pair, data),
    )


def enumerate_schemes(d: int, jobs: int = 1, max_degree: int = MAX_DEGREE) -> list[SchemeFamily]:
    """All scheme families of degree ``d``, sorted by canonical key.

    Args:
        d: vertex degree.
        jobs: worker processes; the work is split by edge vector.
        max_degree: refuse larger degrees (the search grows very quickly).
    """
    if not 2 <= d <= max_degree:
        raise ValueError(f"degree must lie in [2, {max_degree}]")
    if d == 2:
        return [degree2_family()]
    xis = list(_rgs(d, 1))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_work, xis, chunksize=1))
    else:
        parts = [_work(xi) for xi in xis]
    fams = {f.key: f for part in parts for f in part}
    log.info("degree %d: %d families", d, len(fams))
    return [fams[k] for k in sorted(fams)]


def counts(families) -> tuple[int, int]:
    p = sum(1 for f in families if f.periodicity == "P")
    return p, len(families) - p


def degree3_type_vectors() -> set[tuple]:
    """Shapes of the primitive type vectors of all degree-3 families."""
    return {f.ptv.shape() for f in enumerate_schemes(3)}


def families_validating(families, tv) -> list[SchemeFamily]:
    """Families whose primitive type vector admits ``tv`` up to symmetry."""
    return [f for f in families if len(f.ptv) == len(tv) and align_type_vector(f.ptv, tv)]


def degree3_exclusions(pmax: int = 30) -> list[tuple[int, ...]]:
    """Degree-3 type vectors that no labeling scheme validates."""
    out = [(3, 3, p) for p in range(5, pmax + 1)]
    out += [(3, 4, p) for p in range(6, pmax + 1)]
    out += [(3, 5, p) for p in range(9, pmax + 1)]
    return out


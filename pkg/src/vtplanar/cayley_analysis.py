"""Vertex stabilizers, multiply/divide, and bounded Cayley checking."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import networkx as nx
from networkx.algorithms import isomorphism

from .border_automaton import align_type_vector, build_automaton, is_aperiodic, parse_type_vector
from .builder import BuildError, GraphBall, build_ball, prepare
from .geometry import Geometry
from .scheme_core import (
    LabelingScheme,
    NeighborhoodData,
    SchemeError,
    VectorPair,
    automorphisms,
    flag_classes,
    make_neighborhood,
    scheme_key,
)

MAX_MULTIPLY_DEGREE = 24


@dataclass(frozen=True)
class StabilizerDescriptor:
    rotation_order: int
    has_reflection: bool

    @property
    def kind(self) -> str:
        if self.has_reflection:
            return "dihedral"
        return "cyclic" if self.rotation_order > 1 else "trivial"

    @property
    def order(self) -> int:
        return self.rotation_order * (2 if self.has_reflection else 1)


def _is_rotation(m, d) -> int | None:
    s = m.perm[0]
    if all(f == 1 for f in m.flip) and all(m.perm[i] == (i + s) % d for i in range(d)):
        return s
    return None


def _is_reflection(m, d) -> bool:
    s = m.perm[0]
    return all(f == -1 for f in m.flip) and all(m.perm[i] == (s - i) % d for i in range(d))


def stabilizer(scheme: LabelingScheme) -> StabilizerDescriptor:
    """Rotations and reflections of the star that preserve all labels.

    Any label-preserving symmetry of the pair preserves the gluing relation,
    which is defined on symmetry classes, so it extends to the whole graph.
    """
    d = scheme.degree
    rot = 0
    refl = False
    for m in automorphisms(scheme.pair):
        if _is_rotation(m, d) is not None:
            rot += 1
        elif _is_reflection(m, d):
            refl = True
    return StabilizerDescriptor(rot, refl)


def multiply(scheme: LabelingScheme, k: int, max_degree: int = MAX_MULTIPLY_DEGREE) -> LabelingScheme:
    """Concatenate ``k`` copies of the vectors, keeping the same gluings."""
    if k < 2:
        raise SchemeError("multiply needs k >= 2")
    d = scheme.degree
    if k * d > max_degree:
        raise SchemeError(f"degree {k * d} exceeds the maximum {max_degree}")
    pair = VectorPair(scheme.pair.xi * k, scheme.pair.phi * k)
    nbs = []
    for nd in scheme.data().values():
        nb = make_neighborhood(pair, nd.i, nd.j, nd.reverses)
        if nb is None:
            raise SchemeError("multiplied neighborhood does not lock")
        nbs.append(nb)
    return LabelingScheme(pair, tuple(nbs))


def divide(scheme: LabelingScheme, k: int | None = None) -> tuple[LabelingScheme, int]:
    """Largest ``k`` with ``scheme`` isomorphic to ``multiply(base, k)``.

    With ``k`` given only that factor is tried; ``(scheme, 1)`` means it failed.
    """
    d = scheme.degree
    key = scheme_key(scheme)
    data = scheme.data()
    factors = range(d // 2, 1, -1) if k is None else [k]
    for k in factors:
        if d % k:
            continue
        m = d // k
        xi, phi = scheme.pair.xi, scheme.pair.phi
        if xi != xi[:m] * k or phi != phi[:m] * k:
            continue
        base_pair = VectorPair(xi[:m], phi[:m])
        nbs = []
        for nd in data.values():
            nb = make_neighborhood(base_pair, nd.i % m, nd.j % m, nd.reverses)
            if nb is None:
                break
            nbs.append(nb)
        else:
            base = LabelingScheme(base_pair, tuple(nbs))
            try:
                if scheme_key(multiply(base, k, max_degree=d)) == key:
                    return base, k
            except SchemeError:
                continue
    return scheme, 1


def configuration_count(scheme: LabelingScheme) -> int:
    return len(set(flag_classes(scheme.pair)))


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(math.isqrt(n)) + 1))


def prime_degree_taxonomy(scheme: LabelingScheme, tv) -> str:
    """``FaceEdgeTransitive`` or ``Cayley`` for 3-connected prime-degree schemes."""
    d = scheme.degree
    if not is_prime(d):
        raise SchemeError(f"degree {d} is not prime")
    if scheme.pair.infinite_count:
        raise SchemeError("the taxonomy only covers 3-connected graphs")
    st = stabilizer(scheme)
    if st.rotation_order > 1:
        tv = parse_type_vector(tv) if isinstance(tv, str) else tuple(tv)
        if len(set(tv)) != 1:
            raise SchemeError("rotational stabilizer with a non-uniform type vector")
        return "FaceEdgeTransitive"
    return "Cayley"


# ---------------------------------------------------------------------------
# Cayley checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CayleyVerdict:
    verdict: str  # "Cayley", "NotCayley" or "Undetermined"
    reason: str
    witness: LabelingScheme | None = None

    def __str__(self):
        return f"{self.verdict}: {self.reason}"


def _rooted_ball(ball: GraphBall, radius: int) -> nx.Graph:
    g = ball.to_networkx()
    dist = nx.single_source_shortest_path_length(g, ball.root, cutoff=radius)
    h = g.subgraph(dist).copy()
    for v in h:
        h.nodes[v]["root"] = v == ball.root
    return h


def _same_ball(a: nx.Graph, b: nx.Graph) -> bool:
    if a.number_of_nodes() != b.number_of_nodes() or a.number_of_edges() != b.number_of_edges():
        return False
    nm = isomorphism.categorical_node_match("root", False)
    return nx.is_isomorphic(a, b, node_match=nm)


@lru_cache(maxsize=8)
def _catalog(d: int):
    from .enumerator import enumerate_schemes

    return tuple(enumerate_schemes(d))


def _graph_automorphisms(g: nx.Graph, limit: int = 100_000) -> list[tuple[int, ...]]:
    nodes = sorted(g)
    idx = {v: k for k, v in enumerate(nodes)}
    out = []
    for m in isomorphism.GraphMatcher(g, g).isomorphisms_iter():
        out.append(tuple(idx[m[v]] for v in nodes))
        if len(out) > limit:
            raise BuildError("automorphism group too large")
    return out


def _compose(p, q):
    return tuple(p[q[i]] for i in range(len(q)))


def _closure(gens, n):
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                x = _compose(g, h)
                if x not in group:
                    group.add(x)
                    nxt.append(x)
        frontier = nxt
        if len(group) > n:
            return None
    return group


def regular_subgroup(perms: list[tuple[int, ...]]) -> frozenset | None:
    """A subgroup acting regularly on the points, if one exists.

    Backtracking: repeatedly add an element sending point 0 to the first point
    not yet reached, keeping the generated group free of point-0 stabilizers.
    """
    n = len(perms[0])
    by_image: dict[int, list] = {}
    for p in perms:
        by_image.setdefault(p[0], []).append(p)

    def ok(group):
        return group is not None and all(g[0] != 0 or g == tuple(range(n)) for g in group)

    def rec(gens, group):
        reached = {g[0] for g in group}
        if len(reached) == n:
            return group
        u = min(set(range(n)) - reached)
        for g in by_image.get(u, []):
            new = _closure(gens + [g], n)
            if ok(new):
                res = rec(gens + [g], new)
                if res is not None:
                    return res
        return None

    res = rec([], {tuple(range(n))})
    return frozenset(res) if res is not None else None


def _six_n_pm_one(tv) -> bool:
    return len(tv) == 3 and len(set(tv)) == 1 and tv[0] != math.inf and tv[0] % 6 in (1, 5)


def is_cayley(scheme: LabelingScheme, tv, search_radius: int = 3, families=None) -> CayleyVerdict:
    """Decide whether the graph of ``(scheme, tv)`` is a Cayley graph.

    The search is bounded, so ``Undetermined`` is a possible answer.
    """
    tv_al, g, _ = prepare(scheme, tv)
    aut = build_automaton(scheme.pair, scheme.data().values())
    if is_aperiodic(aut):
        return CayleyVerdict("NotCayley", "aperiodic face borders")
    st = stabilizer(scheme)
    if st.rotation_order == 1:
        return CayleyVerdict("Cayley", "no rotation fixes a vertex", scheme)

    d = scheme.degree
    ball = build_ball(scheme, tv_al, search_radius, coords=False)
    finite = ball.closed
    target = ball.to_networkx() if finite else _rooted_ball(ball, search_radius)
    cands = families if families is not None else _catalog(d) if d <= 5 else ()
    for fam in cands:
        other = fam.scheme
        if stabilizer(other).rotation_order != 1 or is_aperiodic(
            build_automaton(other.pair, other.data().values())
        ):
            continue
        al = align_type_vector(fam.ptv, tv_al)
        if al is None:
            continue
        try:
            ob = build_ball(other, al[0], search_radius, coords=False)
        except (BuildError, SchemeError):
            continue
        og = ob.to_networkx() if finite else _rooted_ball(ob, search_radius)
        if _same_ball(target, og):
            return CayleyVerdict("Cayley", "a rotation-free scheme gives the same graph", other)

    if finite:
        perms = _graph_automorphisms(ball.to_networkx())
        if regular_subgroup(perms) is not None:
            return CayleyVerdict("Cayley", "the automorphism group has a regular subgroup")
        return CayleyVerdict("NotCayley", "no subgroup of the automorphism group acts regularly")
    if d == 3 and _six_n_pm_one(tv_al):
        return CayleyVerdict("NotCayley", "type vector [6n+-1,6n+-1,6n+-1]")
    return CayleyVerdict("Undetermined", f"no rotation-free scheme matched up to radius {search_radius}")


def taxonomy_agrees(scheme: LabelingScheme, tv, verdict: CayleyVerdict) -> bool:
    """The prime-degree dichotomy is not exclusive: only the Cayley branch
    forces the verdict."""
    branch = prime_degree_taxonomy(scheme, tv)
    if branch == "Cayley":
        return verdict.verdict == "Cayley"
    return verdict.verdict in ("Cayley", "NotCayley", "Undetermined")


def geometry_of(scheme: LabelingScheme, tv) -> Geometry | None:
    return prepare(scheme, tv)[1]

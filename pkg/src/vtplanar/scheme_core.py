"""Locked edge/face vectors, edge neighborhoods and labeling schemes.

Positions are 0-based internally. For a pair of degree ``d`` the face
``phi[i]`` lies between the edges ``xi[i]`` and ``xi[i + 1]`` (indices mod
``d``), so the edge ``xi[i]`` separates ``phi[i - 1]`` and ``phi[i]``.

Colors are small integers. Edge colors start at 1. Face colors start at 1
and the infinite face is the reserved color :data:`INF` (0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

INF = 0

Flag = tuple[int, int]  # (position, side) with side in {+1, -1}


class SchemeError(ValueError):
    """Raised on malformed pairs, neighborhoods or schemes."""


# ---------------------------------------------------------------------------
# Vector pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class VectorPair:
    """Locked edge vector ``xi`` and face vector ``phi`` around a vertex."""

    xi: tuple[int, ...]
    phi: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(int(c) for c in self.xi))
        object.__setattr__(self, "phi", tuple(int(c) for c in self.phi))
        if len(self.xi) != len(self.phi):
            raise SchemeError("edge and face vectors must have the same length")
        if len(self.xi) < 2:
            raise SchemeError("degree must be at least 2")
        if min(self.xi) < 1:
            raise SchemeError("edge colors must be positive integers")
        if min(self.phi) < 0:
            raise SchemeError("face colors must be non-negative integers")

    @property
    def degree(self) -> int:
        return len(self.xi)

    @property
    def infinite_count(self) -> int:
        return self.phi.count(INF)

    def edge_colors(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.xi)))

    def face_colors(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.phi)))

    def face_of(self, flag: Flag) -> int:
        """Face color on side ``flag[1]`` of edge ``flag[0]``."""
        i, b = flag
        return self.phi[i] if b > 0 else self.phi[(i - 1) % self.degree]

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Maximal runs of edges between infinite faces.

        Block ``k`` ends at the ``k``-th infinite face in position order, so
        block 0 is the block containing position 0. Without infinite faces
        the whole vector is one (cyclic) block.
        """
        d = self.degree
        ends = [i for i in range(d) if self.phi[i] == INF]
        if not ends:
            return (tuple(range(d)),)
        out = []
        for k, e in enumerate(ends):
            i = (ends[k - 1] + 1) % d
            run = [i]
            while i != e:
                i = (i + 1) % d
                run.append(i)
            out.append(tuple(run))
        return tuple(out)


@dataclass(frozen=True)
class PairMap:
    """A position map with orientation signs.

    Position ``i`` goes to ``perm[i]``; ``flip[i]`` is -1 when the block
    holding ``i`` is traversed in reverse by the map.
    """

    perm: tuple[int, ...]
    flip: tuple[int, ...]

    def map_flag(self, flag: Flag) -> Flag:
        i, b = flag
        return self.perm[i], b * self.flip[i]

    def compose(self, other: "PairMap") -> "PairMap":
        """Return ``self`` applied after ``other``."""
        perm = tuple(self.perm[other.perm[i]] for i in range(len(self.perm)))
        flip = tuple(other.flip[i] * self.flip[other.perm[i]] for i in range(len(self.perm)))
        return PairMap(perm, flip)

    def inverse(self) -> "PairMap":
        d = len(self.perm)
        perm = [0] * d
        flip = [1] * d
        for i in range(d):
            perm[self.perm[i]] = i
            flip[self.perm[i]] = self.flip[i]
        return PairMap(tuple(perm), tuple(flip))


def identity_map(d: int) -> PairMap:
    return PairMap(tuple(range(d)), (1,) * d)


def apply_map(pair: VectorPair, m: PairMap) -> VectorPair:
    """Image of ``pair`` under the position map ``m``."""
    d = pair.degree
    xi = [0] * d
    phi: list[int | None] = [None] * d
    for i in range(d):
        xi[m.perm[i]] = pair.xi[i]
    for i in range(d):
        # face after edge i stays glued to the same side of its image
        target = m.perm[i] if m.flip[i] > 0 else (m.perm[i] - 1) % d
        if phi[target] is not None and phi[target] != pair.phi[i]:
            raise SchemeError("map does not preserve locking")
        phi[target] = pair.phi[i]
    # slots left empty sit between two rearranged blocks
    return VectorPair(tuple(xi), tuple(INF if f is None else f for f in phi))


def rotation_map(d: int, s: int) -> PairMap:
    return PairMap(tuple((i + s) % d for i in range(d)), (1,) * d)


def reflection_map(d: int) -> PairMap:
    # Edge i goes to -i. The face after i, phi[i], must still touch the image
    # of edge i on the side facing the image of edge i+1, which is -i-1; with
    # flip -1 apply_map stores it at index -i-1, keeping the locking intact.
    return PairMap(tuple((-i) % d for i in range(d)), (-1,) * d)


def _arrangement_map(d: int, start: int, seq: Sequence[tuple[int, int]]) -> PairMap:
    perm = [0] * d
    flip = [1] * d
    for k, (old, sign) in enumerate(seq):
        perm[old] = (start + k) % d
        flip[old] = sign
    return PairMap(tuple(perm), tuple(flip))


def rearrangement_map(pair: VectorPair, sigma: Sequence[int]) -> PairMap:
    blocks = pair.blocks()
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(len(blocks))):
        raise SchemeError("sigma must permute the block indices")
    if pair.infinite_count == 0:
        if sigma != (0,):
            raise SchemeError("no blocks to rearrange")
        return identity_map(pair.degree)
    if len(blocks) < 2 and sigma != tuple(range(len(blocks))):
        raise SchemeError("no blocks to rearrange")
    seq = [(p, 1) for k in sigma for p in blocks[k]]
    return _arrangement_map(pair.degree, blocks[0][0], seq)


def twist_map(pair: VectorPair, block: int) -> PairMap:
    if pair.infinite_count == 0:
        raise SchemeError("twists need at least one infinite face; use reflect")
    blocks = pair.blocks()
    if not 0 <= block < len(blocks):
        raise SchemeError(f"block index {block} out of range")
    perm = list(range(pair.degree))
    flip = [1] * pair.degree
    run = blocks[block]
    for k, p in enumerate(run):
        perm[p] = run[len(run) - 1 - k]
        flip[p] = -1
    return PairMap(tuple(perm), tuple(flip))


def rotate(pair: VectorPair, s: int) -> VectorPair:
    """Shift both vectors so the edge at position ``i`` moves to ``i + s``."""
    return apply_map(pair, rotation_map(pair.degree, s))


def reflect(pair: VectorPair) -> VectorPair:
    """Mirror image of the pair, locking preserved."""
    return apply_map(pair, reflection_map(pair.degree))


def rearrange(pair: VectorPair, sigma: Sequence[int]) -> VectorPair:
    """Reorder blocks so that new block ``k`` is old block ``sigma[k]``.

    The concatenation starts where block 0 started, so the identity
    permutation returns the pair unchanged.
    """
    return apply_map(pair, rearrangement_map(pair, sigma))


def twist(pair: VectorPair, block: int) -> VectorPair:
    """Reverse one block in place, leaving the others untouched."""
    return apply_map(pair, twist_map(pair, block))


@lru_cache(maxsize=4096)
def isomorphism_maps(pair: VectorPair) -> tuple[PairMap, ...]:
    """All position maps generated by rotations, reflections,
    rearrangements and twists."""
    d = pair.degree
    if pair.infinite_count == 0:
        maps = [rotation_map(d, s) for s in range(d)]
        refl = reflection_map(d)
        maps += [m.compose(refl) for m in maps]
        return tuple(maps)
    blocks = pair.blocks()
    t = len(blocks)
    out = set()
    # cyclic shifts of the block order are rotations, so block 0 stays first
    for rest in itertools.permutations(range(1, t)):
        order = (0,) + rest
        for flips in itertools.product((1, -1), repeat=t):
            seq = []
            for k in order:
                run = blocks[k] if flips[k] > 0 else blocks[k][::-1]
                seq.extend((p, flips[k]) for p in run)
            for s in range(d):
                out.add(_arrangement_map(d, s, seq))
    return tuple(sorted(out, key=lambda m: (m.perm, m.flip)))


@lru_cache(maxsize=4096)
def automorphisms(pair: VectorPair) -> tuple[PairMap, ...]:
    """Isomorphisms mapping the pair onto itself, colors included."""
    return tuple(m for m in isomorphism_maps(pair) if apply_map(pair, m) == pair)


def relabel(pair: VectorPair) -> VectorPair:
    """Rename colors by order of first occurrence (the infinite color stays)."""
    em: dict[int, int] = {}
    fm: dict[int, int] = {INF: INF}
    for c in pair.xi:
        em.setdefault(c, len(em) + 1)
    for c in pair.phi:
        fm.setdefault(c, len(fm))
    return VectorPair(tuple(em[c] for c in pair.xi), tuple(fm[c] for c in pair.phi))


def canonical_pair(pair: VectorPair) -> VectorPair:
    """Least pair (lexicographic on ``(xi, phi)``) isomorphic to ``pair``."""
    return min(apply_map(pair, m) for m in isomorphism_maps(pair))


def canonical_key(pair: VectorPair) -> VectorPair:
    """Least pair isomorphic to ``pair`` up to a renaming of the colors."""
    return min(relabel(apply_map(pair, m)) for m in isomorphism_maps(pair))


def are_isomorphic(p: VectorPair, q: VectorPair) -> bool:
    return p.degree == q.degree and canonical_pair(p) == canonical_pair(q)


# ---------------------------------------------------------------------------
# Equivalence classes of positions and flags
# ---------------------------------------------------------------------------


def _union_find(n: int):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    return find, union


@lru_cache(maxsize=4096)
def position_classes(pair: VectorPair) -> tuple[tuple[int, ...], ...]:
    """Orbits of positions under the automorphisms, sorted."""
    find, union = _union_find(pair.degree)
    for m in automorphisms(pair):
        for i in range(pair.degree):
            union(i, m.perm[i])
    groups: dict[int, list[int]] = {}
    for i in range(pair.degree):
        groups.setdefault(find(i), []).append(i)
    return tuple(sorted(tuple(g) for g in groups.values()))


def eq_count(pair: VectorPair, color: int) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Number of equivalence classes among the edges of one color.

    Returns:
        ``(count, classes)`` where each class is a tuple of positions.

    Raises:
        SchemeError: if the color does not occur in ``xi``.
    """
    if color not in pair.xi:
        raise SchemeError(f"edge color {color} does not occur in the pair")
    classes = tuple(c for c in position_classes(pair) if pair.xi[c[0]] == color)
    return len(classes), classes


@lru_cache(maxsize=4096)
def flag_classes(pair: VectorPair) -> tuple[int, ...]:
    """Class id for every flag, indexed by ``2 * pos + (0 if side > 0 else 1)``.

    Class ids are the smallest flag index of each class.
    """
    find, union = _union_find(2 * pair.degree)
    for m in automorphisms(pair):
        for i in range(pair.degree):
            for b in (1, -1):
                union(flag_index((i, b)), flag_index(m.map_flag((i, b))))
    return tuple(find(f) for f in range(2 * pair.degree))


def flag_index(flag: Flag) -> int:
    return 2 * flag[0] + (0 if flag[1] > 0 else 1)


def index_flag(k: int) -> Flag:
    return k // 2, (1 if k % 2 == 0 else -1)


# ---------------------------------------------------------------------------
# Edge neighborhoods
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeNeighborhood:
    """Both extremities of an edge, each read from the central edge (position 0)."""

    color: int
    first: VectorPair
    second: VectorPair

    def __post_init__(self):
        if self.first.degree != self.second.degree:
            raise SchemeError("extremities of a neighborhood must have the same degree")
        if self.first.xi[0] != self.color or self.second.xi[0] != self.color:
            raise SchemeError("central edge must carry the neighborhood color")
        if self.first.phi[0] != self.second.phi[-1] or self.first.phi[-1] != self.second.phi[0]:
            raise SchemeError("extremities are not locked across the central edge")

    @property
    def separator(self) -> tuple[int, int]:
        return self.first.phi[0], self.second.phi[0]


def neighborhood_invert(nb: EdgeNeighborhood) -> EdgeNeighborhood:
    return EdgeNeighborhood(nb.color, nb.second, nb.first)


def neighborhood_reflect(nb: EdgeNeighborhood) -> EdgeNeighborhood:
    return EdgeNeighborhood(nb.color, reflect(nb.first), reflect(nb.second))


def neighborhood_twist(nb: EdgeNeighborhood, extremity: int, block: int) -> EdgeNeighborhood:
    """Twist one block of one extremity; the central edge must stay put."""
    if extremity not in (0, 1):
        raise SchemeError("extremity must be 0 or 1")
    ext = nb.first if extremity == 0 else nb.second
    m = twist_map(ext, block)
    if m.perm[0] != 0:
        raise SchemeError("twist moves the central edge")
    new = apply_map(ext, m)
    first, second = (new, nb.second) if extremity == 0 else (nb.first, new)
    return EdgeNeighborhood(nb.color, first, second)


def neighborhood_canonical(nb: EdgeNeighborhood) -> tuple:
    """Canonical form of a neighborhood under inversion, symmetry and
    extremity twists/rearrangements fixing the central edge."""

    def fixing(p: VectorPair):
        return [m for m in isomorphism_maps(p) if m.perm[0] == 0]

    best = None
    for a, b in ((nb.first, nb.second), (nb.second, nb.first)):
        for pa, pb in ((a, b), (reflect(a), reflect(b))):
            ka = min(apply_map(pa, m) for m in fixing(pa) if m.flip[0] > 0)
            kb = min(apply_map(pb, m) for m in fixing(pb) if m.flip[0] > 0)
            key = (ka, kb)
            if best is None or key < best:
                best = key
    return best


def coherent(nb: EdgeNeighborhood, pair: VectorPair) -> bool:
    """True iff both extremities are isomorphic to ``pair``."""
    if nb.first.degree != pair.degree:
        return False
    c = canonical_pair(pair)
    return canonical_pair(nb.first) == c and canonical_pair(nb.second) == c


def make_neighborhood(pair: VectorPair, i: int, j: int, reverse: bool) -> EdgeNeighborhood | None:
    """Neighborhood joining position ``i`` to position ``j`` of ``pair``.

    ``reverse`` selects an edge neighborhood that reverses the direction of
    rotation. Returns None when the faces do not lock across the edge.
    """
    if pair.xi[i] != pair.xi[j]:
        return None
    d = pair.degree
    first = rotate(pair, -i)
    if reverse:
        second = rotate(reflect(pair), j)  # reflection sends j to -j
    else:
        second = rotate(pair, -j)
    try:
        return EdgeNeighborhood(pair.xi[i], first, second)
    except SchemeError:
        return None


@dataclass(frozen=True)
class NeighborhoodData:
    """How a neighborhood sits on its pair: ``i`` glued to ``j``.

    ``sign`` is +1 when the neighborhood keeps the direction of rotation and
    -1 when it reverses it.
    """

    color: int
    i: int
    j: int
    sign: int

    @property
    def reverses(self) -> bool:
        return self.sign < 0


def _locate(pair: VectorPair, ext: VectorPair) -> tuple[int, int] | None:
    for m in isomorphism_maps(pair):
        if apply_map(pair, m) == ext:
            i = m.perm.index(0)
            return i, m.flip[i]
    return None


def neighborhood_data(pair: VectorPair, nb: EdgeNeighborhood) -> NeighborhoodData | None:
    """Read off which positions a coherent neighborhood glues together."""
    a = _locate(pair, nb.first)
    b = _locate(pair, nb.second)
    if a is None or b is None:
        return None
    return NeighborhoodData(nb.color, a[0], b[0], a[1] * b[1])


# ---------------------------------------------------------------------------
# Labeling schemes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabelingScheme:
    """A locked pair together with one edge neighborhood per edge color."""

    pair: VectorPair
    neighborhoods: tuple[EdgeNeighborhood, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "neighborhoods", tuple(sorted(self.neighborhoods, key=lambda n: n.color))
        )

    @property
    def degree(self) -> int:
        return self.pair.degree

    def neighborhood(self, color: int) -> EdgeNeighborhood:
        for nb in self.neighborhoods:
            if nb.color == color:
                return nb
        raise SchemeError(f"no neighborhood for edge color {color}")

    def data(self) -> dict[int, NeighborhoodData]:
        out = {}
        for nb in self.neighborhoods:
            nd = neighborhood_data(self.pair, nb)
            if nd is None:
                raise SchemeError(f"neighborhood of color {nb.color} is not coherent")
            out[nb.color] = nd
        return out


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_scheme(scheme: LabelingScheme) -> ValidationReport:
    """Check the three structural conditions of a labeling scheme.

    Violations are collected as messages tagged (i), (ii) or (iii); face
    equivalence is checked by the border automaton.
    """
    rep = ValidationReport()
    pair = scheme.pair
    if len(pair.xi) != len(pair.phi):
        rep.violations.append("(i) edge and face vectors differ in length")
        return rep
    for c in pair.edge_colors():
        n, _ = eq_count(pair, c)
        if n > 2:
            rep.violations.append(f"(ii) edge color {c} splits into {n} classes")
    counts: dict[int, int] = {}
    for nb in scheme.neighborhoods:
        counts[nb.color] = counts.get(nb.color, 0) + 1
    for c in pair.edge_colors():
        if counts.get(c, 0) != 1:
            rep.violations.append(f"(iii) edge color {c} has {counts.get(c, 0)} neighborhoods")
    for c in counts:
        if c not in pair.xi:
            rep.violations.append(f"(iii) neighborhood color {c} does not occur in the pair")
    for nb in scheme.neighborhoods:
        if nb.color not in pair.xi:
            continue
        nd = neighborhood_data(pair, nb)
        if nd is None:
            rep.violations.append(f"(iii) neighborhood of color {nb.color} is not coherent")
            continue
        n, classes = eq_count(pair, nb.color)
        if n == 2:
            ci = next(k for k, cl in enumerate(classes) if nd.i in cl)
            cj = next(k for k, cl in enumerate(classes) if nd.j in cl)
            if ci == cj:
                rep.violations.append(
                    f"(iii) both extremities of color {nb.color} lie in the same class"
                )
    return rep


def scheme_from_choices(pair: VectorPair, reverses: dict[int, bool]) -> LabelingScheme | None:
    """Build the scheme gluing, for each color, its first class to its last.

    Returns None when some color has more than two classes or some
    neighborhood fails to lock.
    """
    nbs = []
    for c in pair.edge_colors():
        n, classes = eq_count(pair, c)
        if n > 2:
            return None
        nb = make_neighborhood(pair, classes[0][0], classes[-1][0], reverses[c])
        if nb is None:
            return None
        nbs.append(nb)
    return LabelingScheme(pair, tuple(nbs))


def inv_flag_relation(pair: VectorPair, data: Iterable[NeighborhoodData]) -> dict[int, set[int]]:
    """Flag-class relation across edges.

    A flag ``(i, b)`` names the face on side ``b`` of edge ``i``. Crossing
    the edge glued by ``(i, j, sign)`` lands on ``(j, -b * sign)``; the
    relation is given on flag classes and is symmetric.
    """
    cls = flag_classes(pair)
    rel: dict[int, set[int]] = {}
    for nd in data:
        for b in (1, -1):
            a = cls[flag_index((nd.i, b))]
            c = cls[flag_index((nd.j, -b * nd.sign))]
            rel.setdefault(a, set()).add(c)
            rel.setdefault(c, set()).add(a)
    return rel


def scheme_key(scheme: LabelingScheme) -> tuple:
    """Isomorphism invariant of a scheme, colors renamed canonically."""
    return scheme_key_from_data(scheme.pair, scheme.data().values())


def scheme_key_from_data(pair: VectorPair, data: Iterable[NeighborhoodData]) -> tuple:
    cls = flag_classes(pair)
    rel = inv_flag_relation(pair, data)
    d = pair.degree
    flags = [(a, b) for a in range(2 * d) for b in range(2 * d) if cls[b] in rel.get(cls[a], ())]
    key = canonical_key(pair)
    best = None
    for m in isomorphism_maps(pair):
        if relabel(apply_map(pair, m)) != key:
            continue
        mapped = tuple(
            sorted(
                (flag_index(m.map_flag(index_flag(a))), flag_index(m.map_flag(index_flag(b))))
                for a, b in flags
            )
        )
        if best is None or mapped < best:
            best = mapped
    return key, best


CONNECTIVITY = ("3-connected", "2-connected-2-separable", "1-separable")


def connectivity_of(pair: VectorPair) -> str:
    """Connectivity class read from the number of infinite faces at a vertex."""
    return CONNECTIVITY[min(pair.infinite_count, 2)]

"""Finite balls of the graph of a labeling scheme.

Every vertex carries a copy of the pair ``(xi, phi)`` in a dihedral frame:
its local dart ``x`` is an edge of color ``xi[x]`` and ``eps`` tells whether
local order runs counter-clockwise (+1) or clockwise (-1) in the embedding.

Vertices are completed in breadth-first order. Completing a vertex closes
each finite face around it as soon as the chain of known vertices along the
face has the face's size; new vertices are only created to fill the gap
that remains. Identifications are purely combinatorial; coordinates are
attached afterwards and only used for drawing and sanity checks.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .border_automaton import (
    BorderAutomaton,
    align_type_vector,
    build_automaton,
    check_face_equivalence,
    face_orbit,
    parse_type_vector,
    primitive_type_vector,
)
from .geometry import (
    Geometry,
    GeometryError,
    classify_geometry,
    interior_angle,
    point,
    rotation,
    solve_edge_length,
    translation,
)
from .scheme_core import (
    INF,
    EdgeNeighborhood,
    LabelingScheme,
    SchemeError,
    VectorPair,
    connectivity_of,
    flag_classes,
    flag_index,
    index_flag,
    validate_scheme,
)

Dart = tuple[int, int]  # (vertex, local position)


class InvariantError(RuntimeError):
    """A scheme and a ball disagree: a bug or an inconsistent scheme."""


class BuildError(SchemeError):
    """User-facing problems: bad type vector, radius, or resource limit."""


@dataclass
class Vertex:
    eps: int
    frame: np.ndarray | None = None


@dataclass
class GraphBall:
    pair: VectorPair
    tv: tuple[float, ...]  # aligned with the local face positions of the pair
    radius: int
    vertices: list[Vertex] = field(default_factory=list)
    links: dict[Dart, Dart] = field(default_factory=dict)
    faces: list[tuple[int, tuple[Dart, ...]]] = field(default_factory=list)  # (color, corners)
    geometry: Geometry | None = None
    length: float | None = None
    closed: bool = False  # True when the whole (finite) graph was built

    root = 0

    @property
    def degree(self) -> int:
        return self.pair.degree

    def __len__(self):
        return len(self.vertices)

    def edges(self) -> list[tuple[Dart, Dart]]:
        return sorted((a, b) for a, b in self.links.items() if a < b)

    def edge_color(self, dart: Dart) -> int:
        return self.pair.xi[dart[1]]

    def is_complete(self, v: int) -> bool:
        return all((v, x) in self.links for x in range(self.degree))

    def ccw(self, v: int) -> list[int]:
        """Local dart positions of ``v`` in counter-clockwise order from dart 0."""
        d = self.degree
        return [(self.vertices[v].eps * k) % d for k in range(d)]

    def rotation_system(self, v: int) -> list[tuple[int | None, int]]:
        """``(neighbor, edge color)`` around ``v`` counter-clockwise."""
        return [(self.links.get((v, x), (None,))[0], self.pair.xi[x]) for x in self.ccw(v)]

    def corner_face(self, dart: Dart) -> int:
        """Face color on the counter-clockwise side of a dart."""
        v, x = dart
        return self.pair.face_of((x, self.vertices[v].eps))

    def star(self, v: int, start: int | None = None) -> VectorPair:
        """Colors read counter-clockwise around ``v`` starting at local dart ``start``."""
        order = self.ccw(v)
        if start is not None:
            k = order.index(start)
            order = order[k:] + order[:k]
        return VectorPair(
            tuple(self.pair.xi[x] for x in order),
            tuple(self.corner_face((v, x)) for x in order),
        )

    def distances(self) -> dict[int, int]:
        dist = {self.root: 0}
        q = deque([self.root])
        adj = self.adjacency()
        while q:
            v = q.popleft()
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        return dist

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in range(len(self.vertices))}
        for (a, _), (b, _) in self.edges():
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        for (a, x), (b, y) in self.edges():
            g.add_edge(a, b, color=self.pair.xi[x])
        return g

    def coordinates(self) -> dict[int, np.ndarray]:
        return {v: point(vx.frame) for v, vx in enumerate(self.vertices) if vx.frame is not None}

    def counts(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.links) // 2, len(self.faces)


def _dart_angles(pair: VectorPair, tv, g: Geometry | None, length: float | None) -> list[float]:
    """Cumulative angle of each local dart measured from dart 0."""
    d = pair.degree
    out = [0.0]
    for i in range(d - 1):
        out.append(out[-1] + interior_angle(tv[i], length or 1.0, g))
    return out


class _Builder:
    def __init__(self, scheme: LabelingScheme, tv, geometry, length, coords: bool, max_vertices: int):
        self.scheme = scheme
        self.pair = scheme.pair
        self.aut: BorderAutomaton = build_automaton(self.pair, scheme.data().values())
        self.cls = flag_classes(self.pair)
        self.cross = _crossing(self.pair, scheme)
        self.tv = tv
        self.ball = GraphBall(self.pair, tv, 0, geometry=geometry, length=length)
        self.coords = coords and geometry is not None
        self.max_vertices = max_vertices
        self.gluings: list[int] = []  # number of gluing options seen at each new edge
        if self.coords:
            self.angles = _dart_angles(self.pair, tv, geometry, length)
        self.ball.vertices.append(Vertex(1, np.eye(3) if self.coords else None))

    # -- basic moves -------------------------------------------------------

    def eps(self, v):
        return self.ball.vertices[v].eps

    def new_vertex(self, dart: Dart) -> int:
        """Create the vertex at the far end of an open dart."""
        v, x = dart
        if len(self.ball.vertices) >= self.max_vertices:
            raise BuildError(f"vertex limit {self.max_vertices} reached")
        options = self.cross[self.cls[flag_index((x, self.eps(v)))]]
        self.gluings.append(len(options))
        if len(options) != 1:
            raise InvariantError(f"{len(options)} ways to glue across dart {dart}")
        y, beta = index_flag(next(iter(options)))
        if self.pair.xi[y] != self.pair.xi[x]:
            raise InvariantError("gluing changes the edge color")
        w = len(self.ball.vertices)
        frame = None
        if self.coords:
            g, l = self.ball.geometry, self.ball.length
            ew = -beta
            frame = (
                self.ball.vertices[v].frame
                @ rotation(self.eps(v) * self.angles[x])
                @ translation(l, g)
                @ rotation(math.pi)
                @ rotation(-ew * self.angles[y])
            )
        self.ball.vertices.append(Vertex(-beta, frame))
        self.link(dart, (w, y), check=False)
        return w

    def link(self, a: Dart, b: Dart, check: bool = True):
        if a in self.ball.links or b in self.ball.links:
            raise InvariantError(f"dart {a} or {b} is already linked")
        if check:
            src = self.cls[flag_index((a[1], self.eps(a[0])))]
            dst = self.cls[flag_index((b[1], -self.eps(b[0])))]
            if dst not in self.cross[src]:
                raise InvariantError(f"closing edge {a}-{b} does not match the scheme")
        self.ball.links[a] = b
        self.ball.links[b] = a

    # -- faces ---------------------------------------------------------------

    def corner_dart(self, v: int, i: int) -> int:
        """Dart whose counter-clockwise side is the local face ``i`` of ``v``."""
        return i if self.eps(v) > 0 else (i + 1) % self.pair.degree

    def face_size(self, dart: Dart) -> float:
        v, x = dart
        i = x if self.eps(v) > 0 else (x - 1) % self.pair.degree
        return self.tv[i]

    def fwd(self, corner: Dart) -> Dart | None:
        other = self.ball.links.get(corner)
        if other is None:
            return None
        w, y = other
        return w, (y - self.eps(w)) % self.pair.degree

    def back(self, corner: Dart) -> Dart | None:
        v, x = corner
        return self.ball.links.get((v, (x + self.eps(v)) % self.pair.degree))

    def chain(self, corner: Dart) -> tuple[list[Dart], bool]:
        """Known corners of the face at ``corner`` in border order.

        Returns the chain and whether the face is already closed.
        """
        size = self.face_size(corner)
        chain = [corner]
        c = self.fwd(corner)
        while c is not None and c != corner:
            chain.append(c)
            if len(chain) > size:
                raise InvariantError("face border longer than its size")
            c = self.fwd(c)
        if c == corner:
            return chain, True
        c = self.back(corner)
        while c is not None:
            chain.insert(0, c)
            if len(chain) > size:
                raise InvariantError("face border longer than its size")
            c = self.back(c)
        return chain, False

    def try_close(self, corner: Dart) -> bool:
        """Close the face at ``corner`` if all its vertices are known."""
        if self.face_size(corner) == math.inf:
            return False
        chain, closed = self.chain(corner)
        if closed or len(chain) < self.face_size(corner):
            return False
        v, x = chain[0]
        self.link(chain[-1], (v, (x + self.eps(v)) % self.pair.degree))
        return True

    def settle(self, todo) -> None:
        """Close every face that became closable around the given vertices."""
        todo = list(todo)
        d = self.pair.degree
        while todo:
            v = todo.pop()
            for x in range(d):
                if self.try_close((v, x)):
                    first = self.back((v, x))
                    todo.append(v)
                    if first is not None:
                        todo.append(first[0])
                    todo.extend(w for w, _ in self.chain((v, x))[0])
                    break

    def complete_face(self, corner: Dart) -> None:
        """Fill and close the finite face at ``corner``."""
        if self.face_size(corner) == math.inf:
            return
        while True:
            chain, closed = self.chain(corner)
            if closed:
                return
            if self.try_close(corner):
                self.settle([w for w, _ in chain])
                return
            end = chain[-1]
            # the face on the other side of the open dart may already be complete
            self.settle([end[0]])
            if end in self.ball.links:
                continue
            w = self.new_vertex(end)
            self.settle([end[0], w])

    def collect_faces(self) -> None:
        """Record every closed finite face once, starting at its least corner."""
        seen: set[Dart] = set()
        faces = []
        for v in range(len(self.ball.vertices)):
            for x in range(self.pair.degree):
                c = (v, x)
                if c in seen or self.face_size(c) == math.inf:
                    continue
                chain, closed = self.chain(c)
                seen.update(chain)
                if closed:
                    faces.append((self.ball.corner_face(c), tuple(chain)))
        self.ball.faces = faces

    def complete_vertex(self, v: int):
        d = self.pair.degree
        for i in range(d):
            if self.pair.phi[i] != INF:
                self.complete_face((v, self.corner_dart(v, i)))
        for x in range(d):
            if (v, x) not in self.ball.links:
                self.settle([v])
            if (v, x) not in self.ball.links:
                w = self.new_vertex((v, x))
                self.settle([v, w])


def _crossing(pair: VectorPair, scheme: LabelingScheme) -> dict[int, set[int]]:
    cls = flag_classes(pair)
    rel: dict[int, set[int]] = {c: set() for c in set(cls)}
    for nd in scheme.data().values():
        for b in (1, -1):
            a = cls[flag_index((nd.i, b))]
            c = cls[flag_index((nd.j, -b * nd.sign))]
            rel[a].add(c)
            rel[c].add(a)
    return rel


def prepare(scheme: LabelingScheme, tv) -> tuple[tuple[float, ...], Geometry | None, float | None]:
    """Align ``tv`` with the pair and solve the geometry when possible."""
    rep = validate_scheme(scheme)
    if not rep.ok:
        raise BuildError("; ".join(rep.violations))
    aut = build_automaton(scheme.pair, scheme.data().values())
    if not check_face_equivalence(aut):
        raise BuildError("scheme fails face equivalence")
    ptv = primitive_type_vector(aut)
    tv = parse_type_vector(tv) if isinstance(tv, str) else tuple(tv)
    aligned = align_type_vector(ptv, tv)
    if aligned is None:
        raise BuildError(f"type vector {list(tv)} is not valid for ptv {ptv}")
    tv = aligned[0]
    try:
        sol = solve_edge_length(tv)
        return tv, sol.geometry, sol.length
    except GeometryError:
        if len(tv) < 3:
            return tv, None, None
        raise


def build_ball(
    scheme: LabelingScheme,
    tv,
    radius: int,
    coords: bool = True,
    max_vertices: int = 200_000,
) -> GraphBall:
    """Ball of radius ``radius`` around a vertex of the graph of ``(scheme, tv)``.

    Spherical type vectors build the whole finite graph whatever the radius.
    """
    if radius < 1:
        raise BuildError("radius must be at least 1")
    tv, g, length = prepare(scheme, tv)
    b = _Builder(scheme, tv, g, length, coords, max_vertices)
    finite = g is Geometry.SPHERICAL or (g is None and math.inf not in tv)
    done: set[int] = set()
    while True:
        dist = b.ball.distances()
        todo = [v for v in sorted(dist, key=lambda v: (dist[v], v)) if v not in done]
        if not finite:
            todo = [v for v in todo if dist[v] < radius]
        if not todo:
            break
        # complete the nearest layer as a batch; distances are recomputed after
        level = dist[todo[0]]
        for v in todo:
            if dist[v] != level:
                break
            if v in done:
                continue
            b.complete_vertex(v)
            done.add(v)
    b.collect_faces()
    ball = b.ball
    if finite:
        ball.closed = all(ball.is_complete(v) for v in range(len(ball.vertices)))
        ball.radius = max(ball.distances().values())
    else:
        ball = trim(ball, radius)
    ball.gluings = b.gluings  # type: ignore[attr-defined]
    return ball


def trim(ball: GraphBall, radius: int) -> GraphBall:
    """Restrict to vertices at distance at most ``radius`` from the root."""
    dist = ball.distances()
    keep = sorted(v for v in dist if dist[v] <= radius)
    new_id = {v: k for k, v in enumerate(keep)}
    out = GraphBall(ball.pair, ball.tv, radius, geometry=ball.geometry, length=ball.length)
    out.vertices = [ball.vertices[v] for v in keep]
    for (a, x), (b, y) in ball.links.items():
        if a in new_id and b in new_id:
            out.links[(new_id[a], x)] = (new_id[b], y)
    for color, chain in ball.faces:
        if all(v in new_id for v, _ in chain):
            out.faces.append((color, tuple((new_id[v], x) for v, x in chain)))
    return out


def glue(scheme: LabelingScheme, ball: GraphBall, v: int, coords: bool = False) -> GraphBall:
    """Complete vertex ``v``: add its missing edges and close its finite faces.

    The ball is modified in place and returned.
    """
    if ball.is_complete(v):
        raise BuildError(f"vertex {v} already has degree {ball.degree}")
    b = _Builder(scheme, ball.tv, ball.geometry, ball.length, coords, 10**7)
    b.ball = ball
    b.coords = coords and all(vx.frame is not None for vx in ball.vertices)
    if b.coords:
        b.angles = _dart_angles(ball.pair, ball.tv, ball.geometry, ball.length)
    b.complete_vertex(v)
    b.collect_faces()
    return ball


# ---------------------------------------------------------------------------
# Reading schemes back and structural checks
# ---------------------------------------------------------------------------


def recover_scheme(ball: GraphBall) -> LabelingScheme:
    """Read the root star and one edge neighborhood per color from a ball."""
    if ball.radius < 2 and not ball.closed:
        raise BuildError("need a ball of radius at least 2")
    root = ball.root
    if not ball.is_complete(root):
        raise BuildError("root is not complete")
    pair = ball.star(root, 0)
    nbs = []
    for c in pair.edge_colors():
        x = ball.ccw(root)[pair.xi.index(c)]
        w, y = ball.links[(root, x)]
        first = ball.star(root, x)
        second = ball.star(w, y)
        nbs.append(EdgeNeighborhood(c, first, second))
    return LabelingScheme(pair, tuple(nbs))


def interior_vertices(ball: GraphBall) -> list[int]:
    return [v for v in range(len(ball.vertices)) if ball.is_complete(v)]


def check_rotation_systems(ball: GraphBall) -> list[int]:
    """Complete vertices whose star is not isomorphic to the pair (should be empty)."""
    from .scheme_core import canonical_pair

    ref = canonical_pair(ball.pair)
    bad = []
    for v in interior_vertices(ball):
        if canonical_pair(ball.star(v, 0)) != ref:
            bad.append(v)
    return bad


def edge_lengths(ball: GraphBall) -> list[float]:
    from .geometry import distance

    pts = ball.coordinates()
    return [distance(pts[a], pts[b], ball.geometry) for (a, _), (b, _) in ball.edges()]


def face_words(ball: GraphBall) -> list[tuple[int, tuple[int, ...]]]:
    """Border words (edge colors crossed) of the closed faces."""
    out = []
    for color, chain in ball.faces:
        out.append((color, tuple(ball.pair.xi[x] for _, x in chain)))
    return out


def connectivity_class(scheme: LabelingScheme) -> str:
    return connectivity_of(scheme.pair)


def sphere_sizes(scheme: LabelingScheme, tv, radius: int, max_vertices: int = 200_000) -> list[int]:
    ball = build_ball(scheme, tv, radius, coords=False, max_vertices=max_vertices)
    dist = ball.distances()
    out = [0] * (radius + 1)
    for v, r in dist.items():
        if r <= radius:
            out[r] += 1
    return out


def growth_class(scheme: LabelingScheme, tv, radius: int = 8, max_vertices: int = 200_000) -> str:
    """``linear``, ``quadratic`` or ``exponential``.

    3-connected graphs follow from the geometry. Separable graphs are
    classified from sphere sizes, which is a heuristic.
    """
    tv_al, g, _ = prepare(scheme, tv)
    if g is Geometry.SPHERICAL or g is None:
        raise BuildError("finite graph")
    if scheme.pair.infinite_count == 0:
        return "quadratic" if g is Geometry.EUCLIDEAN else "exponential"
    sizes = []
    for r in range(1, radius + 1):
        try:
            sizes = sphere_sizes(scheme, tv_al, r, max_vertices)
        except BuildError:
            break
    s = [x for x in sizes[1:] if x]
    if len(s) < 3:
        return "exponential"
    ratios = [b / a for a, b in zip(s, s[1:])]
    tail = ratios[len(ratios) // 2 :]
    if min(tail) > 1.15:
        return "exponential"
    return "linear" if max(s[len(s) // 2 :]) <= 2 * max(s[: len(s) // 2 + 1]) else "quadratic"


def orbit_word(scheme: LabelingScheme, position: int) -> tuple[int, ...]:
    """Border word of the finite face at local position ``position``."""
    aut = build_automaton(scheme.pair, scheme.data().values())
    cls = flag_classes(scheme.pair)
    return face_orbit(aut, cls[flag_index((position, 1))]).word

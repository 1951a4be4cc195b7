"""Border automaton of a labeling scheme: configurations, next/inv, orbits.

A state is a configuration, i.e. a class of flags ``(i, b)`` under the
automorphisms of the pair. The state ``(i, b)`` sits on edge ``i`` facing
direction ``b``; the face being followed lies on side ``b`` of that edge.
``next`` moves to the neighbouring edge in direction ``b`` around the same
vertex, ``inv`` crosses that edge to the vertex at its other end.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .scheme_core import (
    INF,
    Flag,
    LabelingScheme,
    NeighborhoodData,
    SchemeError,
    VectorPair,
    flag_classes,
    flag_index,
    index_flag,
    validate_scheme,
)

LETTERS = "nmpqrstuvw"


class AutomatonError(SchemeError):
    """Raised when an automaton cannot be built or queried."""


@dataclass(frozen=True)
class Step:
    """One transition of ``inv . next``: the edge crossed and the state reached."""

    edge: int  # position of the crossed edge at the current vertex
    color: int
    target: int


@dataclass
class BorderAutomaton:
    pair: VectorPair
    data: dict[int, NeighborhoodData]
    states: tuple[int, ...]
    next: dict[int, frozenset[int]]
    inv: dict[int, frozenset[int]]

    def flag(self, state: int) -> Flag:
        return index_flag(state)

    def face_of(self, state: int) -> int:
        return self.pair.face_of(index_flag(state))

    def label(self, state: int) -> str:
        i, b = index_flag(state)
        return f"{i + 1}{'+' if b > 0 else '-'}"

    def steps(self, state: int) -> list[Step]:
        """All ``inv . next`` transitions out of ``state``, sorted."""
        out = set()
        for n in self.next[state]:
            i, _ = index_flag(n)
            for t in self.inv[n]:
                out.add(Step(i, self.pair.xi[i], t))
        return sorted(out, key=lambda s: (s.target, s.edge))

    @property
    def deterministic(self) -> bool:
        return all(len(v) == 1 for v in self.next.values())

    def dump(self) -> str:
        """One line per state: id, representative, direction, next-set, inv-set."""
        lines = []
        for s in self.states:
            i, b = index_flag(s)
            nx = ",".join(self.label(t) for t in sorted(self.next[s]))
            iv = ",".join(self.label(t) for t in sorted(self.inv[s]))
            lines.append(f"{s}\t{i + 1}\t{'+' if b > 0 else '-'}\t{{{nx}}}\t{{{iv}}}")
        return "\n".join(lines)


def _side_crossing(pair: VectorPair, data: Iterable[NeighborhoodData]) -> dict[int, set[int]]:
    """Relation on flag classes given by crossing an edge.

    The flag ``(i, b)`` (side ``b`` of edge ``i``) crosses to
    ``(j, -b * sign)`` for the neighborhood gluing ``i`` to ``j``.
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


def build_automaton(pair: VectorPair, data: Iterable[NeighborhoodData]) -> BorderAutomaton:
    """Border automaton for a pair and its gluing data."""
    data = {nd.color: nd for nd in data}
    d = pair.degree
    cls = flag_classes(pair)
    states = tuple(sorted(set(cls)))
    side = _side_crossing(pair, data.values())
    missing = [c for c in pair.edge_colors() if c not in data]
    if missing:
        raise AutomatonError(f"no gluing data for edge colors {missing}")

    blocks = pair.blocks()
    block_of = {p: k for k, blk in enumerate(blocks) for p in blk}
    nxt: dict[int, set[int]] = {s: set() for s in states}
    inv: dict[int, set[int]] = {s: set() for s in states}
    for f in range(2 * d):
        i, b = index_flag(f)
        s = cls[f]
        # inv is applied after next, when the face just followed lies on
        # side -b of edge i; its image across the edge is the new state
        inv[s].update(side.get(cls[flag_index((i, -b))], ()))
        if pair.face_of((i, b)) != INF or len(blocks) == 1:
            nxt[s].add(cls[flag_index(((i + b) % d, b))])
        else:
            for k, blk in enumerate(blocks):
                if k == block_of[i]:
                    continue
                nxt[s].add(cls[flag_index((blk[0], 1))])
                nxt[s].add(cls[flag_index((blk[-1], -1))])
    return BorderAutomaton(
        pair,
        data,
        states,
        {s: frozenset(v) for s, v in nxt.items()},
        {s: frozenset(v) for s, v in inv.items()},
    )


def configurations(scheme: LabelingScheme) -> tuple[int, ...]:
    """Configuration ids (smallest flag index of each class)."""
    rep = validate_scheme(scheme)
    if not rep.ok:
        raise AutomatonError("; ".join(rep.violations))
    return tuple(sorted(set(flag_classes(scheme.pair))))


def scheme_automaton(scheme: LabelingScheme) -> BorderAutomaton:
    rep = validate_scheme(scheme)
    if not rep.ok:
        raise AutomatonError("; ".join(rep.violations))
    return build_automaton(scheme.pair, scheme.data().values())


def next_relation(aut: BorderAutomaton, state: int) -> frozenset[int]:
    return aut.next[state]


def inv_relation(aut: BorderAutomaton, state: int) -> frozenset[int]:
    return aut.inv[state]


# ---------------------------------------------------------------------------
# Orbits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OmegaWord:
    """Bi-infinite border ``left^w middle right^w``.

    An empty ``left`` means the word has a start; an empty ``middle`` with
    ``left == right`` is a periodic bi-infinite word.
    """

    left: tuple[int, ...]
    middle: tuple[int, ...]
    right: tuple[int, ...]

    @property
    def periodic(self) -> bool:
        return not self.middle and _same_cycle(self.left, self.right)

    def render(self, names: dict[int, str] | None = None) -> str:
        def w(seq):
            return " ".join(names[c] if names else f"a{c}" for c in seq)

        parts = []
        if self.left:
            parts.append(f"({w(self.left)})^w")
        if self.middle:
            parts.append(w(self.middle))
        if self.right:
            parts.append(f"({w(self.right)})^w")
        return " ".join(parts)


def _same_cycle(u: Sequence[int], v: Sequence[int]) -> bool:
    if len(u) != len(v):
        return False
    return any(tuple(u[r:]) + tuple(u[:r]) == tuple(v) for r in range(len(u))) or not u


@dataclass(frozen=True)
class Orbit:
    """A face border traced by ``inv . next``.

    ``size`` is the period for finite faces and ``math.inf`` for infinite
    ones. ``labels`` are the 1-based positions of the crossed edges.
    """

    face_color: int
    states: tuple[int, ...]
    size: float
    word: tuple[int, ...] = ()
    labels: tuple[int, ...] = ()
    descriptor: OmegaWord | None = None

    @property
    def cyclic(self) -> bool:
        return self.size != math.inf

    @property
    def aperiodic(self) -> bool:
        return self.descriptor is not None and not self.descriptor.periodic


def face_orbit(aut: BorderAutomaton, start: int) -> Orbit:
    """Follow a finite face from ``start`` until it closes."""
    if aut.face_of(start) == INF:
        raise AutomatonError("face orbits are only defined for finite faces")
    seen = []
    word = []
    labels = []
    s = start
    limit = 2 * len(aut.states) + 2
    while True:
        steps = aut.steps(s)
        if not steps:
            raise AutomatonError(f"state {aut.label(s)} has no successor")
        st = steps[0]
        seen.append(s)
        word.append(st.color)
        labels.append(st.edge + 1)
        s = st.target
        if s == start:
            break
        if len(seen) > limit:
            raise AutomatonError("face border does not close")
    return Orbit(aut.face_of(start), tuple(seen), len(seen), tuple(word), tuple(labels))


def finite_orbits(aut: BorderAutomaton) -> list[Orbit]:
    """Distinct finite-face orbits, ordered by smallest state."""
    out = []
    covered: set[int] = set()
    cls = flag_classes(aut.pair)
    # every finite face is followed from the + side of the edge before it
    starts = sorted({cls[flag_index((i, 1))] for i, c in enumerate(aut.pair.phi) if c != INF})
    for s in starts:
        if s in covered:
            continue
        orb = face_orbit(aut, s)
        covered.update(orb.states)
        out.append(orb)
    return out


def _infinite_graph(aut: BorderAutomaton) -> dict[int, list[Step]]:
    return {s: aut.steps(s) for s in aut.states if aut.face_of(s) == INF}


def _cycle_states(g: dict[int, list[Step]]) -> set[int]:
    on = set()
    for s in g:
        stack = [t.target for t in g[s]]
        seen = set()
        while stack:
            x = stack.pop()
            if x == s:
                on.add(s)
                break
            if x in seen or x not in g:
                continue
            seen.add(x)
            stack.extend(t.target for t in g[x])
    return on


def _shortest_cycle(g: dict[int, list[Step]], s: int) -> tuple[int, ...]:
    """Colors read along a shortest cycle through ``s``."""
    prev: dict[int, tuple[int, int]] = {}
    q = deque([s])
    found = None
    while q and found is None:
        x = q.popleft()
        for st in g[x]:
            if st.target == s:
                found = (x, st.color)
                break
            if st.target not in prev and st.target in g:
                prev[st.target] = (x, st.color)
                q.append(st.target)
    if found is None:
        raise AutomatonError("state is not on a cycle")
    x, c = found
    word = [c]
    while x != s:
        x, c = prev[x]
        word.append(c)
    return tuple(reversed(word))


def _path(g: dict[int, list[Step]], sources: Iterable[int], targets: set[int]):
    """Shortest path (states, colors) from a source to a target."""
    prev: dict[int, tuple[int | None, int | None]] = {}
    q = deque()
    for s in sorted(sources):
        prev[s] = (None, None)
        q.append(s)
    while q:
        x = q.popleft()
        if x in targets:
            states, colors = [x], []
            while prev[x][0] is not None:
                p, c = prev[x]
                colors.append(c)
                states.append(p)
                x = p
            return states[::-1], colors[::-1]
        for st in g[x]:
            if st.target in g and st.target not in prev:
                prev[st.target] = (x, st.color)
                q.append(st.target)
    return None


def _components(g: dict[int, list[Step]]) -> list[list[int]]:
    adj: dict[int, set[int]] = {s: set() for s in g}
    for s, steps in g.items():
        for st in steps:
            if st.target in g:
                adj[s].add(st.target)
                adj[st.target].add(s)
    comps, seen = [], set()
    for s in sorted(g):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def _descriptor(g: dict[int, list[Step]], comp: list[int], cyclic: set[int]) -> OmegaWord:
    transient = [s for s in comp if s not in cyclic]
    comp_cyc = sorted(s for s in comp if s in cyclic)
    if not transient:
        w = _shortest_cycle(g, comp_cyc[0])
        return OmegaWord(w, (), w)
    v = transient[0]
    # backwards: a cycle reaching v, if any
    rev: dict[int, list[Step]] = {s: [] for s in g}
    for s, steps in g.items():
        for st in steps:
            if st.target in g:
                rev[st.target].append(Step(st.edge, st.color, s))
    back = _path(rev, [v], set(comp_cyc))
    fwd = _path(g, [v], set(comp_cyc))
    middle: list[int] = []
    left: tuple[int, ...] = ()
    right: tuple[int, ...] = ()
    if back is not None:
        states, colors = back
        middle.extend(reversed(colors))
        left = _shortest_cycle(g, states[-1])
    if fwd is not None:
        states, colors = fwd
        middle.extend(colors)
        right = _shortest_cycle(g, states[-1])
    else:
        # no cycle ahead: follow the least successors until stuck
        x = v
        seen = {v}
        while g.get(x):
            st = g[x][0]
            middle.append(st.color)
            if st.target in seen or st.target not in g:
                break
            seen.add(st.target)
            x = st.target
    # fold letters that merely continue the surrounding cycles
    while middle and left and middle[0] == left[0]:
        left = left[1:] + left[:1]
        middle.pop(0)
    while middle and right and middle[-1] == right[-1]:
        right = right[-1:] + right[:-1]
        middle.pop()
    return OmegaWord(tuple(left), tuple(middle), tuple(right))


def infinite_orbits(aut: BorderAutomaton) -> list[Orbit]:
    """One orbit per connected component of states on infinite faces."""
    g = _infinite_graph(aut)
    if not g:
        return []
    cyclic = _cycle_states(g)
    out = []
    for comp in _components(g):
        desc = _descriptor(g, comp, cyclic)
        out.append(Orbit(INF, tuple(comp), math.inf, descriptor=desc))
    return out


def orbits(aut: BorderAutomaton) -> list[Orbit]:
    return finite_orbits(aut) + infinite_orbits(aut)


def is_aperiodic(aut: BorderAutomaton) -> bool:
    """True iff some infinite-face state lies on no cycle of ``inv . next``."""
    g = _infinite_graph(aut)
    return bool(g) and len(_cycle_states(g)) < len(g)


# ---------------------------------------------------------------------------
# Validity and type vectors
# ---------------------------------------------------------------------------


def _word_key(word: Sequence[int]) -> tuple[int, ...]:
    w = tuple(word)
    cands = [v[r:] + v[:r] for v in (w, w[::-1]) for r in range(len(w))]
    return min(cands)


@dataclass(frozen=True)
class FaceCheck:
    valid: bool
    witness: tuple[int, int] | None = None  # two positions of phi

    def __bool__(self):
        return self.valid


def check_face_equivalence(aut: BorderAutomaton) -> FaceCheck:
    """Same-coloured finite faces must share an orbit or have equal borders
    up to rotation and reversal."""
    pair = aut.pair
    cls = flag_classes(pair)
    orbit_of: dict[int, Orbit] = {}
    for orb in finite_orbits(aut):
        for s in orb.states:
            orbit_of[s] = orb
    seen: dict[int, int] = {}
    for i, c in enumerate(pair.phi):
        if c == INF:
            continue
        if c not in seen:
            seen[c] = i
            continue
        j = seen[c]
        a = orbit_of[cls[flag_index((j, 1))]]
        b = orbit_of[cls[flag_index((i, 1))]]
        if a is b or _word_key(a.word) == _word_key(b.word):
            continue
        return FaceCheck(False, (j, i))
    return FaceCheck(True)


@dataclass(frozen=True)
class PrimitiveTypeVector:
    """Entries ``(k, letter)`` for finite faces and ``None`` for infinite ones."""

    entries: tuple[tuple[int, str] | None, ...]

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        parts = []
        for e in self.entries:
            if e is None:
                parts.append("inf")
            else:
                k, a = e
                parts.append(a if k == 1 else f"{k}{a}")
        return "[" + ",".join(parts) + "]"

    def shape(self) -> tuple:
        """Canonical shape up to rotation, reflection and letter renaming."""
        d = len(self.entries)
        best = None
        for seq in (self.entries, self.entries[::-1]):
            for r in range(d):
                rot = seq[r:] + seq[:r]
                names: dict[str, str] = {}
                out = []
                for e in rot:
                    if e is None:
                        out.append((0, ""))
                    else:
                        names.setdefault(e[1], LETTERS[len(names)])
                        out.append((e[0], names[e[1]]))
                key = tuple(out)
                if best is None or key < best:
                    best = key
        return best


def primitive_type_vector(aut: BorderAutomaton) -> PrimitiveTypeVector:
    pair = aut.pair
    cls = flag_classes(pair)
    size: dict[int, int] = {}
    for orb in finite_orbits(aut):
        for s in orb.states:
            size[s] = int(orb.size)
    letters: dict[int, str] = {}
    entries = []
    for i, c in enumerate(pair.phi):
        if c == INF:
            entries.append(None)
            continue
        letters.setdefault(c, LETTERS[len(letters)])
        entries.append((size[cls[flag_index((i, 1))]], letters[c]))
    return PrimitiveTypeVector(tuple(entries))


def scheme_ptv(scheme: LabelingScheme) -> PrimitiveTypeVector:
    aut = scheme_automaton(scheme)
    fc = check_face_equivalence(aut)
    if not fc:
        raise AutomatonError(f"faces {fc.witness[0] + 1} and {fc.witness[1] + 1} are not equivalent")
    return primitive_type_vector(aut)


def parse_type_vector(text: str | Sequence) -> tuple[float, ...]:
    """Parse ``"3,4,inf"`` or a sequence into a tuple with ``math.inf``."""
    items = text.replace("[", "").replace("]", "").replace(";", ",").split(",") if isinstance(text, str) else text
    out = []
    for x in items:
        if isinstance(x, str):
            x = x.strip().lower()
            if x in ("inf", "oo", "∞", "infinity"):
                out.append(math.inf)
                continue
            try:
                x = int(x)
            except ValueError:
                raise SchemeError(f"bad type vector entry {x!r}") from None
        if x is None or x == math.inf:
            out.append(math.inf)
        else:
            out.append(int(x))
    return tuple(out)


@dataclass(frozen=True)
class Valuation:
    valid: bool
    values: dict[str, int] = field(default_factory=dict)
    position: int | None = None  # first conflicting position (0-based)

    def __bool__(self):
        return self.valid


def validate_type_vector(ptv: PrimitiveTypeVector, tv: Sequence[float]) -> Valuation:
    """Find the valuation of the letters turning ``ptv`` into ``tv``.

    Entries are compared position by position; finite face sizes must be at
    least 3.
    """
    tv = parse_type_vector(tv) if isinstance(tv, str) else tuple(tv)
    if len(tv) != len(ptv):
        raise SchemeError("type vector and primitive type vector differ in length")
    values: dict[str, int] = {}
    for i, (e, l) in enumerate(zip(ptv.entries, tv)):
        if e is None or l == math.inf or l is None:
            if not (e is None and (l == math.inf or l is None)):
                return Valuation(False, values, i)
            continue
        k, a = e
        if l < 3 or l % k:
            return Valuation(False, values, i)
        v = l // k
        if values.setdefault(a, v) != v:
            return Valuation(False, values, i)
    return Valuation(True, values)


def align_type_vector(ptv: PrimitiveTypeVector, tv: Sequence[float]):
    """Rotate/reflect ``tv`` onto ``ptv``.

    Returns:
        ``(aligned_tv, valuation)`` for the first alignment that validates, or
        None.
    """
    tv = parse_type_vector(tv) if isinstance(tv, str) else tuple(tv)
    d = len(tv)
    if d != len(ptv):
        return None
    for seq in (tv, tv[::-1]):
        for r in range(d):
            cand = seq[r:] + seq[:r]
            val = validate_type_vector(ptv, cand)
            if val:
                return cand, val
    return None



def default_type_vector(ptv: PrimitiveTypeVector, min_size: int = 7) -> tuple[float, ...]:
    """Smallest type vector of ``ptv`` whose finite faces all have ``min_size`` or more sides."""
    values: dict[str, int] = {}
    for e in ptv.entries:
        if e is not None:
            k, a = e
            values[a] = max(values.get(a, 1), -(-min_size // k))
    return tuple(math.inf if e is None else e[0] * values[e[1]] for e in ptv.entries)

"""Combinatorial x-monotone Lagrangian diagrams ("plats").

A plat is a left-to-right sequence of events acting on a vertical stack of
strands, numbered 1 (top) to ``s`` (bottom):

* ``birth(i)``  -- a new pair of strands appears at positions ``i, i+1``,
  joined by an arc on the left (the smoothing of a left cusp);
* ``cross(i)``  -- the strands at positions ``i`` and ``i+1`` cross;
* ``death(i)``  -- the strands at ``i`` and ``i+1`` are joined by an arc on
  the right.

Slices are the vertical strips between events: slice ``k`` lies between event
``k - 1`` and event ``k``, so slice 0 and slice ``len(events)`` are empty.
A *gap* ``r`` of a slice is the region between strand ``r`` and ``r + 1``;
gap 0 and gap ``s`` touch the unbounded face.

At a crossing the strand that moves from position ``i`` to ``i+1`` is called
the *down* strand.  The quadrants are named by compass direction around the
crossing point.  ``ew_positive`` records whether the east and west quadrants
carry the positive Reeb sign (true exactly when the down strand is the
overstrand); otherwise north and south are the positive quadrants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

BIRTH = "birth"
CROSS = "cross"
DEATH = "death"

QUADRANTS = ("N", "S", "E", "W")


@dataclass(frozen=True)
class PlatEvent:
    kind: str
    pos: int
    xid: int = -1


@dataclass(frozen=True)
class ActionData:
    """Coarse z-levels of a plat whose strands come in widely separated lifts.

    ``strand_levels[s]`` gives the level of every strand of slice ``s`` (top
    first) and ``chord_levels[xid]`` the level difference at each crossing.
    A disk's area is the lift difference summed over its corners, so these
    integers bound which partial disks can still close up.
    """

    strand_levels: tuple[tuple[int, ...], ...]
    chord_levels: tuple[int, ...]


@dataclass(frozen=True)
class Plat:
    """An immutable plat together with its crossing sign data.

    ``regular`` optionally lists slices whose gaps are classified by
    ``big_gaps``: a gap in ``big_gaps[slice]`` is a region that survives the
    collapse of parallel copies onto the original diagram (used to tell thick
    disks from thin ones in copy diagrams).
    """

    events: tuple[PlatEvent, ...]
    ew_positive: tuple[bool, ...]
    big_gaps: dict[int, frozenset[int]] = field(default_factory=dict, compare=False)
    action: ActionData | None = field(default=None, compare=False)

    def __post_init__(self):
        count = 0
        xids = []
        for k, ev in enumerate(self.events):
            if ev.kind == BIRTH:
                if not 1 <= ev.pos <= count + 1:
                    raise ValueError(f"event {k}: birth position {ev.pos} out of range")
                count += 2
            elif ev.kind in (CROSS, DEATH):
                if not 1 <= ev.pos <= count - 1:
                    raise ValueError(f"event {k}: {ev.kind} position {ev.pos} out of range")
                if ev.kind == DEATH:
                    count -= 2
                else:
                    xids.append(ev.xid)
            else:
                raise ValueError(f"event {k}: unknown kind {ev.kind!r}")
        if count != 0:
            raise ValueError("strand count does not return to 0")
        if sorted(xids) != list(range(len(self.ew_positive))):
            raise ValueError("crossing ids must enumerate 0..n-1 exactly once")

    @property
    def n_crossings(self) -> int:
        return len(self.ew_positive)

    def strand_counts(self) -> list[int]:
        """Number of strands in each slice (length ``len(events) + 1``)."""
        counts = [0]
        for ev in self.events:
            c = counts[-1]
            if ev.kind == BIRTH:
                c += 2
            elif ev.kind == DEATH:
                c -= 2
            counts.append(c)
        return counts

    def crossing_events(self) -> dict[int, int]:
        """Map crossing id -> event index."""
        return {ev.xid: k for k, ev in enumerate(self.events) if ev.kind == CROSS}

    def is_positive(self, xid: int, quadrant: str) -> bool:
        return (quadrant in ("E", "W")) == self.ew_positive[xid]


# -- walking along strands ---------------------------------------------------

@dataclass(frozen=True)
class Passage:
    """One visit of a strand to a crossing (``role`` is 'D' or 'U')."""

    xid: int
    role: str
    east: bool


@dataclass(frozen=True)
class Turn:
    """One pass around a birth/death arc; ``from_upper`` is the strand entered from."""

    event: int
    kind: str
    from_upper: bool


def step(plat: Plat, state: tuple[int, int, bool]):
    """Advance one event along the strand.

    ``state`` is ``(slice, position, east)``.  Returns ``(new_state, item)``
    where ``item`` is a :class:`Passage`, a :class:`Turn` or ``None``.
    """
    s, r, east = state
    if east:
        ev = plat.events[s]
        i = ev.pos
        if ev.kind == BIRTH:
            return (s + 1, r + 2 if r >= i else r, True), None
        if ev.kind == CROSS:
            if r == i:
                return (s + 1, i + 1, True), Passage(ev.xid, "D", True)
            if r == i + 1:
                return (s + 1, i, True), Passage(ev.xid, "U", True)
            return (s + 1, r, True), None
        if r == i:
            return (s, i + 1, False), Turn(s, DEATH, True)
        if r == i + 1:
            return (s, i, False), Turn(s, DEATH, False)
        return (s + 1, r - 2 if r > i + 1 else r, True), None
    e = s - 1
    ev = plat.events[e]
    i = ev.pos
    if ev.kind == BIRTH:
        if r == i:
            return (s, i + 1, True), Turn(e, BIRTH, True)
        if r == i + 1:
            return (s, i, True), Turn(e, BIRTH, False)
        return (s - 1, r - 2 if r > i + 1 else r, False), None
    if ev.kind == CROSS:
        if r == i + 1:
            return (s - 1, i, False), Passage(ev.xid, "D", False)
        if r == i:
            return (s - 1, i + 1, False), Passage(ev.xid, "U", False)
        return (s - 1, r, False), None
    return (s - 1, r + 2 if r >= i else r, False), None


def trace_component(plat: Plat, start: tuple[int, int, bool]):
    """Follow a closed strand from ``start`` until it returns.

    Yields ``(state, item)`` pairs, where ``state`` is the position *before*
    the step.
    """
    state = start
    while True:
        new, item = step(plat, state)
        yield state, item
        state = new
        if state == start:
            return


def components(plat: Plat) -> list[list[tuple[int, int]]]:
    """Partition strand segments ``(slice, position)`` into link components.

    Components are listed in order of their first segment (left to right,
    top to bottom).
    """
    counts = plat.strand_counts()
    seen: dict[tuple[int, int], int] = {}
    comps: list[list[tuple[int, int]]] = []
    for s, c in enumerate(counts):
        for r in range(1, c + 1):
            if (s, r) in seen:
                continue
            comp: list[tuple[int, int]] = []
            for (ss, rr, _e), _item in trace_component(plat, (s, r, True)):
                if (ss, rr) not in seen:
                    seen[(ss, rr)] = len(comps)
                    comp.append((ss, rr))
            comps.append(comp)
    return comps


# -- faces --------------------------------------------------------------------

class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


OUTER = -1


@dataclass(frozen=True)
class Faces:
    """Complementary regions of a plat.

    ``face_of[(slice, gap)]`` is the face index of a gap segment; the
    unbounded face has index ``OUTER``.  ``corners[f]`` lists the crossing
    quadrants ``(xid, quadrant)`` on the boundary of face ``f``.
    """

    face_of: dict[tuple[int, int], int]
    corners: dict[int, tuple[tuple[int, str], ...]]

    @property
    def bounded(self) -> list[int]:
        return sorted(self.corners)

    def quadrant_face(self, plat: Plat, xid: int, quadrant: str) -> int:
        k = plat.crossing_events()[xid]
        i = plat.events[k].pos
        if quadrant == "N":
            return self.face_of[(k, i - 1)]
        if quadrant == "S":
            return self.face_of[(k, i + 1)]
        if quadrant == "W":
            return self.face_of[(k, i)]
        return self.face_of[(k + 1, i)]


def faces(plat: Plat) -> Faces:
    counts = plat.strand_counts()
    uf = _UnionFind()
    outer = (-1, -1)
    for s, c in enumerate(counts):
        uf.union((s, 0), outer)
        uf.union((s, c), outer)
    for k, ev in enumerate(plat.events):
        c = counts[k]
        i = ev.pos
        if ev.kind == CROSS:
            for g in range(0, c + 1):
                if g != i:
                    uf.union((k, g), (k + 1, g))
        elif ev.kind == BIRTH:
            for g in range(0, c + 1):
                if g < i - 1:
                    uf.union((k, g), (k + 1, g))
                elif g == i - 1:
                    uf.union((k, g), (k + 1, g))
                    uf.union((k, g), (k + 1, g + 2))
                else:
                    uf.union((k, g), (k + 1, g + 2))
        else:
            for g in range(0, c + 1):
                if g < i - 1:
                    uf.union((k, g), (k + 1, g))
                elif g == i - 1:
                    uf.union((k, g), (k + 1, g))
                elif g == i + 1:
                    uf.union((k, g), (k + 1, g - 2))
                elif g > i + 1:
                    uf.union((k, g), (k + 1, g - 2))
    root_outer = uf.find(outer)
    labels: dict = {}
    face_of: dict[tuple[int, int], int] = {}
    for s, c in enumerate(counts):
        for g in range(0, c + 1):
            root = uf.find((s, g))
            if root == root_outer:
                face_of[(s, g)] = OUTER
            else:
                face_of[(s, g)] = labels.setdefault(root, len(labels))
    corners: dict[int, list[tuple[int, str]]] = {f: [] for f in labels.values()}
    for k, ev in enumerate(plat.events):
        if ev.kind != CROSS:
            continue
        i = ev.pos
        for q, key in (("N", (k, i - 1)), ("W", (k, i)), ("E", (k + 1, i)), ("S", (k, i + 1))):
            f = face_of[key]
            if f != OUTER:
                corners[f].append((ev.xid, q))
    return Faces(face_of, {f: tuple(v) for f, v in corners.items()})

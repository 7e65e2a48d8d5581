"""Front diagrams of Legendrian knots and their Lagrangian resolutions.

A front is written as a word of events read left to right::

    L1 L1 X2 X2 X2 R1 R1      # max-tb right-handed trefoil

``L<i>`` opens a left cusp whose two new strands occupy positions ``i`` and
``i+1`` (counted from the top), ``X<i>`` crosses the strands at ``i`` and
``i+1`` and ``R<i>`` closes them with a right cusp.

Resolution turns a front into a plat: left cusps become smooth arcs, each
front crossing becomes a crossing whose overstrand is the strand of lesser
slope (the one moving down), and each right cusp becomes a small loop, i.e.
a crossing followed by a right arc.  Crossing heights increase from left to
right, so the crossing list order *is* the height order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property

from .plat import BIRTH, CROSS, DEATH, Plat, PlatEvent, Passage, Turn, components, faces, trace_component

_TOKEN = re.compile(r"^([LXR])(\d+)$")


class FrontError(ValueError):
    """Invalid front: bad token, strand-count violation or several components."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"event {index}: {message}")
        self.index = index


@dataclass(frozen=True)
class FrontDiagram:
    events: tuple[tuple[str, int], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        count = 0
        for k, (kind, i) in enumerate(self.events):
            if kind == "L":
                if not 1 <= i <= count + 1:
                    raise FrontError(f"L{i} needs 1 <= i <= {count + 1}", k)
                count += 2
            elif kind in "XR":
                if not 1 <= i <= count - 1:
                    raise FrontError(f"{kind}{i} needs 1 <= i <= {count - 1}", k)
                if kind == "R":
                    count -= 2
            else:
                raise FrontError(f"unknown event kind {kind!r}", k)
            if count == 0 and k != len(self.events) - 1:
                raise FrontError("strand count returns to 0 before the end", k)
        if count != 0:
            raise FrontError(f"strand count ends at {count}, not 0", len(self.events) - 1)
        if not self.events:
            raise FrontError("empty front")
        n = len(components(self.plat))
        if n != 1:
            raise FrontError(f"front has {n} components; expected a knot")

    @cached_property
    def plat(self) -> Plat:
        """The resolved Lagrangian diagram as a plat."""
        events = []
        xid = 0
        for kind, i in self.events:
            if kind == "L":
                events.append(PlatEvent(BIRTH, i))
            elif kind == "X":
                events.append(PlatEvent(CROSS, i, xid))
                xid += 1
            else:
                events.append(PlatEvent(CROSS, i, xid))
                events.append(PlatEvent(DEATH, i))
                xid += 1
        # resolution puts the lesser-slope (down-moving) strand on top
        return Plat(tuple(events), (True,) * xid)

    @property
    def n_crossings(self) -> int:
        return sum(1 for k, _ in self.events if k == "X")

    @property
    def n_right_cusps(self) -> int:
        return sum(1 for k, _ in self.events if k == "R")

    def to_text(self) -> str:
        return " ".join(f"{k}{i}" for k, i in self.events)


def parse_front(text: str, name: str | None = None) -> FrontDiagram:
    """Parse a whitespace-separated front word; ``#`` starts a comment."""
    tokens = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    events = []
    for k, tok in enumerate(tokens):
        m = _TOKEN.match(tok)
        if not m:
            raise FrontError(f"bad token {tok!r}", k)
        events.append((m.group(1), int(m.group(2))))
    return FrontDiagram(tuple(events), name)


def load_front(path) -> FrontDiagram:
    from pathlib import Path

    p = Path(path)
    return parse_front(p.read_text(encoding="utf-8"), name=p.stem)


# -- traversal ---------------------------------------------------------------

@dataclass(frozen=True)
class KnotTraversal:
    """Crossing passages of the oriented knot in the order they are visited.

    ``passages[j] = (xid, role)`` with role 'over' or 'under'; slot ``j`` is
    the stretch of knot between passage ``j - 1`` and passage ``j``.
    ``arcs[j]`` is the front arc (cusp-free strand) of passage ``j`` and
    ``east[j]`` its direction.  ``cusps`` lists ``(slot, event, kind,
    downward)`` for every cusp in traversal order.
    """

    passages: tuple[tuple[int, str], ...]
    arcs: tuple[int, ...]
    east: tuple[bool, ...]
    cusps: tuple[tuple[int, int, str, bool], ...]
    n_arcs: int


def _traverse(front: FrontDiagram) -> KnotTraversal:
    plat = front.plat
    first = plat.events[0]
    start = (1, first.pos, True)
    passages, arcs, east, cusps = [], [], [], []
    arc = 0
    for (s, r, e), item in trace_component(plat, start):
        if isinstance(item, Passage):
            role = "over" if (item.role == "D") == plat.ew_positive[item.xid] else "under"
            passages.append((item.xid, role))
            arcs.append(arc)
            east.append(item.east)
        elif isinstance(item, Turn):
            # a right cusp is a loop crossing followed by a death arc, and the
            # loop swaps the two strands, so front-upper sits at i+1 there
            downward = item.from_upper if item.kind == BIRTH else not item.from_upper
            cusps.append((len(passages), item.event, "L" if item.kind == BIRTH else "R", downward))
            arc += 1
    # the last arc wraps around to the first one
    n_arcs = arc
    arcs = [a % n_arcs for a in arcs]
    return KnotTraversal(tuple(passages), tuple(arcs), tuple(east), tuple(cusps), n_arcs)


# -- classical invariants and Maslov potential ---------------------------------

@dataclass(frozen=True)
class ClassicalInvariants:
    tb: int
    rot: int


@dataclass(frozen=True)
class MaslovPotential:
    """Potential per front arc, residues mod ``modulus`` (0 means integers)."""

    potential: tuple[int, ...]
    modulus: int

    def shifted(self, c: int) -> "MaslovPotential":
        return MaslovPotential(tuple(self._reduce(p + c) for p in self.potential), self.modulus)

    def _reduce(self, v: int) -> int:
        return v % self.modulus if self.modulus else v


def _loop_xids(front: FrontDiagram) -> set[int]:
    out, xid = set(), 0
    for kind, _ in front.events:
        if kind in "XR":
            if kind == "R":
                out.add(xid)
            xid += 1
    return out


def classical_invariants(front: FrontDiagram) -> ClassicalInvariants:
    trav = _traverse(front)
    loops = _loop_xids(front)
    direction: dict[int, list[bool]] = {}
    for (xid, _role), e in zip(trav.passages, trav.east):
        if xid not in loops:
            direction.setdefault(xid, []).append(e)
    writhe = sum(1 if d[0] == d[1] else -1 for d in direction.values())
    down = sum(1 for *_, downward in trav.cusps if downward)
    up = len(trav.cusps) - down
    return ClassicalInvariants(tb=writhe - front.n_right_cusps, rot=(down - up) // 2)


def maslov_potential(front: FrontDiagram) -> MaslovPotential:
    """A Maslov potential on front arcs, normalized to minimum 0 when rot = 0."""
    trav = _traverse(front)
    values = [0]
    for _slot, _event, _kind, downward in trav.cusps[:-1]:
        values.append(values[-1] + (-1 if downward else 1))
    # closing the loop: the total change is -2 rot
    modulus = abs(2 * classical_invariants(front).rot)
    if modulus:
        values = [v % modulus for v in values]
    else:
        lo = min(values)
        values = [v - lo for v in values]
    return MaslovPotential(tuple(values), modulus)


# -- resolution ----------------------------------------------------------------

@dataclass(frozen=True)
class ResolvedCrossing:
    id: str
    index: int
    source: str  # 'crossing' or 'cusp'
    grading: int


@dataclass(frozen=True)
class ResolvedDiagram:
    front: FrontDiagram
    plat: Plat
    crossings: tuple[ResolvedCrossing, ...]
    traversal: KnotTraversal
    invariants: ClassicalInvariants
    modulus: int

    @property
    def tb(self) -> int:
        return self.invariants.tb

    @property
    def rot(self) -> int:
        return self.invariants.rot

    @property
    def names(self) -> list[str]:
        return [c.id for c in self.crossings]

    def height(self, xid: int) -> int:
        return xid + 1

    @cached_property
    def faces(self):
        return faces(self.plat)

    def to_json(self) -> dict:
        return {
            "crossings": [{"id": c.id, "grading": c.grading, "source": c.source} for c in self.crossings],
            "tb": self.tb,
            "rot": self.rot,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def resolve(front: FrontDiagram, potential: MaslovPotential | None = None) -> ResolvedDiagram:
    mu = potential or maslov_potential(front)
    trav = _traverse(front)
    loops = _loop_xids(front)
    arc_of: dict[tuple[int, str], int] = {}
    for (xid, role), a in zip(trav.passages, trav.arcs):
        arc_of[(xid, role)] = a
    crossings = []
    for xid in range(front.plat.n_crossings):
        if xid in loops:
            grading, source = 1, "cusp"
        else:
            grading = mu.potential[arc_of[(xid, "over")]] - mu.potential[arc_of[(xid, "under")]]
            if mu.modulus:
                grading %= mu.modulus
            source = "crossing"
        crossings.append(ResolvedCrossing(f"q{xid + 1}", xid, source, grading))
    return ResolvedDiagram(front, front.plat, tuple(crossings), trav, classical_invariants(front), mu.modulus)

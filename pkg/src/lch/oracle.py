"""Brute-force disk enumeration, used to cross-check the sweep.

A disk is recovered from its boundary: a closed path along the strands that
keeps the disk on its left, going straight through crossings or turning
left (a convex corner).  The path is accepted when the winding numbers it
induces on the faces are nonnegative, every crossing is covered in a way an
immersion allows, and the combinatorial Gauss-Bonnet count matches a disk.
Only suitable for small diagrams.
"""

from __future__ import annotations

import random
from collections import Counter

from .diagram import FrontDiagram, FrontError
from .disks import Disk, canonical_rotation
from .plat import CROSS, Plat, faces, step

# (moving east, from position offset 0 or 1) -> (straight, left turn, corner)
# offsets are relative to the crossing position i; states are (slice, pos, east)


def _crossing_moves(k: int, i: int, r: int, east: bool):
    """Successor states at the crossing of event ``k`` (position ``i``)."""
    if east:
        if r == i:
            return (k + 1, i + 1, True), (k + 1, i, True), "N"
        return (k + 1, i, True), (k, i, False), "W"
    if r == i:
        return (k, i + 1, False), (k + 1, i + 1, True), "E"
    return (k, i, False), (k, i + 1, False), "S"


def _next_event(plat: Plat, state):
    s, _r, east = state
    k = s if east else s - 1
    return k, plat.events[k]


def _segment(state):
    """The strand segment ``(slice, pos)`` a state is travelling on."""
    return state[0], state[1]


def _pass_cover(role_down: bool, east: bool) -> tuple[str, str]:
    if role_down:
        return ("N", "E") if east else ("S", "W")
    return ("N", "W") if east else ("S", "E")


class _Checker:
    def __init__(self, plat: Plat):
        self.plat = plat
        self.counts = plat.strand_counts()
        self.faces = faces(plat)
        self.cross_k = plat.crossing_events()
        k_of_face = Counter()
        for f, cs in self.faces.corners.items():
            k_of_face[f] = len(cs)
        self.k_of_face = k_of_face

    def accept(self, segs: list, corners: list, passes: list) -> bool:
        net = Counter()
        for (s, r, east) in segs:
            net[(s, r)] += 1 if east else -1
        mult: dict[int, int] = {}
        for s, c in enumerate(self.counts):
            m = 0
            for g in range(c + 1):
                if g > 0:
                    m -= net.get((s, g), 0)
                if m < 0:
                    return False
                f = self.faces.face_of[(s, g)]
                if f == -1:
                    if m != 0:
                        return False
                    continue
                if mult.setdefault(f, m) != m:
                    return False
        # local shape at every crossing
        corner_at = Counter(corners)
        pass_at = Counter()
        for xid, down, east in passes:
            for q in _pass_cover(down, east):
                pass_at[(xid, q)] += 1
        for xid, k in self.cross_k.items():
            res = set()
            for q in ("N", "E", "S", "W"):
                f = self.faces.quadrant_face(self.plat, xid, q)
                m = 0 if f == -1 else mult[f]
                res.add(m - corner_at[(xid, q)] - pass_at[(xid, q)])
            if len(res) != 1 or min(res) < 0:
                return False
        euler = sum(m * (4 - self.k_of_face[f]) for f, m in mult.items())
        return euler == 4 - len(corners)


def brute_force_disks(plat: Plat, budget: int = 1, max_edge_use: int = 2, ordered: bool = False) -> list[Disk]:
    """All disks with ``budget`` positive corners, by exhaustive path search.

    With ``ordered`` (one positive corner only), negative corners are
    restricted to crossings left of the positive one, as the area of a disk
    forces in a resolved front; this cuts the search down a lot.
    """
    if ordered and budget != 1:
        raise ValueError("ordered search needs budget 1")
    checker = _Checker(plat)
    found: set = set()
    for xid, k in sorted(plat.crossing_events().items()):
        i = plat.events[k].pos
        # every way of leaving a corner at this crossing: arrive then turn left
        for arrive in ((k, i, True), (k, i + 1, True), (k + 1, i, False), (k + 1, i + 1, False)):
            _straight, turn, q = _crossing_moves(k, i, arrive[1], arrive[2])
            if not plat.is_positive(xid, q):
                continue
            _search(plat, checker, arrive, turn, (xid, q), budget, max_edge_use, found, xid if ordered else None)
    out = []
    for corners in sorted(found):
        signs = tuple(plat.is_positive(x, q) for x, q in corners)
        out.append(Disk(corners, signs))
    return out


def _search(plat, checker, start, first, corner0, budget, max_edge_use, found, below=None):
    segs = [start]
    corners = [corner0]
    passes: list = []
    use = Counter({start: 1})

    def rec(state, npos):
        if state == start:
            if npos == budget:
                c = tuple(corners)
                signs = tuple(plat.is_positive(x, q) for x, q in c)
                if checker.accept(segs, corners, passes):
                    found.add(canonical_rotation(c, signs)[0])
            return
        if use[state] >= max_edge_use:
            return
        use[state] += 1
        segs.append(state)
        k, ev = _next_event(plat, state)
        if ev.kind == CROSS and state[1] in (ev.pos, ev.pos + 1):
            straight, turn, q = _crossing_moves(k, ev.pos, state[1], state[2])
            down = (state[1] == ev.pos) == state[2]
            passes.append((ev.xid, down, state[2]))
            rec(straight, npos)
            passes.pop()
            pos = plat.is_positive(ev.xid, q)
            if npos + pos <= budget and (below is None or pos or ev.xid < below):
                corners.append((ev.xid, q))
                rec(turn, npos + pos)
                corners.pop()
        else:
            nxt, _item = step(plat, state)
            rec(nxt, npos)
        segs.pop()
        use[state] -= 1

    rec(first, 1)


def random_front(rng: random.Random, max_crossings: int = 6, max_cusps: int = 2, max_strands: int = 4) -> FrontDiagram:
    """A random knot front with at most ``max_crossings`` crossings.

    Events are drawn left to right among those that keep the strand count
    feasible; words giving links are rejected and redrawn.
    """
    while True:
        cusps = rng.randint(1, max_cusps)
        xs = rng.randint(0, max_crossings)
        events = [("L", 1)]
        count, births, deaths = 2, cusps - 1, cusps
        while births or deaths or xs:
            moves = []
            if births and count + 2 <= max_strands:
                moves.append("L")
            if xs:
                moves.append("X")
            if deaths and (count > 2 or (not births and not xs and deaths == 1)):
                moves.append("R")
            if not moves:
                break
            kind = rng.choice(moves)
            if kind == "L":
                events.append(("L", rng.randint(1, count + 1)))
                count, births = count + 2, births - 1
            elif kind == "X":
                events.append(("X", rng.randint(1, count - 1)))
                xs -= 1
            else:
                events.append(("R", rng.randint(1, count - 1)))
                count, deaths = count - 2, deaths - 1
        try:
            return FrontDiagram(tuple(events))
        except FrontError:
            continue

"""Enumeration of immersed polygons in a plat by a left-to-right sweep.

An immersed disk meets every vertical line in a finite set of arcs, each
mapping onto a vertical segment between two strands.  The sweep carries the
multiset of these segments ("sheets") across the events of the plat.  At an
event every sheet either passes through, follows one of its boundary strands,
turns a convex corner, starts, ends, splits around a left arc or merges with
another sheet around a right arc.  The boundary of the part of the disk left
of the sweep line is kept as one cycle per connected piece, so that merging
two sheets of the same piece (which would create a hole) can be refused and
the final boundary word can be read off in counterclockwise order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping
from itertools import permutations

from .plat import BIRTH, CROSS, DEATH, Plat

Corner = tuple[int, str]

DEFAULT_MAX_DISKS = 10**6


class DiskLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Disk:
    """An immersed polygon, up to reparametrization.

    ``corners`` lists ``(xid, quadrant)`` counterclockwise along the boundary,
    starting at the distinguished positive corner.
    """

    corners: tuple[Corner, ...]
    signs: tuple[bool, ...]
    thick: bool = True

    @property
    def positive(self) -> tuple[Corner, ...]:
        return tuple(c for c, s in zip(self.corners, self.signs) if s)

    @property
    def negative(self) -> tuple[Corner, ...]:
        return tuple(c for c, s in zip(self.corners, self.signs) if not s)

    @property
    def word(self) -> tuple[int, ...]:
        """Crossing ids of the negative corners following the first positive one."""
        return tuple(x for (x, _q), s in zip(self.corners[1:], self.signs[1:]) if not s)


def canonical_rotation(corners: tuple[Corner, ...], signs: tuple[bool, ...]):
    """Rotate a cyclic corner list to start at its lexicographically least positive corner."""
    best = None
    for k, s in enumerate(signs):
        if s:
            rot = corners[k:] + corners[:k]
            if best is None or rot < best[0]:
                best = (rot, signs[k:] + signs[:k])
    if best is None:
        return corners, signs
    return best


class _State:
    __slots__ = ("ivs", "nxt", "prv", "path", "npos", "next_sid", "closed", "thick", "act")

    def __init__(self):
        self.ivs: list[tuple[int, int, int]] = []
        self.nxt: dict[int, int] = {}
        self.prv: dict[int, int] = {}
        self.path: dict[int, tuple] = {}
        self.npos = 0
        self.next_sid = 0
        self.closed = None
        self.thick = False
        self.act = 0

    def copy(self) -> "_State":
        s = _State()
        s.ivs = list(self.ivs)
        s.nxt = dict(self.nxt)
        s.prv = dict(self.prv)
        s.path = dict(self.path)
        s.npos = self.npos
        s.next_sid = self.next_sid
        s.closed = self.closed
        s.thick = self.thick
        s.act = self.act
        return s

    # boundary bookkeeping ---------------------------------------------------

    def new_sheet(self, path=()) -> int:
        sid = self.next_sid
        self.next_sid += 1
        self.nxt[sid] = sid
        self.prv[sid] = sid
        self.path[sid] = tuple(path)
        return sid

    def corner_bottom(self, sid, corner):
        a = self.prv[sid]
        self.path[a] = self.path[a] + (corner,)

    def corner_top(self, sid, corner):
        self.path[sid] = (corner,) + self.path[sid]

    def end(self, sid, corner=None) -> bool:
        """Remove a sheet whose top and bottom boundaries meet.  False if refused."""
        extra = (corner,) if corner is not None else ()
        if self.nxt[sid] == sid:
            if self.closed is not None:
                return False
            self.closed = extra + self.path[sid]
        else:
            a, n = self.prv[sid], self.nxt[sid]
            self.path[a] = self.path[a] + extra + self.path[sid]
            self.nxt[a] = n
            self.prv[n] = a
        del self.nxt[sid], self.prv[sid], self.path[sid]
        return True

    def split(self, sid) -> int:
        """Split a sheet around a left arc; returns the new (lower) sheet id."""
        low = self.next_sid
        self.next_sid += 1
        a = self.prv[sid]
        self.path[low] = ()
        self.nxt[low] = sid
        self.prv[low] = a
        self.nxt[a] = low
        self.prv[sid] = low
        return low

    def cycle(self, sid) -> list[int]:
        out = [sid]
        x = self.nxt[sid]
        while x != sid:
            out.append(x)
            x = self.nxt[x]
        return out

    def merge(self, top, low) -> bool:
        """Merge sheet ``top`` (above a right arc) with ``low`` (below it)."""
        c1 = self.cycle(top)
        if low in c1:
            return False
        c2 = self.cycle(low)
        last = c1[-1]
        self.path[last] = self.path[last] + self.path[low]
        order = c1 + c2[1:]
        for a, b in zip(order, order[1:] + order[:1]):
            self.nxt[a] = b
            self.prv[b] = a
        del self.nxt[low], self.prv[low], self.path[low]
        return True


def _apply_cross(st: _State, ivs, ev, plat: Plat, budget: int, allowed, cover: int = 1) -> list[_State]:
    i, xid = ev.pos, ev.xid
    states = [st]

    lvl = plat.action.chord_levels[xid] if plat.action is not None else 0

    def corner(s: _State, q: str) -> bool:
        if plat.is_positive(xid, q):
            if allowed is not None and xid not in allowed:
                return False
            s.npos += 1
            s.act += lvl
            return s.npos <= budget
        s.act -= lvl
        return True

    for t, b, sid in ivs:
        nxt_states = []
        for s in states:
            if b < i or t > i + 1 or (t <= i - 1 and b >= i + 2):
                s.ivs.append((t, b, sid))
                nxt_states.append(s)
            elif b == i:
                s2 = s.copy()
                s2.ivs.append((t, i + 1, sid))
                nxt_states.append(s2)
                if corner(s, "N"):
                    s.corner_bottom(sid, (xid, "N"))
                    s.ivs.append((t, i, sid))
                    nxt_states.append(s)
            elif t == i + 1:
                s2 = s.copy()
                s2.ivs.append((i, b, sid))
                nxt_states.append(s2)
                if corner(s, "S"):
                    s.corner_top(sid, (xid, "S"))
                    s.ivs.append((i + 1, b, sid))
                    nxt_states.append(s)
            elif b == i + 1 and t <= i - 1:
                s.ivs.append((t, i, sid))
                nxt_states.append(s)
            elif t == i and b >= i + 2:
                s.ivs.append((i + 1, b, sid))
                nxt_states.append(s)
            else:  # (i, i+1): the sheet ends at a west corner
                if corner(s, "W") and s.end(sid, (xid, "W")):
                    nxt_states.append(s)
        states = nxt_states
    out = []
    for s in states:
        out.append(s)
        for _ in range(cover):
            if s.closed is not None:
                break
            s = s.copy()
            if not corner(s, "E"):
                break
            sid = s.new_sheet(((xid, "E"),))
            s.ivs.append((i, i + 1, sid))
            out.append(s)
    return out


def _apply_birth(st: _State, ivs, ev, cover: int = 1) -> list[_State]:
    i = ev.pos
    states = [st]
    for t, b, sid in ivs:
        nxt_states = []
        for s in states:
            if b <= i - 1:
                s.ivs.append((t, b, sid))
                nxt_states.append(s)
            elif t >= i:
                s.ivs.append((t + 2, b + 2, sid))
                nxt_states.append(s)
            else:
                s2 = s.copy()
                s2.ivs.append((t, b + 2, sid))
                nxt_states.append(s2)
                low = s.split(sid)
                s.ivs.append((t, i, sid))
                s.ivs.append((i + 1, b + 2, low))
                nxt_states.append(s)
        states = nxt_states
    out = []
    for s in states:
        out.append(s)
        for _ in range(cover):
            if s.closed is not None:
                break
            s = s.copy()
            sid = s.new_sheet()
            s.ivs.append((i, i + 1, sid))
            out.append(s)
    return out


def _apply_death(st: _State, ivs, ev) -> list[_State]:
    i = ev.pos
    keep, above, below, inside = [], [], [], []
    for t, b, sid in ivs:
        if b <= i - 1:
            keep.append((t, b, sid))
        elif t >= i + 2:
            keep.append((t - 2, b - 2, sid))
        elif t <= i - 1 and b >= i + 2:
            keep.append((t, b - 2, sid))
        elif t == i and b == i + 1:
            inside.append(sid)
        elif b == i and t <= i - 1:
            above.append((t, sid))
        elif t == i + 1 and b >= i + 2:
            below.append((b, sid))
        else:
            return []
    if len(above) != len(below):
        return []
    st.ivs = keep
    for sid in inside:
        if not st.end(sid):
            return []
    if not above:
        return [st]
    out = []
    for perm in permutations(range(len(below))):
        s = st.copy()
        ok = True
        for (t, top), k in zip(above, perm):
            b, low = below[k]
            if not s.merge(top, low):
                ok = False
                break
            s.ivs.append((t, b - 2, top))
        if ok:
            out.append(s)
    return out


def _signature(s: _State) -> tuple:
    """Everything about a partial disk that its possible completions depend on.

    Sheets on the same interval are interchangeable, so the boundary order is
    recorded as the sorted multiset of its cycles, each written as spans from
    its least rotation; sheets are then relabeled by position in that order.
    """
    ivs = sorted(s.ivs)
    spans = tuple((t, b) for t, b, _ in ivs)
    nxt = s.nxt
    if len(set(spans)) == len(spans) or all(nxt[iv[2]] == iv[2] for iv in ivs):
        label = {iv[2]: k for k, iv in enumerate(ivs)}
        return spans, tuple(label[nxt[iv[2]]] for iv in ivs), s.npos, s.act, s.closed is not None
    span_of = {sid: (t, b) for t, b, sid in ivs}
    cycles, seen = [], set()
    for _t, _b, sid in ivs:
        if sid in seen:
            continue
        cyc = [sid]
        seen.add(sid)
        n = s.nxt[sid]
        while n != sid:
            cyc.append(n)
            seen.add(n)
            n = s.nxt[n]
        if len(cyc) > 1:
            words = [tuple(span_of[x] for x in cyc[r:] + cyc[:r]) for r in range(len(cyc))]
            r = min(range(len(cyc)), key=words.__getitem__)
            cyc = cyc[r:] + cyc[:r]
        cycles.append((tuple(span_of[x] for x in cyc), cyc))
    cycles.sort(key=lambda c: c[0])
    slot = {}
    for k, sp in enumerate(spans):
        slot.setdefault(sp, []).append(k)
    label = {}
    for _w, cyc in cycles:
        for x in cyc:
            label[x] = slot[span_of[x]].pop(0)
    order = sorted(label, key=label.__getitem__)
    best = tuple(label[s.nxt[x]] for x in order)
    return spans, best, s.npos, s.act, s.closed is not None


def _from_signature(sig: tuple) -> _State:
    spans, cyc, npos, act, closed = sig
    s = _State()
    s.ivs = [(t, b, k) for k, (t, b) in enumerate(spans)]
    for k, n in enumerate(cyc or ()):
        s.nxt[k] = n
        s.prv[n] = k
        s.path[k] = ()
    s.next_sid = len(spans)
    s.npos, s.act = npos, act
    s.closed = () if closed else None
    return s


@dataclass(frozen=True)
class Shadow:
    """How a copy plat collapses onto the plat of the knot it copies.

    Strands ``(r-1)*ribbon+1 .. r*ribbon`` of a regular copy slice collapse
    to knot strand ``r``; ``slices`` maps regular copy slices to knot slices
    and ``configs[knot_slice]`` lists the sheet spans of knot disks there.
    A partial copy disk whose non-degenerate collapsed sheets match no knot
    disk cannot be completed, since a thick disk collapses onto an immersed
    disk of the knot.
    """

    ribbon: int
    slices: Mapping[int, int]
    configs: Mapping[int, frozenset]

    def admits(self, copy_slice: int, ivs) -> bool:
        ks = self.slices.get(copy_slice)
        if ks is None:
            return True
        n = self.ribbon
        spans = []
        for t, b, _ in ivs:
            rt, rb = (t - 1) // n + 1, (b - 1) // n + 1
            if rt != rb:
                spans.append((rt, rb))
        return not spans or tuple(sorted(spans)) in self.configs.get(ks, ())


class _Sweep:
    def __init__(self, plat: Plat, budget: int, allowed, shadow: Shadow | None = None, cover: int = 2):
        self.plat = plat
        self.cover = cover
        self.shadow = shadow
        self.budget = budget
        self.allowed = allowed
        self.action = plat.action
        self.top = 0
        if self.action is not None:
            pool = range(plat.n_crossings) if allowed is None else allowed
            self.top = max((self.action.chord_levels[x] for x in pool), default=0)

    def step(self, st: _State, k: int) -> list[_State]:
        ev = self.plat.events[k]
        base = st.copy()
        base.ivs = []
        if ev.kind == CROSS:
            res = _apply_cross(base, st.ivs, ev, self.plat, self.budget, self.allowed, self.cover)
        elif ev.kind == BIRTH:
            res = _apply_birth(base, st.ivs, ev, self.cover)
        else:
            res = _apply_death(base, st.ivs, ev)
        out = []
        for s in res:
            if s.closed is not None and s.ivs:
                continue
            if s.ivs:
                s.ivs.sort()
                if self.action is not None:
                    # both the swept part and the rest must have positive area
                    lev = self.action.strand_levels[k + 1]
                    spread = sum(lev[t - 1] - lev[b - 1] for t, b, _ in s.ivs)
                    if s.act + spread < 0 or spread > (self.budget - s.npos) * self.top:
                        continue
                if self.shadow is not None and not self.shadow.admits(k + 1, s.ivs):
                    continue
            out.append(s)
        return out

    def alive(self) -> list[set]:
        """Signatures, slice by slice, from which a complete disk is reachable."""
        n = len(self.plat.events)
        layers = [{_signature(_State())}]
        edges: list[dict] = []
        for k in range(n):
            succ = {}
            nxt = set()
            for sig in layers[k]:
                out = {_signature(s) for s in self.step(_from_signature(sig), k)}
                succ[sig] = out
                nxt |= out
            edges.append(succ)
            layers.append(nxt)
        good = [set() for _ in range(n + 1)]
        good[n] = {sig for sig in layers[n] if sig[4] and not sig[0] and sig[2] == self.budget}
        for k in range(n - 1, -1, -1):
            good[k] = {sig for sig, out in edges[k].items() if out & good[k + 1]}
        return good


def enumerate_disks(
    plat: Plat,
    budget: int = 1,
    positive_at=None,
    max_disks: int = DEFAULT_MAX_DISKS,
    shadow: Shadow | None = None,
    record: dict | None = None,
    cover: int = 2,
) -> list[Disk]:
    """All immersed disks with exactly ``budget`` positive corners.

    ``positive_at`` optionally restricts which crossings may carry a positive
    corner.  Raises :class:`DiskLimitExceeded` past ``max_disks`` results.
    ``shadow`` prunes a copy plat against the disks of its knot; ``record``,
    when given, collects the sheet spans of the disks at every slice.
    ``cover`` caps how many coincident sheets may start at one left arc or
    one east corner, i.e. how often a disk may cover the same spot there.
    Disks are identified by their corner cycle.

    A first pass over path-free signatures finds the partial disks that can
    still be completed; the second pass builds boundaries only along those.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    allowed = None if positive_at is None else frozenset(positive_at)
    sweep = _Sweep(plat, budget, allowed, shadow, cover)
    good = sweep.alive()
    states = [_State()] if good[0] else []
    for k in range(len(plat.events)):
        new_states = []
        for st in states:
            for s in sweep.step(st, k):
                if _signature(s) not in good[k + 1]:
                    continue
                big = plat.big_gaps.get(k + 1)
                if big and s.ivs and not s.thick:
                    s.thick = any(g in big for t, b, _ in s.ivs for g in range(t, b))
                new_states.append(s)
                if record is not None and s.ivs:
                    record.setdefault(k + 1, set()).add(tuple((t, b) for t, b, _ in s.ivs))
        states = new_states
    found: dict[tuple, Disk] = {}
    for s in states:
        corners = s.closed
        signs = tuple(plat.is_positive(x, q) for x, q in corners)
        corners, signs = canonical_rotation(corners, signs)
        thick = s.thick if plat.big_gaps else True
        old = found.get(corners)
        if old is None or (thick and not old.thick):
            found[corners] = Disk(corners, signs, thick=thick)
        if len(found) > max_disks:
            raise DiskLimitExceeded(f"more than {max_disks} disks")
    return sorted(found.values(), key=lambda d: d.corners)

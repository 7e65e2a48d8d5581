"""The n-copy link of a resolved knot diagram and its expanded algebra.

The knot is stacked with ``n`` vertical translates (copy ``j`` lifted by
``j``) and the copies are pushed apart in the plane by a uniform vertical
shift, copy ``j`` moved by ``j`` small steps.  Every strand of the knot
becomes a ribbon of ``n`` parallel strands, so the Lagrangian diagram of the
link is again a plat:

* a knot crossing becomes an ``n x n`` lattice whose chords are ``q^k``
  (down-ribbon copy above up-ribbon copy) and ``p^k`` (the reverse);
* a left or right arc becomes nested arcs plus a half lattice, one crossing
  per pair of copies, whose chords sit at the critical points of the height
  function induced on the knot by the shift.

Shifting down makes the leftmost points of the knot maxima (``c`` chords)
and the rightmost points, on the right-cusp loops, minima (``d`` chords);
shifting up swaps the two.  Chords that differ by a vertical translation
are identified, which turns the link DGA into the expanded algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .dga import DGA, Poly, Word, mod2, poly_add
from .diagram import ResolvedDiagram
from .disks import DEFAULT_MAX_DISKS, Shadow, enumerate_disks
from .plat import BIRTH, CROSS, DEATH, ActionData, Plat, PlatEvent

SCHEMES = ("canonical", "alt")


@dataclass(frozen=True)
class PerturbationScheme:
    """Critical points of the height function the perturbation puts on the knot.

    ``maxima`` and ``minima`` list ``(slot, event)`` pairs: the traversal
    slot holding the critical point and the plat event (an arc) at which it
    sits.  ``downhill[j]`` is +1 when the function decreases in the
    direction of traversal along slot ``j``, -1 when it increases and 0 on
    slots that contain a critical point.
    """

    name: str
    maxima: tuple[tuple[int, int], ...]
    minima: tuple[tuple[int, int], ...]
    downhill: tuple[int, ...]

    @property
    def shift_down(self) -> bool:
        return self.name == "canonical"

    def alternates(self) -> bool:
        crit = sorted([(s, "max") for s, _ in self.maxima] + [(s, "min") for s, _ in self.minima])
        kinds = [k for _, k in crit]
        return len(kinds) >= 2 and all(a != b for a, b in zip(kinds, kinds[1:] + kinds[:1]))


def perturbation_data(diagram: ResolvedDiagram, scheme: str = "canonical") -> PerturbationScheme:
    """Critical points and downhill directions for a shift of the whole diagram.

    ``canonical`` shifts the copies down: maxima at the left arcs and one
    minimum on every right-cusp loop.  ``alt`` shifts them up.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    trav = diagram.traversal
    maxima, minima = [], []
    for slot, event, kind, _down in trav.cusps:
        left = kind == "L"
        if left == (scheme == "canonical"):
            maxima.append((slot % len(trav.passages) if trav.passages else 0, event))
        else:
            minima.append((slot % len(trav.passages) if trav.passages else 0, event))
    n_slots = max(len(trav.passages), 1)
    crit_slots = {s for s, _ in maxima + minima}
    downhill = []
    for j in range(n_slots):
        if j in crit_slots:
            downhill.append(0)
            continue
        # slot j is followed by passage j; its direction is that passage's
        east = trav.east[j % len(trav.east)] if trav.east else True
        # shifting down, the function decreases to the east
        downhill.append(1 if east == (scheme == "canonical") else -1)
    return PerturbationScheme(scheme, tuple(maxima), tuple(minima), tuple(downhill))


@dataclass(frozen=True)
class CopyCrossing:
    """A crossing of the copy diagram.

    ``index`` is the 1-based knot crossing (for ``q``/``p``) or critical
    point (for ``c``/``d``); ``upper``/``lower`` are the copies carrying the
    upper and lower ends of the chord.
    """

    kind: str
    index: int
    upper: int
    lower: int

    @property
    def level(self) -> int:
        return self.upper - self.lower

    @property
    def generator(self) -> str:
        return f"{self.kind}{self.index}^{self.level}"

    @property
    def label(self) -> str:
        return f"{self.generator}[{self.upper},{self.lower}]"


@dataclass(frozen=True)
class CopyDiagram:
    knot: ResolvedDiagram
    n: int
    scheme: PerturbationScheme
    plat: Plat
    crossings: tuple[CopyCrossing, ...]
    regular: dict[int, int] = field(default_factory=dict, compare=False)

    def representatives(self) -> dict[str, int]:
        """Copy xid of the crossing standing for each generator (lower copy 0)."""
        out = {}
        for xid, c in enumerate(self.crossings):
            if c.lower == 0:
                out.setdefault(c.generator, xid)
        return out


class _Builder:
    def __init__(self, n: int, shift_down: bool):
        self.n = n
        self.order = list(range(n)) if shift_down else list(range(n - 1, -1, -1))
        self.shift_down = shift_down
        self.events: list[PlatEvent] = []
        self.ew: list[bool] = []
        self.crossings: list[CopyCrossing] = []
        self.strands: list[tuple[str, int]] = []  # (ribbon tag, copy) per position
        self.big_gaps: dict[int, frozenset[int]] = {}
        self.levels: list[tuple[int, ...]] = [()]
        self.regular: dict[int, int] = {}

    def ribbon(self, r: int) -> int:
        """First copy-diagram position of knot strand ``r``."""
        return (r - 1) * self.n + 1

    def cross(self, t: int, make) -> None:
        top, bot = self.strands[t - 1], self.strands[t]
        crossing, down_over = make(top, bot)
        self.events.append(PlatEvent(CROSS, t, len(self.crossings)))
        self.crossings.append(crossing)
        self.ew.append(down_over)
        self.strands[t - 1], self.strands[t] = bot, top
        self.levels.append(self.copy_levels())

    def copy_levels(self) -> tuple[int, ...]:
        return tuple(c for _tag, c in self.strands)

    def half_lattice(self, start: int, kind: str, index: int) -> None:
        """Reverse the ribbon at ``start``; every pair of copies crosses once."""
        n = self.n

        def make(top, bot):
            a, b = top[1], bot[1]
            hi, lo = max(a, b), min(a, b)
            # the higher copy is the overstrand
            return CopyCrossing(kind, index, hi, lo), a > b

        for a in range(n - 1):
            for b in range(n - 1 - a):
                self.cross(start + b, make)

    def birth(self, i: int, crit: tuple[str, int]) -> None:
        p = self.ribbon(i)
        for j, c in enumerate(self.order):
            self.events.append(PlatEvent(BIRTH, p + j))
            self.strands[p + j - 1:p + j - 1] = [("new", c), ("new", c)]
            self.levels.append(self.copy_levels())
        self.half_lattice(p + self.n, *crit)

    def death(self, i: int, crit: tuple[str, int]) -> None:
        p = self.ribbon(i)
        self.half_lattice(p + self.n, *crit)
        for j in reversed(range(self.n)):
            self.events.append(PlatEvent(DEATH, p + j))
            del self.strands[p + j - 1:p + j + 1]
            self.levels.append(self.copy_levels())

    def lattice(self, i: int, index: int) -> None:
        n = self.n
        p = self.ribbon(i)
        for k in range(n):
            self.strands[p - 1 + k] = ("D", self.strands[p - 1 + k][1])
            self.strands[p - 1 + n + k] = ("U", self.strands[p - 1 + n + k][1])

        def make(top, bot):
            assert top[0] == "D" and bot[0] == "U"
            a, b = top[1], bot[1]
            if a >= b:
                return CopyCrossing("q", index, a, b), True
            return CopyCrossing("p", index, b, a), False

        for u in range(n):
            for t in reversed(range(p + u, p + u + n)):
                self.cross(t, make)

    def mark_regular(self) -> None:
        slice_index = len(self.events)
        self.regular[slice_index] = len(self.regular)
        s = len(self.strands)
        self.big_gaps[slice_index] = frozenset(g for g in range(0, s + 1, self.n))


def build_copy_diagram(diagram: ResolvedDiagram, n: int, scheme: str = "canonical") -> CopyDiagram:
    if n < 2:
        raise ValueError("need at least two copies")
    pert = perturbation_data(diagram, scheme)
    b = _Builder(n, pert.shift_down)
    top_kind, bottom_kind = ("c", "d") if pert.shift_down else ("d", "c")
    n_left = n_right = 0
    plat = diagram.plat
    events = plat.events
    k = 0
    b.mark_regular()
    while k < len(events):
        ev = events[k]
        if ev.kind == BIRTH:
            n_left += 1
            b.birth(ev.pos, (top_kind, n_left))
        elif ev.kind == CROSS:
            b.lattice(ev.pos, ev.xid + 1)
        else:
            n_right += 1
            b.death(ev.pos, (bottom_kind, n_right))
        b.mark_regular()
        k += 1
    action = ActionData(tuple(b.levels), tuple(c.level for c in b.crossings))
    cplat = Plat(tuple(b.events), tuple(b.ew), b.big_gaps, action)
    return CopyDiagram(diagram, n, pert, cplat, tuple(b.crossings), b.regular)


# -- the expanded algebra ---------------------------------------------------------

@dataclass(frozen=True)
class CopyDGA:
    """The n-fold expanded algebra.

    ``thick`` and ``thin`` split the boundary of each generator by the kind
    of disk it comes from; ``dga.boundary`` is their sum.  ``levels`` gives
    the level of every generator.
    """

    n: int
    copies: CopyDiagram
    dga: DGA
    thick: dict[str, Poly]
    thin: dict[str, Poly]
    levels: dict[str, int]
    kinds: dict[str, str]
    gamma_violations: tuple[tuple[str, Word], ...] = field(default=())

    @property
    def generators(self) -> tuple[str, ...]:
        return self.dga.generators

    def d(self, x: str) -> Poly:
        return self.dga.d(x)

    def of_kind(self, kind: str, level: int | None = None) -> list[str]:
        return [g for g in self.generators if self.kinds[g] == kind and (level is None or self.levels[g] == level)]

    @cached_property
    def knot_names(self) -> dict[str, str]:
        """Level-0 generator -> knot generator (``q6^0`` -> ``q6``)."""
        return {g: g.split("^")[0] for g in self.of_kind("q", 0)}


def knot_shadow(cd: CopyDiagram, max_disks: int = DEFAULT_MAX_DISKS) -> Shadow:
    """Sheet configurations of knot disks that thick copy disks may collapse onto.

    A copy disk with one positive corner collapses onto a knot disk with at
    most ``n`` positive corners: besides its own, one per negative ``p``
    corner, and those carry at least one level each.
    """
    configs: dict[int, set] = {}
    for budget in range(1, cd.n + 1):
        enumerate_disks(cd.knot.plat, budget=budget, max_disks=max_disks, record=configs)
    return Shadow(cd.n, dict(cd.regular), {k: frozenset(v) for k, v in configs.items()})


def _generator_order(knot: ResolvedDiagram, n: int, n_crit: int) -> list[tuple[str, str, int, int]]:
    gens = []
    m = len(knot.crossings)
    for k in range(n):
        for i in range(1, m + 1):
            gens.append((f"q{i}^{k}", "q", i, k))
        if k >= 1:
            for i in range(1, m + 1):
                gens.append((f"p{i}^{k}", "p", i, k))
            for j in range(1, n_crit + 1):
                gens.append((f"c{j}^{k}", "c", j, k))
            for j in range(1, n_crit + 1):
                gens.append((f"d{j}^{k}", "d", j, k))
    return gens


def expanded_algebra(
    diagram: ResolvedDiagram,
    n: int = 2,
    scheme: str = "canonical",
    max_disks: int = DEFAULT_MAX_DISKS,
) -> CopyDGA:
    """Build the copy diagram, count its disks and identify translates."""
    cd = build_copy_diagram(diagram, n, scheme)
    n_crit = diagram.front.n_right_cusps
    reps = cd.representatives()
    rep_of_xid = {x: g for g, x in reps.items()}
    disks = enumerate_disks(cd.plat, budget=1, positive_at=reps.values(), max_disks=max_disks,
                            shadow=knot_shadow(cd, max_disks))
    thick: dict[str, list[Word]] = {g: [] for g in reps}
    thin: dict[str, list[Word]] = {g: [] for g in reps}
    gamma_bad = []
    for disk in disks:
        (x, _q), = disk.positive
        g = rep_of_xid[x]
        letters = [cd.crossings[y] for y in disk.word]
        word = tuple(c.generator for c in letters)
        (thick if disk.thick else thin)[g].append(word)
        top = cd.crossings[x]
        if not _chains([(c.upper, c.lower) for c in letters], top.upper, top.lower):
            gamma_bad.append((g, word))
    gens = _generator_order(diagram, n, n_crit)
    names = tuple(g for g, *_ in gens)
    missing = [g for g in names if g not in reps]
    if missing:
        raise RuntimeError(f"copy diagram lacks generators {missing}")
    grade = {c.id: c.grading for c in diagram.crossings}
    gradings, levels, kinds, heights = {}, {}, {}, {}
    m = len(diagram.crossings)
    base = 16.0
    delta = 1e-3
    for g, kind, i, k in gens:
        levels[g], kinds[g] = k, kind
        if kind == "q":
            gradings[g] = grade[f"q{i}"]
            heights[g] = k + delta * base ** (i - m - 1)
        elif kind == "p":
            gradings[g] = -1 - grade[f"q{i}"]
            heights[g] = k - delta * base ** (i - m - 1)
        elif kind == "c":
            gradings[g] = 0
            heights[g] = k + delta * base ** (-m - 2)
        else:
            gradings[g] = -1
            heights[g] = k - delta * base ** (-m - 2)
    if diagram.modulus:
        gradings = {g: v % diagram.modulus for g, v in gradings.items()}
    thick_p = {g: mod2(ws) for g, ws in thick.items()}
    thin_p = {g: mod2(ws) for g, ws in thin.items()}
    boundary = {g: poly_add(thick_p[g], thin_p[g]) for g in names}
    dga = DGA(names, gradings, boundary, diagram.modulus, None, heights, "sum")
    return CopyDGA(n, cd, dga, thick_p, thin_p, levels, kinds, tuple(gamma_bad))


def _chains(pairs: list[tuple[int, int]], j: int, k: int) -> bool:
    if not pairs:
        return j == k
    if pairs[0][0] != j or pairs[-1][1] != k:
        return False
    return all(a[1] == b[0] for a, b in zip(pairs, pairs[1:]))

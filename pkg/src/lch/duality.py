"""Duality for linearized homology through the expanded algebra.

The linearized differential of the n-copy algebra splits by level into

* ``Q^0``: the ``q_i^0``, a copy of the knot's linearized complex;
* ``Q^m`` (m >= 1): the ``q_i^m`` together with the ``c_j^m`` and ``d_j^m``;
  it contains ``C^m`` (the ``c`` and ``d``, a Morse complex of the circle)
  as a subcomplex with quotient ``Qbar^m`` (the ``q_i^m`` alone);
* ``P^m``: the ``p_i^m``, a subcomplex dual to ``Q^0`` under
  ``<p_i, q_j> = delta_ij``;

and the component ``eta: Q^m -> P^m`` of the differential is a chain map
whose mapping cone is acyclic.  Length-two words give the cap product with
the fundamental class, which inverts ``eta`` on homology after one
translation ``tau`` between levels.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from . import gf2
from .copies import (
    SCHEMES,
    CopyDGA,
    CopyDiagram,
    PerturbationScheme,
    build_copy_diagram,
    expanded_algebra,
    perturbation_data,
)
from .dga import DGA
from .diagram import ResolvedDiagram
from .disks import DEFAULT_MAX_DISKS
from .linearize import (
    Augmentation,
    AugmentationError,
    Homology,
    LinearComplex,
    augmented_differential,
    find_augmentations,
    homology,
    is_augmentation,
    linear_part,
    linearize,
    subcomplex,
)

__all__ = [
    "CapProduct",
    "DualityError",
    "DualityReport",
    "FundamentalClass",
    "LengthTwoComponents",
    "PerturbationScheme",
    "SCHEMES",
    "SplitComplexes",
    "build_copies",
    "build_copy_diagram",
    "cap_product",
    "duality_check",
    "duality_summary",
    "eta_homology",
    "extend_augmentation",
    "fundamental_class",
    "induced_map",
    "length_two",
    "perturbation_data",
    "split_linearized",
]


class DualityError(RuntimeError):
    """A structural identity failed; ``witness`` names where."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def build_copies(
    diagram: ResolvedDiagram,
    n: int = 2,
    scheme: str = "canonical",
    max_disks: int = DEFAULT_MAX_DISKS,
) -> CopyDGA:
    """The n-copy expanded algebra, checked for d^2 = 0 and component chaining."""
    from .dga import check_dga

    cd = expanded_algebra(diagram, n, scheme, max_disks)
    if cd.gamma_violations:
        g, w = cd.gamma_violations[0]
        raise DualityError(f"word {' '.join(w)} of d{g} does not chain", (g, w))
    rep = check_dga(cd.dga)
    if rep.square_residues:
        g, w = rep.square_residues[0]
        raise DualityError(f"d^2 {g} contains {' '.join(w) or '1'}", (g, w))
    if rep.degree_violations:
        g, w = rep.degree_violations[0]
        raise DualityError(f"d{g} contains {' '.join(w)} of the wrong degree", (g, w))
    return cd


# -- names --------------------------------------------------------------------

def _split_name(g: str) -> tuple[str, int, int]:
    head, level = g.split("^")
    return head[0], int(head[1:]), int(level)


def _at_level(g: str, m: int) -> str:
    return f"{g.split('^')[0]}^{m}"


def _knot_name(g: str) -> str:
    return g.split("^")[0]


def _dual_name(p: str) -> str:
    """Knot generator paired with ``p_i^m``: ``q_i``."""
    return "q" + _knot_name(p)[1:]


def extend_augmentation(copy: CopyDGA, aug: Augmentation) -> Augmentation:
    """Extend an augmentation of the knot by zero off ``Q^0``."""
    ext = Augmentation(frozenset(f"{x}^0" for x in aug.augmented))
    bad = [g for g in ext.augmented if g not in copy.dga.gradings]
    if bad:
        raise AugmentationError(f"{bad[0]} is not a generator", bad[0])
    w = is_augmentation(copy.dga, ext)
    if w is not None:
        raise AugmentationError(f"extended augmentation fails on d{w}", w)
    return ext


def _check_extension(copy: CopyDGA, aug: Augmentation) -> None:
    off = sorted(g for g in aug.augmented if copy.levels.get(g, 0) != 0 or copy.kinds.get(g) != "q")
    if off:
        raise AugmentationError(f"{off[0]} lies off level zero", off[0])


# -- linear algebra helpers -----------------------------------------------------------

def _block(c: LinearComplex, rows, cols) -> np.ndarray:
    idx = c.index
    if not rows or not cols:
        return gf2.zeros(len(rows), len(cols))
    return c.matrix[np.ix_([idx[g] for g in rows], [idx[g] for g in cols])].copy()


def induced_map(f: np.ndarray, src: Homology, dst: Homology, k: int, shift: int = 0) -> np.ndarray:
    """Matrix of the map induced by chain map ``f`` from ``H_k(src)`` to ``H_{k+shift}(dst)``.

    Column ``r`` holds the coordinates of the image of the ``r``-th
    representative of ``src`` in the representatives of ``dst``.
    """
    reps = src.rep_vectors(k)
    cols = []
    for v in reps:
        w = gf2.matmul(f, v.reshape(-1, 1)).ravel()
        cols.append(dst.coordinates(w, k + shift))
    return np.array(cols, dtype=np.uint8).T.reshape(dst.dim(k + shift), len(reps))


def _independent_classes(vectors, h: Homology, k: int) -> bool:
    if not vectors:
        return True
    coords = np.array([h.coordinates(v, k) for v in vectors], dtype=np.uint8)
    return gf2.rank(coords) == len(vectors)


def _identity_on(a: np.ndarray) -> bool:
    return a.shape[0] == a.shape[1] and bool((a == np.eye(a.shape[0], dtype=np.uint8)).all())


# -- the split ------------------------------------------------------------------

@dataclass(frozen=True)
class SplitComplexes:
    """The level splitting of the linearized expanded algebra.

    ``complex`` is the linear part of the conjugated differential on all
    generators; everything else is read off from it by level and kind.
    """

    copy: CopyDGA
    augmentation: Augmentation
    conjugated: DGA
    complex: LinearComplex
    knot: LinearComplex = field(compare=False)

    @property
    def n(self) -> int:
        return self.copy.n

    def _gens(self, kinds: str, m: int) -> tuple[str, ...]:
        return tuple(g for g in self.copy.generators if self.copy.kinds[g] in kinds and self.copy.levels[g] == m)

    def q_ids(self, m: int) -> tuple[str, ...]:
        return self._gens("q", m) if m == 0 else self._gens("qcd", m)

    def qbar_ids(self, m: int) -> tuple[str, ...]:
        return self._gens("q", m)

    def c_ids(self, m: int) -> tuple[str, ...]:
        return self._gens("cd", m)

    def p_ids(self, m: int) -> tuple[str, ...]:
        return self._gens("p", m)

    def Q(self, m: int) -> LinearComplex:
        return subcomplex(self.complex, self.q_ids(m))

    def P(self, m: int) -> LinearComplex:
        return subcomplex(self.complex, self.p_ids(m))

    def Qbar(self, m: int) -> LinearComplex:
        return subcomplex(self.complex, self.qbar_ids(m))

    def C(self, m: int) -> LinearComplex:
        return subcomplex(self.complex, self.c_ids(m))

    def cone(self, m: int) -> LinearComplex:
        return subcomplex(self.complex, self.q_ids(m) + self.p_ids(m))

    def eta(self, m: int) -> np.ndarray:
        """``eta: Q^m -> P^m`` as a matrix (rows ``p_ids``, columns ``q_ids``)."""
        return _block(self.complex, self.p_ids(m), self.q_ids(m))

    def rho(self, m: int) -> np.ndarray:
        """``rho: Qbar^m -> C^m``."""
        return _block(self.complex, self.c_ids(m), self.qbar_ids(m))

    def tau(self, ids: tuple[str, ...]) -> tuple[str, ...]:
        """Translate generators up one level."""
        return tuple(_at_level(g, _split_name(g)[2] + 1) for g in ids)

    @cached_property
    def homologies(self) -> dict[tuple[str, int], Homology]:
        out = {}
        for m in range(self.n):
            out[("Q", m)] = homology(self.Q(m))
            if m >= 1:
                out[("P", m)] = homology(self.P(m))
                out[("Qbar", m)] = homology(self.Qbar(m))
                out[("C", m)] = homology(self.C(m))
        return out

    def H(self, name: str, m: int) -> Homology:
        return self.homologies[(name, m)]

    # -- verification ---------------------------------------------------------

    def problems(self) -> list[tuple[str, object]]:
        """Every failed structural identity, with a witness."""
        out: list[tuple[str, object]] = []
        c = self.complex
        lev, kinds = self.copy.levels, self.copy.kinds
        # level preservation of the linear differential
        for g in c.basis:
            m = lev[g]
            for h in c.d(g):
                if lev[h] != m:
                    out.append(("level", (g, h)))
                elif m == 0 and kinds[h] != "q":
                    out.append(("level", (g, h)))
                elif kinds[g] == "p" and kinds[h] != "p":
                    out.append(("P is not a subcomplex", (g, h)))
                elif kinds[g] in "cd" and kinds[h] in "q":
                    out.append(("C is not a subcomplex", (g, h)))
        # Q^0 is the knot's linearized complex
        q0 = self.Q(0)
        names = tuple(_knot_name(g) for g in q0.basis)
        if names != self.knot.basis or not (q0.matrix == self.knot.matrix).all():
            diff = np.argwhere(q0.matrix != self.knot.matrix) if names == self.knot.basis else []
            out.append(("Q0 differs from the knot complex", [names[j] for _i, j in diff][:1]))
        for m in range(1, self.n):
            # Qbar^m is a copy of Q^0
            qb = self.Qbar(m)
            if not (qb.matrix == q0.matrix).all():
                j = int(np.argwhere(qb.matrix != q0.matrix)[0][1])
                out.append((f"Qbar^{m} differs from Q^0", qb.basis[j]))
            # P^m is dual to Q^0
            pm = self.P(m)
            if not (pm.matrix == q0.matrix.T).all():
                j = int(np.argwhere(pm.matrix != q0.matrix.T)[0][1])
                out.append((f"P^{m} is not the transpose of Q^0", pm.basis[j]))
            # C^m: the circle, with each maximum flowing to its two minima
            cm = self.C(m)
            hc = self.H("C", m)
            if sorted(hc.dims.items()) != sorted({0: 1, -1: 1}.items()) and cm.modulus == 0:
                out.append((f"C^{m} does not have circle homology", dict(hc.dims)))
            for g in self._gens("c", m):
                if len(cm.d(g)) not in (0, 2) or any(kinds[h] != "d" for h in cm.d(g)):
                    out.append((f"d{g} is not a sum of two minima", cm.d(g)))
            # eta is a chain map and its cone is acyclic
            e = self.eta(m)
            lhs = gf2.matmul(pm.matrix, e)
            rhs = gf2.matmul(e, self.Q(m).matrix)
            if (lhs != rhs).any():
                j = int(np.argwhere(lhs != rhs)[0][1])
                out.append((f"eta^{m} is not a chain map", self.q_ids(m)[j]))
            hcone = homology(self.cone(m))
            if hcone.total():
                out.append((f"cone of eta^{m} is not acyclic", dict(hcone.dims)))
            # H(Q^m) is assembled from H(C^m) and the rho-closed part of H(Qbar^m)
            hq = self.H("Q", m)
            for k in sorted(set(hq.dims) | set(self.H("Qbar", m).dims) | set(hc.dims)):
                try:
                    basis = self.les_basis(k, m)
                except DualityError as e:
                    out.append((str(e), e.witness))
                    continue
                if len(basis) != hq.dim(k) or not _independent_classes(basis, hq, k):
                    out.append((f"H_{k}(Q^{m}) is not spanned as expected", len(basis)))
        for m in range(1, self.n - 1):
            # tau identifies level m with level m + 1
            for ids in (self.q_ids(m), self.p_ids(m)):
                a = _block(c, ids, ids)
                b = _block(c, self.tau(ids), self.tau(ids))
                if (a != b).any():
                    out.append((f"tau is not a chain map at level {m}", ids[int(np.argwhere(a != b)[0][1])]))
            if (self.eta(m) != self.eta(m + 1)).any():
                out.append((f"tau does not commute with eta at level {m}", None))
        return out

    def verify(self) -> "SplitComplexes":
        probs = self.problems()
        if probs:
            what, witness = probs[0]
            raise DualityError(f"{what}: {witness}", witness)
        return self

    # -- the long exact sequence of C^m -> Q^m -> Qbar^m ----------------------

    def lift(self, v: np.ndarray, m: int) -> np.ndarray | None:
        """Lift a cycle of ``Qbar^m`` to a cycle of ``Q^m``.

        The correction is a chain of ``C^m`` (a sum ``beta`` of maxima in
        degree zero) bounding ``rho(v)``; None when ``rho(v)`` is not a
        boundary.
        """
        r = gf2.matmul(self.rho(m), v.reshape(-1, 1)).ravel()
        cm = self.C(m)
        beta = gf2.solve(cm.matrix, r) if r.any() else np.zeros(len(cm.basis), dtype=np.uint8)
        if beta is None:
            return None
        return np.concatenate([v, beta]).astype(np.uint8)

    def les_basis(self, k: int, m: int = 1) -> list[np.ndarray]:
        """A basis of ``H_k(Q^m)`` from the long exact sequence.

        Classes coming from ``C^m`` followed by lifts of the classes of
        ``Qbar^m`` that ``rho`` kills.  Vectors are in ``q_ids(m)``
        coordinates.
        """
        qbar = self.qbar_ids(m)
        hc, hb = self.H("C", m), self.H("Qbar", m)
        # H_k(C) modulo the image of rho_* from H_{k+1}(Qbar)
        above = hb.rep_vectors(k + 1)
        img = [hc.coordinates(gf2.matmul(self.rho(m), v.reshape(-1, 1)).ravel(), k) for v in above]
        img = np.array(img, dtype=np.uint8).reshape(len(above), hc.dim(k))
        pivots = set(gf2.rref(img)[1]) if img.size else set()
        c_reps = hc.rep_vectors(k)
        out = [np.concatenate([np.zeros(len(qbar), dtype=np.uint8), v])
               for j, v in enumerate(c_reps) if j not in pivots]
        reps = hb.rep_vectors(k)
        if reps:
            r = gf2.matmul(self.rho(m), np.array(reps, dtype=np.uint8).T)
            # classes killed by rho_*: kernel of the induced map to H_{k-1}(C)
            img = np.array([hc.coordinates(col, k - 1) if hc.dim(k - 1) else np.zeros(0, dtype=np.uint8)
                            for col in r.T], dtype=np.uint8).reshape(len(reps), hc.dim(k - 1))
            for comb in gf2.nullspace(img.T) if img.size else np.eye(len(reps), dtype=np.uint8):
                v = gf2.matmul(np.array(reps, dtype=np.uint8).T, comb.reshape(-1, 1)).ravel()
                lifted = self.lift(v, m)
                if lifted is None:
                    raise DualityError(f"cannot lift a Qbar^{m} cycle in degree {k}", self.Qbar(m).support(v))
                out.append(lifted)
        return out


def split_linearized(copy: CopyDGA, aug: Augmentation, verify: bool = True) -> SplitComplexes:
    """Linearize the expanded algebra at an extended augmentation and split it."""
    _check_extension(copy, aug)
    w = is_augmentation(copy.dga, aug)
    if w is not None:
        raise AugmentationError(f"not an augmentation: d{w}", w)
    conj = augmented_differential(copy.dga, aug)
    full = linear_part(conj)
    knot_aug = Augmentation(frozenset(_knot_name(g) for g in aug.augmented))
    knot = linearize(_knot_dga(copy), knot_aug).complex
    split = SplitComplexes(copy, aug, conj, full, knot)
    return split.verify() if verify else split


def _knot_dga(copy: CopyDGA) -> DGA:
    from .dga import differential

    return differential(copy.copies.knot)


# -- eta on homology --------------------------------------------------------------

@dataclass(frozen=True)
class EtaHomology:
    """``eta_*: H_k(Q^m) -> H_{k-1}(P^m)`` for every degree ``k``."""

    level: int
    matrices: Mapping[int, np.ndarray]
    source: Homology
    target: Homology

    def image(self, cycle: tuple[str, ...]) -> np.ndarray:
        """Coordinates of ``eta_*[cycle]`` in the representatives of ``P^m``."""
        v = self.source.complex.vector(cycle)
        k = self.source.complex.degree_of(cycle[0])
        return induced_map_vector(self.matrices, self.source, k, v)


def induced_map_vector(matrices, source: Homology, k: int, v: np.ndarray) -> np.ndarray:
    return gf2.matmul(matrices[k], source.coordinates(v, k).reshape(-1, 1)).ravel()


def eta_homology(split: SplitComplexes, m: int = 1) -> EtaHomology:
    """The map induced by ``eta`` together with the acyclicity of its cone."""
    hcone = homology(split.cone(m))
    if hcone.total():
        raise DualityError(f"cone of eta^{m} has homology in degrees {sorted(hcone.dims)}", dict(hcone.dims))
    hq, hp = split.H("Q", m), split.H("P", m)
    mats = {}
    for k in sorted(set(hq.dims) | {d + 1 for d in hp.dims}):
        mats[k] = induced_map(split.eta(m), hq, hp, k, -1)
        if not (mats[k].shape[0] == mats[k].shape[1] and gf2.rank(mats[k]) == mats[k].shape[0]):
            raise DualityError(f"eta_* is not invertible in degree {k}", k)
    return EtaHomology(m, mats, hq, hp)


# -- the duality theorem ---------------------------------------------------------

@dataclass(frozen=True)
class DualityReport:
    """Graded dimensions along the chain ``H_k(A) = H_{-k-1}(P^1) = H_{-k}(Q^1)``.

    ``h`` maps each degree to ``dim H_k(A)``; ``h_p`` and ``h_q`` give, at
    the same index ``k``, ``dim H_{-k-1}(P^1)`` and ``dim H_{-k}(Q^1)``.
    """

    augmentation: tuple[str, ...]
    h: Mapping[int, int]
    h_p: Mapping[int, int]
    h_q: Mapping[int, int]
    holds: bool
    failures: tuple[str, ...] = ()

    def to_json(self) -> dict:
        keys = sorted(set(self.h) | set(self.h_p) | set(self.h_q))
        return {
            "augmentation": list(self.augmentation),
            "h": [[k, self.h.get(k, 0)] for k in keys],
            "h_p": [[k, self.h_p.get(k, 0)] for k in keys],
            "h_q": [[k, self.h_q.get(k, 0)] for k in keys],
            "holds": self.holds,
        }


def duality_summary(split: SplitComplexes) -> DualityReport:
    hk = homology(split.knot)
    hp, hq = split.H("P", 1), split.H("Q", 1)
    degrees = set(hk.dims) | {-k - 1 for k in hp.dims} | {-k for k in hq.dims} | {1, -1}
    h = {k: hk.dim(k) for k in sorted(degrees)}
    h_p = {k: hp.dim(-k - 1) for k in sorted(degrees)}
    h_q = {k: hq.dim(-k) for k in sorted(degrees)}
    fails = []
    for k in sorted(degrees):
        if h[k] != h_p[k]:
            fails.append(f"pairing: dim H_{k}(A) != dim H_{-k - 1}(P^1)")
        if h_p[k] != h_q[k]:
            fails.append(f"eta: dim H_{-k - 1}(P^1) != dim H_{-k}(Q^1)")
        if abs(k) > 1 and h[k] != h.get(-k, 0):
            fails.append(f"h_{k} != h_{-k}")
    if h[1] != h[-1] + 1:
        fails.append("h_1 != h_-1 + 1")
    aug = tuple(sorted(_knot_name(g) for g in split.augmentation.augmented))
    return DualityReport(aug, h, h_p, h_q, not fails, tuple(fails))


def duality_check(
    diagram: ResolvedDiagram,
    copy: CopyDGA | None = None,
    scheme: str = "canonical",
    max_disks: int = DEFAULT_MAX_DISKS,
) -> list[DualityReport]:
    """Check the duality theorem for every augmentation (rotation number 0)."""
    if diagram.modulus:
        raise ValueError("duality is only checked for rotation number 0")
    copy = copy or build_copies(diagram, 2, scheme, max_disks)
    out = []
    for aug in find_augmentations(_knot_dga(copy)):
        split = split_linearized(copy, extend_augmentation(copy, aug))
        eta_homology(split, 1)
        out.append(duality_summary(split))
    return out


# -- the fundamental class ------------------------------------------------------------

@dataclass(frozen=True)
class FundamentalClass:
    """The class ``lambda`` in ``H_1`` of the knot's linearized complex.

    ``representative`` is reduced against the boundaries, so it is the same
    whatever basis the solve went through.  ``covers_cusps`` records whether
    every right-cusp generator is a summand of every representative; this
    holds on the bundled fronts but not on every front.
    """

    representative: tuple[str, ...]
    vector: np.ndarray = field(compare=False)
    unique: bool = True
    cusps: tuple[str, ...] = ()
    covers_cusps: bool = True

    def ev(self, g: str) -> int:
        """``<p, lambda>`` for a level-one ``p`` generator (or a knot name)."""
        return int(_dual_name(g) in self.representative)


def _pair(p_vec: np.ndarray, p_ids, lam: np.ndarray, q_ids) -> int:
    pos = {g: k for k, g in enumerate(q_ids)}
    return int(sum(int(p_vec[i]) * int(lam[pos[_dual_name(g)]]) for i, g in enumerate(p_ids)) % 2)


def fundamental_class(split: SplitComplexes) -> FundamentalClass:
    """Solve ``<eta_*[d], lambda> = 1`` and ``<eta_*(x), lambda> = 0`` on ``H_-1(Qbar^1)``."""
    if split.complex.modulus:
        raise ValueError("the fundamental class is defined here for rotation number 0")
    knot = split.knot
    hk = homology(knot)
    reps = hk.rep_vectors(1)
    if not reps:
        raise DualityError("H_1 vanishes", None)
    q_ids, p_ids = split.q_ids(1), split.p_ids(1)
    eta = split.eta(1)
    rows, rhs = [], []
    ds = split._gens("d", 1)
    d_vec = split.Q(1).vector([ds[0]])
    hqb = split.H("Qbar", 1)
    cycles = [d_vec] + [np.concatenate([v, np.zeros(len(q_ids) - len(v), dtype=np.uint8)])
                        for v in hqb.rep_vectors(-1)]
    for j, x in enumerate(cycles):
        y = gf2.matmul(eta, x.reshape(-1, 1)).ravel()
        rows.append([_pair(y, p_ids, r, knot.basis) for r in reps])
        rhs.append(1 if j == 0 else 0)
    a = np.array(rows, dtype=np.uint8).reshape(len(rows), len(reps))
    sol = gf2.solve(a, np.array(rhs, dtype=np.uint8))
    if sol is None:
        raise DualityError("the pairing system has no solution", None)
    unique = gf2.rank(a) == len(reps)
    if not unique:
        raise DualityError("the pairing system is degenerate", None)
    lam = gf2.matmul(np.array(reps, dtype=np.uint8).T, sol.reshape(-1, 1)).ravel()
    b = hk.boundaries(1)
    if b.shape[0]:
        r, piv = gf2.rref(b)
        lam = gf2.reduce_mod(lam, r, piv)
    cusps = tuple(x.id for x in split.copy.copies.knot.crossings if x.source == "cusp")
    covers = all(lam[knot.index[g]] and not (b.shape[0] and b[:, knot.index[g]].any()) for g in cusps)
    return FundamentalClass(knot.support(lam), lam, unique, cusps, bool(covers))


# -- length-two components --------------------------------------------------------------

Tensor = frozenset  # frozenset[tuple[str, str]]


def _mod2_pairs(pairs) -> Tensor:
    c = Counter(pairs)
    return frozenset(p for p, k in c.items() if k % 2)


@dataclass(frozen=True)
class LengthTwoComponents:
    """Length-two parts of the conjugated differential of a 3-copy algebra.

    Each component maps a generator to a set of pairs ``(a, b)`` standing
    for ``a (x) b``.  ``Phi_QQ`` and ``Psi_QQ`` are kept for the chain
    identities (the ``Q (x) Q`` words feed ``eta`` through the second factor).
    """

    Phi_QP: Mapping[str, Tensor]
    Phi_PQ: Mapping[str, Tensor]
    Phi_PP: Mapping[str, Tensor]
    Psi_QP: Mapping[str, Tensor]
    Phi_QQ: Mapping[str, Tensor]
    Psi_QQ: Mapping[str, Tensor]
    Psi_PQ: Mapping[str, Tensor]


def _classify(split: SplitComplexes, g: str) -> str:
    kind = split.copy.kinds[g]
    return "P" if kind == "p" else "Q"


def length_two(split: SplitComplexes) -> LengthTwoComponents:
    """Extract the length-two components and check their chain identities."""
    if split.n != 3:
        raise ValueError("length-two components need the 3-copy algebra")
    lev = split.copy.levels
    comps: dict[str, dict[str, set]] = {k: {} for k in ("QP", "PQ", "PP", "QQ")}
    psi: dict[str, dict[str, set]] = {k: {} for k in ("QP", "QQ", "PQ")}
    for x in split.q_ids(2) + split.p_ids(2):
        src = _classify(split, x)
        for w in split.conjugated.d(x):
            if len(w) != 2:
                continue
            a, b = w
            if lev[a] + lev[b] != lev[x]:
                raise DualityError(f"d{x} contains {a}{b} off level", (x, w))
            if lev[a] != 1:
                continue
            key = _classify(split, a) + _classify(split, b)
            target = comps if src == "P" else psi
            if key in target:
                target[key].setdefault(x, set()).add((a, b))
    fz = lambda d, ids: {x: frozenset(d.get(x, ())) for x in ids}  # noqa: E731
    p2, q2 = split.p_ids(2), split.q_ids(2)
    lt = LengthTwoComponents(
        fz(comps["QP"], p2), fz(comps["PQ"], p2), fz(comps["PP"], p2), fz(psi["QP"], q2),
        fz(comps["QQ"], p2), fz(psi["QQ"], q2), fz(psi["PQ"], q2),
    )
    res = _phi_qp_residual(split, lt)
    if res:
        raise DualityError(f"Phi_QP chain identity fails at {res[0]}", res[0])
    return lt


def _d1(split: SplitComplexes, g: str) -> tuple[str, ...]:
    return split.complex.d(g)


def _phi_qp_residual(split: SplitComplexes, lt: LengthTwoComponents) -> list[tuple[str, tuple[str, str]]]:
    """Terms of ``Phi_QP d_P + (d_Q (x) 1 + 1 (x) d_P) Phi_QP + (1 (x) eta) Phi_QQ``.

    Only the ``Q^1 (x) P^1`` component is kept, so ``d`` of a ``Q`` factor
    is truncated to its ``Q`` part.
    """
    out = []
    kinds = split.copy.kinds
    for x in split.p_ids(2):
        terms = []
        for y in _d1(split, x):
            terms.extend(lt.Phi_QP.get(y, ()))
        for a, b in lt.Phi_QP[x]:
            terms.extend((a2, b) for a2 in _d1(split, a) if kinds[a2] != "p")
            terms.extend((a, b2) for b2 in _d1(split, b))
        for a, b in lt.Phi_QQ[x]:
            terms.extend((a, b2) for b2 in _d1(split, b) if kinds[b2] == "p")
        for t in sorted(_mod2_pairs(terms)):
            out.append((x, t))
    return out


# -- the cap product ---------------------------------------------------------------------

@dataclass(frozen=True)
class CapProduct:
    """``phi = (1 (x) ev) Phi_QP: P^2 -> Q^1`` and the homotopies around it.

    Matrices use the bases ``q_ids``/``p_ids`` of the split; ``phi_tau`` is
    ``phi`` precomposed with ``tau: P^1 -> P^2``.
    """

    phi: np.ndarray
    phi_tau: np.ndarray
    H: np.ndarray
    K: np.ndarray
    iota_P: np.ndarray
    iota_Q: np.ndarray
    inverse: Mapping[int, np.ndarray]
    verified: bool


def _contract(split: SplitComplexes, comp: Mapping[str, Tensor], rows, cols, weight) -> np.ndarray:
    """Matrix of ``x -> sum a * weight(b)`` over ``(a, b)`` in ``comp[tau(x)]``."""
    pos = {g: i for i, g in enumerate(rows)}
    m = gf2.zeros(len(rows), len(cols))
    for j, x in enumerate(cols):
        for a, b in comp.get(x, ()):
            if weight(b):
                m[pos[a], j] ^= 1
    return m


def cap_product(split: SplitComplexes, lt: LengthTwoComponents, lam: FundamentalClass) -> CapProduct:
    """Build ``phi``, ``H``, ``K`` and check them against ``eta``.

    Checks that ``phi`` has degree +1 and is a chain map, that
    ``phi_* tau_*`` and ``tau_* phi_*`` invert ``eta_*`` in every degree, and
    the chain-level identities ``eta phi tau + iota_P = H d_P + d_P H`` and
    ``phi tau eta + iota_Q = K d_Q + d_Q K``.
    """
    ev = lam.ev
    q1, p1, q2, p2 = split.q_ids(1), split.p_ids(1), split.q_ids(2), split.p_ids(2)
    eta1 = split.eta(1)
    ev_eta = {g: int(sum(ev(p) for p in split.complex.d(g) if split.copy.kinds[p] == "p") % 2) for g in q1}
    phi = _contract(split, lt.Phi_QP, q1, p2, ev)
    tau_p = {x: _at_level(x, 2) for x in p1}
    tau_q = {x: _at_level(x, 2) for x in q1}

    def via_tau(comp, tau, rows, cols, weight):
        shifted = {x: comp.get(tau[x], ()) for x in cols}
        return _contract(split, shifted, rows, cols, weight)

    phi_tau = via_tau(lt.Phi_QP, tau_p, q1, p1, ev)
    H = via_tau(lt.Phi_PP, tau_p, p1, p1, ev)
    iota_P = via_tau(lt.Phi_PQ, tau_p, p1, p1, lambda b: ev_eta[b])
    K = via_tau(lt.Psi_QP, tau_q, q1, q1, ev)
    iota_Q = via_tau(lt.Psi_QQ, tau_q, q1, q1, lambda b: ev_eta[b])

    failures = []
    # degree +1
    grade = split.complex.degree_of
    for j, x in enumerate(p2):
        for i in np.nonzero(phi[:, j])[0]:
            if grade(q1[i]) != split.complex.reduce(grade(x) + 1):
                failures.append(("phi degree", x))
    # chain map P^2 -> Q^1
    dq1 = split.Q(1).matrix
    dp2 = split.P(2).matrix
    dp1 = split.P(1).matrix
    if (gf2.matmul(dq1, phi) != gf2.matmul(phi, dp2)).any():
        failures.append(("phi is not a chain map", None))
    # homotopy identities
    lhs = gf2.matmul(eta1, phi_tau) ^ iota_P
    rhs = gf2.matmul(H, dp1) ^ gf2.matmul(dp1, H)
    if (lhs != rhs).any():
        failures.append(("eta phi tau + iota_P != H d + d H", p1[int(np.argwhere(lhs != rhs)[0][1])]))
    lhs = gf2.matmul(phi_tau, eta1) ^ iota_Q
    rhs = gf2.matmul(K, dq1) ^ gf2.matmul(dq1, K)
    if (lhs != rhs).any():
        failures.append(("phi tau eta + iota_Q != K d + d K", q1[int(np.argwhere(lhs != rhs)[0][1])]))
    # inverses on homology, at both levels
    inverse = {}
    for m, f in ((1, phi_tau), (2, _tau_phi(phi, q1, q2))):
        hq, hp = split.H("Q", m), split.H("P", m)
        for k in sorted(set(hq.dims)):
            e = induced_map(split.eta(m), hq, hp, k, -1)
            g = induced_map(f, hp, hq, k - 1, 1)
            if not (_identity_on(gf2.matmul(g, e)) and _identity_on(gf2.matmul(e, g))):
                failures.append((f"phi does not invert eta at level {m}", k))
            if m == 1:
                inverse[k - 1] = g
    if failures:
        what, witness = failures[0]
        raise DualityError(f"{what}: {witness}", witness)
    return CapProduct(phi, phi_tau, H, K, iota_P, iota_Q, inverse, True)


def _tau_phi(phi: np.ndarray, q1, q2) -> np.ndarray:
    """``tau phi: P^2 -> Q^2``; tau permutes nothing, so the matrix is the same."""
    assert tuple(_at_level(g, 2) for g in q1) == tuple(q2)
    return phi

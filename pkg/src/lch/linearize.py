"""Augmentations, linearization and linearized homology over GF(2)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from . import gf2
from .dga import DGA, Poly, Word, mod2

MAX_CANDIDATES = 2**25


class AugmentationError(ValueError):
    def __init__(self, message: str, witness: str | None = None):
        super().__init__(message)
        self.witness = witness


class SearchLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Augmentation:
    """The set of augmented generators (those sent to 1)."""

    augmented: frozenset[str]

    def __contains__(self, x: str) -> bool:
        return x in self.augmented

    def value(self, word: Word) -> int:
        return int(all(x in self.augmented for x in word))

    def ids(self, order: Sequence[str]) -> list[str]:
        return [g for g in order if g in self.augmented]


def _evaluate(poly: Poly, aug: frozenset[str]) -> int:
    return sum(all(x in aug for x in w) for w in poly) % 2


def is_augmentation(dga: DGA, aug: Augmentation) -> str | None:
    """None if ``aug`` is an augmentation, else a witness generator."""
    for x in sorted(aug.augmented):
        if dga.reduce(dga.gradings[x]) != 0:
            return x
    for g in dga.generators:
        if _evaluate(dga.d(g), aug.augmented):
            return g
    return None


def find_augmentations(dga: DGA, max_candidates: int = MAX_CANDIDATES) -> list[Augmentation]:
    """Every augmentation, by backtracking over the degree-0 generators.

    A boundary constraint is checked as soon as the last degree-0 generator
    it mentions has been assigned.  The result is sorted by the tuple of
    generator positions of the augmented set.
    """
    zero = [g for g in dga.generators if dga.reduce(dga.gradings[g]) == 0]
    if 2 ** len(zero) > max_candidates:
        raise SearchLimitExceeded(f"{len(zero)} degree-0 generators exceed the search cap")
    index = {g: k for k, g in enumerate(zero)}
    # words containing a non-degree-0 letter never contribute
    checks: dict[int, list[list[Word]]] = {k: [] for k in range(len(zero))}
    for g in dga.generators:
        words = [w for w in dga.d(g) if all(x in index for x in w)]
        if not words:
            continue
        last = max((index[x] for w in words for x in w), default=-1)
        if last < 0:
            return []  # a bare constant can never be killed
        checks[last].append(words)

    found: list[frozenset[str]] = []
    chosen: list[str] = []

    def rec(k: int):
        if k == len(zero):
            found.append(frozenset(chosen))
            return
        for bit in (0, 1):
            if bit:
                chosen.append(zero[k])
            aug = set(chosen)
            if all(sum(all(x in aug for x in w) for w in ws) % 2 == 0 for ws in checks[k]):
                rec(k + 1)
            if bit:
                chosen.pop()

    rec(0)
    pos = {g: k for k, g in enumerate(dga.generators)}
    found.sort(key=lambda a: sorted(pos[g] for g in a))
    return [Augmentation(a) for a in found]


def conjugate(dga: DGA, aug: Augmentation) -> DGA:
    """Substitute ``x -> x + aug(x)`` in every boundary word."""
    for x in aug.augmented:
        if dga.reduce(dga.gradings[x]) != 0:
            raise AugmentationError(f"{x} is augmented but not in degree 0", x)
    boundary = {}
    for g in dga.generators:
        words = []
        for w in dga.d(g):
            choices = [((x,), ()) if x in aug else ((x,),) for x in w]
            for pick in product(*choices):
                words.append(tuple(y for part in pick for y in part))
        boundary[g] = mod2(words)
    out = DGA(dga.generators, dga.gradings, boundary, dga.modulus, dga.labels, dga.heights, dga.height_mode)
    return out


def constant_witness(dga: DGA) -> str | None:
    for g in dga.generators:
        if () in dga.d(g):
            return g
    return None


def augmented_differential(dga: DGA, aug: Augmentation) -> DGA:
    conj = conjugate(dga, aug)
    w = constant_witness(conj)
    if w is not None:
        raise AugmentationError(f"not an augmentation: constant term survives in d{w}", w)
    return conj


# -- linear complexes ------------------------------------------------------------

@dataclass(frozen=True)
class LinearComplex:
    """A finite graded GF(2) complex.

    ``matrix[i, j] = 1`` when ``basis[i]`` occurs in ``d(basis[j])``.
    """

    basis: tuple[str, ...]
    gradings: Mapping[str, int]
    matrix: np.ndarray
    modulus: int = 0

    def __post_init__(self):
        n = len(self.basis)
        if self.matrix.shape != (n, n):
            raise ValueError("matrix shape does not match basis")

    @property
    def index(self) -> dict[str, int]:
        return {g: k for k, g in enumerate(self.basis)}

    def reduce(self, g: int) -> int:
        return g % self.modulus if self.modulus else g

    def degree_of(self, g: str) -> int:
        return self.reduce(self.gradings[g])

    def degrees(self) -> list[int]:
        return sorted({self.degree_of(g) for g in self.basis})

    def in_degree(self, k: int) -> list[int]:
        k = self.reduce(k)
        return [i for i, g in enumerate(self.basis) if self.degree_of(g) == k]

    def block(self, k: int) -> np.ndarray:
        """The map from degree ``k`` to degree ``k - 1``."""
        return self.matrix[np.ix_(self.in_degree(k - 1), self.in_degree(k))]

    def apply(self, v: np.ndarray) -> np.ndarray:
        return gf2.matmul(self.matrix, v.reshape(-1, 1)).ravel()

    def vector(self, ids) -> np.ndarray:
        v = np.zeros(len(self.basis), dtype=np.uint8)
        idx = self.index
        for g in ids:
            v[idx[g]] ^= 1
        return v

    def support(self, v: np.ndarray) -> tuple[str, ...]:
        return tuple(self.basis[i] for i in np.nonzero(v)[0])

    def d(self, g: str) -> tuple[str, ...]:
        return self.support(self.matrix[:, self.index[g]])

    def check(self) -> list[str]:
        """Problems with the complex: wrong degrees or d^2 != 0."""
        problems = []
        for j, g in enumerate(self.basis):
            for i in np.nonzero(self.matrix[:, j])[0]:
                h = self.basis[i]
                if self.degree_of(h) != self.reduce(self.gradings[g] - 1):
                    problems.append(f"degree: {h} in d{g}")
        sq = gf2.matmul(self.matrix, self.matrix)
        for i, j in zip(*np.nonzero(sq)):
            problems.append(f"d^2: {self.basis[i]} in dd{self.basis[j]}")
        return problems


def linear_part(dga: DGA) -> LinearComplex:
    """The word-length-one part of a DGA whose constant part vanishes."""
    w = constant_witness(dga)
    if w is not None:
        raise AugmentationError(f"constant term in d{w}", w)
    basis = dga.generators
    idx = {g: k for k, g in enumerate(basis)}
    m = gf2.zeros(len(basis), len(basis))
    for j, g in enumerate(basis):
        for word in dga.d(g):
            if len(word) == 1:
                m[idx[word[0]], j] ^= 1
    c = LinearComplex(basis, dict(dga.gradings), m, dga.modulus)
    problems = c.check()
    if problems:
        raise ValueError("linear part is not a complex: " + problems[0])
    return c


def subcomplex(c: LinearComplex, ids: Sequence[str]) -> LinearComplex:
    """Restrict to the span of ``ids`` (the caller guarantees invariance)."""
    sel = [c.index[g] for g in ids]
    m = c.matrix[np.ix_(sel, sel)].copy()
    return LinearComplex(tuple(ids), {g: c.gradings[g] for g in ids}, m, c.modulus)


# -- homology ---------------------------------------------------------------------

@dataclass(frozen=True)
class Homology:
    """Graded homology with canonical representative cycles.

    ``reps[k]`` is a list of cycles in degree ``k`` (tuples of basis ids);
    their classes form a basis of ``H_k``.
    """

    complex: LinearComplex
    dims: Mapping[int, int]
    reps: Mapping[int, tuple[tuple[str, ...], ...]]

    def dim(self, k: int) -> int:
        return self.dims.get(self.complex.reduce(k), 0)

    def total(self) -> int:
        return sum(self.dims.values())

    def boundaries(self, k: int) -> np.ndarray:
        c = self.complex
        out_idx, in_idx = c.in_degree(k), c.in_degree(k + 1)
        n = len(c.basis)
        cols = c.matrix[:, in_idx].T  # each row: d of a degree k+1 generator
        return cols.reshape(-1, n) if len(in_idx) else gf2.zeros(0, n)

    def is_cycle(self, v: np.ndarray) -> bool:
        return not self.complex.apply(v).any()

    def is_boundary(self, v: np.ndarray, k: int) -> bool:
        b = self.boundaries(k)
        if b.shape[0] == 0:
            return not v.any()
        return gf2.solve(b.T, v) is not None

    def coordinates(self, v: np.ndarray, k: int) -> np.ndarray:
        """Coordinates of the class of cycle ``v`` (degree ``k``) in ``reps[k]``."""
        k = self.complex.reduce(k)
        if not self.is_cycle(v):
            raise ValueError("not a cycle")
        reps = [self.complex.vector(r) for r in self.reps.get(k, ())]
        b = self.boundaries(k)
        cols = np.array(reps + list(b), dtype=np.uint8).reshape(-1, len(self.complex.basis))
        if cols.shape[0] == 0:
            if v.any():
                raise ValueError("cycle is not in the span of representatives")
            return np.zeros(0, dtype=np.uint8)
        x = gf2.solve(cols.T, v)
        if x is None:
            raise ValueError("cycle is not in the span of representatives")
        return x[: len(reps)]

    def rep_vectors(self, k: int) -> list[np.ndarray]:
        return [self.complex.vector(r) for r in self.reps.get(self.complex.reduce(k), ())]


def homology(c: LinearComplex) -> Homology:
    n = len(c.basis)
    dims: dict[int, int] = {}
    reps: dict[int, tuple[tuple[str, ...], ...]] = {}
    for k in c.degrees():
        idx = c.in_degree(k)
        d_out = c.matrix[:, idx]
        z_local = gf2.nullspace(d_out)
        z = gf2.zeros(z_local.shape[0], n)
        z[:, idx] = z_local
        in_idx = c.in_degree(k + 1)
        b = c.matrix[:, in_idx].T.reshape(-1, n) if in_idx else gf2.zeros(0, n)
        q = gf2.quotient_basis(z, b)
        if q.shape[0]:
            dims[k] = q.shape[0]
            reps[k] = tuple(c.support(v) for v in q)
    return Homology(c, dims, reps)


# -- Poincare polynomials ---------------------------------------------------------

@dataclass(frozen=True)
class LaurentPoly:
    """Nonnegative integer Laurent polynomial in ``t``; exponents mod ``modulus`` if nonzero."""

    coeffs: tuple[tuple[int, int], ...]
    modulus: int = 0

    @classmethod
    def from_dict(cls, d: Mapping[int, int], modulus: int = 0) -> "LaurentPoly":
        acc: dict[int, int] = {}
        for e, c in d.items():
            e = e % modulus if modulus else e
            acc[e] = acc.get(e, 0) + c
        return cls(tuple(sorted((e, c) for e, c in acc.items() if c)), modulus)

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def coefficient(self, e: int) -> int:
        if self.modulus:
            e %= self.modulus
        return self.as_dict().get(e, 0)

    def mirror(self) -> "LaurentPoly":
        return LaurentPoly.from_dict({-e: c for e, c in self.coeffs}, self.modulus)

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in self.coeffs}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.coeffs:
            mono = "1" if e == 0 else ("t" if e == 1 else f"t^{e}")
            parts.append(mono if c == 1 else (f"{c}" if e == 0 else f"{c}{mono}"))
        return " + ".join(parts)


def poincare_polynomial(h: Homology) -> LaurentPoly:
    return LaurentPoly.from_dict(dict(h.dims), h.complex.modulus)


@dataclass(frozen=True)
class Linearization:
    augmentation: Augmentation
    dga: DGA
    complex: LinearComplex
    homology: Homology

    @property
    def polynomial(self) -> LaurentPoly:
        return poincare_polynomial(self.homology)


def linearize(dga: DGA, aug: Augmentation) -> Linearization:
    conj = augmented_differential(dga, aug)
    c = linear_part(conj)
    return Linearization(aug, conj, c, homology(c))


def poincare_set(dga: DGA) -> set[LaurentPoly]:
    return {linearize(dga, a).polynomial for a in find_augmentations(dga)}


def poincare_json(polys) -> list[dict[str, int]]:
    return [p.to_json() for p in sorted(polys, key=lambda p: p.coeffs)]


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)

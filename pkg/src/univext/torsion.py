"""Torsion pairs in LinearA(n) and in tubes.

A pair is stored by its generating description and answers membership
queries intensionally, so infinite families (rays, corays) are never
materialized. Tube pairs come from the two classification families:

* ``TubeCase1``: rays ``i_0 < ... < i_{k-1}`` (all free) plus a torsion pair in
  each wing ``W[i_a, i_{a+1}-1]``; the torsion part is finite.
* ``TubeCase2``: corays ``i_0 < ... < i_{k-1}`` (all torsion) plus a torsion
  pair in each wing ``W[i_a+1, i_{a+1}]``; the free part is finite.

Indices are read cyclically, ``i_k = i_0 + rank``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Union

import numpy as np

from . import linalg as la
from .category import (
    CategorySpec,
    DomainError,
    FormalObject,
    HomElement,
    Indec,
    LinearA,
    ShortExactSequence,
    Tube,
    as_object,
    basis_homs,
    ext_basis,
    ext_dim,
    hom_dim,
    list_indecomposables,
    subquotient_lattice,
)
from .oracle import certify_exact, hom_from_matrices, realize_hom
from .report import Report
from .reps import section


class Membership(str, Enum):
    TORSION = "torsion"
    FREE = "free"
    NEITHER = "neither"


class InconsistentPair(ValueError):
    """The description does not behave like a torsion pair on some object."""


@dataclass(frozen=True)
class Explicit:
    torsion: frozenset
    free: frozenset


@dataclass(frozen=True)
class TubeCase1:
    rays: tuple[int, ...]
    wing_torsion: tuple[frozenset, ...]


@dataclass(frozen=True)
class TubeCase2:
    corays: tuple[int, ...]
    wing_torsion: tuple[frozenset, ...]


Description = Union[Explicit, TubeCase1, TubeCase2]


@dataclass(frozen=True)
class Wing:
    """Subfactors of ``[lo, hi]`` with the torsion pair chosen inside it."""

    lo: int
    hi: int
    torsion: frozenset
    free: frozenset

    def contains(self, rank: int, m: Indec) -> bool:
        s = self.lo + (m.socle - self.lo) % rank
        return s + m.length - 1 <= self.hi

    def members(self, rank: int) -> list[Indec]:
        return [
            Indec(s % rank, t - s + 1) for t in range(self.lo, self.hi + 1) for s in range(self.lo, t + 1)
        ]

    def __str__(self):
        return f"W[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class TorsionPair:
    spec: CategorySpec
    description: Description

    def __post_init__(self):
        d = self.description
        if isinstance(d, Explicit):
            norm = lambda xs: frozenset(self.spec.check(x) for x in xs)
            object.__setattr__(self, "description", Explicit(norm(d.torsion), norm(d.free)))
            if self.description.torsion & self.description.free:
                raise ValueError("torsion and free parts overlap")
            return
        if not isinstance(self.spec, Tube):
            raise ValueError("ray/coray descriptions need a tube")
        self.wings  # validates

    @property
    def is_tube(self) -> bool:
        return isinstance(self.spec, Tube)

    def with_spec(self, spec: CategorySpec) -> "TorsionPair":
        return TorsionPair(spec, self.description)

    @cached_property
    def wings(self) -> tuple[Wing, ...]:
        d = self.description
        if isinstance(d, Explicit):
            return ()
        r = self.spec.rank
        idx = d.rays if isinstance(d, TubeCase1) else d.corays
        if not idx or list(idx) != sorted(set(idx)) or not all(0 <= i < r for i in idx):
            raise ValueError("indices must be distinct, increasing residues in [0, rank)")
        if len(d.wing_torsion) != len(idx):
            raise ValueError("need one wing torsion set per index")
        bounds = list(idx) + [idx[0] + r]
        wings = []
        for a, given in enumerate(d.wing_torsion):
            if isinstance(d, TubeCase1):
                lo, hi = bounds[a], bounds[a + 1] - 1
            else:
                lo, hi = bounds[a] + 1, bounds[a + 1]
            wings.append(_build_wing(self.spec, lo, hi, given, isinstance(d, TubeCase2)))
        return tuple(wings)

    def membership(self, m: Indec) -> Membership:
        return membership(self, m)

    def __str__(self):
        d = self.description
        if isinstance(d, Explicit):
            ts = ", ".join(str(m) for m in sorted(d.torsion, key=Indec.key))
            return f"{self.spec}, T = add{{{ts}}}"
        kind = "rays" if isinstance(d, TubeCase1) else "corays"
        idx = d.rays if isinstance(d, TubeCase1) else d.corays
        return f"{self.spec}, {kind} {list(idx)}"


def _build_wing(spec: Tube, lo: int, hi: int, given: Iterable[Indec], coray_case: bool) -> Wing:
    r = spec.rank
    probe = Wing(lo, hi, frozenset(), frozenset())
    members = probe.members(r)
    torsion = set()
    for m in given:
        m = spec.normalize(m)
        if not probe.contains(r, m):
            raise ValueError(f"{m} does not lie in the wing {probe}")
        torsion.add(m)
    if coray_case:
        torsion |= {spec.normalize(Indec(s, hi - s + 1)) for s in range(lo, hi + 1)}
    free = {x for x in members if all(hom_dim(spec, t, x) == 0 for t in torsion)}
    closed = {x for x in members if all(hom_dim(spec, x, f) == 0 for f in free)}
    if closed != torsion:
        raise ValueError(f"torsion set in {probe} is not a torsion class of the wing")
    for t in range(lo, hi + 1):
        proj = spec.normalize(Indec(lo, t - lo + 1))
        inj = spec.normalize(Indec(t, hi - t + 1))
        if coray_case:
            if t < hi and proj not in free:
                raise ValueError(f"Ext-projective {proj} of {probe} must be torsion-free")
        else:
            if t > lo and inj not in torsion:
                raise ValueError(f"Ext-injective {inj} of {probe} must be torsion")
            if proj in torsion:
                raise ValueError(f"Ext-projective {proj} of {probe} must be torsion-free")
    return Wing(lo, hi, frozenset(torsion), frozenset(free))


def explicit_pair(spec: CategorySpec, torsion: Iterable[Indec], free: Iterable[Indec] | None = None) -> TorsionPair:
    """Pair with the given torsion set; the free set defaults to its Hom-perpendicular."""
    torsion = frozenset(spec.check(t) for t in torsion)
    if free is None:
        if isinstance(spec, Tube):
            raise ValueError("explicit tube pairs need an explicit free set")
        free = [x for x in list_indecomposables(spec) if x not in torsion and all(hom_dim(spec, t, x) == 0 for t in torsion)]
    return TorsionPair(spec, Explicit(torsion, frozenset(spec.check(f) for f in free)))


def membership(pair: TorsionPair, m: Indec) -> Membership:
    spec = pair.spec
    if m.length < 1:
        raise DomainError(f"{m} has non-positive length")
    if isinstance(spec, LinearA):
        spec.check(m)
    d = pair.description
    if isinstance(d, Explicit):
        m = spec.normalize(m)
        if m in d.torsion:
            return Membership.TORSION
        return Membership.FREE if m in d.free else Membership.NEITHER
    r = spec.rank
    if isinstance(d, TubeCase1) and m.socle % r in d.rays:
        return Membership.FREE
    if isinstance(d, TubeCase2) and m.top % r in d.corays:
        return Membership.TORSION
    m = spec.normalize(m)
    for w in pair.wings:
        if w.contains(r, m):
            if m in w.torsion:
                return Membership.TORSION
            return Membership.FREE if m in w.free else Membership.NEITHER
    return Membership.NEITHER


def is_torsion(pair: TorsionPair, m: Indec) -> bool:
    return membership(pair, m) is Membership.TORSION


def is_free(pair: TorsionPair, m: Indec) -> bool:
    return membership(pair, m) is Membership.FREE


def indecomposables(pair: TorsionPair, cap: int | None = None) -> list[Indec]:
    """Indecomposables up to ``cap`` (all of them in LinearA)."""
    spec = pair.spec
    if isinstance(spec, LinearA):
        return list_indecomposables(spec)
    cap = spec.length_cap if cap is None else cap
    return [Indec(s, l) for l in range(1, cap + 1) for s in range(spec.rank)]


def torsion_members(pair: TorsionPair, cap: int | None = None) -> list[Indec]:
    return [m for m in indecomposables(pair, cap) if is_torsion(pair, m)]


def free_members(pair: TorsionPair, cap: int | None = None) -> list[Indec]:
    return [m for m in indecomposables(pair, cap) if is_free(pair, m)]


def finite_torsion(pair: TorsionPair) -> list[Indec]:
    """Torsion indecomposables outside the intensional coray families."""
    d = pair.description
    if isinstance(d, Explicit):
        out = set(d.torsion)
    else:
        out = {m for w in pair.wings for m in w.torsion}
        if isinstance(d, TubeCase2):
            out = {m for m in out if m.top % pair.spec.rank not in d.corays}
    return sorted(out, key=Indec.key)


def is_functorially_finite(pair: TorsionPair) -> tuple[bool, str]:
    if isinstance(pair.spec, LinearA):
        return True, "finite type"
    if isinstance(pair.description, Explicit):
        return True, "finite explicit torsion and free sets"
    return False, "non-functorially-finite ambient pair"


def ext_obstruction(pair: TorsionPair, x: Indec) -> Indec | None:
    """A torsion ``G`` with Ext^1(x, G) != 0, or ``None`` when ``x`` lies in the Ext-perp.

    Corays are handled intensionally: Ext^1(x, G) = Hom(G, tau x) is nonzero for
    some member ``G`` of the coray at ``i`` exactly when ``tau x`` has a
    submodule with top congruent to ``i``, and then ``G`` can be taken to be
    that submodule.
    """
    spec = pair.spec
    if isinstance(spec, LinearA) and x.socle == 1:
        return None
    d = pair.description
    if isinstance(d, TubeCase2):
        r = spec.rank
        for t in range(x.socle - 1, x.top):
            if t % r in d.corays:
                return spec.normalize(Indec(x.socle - 1, t - x.socle + 2))
    work = spec.with_cap(max(spec.max_length, x.length))
    for g in finite_torsion(pair):
        if ext_dim(work, x, g):
            return g
    return None


def in_perp_ext(pair: TorsionPair, x: Indec | FormalObject) -> bool:
    return all(ext_obstruction(pair, m) is None for m in as_object(x))


# -- torsion sequences ------------------------------------------------------------


def _stable_positions(items: list[Indec]) -> tuple[FormalObject, list[int]]:
    order = sorted(range(len(items)), key=lambda i: (items[i].key(), i))
    pos = [0] * len(items)
    for new, old in enumerate(order):
        pos[old] = new
    return FormalObject(tuple(items)), pos


def torsion_length(pair: TorsionPair, m: Indec) -> int:
    """Length of the largest torsion submodule of the uniserial ``m``."""
    for k in range(m.length, 0, -1):
        if is_torsion(pair, Indec(m.socle, k)):
            return k
    return 0


def torsion_trace(pair: TorsionPair, m: Indec, cap: int | None = None) -> int:
    """Length of the sum of images of torsion objects in ``m`` (a second route to ``t m``)."""
    spec = pair.spec
    cap = max(cap or 0, m.length)
    best = 0
    for g in indecomposables(pair, cap):
        if g.length > spec.max_length or not is_torsion(pair, g):
            continue
        for bh in basis_homs(spec, g, m):
            best = max(best, bh.image_length)
    return best


def torsion_sequence(pair: TorsionPair, x: Indec | FormalObject, strict: bool = True) -> ShortExactSequence:
    """``tX >-> X ->> fX`` computed summand by summand.

    With ``strict`` the quotient must be free, otherwise ``InconsistentPair``.
    """
    spec = pair.spec
    x = as_object(x)
    subs, quots, sub_of, quot_of = [], [], [], []
    for j, m in enumerate(x):
        k = torsion_length(pair, m)
        if k:
            sub_of.append((j, len(subs), k))
            subs.append(Indec(m.socle, k))
        if k < m.length:
            q = spec.normalize(Indec(m.socle + k, m.length - k))
            if strict and not is_free(pair, q):
                raise InconsistentPair(f"quotient {q} of {m} by its torsion part is not torsion-free")
            quot_of.append((j, len(quots), m.length - k))
            quots.append(q)
    sub, spos = _stable_positions(subs)
    quot, qpos = _stable_positions(quots)
    inc = HomElement.build(spec, sub, x, {(j, spos[i], k): 1 for j, i, k in sub_of})
    proj = HomElement.build(spec, x, quot, {(qpos[i], j, k): 1 for j, i, k in quot_of})
    return ShortExactSequence(sub, x, quot, inc, proj)


def torsion_functor_on_hom(pair: TorsionPair, f: HomElement) -> tuple[HomElement, HomElement]:
    """The maps ``t f: tX -> tY`` and ``f f: fX -> fY`` induced by ``f: X -> Y``."""
    spec, p = pair.spec, pair.spec.prime
    sx = torsion_sequence(pair, f.source)
    sy = torsion_sequence(pair, f.target)
    fm = realize_hom(f)
    ix, iy = realize_hom(sx.inclusion), realize_hom(sy.inclusion)
    px, py = realize_hom(sx.projection), realize_hom(sy.projection)
    sec = section(px, p)
    tmats, fmats = [], []
    for v in range(spec.num_vertices):
        img = la.matmul(fm[v], ix[v], p)
        t = la.solve(iy[v], img, p) if iy[v].shape[1] else np.zeros((0, img.shape[1]), dtype=np.int64)
        if t is None:
            raise InconsistentPair("torsion part is not mapped into the torsion part")
        tmats.append(t.reshape(iy[v].shape[1], ix[v].shape[1]))
        fmats.append(la.matmul(la.matmul(py[v], fm[v], p), sec[v], p))
    tf = hom_from_matrices(spec, sx.sub, sy.sub, tmats)
    ff = hom_from_matrices(spec, sx.quot, sy.quot, fmats)
    return tf, ff


# -- verification ------------------------------------------------------------------


def verify_torsion_pair(pair: TorsionPair, cap: int | None = None) -> Report:
    """Check the torsion pair axioms on all indecomposables up to ``cap``."""
    spec = pair.spec
    if isinstance(spec, Tube):
        cap = spec.length_cap if cap is None else cap
        work = spec.with_cap(max(2 * cap, spec.length_cap))
    else:
        work = spec
    wp = pair.with_spec(work)
    objs = indecomposables(pair, cap)
    tors = [m for m in objs if is_torsion(pair, m)]
    free = [m for m in objs if is_free(pair, m)]
    report = Report(f"torsion pair {pair}")

    bad = [f"Hom({t},{f}) != 0" for t in tors for f in free if hom_dim(work, t, f)]
    report.add("hom-orthogonality", bad)

    bad = []
    for m in objs:
        seq = torsion_sequence(wp, m, strict=False)
        for s in seq.sub:
            if not is_torsion(pair, s):
                bad.append(f"{m}: torsion part {s} is not torsion")
        for q in seq.quot:
            if not is_free(pair, q):
                bad.append(f"{m}: quotient {q} is not torsion-free")
        if not certify_exact(seq):
            bad.append(f"{m}: torsion sequence is not exact")
    report.add("torsion-sequences", bad)

    bad = []
    for t in tors:
        for q in subquotient_lattice(work, t)[1]:
            if not is_torsion(pair, q):
                bad.append(f"{q} (quotient of {t})")
    report.add("closed-under-quotients", bad)

    bad = []
    for q, s in itertools.product(tors, repeat=2):
        for seq in ext_basis(work, q, s):
            for e in seq.middle:
                if not is_torsion(pair, e):
                    bad.append(f"{e} (extension of {q} by {s})")
    report.add("closed-under-extensions", sorted(set(bad), key=bad.index))
    return report


# -- enumeration in LinearA ------------------------------------------------------

MAX_ENUMERATION_N = 6


def _check_enumerable(spec) -> LinearA:
    if isinstance(spec, int):
        spec = LinearA(spec)
    if not isinstance(spec, LinearA):
        raise ValueError("torsion pairs are enumerated only for LinearA(n)")
    if spec.n > MAX_ENUMERATION_N:
        raise ValueError(
            f"enumeration is limited to n <= {MAX_ENUMERATION_N}; A_n has Catalan(n+1) torsion "
            "classes and the closure search grows with it"
        )
    return spec


def _pair_order(pair: TorsionPair) -> tuple:
    ts = sorted(pair.description.torsion, key=lambda m: (m.socle, m.top))
    return (len(ts), [(m.socle, m.top) for m in ts])


def enumerate_torsion_pairs(spec: LinearA | int) -> list[TorsionPair]:
    """All torsion pairs of LinearA(n), n <= 6, by closing sets under ``T -> perp(T perp)``."""
    spec = _check_enumerable(spec)
    objs = list_indecomposables(spec)
    n = len(objs)
    hom = [[hom_dim(spec, a, b) > 0 for b in objs] for a in objs]

    def perp_right(mask):
        return sum(1 << j for j in range(n) if not any(hom[i][j] for i in range(n) if mask >> i & 1))

    def perp_left(mask):
        return sum(1 << i for i in range(n) if not any(hom[i][j] for j in range(n) if mask >> j & 1))

    def close(mask):
        return perp_left(perp_right(mask))

    seen = {close(0)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for mask in frontier:
            for i in range(n):
                if not mask >> i & 1:
                    c = close(mask | 1 << i)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
        frontier = nxt
    pairs = []
    for mask in seen:
        tors = [objs[i] for i in range(n) if mask >> i & 1]
        free = [objs[j] for j in range(n) if perp_right(mask) >> j & 1]
        pairs.append(TorsionPair(spec, Explicit(frozenset(tors), frozenset(free))))
    return sorted(pairs, key=_pair_order)


def brute_force_torsion_classes(spec: LinearA | int) -> list[frozenset]:
    """Every subset of indecomposables closed under quotients and basis extensions."""
    spec = _check_enumerable(spec)
    objs = list_indecomposables(spec)
    quots = {m: set(subquotient_lattice(spec, m)[1]) for m in objs}
    mids = {(q, s): [set(seq.middle) for seq in ext_basis(spec, q, s)] for q in objs for s in objs}
    out = []
    for bits in itertools.product((False, True), repeat=len(objs)):
        t = {m for m, b in zip(objs, bits) if b}
        if any(not quots[m] <= t for m in t):
            continue
        if any(not mid <= t for q in t for s in t for mid in mids[(q, s)]):
            continue
        out.append(frozenset(t))
    return out

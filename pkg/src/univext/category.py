"""Combinatorial calculus of the two ambient serial categories.

``LinearA(n)`` is the category of representations of the linearly oriented
quiver ``n -> n-1 -> ... -> 1``. With this orientation the interval ``[a, b]``
has socle ``S_a`` and top ``S_b``, the projective at ``i`` is ``[1, i]`` and the
injective at ``i`` is ``[i, n]``.

``Tube(rank, length_cap)`` is the category of nilpotent representations of the
cyclic quiver on ``Z/rank`` with arrows ``v -> v-1``. Its indecomposables are
uniserials ``[i, i+l-1]`` with socle ``S_i``; only lengths up to the cap are
admitted.

Every indecomposable is a uniserial, so all Hom spaces have a combinatorial
basis indexed by the length of the image. A basis morphism ``M -> N`` with
image length ``k`` is the projection of ``M`` onto its length-``k`` quotient
followed by the inclusion of that quotient as a submodule of ``N``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Union

from .linalg import DEFAULT_PRIME


class DomainError(ValueError):
    """An object that does not belong to the ambient category."""


class CapError(DomainError):
    """A construction needs indecomposables longer than the tube's length cap."""

    def __init__(self, needed: int, cap: int):
        self.needed = needed
        self.cap = cap
        super().__init__(
            f"construction needs length {needed} but length_cap is {cap}; "
            f"raise length_cap to at least {needed}"
        )


@dataclass(frozen=True)
class LinearA:
    n: int
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("LinearA needs n >= 1")

    period = None

    @property
    def num_vertices(self) -> int:
        return self.n

    @property
    def max_length(self) -> int:
        return self.n

    def vertex(self, t: int) -> int:
        """Internal vertex index of cover coordinate ``t``."""
        return t - 1

    def pred(self, v: int) -> int | None:
        return v - 1 if v > 0 else None

    def normalize(self, m: "Indec") -> "Indec":
        return m

    def check(self, m: "Indec") -> "Indec":
        if m.length < 1 or m.socle < 1 or m.top > self.n:
            raise DomainError(f"{m} is not an indecomposable of A_{self.n}")
        return m

    def with_cap(self, cap: int) -> "LinearA":
        return self

    def with_prime(self, prime: int) -> "LinearA":
        return LinearA(self.n, prime)

    def __str__(self):
        return f"A_{self.n}"


@dataclass(frozen=True)
class Tube:
    rank: int
    length_cap: int
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.rank < 2:
            raise ValueError("homogeneous tubes (rank 1) are not supported")
        if self.length_cap < self.rank:
            raise ValueError("length_cap must be at least the rank")

    @property
    def period(self) -> int:
        return self.rank

    @property
    def num_vertices(self) -> int:
        return self.rank

    @property
    def max_length(self) -> int:
        return self.length_cap

    def vertex(self, t: int) -> int:
        return t % self.rank

    def pred(self, v: int) -> int:
        return (v - 1) % self.rank

    def normalize(self, m: "Indec") -> "Indec":
        s = m.socle % self.rank
        return m if s == m.socle else Indec(s, m.length)

    def check(self, m: "Indec") -> "Indec":
        if m.length < 1:
            raise DomainError(f"{m} has non-positive length")
        if m.length > self.length_cap:
            raise CapError(m.length, self.length_cap)
        return self.normalize(m)

    def with_cap(self, cap: int) -> "Tube":
        return Tube(self.rank, cap, self.prime)

    def with_prime(self, prime: int) -> "Tube":
        return Tube(self.rank, self.length_cap, prime)

    def __str__(self):
        return f"Tube(rank={self.rank}, cap={self.length_cap})"


CategorySpec = Union[LinearA, Tube]


@dataclass(frozen=True)
class Indec:
    """Uniserial with the given socle and length; top is ``socle+length-1``."""

    socle: int
    length: int

    @property
    def top(self) -> int:
        return self.socle + self.length - 1

    def key(self) -> tuple[int, int]:
        return (self.length, self.socle)

    def __str__(self):
        return f"[{self.socle},{self.top}]"

    __repr__ = __str__


_INTERVAL = re.compile(r"^\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*$")


def parse_indec(spec: CategorySpec, text: str) -> Indec:
    m = _INTERVAL.match(text)
    if not m:
        raise DomainError(f"cannot parse {text!r}; expected [a,b]")
    a, b = int(m.group(1)), int(m.group(2))
    if b < a:
        raise DomainError(f"{text!r} has top below socle")
    return spec.check(Indec(a, b - a + 1))


def interval(spec: CategorySpec, a: int, b: int) -> Indec:
    """The indecomposable displayed ``[a, b]``."""
    return spec.check(Indec(a, b - a + 1))


@dataclass(frozen=True)
class FormalObject:
    """A direct sum of indecomposables, kept in canonical (length, socle) order."""

    summands: tuple[Indec, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.summands, key=Indec.key))
        if ordered != self.summands:
            object.__setattr__(self, "summands", ordered)

    @classmethod
    def of(cls, *ms: Indec) -> "FormalObject":
        return cls(tuple(ms))

    def __len__(self):
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __bool__(self):
        return bool(self.summands)

    def __add__(self, other: "FormalObject") -> "FormalObject":
        return FormalObject(self.summands + other.summands)

    def without(self, drop: Iterable[int]) -> "FormalObject":
        drop = set(drop)
        return FormalObject(tuple(m for i, m in enumerate(self.summands) if i not in drop))

    def dim_vector(self, spec: CategorySpec) -> tuple[int, ...]:
        if not self.summands:
            return ()
        dims = [0] * spec.num_vertices
        for m in self.summands:
            for t in range(m.socle, m.top + 1):
                dims[spec.vertex(t)] += 1
        return tuple(dims)

    def __str__(self):
        if not self.summands:
            return "0"
        return " + ".join(str(m) for m in self.summands)


def as_object(x: Indec | FormalObject) -> FormalObject:
    return x if isinstance(x, FormalObject) else FormalObject((x,))


def sum_order(left: FormalObject, right: FormalObject) -> tuple[FormalObject, list[int], list[int]]:
    """``left + right`` with the new positions of the summands of each part."""
    tagged = [(m.key(), 0, i) for i, m in enumerate(left)] + [
        (m.key(), 1, i) for i, m in enumerate(right)
    ]
    tagged.sort()
    pos_l = [0] * len(left)
    pos_r = [0] * len(right)
    for new, (_, side, i) in enumerate(tagged):
        (pos_l if side == 0 else pos_r)[i] = new
    return left + right, pos_l, pos_r


# -- Hom calculus -------------------------------------------------------------


@dataclass(frozen=True)
class BasisHom:
    source: Indec
    target: Indec
    image: Indec

    @property
    def image_length(self) -> int:
        return self.image.length


def _image_lengths(spec: CategorySpec, m: Indec, n: Indec) -> list[int]:
    period = spec.period
    out = []
    for k in range(1, min(m.length, n.length) + 1):
        e = m.top - k + 1
        if period is None:
            ok = e == n.socle
        else:
            ok = (e - n.socle) % period == 0
        if ok:
            out.append(k)
    return out


@lru_cache(maxsize=None)
def basis_homs(spec: CategorySpec, m: Indec, n: Indec) -> tuple[BasisHom, ...]:
    spec.check(m)
    spec.check(n)
    return tuple(
        BasisHom(m, n, spec.normalize(Indec(m.top - k + 1, k)))
        for k in _image_lengths(spec, m, n)
    )


def hom_dim(spec: CategorySpec, m: Indec | FormalObject, n: Indec | FormalObject) -> int:
    return sum(len(basis_homs(spec, a, b)) for a in as_object(m) for b in as_object(n))


def tau(spec: CategorySpec, m: Indec) -> Indec | None:
    spec.check(m)
    if isinstance(spec, LinearA):
        return None if m.socle == 1 else Indec(m.socle - 1, m.length)
    return spec.normalize(Indec(m.socle - 1, m.length))


def ext_dim(spec: CategorySpec, m: Indec | FormalObject, n: Indec | FormalObject) -> int:
    """dim Ext^1(m, n): extensions with quotient ``m`` and sub ``n``."""
    total = 0
    for a in as_object(m):
        t = tau(spec, a)
        if t is not None:
            total += hom_dim(spec, n, t)
    return total


def list_indecomposables(spec: CategorySpec, cap: int | None = None) -> list[Indec]:
    """All indecomposables; A_n in lexicographic order, tubes by (length, socle)."""
    if isinstance(spec, LinearA):
        return [Indec(a, b - a + 1) for a in range(1, spec.n + 1) for b in range(a, spec.n + 1)]
    cap = spec.length_cap if cap is None else min(cap, spec.length_cap)
    return [Indec(s, l) for l in range(1, cap + 1) for s in range(spec.rank)]


@dataclass(frozen=True)
class HomElement:
    """A morphism between formal objects in the basis-hom coordinates.

    ``entries`` maps ``(target summand, source summand, image length)`` to a
    nonzero coefficient in GF(prime).
    """

    spec: CategorySpec
    source: FormalObject
    target: FormalObject
    entries: tuple[tuple[tuple[int, int, int], int], ...] = ()

    @classmethod
    def build(cls, spec, source, target, coeffs: dict) -> "HomElement":
        p = spec.prime
        items = tuple(sorted((k, v % p) for k, v in coeffs.items() if v % p))
        return cls(spec, source, target, items)

    @classmethod
    def zero(cls, spec, source, target) -> "HomElement":
        return cls(spec, source, target, ())

    @classmethod
    def identity(cls, spec, obj: FormalObject) -> "HomElement":
        return cls.build(spec, obj, obj, {(i, i, m.length): 1 for i, m in enumerate(obj)})

    @classmethod
    def basis(cls, spec, source, target, j: int, i: int, k: int) -> "HomElement":
        return cls(spec, source, target, (((j, i, k), 1),))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "HomElement") -> "HomElement":
        self._same_shape(other)
        d = self.as_dict()
        for k, v in other.entries:
            d[k] = d.get(k, 0) + v
        return HomElement.build(self.spec, self.source, self.target, d)

    def __neg__(self) -> "HomElement":
        return self.scale(-1)

    def __sub__(self, other: "HomElement") -> "HomElement":
        return self + (-other)

    def scale(self, c: int) -> "HomElement":
        return HomElement.build(self.spec, self.source, self.target, {k: v * c for k, v in self.entries})

    def _same_shape(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("morphisms have different source or target")

    def __matmul__(self, other: "HomElement") -> "HomElement":
        """Composition ``self ∘ other``."""
        if other.target != self.source:
            raise ValueError(f"cannot compose: {other.target} != {self.source}")
        mid = self.source.summands
        acc: dict = {}
        by_source: dict[int, list] = {}
        for (l, j, k2), c2 in self.entries:
            by_source.setdefault(j, []).append((l, k2, c2))
        for (j, i, k1), c1 in other.entries:
            ln = mid[j].length
            for l, k2, c2 in by_source.get(j, ()):
                k = k1 + k2 - ln
                if k > 0:
                    key = (l, i, k)
                    acc[key] = acc.get(key, 0) + c1 * c2
        return HomElement.build(self.spec, other.source, self.target, acc)

    def reindex(self, source: FormalObject, target: FormalObject, src_pos, tgt_pos) -> "HomElement":
        """The same map viewed between larger objects via summand positions."""
        return HomElement.build(
            self.spec,
            source,
            target,
            {(tgt_pos[j], src_pos[i], k): c for (j, i, k), c in self.entries},
        )

    def block(self, j: int, i: int) -> dict[int, int]:
        return {k: c for (jj, ii, k), c in self.entries if jj == j and ii == i}

    def __str__(self):
        if not self.entries:
            return f"0: {self.source} -> {self.target}"
        parts = [f"{c}*({i}->{j}|{k})" for (j, i, k), c in self.entries]
        return f"{self.source} -> {self.target}: " + " + ".join(parts)


def hom_basis(spec: CategorySpec, m: Indec | FormalObject, n: Indec | FormalObject) -> list[HomElement]:
    src, tgt = as_object(m), as_object(n)
    out = []
    for i, a in enumerate(src):
        for j, b in enumerate(tgt):
            for bh in basis_homs(spec, a, b):
                out.append(HomElement.basis(spec, src, tgt, j, i, bh.image_length))
    return out


def block_diag(f: HomElement, g: HomElement) -> HomElement:
    """``f ⊕ g`` on the canonically ordered direct sums."""
    src, sl, sr = sum_order(f.source, g.source)
    tgt, tl, tr = sum_order(f.target, g.target)
    return f.reindex(src, tgt, sl, tl) + g.reindex(src, tgt, sr, tr)


# -- Short exact sequences ----------------------------------------------------


@dataclass(frozen=True)
class ShortExactSequence:
    sub: FormalObject
    middle: FormalObject
    quot: FormalObject
    inclusion: HomElement
    projection: HomElement

    def __post_init__(self):
        if self.inclusion.source != self.sub or self.inclusion.target != self.middle:
            raise ValueError("inclusion does not go sub -> middle")
        if self.projection.source != self.middle or self.projection.target != self.quot:
            raise ValueError("projection does not go middle -> quot")

    @property
    def spec(self) -> CategorySpec:
        return self.inclusion.spec

    def is_split_shape(self) -> bool:
        return self.middle == self.sub + self.quot

    def __str__(self):
        return f"{self.sub} >-> {self.middle} ->> {self.quot}"


def direct_sum_sequence(a: ShortExactSequence, b: ShortExactSequence) -> ShortExactSequence:
    inc = block_diag(a.inclusion, b.inclusion)
    proj = block_diag(a.projection, b.projection)
    return ShortExactSequence(inc.source, inc.target, proj.target, inc, proj)


def split_sequence(spec: CategorySpec, sub: FormalObject, quot: FormalObject) -> ShortExactSequence:
    mid, ps, pq = sum_order(sub, quot)
    inc = HomElement.build(spec, sub, mid, {(ps[i], i, m.length): 1 for i, m in enumerate(sub)})
    proj = HomElement.build(spec, mid, quot, {(i, pq[i], m.length): 1 for i, m in enumerate(quot)})
    return ShortExactSequence(sub, mid, quot, inc, proj)


def _extension_at(spec: CategorySpec, q: Indec, s: Indec, c: int) -> ShortExactSequence:
    """Nonsplit extension of ``q = [a, b]`` by ``s`` placed at ``[c, c+len(s)-1]``.

    The middle term is ``[c, b] + [a, d]`` with ``d = c+len(s)-1``; the second
    summand vanishes when ``d = a-1`` and the middle is a glued uniserial.
    """
    a, b = q.socle, q.top
    d = c + s.length - 1
    e1 = spec.check(Indec(c, b - c + 1))
    summands = [e1]
    if d >= a:
        summands.append(spec.check(Indec(a, d - a + 1)))
    mid = FormalObject(tuple(summands))
    pos = {m: idx for idx, m in enumerate(mid)}
    sub, quot = FormalObject.of(s), FormalObject.of(q)
    i1 = pos[e1]
    inc = {(i1, 0, s.length): 1}
    proj = {(0, i1, q.length): 1}
    if d >= a:
        i2 = pos[summands[1]]
        k2 = d - a + 1
        inc[(i2, 0, k2)] = 1
        proj[(0, i2, k2)] = -1
    return ShortExactSequence(
        sub,
        mid,
        quot,
        HomElement.build(spec, sub, mid, inc),
        HomElement.build(spec, mid, quot, proj),
    )


def _placements(spec: CategorySpec, q: Indec, s: Indec) -> list[int]:
    """Cover positions ``c`` of the sub giving a basis of Ext^1(q, s)."""
    a, b = q.socle, q.top
    lo, hi = a - s.length, min(a - 1, b - s.length)
    if spec.period is None:
        return [s.socle] if lo <= s.socle <= hi else []
    r = spec.period
    return [c for c in range(hi, lo - 1, -1) if (c - s.socle) % r == 0]


def ext_basis(spec: CategorySpec, q: Indec, s: Indec) -> list[ShortExactSequence]:
    """Nonsplit sequences ``s >-> E ->> q`` whose classes form a basis of Ext^1(q, s)."""
    spec.check(q)
    spec.check(s)
    return [_extension_at(spec, q, s, c) for c in _placements(spec, q, s)]


def ar_sequence(spec: CategorySpec, m: Indec) -> ShortExactSequence | None:
    t = tau(spec, m)
    if t is None:
        return None
    return _extension_at(spec, m, t, m.socle - 1)


def subquotient_lattice(spec: CategorySpec, m: Indec) -> tuple[list[Indec], list[Indec]]:
    spec.check(m)
    subs = [Indec(m.socle, k) for k in range(1, m.length + 1)]
    quots = [spec.normalize(Indec(m.top - k + 1, k)) for k in range(1, m.length + 1)]
    return subs, quots


# -- coordinates and ideals -----------------------------------------------------


@lru_cache(maxsize=None)
def hom_keys(spec: CategorySpec, source: FormalObject, target: FormalObject) -> tuple:
    """Coordinate keys ``(j, i, k)`` of Hom(source, target), in ``hom_basis`` order."""
    return tuple(
        (j, i, bh.image_length)
        for i, a in enumerate(source)
        for j, b in enumerate(target)
        for bh in basis_homs(spec, a, b)
    )


def to_coords(f: HomElement) -> list[int]:
    d = f.as_dict()
    return [d.get(k, 0) for k in hom_keys(f.spec, f.source, f.target)]


def from_coords(spec: CategorySpec, source: FormalObject, target: FormalObject, vec) -> HomElement:
    keys = hom_keys(spec, source, target)
    return HomElement.build(spec, source, target, {k: int(c) for k, c in zip(keys, vec)})


def ideal_keys(spec: CategorySpec, x: FormalObject, y: FormalObject, through: Iterable[Indec]) -> frozenset:
    """Basis homs ``x -> y`` lying in the ideal of maps factoring through ``add(through)``.

    A composite of two basis homs is a basis hom or zero, so the ideal is
    spanned by the basis homs it contains.
    """
    hit = set()
    through = list(through)
    for i, m in enumerate(x):
        for j, n in enumerate(y):
            for t in through:
                for k1 in _image_lengths(spec, m, t):
                    for k2 in _image_lengths(spec, t, n):
                        k = k1 + k2 - t.length
                        if k > 0:
                            hit.add((j, i, k))
    return frozenset(hit)

"""Universal extensions to the torsion part.

A sequence ``X >-> E ->> Y`` with ``X`` torsion is universal when every
extension of ``Y`` by a torsion object is a pushout of it, i.e. the connecting
map ``Hom(X, G) -> Ext^1(Y, G)`` is onto for every torsion ``G``.

Construction follows Bongartz: take a basis of all relevant extensions, sum
them, and pull back along the diagonal ``Y -> Y^d``. The result is then made
minimal by splitting off summands of ``E`` killed by the projection.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from . import linalg as la
from .category import (
    DomainError,
    FormalObject,
    HomElement,
    Indec,
    LinearA,
    ShortExactSequence,
    Tube,
    as_object,
    direct_sum_sequence,
    ext_basis,
    ext_dim,
    hom_basis,
    split_sequence,
    to_coords,
)
from .oracle import (
    MatrixSequence,
    _delta,
    certify_exact,
    class_rank,
    compose_mats,
    ext_complex_dim,
    extension_cocycle,
    hom_from_matrices,
    hom_space,
    intertwiner_dim,
    pushforward_cocycle,
    realize,
    realize_hom,
    realize_sequence,
    same_class,
)
from .report import Report
from . import reps
from .torsion import (
    Explicit,
    Membership,
    TorsionPair,
    TubeCase1,
    TubeCase2,
    finite_torsion,
    in_perp_ext,
    indecomposables,
    is_free,
    is_torsion,
    membership,
)


@dataclass(frozen=True)
class UniversalExtension:
    seq: ShortExactSequence
    minimal: bool

    @property
    def sub(self) -> FormalObject:
        return self.seq.sub

    @property
    def middle(self) -> FormalObject:
        return self.seq.middle

    def __str__(self):
        return str(self.seq)


@dataclass(frozen=True)
class Decision:
    ok: bool
    reason: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Obstruction:
    """Evidence that a torsion-free object has no universal extension.

    ``coray_ext`` lists ``(G, dim Ext^1(F, G))`` for coray members of every
    length up to the probe bound; ``growth`` lists the middle term of the
    minimal universal extension to the torsion objects of length ``<= L``.
    """

    coray_ext: tuple[tuple[Indec, int], ...]
    growth: tuple[tuple[int, FormalObject], ...]

    @property
    def stabilized(self) -> bool:
        mids = [m for _, m in self.growth]
        return len(mids) >= 2 and mids[-1] == mids[-2]

    def __str__(self):
        ext = ", ".join(f"{g}:{e}" for g, e in self.coray_ext)
        grow = "; ".join(f"L={l}: {m}" for l, m in self.growth)
        return f"Ext to coray members [{ext}]; truncated universal middles [{grow}]"


def working_pair(pair: TorsionPair, length: int) -> TorsionPair:
    """The same pair in a tube whose cap admits objects of ``length``."""
    spec = pair.spec
    if isinstance(spec, Tube) and spec.length_cap < length:
        return pair.with_spec(spec.with_cap(length))
    return pair


def _coray_members(pair: TorsionPair, bound: int) -> list[Indec]:
    d = pair.description
    if not isinstance(d, TubeCase2):
        return []
    r = pair.spec.rank
    return [Indec((i - l + 1) % r, l) for l in range(1, bound + 1) for i in d.corays]


def torsion_generators(pair: TorsionPair, bound: int | None = None) -> list[Indec]:
    """Torsion indecomposables of length ``<= bound``; all of them when finite."""
    fin = finite_torsion(pair)
    if bound is None:
        if isinstance(pair.description, TubeCase2):
            raise ValueError("the torsion part is infinite; give a length bound")
        return fin
    out = {m for m in fin if m.length <= bound} | set(_coray_members(pair, bound))
    return sorted(out, key=Indec.key)


def relevant_generators(pair: TorsionPair, y: Indec, bound: int | None = None) -> list[Indec]:
    """Torsion ``G`` with Ext^1(y, G) != 0."""
    gens = torsion_generators(pair, bound)
    work = working_pair(pair, max([y.length] + [g.length for g in gens])).spec
    return [g for g in gens if ext_dim(work, y, g)]


def bongartz_extension(pair: TorsionPair, y: Indec, generators=None) -> UniversalExtension:
    """Pull the sum of a basis of Ext^1(y, G), G in ``generators``, back along the diagonal."""
    if generators is None:
        generators = relevant_generators(pair, y)
    generators = list(generators)
    need = max([y.length] + [y.length + g.length for g in generators])
    spec = working_pair(pair, need).spec
    p = spec.prime
    y = spec.check(y)
    basis = [seq for g in generators for seq in ext_basis(spec, y, spec.check(g))]
    if not basis:
        return UniversalExtension(split_sequence(spec, FormalObject(), FormalObject.of(y)), True)
    total = reduce(direct_sum_sequence, basis)
    d = len(basis)
    diag = HomElement.build(spec, FormalObject.of(y), total.quot, {(j, 0, y.length): 1 for j in range(d)})
    ms = realize_sequence(total)
    ry = realize(spec, y)
    pb, to_mid, to_y, inc_pb = reps.pullback(ms.middle, ms.projection, ry, realize_hom(diag))
    zero = reps.zero_mats(ms.sub, ry)
    inc = reps.lift_into(inc_pb, reps.stack(ms.inclusion, zero), p)
    seq = reps.sequence_from_matrices(spec, ms.sub, pb, ry, inc, to_y)
    return UniversalExtension(seq, False)


# -- minimality ----------------------------------------------------------------------


def _restrict(seq: ShortExactSequence, keep_mid, keep_mid_obj) -> ShortExactSequence:
    """Replace the middle by a subobject ``keep_mid`` containing a complement of what is dropped."""
    spec = seq.spec
    proj = reps.compose(realize_hom(seq.projection), keep_mid, spec.prime)
    sub, inc = reps.kernel(keep_mid_obj, proj)
    return reps.sequence_from_matrices(spec, sub, keep_mid_obj, realize(spec, seq.quot), inc, proj)


def _split_off_killed(seq: ShortExactSequence) -> ShortExactSequence | None:
    """One step of Krause's reduction: split off an indecomposable summand of the
    middle on which the projection vanishes, if there is one."""
    spec = seq.spec
    e, g = seq.middle, seq.projection
    for m in dict.fromkeys(e):
        hb = hom_basis(spec, m, e)
        if not hb:
            continue
        rows = np.array([to_coords(g @ s) for s in hb], dtype=np.int64).T
        null = la.nullspace(rows, spec.prime) if rows.size else np.eye(len(hb), dtype=np.int64)
        killed = [
            reduce(lambda a, b: a + b, (hb[i].scale(int(c)) for i, c in enumerate(null[:, j]) if c))
            for j in range(null.shape[1])
        ]
        for s in killed:
            for r in hom_basis(spec, e, m):
                if (r @ s).block(0, 0).get(m.length, 0):
                    ker, inc = reps.kernel(realize(spec, e), realize_hom(r))
                    return _restrict(seq, inc, ker)
    return None


def right_minimal_version(seq: ShortExactSequence) -> ShortExactSequence:
    """Strip summands of the middle lying in the kernel of the projection until none remain."""
    while True:
        nxt = _split_off_killed(seq)
        if nxt is None:
            return seq
        seq = nxt


def minimalize(ue: UniversalExtension, pair: TorsionPair) -> UniversalExtension:
    """Minimal version of a universal extension.

    When the quotient is torsion-free every torsion summand of the middle lies in
    the kernel of the projection, so those summands are split off in one step;
    otherwise fall back to Krause's reduction.
    """
    seq = ue.seq
    spec = seq.spec
    if all(is_free(pair, q) for q in seq.quot):
        drop = [i for i, m in enumerate(seq.middle) if is_torsion(pair, m)]
        if drop:
            keep = seq.middle.without(drop)
            pos = [i for i in range(len(seq.middle)) if i not in set(drop)]
            emb = HomElement.build(spec, keep, seq.middle, {(pos[i], i, m.length): 1 for i, m in enumerate(keep)})
            seq = _restrict(seq, realize_hom(emb), realize(spec, keep))
    seq = right_minimal_version(seq)
    return UniversalExtension(seq, True)


def left_minimal_version(a: FormalObject, t0: FormalObject, g: HomElement) -> HomElement:
    """Strip summands ``M`` of ``t0`` with a retraction ``r: t0 -> M`` such that ``r o g = 0``."""
    spec = g.spec
    while True:
        found = None
        for m in dict.fromkeys(t0):
            hb = hom_basis(spec, t0, m)
            if not hb:
                continue
            rows = np.array([to_coords(r @ g) for r in hb], dtype=np.int64).T
            null = la.nullspace(rows, spec.prime) if rows.size else np.eye(len(hb), dtype=np.int64)
            for j in range(null.shape[1]):
                r = reduce(lambda x, y: x + y, (hb[i].scale(int(c)) for i, c in enumerate(null[:, j]) if c))
                for s in hom_basis(spec, m, t0):
                    if (r @ s).block(0, 0).get(m.length, 0):
                        found = r
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            return g
        ker, inc = reps.kernel(realize(spec, t0), realize_hom(found))
        obj, iso = reps.decompose(ker)
        to_ker = reps.lift_into(reps.compose(inc, iso, spec.prime), realize_hom(g), spec.prime)
        t0 = obj
        g = hom_from_matrices(spec, a, obj, to_ker)


# -- universality --------------------------------------------------------------------


def _connecting_rank(ms: MatrixSequence, sub: FormalObject, g: Indec, spec) -> tuple[int, int]:
    """(rank of Hom(sub, G) -> Ext^1(quot, G), dim Ext^1(quot, G))."""
    rg = realize(spec, g)
    target = ext_complex_dim(ms.quot, rg)
    if target == 0:
        return 0, 0
    cocycle = extension_cocycle(ms)
    pushed = [pushforward_cocycle(cocycle, ms.sub, ms.quot, phi, rg) for phi in hom_space(spec, sub, g)]
    return class_rank(ms.quot, rg, pushed), target


def is_universal_extension(seq: ShortExactSequence, pair: TorsionPair, cap: int | None = None) -> Decision:
    """Surjectivity of the connecting maps against every torsion ``G`` up to ``cap``."""
    for s in seq.sub:
        if not is_torsion(pair, s):
            return Decision(False, f"sub summand {s} is not torsion", s)
    if cap is None and isinstance(pair.description, TubeCase2):
        cap = pair.spec.length_cap
    gens = torsion_generators(pair, cap)
    need = max([m.length for m in seq.middle] + [g.length for g in gens] + [1])
    spec = seq.spec
    if isinstance(spec, Tube) and spec.length_cap < need:
        spec = spec.with_cap(need)
    seq = respec(seq, spec)
    ms = realize_sequence(seq)
    for g in gens:
        got, want = _connecting_rank(ms, seq.sub, g, spec)
        if got < want:
            return Decision(False, f"Hom(sub, {g}) -> Ext^1(quot, {g}) has rank {got} < {want}", g)
    return Decision(True, "connecting maps onto")


def respec(seq: ShortExactSequence, spec) -> ShortExactSequence:
    """The same sequence read in another cap of the same tube."""
    if seq.spec == spec:
        return seq
    inc = HomElement(spec, seq.sub, seq.middle, seq.inclusion.entries)
    proj = HomElement(spec, seq.middle, seq.quot, seq.projection.entries)
    return ShortExactSequence(seq.sub, seq.middle, seq.quot, inc, proj)


@dataclass(frozen=True)
class PushoutWitness:
    phi: HomElement
    pushout: ShortExactSequence
    exact: bool
    same_class: bool

    @property
    def ok(self) -> bool:
        return self.exact and self.same_class


def pushout_witness(seq: ShortExactSequence, target: ShortExactSequence) -> PushoutWitness | None:
    """A map ``phi: sub -> G`` whose pushout of ``seq`` is equivalent to ``target``.

    ``target`` is ``G >-> E' ->> Y`` with the same quotient as ``seq`` and an
    indecomposable ``G``. Returns ``None`` when no such ``phi`` exists.
    """
    if target.quot != seq.quot:
        raise ValueError("sequences have different quotients")
    spec = seq.spec
    if target.spec != spec:
        target = respec(target, spec)
    p = spec.prime
    ms, mt = realize_sequence(seq), realize_sequence(target)
    g_obj = target.sub
    rg = mt.sub
    want = extension_cocycle(mt)
    cocycle = extension_cocycle(ms)
    phis = hom_space(spec, seq.sub, g_obj)
    cols = [pushforward_cocycle(cocycle, ms.sub, ms.quot, phi, rg) for phi in phis]
    d, _ = _delta(ms.quot, rg)
    mat = np.hstack([np.stack(cols, axis=1)] + ([d] if d.shape[1] else [])) if cols else None
    if mat is None:
        return None
    x = la.solve(mat, want, p)
    if x is None:
        return None
    phi = tuple(sum((int(c) * m[v] for c, m in zip(x, phis)), np.zeros_like(phis[0][v])) % p for v in range(len(rg.dims)))
    q, from_mid, from_g = reps.pushout(ms.sub, ms.inclusion, ms.middle, phi, rg)
    proj = []
    for v in range(len(q.dims)):
        both = np.hstack([from_mid[v], from_g[v]])
        rhs = np.hstack([ms.projection[v], np.zeros((ms.quot.dims[v], rg.dims[v]), dtype=np.int64)])
        if q.dims[v] == 0:
            proj.append(np.zeros((ms.quot.dims[v], 0), dtype=np.int64))
            continue
        pt = la.solve(both.T, rhs.T, p)
        proj.append(pt.reshape(q.dims[v], ms.quot.dims[v]).T.copy())
    proj = tuple(proj)
    po_ms = MatrixSequence(rg, q, ms.quot, from_g, proj)
    exact = bool(certify_exact(po_ms))
    same = exact and same_class(ms.quot, rg, extension_cocycle(po_ms), want)
    po = reps.sequence_from_matrices(spec, rg, q, ms.quot, from_g, proj)
    return PushoutWitness(hom_from_matrices(spec, seq.sub, g_obj, phi), po, exact, same)


# -- existence -----------------------------------------------------------------------


def _inner_wing(pair: TorsionPair, f: Indec):
    r = pair.spec.rank
    for w in pair.wings:
        lo, hi = w.lo + 1, w.hi - 1
        if lo <= hi:
            s = lo + (f.socle - lo) % r
            if s + f.length - 1 <= hi:
                return (lo, hi)
    return None


@lru_cache(maxsize=None)
def minimal_universal_extension(pair: TorsionPair, f: Indec, bound: int | None = None) -> UniversalExtension:
    """Bongartz over the relevant generators of length ``<= bound``, then minimalized."""
    gens = relevant_generators(pair, f, bound)
    ue = bongartz_extension(pair, f, gens)
    return minimalize(ue, pair)


def obstruction_probe(pair: TorsionPair, f: Indec, steps: int = 3) -> Obstruction:
    """Ext to coray members and truncated universal middles for growing length bounds."""
    r = pair.spec.rank
    bounds = [f.length + r * (k + 1) for k in range(steps)]
    work = working_pair(pair, bounds[-1] + f.length).spec
    coray = tuple((g, ext_dim(work, f, g)) for g in _coray_members(pair, bounds[-1]))
    growth = tuple((b, minimal_universal_extension(pair, f, b).middle) for b in bounds)
    return Obstruction(coray, growth)


def admits_universal_extension(pair: TorsionPair, f: Indec, certificate: bool = True) -> Decision:
    """Whether the torsion-free ``f`` has a universal extension to the torsion part.

    In LinearA and for ray families the relevant torsion objects are finitely
    many and the Bongartz construction always succeeds. For coray families the
    decision is the wing criterion: ``f`` must lie in an inner wing
    ``W[i_a+2, i_{a+1}-1]``. Otherwise Ext^1(f, -) is nonzero on coray members
    of every length, which no single torsion object can cover; the witness is
    an ``Obstruction`` recording that growth (skipped unless ``certificate``).
    """
    if membership(pair, f) is not Membership.FREE:
        raise DomainError(f"{f} is not torsion-free")
    d = pair.description
    if not isinstance(d, TubeCase2):
        return Decision(True, "finitely many relevant torsion objects", minimal_universal_extension(pair, f))
    if _inner_wing(pair, f) is not None:
        # coray members have no extensions with objects of inner wings, so the
        # finite wing torsion is all that is relevant
        bound = f.length + pair.spec.rank
        ue = minimal_universal_extension(pair, f, bound)
        return Decision(True, f"lies in inner wing W{list(_inner_wing(pair, f))}", ue)
    probe = obstruction_probe(pair, f) if certificate else None
    return Decision(False, "Ext to coray members of every length", probe)


# -- Wakamatsu-type properties -------------------------------------------------------


def wakamatsu_check(ue: UniversalExtension, pair: TorsionPair, cap: int) -> Report:
    """(i) Ext^1(E, G) = 0 for torsion G up to ``cap``; (ii) the projection is a
    right approximation by the Ext-perp of the torsion part, tested on
    indecomposables up to ``cap``."""
    seq = ue.seq
    need = max([cap] + [m.length for m in seq.middle])
    spec = seq.spec
    if isinstance(spec, Tube):
        spec = spec.with_cap(max(spec.length_cap, need))
    seq = respec(seq, spec)
    p = spec.prime
    report = Report(f"wakamatsu {seq}")
    rmid = realize(spec, seq.middle)
    gens = torsion_generators(pair, cap if isinstance(pair.description, TubeCase2) else None)
    bad = [f"Ext^1({seq.middle}, {g}) = {e}" for g in gens if (e := ext_complex_dim(rmid, realize(spec, g)))]
    report.add("middle-in-ext-perp", bad)

    rq = realize(spec, seq.quot)
    proj = realize_hom(seq.projection)
    bad = []
    for z in indecomposables(pair, cap):
        if not in_perp_ext(pair, z):
            continue
        want = intertwiner_dim(realize(spec, z), rq)
        if want == 0:
            continue
        comps = [np.concatenate([m.reshape(-1) for m in compose_mats(proj, h, p)]) for h in hom_space(spec, z, seq.middle)]
        got = la.rank(np.stack(comps, axis=1), p) if comps else 0
        if got != want:
            bad.append(f"only {got} of {want} maps {z} -> {seq.quot} factor through the projection")
    report.add("right-approximation", bad)
    return report

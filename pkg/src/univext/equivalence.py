"""The two sides of the equivalence ``perp(T)/[T] ~ E`` and its verifiers.

``perp(T)`` is the Ext-perpendicular ``{X : Ext^1(X, T) = 0}``, ``E`` the
torsion-free objects with a universal extension to ``T``. The functor ``F``
takes the torsion-free quotient; its inverse ``c`` takes the middle term of
the minimal universal extension.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

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
    direct_sum_sequence,
    ext_basis,
    ext_dim,
    from_coords,
    hom_basis,
    hom_dim,
    hom_keys,
    ideal_keys,
    split_sequence,
    to_coords,
)
from .extensions import (
    UniversalExtension,
    admits_universal_extension,
    left_minimal_version,
    minimal_universal_extension,
    pushout_witness,
    relevant_generators,
    respec,
    right_minimal_version,
    torsion_generators,
    bongartz_extension,
    wakamatsu_check,
)
from .oracle import (
    compose_mats,
    ext_complex_dim,
    factoring_dim,
    hom_space,
    intertwiner_dim,
    realize,
    realize_hom,
)
from . import reps
from .report import Report
from .torsion import (
    Membership,
    TorsionPair,
    TubeCase2,
    in_perp_ext,
    indecomposables,
    is_free,
    is_torsion,
    membership,
    torsion_functor_on_hom,
    torsion_sequence,
)

PERP_EXT = "PerpExt"
E_SCRIPT = "EScript"
PERP_CAP_TORSION = "PerpCapTorsion"
CUSTOM = "Custom"

BRACKET_T = "BracketT"
BRACKET_PERP_CAP_T = "BracketPerpCapT"


class NotStabilized(RuntimeError):
    """A dimension over a truncated infinite family kept changing with the truncation."""

    def __init__(self, message: str, needed_cap: int):
        self.needed_cap = needed_cap
        super().__init__(f"{message}; rerun with --cap {needed_cap} or larger")


@dataclass(frozen=True)
class SubcategorySlice:
    spec: CategorySpec
    cap: int | None
    members: tuple[Indec, ...]
    intent: str

    def __contains__(self, m: Indec) -> bool:
        return self.spec.normalize(m) in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __str__(self):
        return "{" + ", ".join(str(m) for m in self.members) + "}"


@dataclass(frozen=True)
class QuotientHom:
    source: FormalObject
    target: FormalObject
    total_dim: int
    ideal_dim: int
    ideal_kind: str

    @property
    def quotient_dim(self) -> int:
        return self.total_dim - self.ideal_dim

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.total_dim, self.ideal_dim, self.quotient_dim)


def _cap(pair: TorsionPair, cap: int | None) -> int | None:
    if isinstance(pair.spec, LinearA):
        return None
    return pair.spec.length_cap if cap is None else cap


def _grown(pair: TorsionPair, length: int) -> TorsionPair:
    spec = pair.spec
    if isinstance(spec, Tube) and spec.length_cap < length:
        return pair.with_spec(spec.with_cap(length))
    return pair


def perp_ext(pair: TorsionPair, cap: int | None = None) -> SubcategorySlice:
    cap = _cap(pair, cap)
    members = tuple(m for m in indecomposables(pair, cap) if in_perp_ext(pair, m))
    return SubcategorySlice(pair.spec, cap, members, PERP_EXT)


def script_e(pair: TorsionPair, cap: int | None = None) -> SubcategorySlice:
    cap = _cap(pair, cap)
    members = tuple(
        m
        for m in indecomposables(pair, cap)
        if is_free(pair, m) and admits_universal_extension(pair, m, certificate=False)
    )
    return SubcategorySlice(pair.spec, cap, members, E_SCRIPT)


def perp_cap_torsion(pair: TorsionPair, cap: int | None = None) -> SubcategorySlice:
    cap = _cap(pair, cap)
    members = tuple(m for m in indecomposables(pair, cap) if is_torsion(pair, m) and in_perp_ext(pair, m))
    return SubcategorySlice(pair.spec, cap, members, PERP_CAP_TORSION)


# -- ideals and quotient Hom spaces ---------------------------------------------------


def _through(pair: TorsionPair, kind: str, bound: int | None) -> list[Indec]:
    gens = torsion_generators(pair, bound)
    if kind == BRACKET_T:
        return gens
    if kind == BRACKET_PERP_CAP_T:
        return [g for g in gens if in_perp_ext(pair, g)]
    raise ValueError(f"unknown ideal kind {kind!r}")


def ideal_dim(pair: TorsionPair, x, y, kind: str = BRACKET_T, cap: int | None = None) -> int:
    """Dimension of the maps ``x -> y`` factoring through the chosen torsion family.

    Infinite families are truncated at growing length bounds starting from
    ``len(x) + len(y)`` (no longer object can carry a nonzero composite of basis
    maps); the value is reported only once two further increments agree.
    """
    x, y = as_object(x), as_object(y)
    if not isinstance(pair.description, TubeCase2):
        return factoring_dim(pair.spec, x, y, _through(pair, kind, None))
    r = pair.spec.rank
    start = max(m.length for m in x) + max(m.length for m in y) if x and y else 1
    bounds = [start, start + r, start + 2 * r]
    work = _grown(pair, bounds[-1])
    dims = [factoring_dim(work.spec, x, y, _through(pair, kind, b)) for b in bounds]
    if len(set(dims)) != 1:
        raise NotStabilized(f"factoring dimension {x} -> {y} changed: {dims}", bounds[-1] + r)
    return dims[0]


def quotient_hom(pair: TorsionPair, x, y, kind: str = BRACKET_T, cap: int | None = None) -> QuotientHom:
    x, y = as_object(x), as_object(y)
    return QuotientHom(x, y, hom_dim(pair.spec, x, y), ideal_dim(pair, x, y, kind, cap), kind)


def ideal_coordinates(pair: TorsionPair, x: FormalObject, y: FormalObject) -> frozenset:
    """Basis-hom keys ``x -> y`` lying in [T] (basis homs span the ideal)."""
    bound = None
    if isinstance(pair.description, TubeCase2):
        bound = max(m.length for m in x) + max(m.length for m in y) if x and y else 1
    return ideal_keys(pair.spec, x, y, _through(pair, BRACKET_T, bound))


# -- the functors ------------------------------------------------------------------------


def functor_F(pair: TorsionPair, x) -> FormalObject:
    return torsion_sequence(pair, as_object(x)).quot


def functor_F_on_hom(pair: TorsionPair, f: HomElement) -> HomElement:
    return torsion_functor_on_hom(pair, f)[1]


def _respec_hom(f: HomElement, spec) -> HomElement:
    return f if f.spec == spec else HomElement(spec, f.source, f.target, f.entries)


@lru_cache(maxsize=None)
def _c_sequence(pair: TorsionPair, f: Indec) -> ShortExactSequence:
    if not is_free(pair, f):
        raise DomainError(f"{f} is not torsion-free")
    d = admits_universal_extension(pair, f, certificate=False)
    if not d:
        cert = admits_universal_extension(pair, f).witness
        err = DomainError(f"{f} has no universal extension to the torsion part: {cert}")
        err.certificate = cert
        raise err
    return d.witness.seq


def c_extension(pair: TorsionPair, f: Indec | FormalObject) -> ShortExactSequence:
    """Minimal universal extension of ``f``, summand by summand."""
    seqs = [_c_sequence(pair, m) for m in as_object(f)]
    if not seqs:
        return split_sequence(pair.spec, FormalObject(), FormalObject())
    longest = max(m.length for s in seqs for m in s.middle)
    spec = _grown(pair, longest).spec
    return reduce(direct_sum_sequence, [respec(s, spec) for s in seqs])


def functor_c(pair: TorsionPair, f: Indec | FormalObject) -> FormalObject:
    return c_extension(pair, f).middle


def functor_c_on_hom(pair: TorsionPair, f: HomElement) -> HomElement:
    """A lift ``E -> E'`` of ``f: F -> F'`` through the universal extensions,
    normalized to the representative with no coordinates in [T]."""
    s1, s2 = c_extension(pair, f.source), c_extension(pair, f.target)
    length = max([m.length for m in s1.middle] + [m.length for m in s2.middle] + [1])
    spec = _grown(pair, length).spec
    s1, s2 = respec(s1, spec), respec(s2, spec)
    f = _respec_hom(f, spec)
    e1, e2 = s1.middle, s2.middle
    target = to_coords(f @ s1.projection)
    basis = hom_basis(spec, e1, e2)
    if not basis:
        return HomElement.zero(spec, e1, e2)
    cols = np.array([to_coords(s2.projection @ h) for h in basis], dtype=np.int64).T
    if cols.size == 0:
        sol = np.zeros(len(basis), dtype=np.int64)
    else:
        sol = la.solve(cols, np.array(target, dtype=np.int64), spec.prime)
        if sol is None:
            raise ArithmeticError("no lift through the universal extension; middle term not Ext-perp")
    h = from_coords(spec, e1, e2, sol)
    drop = ideal_coordinates(_grown(pair, length), e1, e2)
    return HomElement.build(spec, e1, e2, {k: c for k, c in h.entries if k not in drop})


# -- verifiers -------------------------------------------------------------------------


def _summand(obj: FormalObject) -> Indec | None:
    return obj.summands[0] if len(obj) == 1 else None


def _flat(mats) -> np.ndarray:
    return np.concatenate([m.reshape(-1) for m in mats]) if mats else np.zeros(0, dtype=np.int64)


def verify_equivalence(pair: TorsionPair, cap: int | None = None) -> Report:
    """Object round trips, Hom-dimension equalities, morphism-level fullness and
    faithfulness, and the object bijection, on indecomposables up to ``cap``."""
    cap = _cap(pair, cap)
    report = Report(f"equivalence {pair}" + (f" (cap {cap})" if cap else ""))
    perp = perp_ext(pair, cap)
    lhs = [x for x in perp if not is_torsion(pair, x)]
    rhs = list(script_e(pair, cap))
    p = pair.spec.prime

    bad, c_of = [], {}
    for f in rhs:
        e = functor_c(pair, f)
        c_of[f] = e
        back = functor_F(_grown(pair, max(m.length for m in e)), e)
        if back != FormalObject.of(f):
            bad.append(f"F(c({f})) = {back}")
    report.add("F(c(F)) = F on E", bad)

    bad, f_of = [], {}
    for x in lhs:
        fx = functor_F(pair, x)
        f_of[x] = fx
        m = _summand(fx)
        if m is None or not is_free(pair, m) or not admits_universal_extension(pair, m, certificate=False):
            bad.append(f"F({x}) = {fx} is not an indecomposable of E")
            continue
        if functor_c(pair, m) != FormalObject.of(x):
            bad.append(f"c(F({x})) = {functor_c(pair, m)}")
    report.add("c(F(X)) = X on perp(T) without torsion summands", bad)

    bad_dim, bad_mor = [], []
    for x in lhs:
        for y in lhs:
            q = quotient_hom(pair, x, y, BRACKET_T, cap)
            want = hom_dim(pair.spec, f_of[x], f_of[y])
            if q.quotient_dim != want:
                bad_dim.append(f"Hom({x},{y})/[T] has dim {q.quotient_dim}, Hom(F{x},F{y}) has {want}")
            images = [_flat(realize_hom(functor_F_on_hom(pair, h))) for h in hom_basis(pair.spec, x, y)]
            rank = la.rank(np.stack(images, axis=1), p) if images and images[0].size else 0
            if rank != want or q.total_dim - rank != q.ideal_dim:
                bad_mor.append(f"F on Hom({x},{y}): rank {rank}, kernel {q.total_dim - rank}, ideal {q.ideal_dim}")
    report.add("dim Hom(X,Y)/[T] = dim Hom(FX,FY)", bad_dim)
    report.add("F is full and has kernel [T]", bad_mor)

    bad = []
    images = {}
    for x in lhs:
        m = _summand(f_of[x])
        if m is not None:
            if m in images:
                bad.append(f"F({x}) = F({images[m]}) = {m}")
            images[m] = x
    for f in rhs:
        e = _summand(c_of[f])
        if e is None or is_torsion(pair, e) or not in_perp_ext(pair, e):
            bad.append(f"c({f}) = {c_of[f]} is not a torsion-free-summand object of perp(T)")
        elif f not in images and e.length <= (cap or pair.spec.max_length):
            bad.append(f"{f} is not hit by F")
    report.add("object bijection", bad, bijection=[f"{x} <-> {f_of[x]}" for x in lhs])

    bad = []
    for x in lhs:
        ident = HomElement.identity(pair.spec, FormalObject.of(x))
        if functor_F_on_hom(pair, ident) != HomElement.identity(pair.spec, f_of[x]):
            bad.append(f"F(id_{x}) != id")
    report.add("F preserves identities", bad)
    return report


def verify_ff_corollary(pair: TorsionPair, cap: int | None = None, restrict: tuple[int, int] | None = None) -> Report:
    """E equals the free slice and [T] equals [perp(T) & T] on perp(T), optionally
    restricted to the wing ``W[lo, hi]``."""
    cap = _cap(pair, cap)
    title = f"ideal identity {pair}" + (f" on W[{restrict[0]},{restrict[1]}]" if restrict else "")
    report = Report(title)

    def keep(m: Indec) -> bool:
        if restrict is None:
            return True
        lo, hi = restrict
        r = pair.spec.period
        s = lo + (m.socle - lo) % r if r else m.socle
        return lo <= s and s + m.length - 1 <= hi

    e = {m for m in script_e(pair, cap) if keep(m)}
    free = {m for m in indecomposables(pair, cap) if is_free(pair, m) and keep(m)}
    missing = sorted(free - e, key=Indec.key)
    report.add("E = F", [f"{m} is torsion-free without a universal extension" for m in missing])

    bad = []
    slice_ = [m for m in perp_ext(pair, cap) if keep(m)]
    for x in slice_:
        for y in slice_:
            a = ideal_dim(pair, x, y, BRACKET_T, cap)
            b = ideal_dim(pair, x, y, BRACKET_PERP_CAP_T, cap)
            if a != b:
                bad.append(f"Hom({x},{y}): [T] has dim {a}, [perp(T) & T] has dim {b}")
    report.add("[T] = [perp(T) & T] on perp(T)", bad)
    return report


def left_torsion_approximation(pair: TorsionPair, a: Indec) -> HomElement:
    """A left-minimal left approximation ``a -> T0`` by the (finite) torsion part."""
    spec = pair.spec
    src = FormalObject.of(a)
    targets, coeffs = [], []
    for g in torsion_generators(pair):
        for h in hom_basis(spec, a, g):
            targets.append(g)
            coeffs.append(h)
    t0 = FormalObject(tuple(targets))
    # canonical order is stable for equal keys, so the j-th listed copy sits at pos[j]
    order = sorted(range(len(targets)), key=lambda j: (targets[j].key(), j))
    pos = {old: new for new, old in enumerate(order)}
    entries = {}
    for j, h in enumerate(coeffs):
        for (_, i, k), c in h.entries:
            entries[(pos[j], i, k)] = c
    g = HomElement.build(spec, src, t0, entries)
    return left_minimal_version(src, t0, g)


def verify_lwc_triple(pair: TorsionPair, cap: int | None = None) -> Report:
    """Left-weak cotorsion-torsion triple conditions with C = perp(T), in LinearA."""
    spec = pair.spec
    if not isinstance(spec, LinearA):
        raise DomainError("triple conditions are checked only in LinearA")
    p = spec.prime
    report = Report(f"lwc triple {pair}")
    c_side = [m for m in indecomposables(pair) if in_perp_ext(pair, m)]
    tors = torsion_generators(pair)

    bad = [
        f"Ext^1({x},{g}) != 0"
        for x in c_side
        for g in tors
        if ext_complex_dim(realize(spec, x), realize(spec, g))
    ]
    report.add("(1) Ext^1(C, T) = 0", bad)

    bad = []
    for a in indecomposables(pair):
        ue = bongartz_extension(pair, a, relevant_generators(pair, a))
        seq = right_minimal_version(ue.seq)
        if any(not is_torsion(pair, s) for s in seq.sub):
            bad.append(f"{a}: sub {seq.sub} not in T")
        if any(not in_perp_ext(pair, e) for e in seq.middle):
            bad.append(f"{a}: middle {seq.middle} not in C")
        proj = realize_hom(seq.projection)
        for z in c_side:
            want = intertwiner_dim(realize(spec, z), realize(spec, a))
            if not want:
                continue
            comps = [_flat(compose_mats(proj, h, p)) for h in hom_space(spec, z, seq.middle)]
            got = la.rank(np.stack(comps, axis=1), p) if comps else 0
            if got != want:
                bad.append(f"{a}: maps from {z} do not all factor through {seq.middle}")
    report.add("(2a) T >-> C' ->> A with C' -> A a right C-approximation", bad)

    bad = []
    for a in indecomposables(pair):
        g = left_torsion_approximation(pair, a)
        t0 = g.target
        rg = realize_hom(g)
        coker, _ = reps.cokernel(realize(spec, t0), rg)
        x, _ = reps.decompose(coker)
        if any(not in_perp_ext(pair, m) for m in x):
            bad.append(f"{a}: cokernel {x} of {a} -> {t0} not in C")
        for t in tors:
            want = intertwiner_dim(realize(spec, a), realize(spec, t))
            if not want:
                continue
            comps = [_flat(compose_mats(h, rg, p)) for h in hom_space(spec, t0, t)]
            got = la.rank(np.stack(comps, axis=1), p) if comps else 0
            if got != want:
                bad.append(f"{a}: maps to {t} do not all factor through {a} -> {t0}")
    report.add("(2b) A -> T0 ->> C'' with A -> T0 a left T-approximation", bad)
    return report


def wakamatsu_batch(pair: TorsionPair, cap: int | None = None) -> Report:
    """Wakamatsu checks for the minimal universal extension of every object of E."""
    cap = _cap(pair, cap)
    report = Report(f"wakamatsu {pair}")
    for f in script_e(pair, cap):
        seq = _c_sequence(pair, f)
        sub = wakamatsu_check(UniversalExtension(seq, True), pair, cap or pair.spec.max_length)
        report.extend(sub, prefix=f"{f}: ")
    return report


def pushout_pairs(pair: TorsionPair, cap: int | None = None) -> list[tuple[Indec, Indec]]:
    """``(F, G)`` with F in E, G torsion of length ``<= cap`` and Ext^1(F, G) != 0."""
    cap = _cap(pair, cap)
    out = []
    for f in script_e(pair, cap):
        for g in torsion_generators(pair, cap if isinstance(pair.description, TubeCase2) else None):
            if cap is not None and g.length > cap:
                continue
            if ext_dim(_grown(pair, f.length + g.length).spec, f, g):
                out.append((f, g))
    return out


def pushout_check(pair: TorsionPair, f: Indec, g: Indec) -> list[str]:
    """Failures realizing each basis extension of ``f`` by ``g`` as a pushout of c(f)."""
    seq = _c_sequence(pair, f)
    spec = _grown(pair, max([f.length + g.length] + [m.length for m in seq.middle])).spec
    seq = respec(seq, spec)
    bad = []
    for k, target in enumerate(ext_basis(spec, f, g)):
        w = pushout_witness(seq, target)
        if w is None:
            bad.append(f"basis extension {k} of {f} by {g} is not a pushout of {seq}")
        elif not w.ok:
            bad.append(f"pushout of {seq} along {w.phi} is not equivalent to basis extension {k} of {f} by {g}")
    return bad


def pushout_batch(pair: TorsionPair, cap: int | None = None) -> Report:
    report = Report(f"pushout property {pair}")
    bad = []
    for f, g in pushout_pairs(pair, cap):
        bad.extend(pushout_check(pair, f, g))
    report.add("basis extensions are pushouts of the minimal universal extension", bad)
    return report

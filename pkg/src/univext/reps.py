"""Constructions on matrix representations: kernels, cokernels, pullbacks,
pushouts, and decomposition back into uniserial summands.

A representation of either ambient quiver is a vertex-graded space with one
nilpotent operator ``x`` of degree -1 (the arrows ``v -> v-1``). Its
decomposition is a graded Jordan normal form: a Jordan chain ``g, xg, ...,
x^{l-1}g`` with ``g`` at vertex ``v`` is the uniserial of length ``l`` with top
at ``v``.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import linalg as la
from .category import CategorySpec, FormalObject, HomElement, Indec, LinearA, ShortExactSequence
from .oracle import MatrixRep, hom_from_matrices, is_morphism, layout, realize, realize_hom

Mats = tuple  # tuple of per-vertex matrices


def identity_mats(rep: MatrixRep) -> Mats:
    return tuple(np.eye(d, dtype=np.int64) for d in rep.dims)


def zero_mats(a: MatrixRep, b: MatrixRep) -> Mats:
    return tuple(np.zeros((db, da), dtype=np.int64) for da, db in zip(a.dims, b.dims))


def direct_sum(a: MatrixRep, b: MatrixRep) -> tuple[MatrixRep, Mats, Mats, Mats, Mats]:
    """``a + b`` with inclusions ``ia, ib`` and projections ``pa, pb``."""
    dims = tuple(x + y for x, y in zip(a.dims, b.dims))
    maps = []
    for v, m in enumerate(a.maps):
        if m is None:
            maps.append(None)
            continue
        u = a.spec.pred(v)
        blk = np.zeros((dims[u], dims[v]), dtype=np.int64)
        blk[: a.dims[u], : a.dims[v]] = m
        blk[a.dims[u] :, a.dims[v] :] = b.maps[v]
        maps.append(blk)
    rep = MatrixRep(a.spec, dims, tuple(maps))
    ia, ib, pa, pb = [], [], [], []
    for v in range(len(dims)):
        e = np.eye(dims[v], dtype=np.int64)
        ia.append(e[:, : a.dims[v]])
        ib.append(e[:, a.dims[v] :])
        pa.append(e[: a.dims[v], :])
        pb.append(e[a.dims[v] :, :])
    return rep, tuple(ia), tuple(ib), tuple(pa), tuple(pb)


def submodule(rep: MatrixRep, bases: Sequence[np.ndarray]) -> tuple[MatrixRep, Mats]:
    """The subrepresentation spanned per vertex by independent columns ``bases[v]``."""
    p = rep.p
    maps = []
    for v, m in enumerate(rep.maps):
        if m is None:
            maps.append(None)
            continue
        u = rep.spec.pred(v)
        img = la.matmul(m, bases[v], p)
        y = la.solve(bases[u], img, p) if bases[u].shape[1] else np.zeros((0, img.shape[1]), dtype=np.int64)
        if y is None:
            raise ValueError("subspaces are not closed under the arrows")
        maps.append(y.reshape(bases[u].shape[1], bases[v].shape[1]))
    dims = tuple(b.shape[1] for b in bases)
    return MatrixRep(rep.spec, dims, tuple(maps)), tuple(np.asarray(b, dtype=np.int64) for b in bases)


def kernel(a: MatrixRep, f: Mats) -> tuple[MatrixRep, Mats]:
    bases = []
    for v, d in enumerate(a.dims):
        if f[v].shape[0] == 0:
            bases.append(np.eye(d, dtype=np.int64))
        else:
            bases.append(la.nullspace(f[v], a.p).reshape(d, -1))
    return submodule(a, bases)


def cokernel(b: MatrixRep, f: Mats) -> tuple[MatrixRep, Mats]:
    """Quotient ``b / im f`` with the projection ``b -> coker``."""
    p = b.p
    quots, sections = [], []
    for v, d in enumerate(b.dims):
        img = la.column_basis(f[v], p) if f[v].shape[1] else np.zeros((d, 0), dtype=np.int64)
        comp = la.complement(img, d, p)
        change = np.hstack([img, comp])
        inv = la.inverse(change, p) if d else np.zeros((0, 0), dtype=np.int64)
        quots.append(inv[img.shape[1] :, :])
        sections.append(comp)
    maps = []
    for v, m in enumerate(b.maps):
        if m is None:
            maps.append(None)
            continue
        u = b.spec.pred(v)
        maps.append(la.matmul(quots[u], la.matmul(m, sections[v], p), p))
    dims = tuple(q.shape[0] for q in quots)
    return MatrixRep(b.spec, dims, tuple(maps)), tuple(quots)


def pullback(a: MatrixRep, f: Mats, b: MatrixRep, g: Mats) -> tuple[MatrixRep, Mats, Mats, Mats]:
    """Pullback of ``f: a -> c`` and ``g: b -> c``.

    Returns the object, its maps to ``a`` and ``b``, and its inclusion into
    ``a + b`` (needed to lift pairs of maps with :func:`lift_into`).
    """
    p = a.p
    s, ia, ib, pa, pb = direct_sum(a, b)
    diff = tuple((la.matmul(fv, pav, p) - la.matmul(gv, pbv, p)) % p for fv, gv, pav, pbv in zip(f, g, pa, pb))
    k, inc = kernel(s, diff)
    return k, compose(pa, inc, p), compose(pb, inc, p), inc


def lift_into(inc: Mats, target: Mats, p: int) -> Mats:
    """The map ``h`` with ``inc o h = target``, for an injective ``inc``."""
    out = []
    for iv, tv in zip(inc, target):
        if iv.shape[1] == 0:
            out.append(np.zeros((0, tv.shape[1]), dtype=np.int64))
            continue
        h = la.solve(iv, tv, p)
        if h is None:
            raise ValueError("map does not factor through the subobject")
        out.append(h.reshape(iv.shape[1], tv.shape[1]))
    return tuple(out)


def stack(f: Mats, g: Mats) -> Mats:
    """The map ``(f, g)`` into a direct sum, with ``f`` on the first factor."""
    return tuple(np.vstack([fv, gv]) for fv, gv in zip(f, g))


def section(proj: Mats, p: int) -> Mats:
    """A vertexwise right inverse of a surjection (not a morphism in general)."""
    out = []
    for m in proj:
        s = la.solve(m, np.eye(m.shape[0], dtype=np.int64), p)
        if s is None:
            raise ValueError("map is not surjective")
        out.append(s.reshape(m.shape[1], m.shape[0]))
    return tuple(out)


def pushout(a: MatrixRep, f: Mats, b: MatrixRep, g: Mats, c: MatrixRep) -> tuple[MatrixRep, Mats, Mats]:
    """Pushout of ``f: a -> b`` and ``g: a -> c`` with its maps from ``b`` and ``c``."""
    p = a.p
    s, ib, ic, _, _ = direct_sum(b, c)
    diff = tuple((la.matmul(ibv, fv, p) - la.matmul(icv, gv, p)) % p for fv, gv, ibv, icv in zip(f, g, ib, ic))
    q, proj = cokernel(s, diff)
    return q, compose(proj, ib, p), compose(proj, ic, p)


def compose(g: Mats, f: Mats, p: int) -> Mats:
    return tuple(la.matmul(gv, fv, p) for gv, fv in zip(g, f))


def _path(rep: MatrixRep, v: int, length: int) -> np.ndarray | None:
    """Matrix of ``x^length`` out of vertex ``v``; ``None`` when the path leaves the quiver."""
    m = np.eye(rep.dims[v], dtype=np.int64)
    u = v
    for _ in range(length):
        nxt = rep.spec.pred(u)
        if nxt is None:
            return None
        m = la.matmul(rep.maps[u], m, rep.p)
        u = nxt
    return m


def _kernel_power(rep: MatrixRep, v: int, length: int) -> np.ndarray:
    d = rep.dims[v]
    if length == 0 or d == 0:
        return np.zeros((d, 0), dtype=np.int64)
    m = _path(rep, v, length)
    if m is None or m.shape[0] == 0:
        return np.eye(d, dtype=np.int64)
    return la.nullspace(m, rep.p).reshape(d, -1)


def _succ(spec: CategorySpec, v: int) -> int | None:
    if isinstance(spec, LinearA):
        return v + 1 if v + 1 < spec.n else None
    return (v + 1) % spec.rank


def decompose(rep: MatrixRep) -> tuple[FormalObject, Mats]:
    """Iso class of ``rep`` and an isomorphism ``realize(obj) -> rep``."""
    spec, p = rep.spec, rep.p
    nv = len(rep.dims)
    total = rep.total_dim
    if total == 0:
        return FormalObject(), tuple(np.zeros((0, 0), dtype=np.int64) for _ in range(nv))
    longest = 0
    for l in range(1, total + 1):
        if all(rep.dims[v] == 0 or _kernel_power(rep, v, l).shape[1] == rep.dims[v] for v in range(nv)):
            longest = l
            break
    else:
        raise ValueError("representation is not nilpotent")
    kers = {(v, l): _kernel_power(rep, v, l) for v in range(nv) for l in range(longest + 2)}
    chains: list[tuple[Indec, list[np.ndarray]]] = []
    for l in range(longest, 0, -1):
        for v in range(nv):
            d = rep.dims[v]
            if d == 0:
                continue
            lower = [kers[(v, l - 1)]]
            w = _succ(spec, v)
            if w is not None and rep.dims[w]:
                lower.append(la.matmul(rep.maps[w], kers[(w, l + 1)], p))
            span = np.hstack(lower)
            r = la.rank(span, p)
            cand = kers[(v, l)]
            for j in range(cand.shape[1]):
                trial = np.hstack([span, cand[:, j : j + 1]])
                if la.rank(trial, p) == r + 1:
                    span, r = trial, r + 1
                    g = cand[:, j]
                    vecs = [g]
                    u = v
                    for _ in range(l - 1):
                        g = la.matmul(rep.maps[u], g.reshape(-1, 1), p).reshape(-1)
                        u = spec.pred(u)
                        vecs.append(g)
                    if isinstance(spec, LinearA):
                        top = v + 1
                        m = Indec(top - l + 1, l)
                    else:
                        m = spec.normalize(Indec(v - l + 1, l))
                    chains.append((m, vecs))
    chains.sort(key=lambda c: c[0].key())
    obj = FormalObject(tuple(m for m, _ in chains))
    pos, dims = layout(spec, obj)
    if dims != rep.dims:
        raise AssertionError("decomposition lost dimension")
    iso = [np.zeros((d, d), dtype=np.int64) for d in dims]
    for i, (m, vecs) in enumerate(chains):
        for j, vec in enumerate(vecs):
            vv, idx = pos[(i, m.top - j)]
            iso[vv][:, idx] = vec
    iso = tuple(iso)
    std = realize(spec, obj)
    for v in range(nv):
        if dims[v] and la.rank(iso[v], p) != dims[v]:
            raise AssertionError("Jordan chains are not a basis")
    if not is_morphism(std, rep, iso):
        raise AssertionError("Jordan basis does not intertwine")
    return obj, iso


def invert(iso: Mats, p: int) -> Mats:
    return tuple(la.inverse(m, p) if m.shape[0] else m for m in iso)


def sequence_from_matrices(
    spec: CategorySpec,
    sub: MatrixRep,
    middle: MatrixRep,
    quot: MatrixRep,
    inc: Mats,
    proj: Mats,
) -> ShortExactSequence:
    """Decompose all three terms and express both maps as basis-hom combinations."""
    p = spec.prime
    sobj, siso = decompose(sub)
    mobj, miso = decompose(middle)
    qobj, qiso = decompose(quot)
    inc_std = compose(invert(miso, p), compose(inc, siso, p), p)
    proj_std = compose(invert(qiso, p), compose(proj, miso, p), p)
    return ShortExactSequence(
        sobj,
        mobj,
        qobj,
        hom_from_matrices(spec, sobj, mobj, inc_std),
        hom_from_matrices(spec, mobj, qobj, proj_std),
    )


def std_rep(spec: CategorySpec, obj: FormalObject) -> MatrixRep:
    return realize(spec, obj)


def mats_of(f: HomElement) -> Mats:
    return realize_hom(f)

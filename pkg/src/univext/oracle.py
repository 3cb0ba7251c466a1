"""Matrix realizations over GF(p) and the ground-truth checks built on them.

Nothing here uses the combinatorial Hom/Ext formulas of :mod:`univext.category`:
Hom spaces are solved for as intertwiners, Ext^1 is the cokernel of the
standard two-term complex, and exactness is checked by ranks. The only shared
ingredient is the realization of a formal object as block-diagonal uniserials.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import linalg as la
from .category import (
    CategorySpec,
    FormalObject,
    HomElement,
    Indec,
    ShortExactSequence,
    as_object,
    basis_homs,
)


class StructuralError(ValueError):
    """Matrices whose shapes do not fit the objects they claim to connect."""


@dataclass(frozen=True, eq=False)
class MatrixRep:
    """A representation: a space per vertex and a matrix per arrow.

    ``maps[v]`` is the matrix of the arrow leaving vertex ``v`` (shape
    ``dims[pred(v)] x dims[v]``), or ``None`` when ``v`` has no outgoing arrow.
    """

    spec: CategorySpec
    dims: tuple[int, ...]
    maps: tuple[np.ndarray | None, ...]

    @property
    def p(self) -> int:
        return self.spec.prime

    def arrows(self):
        for v in range(len(self.dims)):
            u = self.spec.pred(v)
            if u is not None:
                yield v, u

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_nilpotent(self) -> bool:
        """The composite around every path of length ``total_dim`` vanishes."""
        for v in range(len(self.dims)):
            m = np.eye(self.dims[v], dtype=np.int64)
            u = v
            for _ in range(self.total_dim):
                nxt = self.spec.pred(u)
                if nxt is None or m.shape[0] == 0:
                    m = np.zeros((0, self.dims[v]), dtype=np.int64)
                    break
                m = la.matmul(self.maps[u], m, self.p)
                u = nxt
            if np.any(m):
                return False
        return True


def zero_rep(spec: CategorySpec) -> MatrixRep:
    nv = spec.num_vertices
    maps = tuple(
        None if spec.pred(v) is None else np.zeros((0, 0), dtype=np.int64) for v in range(nv)
    )
    return MatrixRep(spec, (0,) * nv, maps)


@lru_cache(maxsize=None)
def layout(spec: CategorySpec, obj: FormalObject):
    """Positions of basis vectors: ``pos[(summand, t)] = (vertex, index)``."""
    counts = [0] * spec.num_vertices
    pos = {}
    for i, m in enumerate(obj):
        for t in range(m.socle, m.top + 1):
            v = spec.vertex(t)
            pos[(i, t)] = (v, counts[v])
            counts[v] += 1
    return pos, tuple(counts)


@lru_cache(maxsize=None)
def _realize(spec: CategorySpec, obj: FormalObject) -> MatrixRep:
    pos, dims = layout(spec, obj)
    maps = []
    for v in range(spec.num_vertices):
        u = spec.pred(v)
        maps.append(None if u is None else np.zeros((dims[u], dims[v]), dtype=np.int64))
    for i, m in enumerate(obj):
        for t in range(m.socle + 1, m.top + 1):
            v, col = pos[(i, t)]
            u, row = pos[(i, t - 1)]
            maps[v][row, col] = 1
    for a in maps:
        if a is not None:
            a.setflags(write=False)
    return MatrixRep(spec, dims, tuple(maps))


def realize(spec: CategorySpec, x: Indec | FormalObject) -> MatrixRep:
    """Block-diagonal matrix representation of a formal object."""
    obj = as_object(x)
    for m in obj:
        spec.check(m)
    return _realize(spec, obj)


def realize_hom(f: HomElement) -> tuple[np.ndarray, ...]:
    spec = f.spec
    spos, sdims = layout(spec, f.source)
    tpos, tdims = layout(spec, f.target)
    mats = [np.zeros((tdims[v], sdims[v]), dtype=np.int64) for v in range(spec.num_vertices)]
    src, tgt = f.source.summands, f.target.summands
    for (j, i, k), c in f.entries:
        m, n = src[i], tgt[j]
        e = m.top - k + 1
        shift = e - n.socle
        for t in range(e, m.top + 1):
            v, col = spos[(i, t)]
            _, row = tpos[(j, t - shift)]
            mats[v][row, col] = (mats[v][row, col] + c) % spec.prime
    return tuple(mats)


def compose_mats(g: Sequence[np.ndarray], f: Sequence[np.ndarray], p: int) -> tuple[np.ndarray, ...]:
    return tuple(la.matmul(b, a, p) for a, b in zip(f, g))


def is_morphism(a: MatrixRep, b: MatrixRep, f: Sequence[np.ndarray]) -> bool:
    p = a.p
    for v, u in a.arrows():
        lhs = la.matmul(f[u], a.maps[v], p)
        rhs = la.matmul(b.maps[v], f[v], p)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def _delta(a: MatrixRep, b: MatrixRep) -> tuple[np.ndarray, list[int]]:
    """Matrix of f -> (f_u A_alpha - B_alpha f_v) on row-major flattened blocks."""
    p = a.p
    nv = len(a.dims)
    col_off = [0]
    for v in range(nv):
        col_off.append(col_off[-1] + b.dims[v] * a.dims[v])
    arrows = list(a.arrows())
    row_sizes = [b.dims[u] * a.dims[v] for v, u in arrows]
    d = np.zeros((sum(row_sizes), col_off[-1]), dtype=np.int64)
    r0 = 0
    for (v, u), size in zip(arrows, row_sizes):
        if size:
            # vec(f_u A) = (I ⊗ A^T) vec(f_u), vec(B f_v) = (B ⊗ I) vec(f_v)
            if b.dims[u] * a.dims[u]:
                d[r0 : r0 + size, col_off[u] : col_off[u + 1]] += np.kron(
                    np.eye(b.dims[u], dtype=np.int64), a.maps[v].T
                )
            if b.dims[v] * a.dims[v]:
                d[r0 : r0 + size, col_off[v] : col_off[v + 1]] -= np.kron(
                    b.maps[v], np.eye(a.dims[v], dtype=np.int64)
                )
        r0 += size
    return d % p, col_off


def _unflatten(vec: np.ndarray, a: MatrixRep, b: MatrixRep, col_off) -> tuple[np.ndarray, ...]:
    return tuple(
        vec[col_off[v] : col_off[v + 1]].reshape(b.dims[v], a.dims[v]) for v in range(len(a.dims))
    )


def intertwiner_space(a: MatrixRep, b: MatrixRep) -> list[tuple[np.ndarray, ...]]:
    """Basis of Hom(a, b) as tuples of vertex matrices."""
    d, col_off = _delta(a, b)
    if d.shape[1] == 0:
        return []
    ker = la.nullspace(d, a.p)
    return [_unflatten(ker[:, j], a, b, col_off) for j in range(ker.shape[1])]


def intertwiner_dim(a: MatrixRep, b: MatrixRep) -> int:
    d, _ = _delta(a, b)
    return d.shape[1] - la.rank(d, a.p)


def ext_complex_dim(a: MatrixRep, b: MatrixRep) -> int:
    """dim Ext^1(a, b) as the cokernel of the two-term complex."""
    d, _ = _delta(a, b)
    return d.shape[0] - la.rank(d, a.p)


# -- exactness ----------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class MatrixSequence:
    sub: MatrixRep
    middle: MatrixRep
    quot: MatrixRep
    inclusion: tuple[np.ndarray, ...]
    projection: tuple[np.ndarray, ...]


def realize_sequence(seq: ShortExactSequence) -> MatrixSequence:
    spec = seq.spec
    return MatrixSequence(
        realize(spec, seq.sub),
        realize(spec, seq.middle),
        realize(spec, seq.quot),
        realize_hom(seq.inclusion),
        realize_hom(seq.projection),
    )


def certify_exact(seq: ShortExactSequence | MatrixSequence) -> Certificate:
    ms = realize_sequence(seq) if isinstance(seq, ShortExactSequence) else seq
    p = ms.middle.p
    for v in range(len(ms.middle.dims)):
        ds, dm, dq = ms.sub.dims[v], ms.middle.dims[v], ms.quot.dims[v]
        if ms.inclusion[v].shape != (dm, ds) or ms.projection[v].shape != (dq, dm):
            raise StructuralError(f"vertex {v}: map shapes do not match the objects")
        if dm != ds + dq:
            raise StructuralError(f"vertex {v}: dim middle {dm} != {ds} + {dq}")
    if not is_morphism(ms.sub, ms.middle, ms.inclusion):
        return Certificate(False, "inclusion is not a morphism")
    if not is_morphism(ms.middle, ms.quot, ms.projection):
        return Certificate(False, "projection is not a morphism")
    for v in range(len(ms.middle.dims)):
        if np.any(la.matmul(ms.projection[v], ms.inclusion[v], p)):
            return Certificate(False, f"vertex {v}: projection o inclusion != 0")
        if la.rank(ms.inclusion[v], p) != ms.sub.dims[v]:
            return Certificate(False, f"vertex {v}: inclusion not injective")
        if la.rank(ms.projection[v], p) != ms.quot.dims[v]:
            return Certificate(False, f"vertex {v}: projection not surjective")
    # injective + surjective + zero composite + dimension count => image = kernel
    return Certificate(True, "exact")


# -- extension classes -----------------------------------------------------------


def extension_cocycle(ms: MatrixSequence) -> np.ndarray:
    """Cocycle of ``sub >-> middle ->> quot`` in the arrow term of the complex for (quot, sub)."""
    p = ms.middle.p
    nv = len(ms.middle.dims)
    sections = []
    for v in range(nv):
        s = la.solve(ms.projection[v], np.eye(ms.quot.dims[v], dtype=np.int64), p)
        if s is None:
            raise StructuralError(f"vertex {v}: projection not surjective")
        sections.append(s.reshape(ms.middle.dims[v], ms.quot.dims[v]))
    parts = []
    for v, u in ms.middle.arrows():
        c = (la.matmul(ms.middle.maps[v], sections[v], p) - la.matmul(sections[u], ms.quot.maps[v], p)) % p
        y = la.solve(ms.inclusion[u], c, p)
        if y is None:
            raise StructuralError("cocycle does not land in the sub")
        parts.append(y.reshape(ms.sub.dims[u], ms.quot.dims[v]).reshape(-1))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def pushforward_cocycle(cocycle: np.ndarray, sub: MatrixRep, quot: MatrixRep, phi, target: MatrixRep) -> np.ndarray:
    """Class of the pushout along ``phi: sub -> target``."""
    p = sub.p
    parts = []
    off = 0
    for v, u in quot.arrows():
        size = sub.dims[u] * quot.dims[v]
        y = cocycle[off : off + size].reshape(sub.dims[u], quot.dims[v])
        off += size
        parts.append(la.matmul(phi[u], y, p).reshape(-1))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def class_rank(quot: MatrixRep, sub: MatrixRep, cocycles: Iterable[np.ndarray]) -> int:
    """Dimension of the span of the given classes in Ext^1(quot, sub)."""
    d, _ = _delta(quot, sub)
    cols = [np.asarray(c).reshape(-1, 1) for c in cocycles]
    if not cols:
        return 0
    stacked = np.hstack([d] + cols) if d.shape[1] else np.hstack(cols)
    return la.rank(stacked, quot.p) - la.rank(d, quot.p)


def same_class(quot: MatrixRep, sub: MatrixRep, c1: np.ndarray, c2: np.ndarray) -> bool:
    return class_rank(quot, sub, [(c1 - c2) % quot.p]) == 0


# -- factoring --------------------------------------------------------------------


def _flatten(mats: Sequence[np.ndarray]) -> np.ndarray:
    return np.concatenate([m.reshape(-1) for m in mats]) if mats else np.zeros(0, dtype=np.int64)


@lru_cache(maxsize=None)
def _hom_space(spec: CategorySpec, x: FormalObject, y: FormalObject) -> tuple:
    basis = tuple(intertwiner_space(realize(spec, x), realize(spec, y)))
    for mats in basis:
        for m in mats:
            m.setflags(write=False)
    return basis


def hom_space(spec: CategorySpec, x, y) -> tuple:
    """Cached intertwiner basis between realized formal objects."""
    return _hom_space(spec, as_object(x), as_object(y))


def factoring_dim(spec: CategorySpec, x, y, through: Iterable[Indec]) -> int:
    """Dimension of the maps ``x -> y`` factoring through ``add(through)``."""
    vecs = []
    for t in through:
        into = hom_space(spec, x, t)
        if not into:
            continue
        out = hom_space(spec, t, y)
        for b in out:
            for a in into:
                vecs.append(_flatten(compose_mats(b, a, spec.prime)))
    if not vecs:
        return 0
    return la.rank(np.stack(vecs, axis=1), spec.prime)


# -- conversion back to basis-hom coordinates -------------------------------------


@lru_cache(maxsize=None)
def _basis_matrix(spec: CategorySpec, source: FormalObject, target: FormalObject):
    keys = []
    cols = []
    for i, m in enumerate(source):
        for j, n in enumerate(target):
            for bh in basis_homs(spec, m, n):
                key = (j, i, bh.image_length)
                keys.append(key)
                cols.append(_flatten(realize_hom(HomElement.basis(spec, source, target, *key))))
    if not cols:
        return keys, None
    return keys, np.stack(cols, axis=1)


def hom_from_matrices(spec: CategorySpec, source: FormalObject, target: FormalObject, mats) -> HomElement:
    """Express a morphism of realized objects in basis-hom coordinates."""
    keys, basis = _basis_matrix(spec, source, target)
    vec = _flatten([np.asarray(m, dtype=np.int64) for m in mats]) % spec.prime
    if basis is None:
        if np.any(vec):
            raise StructuralError("nonzero matrices for an empty Hom space")
        return HomElement.zero(spec, source, target)
    coeffs = la.solve(basis, vec, spec.prime)
    if coeffs is None:
        raise StructuralError("matrices are not a morphism between the realized objects")
    return HomElement.build(spec, source, target, {k: int(c) for k, c in zip(keys, coeffs)})

"""ASCII Auslander-Reiten quivers with membership marks and region overlays.

Nodes sit at horizontal position ``socle + top`` (half units), one row per
length, longest at the top. Tubes are drawn on the strip ``0 .. rank`` with the
two boundary columns identified.
"""
from __future__ import annotations

from .category import Indec, LinearA
from .equivalence import perp_ext, script_e
from .torsion import Membership, TorsionPair, indecomposables, membership

UNIT = 3


def mark(pair: TorsionPair, m: Indec) -> str:
    kind = membership(pair, m)
    if kind is Membership.TORSION:
        return "#"
    if kind is Membership.FREE:
        return "*"
    return "o" if isinstance(pair.spec, LinearA) else "x"


def _positions(pair: TorsionPair, m: Indec) -> list[int]:
    spec = pair.spec
    if isinstance(spec, LinearA):
        return [m.socle + m.top - 2]
    r = spec.rank
    c = (m.socle + m.top) % (2 * r)
    return [c, 2 * r] if c == 0 else [c]


def _grid(pair: TorsionPair, cap: int | None, show) -> list[str]:
    spec = pair.spec
    objs = indecomposables(pair, cap)
    longest = max(m.length for m in objs)
    width = (2 * spec.n - 2 if isinstance(spec, LinearA) else 2 * spec.rank) * UNIT + 1
    lines = []
    for length in range(longest, 0, -1):
        row = [" "] * width
        for m in objs:
            if m.length != length:
                continue
            for pos in _positions(pair, m):
                row[pos * UNIT] = show(m)
        lines.append(f"{length:>3} | " + "".join(row).rstrip())
    axis = [" "] * width
    if isinstance(spec, LinearA):
        labels = [(2 * (v - 1), str(v)) for v in range(1, spec.n + 1)]
    else:
        labels = [(2 * v, str(v)) for v in range(spec.rank + 1)]
    for pos, text in labels:
        for k, ch in enumerate(text):
            axis[pos * UNIT + k] = ch
    lines.append("    +-" + "-" * width)
    lines.append("      " + "".join(axis).rstrip())
    return lines


def regions(pair: TorsionPair, cap: int | None = None) -> dict[str, list[Indec]]:
    """The two overlay regions, recomputed from the equivalence slices."""
    if not isinstance(pair.spec, LinearA) and cap is None:
        cap = pair.spec.length_cap
    left = [m for m in perp_ext(pair, cap) if membership(pair, m) is not Membership.TORSION]
    return {
        "perp(T) minus T": sorted(left, key=Indec.key),
        "E": sorted(script_e(pair, cap), key=Indec.key),
    }


def render(pair: TorsionPair, cap: int | None = None, title: str | None = None) -> str:
    """Membership picture followed by the perp(T)-minus-T and E overlays."""
    spec = pair.spec
    if not isinstance(spec, LinearA) and cap is None:
        cap = spec.length_cap
    out = [title or str(pair)]
    legend = "# torsion, * torsion-free, " + ("o neither" if isinstance(spec, LinearA) else "x neither")
    out.append(f"marks: {legend}")
    if not isinstance(spec, LinearA):
        out.append(f"columns 0 and {spec.rank} are identified; lengths up to {cap}")
    out.append("")
    out += _grid(pair, cap, lambda m: mark(pair, m))
    for heading, members in regions(pair, cap).items():
        region = set(members)
        members = ", ".join(str(m) for m in members)
        out += ["", f"{heading}: {{{members}}}"]
        out += _grid(pair, cap, lambda m: mark(pair, m) if m in region else ".")
    return "\n".join(out) + "\n"

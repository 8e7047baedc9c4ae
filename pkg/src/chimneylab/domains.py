"""Rectilinear truncations of chimney domains with marked boundary arcs.

A chimney domain has a bounded lower region (quadrant or strip) with
infinitely many vertical half-strip chimneys attached along y = 0.  For the
PDE solver the domain is truncated: chimneys are cut at height H_top, the
lower region at depth `depth` and (for the one-sided quadrant) at Re z =
R_out, and only chimneys n = 0..n_max are kept.  The result is a simple
axis-aligned polygon whose boundary edges carry structured tags, later marked
Dirichlet0 / Dirichlet1 / Neumann to pose a quadrilateral modulus problem.

Families are keyed "1L", "1R", "2L", ... : strip j's left family accumulates
at x = 3(j-1) and its right family at x = 3j.  The one-sided domain has the
single family "1L" accumulating at x = 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from chimneylab.sequences import ChimneySequence, Power, make_sequence

__all__ = [
    "OneSided",
    "TwoSided",
    "MultiK",
    "DomainSpec",
    "TruncationConfig",
    "AxisPolygonDomain",
    "build_domain",
    "vertical_compress",
    "mark_quadrilateral",
    "boundary_symbol_order",
    "conjugate_marks",
]


@dataclass(frozen=True)
class OneSided:
    """Quadrant domain with one chimney family from a chimney sequence."""

    seq: ChimneySequence


@dataclass(frozen=True)
class TwoSided:
    """Strip 0 < Re z < 3 with power-family chimneys on both walls."""

    p: float
    q: float
    a: float

    def __post_init__(self):
        Power(self.p, self.a)
        Power(self.q, self.a)

    def left_seq(self):
        return make_sequence(Power(self.p, self.a))

    def right_seq(self):
        return make_sequence(Power(self.q, self.a))


@dataclass(frozen=True)
class MultiK:
    """k two-sided strips side by side, joined by a channel along the bottom."""

    ps: tuple
    a: float

    def __post_init__(self):
        ps = tuple(float(p) for p in self.ps)
        object.__setattr__(self, "ps", ps)
        if len(ps) == 0:
            raise ValueError("need at least one strip")
        for p in ps:
            Power(p, self.a)

    @property
    def k(self):
        return len(self.ps)

    def strip_seq(self, j):
        """Chimney sequence of strip j (1-based); both walls use the same p."""
        return make_sequence(Power(self.ps[j - 1], self.a))


DomainSpec = OneSided | TwoSided | MultiK


@dataclass(frozen=True)
class TruncationConfig:
    n_max: int = 1
    H_top: float = 4.0
    depth: float = 4.0
    R_out: float = 4.0

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("keep at least chimneys n = 0 and 1 (n_max >= 1)")
        if self.H_top < 1 or self.depth < 1:
            raise ValueError("cuts must satisfy H_top >= 1 and depth >= 1")
        if self.R_out <= 1:
            raise ValueError("outer cut must exceed b_0 = 1")


_MIN_SCALE = 1e-8


@dataclass(frozen=True)
class AxisPolygonDomain:
    """Simple rectilinear polygon with tagged, optionally marked edges.

    Edge i runs from vertices[i] to vertices[(i+1) % len].  marks is None for
    an unmarked domain, else one of "dirichlet0"/"dirichlet1"/"neumann" per
    edge.
    """

    vertices: tuple
    tags: tuple
    marks: tuple = None

    def __post_init__(self):
        v = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", v)
        if len(v) != len(self.tags):
            raise ValueError("one tag per edge required")
        for i in range(len(v)):
            (x0, y0), (x1, y1) = v[i], v[(i + 1) % len(v)]
            if x0 != x1 and y0 != y1:
                raise ValueError(f"edge {i} is not axis-aligned")
            if x0 == x1 and y0 == y1:
                raise ValueError(f"edge {i} is degenerate")
        if self.marks is not None and len(self.marks) != len(v):
            raise ValueError("one mark per edge required")

    def edges(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def boundary_length(self):
        return sum(abs(b[0] - a[0]) + abs(b[1] - a[1]) for a, b in self.edges())

    def has_slits(self):
        """True when two boundary edges overlap (zero-width internal walls)."""
        seen = set()
        for a, b in self.edges():
            key = (min(a, b), max(a, b))
            if key in seen:
                return True
            seen.add(key)
        return False

    def to_dict(self):
        d = {
            "vertices": [list(v) for v in self.vertices],
            "tags": [list(map(str, t)) for t in self.tags],
        }
        if self.marks is not None:
            d["marks"] = list(self.marks)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def debug_dump(self):
        """Stable line-oriented boundary walk for inspection and diffing."""
        lines = []
        for i, (a, b) in enumerate(self.edges()):
            tag = ":".join(str(t) for t in self.tags[i])
            mark = self.marks[i] if self.marks is not None else "-"
            lines.append(
                f"edge {i:3d}  ({a[0]:.12g},{a[1]:.12g}) -> ({b[0]:.12g},{b[1]:.12g})"
                f"  [{tag}]  {mark}"
            )
        return "\n".join(lines)


class _Walk:
    def __init__(self, start):
        self.verts = [start]
        self.tags = []

    def seg(self, pt, tag):
        self.verts.append(pt)
        self.tags.append(tag)

    def close(self, tag):
        # drop the duplicated start vertex; the polygon closes implicitly
        self.tags.append(tag)
        return AxisPolygonDomain(tuple(self.verts), tuple(self.tags))


def _family_values(seq, n_max):
    a = [math.exp(seq.log_a(n)) for n in range(n_max + 1)]
    b = [math.exp(seq.log_b(n)) for n in range(n_max + 1)]
    if a[n_max] < _MIN_SCALE:
        raise ValueError(
            f"a_{n_max} = {a[n_max]:.3g} is below the representable cell scale "
            f"{_MIN_SCALE}; reduce n_max"
        )
    return a, b


def _left_family(w, seq, trunc, fam, xoff):
    """Upper-boundary walk of a family accumulating at x = xoff from the right.

    Enters at (xoff + b_0, 0); exits at (xoff, 0).
    """
    a, b = _family_values(seq, trunc.n_max)
    H = trunc.H_top
    for n in range(trunc.n_max + 1):
        w.seg((xoff + b[n], H), ("wall", fam, "out", n))
        w.seg((xoff + a[n], H), ("top", fam, n))
        w.seg((xoff + a[n], 0.0), ("wall", fam, "in", n))
        nxt = b[n + 1] if n < trunc.n_max else 0.0
        w.seg((xoff + nxt, 0.0), ("floor", fam, n))


def _right_family(w, seq, trunc, fam, xacc):
    """Mirror family accumulating at x = xacc from the left.

    Enters at (xacc, 0); exits at (xacc - b_0, 0) = (xacc - 1, 0).
    """
    a, b = _family_values(seq, trunc.n_max)
    H = trunc.H_top
    for n in range(trunc.n_max, -1, -1):
        w.seg((xacc - a[n], 0.0), ("floor", fam, n))
        w.seg((xacc - a[n], H), ("wall", fam, "in", n))
        w.seg((xacc - b[n], H), ("top", fam, n))
        w.seg((xacc - b[n], 0.0), ("wall", fam, "out", n))


def build_domain(spec: DomainSpec, trunc: TruncationConfig) -> AxisPolygonDomain:
    """Truncate a chimney domain to a tagged rectilinear polygon (ccw)."""
    d, H, R = trunc.depth, trunc.H_top, trunc.R_out
    if isinstance(spec, OneSided):
        w = _Walk((0.0, -d))
        w.seg((R, -d), ("bottom", 1))
        w.seg((R, 0.0), ("outer_right",))
        w.seg((1.0, 0.0), ("quadrant_floor",))
        _left_family(w, spec.seq, trunc, "1L", 0.0)
        return w.close(("ray", "left"))
    if isinstance(spec, TwoSided):
        w = _Walk((0.0, -d))
        w.seg((3.0, -d), ("bottom", 1))
        w.seg((3.0, 0.0), ("ray", "right"))
        _right_family(w, spec.right_seq(), trunc, "1R", 3.0)
        w.seg((1.0, 0.0), ("floor", "mid", 1))
        _left_family(w, spec.left_seq(), trunc, "1L", 0.0)
        return w.close(("ray", "left"))
    if isinstance(spec, MultiK):
        k = spec.k
        w = _Walk((0.0, -d))
        for j in range(1, k + 1):
            w.seg((3.0 * j, -d), ("bottom", j))
            if j < k:
                w.seg((3.0 * j, -1.0), ("slit", "up", j))
                w.seg((3.0 * j, -d), ("slit", "down", j))
        w.seg((3.0 * k, 0.0), ("ray", "right"))
        for j in range(k, 0, -1):
            seq = spec.strip_seq(j)
            x0 = 3.0 * (j - 1)
            _right_family(w, seq, trunc, f"{j}R", x0 + 3.0)
            w.seg((x0 + 1.0, 0.0), ("floor", "mid", j))
            _left_family(w, seq, trunc, f"{j}L", x0)
        return w.close(("ray", "left"))
    raise TypeError("unknown domain spec")


def vertical_compress(domain: AxisPolygonDomain, eps: float) -> AxisPolygonDomain:
    """Apply (x, y) -> (x, eps*y) to the polygon; tags and marks survive."""
    if not 0 < eps <= 1:
        raise ValueError("compression factor must lie in (0, 1]")
    verts = tuple((x, eps * y) for x, y in domain.vertices)
    return AxisPolygonDomain(verts, domain.tags, domain.marks)


def _split_ray_edge(verts, tags, side, cuts):
    """Split the vertical ray edge tagged ("ray", side) at the given y values."""
    idx = next(i for i, t in enumerate(tags) if t[:2] == ("ray", side))
    n = len(verts)
    (x0, y0), (x1, y1) = verts[idx], verts[(idx + 1) % n]
    assert x0 == x1
    ys = sorted(set(cuts), reverse=(y0 > y1))
    for y in ys:
        if not min(y0, y1) < y < max(y0, y1):
            raise ValueError(f"cut at y={y} outside the ray extent")
    new_verts = list(verts[: idx + 1])
    new_tags = list(tags[:idx])
    prev = y0
    pieces = []
    for y in ys:
        pieces.append((prev, y))
        prev = y
    pieces.append((prev, y1))
    for (ya, yb) in pieces:
        new_tags.append(("ray", side, ya, yb))
        new_verts.append((x0, yb))
    new_verts.pop()  # last piece ends at the existing next vertex
    new_verts.extend(verts[idx + 1 :])
    new_tags.extend(tags[idx + 1 :])
    return tuple(new_verts), tuple(new_tags)


def mark_quadrilateral(domain, source="I0", target=("J0", 1.0)):
    """Mark Dirichlet1 / Dirichlet0 / Neumann arcs for a modulus problem.

    source "I0" puts Dirichlet1 on the whole upper boundary (chimney walls,
    tops at the cut, and floors); ("tail_from", n0) drops chimneys n < n0 and
    the floors outside them, shrinking the arc toward the accumulation point.

    target ("J0", eps) puts Dirichlet0 on the left ray {x_left} x
    [-depth, -eps]; ("J1", eps) uses the right ray (two-sided domains).  An
    optional third element h >= 1 represents a target sub-arc starting at
    depth h before compression; compression scales it, so the cut lands at
    -eps*h.  Everything else is Neumann, including the gap above the target.
    """
    if domain.marks is not None:
        raise ValueError("domain is already marked")
    kind = target[0]
    if kind == "J0":
        side = "left"
    elif kind == "J1":
        side = "right"
    else:
        raise ValueError("target must be ('J0', eps[, h]) or ('J1', eps[, h])")
    eps = float(target[1])
    h = float(target[2]) if len(target) > 2 else 1.0
    if eps <= 0 or h <= 0:
        raise ValueError("target offset must be positive")
    cut = eps * h

    verts, tags = _split_ray_edge(domain.vertices, domain.tags, side, [-cut])

    if source == "I0":
        n0 = 0
    elif isinstance(source, tuple) and source[0] == "tail_from":
        n0 = int(source[1])
    else:
        raise ValueError("source must be 'I0' or ('tail_from', n0)")

    marks = []
    for t in tags:
        kind_t = t[0]
        if kind_t in ("wall", "top"):
            n = t[-1]
            marks.append("dirichlet1" if n >= n0 else "neumann")
        elif kind_t == "floor":
            if t[1] == "mid":
                marks.append("dirichlet1" if n0 == 0 else "neumann")
            else:
                marks.append("dirichlet1" if t[2] >= n0 else "neumann")
        elif kind_t == "ray" and len(t) == 4 and t[1] == side:
            ya, yb = t[2], t[3]
            lo, hi = min(ya, yb), max(ya, yb)
            marks.append("dirichlet0" if hi <= -cut + 1e-15 else "neumann")
        else:
            marks.append("neumann")
    if "dirichlet0" not in marks or "dirichlet1" not in marks:
        raise ValueError("marking produced an incomplete quadrilateral")
    return AxisPolygonDomain(verts, tags, tuple(marks))


def conjugate_marks(domain: AxisPolygonDomain) -> AxisPolygonDomain:
    """Swap the role of Dirichlet and Neumann arcs (conjugate quadrilateral).

    The boundary must consist of exactly four maximal arcs alternating
    Dirichlet/Neumann; the two Neumann arcs become the new Dirichlet pair.
    """
    if domain.marks is None:
        raise ValueError("domain is not marked")
    marks = list(domain.marks)
    n = len(marks)
    # rotate so a run boundary is at position 0
    start = next(i for i in range(n) if marks[i] != marks[i - 1])
    runs = []
    i = start
    while True:
        j = i
        while marks[(j + 1) % n] == marks[i % n] and (j + 1 - i) < n:
            j += 1
        runs.append((i % n, j % n, marks[i % n]))
        i = j + 1
        if i % n == start:
            break
    if len(runs) != 4:
        raise ValueError(f"need 4 maximal arcs for conjugation, got {len(runs)}")
    new = list(marks)
    neumann_runs = [r for r in runs if r[2] == "neumann"]
    dirichlet_runs = [r for r in runs if r[2] != "neumann"]
    if len(neumann_runs) != 2 or len(dirichlet_runs) != 2:
        raise ValueError("marks must alternate Dirichlet and Neumann arcs")
    for (i0, j0, _), val in zip(neumann_runs, ("dirichlet1", "dirichlet0")):
        idx = i0
        while True:
            new[idx] = val
            if idx == j0:
                break
            idx = (idx + 1) % n
    for (i0, j0, _) in dirichlet_runs:
        idx = i0
        while True:
            new[idx] = "neumann"
            if idx == j0:
                break
            idx = (idx + 1) % n
    return AxisPolygonDomain(domain.vertices, domain.tags, tuple(new))


def boundary_symbol_order(spec: DomainSpec, n_max: int):
    """Cyclic counterclockwise order of the prime-end symbols.

    One-sided: [beta_0, z_0, alpha_0, ..., alpha_{n_max}, -1, -i] where
    beta_0 is the prime end 1.  Two-sided: [1, right family inward-first,
    left family outward-first, -1, -i].  Multi-strip: the two-sided pattern
    per strip, joined by accumulation symbols xi_j and channel symbols
    zeta_j (bottom of strip j) and sigma_j (slit tips).
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")

    def left(fam):
        out = []
        for n in range(n_max + 1):
            out += [f"beta_{fam}{n}", f"z_{fam}{n}", f"alpha_{fam}{n}"]
        return out

    def right(fam):
        out = []
        for n in range(n_max, -1, -1):
            out += [f"alpha_{fam}{n}", f"z_{fam}{n}", f"beta_{fam}{n}"]
        return out

    if isinstance(spec, OneSided):
        syms = []
        for n in range(n_max + 1):
            syms += [f"beta_{n}", f"z_{n}", f"alpha_{n}"]
        return syms + ["-1", "-i"]
    if isinstance(spec, TwoSided):
        return ["1"] + right("1R") + left("1L") + ["-1", "-i"]
    if isinstance(spec, MultiK):
        k = spec.k
        syms = [f"xi_{k}"]
        for j in range(k, 0, -1):
            syms += right(f"{j}R") + left(f"{j}L") + [f"xi_{j-1}"]
        for j in range(1, k + 1):
            syms.append(f"zeta_{j}")
            if j < k:
                syms.append(f"sigma_{j}")
        return syms
    raise TypeError("unknown domain spec")

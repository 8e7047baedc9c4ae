"""Geodesic boxes, the Liouville measure, and measured laminations.

Geodesics of the hyperbolic disk are unordered pairs of boundary points.
Boundary points are either numeric angles or *symbols*: named prime ends of a
chimney domain (z_n, alpha_n, beta_n, -1, -i, xi_j, zeta_j) whose cyclic
order on the circle is known exactly from the boundary traversal, even though
their numeric positions are not.  All box computations only ever need the
cyclic order, so the Riemann map is never computed.

A measured lamination here is a finite list of weighted atoms plus a tail
rule: every chimney geodesic gamma_n^+/- beyond the listed range carries a
fixed uniform weight (2/3 in the canonical normalization).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from chimneylab import sequences as seqmod
from chimneylab.domains import (
    DomainSpec,
    MultiK,
    OneSided,
    TwoSided,
    boundary_symbol_order,
)

__all__ = [
    "CirclePoint",
    "SymbolOrder",
    "GeodesicBox",
    "MeasuredLamination",
    "FreeAxis",
    "LimitSetDescriptor",
    "liouville_box",
    "lamination_mass",
    "build_limit_lamination",
    "limit_set",
    "mod_liouville_residual",
    "chords_cross",
    "projectively_equal",
    "lamination_to_dict",
    "limitset_to_dict",
]


@dataclass(frozen=True)
class CirclePoint:
    kind: str  # "angle" or "symbol"
    value: object

    @staticmethod
    def angle(theta):
        return CirclePoint("angle", float(theta) % (2.0 * math.pi))

    @staticmethod
    def symbol(label):
        return CirclePoint("symbol", str(label))

    def __post_init__(self):
        if self.kind not in ("angle", "symbol"):
            raise ValueError("kind must be 'angle' or 'symbol'")


def _as_point(x) -> CirclePoint:
    if isinstance(x, CirclePoint):
        return x
    if isinstance(x, str):
        return CirclePoint.symbol(x)
    if isinstance(x, complex):
        return CirclePoint.angle(cmath.phase(x))
    return CirclePoint.angle(x)


class SymbolOrder:
    """Cyclic order of symbolic prime ends, optionally with a numeric embedding.

    The embedding (label -> angle) is only needed for boxes that mix a
    symbolic arc with a numeric arc; without it such boxes are rejected.
    """

    def __init__(self, labels, embedding=None):
        self.labels = list(labels)
        self._pos = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._pos) != len(self.labels):
            raise ValueError("duplicate symbols in cyclic order")
        self.embedding = dict(embedding) if embedding else None

    def __len__(self):
        return len(self.labels)

    def position(self, label):
        try:
            return self._pos[label]
        except KeyError:
            raise KeyError(f"symbol {label!r} not in this cyclic order") from None

    def __contains__(self, label):
        return label in self._pos


@dataclass(frozen=True)
class GeodesicBox:
    """Box of geodesics [I] x [J]: one endpoint in arc I, the other in arc J."""

    I: tuple  # (start, end) counterclockwise, endpoints inclusive
    J: tuple

    def __post_init__(self):
        I = (_as_point(self.I[0]), _as_point(self.I[1]))
        J = (_as_point(self.J[0]), _as_point(self.J[1]))
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "J", J)


def _angle_in_arc(theta, start, end):
    span = (end - start) % (2.0 * math.pi)
    off = (theta - start) % (2.0 * math.pi)
    return off <= span + 1e-15


def _point_coord(pt, order):
    if pt.kind == "symbol":
        if order is None:
            raise ValueError("symbolic point needs a cyclic order")
        return order.position(pt.value)
    return None


def _in_arc(pt, arc, order):
    """Inclusive membership of a circle point in a counterclockwise arc."""
    s, e = arc
    kinds = {pt.kind, s.kind, e.kind}
    if kinds == {"symbol"}:
        n = len(order)
        i, j, k = order.position(s.value), order.position(pt.value), order.position(e.value)
        return (j - i) % n <= (k - i) % n
    if kinds == {"angle"}:
        return _angle_in_arc(pt.value, s.value, e.value)
    # mixed: fall back to a numeric embedding when available
    if order is None or order.embedding is None:
        raise ValueError("mixed symbolic/numeric coordinates need an order embedding")

    def ang(p):
        if p.kind == "angle":
            return p.value
        try:
            return float(order.embedding[p.value])
        except KeyError:
            raise ValueError(f"embedding missing symbol {p.value!r}") from None

    return _angle_in_arc(ang(pt), ang(s), ang(e))


def _arcs_disjoint(I, J, order):
    return not (
        _in_arc(I[0], J, order)
        or _in_arc(I[1], J, order)
        or _in_arc(J[0], I, order)
        or _in_arc(J[1], I, order)
    )


@dataclass(frozen=True)
class MeasuredLamination:
    """Finite atoms plus an optional uniform tail on deep chimney geodesics.

    atoms: tuple of ((CirclePoint, CirclePoint), weight).  tail, when present,
    is a dict {"weight": w, "n_start": n} recording that every chimney
    geodesic with index >= n_start (not materialized as an atom) carries
    weight w.  order is the symbolic cyclic order the atoms live in, when
    they are symbolic.
    """

    atoms: tuple
    tail: dict = None
    order: SymbolOrder = field(default=None, compare=False)

    def __post_init__(self):
        norm = []
        for (u, v), w in self.atoms:
            w = float(w)
            if w < 0:
                raise ValueError("weights must be non-negative")
            norm.append(((_as_point(u), _as_point(v)), w))
        object.__setattr__(self, "atoms", tuple(norm))
        if self.order is not None:
            self._check_non_crossing()

    def _check_non_crossing(self):
        chords = [g for g, _ in self.atoms]
        for i in range(len(chords)):
            for j in range(i + 1, len(chords)):
                if chords_cross(chords[i], chords[j], self.order):
                    raise ValueError(f"atoms {i} and {j} cross; not a lamination")

    def chimney_weight(self):
        if self.tail is not None:
            return float(self.tail["weight"])
        raise ValueError("lamination has no tail rule")

    def normalized(self):
        """Rescale so the chimney (tail) weight is exactly 2/3."""
        factor = (2.0 / 3.0) / self.chimney_weight()
        atoms = tuple((g, w * factor) for g, w in self.atoms)
        tail = dict(self.tail, weight=2.0 / 3.0)
        return MeasuredLamination(atoms, tail, self.order)


def chords_cross(g1, g2, order):
    """True when the two geodesics interleave in the cyclic order.

    Shared endpoints never count as crossing.  Both chords must be purely
    symbolic (positions in `order`) or purely numeric.
    """
    a, b = (_as_point(p) for p in g1)
    c, d = (_as_point(p) for p in g2)
    pts = [a, b, c, d]
    if all(p.kind == "symbol" for p in pts):
        n = len(order)
        ia, ib = order.position(a.value), order.position(b.value)
        ic, id_ = order.position(c.value), order.position(d.value)
        if len({ia, ib, ic, id_}) < 4:
            return False
        span = (ib - ia) % n
        cin = 0 < (ic - ia) % n < span
        din = 0 < (id_ - ia) % n < span
        return cin != din
    if all(p.kind == "angle" for p in pts):
        ta, tb, tc, td = (p.value for p in pts)
        if min(abs(ta - tb), abs(tc - td)) < 1e-15:
            return False
        span = (tb - ta) % (2 * math.pi)
        cin = 0 < (tc - ta) % (2 * math.pi) < span
        din = 0 < (td - ta) % (2 * math.pi) < span
        return cin != din
    raise ValueError("mixed-coordinate chords are not comparable")


def liouville_box(a, b, c, d):
    """Liouville measure of the box [a,b] x [c,d]: log of a cross-ratio.

    The four points must be numeric (angles, complex on the unit circle, or
    angle CirclePoints) in strict counterclockwise order.
    """
    pts = [_as_point(x) for x in (a, b, c, d)]
    if any(p.kind != "angle" for p in pts):
        raise ValueError("liouville_box needs numeric circle points")
    th = [p.value for p in pts]
    gaps = [(th[(i + 1) % 4] - th[i]) % (2 * math.pi) for i in range(4)]
    if any(g <= 0 for g in gaps) or abs(sum(gaps) - 2 * math.pi) > 1e-9:
        raise ValueError("points must be distinct and in counterclockwise order")
    za, zb, zc, zd = (cmath.exp(1j * t) for t in th)
    cr = ((za - zc) * (zb - zd)) / ((za - zd) * (zb - zc))
    if abs(cr.imag) > 1e-9 * abs(cr) or cr.real <= 0:
        raise ValueError("degenerate cross-ratio")
    return math.log(cr.real)


def lamination_mass(lam: MeasuredLamination, box: GeodesicBox, order=None):
    """Total weight of atoms with one endpoint in I and the other in J."""
    order = order or lam.order
    if not _arcs_disjoint(box.I, box.J, order):
        raise ValueError("box arcs must be disjoint")
    total = 0.0
    for (u, v), w in lam.atoms:
        in_IJ = _in_arc(u, box.I, order) and _in_arc(v, box.J, order)
        in_JI = _in_arc(v, box.I, order) and _in_arc(u, box.J, order)
        if in_IJ or in_JI:
            total += w
    return total


def _axis_interval(spec: DomainSpec, j=None):
    if isinstance(spec, OneSided):
        sspec = spec.seq.spec
        if isinstance(sspec, seqmod.Explicit):
            n_hi = len(sspec.log_a) - 1
            if n_hi < 2:
                raise ValueError("explicit sequence too short for a window estimate")
            win = seqmod.exponent_limits(spec.seq, 1, n_hi)
            return (win.m_hat, win.M_hat)
        return seqmod.closed_form_limits(sspec)
    if isinstance(spec, TwoSided):
        p = spec.p if j == 0 else spec.q
        return seqmod.closed_form_limits(seqmod.Power(p, spec.a))
    if isinstance(spec, MultiK):
        return seqmod.closed_form_limits(seqmod.Power(spec.ps[j], spec.a))
    raise TypeError("unknown domain spec")


def _distinguished_geodesics(spec: DomainSpec):
    """Per free axis, the symbol pairs receiving the free weight."""
    if isinstance(spec, OneSided):
        return [(("-1", "-i"),)]
    if isinstance(spec, TwoSided):
        return [(("-1", "-i"),), (("1", "-i"),)]
    if isinstance(spec, MultiK):
        return [
            ((f"zeta_{j+1}", f"xi_{j}"), (f"zeta_{j+1}", f"xi_{j+1}"))
            for j in range(spec.k)
        ]
    raise TypeError("unknown domain spec")


def _chimney_atoms(spec: DomainSpec, n_max, weight):
    atoms = []
    if isinstance(spec, OneSided):
        fams = [""]
    elif isinstance(spec, TwoSided):
        fams = ["1L", "1R"]
    else:
        fams = [f"{j}{s}" for j in range(1, spec.k + 1) for s in ("L", "R")]
    for fam in fams:
        for n in range(n_max + 1):
            z, al, be = f"z_{fam}{n}", f"alpha_{fam}{n}", f"beta_{fam}{n}"
            atoms.append(((z, al), weight))
            atoms.append(((z, be), weight))
    return atoms


def build_limit_lamination(spec: DomainSpec, weights, n_max=8) -> MeasuredLamination:
    """Lamination sum(s_j * (free geodesics of axis j)) + (2/3) * chimney atoms.

    weights[j] must lie in axis j's interval [m_j, M_j].  Chimney atoms are
    materialized for n <= n_max; deeper ones are covered by the tail rule.
    """
    axes = _distinguished_geodesics(spec)
    weights = [float(w) for w in weights]
    if len(weights) != len(axes):
        raise ValueError(f"expected {len(axes)} weights, got {len(weights)}")
    atoms = []
    for j, (gs, w) in enumerate(zip(axes, weights)):
        lo, hi = _axis_interval(spec, j)
        if not lo - 1e-12 <= w <= hi + 1e-12:
            raise ValueError(f"weight {w} outside axis {j} interval [{lo}, {hi}]")
        for g in gs:
            atoms.append((g, w))
    atoms.extend(_chimney_atoms(spec, n_max, 2.0 / 3.0))
    order = SymbolOrder(boundary_symbol_order(spec, n_max))
    return MeasuredLamination(
        tuple(atoms), tail={"weight": 2.0 / 3.0, "n_start": n_max + 1}, order=order
    )


@dataclass(frozen=True)
class FreeAxis:
    geodesics: tuple  # symbol pairs carrying this axis' free weight
    interval: tuple  # (lo, hi) subset of [1, 2]

    def __post_init__(self):
        lo, hi = self.interval
        if not (1.0 <= lo <= hi <= 2.0):
            raise ValueError("axis interval must sit inside [1, 2]")


@dataclass(frozen=True)
class LimitSetDescriptor:
    """The set of projective limit laminations: a cube of free weights.

    base carries the common chimney support at weight 2/3; each free axis
    contributes one weight coordinate ranging over its interval.
    """

    base: MeasuredLamination
    free_axes: tuple
    advisory: dict = field(default_factory=dict)

    @property
    def dimension(self):
        return len(self.free_axes)


def _cf_partial_quotients(x, n=25):
    out = []
    for _ in range(n):
        a = math.floor(x)
        out.append(a)
        frac = x - a
        if frac < 1e-12:
            break
        x = 1.0 / frac
    return out

def _ratio_looks_rational(x):
    """Continued-fraction heuristic: a huge early partial quotient means the
    ratio is numerically rational."""
    fr = Fraction(x).limit_denominator(10**6)
    if fr.denominator <= 100 and abs(x - float(fr)) < 1e-12:
        return True
    return any(a > 1e8 for a in _cf_partial_quotients(x)[1:])


def limit_set(spec: DomainSpec, n_max=8) -> LimitSetDescriptor:
    """Limit-set descriptor: chimney base lamination plus free weight axes."""
    gs = _distinguished_geodesics(spec)
    axes = tuple(
        FreeAxis(tuple(g), tuple(_axis_interval(spec, j))) for j, g in enumerate(gs)
    )
    base_atoms = tuple(_chimney_atoms(spec, n_max, 2.0 / 3.0))
    order = SymbolOrder(boundary_symbol_order(spec, n_max))
    base = MeasuredLamination(
        base_atoms, tail={"weight": 2.0 / 3.0, "n_start": n_max + 1}, order=order
    )
    advisory = {}
    if isinstance(spec, TwoSided):
        advisory["log_ratio_rationally_independent"] = not _ratio_looks_rational(
            math.log(spec.p) / math.log(spec.q)
        )
    if isinstance(spec, MultiK):
        ok = True
        for i in range(spec.k):
            for j in range(i + 1, spec.k):
                r = math.log(spec.ps[i]) / math.log(spec.ps[j])
                if _ratio_looks_rational(r):
                    ok = False
        advisory["log_ratio_rationally_independent"] = ok
    return LimitSetDescriptor(base, axes, advisory)


def mod_liouville_residual(mod_value, L_value):
    """mod - L/pi - (2/pi) log 4: tends to 0 as the box degenerates."""
    return mod_value - L_value / math.pi - (2.0 / math.pi) * math.log(4.0)


def projectively_equal(l1: MeasuredLamination, l2: MeasuredLamination, tol=1e-12):
    """Equality of projective classes via the canonical 2/3 normalization."""
    a1 = sorted(_atom_key(g, w) for g, w in l1.normalized().atoms)
    a2 = sorted(_atom_key(g, w) for g, w in l2.normalized().atoms)
    if len(a1) != len(a2):
        return False
    return all(
        k1 == k2 and abs(w1 - w2) <= tol for (k1, w1), (k2, w2) in zip(a1, a2)
    )


def _endpoint_repr(p: CirclePoint):
    return p.value if p.kind == "symbol" else float(p.value)


def _atom_key(g, w):
    ends = sorted(str(_endpoint_repr(p)) for p in g)
    return (tuple(ends), w)


def lamination_to_dict(lam: MeasuredLamination):
    d = {
        "atoms": [
            [[_endpoint_repr(u), _endpoint_repr(v)], w] for (u, v), w in lam.atoms
        ]
    }
    if lam.tail is not None:
        d["tail"] = {"weight": lam.tail["weight"], "n_start": lam.tail["n_start"]}
    return d


def limitset_to_dict(ls: LimitSetDescriptor):
    return {
        "base": lamination_to_dict(ls.base),
        "free_axes": [
            {"geodesics": [list(g) for g in ax.geodesics], "interval": list(ax.interval)}
            for ax in ls.free_axes
        ],
        "advisory": ls.advisory,
        "dimension": ls.dimension,
    }

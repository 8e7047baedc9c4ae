"""Conformal modulus computations.

Closed-form moduli (rectangles, annuli), the relative-distance upper bound,
an elliptic-integral evaluation of disk quadrilaterals via the
arithmetic-geometric mean, a finite-element solver for rectilinear
quadrilaterals, and the analytic sandwich bounds for the normalized modulus
of the compressed chimney family.

The solver computes the modulus of the curve family connecting the two
Dirichlet arcs as the Dirichlet energy of the mixed-boundary harmonic
potential (1 on Dirichlet1, 0 on Dirichlet0, natural conditions on Neumann
arcs).  The discrete energy is a minimum over a subspace, so it bounds the
true modulus from above; combined with the rigorous analytic lower bounds
this gives a two-sided sandwich.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import cg

from chimneylab.domains import AxisPolygonDomain
from chimneylab.sequences import ChimneySequence, log_products

__all__ = [
    "MeshConfig",
    "ModulusResult",
    "SandwichBound",
    "MeshBudgetError",
    "SolverError",
    "rect_modulus",
    "annulus_modulus",
    "reldist_upper_bound",
    "disk_quad_modulus",
    "solve_modulus",
    "normalized_M",
    "sandwich_bounds",
    "subfamily_upper_bounds",
]


class MeshBudgetError(RuntimeError):
    """The requested refinement exceeds the cell budget."""


class SolverError(RuntimeError):
    """The linear solver failed to reach the requested tolerance."""


def default_max_cells():
    return int(os.environ.get("CHIMNEYLAB_MAX_CELLS", 400_000))


@dataclass(frozen=True)
class MeshConfig:
    base_h: float = 0.12
    grading: float = 1.15
    max_cells: int = None
    cg_tol: float = 1e-10
    refinement_levels: int = 2

    def __post_init__(self):
        if self.max_cells is None:
            object.__setattr__(self, "max_cells", default_max_cells())
        if self.base_h <= 0 or self.grading < 1:
            raise ValueError("need base_h > 0 and grading >= 1")
        if self.refinement_levels < 2:
            raise ValueError("need at least two levels for the error estimate")


@dataclass(frozen=True)
class ModulusResult:
    value: float
    energy: float
    error_est: float
    cells: int

    def to_dict(self):
        return {
            "value": self.value,
            "energy": self.energy,
            "error_est": self.error_est,
            "cells": self.cells,
        }


def rect_modulus(l, w):
    """Modulus of curves joining the two sides of length w across distance l."""
    if l <= 0 or w <= 0:
        raise ValueError("need positive side lengths")
    return w / l


def annulus_modulus(r1, r2, kind="separating"):
    if not 0 < r1 < r2:
        raise ValueError("need 0 < r1 < r2")
    sep = math.log(r2 / r1) / (2.0 * math.pi)
    if kind == "separating":
        return sep
    if kind == "connecting":
        return 1.0 / sep
    raise ValueError("kind must be 'separating' or 'connecting'")


def reldist_upper_bound(delta):
    """Upper bound pi (1 + 1/(2 delta))^2 on the modulus of a connecting
    family in terms of the relative distance of the two continua."""
    if delta <= 0:
        raise ValueError("relative distance must be positive")
    return math.pi * (1.0 + 1.0 / (2.0 * delta)) ** 2


def _agm(a, b):
    for _ in range(200):
        if abs(a - b) <= 1e-16 * abs(a):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def _ellipk(k):
    """Complete elliptic integral K(k) by the arithmetic-geometric mean."""
    if not 0 <= k < 1:
        raise ValueError("modulus k must lie in [0, 1)")
    return math.pi / (2.0 * _agm(1.0, math.sqrt(1.0 - k * k)))


def disk_quad_modulus(a, b, c, d):
    """Modulus of the family connecting arc [a,b] to arc [c,d] in the disk.

    Reduces to the elliptic-integral ratio K'(k)/(2K(k)) where k solves
    (1+k)^2/(4k) = lambda and lambda is the (real, > 1) cross-ratio of the
    quadruple; this is the classical Grötzsch-style evaluation used as an
    independent oracle for the modulus-Liouville relation.
    """
    from chimneylab.laminations import liouville_box

    lam = math.exp(liouville_box(a, b, c, d))
    if lam <= 1.0:
        raise ValueError("degenerate quadruple")
    k = (2.0 * lam - 1.0) - 2.0 * math.sqrt(lam * (lam - 1.0))
    k = min(max(k, 0.0), 1.0 - 1e-16)
    kp = math.sqrt(max(1.0 - k * k, 0.0))
    return _ellipk(kp) / (2.0 * _ellipk(k))


# ----------------------------------------------------------------------------
# PDE solver on graded tensor meshes
# ----------------------------------------------------------------------------

_KX = np.array(
    [[2, -2, -1, 1], [-2, 2, 1, -1], [-1, 1, 2, -2], [1, -1, -2, 2]], dtype=float
)
_KY = np.array(
    [[2, 1, -1, -2], [1, 2, -2, -1], [-1, -2, 2, 1], [-2, -1, 1, 2]], dtype=float
)


def _graded_sizes(L, h, r):
    """Cell sizes across a gap of length L: refined toward both ends with
    ratio r, interior size h, at least 3 cells."""
    if L <= 1.5 * h:
        n = 3
        return np.full(n, L / n)
    sizes = []
    s = h / 3.0
    acc = 0.0
    while acc < 0.5 * L:
        step = min(s, h)
        sizes.append(step)
        acc += step
        s *= r
    full = np.array(sizes + sizes[::-1])
    full *= L / full.sum()
    if len(full) < 3:
        full = np.full(3, L / 3.0)
    return full


def _axis_positions(criticals, h, r):
    crit = np.array(sorted(set(criticals)))
    scale = crit[-1] - crit[0]
    keep = [crit[0]]
    for v in crit[1:]:
        if v - keep[-1] > 1e-13 * max(scale, 1.0):
            keep.append(v)
    pos = [keep[0]]
    for u, v in zip(keep[:-1], keep[1:]):
        sizes = _graded_sizes(v - u, h, r)
        pts = u + np.cumsum(sizes)
        pts[-1] = v  # exact critical coordinate
        pos.extend(pts.tolist())
    return np.array(pos)


def _inside_mask(domain, cx, cy):
    """Ray-cast parity test for points against a rectilinear polygon."""
    inside = np.zeros(cx.shape, dtype=np.int64)
    for (x0, y0), (x1, y1) in domain.edges():
        if x0 != x1:
            continue  # horizontal edges never cross a horizontal ray generically
        ylo, yhi = min(y0, y1), max(y0, y1)
        inside += ((cy > ylo) & (cy < yhi) & (x0 > cx)).astype(np.int64)
    return (inside % 2) == 1


def _dirichlet_nodes(domain, X, Y):
    """Assign Dirichlet values to grid nodes lying on marked boundary edges."""
    val = np.full(X.shape, np.nan)
    order = {"dirichlet1": 1.0, "dirichlet0": 0.0}
    tol = 1e-12
    for pass_mark, pass_val in (("dirichlet1", 1.0), ("dirichlet0", 0.0)):
        for (a, b), mark in zip(domain.edges(), domain.marks):
            if mark != pass_mark:
                continue
            (x0, y0), (x1, y1) = a, b
            if x0 == x1:
                on = (np.abs(X - x0) <= tol) & (Y >= min(y0, y1) - tol) & (
                    Y <= max(y0, y1) + tol
                )
            else:
                on = (np.abs(Y - y0) <= tol) & (X >= min(x0, x1) - tol) & (
                    X <= max(x0, x1) + tol
                )
            val[on] = pass_val
    return val


def _validate_marks(domain):
    if domain.marks is None:
        raise ValueError("domain has no boundary marks")
    for want in ("dirichlet0", "dirichlet1"):
        marks = domain.marks
        n = len(marks)
        runs = sum(
            1 for i in range(n) if marks[i] == want and marks[i - 1] != want
        )
        if runs != 1:
            raise ValueError(f"need exactly one maximal {want} arc, found {runs}")


def _solve_level(domain, h, mesh):
    xs = _axis_positions([v[0] for v in domain.vertices], h, mesh.grading)
    ys = _axis_positions([v[1] for v in domain.vertices], h, mesh.grading)
    nx, ny = len(xs) - 1, len(ys) - 1

    dx, dy = np.diff(xs), np.diff(ys)
    cxg, cyg = np.meshgrid(xs[:-1] + dx / 2, ys[:-1] + dy / 2, indexing="ij")
    active = _inside_mask(domain, cxg, cyg)
    ncells = int(active.sum())
    if ncells == 0:
        raise SolverError("no interior cells; mesh too coarse for the geometry")
    if ncells > mesh.max_cells:
        raise MeshBudgetError(f"{ncells} cells exceed the budget {mesh.max_cells}")

    ic, jc = np.nonzero(active)
    hx, hy = dx[ic], dy[jc]
    nnx = nx + 1

    def nid(i, j):
        return j * nnx + i

    corners = np.stack(
        [nid(ic, jc), nid(ic + 1, jc), nid(ic + 1, jc + 1), nid(ic, jc + 1)], axis=1
    )
    kx = (hy / hx) / 6.0
    ky = (hx / hy) / 6.0
    data = kx[:, None, None] * _KX[None] + ky[:, None, None] * _KY[None]
    rows = np.repeat(corners, 4, axis=1).ravel()
    cols = np.tile(corners, (1, 4)).ravel()

    nglobal = (nx + 1) * (ny + 1)
    used = np.unique(corners)
    remap = -np.ones(nglobal, dtype=np.int64)
    remap[used] = np.arange(len(used))
    K = sparse.coo_matrix(
        (data.ravel(), (remap[rows], remap[cols])), shape=(len(used), len(used))
    ).tocsr()

    Xn, Yn = np.meshgrid(xs, ys, indexing="xy")  # node (i, j) at [j, i]
    dval_grid = _dirichlet_nodes(domain, Xn, Yn).ravel()  # flat index j*nnx+i
    dval = dval_grid[used]
    fixed = ~np.isnan(dval)
    if not fixed.any() or np.nanmin(dval) == np.nanmax(dval):
        raise ValueError("Dirichlet arcs not resolved by the mesh")

    u = np.where(fixed, np.nan_to_num(dval), 0.0)
    free = ~fixed
    A = K[free][:, free]
    rhs = -K[free][:, fixed] @ u[fixed]
    diag = A.diagonal()
    M = sparse.diags(1.0 / np.where(diag > 0, diag, 1.0))
    x, info = cg(A, rhs, rtol=mesh.cg_tol, atol=0.0, maxiter=50 * len(rhs) + 1000, M=M)
    if info != 0:
        raise SolverError(f"conjugate gradient failed to converge (info={info})")
    u[free] = x
    energy = float(u @ (K @ u))
    return energy, ncells


def solve_modulus(marked: AxisPolygonDomain, mesh: MeshConfig = None) -> ModulusResult:
    """Modulus of the family connecting the Dirichlet1 and Dirichlet0 arcs.

    Solves the mixed boundary-value problem on refinement_levels nested
    graded tensor meshes; the value comes from the finest level, the error
    estimate from the difference of the two finest.
    """
    mesh = mesh or MeshConfig()
    _validate_marks(marked)
    if marked.has_slits():
        raise NotImplementedError("slit (zero-width) boundaries are not supported")
    energies, cells = [], 0
    for lev in range(mesh.refinement_levels):
        h = mesh.base_h / (2.0**lev)
        e, cells = _solve_level(marked, h, mesh)
        energies.append(e)
    return ModulusResult(
        value=energies[-1],
        energy=energies[-1],
        error_est=abs(energies[-1] - energies[-2]),
        cells=cells,
    )


def normalized_M(mod_value, eps=None, ln_eps=None):
    """Normalized modulus M(eps) = mod * pi / log(1/eps)."""
    if ln_eps is None:
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        ln_eps = math.log(eps)
    if ln_eps >= 0:
        raise ValueError("log eps must be negative")
    return mod_value * math.pi / (-ln_eps)


# ----------------------------------------------------------------------------
# Analytic sandwich bounds
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SandwichBound:
    lower: float
    upper_leading: float
    regime: tuple  # ("inner", n) for eps in [b_{n+1}, a_n]; ("outer", n) for [a_n, b_n]
    o1_flag: bool = True  # the upper bound omits an unquantified o(1) term


def sandwich_bounds(seq: ChimneySequence, eps=None, ln_eps=None) -> SandwichBound:
    """Two-sided analytic bounds on the normalized modulus at compression eps.

    Bisection on the interlacing sequence locates the regime; in regime
    inner(n) the bound is 2 - log(B_n/A_n)/log(1/eps), in outer(n) it is
    1 + log(A_{n-1}/B_n)/log(1/eps).  The same expression serves as the
    rigorous lower bound and the leading term of the upper bound (o1_flag
    records the dropped o(1))."""
    if ln_eps is None:
        if eps is None or eps <= 0:
            raise ValueError("need eps > 0 or ln_eps")
        ln_eps = math.log(eps)
    if ln_eps > seq.log_b(1):
        raise ValueError("eps must be at most b_1")

    def at_least(x, bound):
        # tolerate last-ulp fuzz when eps sits exactly on a sequence value
        return x >= bound - 1e-12 * abs(bound)

    n = 1
    while True:
        try:
            lb_next = seq.log_b(n + 1)
        except (IndexError, OverflowError):
            raise ValueError("eps is deeper than the sequence resolves") from None
        if at_least(ln_eps, lb_next):
            break
        n += 1
        if n > 10**7:
            raise RuntimeError("regime search did not terminate")
    logA, logB = log_products(seq, n)
    if at_least(ln_eps, seq.log_a(n)):
        logA_prev = logA - seq.log_a(n)
        val = 1.0 + (logA_prev - logB) / (-ln_eps)
        regime = ("outer", n)
    else:
        val = 2.0 - (logB - logA) / (-ln_eps)
        regime = ("inner", n)
    return SandwichBound(lower=val, upper_leading=val, regime=regime)


def subfamily_upper_bounds(seq: ChimneySequence, k: int, eps: float, c: float):
    """Explicit upper bounds for the three curve subfamilies at scale eps.

    bound_k1 bounds curves entering chimney k from the target; bound_k2
    bounds curves crossing the gap (b_k, a_{k-1}); bound_02 = 2 bounds the
    residual family.  c is a ratio constant with max(b_{n+1}/a_n, a_n/b_n)
    <= c < 1 (take c_est from validate_hypotheses)."""
    if not 0 < c < 1:
        raise ValueError("need c in (0, 1)")
    if k < 1:
        raise ValueError("need k >= 1")
    ln_eps = math.log(eps)
    la_k, lb_k = seq.log_a(k), seq.log_b(k)
    la_prev = seq.log_a(k - 1)
    if ln_eps >= lb_k and ln_eps >= la_prev:
        raise ValueError("eps must satisfy eps < b_k (or < a_{k-1})")
    C1 = (2.0 / math.pi) * math.log(1.0 / c**2) + 2.0 * math.pi / math.log(1.0 / c)
    C2 = (
        12.0
        + 2.0 / c
        + 2.0 * math.pi / math.log(1.0 / c)
        + 2.0 * math.pi / math.log(1.0 / (1.0 - c))
        + (1.0 / math.pi) * (math.log(1.0 / c) + math.log(1.0 / (1.0 - c)))
    )
    bound_k1 = (1.0 / math.pi) * (lb_k - max(ln_eps, la_k)) + C2
    bound_k2 = (2.0 / math.pi) * (la_prev - max(ln_eps, lb_k)) + C1
    return bound_k1, bound_k2, 2.0

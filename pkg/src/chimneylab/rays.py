"""Epsilon sweeps, rotation orbits, Kronecker search, target subsequences,
and the divergence verdict for compression rays.

The normalized modulus M(eps) of the compressed quadrilateral oscillates
between the exponent limits m and M as eps -> 0.  Sweeps tabulate the
analytic sandwich bounds (and optionally the PDE modulus) along an eps grid;
the rotation/Kronecker tools realize prescribed limit values along
subsequences; verdict decides convergence (m = M) versus divergence (m < M)
and attaches the limit-set descriptor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chimneylab import sequences as seqmod
from chimneylab.domains import (
    DomainSpec,
    MultiK,
    OneSided,
    TruncationConfig,
    TwoSided,
    build_domain,
    mark_quadrilateral,
)
from chimneylab.laminations import (
    LimitSetDescriptor,
    MeasuredLamination,
    build_limit_lamination,
    limit_set,
    _axis_interval,
)
from chimneylab.modulus import (
    MeshConfig,
    normalized_M,
    sandwich_bounds,
    solve_modulus,
)

__all__ = [
    "SweepRow",
    "OrbitReport",
    "TargetPoint",
    "Verdict",
    "sweep",
    "sweep_to_csv",
    "SWEEP_CSV_HEADER",
    "rotation_orbit",
    "kronecker_search",
    "target_subsequence",
    "independence_check",
    "verdict",
    "resolve_eps_token",
]


@dataclass(frozen=True)
class SweepRow:
    epsilon: float  # may underflow to 0.0 for very deep grid points
    log_inv_eps: float  # exact: log(1/eps)
    lower: float
    upper_leading: float
    regime: tuple
    o1_flag: bool
    mod: float = None
    M_value: float = None
    error_est: float = None
    cells: int = None


SWEEP_CSV_HEADER = (
    "epsilon,log_inv_eps,mod,M_value,lower,upper_leading,o1_flag,error_est,cells"
)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".12g")


def sweep_to_csv(rows):
    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.epsilon,
                    r.log_inv_eps,
                    r.mod,
                    r.M_value,
                    r.lower,
                    r.upper_leading,
                    r.o1_flag,
                    r.error_est,
                    r.cells,
                )
            )
        )
    return "\n".join(lines) + "\n"


def resolve_eps_token(seq, token):
    """Resolve 'b1'/'a2'-style grid tokens to ln eps through the sequence."""
    if isinstance(token, str):
        kind, n = token[0], int(token[1:])
        if kind == "a":
            return seq.log_a(n)
        if kind == "b":
            return seq.log_b(n)
        raise ValueError(f"bad grid token {token!r}")
    v = float(token)
    if not 0 < v < 1:
        raise ValueError("numeric eps must lie in (0, 1)")
    return math.log(v)


def _sweep_seq(spec, target):
    if isinstance(spec, OneSided):
        return spec.seq
    if isinstance(spec, TwoSided):
        return spec.right_seq() if target == "J1" else spec.left_seq()
    raise ValueError("sweeps support OneSided and TwoSided domains")


def sweep(
    spec: DomainSpec,
    eps_grid,
    mode="analytic",
    trunc: TruncationConfig = None,
    mesh: MeshConfig = None,
    target="J0",
):
    """Tabulate the normalized modulus bounds along a decreasing eps grid.

    Grid entries are floats or symbolic tokens ("b1", "a1", ...) resolved
    through the sequence.  mode "pde" additionally marks and solves the
    truncated quadrilateral at each eps and reports the normalized value.
    """
    seq = _sweep_seq(spec, target)
    ln_grid = [resolve_eps_token(seq, t) for t in eps_grid]
    if len(ln_grid) == 0:
        raise ValueError("empty eps grid")
    if any(b >= a for a, b in zip(ln_grid[:-1], ln_grid[1:])):
        raise ValueError("eps grid must be strictly decreasing")
    if mode not in ("analytic", "pde"):
        raise ValueError("mode must be 'analytic' or 'pde'")
    domain = None
    if mode == "pde":
        trunc = trunc or TruncationConfig()
        mesh = mesh or MeshConfig()
        domain = build_domain(spec, trunc)
    rows = []
    for ln_eps in ln_grid:
        sb = sandwich_bounds(seq, ln_eps=ln_eps)
        row = dict(
            epsilon=math.exp(ln_eps),
            log_inv_eps=-ln_eps,
            lower=sb.lower,
            upper_leading=sb.upper_leading,
            regime=sb.regime,
            o1_flag=sb.o1_flag,
        )
        if mode == "pde":
            eps = math.exp(ln_eps)
            if eps <= 0:
                raise ValueError("pde mode cannot resolve eps below float range")
            marked = mark_quadrilateral(domain, "I0", (target, eps))
            res = solve_modulus(marked, mesh)
            row.update(
                mod=res.value,
                M_value=normalized_M(res.value, ln_eps=ln_eps),
                error_est=res.error_est,
                cells=res.cells,
            )
        rows.append(SweepRow(**row))
    return rows


@dataclass(frozen=True)
class OrbitReport:
    theta: float
    sigma: float
    points: tuple
    max_gap: float

    def to_dict(self):
        return {
            "theta": self.theta,
            "sigma": self.sigma,
            "points": list(self.points),
            "max_gap": self.max_gap,
        }


def rotation_orbit(theta, sigma, N) -> OrbitReport:
    """First N points of the circle rotation orbit {theta n + sigma} mod 1."""
    if N < 1:
        raise ValueError("need N >= 1")
    pts = (theta * np.arange(N, dtype=float) + sigma) % 1.0
    uniq = np.unique(pts)
    if len(uniq) == 1:
        gap = 1.0
    else:
        gaps = np.diff(uniq)
        gap = float(max(gaps.max(), 1.0 - (uniq[-1] - uniq[0])))
    return OrbitReport(float(theta), float(sigma), tuple(pts.tolist()), gap)


def _circ_dist(x, y):
    d = np.abs(x - y) % 1.0
    return np.minimum(d, 1.0 - d)


def kronecker_search(thetas, sigmas, targets, tol, n_max, chunk=200_000):
    """Smallest n in [1, n_max] with {theta_j n + sigma_j} within tol of
    targets_j (circularly) for every j, or None."""
    thetas = np.asarray(thetas, dtype=float)
    sigmas = np.asarray(sigmas, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if not (len(thetas) == len(sigmas) == len(targets) >= 1):
        raise ValueError("thetas, sigmas, targets must have equal length >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    for lo in range(1, int(n_max) + 1, chunk):
        ns = np.arange(lo, min(lo + chunk, int(n_max) + 1), dtype=float)
        ok = np.ones(len(ns), dtype=bool)
        for th, sg, tg in zip(thetas, sigmas, targets):
            ok &= _circ_dist((th * ns + sg) % 1.0, tg) < tol
            if not ok.any():
                break
        hits = np.nonzero(ok)[0]
        if len(hits):
            return int(ns[hits[0]])
    return None


@dataclass(frozen=True)
class TargetPoint:
    n: int
    ln_eps: float  # -inf once the true value underflows double precision
    log_neg_ln_eps: float  # always finite: log(-ln eps)
    beta_n: float
    predicted: tuple

    def to_dict(self):
        return {
            "n": self.n,
            "ln_eps": self.ln_eps,
            "log_neg_ln_eps": self.log_neg_ln_eps,
            "beta_n": self.beta_n,
            "predicted": list(self.predicted),
        }


def target_subsequence(p, q, s, t, K, a=0.5, n_cap=5_000_000):
    """Compression subsequence realizing the prescribed limit pair (s, t).

    In the two-sided domain with families p (left) and q (right), take
    eps_n = b_n^alpha along the left family with alpha = invert_phi(p, s);
    the left normalized modulus is then constantly Phi_p(alpha) = s, while
    the right one at index n equals Phi_q(q^(2 beta_n)) with
    beta_n = {theta n + sigma}, theta = log_q p.  Kronecker-style selection
    with the shrinking tolerance schedule tol_k = 2^(-k) picks indices where
    beta_n -> beta, the solution of Phi_q(q^(2 beta)) = t."""
    m_p = 1 + 1 / (p + 1)
    M_p = 2 - 1 / (p + 1)
    m_q = 1 + 1 / (q + 1)
    M_q = 2 - 1 / (q + 1)
    if not (m_p - 1e-12 <= s <= M_p + 1e-12):
        raise ValueError(f"s must lie in [{m_p}, {M_p}]")
    if not (m_q - 1e-12 <= t <= M_q + 1e-12):
        raise ValueError(f"t must lie in [{m_q}, {M_q}]")
    if K < 1:
        raise ValueError("need K >= 1")
    alpha = seqmod.invert_phi(p, s)
    beta = math.log(seqmod.invert_phi(q, t)) / (2.0 * math.log(q))
    theta = math.log(p) / math.log(q)
    sigma = 0.5 * (1.0 + math.log(alpha / p) / math.log(q))

    ns = np.arange(1, n_cap + 1, dtype=float)
    dist = _circ_dist((theta * ns + sigma) % 1.0, beta)
    rows = []
    best = math.inf
    n_prev = 0
    idx = n_prev
    for k in range(1, K + 1):
        tol_k = min(2.0 ** (-k), best)
        cand = np.nonzero(dist[n_prev:] < tol_k)[0]
        if len(cand) == 0:
            raise RuntimeError(
                f"no index below n_cap={n_cap} meets tolerance 2^-{k}; raise n_cap"
            )
        idx = n_prev + int(cand[0])
        n = idx + 1
        best = float(dist[idx])
        n_prev = idx + 1
        beta_n = float((theta * n + sigma) % 1.0)
        # ln eps_n = alpha * ln b_n with b_n = a^(p^(2n-1)) on the left family
        log_neg = math.log(alpha) + (2 * n - 1) * math.log(p) + math.log(-math.log(a))
        ln_eps = -math.exp(log_neg) if log_neg < 709 else -math.inf
        predicted = (
            seqmod.phi(p, alpha),
            seqmod.phi(q, min(q ** (2.0 * beta_n), q * q)),
        )
        rows.append(
            TargetPoint(
                n=n,
                ln_eps=ln_eps,
                log_neg_ln_eps=log_neg,
                beta_n=beta_n,
                predicted=predicted,
            )
        )
    return rows


def independence_check(spec, boxes, eps_grid, trunc=None, mesh=None):
    """Compare the modulus for shrunken boxes (I, J) against (I_0, J_0).

    Each box is a dict {"n0": first chimney kept in I, "h": depth offset of
    the target sub-arc before compression (h >= 1; compression places its
    near end at eps * h), "include_one": False}.  A box claiming the prime
    end 1 (or missing
    the distinguished geodesic's endpoints) is inadmissible.  Returns one
    report per box with the deviations |mod(I,J) - mod(I_0,J_0)| over the
    grid and a growth flag (last value exceeding first plus two error bars).
    """
    if not isinstance(spec, OneSided):
        raise ValueError("independence check runs on one-sided domains")
    trunc = trunc or TruncationConfig()
    mesh = mesh or MeshConfig()
    seq = spec.seq
    ln_grid = [resolve_eps_token(seq, t) for t in eps_grid]
    domain = build_domain(spec, trunc)

    def solve(n0, h, ln_eps):
        eps = math.exp(ln_eps)
        source = "I0" if n0 == 0 else ("tail_from", n0)
        marked = mark_quadrilateral(domain, source, ("J0", eps, h))
        return solve_modulus(marked, mesh)

    ref = [solve(0, 1.0, le) for le in ln_grid]
    reports = []
    for box in boxes:
        if box.get("include_one"):
            raise ValueError("box must exclude the prime end 1")
        n0 = int(box.get("n0", 0))
        h = float(box.get("h", 1.0))
        if h < 1.0:
            raise ValueError("target offset h must be >= 1")
        if n0 > trunc.n_max:
            raise ValueError("box excludes every chimney; geodesic g not contained")
        res = [solve(n0, h, le) for le in ln_grid]
        devs = [abs(r.value - r0.value) for r, r0 in zip(res, ref)]
        bars = [r.error_est + r0.error_est for r, r0 in zip(res, ref)]
        growth = devs[-1] > devs[0] + 2.0 * (bars[0] + bars[-1])
        reports.append(
            {
                "box": {"n0": n0, "h": h},
                "deviations": devs,
                "error_bars": bars,
                "max_deviation": max(devs),
                "growth_flag": bool(growth),
            }
        )
    return reports


@dataclass(frozen=True)
class Verdict:
    kind: str  # "converges" or "diverges"
    weights: tuple = None  # limit weights when the ray converges
    lamination: MeasuredLamination = None
    limitset: LimitSetDescriptor = None

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "converges":
            d["weights"] = list(self.weights)
            d["axes"] = [[w, w] for w in self.weights]
        else:
            d["weights"] = None
            d["axes"] = [list(ax.interval) for ax in self.limitset.free_axes]
        return d


def verdict(spec: DomainSpec, n_max_atoms=8) -> Verdict:
    """Decide convergence of the compression ray: converges iff m = M on
    every free axis, in which case the limit is the lamination with the
    common weight; otherwise the limit set descriptor is attached."""
    if isinstance(spec, OneSided):
        axes = [_axis_interval(spec)]
    elif isinstance(spec, TwoSided):
        axes = [_axis_interval(spec, 0), _axis_interval(spec, 1)]
    elif isinstance(spec, MultiK):
        axes = [_axis_interval(spec, j) for j in range(spec.k)]
    else:
        raise TypeError("unknown domain spec")
    if all(abs(hi - lo) <= 1e-9 for lo, hi in axes):
        weights = tuple(lo for lo, _ in axes)
        lam = build_limit_lamination(spec, list(weights), n_max=n_max_atoms)
        return Verdict(kind="converges", weights=weights, lamination=lam)
    return Verdict(kind="diverges", limitset=limit_set(spec, n_max=n_max_atoms))

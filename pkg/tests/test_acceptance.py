"""End-to-end acceptance gate.

Each test checks one headline behavior at its stated tolerance; the conftest
hook prints a single PASS/FAIL line per criterion in the run summary.
"""

import functools
import math
import time

import numpy as np

from chimneylab import domains as dm
from chimneylab import laminations as lam
from chimneylab import modulus as md
from chimneylab import rays
from chimneylab import sequences as sq


def criterion(name):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            fn()

        run._criterion_name = name
        return run

    return wrap


@criterion("power family exponent limits (4/3, 5/3)")
def test_criterion_01_power_limits():
    t0 = time.perf_counter()
    seq = sq.make_sequence(sq.Power(2.0, 0.5))
    win = sq.exponent_limits(seq, 10, 40)
    assert abs(win.m_hat - 4.0 / 3.0) < 1e-6
    assert abs(win.M_hat - 5.0 / 3.0) < 1e-6
    assert time.perf_counter() - t0 < 1.0


@criterion("power-pair limits and inverse design")
def test_criterion_02_power_pair():
    seq = sq.make_sequence(sq.PowerPair(2.0, 3.0, 0.5))
    win = sq.exponent_limits(seq, 10, 40)
    assert abs(win.m_hat - 1.4) < 1e-6
    assert abs(win.M_hat - 1.8) < 1e-6
    # inverse design: prescribe (m, M) = (1.35, 1.55)
    alpha, beta = 0.35, 0.55
    p = beta / alpha
    q = (1 - alpha) / (1 - beta)
    m, M = sq.closed_form_limits(sq.PowerPair(p, q, 0.5))
    assert abs(m - 1.35) < 1e-6 and abs(M - 1.55) < 1e-6
    win2 = sq.exponent_limits(sq.make_sequence(sq.PowerPair(p, q, 0.5)), 25, 80)
    assert abs(win2.m_hat - 1.35) < 1e-6 and abs(win2.M_hat - 1.55) < 1e-6


@criterion("factorial family: both exponents -> 1.5, monotone over decades")
def test_criterion_03_factorial():
    t0 = time.perf_counter()
    seq = sq.make_sequence(sq.Factorial())
    errs = []
    for n in (10**3, 10**4, 10**5, 10**6):
        e = sq.exponents(seq, n)
        errs.append(max(abs(e.m_n - 1.5), abs(e.M_n - 1.5)))
    assert errs[-1] < 0.01
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert time.perf_counter() - t0 < 1.0


@criterion("rising factorial (1,1,2): closed form 1.5 matches window to 1e-3")
def test_criterion_04_rising_factorial():
    spec = sq.RisingFactorial(1, 1, 2)
    m, M = sq.closed_form_limits(spec)
    assert m == M == 1.5
    win = sq.exponent_limits(sq.make_sequence(spec), 10**3, 10**4)
    assert abs(win.m_hat - 1.5) < 1e-3
    assert abs(win.M_hat - 1.5) < 1e-3


@criterion("two displayed exponent forms agree to 1e-12 on 1000 random sequences")
def test_criterion_05_two_form_identity():
    rng = np.random.default_rng(20260823)
    for _ in range(1000):
        k = int(rng.integers(3, 9))
        gaps = rng.uniform(0.05, 4.0, size=2 * k - 1)
        logs = -np.cumsum(gaps)
        log_a = tuple(float(v) for v in logs[0::2])
        log_b = (0.0,) + tuple(float(v) for v in logs[1::2])
        seq = sq.make_sequence(sq.Explicit(log_a, log_b))
        for n in range(1, k):
            lA_prev, _ = sq.log_products(seq, n - 1)
            lA, lB = sq.log_products(seq, n)
            la, lb = seq.log_a(n), seq.log_b(n)
            m1 = 1.0 + (lA_prev - lB) / (-la)
            m2 = 2.0 - (lB - lA) / (-la)
            M1 = 1.0 + (lA_prev - lB) / (-lb)
            _, lB_prev = sq.log_products(seq, n - 1)
            M2 = 2.0 - (lB_prev - lA_prev) / (-lb)
            assert abs(m1 - m2) <= 1e-12 * max(abs(m1), abs(m2))
            assert abs(M1 - M2) <= 1e-12 * max(abs(M1), abs(M2))
            e = sq.exponents(seq, n)
            assert abs(e.m_n - m1) <= 1e-11 * abs(m1)
            assert abs(e.M_n - M1) <= 1e-11 * abs(M1)


@criterion("Liouville box: symmetric value log 2 and additivity over splits")
def test_criterion_06_liouville():
    assert abs(lam.liouville_box(1 + 0j, 1j, -1 + 0j, -1j) - math.log(2)) < 1e-12
    rng = np.random.default_rng(11)
    done = 0
    while done < 1000:
        th = np.sort(rng.uniform(0.0, 2 * math.pi, size=5))
        if np.min(np.diff(th)) < 1e-3 or (2 * math.pi - (th[-1] - th[0])) < 1e-3:
            continue
        a, mid, b, c, d = th
        whole = lam.liouville_box(a, b, c, d)
        split = lam.liouville_box(a, mid, c, d) + lam.liouville_box(mid, b, c, d)
        assert abs(whole - split) < 1e-10
        done += 1


@criterion("modulus-Liouville residual shrinks, |residual| < 0.05 at L = 8")
def test_criterion_07_mod_liouville():
    t0 = time.perf_counter()

    def box_for(L):
        lo, hi = 1e-8, math.pi - 1e-8
        for _ in range(200):
            t = 0.5 * (lo + hi)
            val = lam.liouville_box(0.0, t, math.pi, math.pi + t)
            if val > L:
                hi = t
            else:
                lo = t
        return 0.5 * (lo + hi)

    residuals = []
    for L in (3, 4, 5, 6, 7, 8):
        t = box_for(L)
        mod = md.disk_quad_modulus(0.0, t, math.pi, math.pi + t)
        residuals.append(lam.mod_liouville_residual(mod, float(L)))
    mags = [abs(r) for r in residuals]
    assert all(b < a for a, b in zip(mags, mags[1:]))
    assert mags[-1] < 0.05
    assert time.perf_counter() - t0 < 1.0


@criterion("solver calibration: square, 2x1, and reciprocal duality within 1%")
def test_criterion_08_solver_calibration():
    def rect(l, w, marks):
        return dm.AxisPolygonDomain(
            ((0.0, 0.0), (l, 0.0), (l, w), (0.0, w)),
            (("b",), ("r",), ("t",), ("l",)),
            marks,
        )

    mesh = md.MeshConfig(base_h=0.1)
    across = ("neumann", "dirichlet1", "neumann", "dirichlet0")
    cases = [rect(1.0, 1.0, across), rect(2.0, 1.0, across)]
    lshape = dm.AxisPolygonDomain(
        ((0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)),
        (("e0",), ("e1",), ("e2",), ("e3",), ("e4",), ("e5",)),
        ("neumann", "dirichlet1", "neumann", "neumann", "dirichlet0", "neumann"),
    )
    expected = [1.0, 0.5]
    for dom, ref in zip(cases, expected):
        t0 = time.perf_counter()
        res = md.solve_modulus(dom, mesh)
        assert time.perf_counter() - t0 < 10.0
        assert res.cells <= 4 * 10**5
        assert abs(res.value - ref) < 0.005 * ref
    for dom in cases + [lshape]:
        t0 = time.perf_counter()
        res = md.solve_modulus(dom, mesh)
        conj = md.solve_modulus(dm.conjugate_marks(dom), mesh)
        assert time.perf_counter() - t0 < 20.0
        assert abs(res.value * conj.value - 1.0) < 0.01


@criterion("PDE sandwich bound and oscillation signature on Power(2, 0.4)")
def test_criterion_09_sandwich_pde():
    t0 = time.perf_counter()
    spec = dm.OneSided(sq.make_sequence(sq.Power(2.0, 0.4)))
    grid = ["b1", "a1", "b2"]
    runs = {}
    for size in (4.0, 8.0):
        trunc = dm.TruncationConfig(n_max=2, H_top=size, depth=size, R_out=size)
        runs[size] = rays.sweep(spec, grid, mode="pde", trunc=trunc)
    for r4, r8 in zip(runs[4.0], runs[8.0]):
        trunc_gap = abs(r4.M_value - r8.M_value)
        for row in (r4, r8):
            slack = math.pi * row.error_est / row.log_inv_eps + trunc_gap
            assert row.M_value >= row.lower - slack
    for rows in runs.values():
        m_b1, m_a1, m_b2 = (r.M_value for r in rows)
        assert m_b1 > m_a1 and m_b2 > m_a1
    assert time.perf_counter() - t0 < 300.0


@criterion("box independence: modulus deviation shows no growth trend")
def test_criterion_10_box_independence():
    spec = dm.OneSided(sq.make_sequence(sq.Power(2.0, 0.4)))
    trunc = dm.TruncationConfig(n_max=2)
    reports = rays.independence_check(
        spec,
        [{"n0": 1, "h": 1.0}, {"n0": 0, "h": 2.0}],
        ["b1", "a1", "b2"],
        trunc=trunc,
    )
    assert len(reports) == 2
    for rep in reports:
        devs, bars = rep["deviations"], rep["error_bars"]
        assert devs[-1] <= devs[0] + 2.0 * (bars[0] + bars[-1])
        assert not rep["growth_flag"]


@criterion("rotation equidistribution and Kronecker search with verification")
def test_criterion_11_rotation_kronecker():
    theta = math.log(2) / math.log(3)
    gaps = [rays.rotation_orbit(theta, 0.0, N).max_gap for N in (10**2, 10**3, 10**4)]
    assert gaps[-1] < 0.01
    assert gaps[2] < gaps[1] < gaps[0]
    thetas = [math.log10(2), math.log10(3)]
    targets = [0.5, 0.5]
    n = rays.kronecker_search(thetas, [0.0, 0.0], targets, 0.05, 10**6)
    assert n is not None and 1 <= n <= 10**6
    for th, tg in zip(thetas, targets):
        d = abs((th * n) % 1.0 - tg)
        assert min(d, 1.0 - d) < 0.05


@criterion("target subsequence realizes (1.4, 1.6); shift formula exact")
def test_criterion_12_target_subsequence():
    rows = rays.target_subsequence(2.0, 3.0, 1.4, 1.6, K=14)
    last = rows[-1].predicted
    assert abs(last[0] - 1.4) < 1e-3 and abs(last[1] - 1.6) < 1e-3
    # shift for the top exponent s = 5/3: alpha = 1, sigma = (1 + ln(1/2)/ln 3)/2
    alpha = sq.invert_phi(2.0, 5.0 / 3.0)
    assert abs(alpha - 1.0) < 1e-12
    sigma = 0.5 * (1.0 + math.log(alpha / 2.0) / math.log(3.0))
    assert abs(sigma - 0.5 * (1.0 + math.log(0.5) / math.log(3.0))) < 1e-12
    probe = rays.target_subsequence(2.0, 3.0, 5.0 / 3.0, 1.6, K=1)[0]
    theta = math.log(2.0) / math.log(3.0)
    sigma_used = (probe.beta_n - theta * probe.n) % 1.0
    assert abs(sigma_used - sigma % 1.0) < 1e-9 * probe.n


@criterion("verdicts: factorial converges, power and multik diverge with axes")
def test_criterion_13_verdicts():
    v = rays.verdict(dm.OneSided(sq.make_sequence(sq.Factorial())), n_max_atoms=3)
    assert v.kind == "converges"
    assert abs(v.weights[0] - 1.5) < 1e-4

    p2 = dm.OneSided(sq.make_sequence(sq.Power(2.0, 0.5)))
    d = rays.verdict(p2, n_max_atoms=3)
    assert d.kind == "diverges"
    iv = d.limitset.free_axes[0].interval
    assert abs(iv[0] - 4 / 3) < 1e-9 and abs(iv[1] - 5 / 3) < 1e-9

    mk = dm.MultiK((2.0, 3.0), 0.5)
    dv = rays.verdict(mk, n_max_atoms=3)
    assert dv.kind == "diverges"
    axes = [ax.interval for ax in dv.limitset.free_axes]
    ref = [ax.interval for ax in lam.limit_set(mk, n_max=3).free_axes]
    assert len(axes) == 2
    for got, want in zip(axes, ref):
        assert abs(got[0] - want[0]) < 1e-12 and abs(got[1] - want[1]) < 1e-12
    assert abs(axes[0][0] - 4 / 3) < 1e-9 and abs(axes[0][1] - 5 / 3) < 1e-9
    assert abs(axes[1][0] - 1.25) < 1e-9 and abs(axes[1][1] - 1.75) < 1e-9

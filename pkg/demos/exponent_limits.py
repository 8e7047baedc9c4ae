"""Compare window estimates of the exponent limits against closed forms.

Run:  python3 demos/exponent_limits.py
"""

from chimneylab import sequences as sq

FAMILIES = [
    ("factorial", sq.Factorial(), (10**5, 10**6)),
    ("rising(1,1,2)", sq.RisingFactorial(1, 1, 2), (10**3, 10**4)),
    ("power(2)", sq.Power(2.0, 0.5), (10, 40)),
    ("power_pair(2,3)", sq.PowerPair(2.0, 3.0, 0.5), (10, 40)),
]


def main():
    print(f"{'family':<16} {'m (window)':>12} {'M (window)':>12} {'m':>8} {'M':>8}")
    for name, spec, (lo, hi) in FAMILIES:
        seq = sq.make_sequence(spec)
        win = sq.exponent_limits(seq, lo, hi)
        m, M = sq.closed_form_limits(spec)
        print(f"{name:<16} {win.m_hat:>12.8f} {win.M_hat:>12.8f} {m:>8.5f} {M:>8.5f}")

    # inverse design: pick (p, q) so the limits land on prescribed values
    alpha, beta = 0.35, 0.55
    p, q = beta / alpha, (1 - alpha) / (1 - beta)
    m, M = sq.closed_form_limits(sq.PowerPair(p, q, 0.5))
    print(f"\ninverse design for (0.35, 0.55): p={p:.6f}, q={q:.6f} -> ({m}, {M})")


if __name__ == "__main__":
    main()

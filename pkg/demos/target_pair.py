"""Select a compression subsequence whose left/right normalized moduli
approach a prescribed pair (s, t) on a two-sided chimney domain.

Run:  python3 demos/target_pair.py
"""

from chimneylab import rays


def main():
    s, t = 1.4, 1.6
    rows = rays.target_subsequence(2.0, 3.0, s, t, K=12)
    print(f"{'k':>3} {'n':>8} {'log(-ln eps)':>14} {'pred s':>10} {'pred t':>10}")
    for k, row in enumerate(rows, start=1):
        ps, pt = row.predicted
        print(f"{k:>3} {row.n:>8} {row.log_neg_ln_eps:>14.3f} {ps:>10.6f} {pt:>10.6f}")
    ps, pt = rows[-1].predicted
    print(f"\nfinal error: ({abs(ps - s):.2e}, {abs(pt - t):.2e})")


if __name__ == "__main__":
    main()

"""Convergence verdicts for compression rays on three chimney domains.

Run:  python3 demos/limit_sets.py
"""

import json

from chimneylab import domains as dm
from chimneylab import rays
from chimneylab import sequences as sq


def main():
    cases = [
        ("factorial", dm.OneSided(sq.make_sequence(sq.Factorial()))),
        ("power(2)", dm.OneSided(sq.make_sequence(sq.Power(2.0, 0.5)))),
        ("multik(2,3)", dm.MultiK((2.0, 3.0), 0.5)),
    ]
    for name, spec in cases:
        v = rays.verdict(spec, n_max_atoms=4)
        print(f"{name}: {json.dumps(v.to_dict(), sort_keys=True)}")


if __name__ == "__main__":
    main()

"""Regenerate src/ghostslopes/data/distribution_slack.json.

The O(log k) term in the outer slope estimate has no explicit constant, so the
default C is the worst observed ratio |alpha_i(k) - (p-1) i / 2| / log_p k over
a sweep, rounded up to a multiple of 1/4.
"""

import argparse
import json
import math
from fractions import Fraction
from pathlib import Path

from ghostslopes.ghost import GhostContext, weight
from ghostslopes.theorems import distribution

OUT = Path(__file__).resolve().parents[1] / "src" / "ghostslopes" / "data" / "distribution_slack.json"


def worst_ratio(ctx: GhostContext, kmax: int):
    best = (0.0, None)
    for kb in range(1, kmax + 1):
        k = weight(ctx, kb)
        st = distribution(ctx, k)
        D, u = st.d_iw, st.d_ur
        for i in range(1, u + 1):
            target = Fraction((ctx.p - 1) * i, 2)
            for slope in (st.slopes[i - 1], (k - 1) - st.slopes[D - i]):
                r = float(abs(slope - target)) / math.log(k, ctx.p)
                if r > best[0]:
                    best = (r, {"p": ctx.p, "a": ctx.a, "s_eps": ctx.s_eps, "k": k, "i": i})
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[7, 11, 13])
    ap.add_argument("--kmax", type=int, default=150)
    ap.add_argument("--dry-run", action="store_true")
    args = ap.parse_args()

    worst = (0.0, None)
    for p in args.primes:
        for a in range(1, p - 3):
            for ctx in GhostContext(p, a).relevant():
                worst = max(worst, worst_ratio(ctx, args.kmax), key=lambda t: t[0])
        print(f"p={p}: running max {worst[0]:.4f} at {worst[1]}")
    C = Fraction(math.ceil(worst[0] * 4), 4)
    payload = {
        "C": f"{C.numerator}/{C.denominator}",
        "max_ratio": round(worst[0], 6),
        "attained_at": worst[1],
        "sweep": {"primes": args.primes, "a": "all in [1, p-4]", "s_eps": "all", "kbullet": [1, args.kmax]},
    }
    print(json.dumps(payload, indent=2))
    if not args.dry_run:
        OUT.write_text(json.dumps(payload, indent=2) + "\n")


if __name__ == "__main__":
    main()

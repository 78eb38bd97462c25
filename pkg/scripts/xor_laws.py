"""Run every circulant law on 2-XOR networks of size 2^p with interaction-step 0,
then the step-independent laws on a handful of random rows."""

import argparse
import json
import random
import time

from ban.circulant import LAWS, CirculantSpec, LawPreconditionError, two_xor, verify_law

GENERIC = ("zero-fixed", "all-ones", "rotation", "mask", "reflection",
           "reflected-diagram", "density-max")


def run(spec, law, samples, seed):
    start = time.perf_counter()
    try:
        r = verify_law(spec, law, samples=samples, seed=seed)
    except LawPreconditionError:
        return None
    return {**r.to_json(), "n": spec.n, "seconds": round(time.perf_counter() - start, 3)}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-p", type=int, default=7)
    ap.add_argument("--random-rows", type=int, default=10)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    failures = 0
    specs = [two_xor(1 << p, 0) for p in range(1, args.max_p + 1)]
    rng = random.Random(args.seed)
    for _ in range(args.random_rows):
        n = rng.randint(3, 14)
        rest = rng.sample(range(n - 1), rng.randint(1, n - 1))
        specs.append(CirculantSpec.from_positions(n, [n - 1, *rest]))
    for spec in specs:
        laws = LAWS if spec.k == 2 else GENERIC
        for law in laws:
            result = run(spec, law, args.samples, args.seed)
            if result is None:
                continue
            failures += not result["passed"]
            print(json.dumps(result))
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()

"""Space-time diagrams of 2-XOR circulant networks as PBM images.

Defaults reproduce the three classic pictures: size 4 with self-loops, a
Sierpinski triangle at size 64, and size 27 with interaction-step 4.
"""

import argparse
from pathlib import Path

from ban.circulant import max_convergence_stats, space_time, two_xor


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out/diagrams")
    ap.add_argument("--case", action="append", metavar="N:S",
                    help="size and interaction-step, repeatable (default 4:0 64:0 27:4)")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for case in args.case or ["4:0", "64:0", "27:4"]:
        n, s = map(int, case.split(":"))
        spec = two_xor(n, s)
        t_star, p_star = max_convergence_stats(spec)
        diagram = space_time(spec, 1, max(t_star + p_star, n))
        path = out / f"xor_n{n}_s{s}.pbm"
        path.write_text(diagram.to_pbm())
        print(f"n={n} s={s} row={spec.row_string()} t*={t_star} p*={p_star} -> {path}")


if __name__ == "__main__":
    main()

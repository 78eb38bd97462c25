"""Tabulate synchronism sensitivity against monotony over every network of one size.

Size 2 covers 256 networks and takes well under a second; size 3 covers
16.7 million and needs ``--jobs`` and patience.
"""

import argparse
from collections import Counter

from ban.formula import render, table_formula
from ban.sensitivity import Level, find_minimal_level2, networks_isomorphic, sweep_rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=2)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    table = Counter((row["monotony"], row["level"]) for row in sweep_rows(args.size))
    levels = [lvl.value for lvl in Level]
    classes = sorted({m for m, _ in table})
    print(f"{'':>22}" + "".join(f"{lvl:>7}" for lvl in levels))
    for m in classes:
        print(f"{m:>22}" + "".join(f"{table[m, lvl]:>7}" for lvl in levels))

    found = find_minimal_level2(args.size, jobs=args.jobs)
    if found:
        print(f"\nlevel-2 networks at the smallest size ({found[0][0]}):")
        nets = [net for _, net in found]
        for k, net in enumerate(nets):
            print(f"  [{k}] " + "; ".join(render(table_formula(t)) for t in net.tables))
        pairs = [(a, b) for a in range(len(nets)) for b in range(a + 1, len(nets))
                 if networks_isomorphic(nets[a], nets[b])]
        print("  isomorphic pairs:", pairs or "none")


if __name__ == "__main__":
    main()

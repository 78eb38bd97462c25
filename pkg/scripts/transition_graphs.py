"""Write the general, asynchronous and parallel graphs of a network as DOT and CSV.

    python scripts/transition_graphs.py scripts/nets/copy_xnor.net --out out/copy_xnor
"""

import argparse
from pathlib import Path

from ban.dynamics import attractors, attractors_csv, build_graph, to_dot
from ban.netfile import load_network
from ban.network import format_config


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("file")
    ap.add_argument("--out", default="out/graphs")
    args = ap.parse_args()

    net = load_network(args.file).require_network()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sets = []
    for mode in ("general", "asynchronous", "parallel"):
        tg = build_graph(net, mode)
        attrs = attractors(tg)
        sets.append(attrs)
        (out / f"{mode}.dot").write_text(to_dot(tg, attrs, name=mode))
        ids = ", ".join(format_config(a.id, net.n) for a in attrs)
        print(f"{mode:>12}: {len(attrs)} attractor(s) [{ids}]")
    (out / "attractors.csv").write_text(attractors_csv(*sets))
    print(f"wrote {out}/")


if __name__ == "__main__":
    main()

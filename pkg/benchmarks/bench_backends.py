"""Numba kernels against the interpreter fallback on the same searches.

Each backend runs in its own subprocess (the switch is read at import time).
Prints one CSV row per (backend, instance): wall time, nodes and nodes/s,
plus the speedup of numba over the fallback.

    python benchmarks/bench_backends.py [--repeats 3] [--instances MANN_a9 hamming6-4 ...]
"""

import argparse
import json
import os
import statistics
import subprocess
import sys

WORKER = r"""
import json, sys, time
from pclique import BACKEND, degree_permute, max_clique, random_graph
from pclique.cli import load_graph
names, repeats = json.loads(sys.argv[1]), int(sys.argv[2])
max_clique(degree_permute(random_graph(20, 0.5, 0))[0])  # compile / load the cache first
rows = []
for name in names:
    g = degree_permute(load_graph(name))[0]
    walls = []
    for _ in range(repeats):
        t = time.perf_counter()
        inc, st = max_clique(g)
        walls.append(time.perf_counter() - t)
    rows.append({"instance": name, "omega": inc.size, "nodes": st.nodes, "walls": walls})
print(json.dumps({"backend": BACKEND, "rows": rows}))
"""

DEFAULT = ["hamming6-4", "johnson8-4-4", "MANN_a9", "c-fat200-5", "hamming8-2"]


def run_backend(disable, names, repeats):
    env = dict(os.environ)
    env.pop("PCLIQUE_NO_NUMBA", None)
    if disable:
        env["PCLIQUE_NO_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKER, json.dumps(names), str(repeats)],
                          capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", nargs="+", default=DEFAULT)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    results = {r["backend"]: r for r in (run_backend(False, args.instances, args.repeats),
                                         run_backend(True, args.instances, args.repeats))}
    print("backend,instance,omega,nodes,wall_ms,nodes_per_s")
    best = {}
    for backend, res in results.items():
        for row in res["rows"]:
            wall = statistics.median(row["walls"])
            best[backend, row["instance"]] = (wall, row["nodes"])
            print(f"{backend},{row['instance']},{row['omega']},{row['nodes']},{1000 * wall:.2f},"
                  f"{row['nodes'] / wall:.0f}")
    print()
    print("instance,nodes_equal,numba_speedup")
    for name in args.instances:
        (fw, fn), (sw, sn) = best["numba", name], best["numpy", name]
        print(f"{name},{fn == sn},{sw / fw:.1f}")


if __name__ == "__main__":
    main()

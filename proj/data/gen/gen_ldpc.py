#!/usr/bin/env python3
"""Generates the bundled LDPC parity-check matrices (alist format).

The two long codes use progressive edge growth (PEG): every variable node
connects its edges to the check node that is farthest away in the current
graph (unreachable checks first), tie-broken by lowest degree, which maximizes
local girth. The (7,4) code is a fixed cycle-free chain used by the exact-MAP
tests.
"""

import os
import random
from collections import deque


def peg(n, c, dv, seed):
    rng = random.Random(seed)
    rows = [[] for _ in range(c)]  # check -> variables
    cols = [[] for _ in range(n)]  # variable -> checks

    def bfs_depths(v):
        """Distance from variable v to every check, -1 if unreachable."""
        depth = [-1] * c
        frontier = list(cols[v])
        for ci in frontier:
            depth[ci] = 0
        seen_v = {v}
        d = 0
        while frontier:
            nxt = []
            for ci in frontier:
                for u in rows[ci]:
                    if u in seen_v:
                        continue
                    seen_v.add(u)
                    for cj in cols[u]:
                        if depth[cj] < 0:
                            depth[cj] = d + 1
                            nxt.append(cj)
            frontier = nxt
            d += 1
        return depth

    for v in range(n):
        for _ in range(dv):
            depth = bfs_depths(v)
            unreachable = [ci for ci in range(c) if depth[ci] < 0 and ci not in cols[v]]
            if unreachable:
                cands = unreachable
            else:
                far = max(d for ci, d in enumerate(depth) if ci not in cols[v])
                cands = [ci for ci, d in enumerate(depth) if d == far and ci not in cols[v]]
            mindeg = min(len(rows[ci]) for ci in cands)
            cands = [ci for ci in cands if len(rows[ci]) == mindeg]
            ci = rng.choice(cands)
            rows[ci].append(v)
            cols[v].append(ci)
    return rows


def write_alist(path, n, c, rows):
    cols = [[] for _ in range(n)]
    for ci, vs in enumerate(rows):
        for v in vs:
            cols[v].append(ci)
    max_dv = max(len(x) for x in cols)
    max_dc = max(len(x) for x in rows)
    with open(path, "w") as f:
        f.write(f"{n} {c}\n{max_dv} {max_dc}\n")
        f.write(" ".join(str(len(x)) for x in cols) + "\n")
        f.write(" ".join(str(len(x)) for x in rows) + "\n")
        for x in cols:
            ent = [str(ci + 1) for ci in sorted(x)] + ["0"] * (max_dv - len(x))
            f.write(" ".join(ent) + "\n")
        for x in rows:
            ent = [str(v + 1) for v in sorted(x)] + ["0"] * (max_dc - len(x))
            f.write(" ".join(ent) + "\n")
    print(f"wrote {path}: N={n} C={c}")


def main():
    out = os.path.join(os.path.dirname(__file__), "..")
    # Rate 1/2 and rate 5/6 stand-ins, N = 264 (multiple of b = 2).
    write_alist(os.path.join(out, "ldpc_n264_r12.alist"), 264, 132,
                peg(264, 132, 3, seed=1))
    write_alist(os.path.join(out, "ldpc_n264_r56.alist"), 264, 44,
                peg(264, 44, 3, seed=2))
    # Cycle-free (7,4) chain: checks {1,2,3}, {3,4,5}, {5,6,7}.
    write_alist(os.path.join(out, "ldpc_7_4.alist"), 7, 3,
                [[0, 1, 2], [2, 3, 4], [4, 5, 6]])


if __name__ == "__main__":
    main()

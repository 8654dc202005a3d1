#!/usr/bin/env python3
"""Generates the bundled SCMA codebooks.

Each user occupies d_v = 2 of the R resources; the signature columns are the
C(R, 2) resource pairs, giving the classic 4x6 (150% load, d_f = 3) and 5x10
(200% load, d_f = 4) graphs. Per resource, co-located users transmit rotated
QPSK; the second dimension carries a permuted symbol so the two legs are not
copies of each other. Average codeword energy is 1 per user.
"""

import cmath
import itertools
import json
import math
import os

M = 4


def qpsk(m):
    return cmath.exp(1j * math.pi * (2 * m + 1) / 4)


def build(R):
    pairs = list(itertools.combinations(range(R), 2))
    J = len(pairs)
    signature = [[0] * J for _ in range(R)]
    for j, (r1, r2) in enumerate(pairs):
        signature[r1][j] = 1
        signature[r2][j] = 1

    # Position of each user within its resource's occupancy list.
    occupants = [[j for j in range(J) if signature[r][j]] for r in range(R)]
    d_f = len(occupants[0])

    amp = 1 / math.sqrt(2)
    perm = [(3 * m) % M for m in range(M)]  # inter-dimension symbol permutation
    codewords = []
    for j, (r1, r2) in enumerate(pairs):
        p1 = occupants[r1].index(j)
        p2 = occupants[r2].index(j)
        rot1 = cmath.exp(1j * math.pi * p1 / (2 * d_f))
        rot2 = cmath.exp(1j * math.pi * (2 * p2 + 1) / (4 * d_f))
        user = []
        for m in range(M):
            vec = [(0.0, 0.0)] * R
            x1 = amp * qpsk(m) * rot1
            x2 = amp * qpsk(perm[m]) * rot2
            vec[r1] = (x1.real, x1.imag)
            vec[r2] = (x2.real, x2.imag)
            user.append(vec)
        codewords.append(user)

    return {"J": J, "R": R, "M": M, "signature": signature, "codewords": codewords}


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..")
    for R, name in [(4, "codebook_4x6.json"), (5, "codebook_5x10.json")]:
        cb = build(R)
        path = os.path.join(out_dir, name)
        with open(path, "w") as f:
            json.dump(cb, f, indent=1)
            f.write("\n")
        print(f"wrote {path}: J={cb['J']} R={cb['R']} M={cb['M']}")


if __name__ == "__main__":
    main()

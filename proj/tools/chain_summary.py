#!/usr/bin/env python3
"""Summarize and cross-check a chain CSV written by `sigma-geom simulate-worldline`.

Every joint angle is recomputed here from the raw coordinates alone, using
flat-spacetime scalar products of consecutive link vectors, and compared
against the file's own theta_dM column. With --stats the aggregate file is
cross-checked too. Exits 1 if any recomputed value disagrees with the file
beyond --tol, so the script doubles as an independent consistency check on
the simulator's output.

Example:
    sigma-geom simulate-worldline --links 400 --seed 7
    tools/chain_summary.py chain.csv --stats stats.txt
"""

import argparse
import csv
import math
import sys

CHAIN_HEADER = ["link_index", "t", "x", "y", "z",
                "theta_dM", "residual_parallel", "residual_length"]


def minkowski(u, v, c):
    return c * c * u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - u[3] * v[3]


def term_sum(u, v, c):
    """Magnitude sum of the product's terms: the cancellation amplification."""
    return c * c * abs(u[0] * v[0]) + abs(u[1] * v[1]) + abs(u[2] * v[2]) + abs(u[3] * v[3])


def read_chain(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != CHAIN_HEADER:
        sys.exit(f"{path}: expected header {','.join(CHAIN_HEADER)}")
    return [[float(cell) for cell in row] for row in rows[1:]]


def read_stats(path):
    stats = {}
    with open(path) as fh:
        for line in fh:
            key, _, value = line.strip().partition("=")
            if key:
                stats[key] = float(value)
    return stats


def main():
    ap = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("chain", help="chain CSV file")
    ap.add_argument("--stats", help="stats key=value file to cross-check")
    ap.add_argument("--c", type=float, default=1.0,
                    help="light speed the run used (default 1)")
    ap.add_argument("--start", default="0,0,0,0",
                    help="chain start point as t,x,y,z (default origin)")
    ap.add_argument("--tol", type=float, default=1e-12,
                    help="allowed conditioned recomputed-vs-reported discrepancy")
    args = ap.parse_args()

    rows = read_chain(args.chain)
    if len(rows) < 2:
        sys.exit(f"{args.chain}: need at least two links")

    start = [float(s) for s in args.start.split(",")]
    if len(start) != 4:
        sys.exit("--start needs four comma-separated coordinates")

    points = [start] + [row[1:5] for row in rows]
    links = [[b - a for a, b in zip(p, q)] for p, q in zip(points, points[1:])]

    # Joint j sits between link j-1 and link j; row 0 is the seed link and
    # carries theta 0 by convention, so the aggregates skip it.
    #
    # The recomputation subtracts global coordinates, so its roundoff grows
    # with the boost the chain has accumulated: each scalar product cancels
    # terms of magnitude term_sum(...) down to O(1). The comparison therefore
    # normalizes the cosh discrepancy by that amplification, which keeps the
    # check sharp on joint 1 of a short chain and on joint 10^4 of a long one.
    worst_gap = 0.0
    sum_cosh = 0.0
    sum_sq = 0.0
    for j in range(1, len(links)):
        u, v = links[j - 1], links[j]
        uu = minkowski(u, u, args.c)
        vv = minkowski(v, v, args.c)
        if uu <= 0 or vv <= 0:
            sys.exit(f"link {j - 1} or {j} is not timelike; wrong --c or --start?")
        norm = math.sqrt(uu * vv)
        cosh = minkowski(u, v, args.c) / norm
        amp = (term_sum(u, v, args.c) / norm
               + term_sum(u, u, args.c) / (2 * uu)
               + term_sum(v, v, args.c) / (2 * vv))
        gap = abs(cosh - math.cosh(rows[j][5])) / max(1.0, amp)
        worst_gap = max(worst_gap, gap)
        sum_cosh += math.cosh(rows[j][5])
        sum_sq += rows[j][5] ** 2

    joints = len(links) - 1
    mean_cosh = sum_cosh / joints
    theta_rms = math.sqrt(sum_sq / joints)
    max_par = max(abs(row[6]) for row in rows)
    max_len = max(abs(row[7]) for row in rows)
    t_span = rows[-1][1] - start[0]

    print(f"links                    {len(links)}")
    print(f"time span                {t_span:.17g}")
    print(f"mean joint cosh          {mean_cosh:.17g}")
    print(f"rms joint angle          {theta_rms:.17g}")
    print(f"max conditioned cosh gap {worst_gap:.3g}   (recomputed vs theta_dM column)")
    print(f"max |residual_parallel|  {max_par:.3g}")
    print(f"max |residual_length|    {max_len:.3g}")

    failed = worst_gap > args.tol
    if args.stats:
        stats = read_stats(args.stats)
        gap_cosh = abs(stats["mean_cosh"] - mean_cosh)
        gap_rms = abs(stats["theta_rms"] - theta_rms)
        print(f"stats mean_cosh gap      {gap_cosh:.3g}")
        print(f"stats theta_rms gap      {gap_rms:.3g}")
        print(f"predicted_cosh           {stats['predicted_cosh']:.17g}")
        print(f"predicted_theta          {stats['predicted_theta']:.17g}")
        failed = failed or gap_cosh > args.tol or gap_rms > args.tol

    if failed:
        print("INCONSISTENT: recomputation disagrees with the file", file=sys.stderr)
        return 1
    print("consistent")
    return 0


if __name__ == "__main__":
    sys.exit(main())

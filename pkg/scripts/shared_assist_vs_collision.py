"""Shared-spectrum assist against plain flexible CG as contention rises.

T = K, arrivals uniform over the whole period, budget of two periods.
"""
import argparse
import csv
import dataclasses
import sys

import numpy as np

from cgsched import (
    ChannelParams,
    FlexibleOffset,
    Scenario,
    SharedAssist,
    SharedParams,
    UniformOverSlots,
    reliability_exact,
    run,
    window_config,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--period", type=int, default=10)
    ap.add_argument("--epsilon", type=float, default=0.1)
    ap.add_argument("--lbt-delay", type=int, default=0)
    ap.add_argument("--packets", type=int, default=50_000)
    args = ap.parse_args(argv)

    base = window_config(args.k, args.k, FlexibleOffset(), args.period,
                         latency_budget_slots=2 * args.period, max_periods_deferral=1)
    traffic = UniformOverSlots(0, args.period - 1)
    w = csv.writer(sys.stdout)
    w.writerow(["collision", "flexible_exact", "assist_exact", "assist_sim", "shared_reps_per_packet"])
    flex = reliability_exact(base, traffic, ChannelParams(args.epsilon)).reliability
    for c in np.linspace(0.0, 0.9, 10):
        c = round(float(c), 3)
        cfg = dataclasses.replace(base, scheme=SharedAssist(SharedParams(args.lbt_delay, collision=c)))
        ch = ChannelParams(args.epsilon, shared_collision=c)
        exact = reliability_exact(cfg, traffic, ch).reliability
        r = run(Scenario(cfg, traffic, ch, packets=args.packets))
        w.writerow([c, f"{flex:.6g}", f"{exact:.6g}", f"{r.reliability:.6g}",
                    f"{r.shared_reps_used / r.attempted:.4g}"])


if __name__ == "__main__":
    main()

"""Unused TOs per period and latency tail as the TO spacing widens."""
import argparse
import csv
import sys

from cgsched import (
    CgConfig,
    ChannelParams,
    FlexibleOffset,
    Scenario,
    UniformOverSlots,
    arrival_pmf,
    expected_wastage,
    generate_offsets,
    run,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=int, default=6)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--period", type=int, default=40)
    ap.add_argument("--packets", type=int, default=50_000)
    args = ap.parse_args(argv)

    w = csv.writer(sys.stdout)
    w.writerow(["gap", "wastage_exact", "wastage_sim", "reliability", "latency_p99_slots"])
    for gap in range(0, (args.period - 1) // (args.t - 1)):
        offsets = generate_offsets(args.t, gap, 0)
        if offsets[-1] >= args.period:
            break
        cfg = CgConfig(args.period, offsets, args.k, scheme=FlexibleOffset(), max_periods_deferral=0)
        traffic = UniformOverSlots(0, offsets[-1])
        p_o, p = arrival_pmf(traffic, cfg)
        r = run(Scenario(cfg, traffic, ChannelParams(0.1), packets=args.packets))
        w.writerow([gap, f"{expected_wastage(p_o, p, cfg.T):.6g}", f"{r.mean_wastage_tos:.6g}",
                    f"{r.reliability:.6g}", r.latency_slots.p99])


if __name__ == "__main__":
    main()

"""Smallest T meeting a reliability target, over a grid of BLER and targets."""
import argparse

from cgsched import AlwaysAtSlot, GeometricDelay, InfeasibleError, dimension_T


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--targets", default="0.99,0.999,0.9999,0.99999")
    ap.add_argument("--epsilons", default="0.01,0.05,0.1,0.2")
    ap.add_argument("--mean-delay", type=float, default=None,
                    help="geometric arrival delay in slots (default: arrival at slot 0)")
    ap.add_argument("--k", type=int, default=None, help="fixed repetitions (default: K = T)")
    ap.add_argument("--r-max", type=int, default=32)
    args = ap.parse_args(argv)

    traffic = AlwaysAtSlot(0) if args.mean_delay is None else GeometricDelay(args.mean_delay)
    targets = [float(x) for x in args.targets.split(",")]
    print("epsilon " + " ".join(f"{t:>9}" for t in targets))
    for eps in (float(x) for x in args.epsilons.split(",")):
        cells = []
        for target in targets:
            try:
                cells.append(str(dimension_T(traffic, eps, target, rep_count=args.k, r_max=args.r_max)))
            except InfeasibleError:
                cells.append("-")
        print(f"{eps:<7} " + " ".join(f"{c:>9}" for c in cells))


if __name__ == "__main__":
    main()

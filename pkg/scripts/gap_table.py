"""Print the finite-n gap |log2 f(n,k)/n - log2 alpha_k| for a ladder of n."""

import argparse
import csv
import sys

from primlim.limits import alpha_k_enclosure, finite_n_gap


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--level", type=int, default=20, help="enclosure at L = 2^level")
    parser.add_argument("--n", type=int, nargs="+", default=[10 ** e for e in range(2, 7)])
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args(argv)

    enc = alpha_k_enclosure(args.k, 2 ** args.level, workers=args.threads)
    writer = csv.writer(sys.stdout)
    writer.writerow(["n", "k", "midpoint_log2", "gap"])
    for n in args.n:
        gap = finite_n_gap(n, args.k, enc, workers=args.threads)
        writer.writerow([n, args.k, f"{enc.midpoint_log2:.10f}", f"{gap:.3e}"])


if __name__ == "__main__":
    main()

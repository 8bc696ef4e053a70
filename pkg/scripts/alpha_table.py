"""Print alpha_k enclosures for k = 1..k_max and the pairwise decrease verdicts."""

import argparse
import csv
import sys
import time

from primlim.limits import alpha_k_enclosure, decrease_verdict

DEFAULT_LEVELS = {1: 20, 2: 16, 3: 16, 4: 10}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k-max", type=int, default=4)
    parser.add_argument("--level", type=int, default=None,
                        help="use L = 2^level for every k (default: per-k table)")
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args(argv)

    writer = csv.writer(sys.stdout)
    writer.writerow(["k", "L", "lower", "upper", "width_log2", "seconds", "decrease_vs_prev"])
    prev = None
    for k in range(1, args.k_max + 1):
        level = args.level if args.level is not None else DEFAULT_LEVELS.get(k, 8)
        start = time.perf_counter()
        enc = alpha_k_enclosure(k, 2 ** level, workers=args.threads)
        elapsed = time.perf_counter() - start
        verdict = decrease_verdict(enc, prev) if prev is not None else ""
        writer.writerow([k, enc.L, f"{enc.lower_value:.8f}", f"{enc.upper_value:.8f}",
                         f"{enc.width_log2:.3e}", f"{elapsed:.2f}", verdict])
        prev = enc


if __name__ == "__main__":
    main()

"""Print f(n) next to f(n,k) for k = 1..3, with the ratio bound checked row by row."""

import argparse
import csv
import sys

from primlim.limits import fn_exact, fnk_product


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=40)
    args = parser.parse_args(argv)

    writer = csv.writer(sys.stdout)
    writer.writerow(["n", "f", "f_k1", "f_k2", "f_k3", "ordered"])
    for n in range(1, args.n_max + 1):
        f = fn_exact(n)
        fk = [fnk_product(n, k) for k in (1, 2, 3)]
        ordered = f <= fk[2] <= fk[1] <= fk[0]
        writer.writerow([n, f, *fk, ordered])


if __name__ == "__main__":
    main()

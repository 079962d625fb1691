"""Group-order census over small primes, plus law/geometry cross-validation.

    python3 scripts/run_census.py --max-prime 199 --cross-max 31 --out results/census.csv
"""

import argparse
import sys
from pathlib import Path

from conicgroups.geometry import Central, Parabola
from conicgroups.oracle import CENSUS_HEADER, cross_validate, law_for, nonresidue, odd_primes, order_census
from conicgroups.residue import Modulus, Residue


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-prime", type=int, default=199)
    ap.add_argument("--cross-max", type=int, default=31)
    ap.add_argument("--out", default="results/census.csv")
    args = ap.parse_args()

    rows, failures = [CENSUS_HEADER], 0
    for p in odd_primes(args.max_prime):
        mod = Modulus.prime(p)
        one = Residue(1, mod)
        n = Residue(nonresidue(p), mod)
        specs = [Central(n, one), Central(one, one), Central(n, n), Parabola(one, Residue(0, mod))]
        for spec in specs:
            c = order_census(spec, p)
            rows.append(c.csv_row())
            failures += c.total != p + 1 or not c.is_cyclic
            if p <= args.cross_max:
                cross_validate(law_for(spec))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(rows) + "\n")
    print(f"{len(rows) - 1} conics, {failures} failures, written to {out}")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()

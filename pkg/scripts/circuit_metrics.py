"""Print CNOT counts and depths of the state-preparation circuits against the closed forms."""

import argparse

from gwf.experiments import metrics_table


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--connectivity", choices=("linear", "all_to_all"), default="linear")
    args = p.parse_args()
    table = metrics_table(range(2, args.n_max + 1), args.connectivity)
    print(f"{'N':>3} {'prep cx':>8} {'depth':>6} {'proj cx':>8} {'depth':>6} {'full cx':>8} {'depth':>6}  closed")
    for n, row in table.items():
        pr, pj, fu = row["prep"], row["projection"], row["full"]
        print(f"{n:>3} {pr['cnot_count']:>8} {pr['cnot_depth']:>6} {pj['cnot_count']:>8} {pj['cnot_depth']:>6}"
              f" {fu['cnot_count']:>8} {fu['cnot_depth']:>6}  {'ok' if row['matches_closed_forms'] else 'MISMATCH'}")


if __name__ == "__main__":
    main()

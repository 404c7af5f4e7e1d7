"""Search nodes and time per propagation level on random subscriptions of one class."""
import argparse
import statistics

from featsub.bnb import AC, LEVELS, SolverConfig, solve
from featsub.instances import CatalogueSpec, SubscriptionSpec, gen_catalogue, gen_subscription
from featsub.rng import derive_seed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--features", type=int, default=20, help="features per subscription")
    ap.add_argument("--precs", type=int, default=10, help="user precedences per subscription")
    ap.add_argument("--pairs", type=int, default=250, help="catalogue hard pairs over 50 features")
    ap.add_argument("--count", type=int, default=30)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--heuristic", default="dom-wdeg")
    ap.add_argument("--levels", default=",".join(LEVELS))
    ap.add_argument("--time-limit", type=float, default=60.0)
    args = ap.parse_args()
    levels = args.levels.split(",")
    cat = gen_catalogue(CatalogueSpec(50, args.pairs, ("<", ">")), args.seed)
    subs = [gen_subscription(cat, SubscriptionSpec(args.features, args.precs, 4), derive_seed(args.seed, k))
            for k in range(args.count)]
    print(f"{'level':<10}{'median nodes':>14}{'mean nodes':>12}{'mean ms':>10}{'completed':>11}")
    for level in levels:
        nodes, ms, done = [], [], 0
        for sub in subs:
            _, stats = solve(sub, SolverConfig(level, args.heuristic, time_limit=args.time_limit))
            nodes.append(stats.nodes)
            ms.append(stats.time * 1000)
            done += stats.completed
        print(f"{level:<10}{statistics.median(nodes):>14}{statistics.mean(nodes):>12.1f}"
              f"{statistics.mean(ms):>10.1f}{done:>8}/{len(subs)}")


if __name__ == "__main__":
    main()

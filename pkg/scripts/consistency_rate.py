"""Fraction of random subscriptions that are consistent, per catalogue and subscription class."""
import argparse

from featsub.instances import CatalogueSpec, SubscriptionSpec, gen_catalogue, gen_subscription
from featsub.model import is_consistent
from featsub.rng import derive_seed

CATALOGUES = (CatalogueSpec(50, 250, ("<", ">")), CatalogueSpec(50, 500, ("<", ">", "<>")),
              CatalogueSpec(50, 750, ("<", ">")))
CLASSES = ((10, 5), (15, 20), (20, 10), (25, 40), (30, 20), (35, 35), (40, 40), (45, 90), (50, 5))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--per-class", type=int, default=10)
    ap.add_argument("--seed", type=int, default=6)
    args = ap.parse_args()
    total = consistent = 0
    print(f"{'catalogue':<22}{'f_u':>5}{'p_u':>5}{'consistent':>12}")
    for c, cspec in enumerate(CATALOGUES):
        cat = gen_catalogue(cspec, derive_seed(args.seed, c))
        label = f"<{cspec.f_c},{cspec.b_c},{{{','.join(cspec.types)}}}>"
        for k, (f, p) in enumerate(CLASSES):
            hits = sum(is_consistent(gen_subscription(cat, SubscriptionSpec(f, p, 4),
                                                      derive_seed(args.seed, 1000 * c + 10 * k + r)))[0]
                       for r in range(args.per_class))
            consistent += hits
            total += args.per_class
            print(f"{label:<22}{f:>5}{p:>5}{hits:>8}/{args.per_class}")
    print(f"overall: {consistent}/{total} consistent")


if __name__ == "__main__":
    main()

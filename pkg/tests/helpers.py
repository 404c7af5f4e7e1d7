"""Seeded instance builders shared by the property and acceptance tests."""
from featsub.instances import CatalogueSpec, SubscriptionSpec, gen_catalogue, gen_subscription
from featsub.model import BiRegionCatalogue, BiRegionSubscription
from featsub.rng import Rng, derive_seed


def random_pairs(rng: Rng, feats, k):
    feats = sorted(feats)
    pairs = [(i, j) for i in feats for j in feats if i != j]
    return {pairs[x] for x in rng.sample(len(pairs), min(k, len(pairs)))}


def random_bi(seed: int, max_features: int = 8) -> BiRegionSubscription:
    """A bi-region subscription over at most ``max_features`` features, each region <= 7."""
    rng = Rng(seed)
    n = rng.between(2, max_features)
    while True:
        side = {f: rng.below(3) for f in range(1, n + 1)}  # 0 source, 1 target, 2 both
        src = {f for f, s in side.items() if s != 1}
        tgt = {f for f, s in side.items() if s != 0}
        if len(src) <= 7 and len(tgt) <= 7:
            break
    cat = BiRegionCatalogue(frozenset(src), frozenset(tgt),
                            random_pairs(rng, src, rng.between(0, len(src))),
                            random_pairs(rng, tgt, rng.between(0, len(tgt))))
    chosen = {f for f in range(1, n + 1) if rng.below(4) != 0}
    fs, ft = chosen & src, chosen & tgt
    ps = random_pairs(rng, fs, rng.between(0, 3))
    pt = random_pairs(rng, ft, rng.between(0, 3))
    return BiRegionSubscription.from_catalogue(cat, fs, ft, ps, pt)


def oracle_suite(count: int, seed: int, catalogues, f_range, p_range, w):
    """``count`` subscriptions spread over the given catalogue specs."""
    rng = Rng(seed)
    cats = [gen_catalogue(spec, derive_seed(seed, k)) for k, spec in enumerate(catalogues)]
    out = []
    for k in range(count):
        cat = cats[k % len(cats)]
        f_u = rng.between(*f_range)
        p_u = min(rng.between(*p_range), f_u * (f_u - 1) // 2)
        out.append(gen_subscription(cat, SubscriptionSpec(f_u, p_u, w), derive_seed(seed, 1000 + k)))
    return out


DEFAULT_CATALOGUES = (CatalogueSpec(12, 20, ("<", ">")), CatalogueSpec(12, 30, ("<", ">", "<>")))

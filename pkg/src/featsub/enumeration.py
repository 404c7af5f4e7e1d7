"""Linear extensions and symmetry-free enumeration of compatible order pairs."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Iterator

from .model import (
    Catalogue,
    InconsistentError,
    Subscription,
    anti_subscription,
    is_consistent,
    reformulate,
    restrict,
    transitive_closure,
    transpose,
)

TotalOrder = tuple


@dataclass(frozen=True)
class OrderPair:
    source_order: tuple[int, ...]
    target_order: tuple[int, ...]


def order_pairs(order) -> set[tuple[int, int]]:
    return {(order[a], order[b]) for a in range(len(order)) for b in range(a + 1, len(order))}


def linear_extensions(base, universe, limit: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every total order of ``universe`` extending ``base``.

    Orders come out lexicographically: at each step the ready features are
    tried smallest id first.
    """
    nodes = sorted(set(universe))
    base = restrict(base, nodes)
    if transitive_closure(base, nodes)[1]:
        raise InconsistentError("cannot extend a cyclic relation")
    preds = {f: 0 for f in nodes}
    succ = {f: [] for f in nodes}
    for i, j in base:
        preds[j] += 1
        succ[i].append(j)
    prefix: list[int] = []
    used = set()

    def rec():
        if len(prefix) == len(nodes):
            yield tuple(prefix)
            return
        for f in nodes:
            if f in used or preds[f]:
                continue
            used.add(f)
            prefix.append(f)
            for g in succ[f]:
                preds[g] -= 1
            yield from rec()
            for g in succ[f]:
                preds[g] += 1
            prefix.pop()
            used.discard(f)

    gen = rec()
    return islice(gen, limit) if limit is not None else gen


def get_solutions(bi, limit: int | None = None) -> Iterator[OrderPair]:
    """Lazily enumerate the compatible (source, target) order pairs, each once.

    The outer loop fixes an order of the reversible features, the inner loop
    takes the product of the source and target extensions of it.  Target
    orders are reported in the target region's own orientation.
    """
    sub = reformulate(bi)
    ok, _ = is_consistent(sub)
    if not ok:
        raise InconsistentError("the reformulated subscription is inconsistent")
    fs, ft = bi.source.features, bi.target.features
    fr = fs & ft
    closure, _ = transitive_closure(sub.hard | sub.user, sub.features)
    rel_r = restrict(closure, fr)
    rel_s = restrict(closure, fs)
    rel_t = restrict(closure, ft)

    def gen():
        for r in linear_extensions(rel_r, fr):
            rp = order_pairs(r)
            for s in linear_extensions(rel_s | rp, fs):
                for t in linear_extensions(rel_t | rp, ft):
                    yield OrderPair(s, tuple(reversed(t)))

    g = gen()
    return islice(g, limit) if limit is not None else g


def pair_subscription(sub: Subscription, pair: OrderPair) -> Subscription:
    """The merged subscription whose user precedences are the pair's full orders."""
    user = order_pairs(pair.source_order) | transpose(order_pairs(pair.target_order))
    return sub.with_user(frozenset(user) - sub.hard)


def anti_size(sub: Subscription, pair: OrderPair) -> int:
    return anti_subscription(pair_subscription(sub, pair)).size


def rank_pairs(cat: Catalogue | None, bi, pairs) -> list[OrderPair]:
    """Sort pairs by the size of their anti-subscription, smallest first (stable)."""
    sub = reformulate(bi)
    if cat is not None:
        sub = Subscription(cat, sub.features, sub.user, sub.feature_weight, sub.prec_weight)
    pairs = list(pairs)
    keys = [anti_size(sub, p) for p in pairs]
    return [p for _, _, p in sorted(zip(keys, range(len(pairs)), pairs), key=lambda t: (t[0], t[1]))]

"""Brute-force ground truth for small instances.

Nothing here reuses the solver machinery: cycle detection is a plain
recursive DFS and everything else is subset or permutation enumeration.
"""
from __future__ import annotations

from itertools import combinations, permutations

from .model import BiRegionSubscription, Relaxation, Subscription

MAX_FEATURES = 12
MAX_PRECS = 10


class GuardError(ValueError):
    """Instance too large for exhaustive enumeration."""


def has_cycle(nodes, edges) -> bool:
    succ = {v: [] for v in nodes}
    for i, j in edges:
        succ[i].append(j)
    colour = dict.fromkeys(nodes, 0)

    def visit(v):
        colour[v] = 1
        for u in succ[v]:
            if colour[u] == 1:
                return True
            if colour[u] == 0 and visit(u):
                return True
        colour[v] = 2
        return False

    return any(colour[v] == 0 and visit(v) for v in nodes)


def brute_force_optimal(sub: Subscription) -> tuple[int, Relaxation]:
    feats = sorted(sub.features)
    user = sorted(sub.user)
    if len(feats) > MAX_FEATURES or len(user) > MAX_PRECS:
        raise GuardError(f"|F|={len(feats)}, |P|={len(user)} exceeds the oracle guard")
    best, witness = -1, None
    for mask in range(1 << len(feats)):
        kept = {f for k, f in enumerate(feats) if mask >> k & 1}
        hard = [(i, j) for i, j in sub.hard if i in kept and j in kept]
        if has_cycle(kept, hard):
            continue
        fval = sum(sub.feature_weight[f] for f in kept)
        cand = [p for p in user if p[0] in kept and p[1] in kept]
        if fval + sum(sub.prec_weight[p] for p in cand) <= best:
            continue
        for pmask in range(1 << len(cand)):
            chosen = [p for k, p in enumerate(cand) if pmask >> k & 1]
            val = fval + sum(sub.prec_weight[p] for p in chosen)
            if val > best and not has_cycle(kept, hard + chosen):
                best, witness = val, Relaxation(frozenset(kept), frozenset(chosen), val)
    return best, witness


def brute_force_consistency(sub: Subscription) -> bool:
    feats = sorted(sub.features)
    if len(feats) > 8:
        raise GuardError("permutation oracle limited to 8 features")
    rel = sub.hard | sub.user
    for perm in permutations(feats):
        pos = {f: k for k, f in enumerate(perm)}
        if all(pos[i] < pos[j] for i, j in rel):
            return True
    return False


def min_feedback_vertex_set(nodes, edges) -> int:
    nodes = sorted(nodes)
    for k in range(len(nodes) + 1):
        for removed in combinations(nodes, k):
            rest = set(nodes) - set(removed)
            if not has_cycle(rest, [(i, j) for i, j in edges if i in rest and j in rest]):
                return k
    return len(nodes)


def _extends(perm, rel) -> bool:
    pos = {f: k for k, f in enumerate(perm)}
    return all(pos[i] < pos[j] for i, j in rel)


def brute_force_pairs(bi: BiRegionSubscription) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All pairs of total orders (source, target) satisfying the compatibility conditions."""
    fs, ft = sorted(bi.source.features), sorted(bi.target.features)
    if len(fs) > 7 or len(ft) > 7:
        raise GuardError("pair oracle limited to 7 features per region")
    rev = set(fs) & set(ft)
    srel = bi.source.hard | bi.source.user
    trel = bi.target.hard | bi.target.user
    sources = [p for p in permutations(fs) if _extends(p, srel)]
    targets = [p for p in permutations(ft) if _extends(p, trel)]
    out = set()
    for s in sources:
        spos = {f: k for k, f in enumerate(s)}
        for t in targets:
            tpos = {f: k for k, f in enumerate(t)}
            if all((spos[f] < spos[g]) == (tpos[g] < tpos[f]) for f in rev for g in rev if f != g):
                out.add((s, t))
    return out

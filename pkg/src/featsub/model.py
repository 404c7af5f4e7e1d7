"""Catalogues, subscriptions, relaxations and the polynomial-time services on them.

Precedence relations are plain ``frozenset`` objects of ordered ``(i, j)``
pairs meaning *i before j*.  Feature ids are positive integers.  An exclusion
between two features is stored as the two opposite precedences.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Mapping

Pair = tuple[int, int]
PrecSet = frozenset  # frozenset[Pair]


class InconsistentError(ValueError):
    """Raised when an operation needs a consistent subscription."""


class MalformedError(ValueError):
    pass


def prec_set(pairs: Iterable[Pair]) -> frozenset[Pair]:
    out = frozenset((int(i), int(j)) for i, j in pairs)
    for i, j in out:
        if i == j:
            raise MalformedError(f"reflexive precedence {i} < {i}")
    return out


def transpose(rel: Iterable[Pair]) -> frozenset[Pair]:
    return frozenset((j, i) for i, j in rel)


def restrict(rel: Iterable[Pair], universe: Iterable[int]) -> frozenset[Pair]:
    u = set(universe)
    return frozenset((i, j) for i, j in rel if i in u and j in u)


def transitive_closure(rel: Iterable[Pair], universe: Iterable[int]) -> tuple[frozenset[Pair], bool]:
    """Return ``(closure, has_cycle)``.

    Reflexive pairs produced by cycles are dropped from the closure and
    reported through the flag instead.
    """
    nodes = sorted(set(universe))
    index = {f: k for k, f in enumerate(nodes)}
    rows = [0] * len(nodes)
    for i, j in rel:
        rows[index[i]] |= 1 << index[j]
    # Warshall on bit rows
    for k in range(len(nodes)):
        bit = 1 << k
        rk = rows[k]
        for i in range(len(nodes)):
            if rows[i] & bit:
                rows[i] |= rk
    pairs = set()
    cycle = False
    for a, row in enumerate(rows):
        for b in range(len(nodes)):
            if row >> b & 1:
                if a == b:
                    cycle = True
                else:
                    pairs.add((nodes[a], nodes[b]))
    return frozenset(pairs), cycle


def topological_order(nodes: Iterable[int], rel: Iterable[Pair]) -> list[int] | None:
    """Kahn's algorithm with smallest-id-first tie breaking; ``None`` on a cycle."""
    nodes = set(nodes)
    succ: dict[int, list[int]] = {f: [] for f in nodes}
    indeg = dict.fromkeys(nodes, 0)
    for i, j in set(rel):
        succ[i].append(j)
        indeg[j] += 1
    ready = [f for f in nodes if indeg[f] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        f = heapq.heappop(ready)
        order.append(f)
        for g in succ[f]:
            indeg[g] -= 1
            if indeg[g] == 0:
                heapq.heappush(ready, g)
    if len(order) != len(nodes):
        return None
    return order


@dataclass(frozen=True)
class Catalogue:
    n_features: int
    hard: frozenset[Pair] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "hard", prec_set(self.hard))
        for i, j in self.hard:
            if not (1 <= i <= self.n_features and 1 <= j <= self.n_features):
                raise MalformedError(f"precedence {i} < {j} outside 1..{self.n_features}")

    @property
    def features(self) -> frozenset[int]:
        return frozenset(range(1, self.n_features + 1))

    @property
    def mutexes(self) -> frozenset[Pair]:
        return frozenset((i, j) for i, j in self.hard if i < j and (j, i) in self.hard)


@dataclass(frozen=True)
class BiRegionCatalogue:
    source_features: frozenset[int]
    target_features: frozenset[int]
    source_hard: frozenset[Pair] = frozenset()
    target_hard: frozenset[Pair] = frozenset()

    def __post_init__(self):
        for name in ("source_features", "target_features"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "source_hard", prec_set(self.source_hard))
        object.__setattr__(self, "target_hard", prec_set(self.target_hard))
        if restrict(self.source_hard, self.source_features) != self.source_hard:
            raise MalformedError("source precedence outside the source features")
        if restrict(self.target_hard, self.target_features) != self.target_hard:
            raise MalformedError("target precedence outside the target features")

    @property
    def reversible(self) -> frozenset[int]:
        return self.source_features & self.target_features

    def merged(self) -> Catalogue:
        feats = self.source_features | self.target_features
        return Catalogue(max(feats, default=0), self.source_hard | transpose(self.target_hard))


@dataclass(frozen=True)
class Subscription:
    """A subscription ``<F, H, P, w>`` of a merged catalogue.

    ``hard`` is derived from the catalogue; weights default to 1.
    """

    catalogue: Catalogue
    features: frozenset[int]
    user: frozenset[Pair] = frozenset()
    feature_weight: Mapping[int, int] = field(default_factory=dict)
    prec_weight: Mapping[Pair, int] = field(default_factory=dict)

    def __post_init__(self):
        feats = frozenset(self.features)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "user", prec_set(self.user))
        if not feats <= self.catalogue.features:
            raise MalformedError(f"features {sorted(feats - self.catalogue.features)} not in catalogue")
        for i, j in self.user:
            if i not in feats or j not in feats:
                raise MalformedError(f"user precedence {i} < {j} over unselected features")
        fw = {f: int(self.feature_weight.get(f, 1)) for f in sorted(feats)}
        pw = {p: int(self.prec_weight.get(p, 1)) for p in sorted(self.user)}
        extra = set(self.feature_weight) - feats
        if extra:
            raise MalformedError(f"weights given for unselected features {sorted(extra)}")
        if set(self.prec_weight) - self.user:
            raise MalformedError("weights given for unknown user precedences")
        if any(v < 1 for v in fw.values()) or any(v < 1 for v in pw.values()):
            raise MalformedError("weights must be >= 1")
        object.__setattr__(self, "feature_weight", fw)
        object.__setattr__(self, "prec_weight", pw)
        object.__setattr__(self, "hard", restrict(self.catalogue.hard, feats))

    hard: frozenset[Pair] = field(init=False, repr=False, compare=False)

    @classmethod
    def build(cls, features, hard=(), user=(), feature_weight=None, prec_weight=None, n_features=None):
        """Convenience constructor with a catalogue made of exactly ``hard``."""
        features = frozenset(features)
        hard = prec_set(hard)
        ids = set(features) | {f for p in hard for f in p}
        n = n_features if n_features is not None else max(ids, default=0)
        return cls(Catalogue(n, hard), features, prec_set(user),
                   dict(feature_weight or {}), dict(prec_weight or {}))

    @property
    def total_weight(self) -> int:
        return sum(self.feature_weight.values()) + sum(self.prec_weight.values())

    def with_user(self, user, prec_weight=None) -> "Subscription":
        return Subscription(self.catalogue, self.features, user, self.feature_weight, prec_weight or {})


@dataclass(frozen=True)
class Region:
    features: frozenset[int]
    hard: frozenset[Pair] = frozenset()
    user: frozenset[Pair] = frozenset()


@dataclass(frozen=True)
class BiRegionSubscription:
    source: Region
    target: Region
    feature_weight: Mapping[int, int] = field(default_factory=dict)
    prec_weight: Mapping[Pair, int] = field(default_factory=dict)  # keyed in merged orientation
    catalogue: BiRegionCatalogue | None = None

    def __post_init__(self):
        for name in ("source", "target"):
            r = getattr(self, name)
            r = Region(frozenset(r.features), prec_set(r.hard), prec_set(r.user))
            if restrict(r.hard | r.user, r.features) != r.hard | r.user:
                raise MalformedError(f"{name} precedence over features outside the region")
            object.__setattr__(self, name, r)
        cat = self.catalogue
        if cat is not None:
            fs, ft = self.source.features, self.target.features
            if not fs <= cat.source_features or not ft <= cat.target_features:
                raise MalformedError("region features not in the catalogue")
            if fs & cat.target_features != ft & cat.source_features:
                raise MalformedError("reversible feature selected in only one region")

    @property
    def reversible(self) -> frozenset[int]:
        return self.source.features & self.target.features

    @classmethod
    def from_catalogue(cls, cat: BiRegionCatalogue, fs, ft, ps=(), pt=(), feature_weight=None, prec_weight=None):
        """Build the pair of region tuples induced by a catalogue selection.

        Catalogue precedences on reversible features are mirrored into the
        other region, and so are user precedences.
        """
        fs, ft = frozenset(fs), frozenset(ft)
        rev = fs & ft
        hs = restrict(cat.source_hard, fs) | {(f, g) for g, f in cat.target_hard if f in rev and g in rev}
        ht = restrict(cat.target_hard, ft) | {(f, g) for g, f in cat.source_hard if f in rev and g in rev}
        ps, pt = prec_set(ps), prec_set(pt)
        ps2 = ps | {(f, g) for g, f in pt if f in rev and g in rev}
        pt2 = pt | {(f, g) for g, f in ps if f in rev and g in rev}
        return cls(Region(fs, hs, ps2), Region(ft, ht, pt2), dict(feature_weight or {}),
                   dict(prec_weight or {}), cat)


@dataclass(frozen=True)
class Relaxation:
    features: frozenset[int]
    precs: frozenset[Pair] = frozenset()
    value: int = 0


@dataclass(frozen=True)
class AntiSubscription:
    features: frozenset[int]
    precs: frozenset[Pair]

    @property
    def size(self) -> int:
        return len(self.features) + len(self.precs)


def is_consistent(sub: Subscription) -> tuple[bool, list[int] | None]:
    order = topological_order(sub.features, sub.hard | sub.user)
    return order is not None, order


def complete(sub: Subscription) -> list[int]:
    ok, order = is_consistent(sub)
    if not ok:
        raise InconsistentError("subscription has a precedence cycle")
    return order


def partial_completion(sub: Subscription) -> frozenset[Pair]:
    closure, cycle = transitive_closure(sub.hard | sub.user, sub.features)
    if cycle:
        raise InconsistentError("subscription has a precedence cycle")
    return closure


def anti_subscription(sub: Subscription, exclude_implied: bool = True) -> AntiSubscription:
    """Features and precedences whose addition would make ``sub`` inconsistent.

    Each candidate is probed with a full consistency check.  With
    ``exclude_implied`` the precedences already in ``(H u P)*`` are skipped,
    since adding them never changes consistency anyway.
    """
    if not is_consistent(sub)[0]:
        raise InconsistentError("anti-subscription needs a consistent subscription")
    cat = sub.catalogue
    feats = set(sub.features)
    fa = set()
    for f in sorted(cat.features - sub.features):
        grown = feats | {f}
        if topological_order(grown, restrict(cat.hard, grown) | sub.user) is None:
            fa.add(f)
    implied = partial_completion(sub) if exclude_implied else frozenset()
    base = sub.hard | sub.user
    pa = set()
    for i in sorted(feats):
        for j in sorted(feats):
            if i == j or (i, j) in implied:
                continue
            if topological_order(feats, base | {(i, j)}) is None:
                pa.add((i, j))
    return AntiSubscription(frozenset(fa), frozenset(pa))


def reformulate(bi: BiRegionSubscription) -> Subscription:
    """Merge a two-region subscription into one, transposing the target side."""
    src, tgt = bi.source, bi.target
    feats = src.features | tgt.features
    hard = src.hard | transpose(tgt.hard)
    user = src.user | transpose(tgt.user)
    if bi.catalogue is not None:
        cat = bi.catalogue.merged()
    else:
        cat = Catalogue(max(feats, default=0), hard)
    if restrict(cat.hard, feats) != hard:
        raise MalformedError("region hard precedences disagree with the catalogue")
    pw = {p: bi.prec_weight[p] for p in user if p in bi.prec_weight}
    fw = {f: bi.feature_weight[f] for f in feats if f in bi.feature_weight}
    return Subscription(cat, feats, user, fw, pw)


def value_of(relax: Relaxation, sub: Subscription) -> int:
    missing = (relax.features - sub.features) | {f for p in relax.precs for f in p} - relax.features
    if missing or not relax.precs <= sub.user:
        raise MalformedError("relaxation refers to elements outside the subscription")
    return sum(sub.feature_weight[f] for f in relax.features) + sum(sub.prec_weight[p] for p in relax.precs)


def verify_relaxation(sub: Subscription, relax: Relaxation) -> tuple[bool, int | str]:
    """Return ``(True, value)`` or ``(False, reason)`` for the first violated condition."""
    if not relax.features <= sub.features:
        return False, f"features {sorted(relax.features - sub.features)} not in the subscription"
    bad = [p for p in relax.precs if p not in sub.user]
    if bad:
        return False, f"precedence {sorted(bad)[0]} is not a user precedence"
    bad = [p for p in relax.precs if p[0] not in relax.features or p[1] not in relax.features]
    if bad:
        return False, f"precedence {sorted(bad)[0]} refers to a dropped feature"
    if topological_order(relax.features, restrict(sub.hard, relax.features) | relax.precs) is None:
        return False, "inconsistent: kept precedences contain a cycle"
    return True, value_of(relax, sub)


def relaxation_of(sub: Subscription, features, precs=()) -> Relaxation:
    r = Relaxation(frozenset(features), frozenset(precs))
    return Relaxation(r.features, r.precs, value_of(r, sub))

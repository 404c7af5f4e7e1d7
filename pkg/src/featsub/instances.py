"""Random instance generation and the ``.fsp`` text format.

Unordered feature pairs are indexed colexicographically: for 0-based
``i < j`` the index is ``j*(j-1)/2 + i``.

``.fsp`` is line oriented, ``#`` starts a comment, ids are 1-based::

    catalogue <n>
    hard <i> <j>            # i before j
    mutex <i> <j>           # hard i j + hard j i
    feature <id> <weight>
    uprec <i> <j> <weight>
    source <ids...>         # optional region split
    target <ids...>
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .model import (
    BiRegionSubscription,
    Catalogue,
    MalformedError,
    Region,
    Relaxation,
    Subscription,
    transpose,
)
from .rng import Rng

TYPES = ("<", ">", "<>")


def pair_from_index(p: int) -> tuple[int, int]:
    j = (1 + math.isqrt(1 + 8 * p)) // 2
    while j * (j - 1) // 2 > p:
        j -= 1
    while (j + 1) * j // 2 <= p:
        j += 1
    return p - j * (j - 1) // 2, j


def index_from_pair(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


@dataclass(frozen=True)
class CatalogueSpec:
    f_c: int
    b_c: int
    types: tuple[str, ...] = ("<", ">")

    def __post_init__(self):
        types = tuple(t for t in TYPES if t in set(self.types))
        if not types or set(self.types) - set(TYPES):
            raise ValueError(f"constraint types must be a non-empty subset of {TYPES}")
        object.__setattr__(self, "types", types)
        if self.f_c < 0 or not 0 <= self.b_c <= self.f_c * (self.f_c - 1) // 2:
            raise ValueError(f"cannot place {self.b_c} constraints on {self.f_c} features")


@dataclass(frozen=True)
class SubscriptionSpec:
    f_u: int
    p_u: int
    w: int = 4

    def check(self, cat: Catalogue):
        if not 0 <= self.f_u <= cat.n_features:
            raise ValueError(f"cannot select {self.f_u} of {cat.n_features} features")
        if not 0 <= self.p_u <= self.f_u * (self.f_u - 1) // 2:
            raise ValueError(f"cannot place {self.p_u} user precedences on {self.f_u} features")
        if self.w < 1:
            raise ValueError("maximum weight must be >= 1")


def gen_catalogue(spec: CatalogueSpec, seed: int) -> Catalogue:
    rng = Rng(seed)
    hard = set()
    for p in rng.sample(spec.f_c * (spec.f_c - 1) // 2, spec.b_c):
        i, j = pair_from_index(p)
        i, j = i + 1, j + 1
        kind = spec.types[rng.below(len(spec.types))]
        if kind in ("<", "<>"):
            hard.add((i, j))
        if kind in (">", "<>"):
            hard.add((j, i))
    return Catalogue(spec.f_c, frozenset(hard))


def gen_subscription(cat: Catalogue, spec: SubscriptionSpec, seed: int) -> Subscription:
    spec.check(cat)
    rng = Rng(seed)
    feats = sorted(k + 1 for k in rng.sample(cat.n_features, spec.f_u))
    user = []
    for p in rng.sample(spec.f_u * (spec.f_u - 1) // 2, spec.p_u):
        a, b = pair_from_index(p)
        i, j = feats[a], feats[b]
        user.append((i, j) if rng.below(2) == 0 else (j, i))
    fw = {f: rng.between(1, spec.w) for f in feats}
    pw = {p: rng.between(1, spec.w) for p in user}
    return Subscription(cat, frozenset(feats), frozenset(user), fw, pw)


@dataclass(frozen=True)
class Instance:
    subscription: Subscription
    source: frozenset[int] | None = None
    target: frozenset[int] | None = None
    name: str = ""

    def to_bi(self) -> BiRegionSubscription:
        """Split the merged subscription back into source and target regions."""
        if self.source is None or self.target is None:
            raise MalformedError("instance has no source/target partition")
        sub = self.subscription
        fs, ft = self.source, self.target
        if fs | ft != sub.features:
            raise MalformedError("source and target must cover the selected features")

        def split(rel):
            s = {p for p in rel if p[0] in fs and p[1] in fs}
            t = {p for p in rel if p[0] in ft and p[1] in ft}
            if set(rel) - s - t:
                raise MalformedError(f"precedence {sorted(set(rel) - s - t)[0]} spans both regions")
            return frozenset(s), transpose(t)

        hs, ht = split(sub.hard)
        ps, pt = split(sub.user)
        return BiRegionSubscription(Region(fs, hs, ps), Region(ft, ht, pt),
                                    dict(sub.feature_weight), dict(sub.prec_weight))


class FspError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def parse_fsp(text: str, name: str = "") -> Instance:
    n = None
    hard: dict[tuple[int, int], int] = {}
    feats: dict[int, int] = {}
    users: dict[tuple[int, int], tuple[int, int]] = {}
    regions: dict[str, tuple[frozenset[int], int]] = {}

    def ids(lineno, toks, count=None):
        if count is not None and len(toks) != count:
            raise FspError(lineno, f"expected {count} integers, got {len(toks)}")
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise FspError(lineno, f"not an integer in {' '.join(toks)!r}") from None
        return vals

    def check_id(lineno, f):
        if not 1 <= f <= n:
            raise FspError(lineno, f"feature id {f} out of range 1..{n}")

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *toks = line.split()
        if key == "catalogue":
            if n is not None:
                raise FspError(lineno, "duplicate catalogue declaration")
            (n,) = ids(lineno, toks, 1)
            if n < 0:
                raise FspError(lineno, "negative feature count")
            continue
        if n is None:
            raise FspError(lineno, "catalogue declaration must come first")
        if key in ("hard", "mutex"):
            i, j = ids(lineno, toks, 2)
            check_id(lineno, i)
            check_id(lineno, j)
            if i == j:
                raise FspError(lineno, f"reflexive precedence {i} {j}")
            for p in [(i, j)] + ([(j, i)] if key == "mutex" else []):
                if p in hard:
                    raise FspError(lineno, f"duplicate precedence {p[0]} {p[1]} (first on line {hard[p]})")
                hard[p] = lineno
        elif key == "feature":
            f, w = ids(lineno, toks, 2)
            check_id(lineno, f)
            if f in feats:
                raise FspError(lineno, f"duplicate feature {f}")
            if w < 1:
                raise FspError(lineno, "weights must be >= 1")
            feats[f] = w
        elif key == "uprec":
            i, j, w = ids(lineno, toks, 3)
            check_id(lineno, i)
            check_id(lineno, j)
            if i == j:
                raise FspError(lineno, f"reflexive precedence {i} {j}")
            if (i, j) in users:
                raise FspError(lineno, f"duplicate user precedence {i} {j}")
            if w < 1:
                raise FspError(lineno, "weights must be >= 1")
            users[(i, j)] = (w, lineno)
        elif key in ("source", "target"):
            if key in regions:
                raise FspError(lineno, f"duplicate {key} declaration")
            vals = ids(lineno, toks)
            for f in vals:
                check_id(lineno, f)
            regions[key] = (frozenset(vals), lineno)
        else:
            raise FspError(lineno, f"unknown directive {key!r}")

    if n is None:
        raise FspError(0, "missing catalogue declaration")
    for (i, j), (_, lineno) in users.items():
        for f in (i, j):
            if f not in feats:
                raise FspError(lineno, f"user precedence refers to unselected feature {f}")
    for key, (vals, lineno) in regions.items():
        if not vals <= set(feats):
            raise FspError(lineno, f"{key} lists unselected features {sorted(vals - set(feats))}")
    if len(regions) == 1:
        raise FspError(list(regions.values())[0][1], "source and target must be given together")
    cat = Catalogue(n, frozenset(hard))
    sub = Subscription(cat, frozenset(feats), frozenset(users), feats,
                       {p: w for p, (w, _) in users.items()})
    src = regions.get("source", (None, 0))[0]
    tgt = regions.get("target", (None, 0))[0]
    return Instance(sub, src, tgt, name)


def write_fsp(inst: Instance | Subscription) -> str:
    if isinstance(inst, Subscription):
        inst = Instance(inst)
    sub = inst.subscription
    cat = sub.catalogue
    lines = []
    if inst.name:
        lines.append(f"# {inst.name}")
    lines.append(f"catalogue {cat.n_features}")
    mutex = cat.mutexes
    for i, j in sorted(mutex):
        lines.append(f"mutex {i} {j}")
    for i, j in sorted(cat.hard):
        if (min(i, j), max(i, j)) not in mutex:
            lines.append(f"hard {i} {j}")
    for f in sorted(sub.features):
        lines.append(f"feature {f} {sub.feature_weight[f]}")
    for i, j in sorted(sub.user):
        lines.append(f"uprec {i} {j} {sub.prec_weight[(i, j)]}")
    if inst.source is not None:
        lines.append("source " + " ".join(map(str, sorted(inst.source))))
        lines.append("target " + " ".join(map(str, sorted(inst.target))))
    return "\n".join(lines) + "\n"


def read_fsp(path) -> Instance:
    path = Path(path)
    return parse_fsp(path.read_text(), path.stem)


def manifest(cspec: CatalogueSpec, sspec: SubscriptionSpec, cat_seed: int, sub_seed: int) -> str:
    return "\n".join([
        f"catalogue: {cspec.f_c},{cspec.b_c},{','.join(cspec.types)}",
        f"catalogue_seed: {cat_seed}",
        f"subscription: {sspec.f_u},{sspec.p_u},{sspec.w}",
        f"subscription_seed: {sub_seed}",
        "rng: xorshift64* seeded by splitmix64",
    ]) + "\n"


def format_relaxation(relax: Relaxation) -> str:
    """Text form read back by :func:`parse_relaxation`::

        features 1 3 4
        prec 1 3
        value 9
    """
    lines = [" ".join(["features", *map(str, sorted(relax.features))])]
    lines += [f"prec {i} {j}" for i, j in sorted(relax.precs)]
    lines.append(f"value {relax.value}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_relaxation(text: str) -> Relaxation:
    feats, precs, value = None, set(), None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *toks = line.split()
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise FspError(lineno, f"not an integer in {line!r}") from None
        if key == "features" and feats is None:
            feats = frozenset(vals)
        elif key == "prec" and len(vals) == 2:
            precs.add(tuple(vals))
        elif key == "value" and len(vals) == 1:
            value = vals[0]
        else:
            raise FspError(lineno, f"unexpected line {line!r}")
    if feats is None:
        raise FspError(0, "missing features line")
    return Relaxation(feats, frozenset(precs), value if value is not None else 0)

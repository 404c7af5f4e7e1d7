"""Depth-first branch and bound for optimal relaxations.

The model has, per feature ``i``, an inclusion Boolean ``bf_i`` and a
position interval ``pf_i`` in ``[1, n]``; per user precedence an inclusion
Boolean ``bp_ij``; and the objective ``v`` kept as an interval.  Only the
Booleans are branched on.  Propagation is either plain arc consistency (AC),
or AC plus singleton tests on the Booleans, either one pass (RSAC) or to a
fixpoint in SAC-1 style (SAC).

Booleans are numbered ``0..n-1`` for features (sorted by id) and
``n..n+m-1`` for user precedences (sorted pairs).  Domains are ``-1``
(unknown), ``0`` (out) or ``1`` (in).
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

from .model import Relaxation, Subscription, topological_order, value_of

AC, RSAC, SAC, SOFTPREC = "ac", "rsac", "sac", "softprec"
LEVELS = (AC, RSAC, SAC, SOFTPREC)
DOM_DEG, DOM_WDEG = "dom/deg", "dom/wdeg"
HEURISTICS = (DOM_DEG, DOM_WDEG)
UNKNOWN = -1


@dataclass
class SolverConfig:
    level: str = RSAC
    heuristic: str = DOM_WDEG
    time_limit: float | None = 60.0
    node_limit: int | None = None
    seed: int = 0  # reserved

    def __post_init__(self):
        self.heuristic = self.heuristic.replace("-", "/")
        if self.level not in LEVELS:
            raise ValueError(f"unknown propagation level {self.level!r}")
        if self.heuristic not in HEURISTICS:
            raise ValueError(f"unknown heuristic {self.heuristic!r}")


@dataclass
class SearchStats:
    nodes: int = 0
    time: float = 0.0
    trace: list = field(default_factory=list)  # (node, value) at each improvement
    completed: bool = True
    ac_calls: int = 0
    order: list = field(default_factory=list)  # a total order of the best relaxation


class SearchState:
    __slots__ = ("b", "pmin", "pmax", "vmin", "vmax")

    def __init__(self, b, pmin, pmax, vmin, vmax):
        self.b, self.pmin, self.pmax = b, pmin, pmax
        self.vmin, self.vmax = vmin, vmax

    def copy(self):
        return SearchState(self.b[:], self.pmin[:], self.pmax[:], self.vmin, self.vmax)

    @property
    def lb(self):
        return self.vmin

    @property
    def ub(self):
        return self.vmax


class Compiled:
    """Index-based view of a subscription shared by the models."""

    def __init__(self, sub: Subscription):
        self.sub = sub
        self.features = sorted(sub.features)
        self.index = {f: k for k, f in enumerate(self.features)}
        self.n = len(self.features)
        self.hard = sorted((self.index[i], self.index[j]) for i, j in sub.hard)
        self.user_pairs = sorted(sub.user)
        self.user = [(self.index[i], self.index[j]) for i, j in self.user_pairs]
        self.m = len(self.user)
        self.nb = self.n + self.m
        self.weight = [sub.feature_weight[f] for f in self.features] + \
                      [sub.prec_weight[p] for p in self.user_pairs]
        self.total = sum(self.weight)

    def relaxation(self, b) -> Relaxation:
        feats = frozenset(self.features[k] for k in range(self.n) if b[k] == 1)
        precs = frozenset(self.user_pairs[k] for k in range(self.m) if b[self.n + k] == 1)
        r = Relaxation(feats, precs)
        return Relaxation(feats, precs, value_of(r, self.sub))


class BasicModel:
    """The COP model with AC on all constraints and optional singleton tests."""

    def __init__(self, sub: Subscription, level: str = AC):
        self.c = c = Compiled(sub)
        self.level = level
        n, m = c.n, c.m
        self.nh = len(c.hard)
        self.sum_id = self.nh + m
        self.nc = self.sum_id + 1
        self.weights = [1] * self.nc
        self.bool_watch = [[] for _ in range(c.nb)]
        self.pf_watch = [[] for _ in range(n)]
        for k, (i, j) in enumerate(c.hard):
            self.bool_watch[i].append(k)
            self.bool_watch[j].append(k)
            self.pf_watch[i].append(k)
            self.pf_watch[j].append(k)
        for k, (i, j) in enumerate(c.user):
            cid = self.nh + k
            for v in (i, j, n + k):
                self.bool_watch[v].append(cid)
            self.pf_watch[i].append(cid)
            self.pf_watch[j].append(cid)
        for v in range(c.nb):
            self.bool_watch[v].append(self.sum_id)
        self.degree = [len(w) for w in self.bool_watch]
        self.ac_calls = 0
        self.last_failure = None

    # -- state ---------------------------------------------------------
    def root(self) -> SearchState:
        n = self.c.n
        return SearchState([UNKNOWN] * self.c.nb, [1] * n, [n] * n, 0, self.c.total)

    def all_constraints(self):
        return range(self.nc)

    def assign(self, st: SearchState, x: int, val: int):
        st.b[x] = val
        return self.bool_watch[x]

    def raise_lb(self, st: SearchState, v: int):
        if v > st.vmin:
            st.vmin = v
            return [self.sum_id]
        return []

    # -- arc consistency -------------------------------------------------
    def ac(self, st: SearchState, seeds=None) -> bool:
        """Run AC to a fixpoint from ``seeds`` (all constraints if None)."""
        self.ac_calls += 1
        c = self.c
        n, nh, sum_id = c.n, self.nh, self.sum_id
        hard, user, weight = c.hard, c.user, c.weight
        b, pmin, pmax = st.b, st.pmin, st.pmax
        bool_watch, pf_watch = self.bool_watch, self.pf_watch
        inq = [False] * self.nc
        queue = deque()
        for cid in (range(self.nc) if seeds is None else seeds):
            if not inq[cid]:
                inq[cid] = True
                queue.append(cid)

        def touch(ws):
            for k in ws:
                if not inq[k]:
                    inq[k] = True
                    queue.append(k)

        while queue:
            cid = queue.popleft()
            ok = True
            if cid < nh:
                i, j = hard[cid]
                bi, bj = b[i], b[j]
                if bi == 0 or bj == 0:
                    pass
                elif bi == 1 and bj == 1:
                    ok = self._less(st, i, j, touch)
                elif bi == 1:
                    if pmin[i] >= pmax[j]:
                        b[j] = 0
                        touch(bool_watch[j])
                elif bj == 1:
                    if pmin[i] >= pmax[j]:
                        b[i] = 0
                        touch(bool_watch[i])
            elif cid < sum_id:
                k = cid - nh
                i, j = user[k]
                x = n + k
                bx, bi, bj = b[x], b[i], b[j]
                if bx == 1:
                    if bi == 0 or bj == 0:
                        ok = False
                    else:
                        if bi == UNKNOWN:
                            b[i] = 1
                            touch(bool_watch[i])
                        if bj == UNKNOWN:
                            b[j] = 1
                            touch(bool_watch[j])
                        ok = self._less(st, i, j, touch)
                elif bx == 0:
                    if bi == 1 and bj == 1:
                        ok = self._not_less(st, i, j, touch)
                    elif bi == 1 and bj == UNKNOWN and pmax[i] < pmin[j]:
                        b[j] = 0
                        touch(bool_watch[j])
                    elif bj == 1 and bi == UNKNOWN and pmax[i] < pmin[j]:
                        b[i] = 0
                        touch(bool_watch[i])
                else:
                    if bi == 0 or bj == 0 or pmin[i] >= pmax[j]:
                        b[x] = 0
                        touch(bool_watch[x])
                    elif bi == 1 and bj == 1 and pmax[i] < pmin[j]:
                        b[x] = 1
                        touch(bool_watch[x])
            else:
                ok = self._revise_sum(st, touch)
            inq[cid] = False
            if not ok:
                self.weights[cid] += 1
                self.last_failure = cid
                return False
        return True

    def _less(self, st, i, j, touch) -> bool:
        """Bounds consistency for pf_i < pf_j."""
        pmin, pmax = st.pmin, st.pmax
        if pmin[j] <= pmin[i]:
            pmin[j] = pmin[i] + 1
            if pmin[j] > pmax[j]:
                return False
            touch(self.pf_watch[j])
        if pmax[i] >= pmax[j]:
            pmax[i] = pmax[j] - 1
            if pmax[i] < pmin[i]:
                return False
            touch(self.pf_watch[i])
        return True

    def _not_less(self, st, i, j, touch) -> bool:
        """Bounds consistency for pf_i >= pf_j."""
        pmin, pmax = st.pmin, st.pmax
        if pmin[i] < pmin[j]:
            pmin[i] = pmin[j]
            if pmin[i] > pmax[i]:
                return False
            touch(self.pf_watch[i])
        if pmax[j] > pmax[i]:
            pmax[j] = pmax[i]
            if pmax[j] < pmin[j]:
                return False
            touch(self.pf_watch[j])
        return True

    def _revise_sum(self, st, touch) -> bool:
        b, weight = st.b, self.c.weight
        while True:
            lo = hi = 0
            for x, w in enumerate(weight):
                if b[x] == 1:
                    lo += w
                    hi += w
                elif b[x] == UNKNOWN:
                    hi += w
            if lo > st.vmin:
                st.vmin = lo
            if hi < st.vmax:
                st.vmax = hi
            if st.vmin > st.vmax:
                return False
            changed = False
            for x, w in enumerate(weight):
                if b[x] != UNKNOWN:
                    continue
                if hi - w < st.vmin:
                    b[x] = 1
                elif lo + w > st.vmax:
                    b[x] = 0
                else:
                    continue
                changed = True
                touch(self.bool_watch[x])
            if not changed:
                return True

    # -- singleton consistency ---------------------------------------------
    def singleton(self, st: SearchState, restricted: bool) -> bool:
        b = st.b
        while True:
            removed = False
            for x in range(self.c.nb):
                for a in (1, 0):
                    if b[x] != UNKNOWN:
                        break
                    probe = st.copy()
                    probe.b[x] = a
                    if self.ac(probe, self.bool_watch[x]):
                        continue
                    b[x] = 1 - a
                    removed = True
                    if not self.ac(st, self.bool_watch[x]):
                        return False
            if restricted or not removed:
                return True

    def propagate(self, st: SearchState, seeds=None) -> bool:
        if not self.ac(st, seeds):
            return False
        if self.level == RSAC:
            return self.singleton(st, True)
        if self.level == SAC:
            return self.singleton(st, False)
        return True

    # -- variable ordering ------------------------------------------------
    def _future(self, st, cid) -> int:
        b, pmin, pmax = st.b, st.pmin, st.pmax
        if cid == self.sum_id:
            return sum(1 for v in b if v == UNKNOWN)
        if cid < self.nh:
            i, j = self.c.hard[cid]
            vs = [b[i], b[j]]
        else:
            k = cid - self.nh
            i, j = self.c.user[k]
            vs = [b[i], b[j], b[self.c.n + k]]
        cnt = sum(1 for v in vs if v == UNKNOWN)
        cnt += (pmin[i] < pmax[i]) + (pmin[j] < pmax[j])
        return cnt

    def choose(self, st: SearchState, heuristic: str):
        best, best_score = None, None
        for x, v in enumerate(st.b):
            if v != UNKNOWN:
                continue
            if heuristic == DOM_DEG:
                deg = self.degree[x]
            else:
                deg = sum(self.weights[k] for k in self.bool_watch[x] if self._future(st, k) >= 2)
            score = 2 / deg if deg else float("inf")
            if best is None or score < best_score:
                best, best_score = x, score
        return best

    def value(self, st: SearchState) -> int:
        return sum(w for x, w in enumerate(self.c.weight) if st.b[x] == 1)

    def booleans(self, st: SearchState):
        return st.b


def propagate_ac(state: SearchState, model: BasicModel) -> bool:
    return model.ac(state)


def propagate_singleton(state: SearchState, model: BasicModel, restricted: bool) -> bool:
    return model.singleton(state, restricted)


def choose_variable(state: SearchState, model, heuristic: str):
    return model.choose(state, heuristic)


def make_model(sub: Subscription, level: str):
    if level == SOFTPREC:
        from .softprec import SoftPrecModel
        return SoftPrecModel(sub)
    return BasicModel(sub, level)


class _Stop(Exception):
    pass


def solve(sub: Subscription, config: SolverConfig | None = None) -> tuple[Relaxation, SearchStats]:
    """Find a maximum-value consistent relaxation of ``sub``.

    Values are tried ``in`` before ``out``; a node is pruned as soon as the
    objective upper bound cannot beat the incumbent.  When a limit stops the
    search, the best relaxation found so far is returned and
    ``stats.completed`` is False.
    """
    config = config or SolverConfig()
    model = make_model(sub, config.level)
    stats = SearchStats()
    start = time.perf_counter()
    deadline = start + config.time_limit if config.time_limit else None
    best = {"value": -1, "state": None}

    def node(st, seeds):
        stats.nodes += 1
        if config.node_limit is not None and stats.nodes > config.node_limit:
            raise _Stop
        if deadline is not None and time.perf_counter() > deadline:
            raise _Stop
        seeds = list(seeds) + model.raise_lb(st, best["value"] + 1)
        if not model.propagate(st, seeds):
            return
        x = model.choose(st, config.heuristic)
        if x is None:
            val = model.value(st)
            if val > best["value"]:
                best["value"], best["state"] = val, st
                stats.trace.append((stats.nodes, val))
            return
        for val in (1, 0):
            child = st.copy()
            node(child, model.assign(child, x, val))

    try:
        node(model.root(), model.all_constraints())
    except _Stop:
        stats.completed = False
    stats.time = time.perf_counter() - start
    stats.ac_calls = getattr(model, "ac_calls", 0)
    c = model.c
    if best["state"] is None:
        relax = Relaxation(frozenset(), frozenset(), 0)
    else:
        relax = c.relaxation(model.booleans(best["state"]))
    stats.order = topological_order(relax.features, {p for p in sub.hard if p[0] in relax.features
                                                    and p[1] in relax.features} | relax.precs) or []
    return relax, stats

"""Propagator for the soft precedence global constraint.

State: inclusion Booleans ``bf`` plus a full order matrix ``M[i][j]`` in
{-1, 0, 1} meaning *i before j* is unknown / false / true.  The entries of
``M`` for user precedences are decision variables; the rest are derived.

Filtering rules, applied to a fixpoint:

* a true entry forces both endpoints in and its mirror false;
* true entries are closed under transitivity;
* a hard precedence between two included features is true;
* features that would close a cycle with only included features in between
  are incompatible: at most one of them may be in (a feature on such a cycle
  with itself must be out);
* an entry whose reverse is forced this way must be false;
* the objective upper bound subtracts, for a greedy matching of the
  incompatibility graph, the lighter endpoint of every matched edge.

Every fixpoint costs O(n^3) bit operations.
"""
from __future__ import annotations

from .bnb import DOM_DEG, UNKNOWN, Compiled
from .model import Subscription


class SoftPrecState:
    __slots__ = ("bf", "M", "vmin", "incompat")

    def __init__(self, bf, M, vmin=0):
        self.bf, self.M, self.vmin = bf, M, vmin
        self.incompat = set()

    def copy(self):
        st = SoftPrecState(self.bf[:], [row[:] for row in self.M], self.vmin)
        st.incompat = set(self.incompat)
        return st

    def true_part(self):
        n = len(self.bf)
        return {(i, j) for i in range(n) for j in range(n) if self.M[i][j] == 1}


class _Fail(Exception):
    pass


class SoftPrecModel:
    def __init__(self, sub: Subscription):
        self.c = c = Compiled(sub)
        self.hard_set = set(c.hard)
        self.degree = [0] * c.nb
        for i, j in c.hard:
            self.degree[i] += 1
            self.degree[j] += 1
        for k, (i, j) in enumerate(c.user):
            self.degree[i] += 1
            self.degree[j] += 1
            self.degree[c.n + k] += 1
        self.ac_calls = 0

    def root(self) -> SoftPrecState:
        n = self.c.n
        M = [[UNKNOWN] * n for _ in range(n)]
        for i in range(n):
            M[i][i] = 0
        return SoftPrecState([UNKNOWN] * n, M)

    def all_constraints(self):
        return []

    def raise_lb(self, st, v):
        st.vmin = max(st.vmin, v)
        return []

    def _get(self, st, x):
        c = self.c
        if x < c.n:
            return st.bf[x]
        i, j = c.user[x - c.n]
        return st.M[i][j]

    def assign(self, st, x, val):
        c = self.c
        if x < c.n:
            st.bf[x] = val
        else:
            i, j = c.user[x - c.n]
            st.M[i][j] = val
        return []

    # -- filtering -----------------------------------------------------------
    def _set_bf(self, st, i, val):
        cur = st.bf[i]
        if cur == val:
            return False
        if cur != UNKNOWN:
            raise _Fail
        st.bf[i] = val
        return True

    def _set_m(self, st, i, j, val):
        cur = st.M[i][j]
        if cur == val:
            return False
        if cur != UNKNOWN:
            raise _Fail
        st.M[i][j] = val
        return True

    def _round(self, st) -> bool:
        """One sweep of all rules; returns whether anything changed."""
        n = self.c.n
        bf, M = st.bf, st.M
        changed = False
        for i in range(n):
            row = M[i]
            for j in range(n):
                if row[j] == 1:
                    changed |= self._set_bf(st, i, 1)
                    changed |= self._set_bf(st, j, 1)
                    changed |= self._set_m(st, j, i, 0)
                elif row[j] == UNKNOWN and (bf[i] == 0 or bf[j] == 0):
                    row[j] = 0
                    changed = True
        # forced-order reachability: paths whose inner features are all in
        reach = [0] * n
        for i in range(n):
            r = 0
            for j in range(n):
                if M[i][j] == 1:
                    r |= 1 << j
            reach[i] = r
        for i, j in self.c.hard:
            if bf[i] != 0 and bf[j] != 0:
                reach[i] |= 1 << j
        for k in range(n):
            if bf[k] != 1:
                continue
            bit, rk = 1 << k, reach[k]
            for i in range(n):
                if reach[i] & bit:
                    reach[i] |= rk
        incompat = set()
        for i in range(n):
            if bf[i] == 0:
                continue
            ri = reach[i]
            if ri >> i & 1:
                changed |= self._set_bf(st, i, 0)
                continue
            for j in range(n):
                if j == i or bf[j] == 0 or not ri >> j & 1:
                    continue
                # including i and j forces i before j
                if bf[i] == 1 and bf[j] == 1:
                    changed |= self._set_m(st, i, j, 1)
                if M[j][i] == UNKNOWN:
                    M[j][i] = 0
                    changed = True
                if M[i][j] == 0:
                    if bf[i] == 1:
                        changed |= self._set_bf(st, j, 0)
                    elif bf[j] == 1:
                        changed |= self._set_bf(st, i, 0)
                if reach[j] >> i & 1 and i < j:
                    incompat.add((i, j))
        for i, j in incompat:
            if bf[i] == 1:
                changed |= self._set_bf(st, j, 0)
            elif bf[j] == 1:
                changed |= self._set_bf(st, i, 0)
        st.incompat = {(i, j) for i, j in incompat if bf[i] == UNKNOWN and bf[j] == UNKNOWN}
        return changed

    def _bound_round(self, st) -> bool:
        c = self.c
        ub, matched = self._bound(st)
        if ub < st.vmin:
            raise _Fail
        changed = False
        for x in range(c.nb):
            if self._get(st, x) != UNKNOWN:
                continue
            w = c.weight[x]
            if x < c.n:
                lost = w + sum(c.weight[c.n + k] for k, (i, j) in enumerate(c.user)
                               if x in (i, j) and st.M[i][j] != 0)
                lost -= matched.get(x, 0)
            else:
                lost = w
            if ub - lost < st.vmin:
                self.assign(st, x, 1)
                changed = True
        return changed

    def _bound(self, st):
        """Upper bound on the objective and the penalty charged per matched feature."""
        c = self.c
        ub = sum(c.weight[i] for i in range(c.n) if st.bf[i] != 0)
        for k, (i, j) in enumerate(c.user):
            if st.M[i][j] != 0 and st.bf[i] != 0 and st.bf[j] != 0:
                ub += c.weight[c.n + k]
        w = c.weight
        edges = sorted(st.incompat, key=lambda e: (-min(w[e[0]], w[e[1]]), e))
        used = {}
        for i, j in edges:
            if i in used or j in used:
                continue
            pen = min(w[i], w[j])
            used[i] = used[j] = pen
            ub -= pen
        return ub, used

    def propagate(self, st, seeds=None) -> bool:
        self.ac_calls += 1
        try:
            while self._round(st) or self._bound_round(st):
                pass
        except _Fail:
            return False
        return True

    def upper_bound(self, st) -> int:
        return self._bound(st)[0]

    def choose(self, st, heuristic=DOM_DEG):
        best = None
        for x in range(self.c.nb):
            if self._get(st, x) == UNKNOWN and (best is None or self.degree[x] > self.degree[best]):
                best = x
        return best

    def value(self, st) -> int:
        c = self.c
        v = sum(c.weight[i] for i in range(c.n) if st.bf[i] == 1)
        return v + sum(c.weight[c.n + k] for k, (i, j) in enumerate(c.user) if st.M[i][j] == 1)

    def booleans(self, st):
        return [self._get(st, x) for x in range(self.c.nb)]


def softprec_propagate(state: SoftPrecState, model: SoftPrecModel) -> bool:
    return model.propagate(state)


def upper_bound(state: SoftPrecState, model: SoftPrecModel) -> int:
    return model.upper_bound(state)

"""Partial weighted MaxSAT encodings of the optimal relaxation problem.

Three encodings share the problem variables ``bf_i`` (feature kept) and
``bp_ij`` (precedence holds) and the unit soft clauses on them; they differ
in how acyclicity is expressed:

* atom: explicit asymmetry and transitivity clauses over ``bp``;
* unary: ``n`` order-encoded position bits per feature;
* binary: ``ceil(log2 n)`` position bits per feature compared
  lexicographically, flattened with Tseitin auxiliaries.

Variables are numbered ``bf`` first (by feature id), then ``bp`` (sorted
pairs), then auxiliaries.  Literals are signed DIMACS integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ..model import Relaxation, Subscription, transitive_closure, value_of

HARD = None  # the weight of a hard clause


@dataclass
class WeightedClauseSet:
    names: list = field(default_factory=list)        # names[v-1] is the role of variable v
    clauses: list = field(default_factory=list)      # (weight or HARD, tuple of literals)
    kinds: list = field(default_factory=list)        # clause family, parallel to clauses
    index: dict = field(default_factory=dict)

    def var(self, name: str) -> int:
        if name in self.index:
            return self.index[name]
        self.names.append(name)
        self.index[name] = len(self.names)
        return len(self.names)

    def add(self, weight, lits, kind="hard"):
        lits = tuple(lits)
        if not lits:
            raise ValueError("empty clause")
        for lit in lits:
            if lit == 0 or abs(lit) > len(self.names):
                raise ValueError(f"literal {lit} does not reference a declared variable")
        if weight is not HARD and weight < 1:
            raise ValueError("soft weights must be positive")
        self.clauses.append((weight, lits))
        self.kinds.append(kind)

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def soft_total(self) -> int:
        return sum(w for w, _ in self.clauses if w is not HARD)

    @property
    def top(self) -> int:
        return self.soft_total + 1

    def hard_clauses(self):
        return [c for w, c in self.clauses if w is HARD]

    def soft_clauses(self):
        return [(w, c) for w, c in self.clauses if w is not HARD]

    def census(self) -> dict:
        out: dict = {}
        for k in self.kinds:
            out[k] = out.get(k, 0) + 1
        return out


def bf(i):
    return f"bf_{i}"


def bp(i, j):
    return f"bp_{i}_{j}"


def _problem_vars(sub: Subscription, precs) -> WeightedClauseSet:
    wcs = WeightedClauseSet()
    for f in sorted(sub.features):
        wcs.var(bf(f))
    for i, j in sorted(precs):
        wcs.var(bp(i, j))
    return wcs


def _catalogue_and_support(wcs, sub, precs):
    v = wcs.index
    for i, j in sorted(sub.hard):
        wcs.add(HARD, (-v[bf(i)], -v[bf(j)], v[bp(i, j)]), "catalogue")
    for i, j in sorted(precs):
        wcs.add(HARD, (-v[bp(i, j)], v[bf(i)]), "support")
        wcs.add(HARD, (-v[bp(i, j)], v[bf(j)]), "support")


def _objective(wcs, sub):
    v = wcs.index
    for f in sorted(sub.features):
        wcs.add(sub.feature_weight[f], (v[bf(f)],), "soft")
    for i, j in sorted(sub.user):
        wcs.add(sub.prec_weight[(i, j)], (v[bp(i, j)],), "soft")


def encode_atom(sub: Subscription, reduced: bool = False) -> WeightedClauseSet:
    feats = sorted(sub.features)
    if reduced:
        dom, _ = transitive_closure(sub.hard | sub.user, feats)
    else:
        dom = frozenset((i, j) for i in feats for j in feats if i != j)
    wcs = _problem_vars(sub, dom)
    v = wcs.index
    for i, j in sorted(sub.hard):
        wcs.add(HARD, (-v[bf(i)], -v[bf(j)], v[bp(i, j)]), "catalogue")
    for i, j in sorted(dom):
        if i < j and (j, i) in dom:
            wcs.add(HARD, (-v[bp(i, j)], -v[bp(j, i)]), "asymmetry")
    succ: dict = {}
    for i, j in dom:
        succ.setdefault(i, []).append(j)
    hard = sub.hard
    for i, j in sorted(dom):
        for k in sorted(succ.get(j, ())):
            if k == i or (i, k) not in dom:
                continue
            if reduced and ((j, i) in hard or (k, j) in hard or (i, k) in hard):
                continue
            wcs.add(HARD, (-v[bp(i, j)], -v[bp(j, k)], v[bp(i, k)]), "transitivity")
    for i, j in sorted(dom):
        wcs.add(HARD, (-v[bp(i, j)], v[bf(i)]), "support")
        wcs.add(HARD, (-v[bp(i, j)], v[bf(j)]), "support")
    _objective(wcs, sub)
    return wcs


def encode_symbol_unary(sub: Subscription) -> WeightedClauseSet:
    feats = sorted(sub.features)
    n = len(feats)
    precs = sub.hard | sub.user
    wcs = _problem_vars(sub, precs)
    pos = {f: [wcs.var(f"pos_{f}_{k}") for k in range(1, n + 1)] for f in feats}
    for f in feats:
        m = pos[f]
        for k in range(n - 1):
            wcs.add(HARD, (-m[k + 1], m[k]), "order")
    _catalogue_and_support(wcs, sub, precs)
    v = wcs.index
    for i, j in sorted(precs):
        x = v[bp(i, j)]
        pi, pj = pos[i], pos[j]
        wcs.add(HARD, (-x, -pi[n - 1]), "precedence")
        wcs.add(HARD, (-x, pj[0]), "precedence")
        for k in range(n - 1):
            wcs.add(HARD, (-x, -pi[k], pj[k + 1]), "precedence")
    _objective(wcs, sub)
    return wcs


def bit_width(n: int) -> int:
    return max(1, (n - 1).bit_length())


def encode_symbol_binary(sub: Subscription) -> WeightedClauseSet:
    feats = sorted(sub.features)
    n = len(feats)
    kappa = bit_width(n)
    precs = sub.hard | sub.user
    wcs = _problem_vars(sub, precs)
    pos = {f: [wcs.var(f"pos_{f}_{m}") for m in range(1, kappa + 1)] for f in feats}
    _catalogue_and_support(wcs, sub, precs)
    v = wcs.index
    for i, j in sorted(precs):
        lt = [wcs.var(f"lt_{i}_{j}_{m}") for m in range(1, kappa + 1)]
        wcs.add(HARD, (-v[bp(i, j)], lt[0]), "precedence")
        for m in range(kappa):
            a, b = pos[i][m], pos[j][m]
            if m == kappa - 1:
                # lt <-> (~a & b)
                _tseitin_and(wcs, lt[m], -a, b)
                continue
            lo = wcs.var(f"less_{i}_{j}_{m + 1}")
            eq = wcs.var(f"eq_{i}_{j}_{m + 1}")
            tie = wcs.var(f"tie_{i}_{j}_{m + 1}")
            _tseitin_or(wcs, lt[m], lo, tie)
            _tseitin_and(wcs, lo, -a, b)
            _tseitin_and(wcs, tie, eq, lt[m + 1])
            # eq <-> (a <-> b)
            wcs.add(HARD, (-eq, -a, b), "tseitin")
            wcs.add(HARD, (-eq, a, -b), "tseitin")
            wcs.add(HARD, (eq, a, b), "tseitin")
            wcs.add(HARD, (eq, -a, -b), "tseitin")
    _objective(wcs, sub)
    return wcs


def _tseitin_or(wcs, s0, s1, s2):
    wcs.add(HARD, (-s0, s1, s2), "tseitin")
    wcs.add(HARD, (s0, -s1), "tseitin")
    wcs.add(HARD, (s0, -s2), "tseitin")


def _tseitin_and(wcs, s0, s1, s2):
    wcs.add(HARD, (s0, -s1, -s2), "tseitin")
    wcs.add(HARD, (-s0, s1), "tseitin")
    wcs.add(HARD, (-s0, s2), "tseitin")


def encode_unary_value(m: int, n: int) -> str:
    return "1" * m + "0" * (n - m)


def encode_binary_value(m: int, kappa: int) -> str:
    return format(m, f"0{kappa}b")


# -- unit propagation and a small DPLL -------------------------------------

def unit_propagate(clauses, assumptions=()):
    """Return ``(True, assignment)`` at the fixpoint or ``(False, assignment)`` on conflict.

    ``assignment`` maps variable -> bool.
    """
    assign: dict = {}
    for lit in assumptions:
        var, val = abs(lit), lit > 0
        if assign.get(var, val) != val:
            return False, assign
        assign[var] = val
    changed = True
    while changed:
        changed = False
        for clause in clauses:
            free = None
            nfree = 0
            sat = False
            for lit in clause:
                val = assign.get(abs(lit))
                if val is None:
                    nfree += 1
                    free = lit
                elif val == (lit > 0):
                    sat = True
                    break
            if sat:
                continue
            if nfree == 0:
                return False, assign
            if nfree == 1:
                assign[abs(free)] = free > 0
                changed = True
    return True, assign


def satisfiable(clauses, assumptions=(), order=()):
    """A satisfying assignment extending ``assumptions``, or None.

    Branches on the first free variable of ``order``, falling back to the
    first literal of the shortest open clause.
    """
    ok, assign = unit_propagate(clauses, assumptions)
    if not ok:
        return None
    lit = next((v for v in order if v not in assign), None)
    if lit is None:
        best = None
        for clause in clauses:
            if any(assign.get(abs(l)) == (l > 0) for l in clause):
                continue
            free = [l for l in clause if abs(l) not in assign]
            if best is None or len(free) < len(best):
                best = free
        if best is None:
            return assign
        lit = best[0]
    base = [(v if b else -v) for v, b in assign.items()]
    for choice in (lit, -lit):
        res = satisfiable(clauses, base + [choice], order)
        if res is not None:
            return res
    return None


def optimum_cost(wcs: WeightedClauseSet):
    """Minimum total weight of falsified soft clauses, by complete enumeration.

    Every assignment of the variables occurring in soft clauses is ranked by
    its cost; the first one whose hard part is satisfiable (checked by DPLL)
    gives the optimum.  Returns ``(cost, model)``; ``(None, None)`` when the
    hard clauses alone are unsatisfiable.
    """
    soft = wcs.soft_clauses()
    hard = wcs.hard_clauses()
    svars = sorted({abs(l) for _, c in soft for l in c})
    ranked = []
    for bits in product((True, False), repeat=len(svars)):
        a = dict(zip(svars, bits))
        cost = sum(w for w, c in soft if not any(a[abs(l)] == (l > 0) for l in c))
        ranked.append((cost, bits))
    ranked.sort(key=lambda t: t[0])
    # position bits determine every auxiliary, so branch on them first
    order = [v for v, name in enumerate(wcs.names, 1) if name.startswith("pos_")]
    for cost, bits in ranked:
        model = satisfiable(hard, [v if b else -v for v, b in zip(svars, bits)], order)
        if model is not None:
            return cost, model
    return None, None


def decode_relaxation(wcs: WeightedClauseSet, assignment, sub: Subscription) -> Relaxation:
    """Read the kept features and user precedences off a full assignment."""
    for w, c in wcs.clauses:
        if w is HARD and not any(assignment.get(abs(l), False) == (l > 0) for l in c):
            raise ValueError(f"assignment violates hard clause {c}")
    v = wcs.index
    feats = frozenset(f for f in sub.features if assignment.get(v[bf(f)], False))
    precs = frozenset(p for p in sub.user if assignment.get(v[bp(*p)], False))
    r = Relaxation(feats, precs)
    return Relaxation(feats, precs, value_of(r, sub))

"""Linear pseudo-Boolean translation of a weighted clause set.

Constraints are kept normalised over plain variables: ``sum(c*x) >= rhs``.
A negative literal ``~x`` is written ``1 - x`` and its constant moved to the
right-hand side, so ``x + (1 - y) >= 1`` is stored as ``x - y >= 0``.  The
objective is minimised and carries a constant ``offset`` for the same
reason.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .cnf import WeightedClauseSet


@dataclass
class PbModel:
    nvars: int
    constraints: list = field(default_factory=list)   # (((coef, var), ...), rhs)
    objective: list = field(default_factory=list)     # ((coef, var), ...) minimised
    offset: int = 0
    names: list = field(default_factory=list)


def _linear(lits, rhs):
    coefs: dict = {}
    for lit in lits:
        v = abs(lit)
        if lit > 0:
            coefs[v] = coefs.get(v, 0) + 1
        else:
            coefs[v] = coefs.get(v, 0) - 1
            rhs -= 1
    return tuple(sorted((c, v) for v, c in coefs.items() if c)), rhs


def to_pseudo_boolean(wcs: WeightedClauseSet) -> PbModel:
    """Hard clauses become ``>= 1`` constraints; soft ones enter the objective.

    A unit soft clause ``<w, (l)>`` contributes ``w * (1 - l)`` directly; a
    longer one gets a fresh relaxation indicator ``r`` with ``clause + r >= 1``
    and objective term ``w * r``.
    """
    model = PbModel(wcs.nvars, names=list(wcs.names))
    obj: dict = {}
    for w, lits in wcs.clauses:
        if w is None:
            model.constraints.append(_linear(lits, 1))
        elif len(lits) == 1:
            lit = lits[0]
            if lit > 0:
                obj[lit] = obj.get(lit, 0) - w
                model.offset += w
            else:
                obj[-lit] = obj.get(-lit, 0) + w
        else:
            model.nvars += 1
            r = model.nvars
            model.names.append(f"relax_{r}")
            model.constraints.append(_linear(lits + (r,), 1))
            obj[r] = obj.get(r, 0) + w
    model.objective = [(c, v) for v, c in sorted(obj.items()) if c]
    return model


def objective_value(model: PbModel, x: dict) -> int:
    return model.offset + sum(c * x[v] for c, v in model.objective)


def pb_optimum(model: PbModel):
    """Exact minimum of the objective by enumeration plus backtracking.

    Assignments of the objective variables are tried in increasing objective
    order; feasibility of the rest is decided by a bound-checking search over
    the remaining variables.
    """
    ovars = sorted({v for _, v in model.objective})
    ranked = []
    for bits in product((1, 0), repeat=len(ovars)):
        x = dict(zip(ovars, bits))
        ranked.append((objective_value(model, x), bits))
    ranked.sort(key=lambda t: t[0])
    rest = [v for v in range(1, model.nvars + 1) if v not in set(ovars)]
    for value, bits in ranked:
        x = dict(zip(ovars, bits))
        if _extend(model.constraints, x, rest, 0):
            return value, x
    return None, None


def _propagate(constraints, x, trail) -> bool:
    """Fix variables whose flip would make some constraint unsatisfiable."""
    changed = True
    while changed:
        changed = False
        for terms, rhs in constraints:
            best = 0
            for c, v in terms:
                val = x.get(v)
                best += max(c, 0) if val is None else c * val
            if best < rhs:
                return False
            for c, v in terms:
                if v not in x and best - abs(c) < rhs:
                    x[v] = 1 if c > 0 else 0
                    trail.append(v)
                    changed = True
                    best = None
                    break
            if best is None:
                break
    return True


def _extend(constraints, x, rest, k=0) -> bool:
    trail: list = []
    if _propagate(constraints, x, trail):
        while k < len(rest) and rest[k] in x:
            k += 1
        if k == len(rest):
            return True
        v = rest[k]
        for val in (1, 0):
            x[v] = val
            if _extend(constraints, x, rest, k + 1):
                return True
            del x[v]
    for v in trail:
        del x[v]
    return False

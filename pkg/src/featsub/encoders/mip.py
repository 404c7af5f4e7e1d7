"""Mixed integer model with big-M position inequalities."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ..model import Subscription


@dataclass
class MipModel:
    n: int
    binaries: list = field(default_factory=list)      # names, bf first then bp
    positions: list = field(default_factory=list)     # continuous pf names, bounds [1, n]
    constraints: list = field(default_factory=list)   # (label, {name: coef}, rhs) meaning <=
    objective: dict = field(default_factory=dict)     # maximised


def encode_mip(sub: Subscription) -> MipModel:
    feats = sorted(sub.features)
    n = len(feats)
    m = MipModel(n)
    m.binaries = [f"bf_{f}" for f in feats] + [f"bp_{i}_{j}" for i, j in sorted(sub.user)]
    m.positions = [f"pf_{f}" for f in feats]
    for i, j in sorted(sub.hard):
        m.constraints.append((f"h_{i}_{j}", {f"pf_{i}": 1, f"pf_{j}": -1, f"bf_{i}": n, f"bf_{j}": n}, 2 * n - 1))
    for i, j in sorted(sub.user):
        x = f"bp_{i}_{j}"
        m.constraints.append((f"p_{i}_{j}", {f"pf_{i}": 1, f"pf_{j}": -1, x: n}, n - 1))
        m.constraints.append((f"s_{i}_{j}_a", {x: 1, f"bf_{i}": -1}, 0))
        m.constraints.append((f"s_{i}_{j}_b", {x: 1, f"bf_{j}": -1}, 0))
    m.objective = {f"bf_{f}": sub.feature_weight[f] for f in feats}
    m.objective.update({f"bp_{i}_{j}": sub.prec_weight[(i, j)] for i, j in sorted(sub.user)})
    return m


def check_point(model: MipModel, values: dict, tol: float = 1e-9) -> bool:
    for name in model.positions:
        if not 1 - tol <= values[name] <= model.n + tol:
            return False
    return all(sum(c * values[v] for v, c in terms.items()) <= rhs + tol
               for _, terms, rhs in model.constraints)


def feasible_positions(model: MipModel, binaries: dict):
    """Positions satisfying every inequality once the binaries are fixed, or None.

    With binaries fixed each inequality is either a constant test or a
    difference bound ``pf_a - pf_b <= c``; the system (plus the box [1, n]) is
    solved with Bellman-Ford from a virtual origin.
    """
    pos = model.positions
    node = {p: k + 1 for k, p in enumerate(pos)}
    edges = []  # (u, v, c): x_v - x_u <= c
    for p in pos:
        edges.append((0, node[p], model.n))     # x_p <= n
        edges.append((node[p], 0, -1))          # x_p >= 1
    for _, terms, rhs in model.constraints:
        c = rhs - sum(coef * binaries[v] for v, coef in terms.items() if v in binaries)
        cont = [(v, coef) for v, coef in terms.items() if v not in binaries]
        if not cont:
            if c < 0:
                return None
            continue
        if len(cont) != 2 or sorted(coef for _, coef in cont) != [-1, 1]:
            raise ValueError("not a difference constraint")
        a = next(v for v, coef in cont if coef == 1)
        b = next(v for v, coef in cont if coef == -1)
        edges.append((node[b], node[a], c))     # x_a - x_b <= c
    dist = [0] * (len(pos) + 1)
    for _ in range(len(pos) + 1):
        changed = False
        for u, v, c in edges:
            if dist[u] + c < dist[v]:
                dist[v] = dist[u] + c
                changed = True
        if not changed:
            break
    else:
        return None
    # x_p = dist[p] - dist[origin] satisfies all difference bounds
    return {p: dist[node[p]] - dist[0] for p in pos}


def mip_optimum(model: MipModel, max_binaries: int = 14):
    """Best objective over all binary assignments with a feasible position system."""
    names = model.binaries
    if len(names) > max_binaries:
        raise ValueError("binary enumeration limited to 14 variables")
    best, arg = None, None
    for bits in product((0, 1), repeat=len(names)):
        b = dict(zip(names, bits))
        val = sum(model.objective.get(v, 0) * x for v, x in b.items())
        if best is not None and val <= best:
            continue
        if feasible_positions(model, b) is not None:
            best, arg = val, b
    return best, arg

"""Weighted CSP model: one position variable per feature, 0 meaning excluded."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..model import Subscription


@dataclass
class WcspModel:
    features: list                                   # variable k is features[k]
    k: int                                           # forbidden cost
    unary: list = field(default_factory=list)        # (var, costs[a])
    binary: list = field(default_factory=list)       # (var_i, var_j, costs[a][b], label)

    @property
    def domain(self) -> int:
        return len(self.features) + 1


def encode_wcsp(sub: Subscription) -> WcspModel:
    feats = sorted(sub.features)
    idx = {f: k for k, f in enumerate(feats)}
    d = len(feats) + 1
    top = sub.total_weight
    model = WcspModel(feats, top)
    for f in feats:
        model.unary.append((idx[f], [sub.feature_weight[f]] + [0] * (d - 1)))
    for i, j in sorted(sub.hard):
        table = [[0 if a == 0 or b == 0 or a < b else top for b in range(d)] for a in range(d)]
        model.binary.append((idx[i], idx[j], table, f"H {i} {j}"))
    for i, j in sorted(sub.user):
        w = sub.prec_weight[(i, j)]
        table = [[0 if a != 0 and b != 0 and a < b else w for b in range(d)] for a in range(d)]
        model.binary.append((idx[i], idx[j], table, f"P {i} {j}"))
    return model


def assignment_cost(model: WcspModel, values) -> int:
    cost = sum(t[values[v]] for v, t in model.unary)
    cost += sum(t[values[i]][values[j]] for i, j, t, _ in model.binary)
    return min(model.k, cost)


def wcsp_optimum(model: WcspModel, max_vars: int = 7):
    """Minimum cost over all ``domain ** n`` complete assignments (vectorised)."""
    n, d = len(model.features), model.domain
    if n > max_vars:
        raise ValueError(f"exhaustive WCSP evaluation limited to {max_vars} variables")
    if n == 0:
        return 0, ()
    total = np.zeros((d,) * n, dtype=np.int64)
    for v, t in model.unary:
        shape = [1] * n
        shape[v] = d
        total += np.asarray(t, dtype=np.int64).reshape(shape)
    for i, j, t, _ in model.binary:
        arr = np.asarray(t, dtype=np.int64)
        if i > j:
            i, j, arr = j, i, arr.T
        shape = [1] * n
        shape[i] = d
        shape[j] = d
        total += arr.reshape(shape)
    np.minimum(total, model.k, out=total)
    flat = int(np.argmin(total))
    return int(total.flat[flat]), tuple(int(x) for x in np.unravel_index(flat, total.shape))

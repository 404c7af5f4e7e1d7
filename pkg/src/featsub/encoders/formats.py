"""Byte-exact writers and matching readers for the solver file formats.

* ``wcnf``: ``p wcnf <nvars> <nclauses> <top>``; hard clauses carry weight top.
* ``opb``: ``* #variable= N #constraint= M`` then ``min:`` and ``>=`` rows.
* ``lp``: CPLEX LP sections Maximize / Subject To / Bounds / Binaries / End.
* ``wcsp``: toulbar2 text, ``<name> <nvars> <maxdom> <ncons> <k>``.

Comment lines carry the variable role table so the readers can rebuild
names.
"""
from __future__ import annotations

import re

from .cnf import HARD, WeightedClauseSet
from .mip import MipModel
from .pb import PbModel
from .wcsp import WcspModel

FORMATS = ("wcnf", "opb", "lp", "wcsp")


class FormatError(ValueError):
    pass


def write_model(model, fmt: str) -> bytes:
    writers = {
        ("wcnf", WeightedClauseSet): write_wcnf,
        ("opb", PbModel): write_opb,
        ("lp", MipModel): write_lp,
        ("wcsp", WcspModel): write_wcsp,
    }
    w = writers.get((fmt, type(model)))
    if w is None:
        raise FormatError(f"cannot write {type(model).__name__} as {fmt!r}")
    return w(model).encode("ascii")


# -- WCNF --------------------------------------------------------------------

def write_wcnf(wcs: WeightedClauseSet) -> str:
    top = wcs.top
    out = [f"c var {v} {name}" for v, name in enumerate(wcs.names, 1)]
    out.append(f"p wcnf {wcs.nvars} {len(wcs.clauses)} {top}")
    for w, lits in wcs.clauses:
        out.append(" ".join(map(str, [top if w is HARD else w, *lits, 0])))
    return "\n".join(out) + "\n"


def read_wcnf(text: str) -> WeightedClauseSet:
    names: dict = {}
    header = None
    wcs = WeightedClauseSet()
    rows = []
    for line in text.splitlines():
        tok = line.split()
        if not tok:
            continue
        if tok[0] == "c":
            if len(tok) == 4 and tok[1] == "var":
                names[int(tok[2])] = tok[3]
            continue
        if tok[0] == "p":
            if tok[1] != "wcnf" or len(tok) != 5:
                raise FormatError(f"bad header {line!r}")
            header = tuple(int(t) for t in tok[2:])
            continue
        nums = [int(t) for t in tok]
        if nums[-1] != 0:
            raise FormatError(f"clause not 0-terminated: {line!r}")
        rows.append(nums[:-1])
    if header is None:
        raise FormatError("missing p wcnf header")
    nvars, ncl, top = header
    for v in range(1, nvars + 1):
        wcs.var(names.get(v, f"x{v}"))
    for nums in rows:
        w = nums[0]
        wcs.add(HARD if w >= top else w, nums[1:], "hard" if w >= top else "soft")
    if len(rows) != ncl:
        raise FormatError(f"header announces {ncl} clauses, found {len(rows)}")
    return wcs


# -- OPB ---------------------------------------------------------------------

def _terms(terms) -> str:
    return " ".join(f"{c:+d} x{v}" for c, v in terms)


def write_opb(pb: PbModel) -> str:
    out = [f"* #variable= {pb.nvars} #constraint= {len(pb.constraints)}"]
    out.append(f"* offset= {pb.offset}")
    out += [f"* var x{v} {name}" for v, name in enumerate(pb.names, 1)]
    out.append(f"min: {_terms(pb.objective)} ;")
    for terms, rhs in pb.constraints:
        out.append(f"{_terms(terms)} >= {rhs} ;")
    return "\n".join(out) + "\n"


_TERM = re.compile(r"([+-]\d+)\s+x(\d+)")


def read_opb(text: str) -> PbModel:
    pb = None
    names: dict = {}
    offset = 0
    rows = []
    objective = []
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("*"):
            m = re.match(r"\*\s*#variable=\s*(\d+)\s*#constraint=\s*(\d+)", s)
            if m:
                pb = PbModel(int(m.group(1)))
                ncons = int(m.group(2))
            elif s.startswith("* offset="):
                offset = int(s.split("=")[1])
            elif s.startswith("* var "):
                _, _, x, name = s.split()
                names[int(x[1:])] = name
            continue
        if not s.endswith(";"):
            raise FormatError(f"row not terminated by ';': {s!r}")
        body = s[:-1].strip()
        if body.startswith("min:"):
            objective = [(int(c), int(v)) for c, v in _TERM.findall(body[4:])]
            continue
        lhs, rhs = body.split(">=")
        rows.append((tuple((int(c), int(v)) for c, v in _TERM.findall(lhs)), int(rhs)))
    if pb is None:
        raise FormatError("missing '* #variable=' header")
    if len(rows) != ncons:
        raise FormatError(f"header announces {ncons} constraints, found {len(rows)}")
    pb.constraints, pb.objective, pb.offset = rows, objective, offset
    pb.names = [names.get(v, f"x{v}") for v in range(1, pb.nvars + 1)]
    return pb


# -- LP ----------------------------------------------------------------------

def _lin(terms: dict) -> str:
    parts = []
    for k, (name, c) in enumerate(terms.items()):
        sign = "-" if c < 0 else ("+" if k else "")
        mag = "" if abs(c) == 1 else f"{abs(c)} "
        parts.append(f"{sign} {mag}{name}".strip() if sign else f"{mag}{name}")
    return " ".join(parts) if parts else "0"


def write_lp(m: MipModel) -> str:
    out = ["\\ feature subscription relaxation", "Maximize", f" obj: {_lin(m.objective)}", "Subject To"]
    for label, terms, rhs in m.constraints:
        out.append(f" {label}: {_lin(terms)} <= {rhs}")
    out.append("Bounds")
    for p in m.positions:
        out.append(f" 1 <= {p} <= {m.n}")
    out.append("Binaries")
    if m.binaries:
        out.append(" " + " ".join(m.binaries))
    out.append("End")
    return "\n".join(out) + "\n"


def _parse_lin(s: str) -> dict:
    terms: dict = {}
    s = s.strip()
    if s == "0":
        return terms
    for sign, coef, name in re.findall(r"([+-]?)\s*(\d+)?\s*([A-Za-z_][\w]*)", s):
        c = int(coef) if coef else 1
        terms[name] = -c if sign == "-" else c
    return terms


def read_lp(text: str) -> MipModel:
    section = None
    m = MipModel(0)
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("\\"):
            continue
        low = s.lower()
        if low in ("maximize", "subject to", "bounds", "binaries", "end"):
            section = low
            continue
        if section == "maximize":
            m.objective = _parse_lin(s.split(":", 1)[1])
        elif section == "subject to":
            label, rest = s.split(":", 1)
            lhs, rhs = rest.split("<=")
            m.constraints.append((label.strip(), _parse_lin(lhs), int(rhs)))
        elif section == "bounds":
            lo, name, hi = re.fullmatch(r"(\S+)\s*<=\s*(\S+)\s*<=\s*(\S+)", s).groups()
            m.positions.append(name)
            m.n = int(hi)
        elif section == "binaries":
            m.binaries.extend(s.split())
        else:
            raise FormatError(f"unexpected line {s!r}")
    return m


# -- WCSP --------------------------------------------------------------------

def write_wcsp(model: WcspModel, name: str = "featsub") -> str:
    n, d = len(model.features), model.domain
    out = [f"{name} {n} {d} {len(model.unary) + len(model.binary)} {model.k}"]
    out.append(" ".join([str(d)] * n))
    for v, table in model.unary:
        default = _default(table)
        rows = [(a, c) for a, c in enumerate(table) if c != default]
        out.append(f"1 {v} {default} {len(rows)}")
        out += [f"{a} {c}" for a, c in rows]
    for i, j, table, _ in model.binary:
        flat = [c for row in table for c in row]
        default = _default(flat)
        rows = [(a, b, table[a][b]) for a in range(d) for b in range(d) if table[a][b] != default]
        out.append(f"2 {i} {j} {default} {len(rows)}")
        out += [f"{a} {b} {c}" for a, b, c in rows]
    return "\n".join(out) + "\n"


def _default(costs) -> int:
    """Most frequent cost, smallest on ties."""
    counts: dict = {}
    for c in costs:
        counts[c] = counts.get(c, 0) + 1
    return min(counts, key=lambda c: (-counts[c], c))


def read_wcsp(text: str) -> WcspModel:
    toks = iter(text.split())
    nxt = lambda: int(next(toks))  # noqa: E731
    next(toks)  # problem name
    n, d, ncons, k = nxt(), nxt(), nxt(), nxt()
    doms = [nxt() for _ in range(n)]
    if any(x != d for x in doms):
        raise FormatError("all domains must have the declared size")
    model = WcspModel(list(range(1, n + 1)), k)
    for _ in range(ncons):
        arity = nxt()
        scope = [nxt() for _ in range(arity)]
        default, ntuples = nxt(), nxt()
        if arity == 1:
            table = [default] * d
            for _ in range(ntuples):
                a = nxt()
                table[a] = nxt()
            model.unary.append((scope[0], table))
        elif arity == 2:
            table = [[default] * d for _ in range(d)]
            for _ in range(ntuples):
                a, b = nxt(), nxt()
                table[a][b] = nxt()
            model.binary.append((scope[0], scope[1], table, ""))
        else:
            raise FormatError(f"unsupported arity {arity}")
    return model

"""Reaching-definitions dataflow and occurrence-level data dependencies.

Forward may-analysis with union confluence: a definition reaches a node when
some CFG path from the defining node arrives without an intervening killing
definition of the same variable. For every variable used at a node and every
definition reaching it, one dependency is emitted per (defining occurrence,
using occurrence) pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from deplab.analysis.cfg import Cfg
from deplab.analysis.defuse import DefUse


@dataclass(frozen=True)
class OccurrenceDataDep:
    variable: str
    def_occ: int  # IdentifierRef node id of the defining occurrence
    use_occ: int  # IdentifierRef node id of the using occurrence
    def_stmt: int
    use_stmt: int


@dataclass
class ReachingResult:
    # definition ids are indices into `defs`; each def is
    # (stmt index, variable, occurrence node id, killing)
    defs: list[tuple[int, str, int, bool]]
    in_sets: list[set[int]]
    out_sets: list[set[int]]
    passes: int


def _reverse_post_order(cfg: Cfg) -> list[int]:
    succ = cfg.successors()
    seen = [False] * cfg.n_nodes
    order: list[int] = []

    def dfs(v: int):
        stack = [(v, iter(succ[v]))]
        seen[v] = True
        while stack:
            node, it = stack[-1]
            advanced = False
            for s in it:
                if not seen[s]:
                    seen[s] = True
                    stack.append((s, iter(succ[s])))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()

    dfs(cfg.entry)
    for v in range(cfg.n_nodes):  # nodes unreachable from entry, if any
        if not seen[v]:
            dfs(v)
    order.reverse()
    return order


def reaching_definitions(cfg: Cfg, defuse: list[DefUse]) -> ReachingResult:
    defs: list[tuple[int, str, int, bool]] = []
    gen: list[set[int]] = [set() for _ in range(cfg.n_nodes)]
    for stmt, du in enumerate(defuse):
        for var, occ in du.defs:
            def_id = len(defs)
            defs.append((stmt, var, occ, du.killing))
            gen[stmt].add(def_id)

    defs_of_var: dict[str, set[int]] = {}
    for def_id, (_, var, _, _) in enumerate(defs):
        defs_of_var.setdefault(var, set()).add(def_id)

    kill: list[set[int]] = [set() for _ in range(cfg.n_nodes)]
    for stmt, du in enumerate(defuse):
        if not du.killing:
            continue
        for var, _ in du.defs:
            kill[stmt] |= defs_of_var[var] - gen[stmt]

    pred = cfg.predecessors()
    order = _reverse_post_order(cfg)
    in_sets: list[set[int]] = [set() for _ in range(cfg.n_nodes)]
    out_sets: list[set[int]] = [set() for _ in range(cfg.n_nodes)]
    passes = 0
    changed = True
    while changed:
        changed = False
        passes += 1
        for v in order:
            new_in = set()
            for p in pred[v]:
                new_in |= out_sets[p]
            new_out = gen[v] | (new_in - kill[v]) if v < cfg.n_stmts else set(new_in)
            if new_in != in_sets[v] or new_out != out_sets[v]:
                assert new_in >= in_sets[v] and new_out >= out_sets[v], \
                    "reaching sets must grow monotonically"
                in_sets[v] = new_in
                out_sets[v] = new_out
                changed = True
    return ReachingResult(defs, in_sets, out_sets, passes)


def data_dependencies(cfg: Cfg, defuse: list[DefUse]) -> list[OccurrenceDataDep]:
    reach = reaching_definitions(cfg, defuse)
    deps = []
    for use_stmt, du in enumerate(defuse):
        if not du.uses:
            continue
        reaching = reach.in_sets[use_stmt]
        for var, use_occ in du.uses:
            for def_id in reaching:
                def_stmt, def_var, def_occ, _ = reach.defs[def_id]
                if def_var == var:
                    deps.append(OccurrenceDataDep(var, def_occ, use_occ, def_stmt, use_stmt))
    deps.sort(key=lambda d: (d.def_stmt, d.use_stmt, d.def_occ, d.use_occ))
    return deps

"""Brute-force oracles for control and data dependencies.

These re-derive both relations from first principles on the raw CFG, sharing
no propagation machinery with the fixpoint implementations, and exist to
cross-check them on small programs.

* Post-dominance is decided by explicit path search: P post-dominates N iff
  no path from N reaches EXIT while avoiding P.
* Control dependence applies the textbook rule directly: Y depends on X iff
  some successor of X is post-dominated by Y and Y does not strictly
  post-dominate X.
* A definition reaches a use iff some path from the defining node arrives at
  the using node without crossing another killing definition of the same
  variable (checked by search over kill-free paths).
"""

from __future__ import annotations

from deplab.analysis.cfg import Cfg
from deplab.analysis.defuse import DefUse
from deplab.analysis.reaching import OccurrenceDataDep


def _reaches_avoiding(succ: list[list[int]], start: int, goal: int, avoid: int) -> bool:
    """True when a path start -> goal exists that never visits `avoid`.

    A path avoiding `avoid` exists iff a simple such path exists, so plain
    reachability over the pruned graph is an exact check.
    """
    if start == avoid:
        return start == goal
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        if v == goal:
            return True
        for s in succ[v]:
            if s != avoid and s not in seen:
                seen.add(s)
                stack.append(s)
    return False


def _post_dominates(succ: list[list[int]], exit_node: int, p: int, n: int) -> bool:
    if p == n:
        return True
    return not _reaches_avoiding(succ, n, exit_node, p)


def oracle_control_dependencies(cfg: Cfg) -> set[tuple[int, int]]:
    succ = cfg.successors()
    pairs: set[tuple[int, int]] = set()
    for x in range(cfg.n_stmts):  # ENTRY-sourced dependencies are discarded
        for y in range(cfg.n_stmts):
            strictly_postdominates = y != x and _post_dominates(succ, cfg.exit, y, x)
            if strictly_postdominates:
                continue
            if any(_post_dominates(succ, cfg.exit, y, s) for s in succ[x]):
                pairs.add((x, y))
    return pairs


def oracle_data_dependencies(cfg: Cfg, defuse: list[DefUse]) -> set[OccurrenceDataDep]:
    succ = cfg.successors()

    # nodes reachable from ENTRY; a definition that never executes reaches nothing
    live = {cfg.entry}
    stack = [cfg.entry]
    while stack:
        v = stack.pop()
        for s in succ[v]:
            if s not in live:
                live.add(s)
                stack.append(s)

    killers_of: dict[str, set[int]] = {}
    for stmt, du in enumerate(defuse):
        if du.killing:
            for var, _ in du.defs:
                killers_of.setdefault(var, set()).add(stmt)

    deps: set[OccurrenceDataDep] = set()
    for def_stmt, du in enumerate(defuse):
        if def_stmt not in live:
            continue
        for var, def_occ in du.defs:
            killers = killers_of.get(var, set())
            # search kill-free paths starting from the successors of the
            # defining node; uses at a killer node still see the definition
            # (reads happen before the node's own write)
            seen = set()
            frontier = list(succ[def_stmt])
            while frontier:
                v = frontier.pop()
                if v in seen:
                    continue
                seen.add(v)
                if v < cfg.n_stmts:
                    for use_var, use_occ in defuse[v].uses:
                        if use_var == var:
                            deps.add(OccurrenceDataDep(var, def_occ, use_occ, def_stmt, v))
                if v in killers:
                    continue
                frontier.extend(succ[v])
    return deps

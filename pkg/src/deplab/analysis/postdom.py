"""Post-dominator computation by iterative set dataflow on the reverse CFG.

P post-dominates N when every path from N to EXIT passes through P. The
immediate post-dominator of N is the strict post-dominator closest to N; the
ipdom relation forms a tree rooted at EXIT.
"""

from __future__ import annotations

from deplab.analysis.cfg import Cfg


def post_dominator_sets(cfg: Cfg) -> list[set[int]]:
    succ = cfg.successors()
    all_nodes = set(range(cfg.n_nodes))
    pdom = [set(all_nodes) for _ in range(cfg.n_nodes)]
    pdom[cfg.exit] = {cfg.exit}
    changed = True
    while changed:
        changed = False
        for v in range(cfg.n_nodes):
            if v == cfg.exit:
                continue
            if not succ[v]:
                # node that cannot reach EXIT (never built by build_cfg);
                # leave it post-dominated by everything
                continue
            new = {v}
            inter = None
            for s in succ[v]:
                inter = set(pdom[s]) if inter is None else inter & pdom[s]
            new |= inter
            if new != pdom[v]:
                pdom[v] = new
                changed = True
    return pdom


def post_dominators(cfg: Cfg) -> dict[int, int]:
    """Immediate post-dominator of every node except EXIT (the root)."""
    pdom = post_dominator_sets(cfg)
    ipdom: dict[int, int] = {}
    for v in range(cfg.n_nodes):
        if v == cfg.exit:
            continue
        strict = pdom[v] - {v}
        # the immediate post-dominator is the strict post-dominator whose own
        # set contains exactly the remaining strict post-dominators
        target_size = len(strict)
        for u in strict:
            if len(pdom[u]) == target_size:
                ipdom[v] = u
                break
        else:
            raise AssertionError(f"no immediate post-dominator for node {v}")
    return ipdom

"""Statement-level control dependencies from the post-dominator relation.

Classic edge-walk formulation: for every CFG edge u -> v where v does not
strictly post-dominate u, every node on the post-dominator chain from v up to
(but excluding) ipdom(u) is control-dependent on u. Dependencies whose source
is the synthetic ENTRY node are discarded: top-level statements carry no
control dependency.
"""

from __future__ import annotations

from dataclasses import dataclass

from deplab.analysis.cfg import Cfg
from deplab.frontend.segment import NodeRole, PdgNodeSpan


@dataclass(frozen=True)
class ControlDeps:
    pairs: frozenset[tuple[int, int]]  # (src predicate index, dst node index)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


def control_dependencies(cfg: Cfg, ipdom: dict[int, int],
                         nodes: list[PdgNodeSpan] | None = None) -> ControlDeps:
    pairs: set[tuple[int, int]] = set()
    for src, dst, _label in cfg.edges:
        walker = dst
        stop = ipdom[src]
        while walker != stop:
            if src != cfg.entry and walker < cfg.n_stmts:
                pairs.add((src, walker))
            walker = ipdom[walker]
    if nodes is not None:
        for src, _ in pairs:
            assert nodes[src].role == NodeRole.Predicate, \
                f"control dependency source {src} is not a predicate"
    return ControlDeps(frozenset(pairs))

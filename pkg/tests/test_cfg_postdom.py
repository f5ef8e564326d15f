from deplab.analysis import build_cfg, post_dominators
from deplab.frontend import lex, parse, segment_statements


def cfg_for(src):
    ast = parse(lex(src))
    nodes = segment_statements(ast)
    return build_cfg(ast, nodes)


def edge_set(cfg):
    return {(s, d, l) for s, d, l in cfg.edges}


def test_sequential_chain():
    cfg = cfg_for("void f() { a = 1; b = 2; }")
    assert edge_set(cfg) == {
        (cfg.entry, 0, None),
        (0, 1, None),
        (1, cfg.exit, None),
        (cfg.entry, cfg.exit, None),
    }


def test_if_else_diamond():
    cfg = cfg_for("void f() { if (c) { a = 1; } else { a = 2; } done(a); }")
    assert (0, 1, "true") in edge_set(cfg)
    assert (0, 2, "false") in edge_set(cfg)
    assert (1, 3, None) in edge_set(cfg)
    assert (2, 3, None) in edge_set(cfg)


def test_while_loop_shape():
    cfg = cfg_for("void f() { while (c) { step(); } }")
    assert (0, 1, "true") in edge_set(cfg)
    assert (1, 0, None) in edge_set(cfg)
    assert (0, cfg.exit, "false") in edge_set(cfg)


def test_if_without_else_false_fallthrough():
    cfg = cfg_for("void f() { if (c) { a = 1; } b = 2; }")
    assert (0, 2, "false") in edge_set(cfg)
    assert (1, 2, None) in edge_set(cfg)


def test_return_goes_to_exit():
    cfg = cfg_for("void f() { if (c) { return; } a = 1; }")
    assert (1, cfg.exit, None) in edge_set(cfg)
    assert (0, 2, "false") in edge_set(cfg)


def test_break_and_continue_edges():
    src = "void f() { while (c) { if (d) { break; } continue; } after(); }"
    cfg = cfg_for(src)
    # nodes: 0 while-cond, 1 if-cond, 2 break, 3 continue, 4 after()
    assert (2, 4, None) in edge_set(cfg)  # break to loop follower
    assert (3, 0, None) in edge_set(cfg)  # continue to condition


def test_for_loop_wiring():
    cfg = cfg_for("void f() { for (i = 0; i < 3; i += 1) { if (q) { continue; } b(); } }")
    # nodes: 0 init, 1 cond, 2 update, 3 if-cond, 4 continue, 5 b()
    es = edge_set(cfg)
    assert (0, 1, None) in es
    assert (1, 3, "true") in es
    assert (4, 2, None) in es  # continue targets the update expression
    assert (5, 2, None) in es
    assert (2, 1, None) in es
    assert (1, cfg.exit, "false") in es


def test_entry_exit_invariants():
    cfg = cfg_for("void f() { while (a) { while (b) { t(); } } }")
    preds = cfg.predecessors()
    succ = cfg.successors()
    assert preds[cfg.entry] == []
    assert succ[cfg.exit] == []
    assert (cfg.entry, cfg.exit, None) in edge_set(cfg)
    # every node reaches exit
    for start in range(cfg.n_nodes - 1):
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for s in succ[v]:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        assert cfg.exit in seen


def test_ipdom_straight_line():
    cfg = cfg_for("void f() { a = 1; b = 2; }")
    ipdom = post_dominators(cfg)
    assert ipdom[0] == 1
    assert ipdom[1] == cfg.exit
    assert ipdom[cfg.entry] == cfg.exit


def test_ipdom_diamond_join():
    cfg = cfg_for("void f() { if (c) { a = 1; } else { a = 2; } done(a); }")
    ipdom = post_dominators(cfg)
    assert ipdom[0] == 3  # join post-dominates the branch predicate


def test_ipdom_while_loop():
    cfg = cfg_for("void f() { while (c) { body(); } }")
    ipdom = post_dominators(cfg)
    assert ipdom[1] == 0  # body's ipdom is the condition
    assert ipdom[0] == cfg.exit

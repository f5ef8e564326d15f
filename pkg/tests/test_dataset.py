import json

import pytest

from deplab import bpe
from deplab.analysis import analyze_source
from deplab.data import (
    ExampleConfig,
    GenProfile,
    build_example,
    dedup_and_split,
    gen_synthetic_corpus,
    make_partial,
    pretty_print,
    read_examples,
    write_examples,
)
from deplab.errors import TooShort
from deplab.frontend import lex, parse

CFG = ExampleConfig(max_seq_len=256, max_nodes=50)


def small_model(corpus):
    return bpe.train_bpe(corpus, bpe.MIN_VOCAB + 300)


# -- generator -----------------------------------------------------------


def test_generator_deterministic():
    a = gen_synthetic_corpus("s", 10)
    b = gen_synthetic_corpus("s", 10)
    assert a == b


def test_generator_empty():
    assert gen_synthetic_corpus("s", 0) == []


def test_generator_prefix_stability():
    assert gen_synthetic_corpus("s", 5) == gen_synthetic_corpus("s", 10)[:5]


def test_generated_functions_analyze():
    for src in gen_synthetic_corpus("check", 50):
        analyze_source(src)


def test_pretty_print_roundtrip():
    for src in gen_synthetic_corpus("pp", 40):
        ast = parse(lex(src))
        rendered = pretty_print(ast)
        reparsed = parse(lex(rendered))
        assert reparsed.structure() == ast.structure()


# -- dedup and split ------------------------------------------------------


def test_duplicate_excluded_from_valid_test():
    corpus = gen_synthetic_corpus("d", 30)
    corpus = corpus + [corpus[0], "  " + corpus[1].replace("\n", "  \n")]
    split = dedup_and_split(corpus, (0.5, 0.25, 0.25), seed=3)
    ids = split.all_ids()
    assert len(ids) == len(set(ids)) == 30
    assert 30 not in ids and 31 not in ids  # the duplicates


def test_split_sizes_exact():
    corpus = gen_synthetic_corpus("sz", 100)
    split = dedup_and_split(corpus, (0.8, 0.1, 0.1), seed=0)
    assert (len(split.train), len(split.valid), len(split.test)) == (80, 10, 10)


def test_all_identical_corpus():
    corpus = ["void f() { a = 1; }"] * 10
    split = dedup_and_split(corpus, (0.8, 0.1, 0.1), seed=0)
    assert split.train == [0]
    assert split.valid == [] and split.test == []


def test_bad_ratios_rejected():
    with pytest.raises(ValueError):
        dedup_and_split(["void f() { }"], (0.5, 0.2, 0.2))


# -- partial prefixes ------------------------------------------------------


def test_partial_k_equals_node_count_matches_complete():
    src = "void f() { int a = 1; int b = a; if (a < b) { b = 0; } }"
    model = small_model([src])
    fa = analyze_source(src)
    full = build_example("f", src, model, CFG)
    part = make_partial("f", src, len(fa.nodes), model, CFG)
    assert part.gc == full.gc
    assert part.gd == full.gd
    assert part.node_members == full.node_members


def test_partial_k1_has_no_control():
    src = "void f() { int a = 1; if (a) { a = 2; } }"
    model = small_model([src])
    part = make_partial("f", src, 1, model, CFG)
    assert part.gc == []
    assert part.node_count == 1


def test_partial_restricts_control_pairs():
    src = "void f() { if (a > 0) { b = 1; c = 2; } }"
    model = small_model([src])
    fa = analyze_source(src)
    assert set(map(tuple, build_example("f", src, model, CFG).gc)) == {(0, 1), (0, 2)}
    part = make_partial("f", src, 2, model, CFG)
    assert part.gc == [[0, 1]]


def test_partial_too_short():
    src = "void f() { a = 1; }"
    model = small_model([src])
    with pytest.raises(TooShort):
        make_partial("f", src, 5, model, CFG)


def test_partial_prefix_is_byte_prefix_without_repair():
    src = "void f() { a = 1; while (a < 5) { a += 1; } }"
    model = small_model([src])
    part = make_partial("f", src, 2, model, CFG)
    assert src.startswith(part.source)
    assert part.source.endswith("a < 5")  # mid-function, no closing braces


def test_partial_restriction_soundness_on_generated():
    corpus = gen_synthetic_corpus("rs", 25, GenProfile(min_nodes=6, max_nodes=18))
    model = small_model(corpus)
    for idx, src in enumerate(corpus):
        fa = analyze_source(src)
        full = build_example(str(idx), src, model, ExampleConfig(4096, 50), analysis=fa)
        for k in (1, 3, min(6, len(fa.nodes))):
            part = make_partial(str(idx), src, k, model, ExampleConfig(4096, 50), analysis=fa)
            want_gc = sorted([i, j] for i, j in map(tuple, full.gc) if i < k and j < k)
            assert part.gc == want_gc
            # every partial gd pair must exist in the full example's gd
            full_gd = set(map(tuple, full.gd))
            assert set(map(tuple, part.gd)) <= full_gd


# -- serialization ---------------------------------------------------------


def test_jsonl_roundtrip_bitexact(tmp_path):
    corpus = gen_synthetic_corpus("io", 12)
    model = small_model(corpus)
    examples = [build_example(f"fn{i}", src, model, CFG) for i, src in enumerate(corpus)]
    path = tmp_path / "examples.jsonl"
    write_examples(path, examples)
    again = read_examples(path)
    assert again == examples
    write_examples(tmp_path / "second.jsonl", again)
    assert (tmp_path / "second.jsonl").read_bytes() == path.read_bytes()


def test_jsonl_header_and_field_order(tmp_path):
    src = "void f() { a = 1; }"
    model = small_model([src])
    path = tmp_path / "one.jsonl"
    write_examples(path, [build_example("f", src, model, CFG)])
    lines = path.read_text().splitlines()
    header = json.loads(lines[0])
    assert header["schema"] == "deplab.examples" and header["version"] == 1
    record = json.loads(lines[1])
    assert list(record.keys()) == [
        "id", "source", "ids", "spans", "kinds", "node_spans",
        "node_members", "gc", "gd", "ident_mask",
    ]


def test_reader_rejects_unknown_schema(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"schema":"other","version":9}\n')
    with pytest.raises(ValueError):
        read_examples(path)

import pytest
from hypothesis import given, settings, strategies as st

from deplab import bpe
from deplab.errors import ConfigError
from deplab.frontend import TokenKind, lex


def train(corpus, extra_merges=50):
    return bpe.train_bpe(corpus, bpe.MIN_VOCAB + extra_merges)


def test_first_merge_on_repeated_pair():
    model = bpe.train_bpe(["aaab"], bpe.MIN_VOCAB + 1)
    assert model.merges == [("a", "a")]


def test_empty_corpus_yields_alphabet_only():
    model = bpe.train_bpe([], bpe.MIN_VOCAB + 10)
    assert model.merges == []
    assert len(model.vocab) == bpe.MIN_VOCAB


def test_single_merge_budget_on_word_pair():
    model = bpe.train_bpe(["ab ab"], bpe.MIN_VOCAB + 1)
    assert model.merges == [("a", "b")]


def test_vocab_size_too_small():
    with pytest.raises(ConfigError):
        bpe.train_bpe(["ab"], 100)


def test_specials_distinct_and_first():
    model = train(["int a = 1;"])
    ids = {model.pad_id, model.unk_id, model.cls_id, model.mask_id}
    assert ids == {0, 1, 2, 3}


def test_encode_empty_source():
    model = train(["x"])
    seq = bpe.encode(model, "", [])
    assert seq.ids == (model.cls_id,)
    assert seq.spans == ((0, 0),)
    assert seq.kinds == (None,)


def assert_tiling(source, seq):
    """Pieces of each code token must tile the token's span exactly."""
    by_token = {}
    for tok in lex(source):
        by_token[(tok.start, tok.end)] = []
    for span, kind in zip(seq.spans[1:], seq.kinds[1:]):
        for (s, e), pieces in by_token.items():
            if s <= span[0] and span[1] <= e and kind is not None:
                pieces.append(span)
    for (s, e), pieces in by_token.items():
        assert pieces, f"no pieces for token at [{s},{e})"
        assert pieces[0][0] == s
        assert pieces[-1][1] == e
        for a, b in zip(pieces, pieces[1:]):
            assert a[1] == b[0]


def test_identifier_tiling_multi_piece():
    model = train(["int temp = 1;"])  # corpus never saw temp_flag whole
    src = "int temp_flag = 2;"
    seq = bpe.encode(model, src, lex(src))
    assert_tiling(src, seq)
    ident_spans = [sp for sp, k in zip(seq.spans, seq.kinds) if k == TokenKind.Identifier]
    assert ident_spans[0][0] == 4
    assert ident_spans[-1][1] == 13


def test_kind_propagation():
    corpus = ["void f() { total = total + rate; }"]
    model = train(corpus)
    src = corpus[0]
    seq = bpe.encode(model, src, lex(src))
    tokens = lex(src)

    def token_covering(span):
        for t in tokens:
            if t.start <= span[0] and span[1] <= t.end:
                return t
        return None

    for idx in range(1, len(seq)):
        tok = token_covering(seq.spans[idx])
        if tok is None:
            assert seq.kinds[idx] is None
        else:
            assert seq.kinds[idx] == tok.kind
        assert (seq.kinds[idx] == TokenKind.Identifier) == (
            tok is not None and tok.kind == TokenKind.Identifier
        )


def test_truncation_to_max_seq_len():
    model = train(["abc def"])
    src = " ".join(f"v{i} = {i};" for i in range(100))
    seq = bpe.encode(model, src, lex(src), max_seq_len=32)
    assert len(seq) == 32
    assert len(seq.ids) == len(seq.spans) == len(seq.kinds)


def test_decode_roundtrip_exact():
    corpus = ["void f() {\n    int acc = 0;\n    acc += 2; /* note */\n}\n"]
    model = train(corpus)
    for src in corpus + ["int x=1;", "  a = b;\n\n\tc = d;"]:
        seq = bpe.encode(model, src, lex(src))
        assert bpe.decode(model, seq.ids) == src


def test_markers_do_not_consume_span_bytes():
    model = train(["a b"])
    src = "a b"
    seq = bpe.encode(model, src, lex(src))
    # two identifiers, each a single piece; second is marked, span excludes the space
    assert seq.spans[1:] == ((0, 1), (2, 3))


def test_save_load_roundtrip(tmp_path):
    model = train(["int value = base + rate;", "value += base;"])
    vp, mp = tmp_path / "vocab.txt", tmp_path / "merges.txt"
    bpe.save_model(model, vp, mp)
    loaded = bpe.load_model(vp, mp)
    assert loaded.vocab == model.vocab
    assert loaded.merges == model.merges
    src = "int value = base;"
    assert bpe.encode(loaded, src, lex(src)) == bpe.encode(model, src, lex(src))


def test_encode_deterministic():
    model = train(["qq ww ee"])
    src = "qq = ww + ee;"
    a = bpe.encode(model, src, lex(src))
    b = bpe.encode(model, src, lex(src))
    assert a == b


_src_strategy = st.lists(
    st.sampled_from(["alpha", "beta2", "if", "(", ")", "{", "}", "=", "+=", "7", ";", "count"]),
    min_size=0,
    max_size=25,
).map(" ".join)


@settings(max_examples=60, deadline=None)
@given(_src_strategy)
def test_property_tiling_and_roundtrip(src):
    model = _property_model()
    tokens = lex(src)
    seq = bpe.encode(model, src, tokens)
    assert_tiling(src, seq)
    assert bpe.decode(model, seq.ids) == src
    assert len(seq.ids) == len(seq.spans) == len(seq.kinds)


def _property_model(_cache=[]):
    if not _cache:
        _cache.append(train(["alpha beta2 count alpha count", "if (count) { alpha += 7; }"]))
    return _cache[0]

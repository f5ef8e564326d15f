"""JSONL serialization of training examples.

Line 1 is a versioned schema header; every following line is one example
with a fixed field order. Writing is byte-deterministic: compact separators,
no float fields, insertion-ordered keys.
"""

from __future__ import annotations

import json

from deplab.data.groundtruth import TrainingExample

SCHEMA_NAME = "deplab.examples"
SCHEMA_VERSION = 1
FIELDS = ("id", "source", "ids", "spans", "kinds", "node_spans",
          "node_members", "gc", "gd", "ident_mask")


def example_to_json(example: TrainingExample) -> str:
    record = {name: getattr(example, name) for name in FIELDS}
    return json.dumps(record, separators=(",", ":"), ensure_ascii=True)


def write_examples(path, examples) -> None:
    header = json.dumps(
        {"schema": SCHEMA_NAME, "version": SCHEMA_VERSION, "fields": list(FIELDS)},
        separators=(",", ":"),
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for example in examples:
            fh.write(example_to_json(example) + "\n")


def read_examples(path) -> list[TrainingExample]:
    with open(path, encoding="utf-8") as fh:
        header_line = fh.readline()
        header = json.loads(header_line)
        if header.get("schema") != SCHEMA_NAME or header.get("version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported example schema: {header_line.strip()}")
        out = []
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            out.append(TrainingExample(**{
                name: record[name] for name in FIELDS
            }))
        return out

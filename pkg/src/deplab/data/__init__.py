from deplab.data.generator import GenProfile, ORACLE_PROFILE, gen_synthetic_corpus, generate_function
from deplab.data.groundtruth import (
    ExampleConfig,
    TrainingExample,
    build_example,
    build_gc,
    build_gd,
    first_piece_index,
    node_membership,
)
from deplab.data.partial import make_partial
from deplab.data.pretty import pretty_print
from deplab.data.serialize import read_examples, write_examples
from deplab.data.split import CorpusSplit, dedup_and_split, normalized_hash

__all__ = [
    "GenProfile",
    "ORACLE_PROFILE",
    "gen_synthetic_corpus",
    "generate_function",
    "ExampleConfig",
    "TrainingExample",
    "build_example",
    "build_gc",
    "build_gd",
    "first_piece_index",
    "node_membership",
    "make_partial",
    "pretty_print",
    "read_examples",
    "write_examples",
    "CorpusSplit",
    "dedup_and_split",
    "normalized_hash",
]

from deplab.pipeline.bench import bench_throughput
from deplab.pipeline.evaluate import EvalReport, PairCounts, eval_complete, eval_partial, render_table
from deplab.pipeline.predict import (
    Prediction,
    fallback_segment,
    predict_dependencies,
    predict_pairs,
    segment_for_inference,
)
from deplab.pipeline.train import EpochStats, TrainRunConfig, example_losses, pretrain

__all__ = [
    "bench_throughput",
    "EvalReport",
    "PairCounts",
    "eval_complete",
    "eval_partial",
    "render_table",
    "Prediction",
    "fallback_segment",
    "predict_dependencies",
    "predict_pairs",
    "segment_for_inference",
    "EpochStats",
    "TrainRunConfig",
    "example_losses",
    "pretrain",
]

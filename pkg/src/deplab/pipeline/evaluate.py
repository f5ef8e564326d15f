"""Intrinsic evaluation: micro precision/recall/F1 over pooled pair sets.

Predicted and ground-truth pairs from every test function are flattened into
one pooled multiset per dependency type; the Overall row combines both types.
Partial mode evaluates prefix snippets per K (functions with fewer than K
nodes are skipped); complete mode buckets functions by lines of code. Every
run cross-checks the streaming counters against a naive pooled-set recount.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from deplab.bpe import BpeModel
from deplab.data.groundtruth import TrainingExample
from deplab.data.partial import make_partial
from deplab.data.groundtruth import ExampleConfig
from deplab.errors import TooShort
from deplab.nn.model import ModelParams
from deplab.pipeline.predict import predict_pairs

LOC_BUCKETS = ((0, 10), (10, 20), (20, 30), (30, None))


@dataclass
class PairCounts:
    truth: int = 0
    predicted: int = 0
    matched: int = 0

    def add(self, truth: set, predicted: set):
        self.truth += len(truth)
        self.predicted += len(predicted)
        self.matched += len(truth & predicted)

    def merged(self, other: "PairCounts") -> "PairCounts":
        return PairCounts(
            self.truth + other.truth,
            self.predicted + other.predicted,
            self.matched + other.matched,
        )

    @property
    def precision(self) -> float:
        return self.matched / self.predicted if self.predicted else 0.0

    @property
    def recall(self) -> float:
        return self.matched / self.truth if self.truth else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass
class EvalReport:
    bucket: str
    n_functions: int
    control: PairCounts
    data: PairCounts
    mean_latency_ms: float = 0.0

    @property
    def overall(self) -> PairCounts:
        return self.control.merged(self.data)

    def as_dict(self) -> dict:
        def block(c: PairCounts) -> dict:
            return {
                "precision": round(c.precision, 6),
                "recall": round(c.recall, 6),
                "f1": round(c.f1, 6),
                "truth": c.truth,
                "predicted": c.predicted,
                "matched": c.matched,
            }

        return {
            "bucket": self.bucket,
            "n_functions": self.n_functions,
            "control": block(self.control),
            "data": block(self.data),
            "overall": block(self.overall),
            "mean_latency_ms": round(self.mean_latency_ms, 3),
        }


@dataclass
class _Pool:
    """Streaming counters plus the pooled sets for the naive recount."""

    counts_control: PairCounts = field(default_factory=PairCounts)
    counts_data: PairCounts = field(default_factory=PairCounts)
    pooled: dict = field(default_factory=lambda: {
        ("control", "truth"): set(), ("control", "pred"): set(),
        ("data", "truth"): set(), ("data", "pred"): set(),
    })
    n_functions: int = 0
    latency_total: float = 0.0

    def add(self, fid: str, truth_c: set, pred_c: set, truth_d: set, pred_d: set, ms: float):
        self.counts_control.add(truth_c, pred_c)
        self.counts_data.add(truth_d, pred_d)
        self.pooled[("control", "truth")] |= {(fid,) + p for p in truth_c}
        self.pooled[("control", "pred")] |= {(fid,) + p for p in pred_c}
        self.pooled[("data", "truth")] |= {(fid,) + p for p in truth_d}
        self.pooled[("data", "pred")] |= {(fid,) + p for p in pred_d}
        self.n_functions += 1
        self.latency_total += ms

    def verify(self):
        """The streaming counters must equal a hash-set recount."""
        for kind, counts in (("control", self.counts_control), ("data", self.counts_data)):
            truth = self.pooled[(kind, "truth")]
            pred = self.pooled[(kind, "pred")]
            assert counts.truth == len(truth), f"{kind} truth count drift"
            assert counts.predicted == len(pred), f"{kind} predicted count drift"
            assert counts.matched == len(truth & pred), f"{kind} matched count drift"

    def report(self, bucket: str) -> EvalReport:
        mean = self.latency_total / self.n_functions if self.n_functions else 0.0
        return EvalReport(bucket, self.n_functions, self.counts_control,
                          self.counts_data, mean)


def _evaluate_example(params: ModelParams, ex: TrainingExample, threshold: float,
                      pool: _Pool):
    t0 = time.perf_counter()
    control, data = predict_pairs(params, ex.ids, ex.node_members, threshold)
    ms = (time.perf_counter() - t0) * 1000.0
    pool.add(
        ex.id,
        {tuple(p) for p in ex.gc},
        set(control),
        {tuple(p) for p in ex.gd},
        set(data),
        ms,
    )


def loc_of(source: str) -> int:
    return len([line for line in source.splitlines() if line.strip()])


def bucket_name(bounds) -> str:
    lo, hi = bounds
    return f"({lo}, {hi}]" if hi is not None else f"({lo}, inf)"


def eval_complete(params: ModelParams, examples: list[TrainingExample],
                  threshold: float = 0.5, debug_recount: bool = True) -> list[EvalReport]:
    """Per-LOC-bucket rows plus a 'total' row over all test functions."""
    pools = {bounds: _Pool() for bounds in LOC_BUCKETS}
    total = _Pool()
    for ex in examples:
        loc = loc_of(ex.source)
        for lo, hi in LOC_BUCKETS:
            if loc > lo and (hi is None or loc <= hi):
                _evaluate_example(params, ex, threshold, pools[(lo, hi)])
                break
        _evaluate_example(params, ex, threshold, total)
    reports = []
    for bounds in LOC_BUCKETS:
        pool = pools[bounds]
        if pool.n_functions == 0:
            continue  # empty bucket: absent row, not a failure
        if debug_recount:
            pool.verify()
        reports.append(pool.report(bucket_name(bounds)))
    if debug_recount:
        total.verify()
        reconcile = {
            "control": sum(r.control.truth for r in reports),
            "data": sum(r.data.truth for r in reports),
        }
        assert reconcile["control"] == total.counts_control.truth
        assert reconcile["data"] == total.counts_data.truth
    reports.append(total.report("total"))
    return reports


def eval_partial(params: ModelParams, test_examples: list[TrainingExample],
                 ks, bpe_model: BpeModel, example_config: ExampleConfig,
                 threshold: float = 0.5, debug_recount: bool = True) -> list[EvalReport]:
    """One row per K over prefix snippets; functions shorter than K are
    ignored. Prefix ground truth is the restriction of the full-function
    analysis."""
    reports = []
    for k in ks:
        pool = _Pool()
        for ex in test_examples:
            try:
                part = make_partial(ex.id, ex.source, k, bpe_model, example_config)
            except TooShort:
                continue
            _evaluate_example(params, part, threshold, pool)
        if pool.n_functions == 0:
            continue
        if debug_recount:
            pool.verify()
        reports.append(pool.report(f"K={k}"))
    return reports


def render_table(reports: list[EvalReport]) -> str:
    """Human-readable table: one row per bucket, three metric blocks."""
    header = (
        f"{'bucket':>10} {'#fn':>5} | {'ctrl P':>7} {'ctrl R':>7} {'ctrl F1':>7} | "
        f"{'data P':>7} {'data R':>7} {'data F1':>7} | {'all F1':>7} | {'ms/fn':>7}"
    )
    lines = [header, "-" * len(header)]
    for r in reports:
        lines.append(
            f"{r.bucket:>10} {r.n_functions:>5} | "
            f"{r.control.precision:7.4f} {r.control.recall:7.4f} {r.control.f1:7.4f} | "
            f"{r.data.precision:7.4f} {r.data.recall:7.4f} {r.data.f1:7.4f} | "
            f"{r.overall.f1:7.4f} | {r.mean_latency_ms:7.2f}"
        )
    return "\n".join(lines)

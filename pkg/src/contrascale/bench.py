"""Evaluation pipeline: structure shrinkage, the label-prediction experiment,
and enumeration timing."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .adjust import delta_adjust, _delta_fraction
from .context import FormalContext, SubcontextSelection, apply_selection
from .lattice import canonical_base, enumerate_concepts
from .rng import SplitMix64, derive_seed
from .scales import ALGORITHMS, iter_scale_families
from .tree import train_tree

__all__ = [
    "ExperimentConfig",
    "RepetitionRecord",
    "ExperimentResult",
    "sample_attributes",
    "decision_tree_accuracy",
    "run_knowledge_experiment",
    "run_structure_experiment",
    "benchmark_enumeration",
    "experiment_result_json",
    "experiment_result_csv",
]

METHODS = ("adjusted", "sampled")

# Fixed stream tags for per-repetition sub-seeds, so that the label and the
# train/test split are identical across methods under one master seed.
_STREAM_LABEL = 0
_STREAM_SPLIT = 1
_STREAM_FEATURES = 2
_STREAM_STRUCTURE = 3


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    delta: float = 0.5
    repetitions: int = 1000
    split_fraction: float = 0.5
    method: str = "adjusted"

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not 0 < self.split_fraction < 1:
            raise ValueError("split_fraction must lie strictly between 0 and 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")


@dataclass(frozen=True)
class RepetitionRecord:
    index: int
    label_attribute: int
    features: tuple[int, ...]
    accuracy: float


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    mean_accuracy: float
    std_accuracy: float
    concept_count: float
    base_size: float
    repetitions: tuple[RepetitionRecord, ...] = field(repr=False)


def sample_attributes(ctx: FormalContext, n: int, seed: int) -> tuple[int, ...]:
    """Uniform attribute sample without replacement, deterministic per seed."""
    if not 0 <= n <= ctx.n_attributes:
        raise ValueError(f"sample size {n} out of range [0, {ctx.n_attributes}]")
    rng = SplitMix64(seed)
    return tuple(sorted(rng.sample_indices(ctx.n_attributes, n)))


def _split_indices(
    n: int, split_fraction: float, seed: int
) -> tuple[list[int], list[int]]:
    order = list(range(n))
    SplitMix64(seed).shuffle(order)
    cut = math.floor(n * split_fraction)
    train, test = order[:cut], order[cut:]
    if not train or not test:
        raise ValueError("split leaves an empty train or test set")
    return train, test


def decision_tree_accuracy(
    data: Sequence[Sequence[int]],
    features: Iterable[int],
    label: int,
    split_fraction: float,
    seed: int,
) -> float:
    """Held-out accuracy of a tree predicting one binary column from others."""
    features = tuple(features)
    if label in features:
        raise ValueError("label column must not be among the features")
    if len(data) < 2:
        raise ValueError("need at least 2 rows to split")
    train, test = _split_indices(len(data), split_fraction, seed)
    labels = [int(bool(row[label])) for row in data]
    tree = train_tree(
        [data[i] for i in train], [labels[i] for i in train], features
    )
    return tree.accuracy([data[i] for i in test], [labels[i] for i in test])


def _structure_metrics(ctx: FormalContext, attributes: Sequence[int]) -> tuple[int, int]:
    sub = apply_selection(
        SubcontextSelection(ctx, tuple(range(ctx.n_objects)), tuple(attributes))
    )
    return len(enumerate_concepts(sub)), len(canonical_base(sub))


def run_knowledge_experiment(ctx: FormalContext, cfg: ExperimentConfig) -> ExperimentResult:
    """Repeatedly predict a random attribute from a method-chosen feature set.

    The delta-adjusted selection is computed once on the whole context.  Per
    repetition a label attribute is drawn; the adjusted arm's features are
    that selection with the label dropped (never backfilled), the sampled
    arm draws the same number of attributes uniformly from the rest.
    Each repetition trains and scores on a fresh train/test split.
    """
    if ctx.n_attributes < 2:
        raise ValueError("need at least 2 attributes")
    delta = _delta_fraction(cfg.delta)
    rows = [tuple(int(v) for v in row) for row in ctx.incidence_rows()]
    selection = delta_adjust(ctx, delta).attributes
    records = []
    for rep in range(cfg.repetitions):
        label = SplitMix64(derive_seed(cfg.seed, rep, _STREAM_LABEL)).randrange(
            ctx.n_attributes
        )
        adjusted = tuple(m for m in selection if m != label)
        if cfg.method == "adjusted":
            features = adjusted
        else:
            rng = SplitMix64(derive_seed(cfg.seed, rep, _STREAM_FEATURES))
            others = [m for m in range(ctx.n_attributes) if m != label]
            features = tuple(
                sorted(others[i] for i in rng.sample_indices(len(others), len(adjusted)))
            )
        if not features:
            raise ValueError("the feature set is empty; use a larger delta")
        accuracy = decision_tree_accuracy(
            rows,
            features,
            label,
            cfg.split_fraction,
            derive_seed(cfg.seed, rep, _STREAM_SPLIT),
        )
        records.append(RepetitionRecord(rep, label, features, accuracy))
    accs = [r.accuracy for r in records]
    mean = sum(accs) / len(accs)
    std = math.sqrt(sum((a - mean) ** 2 for a in accs) / len(accs))
    if cfg.method == "adjusted":
        concept_count, base_size = _structure_metrics(
            ctx, delta_adjust(ctx, delta).attributes
        )
    else:
        size = math.ceil(delta * ctx.n_attributes)
        cc = bb = 0.0
        samples = 10
        for j in range(samples):
            picked = sample_attributes(ctx, size, derive_seed(cfg.seed, j, _STREAM_STRUCTURE))
            c, b = _structure_metrics(ctx, picked)
            cc += c
            bb += b
        concept_count, base_size = cc / samples, bb / samples
    return ExperimentResult(
        config=cfg,
        mean_accuracy=mean,
        std_accuracy=std,
        concept_count=concept_count,
        base_size=base_size,
        repetitions=tuple(records),
    )


def run_structure_experiment(
    ctx: FormalContext,
    delta: float | str | Fraction,
    *,
    samples: int = 10,
    seed: int = 0,
) -> dict:
    """Concept and base counts for the original, adjusted, and sampled contexts."""
    if samples < 1:
        raise ValueError("need at least one sampling seed")
    value = _delta_fraction(delta)
    concepts_original = len(enumerate_concepts(ctx))
    base_original = len(canonical_base(ctx))
    chosen = delta_adjust(ctx, value).attributes
    concepts_adjusted, base_adjusted = _structure_metrics(ctx, chosen)
    size = len(chosen)
    sampled_concepts = []
    sampled_bases = []
    for j in range(samples):
        picked = sample_attributes(ctx, size, derive_seed(seed, j, _STREAM_STRUCTURE))
        c, b = _structure_metrics(ctx, picked)
        sampled_concepts.append(c)
        sampled_bases.append(b)
    return {
        "delta": float(value),
        "concepts_original": concepts_original,
        "concepts_adjusted": concepts_adjusted,
        "base_original": base_original,
        "base_adjusted": base_adjusted,
        "sampled_means": {
            "concepts": sum(sampled_concepts) / samples,
            "base": sum(sampled_bases) / samples,
            "samples": samples,
        },
    }


def benchmark_enumeration(
    ctx: FormalContext,
    algorithms: Sequence[str] = ALGORITHMS,
    timeout: float | None = None,
) -> dict:
    """Wall-clock comparison of the enumeration algorithms, counts cross-checked.

    A run that exceeds the timeout is reported as unfinished, not failed.
    Timing values are diagnostics and vary between runs; counts do not.
    """
    from .scales import enumerate_bronkerbosch

    report: dict = {}
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        start = time.perf_counter()
        total = 0
        max_dim = 0
        finished = True
        if algorithm == "backtracking":
            stream = iter_scale_families(ctx)
            for family in stream:
                total += family.scale_count()
                max_dim = max(max_dim, family.dimension)
                if timeout is not None and time.perf_counter() - start > timeout:
                    finished = False
                    break
        else:
            for scale in enumerate_bronkerbosch(ctx):
                total += 1
                max_dim = max(max_dim, scale.dimension)
                if timeout is not None and time.perf_counter() - start > timeout:
                    finished = False
                    break
        report[algorithm] = {
            "seconds": time.perf_counter() - start,
            "finished": finished,
            "count": total if finished else None,
            "max_dimension": max_dim if finished else None,
        }
    finished_counts = {
        payload["count"] for payload in report.values() if payload["finished"]
    }
    report["consistent"] = len(finished_counts) <= 1
    return report


# -- serialization --------------------------------------------------------------


def experiment_result_json(result: ExperimentResult) -> str:
    payload = {
        "config": {
            "seed": result.config.seed,
            "delta": result.config.delta,
            "repetitions": result.config.repetitions,
            "split_fraction": result.config.split_fraction,
            "method": result.config.method,
        },
        "mean_accuracy": result.mean_accuracy,
        "std_accuracy": result.std_accuracy,
        "concept_count": result.concept_count,
        "base_size": result.base_size,
        "repetitions": [
            {
                "index": r.index,
                "label": r.label_attribute,
                "features": list(r.features),
                "accuracy": r.accuracy,
            }
            for r in result.repetitions
        ],
    }
    return json.dumps(payload, indent=2)


def experiment_result_csv(results: Sequence[ExperimentResult]) -> str:
    lines = ["method,mean_accuracy,std_accuracy,concept_count,base_size"]
    for r in results:
        lines.append(
            f"{r.config.method},{r.mean_accuracy:.4f},{r.std_accuracy:.4f},"
            f"{r.concept_count},{r.base_size}"
        )
    return "\n".join(lines) + "\n"

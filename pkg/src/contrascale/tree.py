"""A minimal decision tree for binary feature tables.

Binary splits on single attributes, Gini impurity, grown until a node is
pure or no split strictly reduces impurity, majority vote at the leaves,
no pruning.  Impurity comparisons use exact rational arithmetic so ties
are real ties, and they break deterministically: equal-impurity splits
pick the lowest feature index, tied majorities predict 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["DecisionTree", "train_tree"]

Row = Sequence[int]


@dataclass
class _Node:
    feature: int | None = None
    left: "_Node | None" = None   # feature value 0
    right: "_Node | None" = None  # feature value 1
    value: int = 0


def _gini(counts: tuple[int, int]) -> Fraction:
    total = counts[0] + counts[1]
    if total == 0:
        return Fraction(0)
    return Fraction(total * total - counts[0] ** 2 - counts[1] ** 2, total * total)


def _majority(counts: tuple[int, int]) -> int:
    return 1 if counts[1] > counts[0] else 0


class DecisionTree:
    def __init__(self, root: _Node):
        self._root = root

    def predict(self, row: Row) -> int:
        node = self._root
        while node.feature is not None:
            node = node.right if row[node.feature] else node.left  # type: ignore[assignment]
        return node.value

    def accuracy(self, rows: Sequence[Row], labels: Sequence[int]) -> float:
        if not rows:
            raise ValueError("cannot score an empty sample")
        hits = sum(1 for row, y in zip(rows, labels) if self.predict(row) == y)
        return hits / len(rows)


def _label_counts(labels: Sequence[int], indices: Sequence[int]) -> tuple[int, int]:
    ones = sum(labels[i] for i in indices)
    return (len(indices) - ones, ones)


def _grow(
    rows: Sequence[Row],
    labels: Sequence[int],
    features: Sequence[int],
    indices: list[int],
) -> _Node:
    counts = _label_counts(labels, indices)
    impurity = _gini(counts)
    if counts[0] == 0 or counts[1] == 0:
        return _Node(value=_majority(counts))
    best: tuple[Fraction, int, list[int], list[int]] | None = None
    for feature in features:
        zeros = [i for i in indices if not rows[i][feature]]
        ones = [i for i in indices if rows[i][feature]]
        if not zeros or not ones:
            continue
        weighted = (
            len(zeros) * _gini(_label_counts(labels, zeros))
            + len(ones) * _gini(_label_counts(labels, ones))
        ) / len(indices)
        if best is None or weighted < best[0]:
            best = (weighted, feature, zeros, ones)
    if best is None or best[0] >= impurity:
        return _Node(value=_majority(counts))
    _, feature, zeros, ones = best
    return _Node(
        feature=feature,
        left=_grow(rows, labels, features, zeros),
        right=_grow(rows, labels, features, ones),
    )


def train_tree(
    rows: Sequence[Row], labels: Sequence[int], features: Sequence[int]
) -> DecisionTree:
    if not rows:
        raise ValueError("cannot train on an empty sample")
    return DecisionTree(_grow(rows, labels, tuple(features), list(range(len(rows)))))

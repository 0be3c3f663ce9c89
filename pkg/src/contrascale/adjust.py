"""Attribute influence scoring and delta-adjusted attribute selection.

An attribute set is *cubic* when it carries a contranominal scale and no
proper superset does.  Each attribute is scored by summing 2**k / k over the
k-sized cubic sets containing it; selecting the lowest-scoring attributes
shrinks the concept lattice while keeping every implication among the
survivors valid.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .context import FormalContext, is_clarified
from .scales import ScaleFamily, iter_scale_families

__all__ = [
    "CubicSet",
    "AttributeInfluence",
    "InfluenceReport",
    "AdjustedSelection",
    "NotPreprocessedError",
    "require_clarified_reduced",
    "cubic_sets",
    "influence",
    "select_attributes",
    "delta_adjust",
    "influence_table",
    "influence_csv",
    "influence_json",
    "selection_json",
]


class NotPreprocessedError(ValueError):
    """Raised when influence scoring gets a context that was not clarified and reduced."""


@dataclass(frozen=True)
class CubicSet:
    """A maximal scale-carrying attribute set with its witness classes."""

    attributes: tuple[int, ...]
    dimension: int
    witnesses: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class AttributeInfluence:
    attribute: int
    label: str
    cubic_counts: Mapping[int, int]
    zeta_exact: Fraction

    @property
    def zeta(self) -> float:
        return float(self.zeta_exact)


@dataclass(frozen=True)
class InfluenceReport:
    per_attribute: tuple[AttributeInfluence, ...]

    def zeta_values(self) -> tuple[float, ...]:
        return tuple(a.zeta for a in self.per_attribute)


@dataclass(frozen=True)
class AdjustedSelection:
    delta: float
    attributes: tuple[int, ...]
    report: InfluenceReport


def require_clarified_reduced(ctx: FormalContext) -> None:
    """Reject contexts that still contain duplicate or reducible rows/columns.

    Influence scores of a context and of its clarified/reduced form differ,
    so preprocessing is never applied silently; run clarify() and
    reduce_context() first and decide which context you mean.
    """
    if not is_clarified(ctx):
        raise NotPreprocessedError(
            "context has duplicate rows or columns; apply clarify() first"
        )
    for masks, full in ((ctx.cols(), ctx.all_objects_mask), (ctx.rows(), ctx.all_attributes_mask)):
        for x in range(len(masks)):
            inter = full
            for y in range(len(masks)):
                if y != x and masks[y] & masks[x] == masks[x]:
                    inter &= masks[y]
            if inter == masks[x]:
                raise NotPreprocessedError(
                    "context has reducible rows or columns; apply reduce_context() first"
                )


def _maximal_families(ctx: FormalContext, threads: int = 1) -> list[ScaleFamily]:
    families = list(iter_scale_families(ctx, threads=threads))
    generators = {frozenset(f.attributes) for f in families}
    n = ctx.n_attributes
    maximal = []
    for family in families:
        attrs = frozenset(family.attributes)
        if any(
            m not in attrs and attrs | {m} in generators for m in range(n)
        ):
            continue
        maximal.append(family)
    return maximal


def cubic_sets(
    ctx: FormalContext, *, require_preprocessed: bool = True, threads: int = 1
) -> list[CubicSet]:
    """All maximal scale-carrying attribute sets with their witness classes."""
    if require_preprocessed:
        require_clarified_reduced(ctx)
    return [
        CubicSet(f.attributes, f.dimension, f.witness_indices())
        for f in _maximal_families(ctx, threads)
    ]


def influence(
    ctx: FormalContext, *, require_preprocessed: bool = True, threads: int = 1
) -> InfluenceReport:
    """Per-attribute cubic-set counts and the influence score zeta.

    zeta(m) = sum over k of (number of k-sized cubic sets containing m) * 2**k / k,
    kept exact as a fraction; round only for display.
    """
    if require_preprocessed:
        require_clarified_reduced(ctx)
    counts: list[dict[int, int]] = [{} for _ in range(ctx.n_attributes)]
    for family in _maximal_families(ctx, threads):
        k = family.dimension
        for m in family.attributes:
            counts[m][k] = counts[m].get(k, 0) + 1
    per_attribute = []
    for m in range(ctx.n_attributes):
        zeta = sum(
            (Fraction(2**k, k) * c for k, c in counts[m].items()),
            start=Fraction(0),
        )
        per_attribute.append(
            AttributeInfluence(
                attribute=m,
                label=ctx.attributes[m],
                cubic_counts=dict(sorted(counts[m].items())),
                zeta_exact=zeta,
            )
        )
    return InfluenceReport(tuple(per_attribute))


def _delta_fraction(delta: float | str | Fraction) -> Fraction:
    # Floats go through their shortest decimal repr so that e.g. 0.1 * 30
    # selects 3 attributes, not 4.
    if isinstance(delta, str):
        value = Fraction(delta)
    elif isinstance(delta, Fraction):
        value = delta
    else:
        value = Fraction(str(delta))
    if not 0 <= value <= 1:
        raise ValueError("delta must lie in [0, 1]")
    return value


def select_attributes(report: InfluenceReport, delta: float | str | Fraction) -> tuple[int, ...]:
    """The ceil(delta * |M|) attributes of smallest influence.

    Ties are broken by the original attribute index, ascending, so the
    selection is deterministic and monotone in delta.
    """
    value = _delta_fraction(delta)
    n = len(report.per_attribute)
    size = math.ceil(value * n)
    ranked = sorted(report.per_attribute, key=lambda a: (a.zeta_exact, a.attribute))
    return tuple(sorted(a.attribute for a in ranked[:size]))


def delta_adjust(
    ctx: FormalContext,
    delta: float | str | Fraction,
    *,
    require_preprocessed: bool = True,
    threads: int = 1,
) -> AdjustedSelection:
    """Select the lowest-influence attribute subset of relative size >= delta."""
    value = _delta_fraction(delta)
    report = influence(ctx, require_preprocessed=require_preprocessed, threads=threads)
    chosen = select_attributes(report, value)
    return AdjustedSelection(delta=float(value), attributes=chosen, report=report)


# -- rendering ----------------------------------------------------------------


def _count_columns(report: InfluenceReport) -> list[int]:
    ks = {k for a in report.per_attribute for k in a.cubic_counts}
    return sorted(ks)


def influence_table(
    ctx: FormalContext,
    delta: float | str | Fraction | None = None,
    *,
    require_preprocessed: bool = True,
) -> str:
    """Plain-text influence table in original attribute order."""
    report = influence(ctx, require_preprocessed=require_preprocessed)
    if not report.per_attribute:
        return ""
    chosen = set(select_attributes(report, delta)) if delta is not None else set()
    ks = _count_columns(report)
    header = ["attribute"] + [str(k) for k in ks] + ["zeta"]
    if delta is not None:
        header.append("selected")
    table = [header]
    for a in report.per_attribute:
        row = [a.label]
        row.extend(str(a.cubic_counts.get(k, 0)) for k in ks)
        row.append(f"{a.zeta:.1f}")
        if delta is not None:
            row.append("*" if a.attribute in chosen else "")
        table.append(row)
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = []
    for row in table:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def influence_csv(report: InfluenceReport) -> str:
    ks = _count_columns(report)
    lines = [",".join(["attribute"] + [str(k) for k in ks] + ["zeta"])]
    for a in report.per_attribute:
        cells = [a.label] + [str(a.cubic_counts.get(k, 0)) for k in ks]
        cells.append(f"{a.zeta:.1f}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def influence_json(report: InfluenceReport) -> str:
    payload = [
        {
            "label": a.label,
            "counts": {str(k): c for k, c in a.cubic_counts.items()},
            "zeta": a.zeta,
        }
        for a in report.per_attribute
    ]
    return json.dumps(payload, indent=2)


def selection_json(selection: AdjustedSelection, ctx: FormalContext) -> str:
    chosen = set(selection.attributes)
    payload = {
        "delta": selection.delta,
        "chosen": [ctx.attributes[m] for m in selection.attributes],
        "excluded": [
            ctx.attributes[m] for m in range(ctx.n_attributes) if m not in chosen
        ],
    }
    return json.dumps(payload, indent=2)

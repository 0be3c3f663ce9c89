"""Enumeration of contranominal scales.

A contranominal scale of dimension k is a k x k subcontext whose only
non-incidences form the diagonal.  The primary enumerator is a recursive
backtracking search over attribute subsets; a Bron-Kerbosch clique search on
the conflict graph serves as an independent cross-check.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import prod
from typing import Iterable, Iterator, Sequence

from .context import (
    ClarificationMap,
    FormalContext,
    ReductionTrace,
    clarify,
    mask_to_indices,
    pq_core,
    apply_selection,
    reduce_context,
)

__all__ = [
    "ContranominalScale",
    "ScaleFamily",
    "ScaleCount",
    "ConflictGraph",
    "BipartiteGraph",
    "ALGORITHMS",
    "iter_scale_families",
    "enumerate_scales",
    "count_scales",
    "max_dimension",
    "conflict_graph",
    "enumerate_bronkerbosch",
    "enumerate_bruteforce",
    "scales_from_clarified",
    "scales_from_reduced",
    "to_bipartite",
    "induced_matchings",
    "scale_to_line",
    "scale_to_json_obj",
    "count_report_json",
]

ALGORITHMS = ("backtracking", "bronkerbosch")


@dataclass(frozen=True)
class ContranominalScale:
    """Witness of one scale: (object, attribute) pairs sorted by attribute.

    Pair i marks the single non-incidence of object i within the attribute
    set; every other (object, attribute) combination of the scale is
    incident.
    """

    pairs: tuple[tuple[int, int], ...]

    @property
    def dimension(self) -> int:
        return len(self.pairs)

    @property
    def object_indices(self) -> tuple[int, ...]:
        return tuple(g for g, _ in self.pairs)

    @property
    def attribute_indices(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.pairs)

    def sort_key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.attribute_indices, self.object_indices)

    def is_valid_in(self, ctx: FormalContext) -> bool:
        pairs = self.pairs
        if not pairs:
            return False
        objs = [g for g, _ in pairs]
        atts = [m for _, m in pairs]
        if len(set(objs)) != len(objs) or len(set(atts)) != len(atts):
            return False
        if list(atts) != sorted(atts):
            return False
        for i, (g, _) in enumerate(pairs):
            for j, (_, m) in enumerate(pairs):
                if ctx.incident(g, m) != (i != j):
                    return False
        return True


@dataclass(frozen=True)
class ScaleFamily:
    """All scales sharing one attribute set, encoded by witness classes.

    ``witness_masks[i]`` is the object bitmask of candidates for attribute
    ``attributes[i]``; picking one object per class yields one scale, and
    every choice is valid.
    """

    attributes: tuple[int, ...]
    witness_masks: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.attributes)

    def witness_indices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(mask_to_indices(m) for m in self.witness_masks)

    def scale_count(self) -> int:
        return prod(m.bit_count() for m in self.witness_masks)

    def iter_scales(self) -> Iterator[ContranominalScale]:
        classes = self.witness_indices()
        for choice in product(*classes):
            yield ContranominalScale(tuple(zip(choice, self.attributes)))


@dataclass(frozen=True)
class ScaleCount:
    total: int
    histogram: dict[int, int]
    max_dimension: int


@dataclass(frozen=True)
class ConflictGraph:
    """Graph on non-incident pairs; edges join pairs that can share a scale."""

    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...]

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.vertices]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


@dataclass(frozen=True)
class BipartiteGraph:
    left: tuple[str, ...]
    right: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]


# -- backtracking enumeration ------------------------------------------------


def _branch_families(ctx: FormalContext, first: int) -> list[ScaleFamily]:
    """Families whose smallest attribute is ``first``, in canonical order."""
    cols = ctx.cols()
    all_objects = ctx.all_objects_mask
    non_incidence = [all_objects & ~c for c in cols]
    n = ctx.n_attributes
    out: list[ScaleFamily] = []

    def rec(attrs: tuple[int, ...], wits: tuple[int, ...], forbidden: int, start: int) -> None:
        for m in range(start, n):
            fresh = non_incidence[m] & ~forbidden
            if not fresh:
                continue
            col = cols[m]
            filtered = tuple(w & col for w in wits)
            # Extend only while every attribute keeps at least one witness;
            # a class that drains to zero kills every extension as well.
            if any(w == 0 for w in filtered):
                continue
            new_attrs = attrs + (m,)
            new_wits = filtered + (fresh,)
            out.append(ScaleFamily(new_attrs, new_wits))
            rec(new_attrs, new_wits, forbidden | non_incidence[m], m + 1)

    fresh0 = non_incidence[first]
    if fresh0:
        attrs0 = (first,)
        wits0 = (fresh0,)
        out.append(ScaleFamily(attrs0, wits0))
        rec(attrs0, wits0, non_incidence[first], first + 1)
    return out


def iter_scale_families(ctx: FormalContext, *, threads: int = 1) -> Iterator[ScaleFamily]:
    """Walk all attribute sets carrying scales, in canonical order.

    Canonical order is depth-first by ascending attribute index, which equals
    sorting by the attribute tuple.  With ``threads > 1`` the top-level
    branches run in a thread pool and are merged back in order, so output is
    identical to the serial walk.
    """
    n = ctx.n_attributes
    if threads <= 1 or n <= 1:
        for first in range(n):
            yield from _branch_families(ctx, first)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_branch_families, ctx, first) for first in range(n)]
        for future in futures:
            yield from future.result()


def _reindex_scale(
    scale: ContranominalScale,
    object_map: Sequence[int],
    attribute_map: Sequence[int],
) -> ContranominalScale:
    return ContranominalScale(
        tuple((object_map[g], attribute_map[m]) for g, m in scale.pairs)
    )


def enumerate_scales(
    ctx: FormalContext,
    *,
    algorithm: str = "backtracking",
    min_dimension: int | None = None,
    preprocess: bool = False,
    threads: int = 1,
) -> Iterator[ContranominalScale]:
    """Stream every contranominal scale of ``ctx`` exactly once.

    ``min_dimension=k`` first peels the (k-1, k-1)-core, which preserves all
    scales of dimension >= k, and filters the rest.  ``preprocess=True``
    enumerates on the clarified and reduced context and reconstructs scales
    of the original.  Both are opt-in: cores silently drop small scales and
    preprocessing changes the search space, so neither is applied by default.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    if preprocess:
        clarified, cmap = clarify(ctx)
        reduced, trace = reduce_context(clarified)
        inner = enumerate_scales(
            reduced, algorithm=algorithm, min_dimension=min_dimension, threads=threads
        )
        restored = scales_from_reduced(inner, trace, clarified)
        originals = scales_from_clarified(restored, cmap)
        yield from sorted(originals, key=ContranominalScale.sort_key)
        return
    if min_dimension is not None and min_dimension > 1:
        core_sel = pq_core(ctx, min_dimension - 1, min_dimension - 1)
        core_ctx = apply_selection(core_sel)
        inner = enumerate_scales(core_ctx, algorithm=algorithm, threads=threads)
        for scale in inner:
            if scale.dimension >= min_dimension:
                restored = _reindex_scale(
                    scale, core_sel.object_indices, core_sel.attribute_indices
                )
                assert restored.is_valid_in(ctx)
                yield restored
        return
    if algorithm == "bronkerbosch":
        yield from enumerate_bronkerbosch(ctx)
        return
    for family in iter_scale_families(ctx, threads=threads):
        for scale in family.iter_scales():
            assert scale.is_valid_in(ctx)
            yield scale


def count_scales(
    ctx: FormalContext,
    *,
    min_dimension: int | None = None,
    threads: int = 1,
) -> ScaleCount:
    """Scale totals per dimension without materializing the scales."""
    if min_dimension is not None and min_dimension > 1:
        core_ctx = apply_selection(pq_core(ctx, min_dimension - 1, min_dimension - 1))
        inner = count_scales(core_ctx, threads=threads)
        histogram = {k: v for k, v in inner.histogram.items() if k >= min_dimension}
        return ScaleCount(
            total=sum(histogram.values()),
            histogram=histogram,
            max_dimension=max(histogram, default=0),
        )
    histogram: dict[int, int] = {}
    for family in iter_scale_families(ctx, threads=threads):
        dim = family.dimension
        histogram[dim] = histogram.get(dim, 0) + family.scale_count()
    histogram = dict(sorted(histogram.items()))
    return ScaleCount(
        total=sum(histogram.values()),
        histogram=histogram,
        max_dimension=max(histogram, default=0),
    )


def max_dimension(ctx: FormalContext, *, threads: int = 1) -> int:
    """Largest scale dimension; 0 when the incidence is full."""
    best = 0
    for family in iter_scale_families(ctx, threads=threads):
        if family.dimension > best:
            best = family.dimension
    return best


# -- conflict graph and Bron-Kerbosch cross-check ----------------------------


def conflict_graph(ctx: FormalContext) -> ConflictGraph:
    vertices = [
        (g, m)
        for g in range(ctx.n_objects)
        for m in range(ctx.n_attributes)
        if not ctx.incident(g, m)
    ]
    edges = []
    for i in range(len(vertices)):
        g, m = vertices[i]
        for j in range(i + 1, len(vertices)):
            h, n = vertices[j]
            if ctx.incident(g, n) and ctx.incident(h, m):
                edges.append((i, j))
    return ConflictGraph(tuple(vertices), tuple(edges))


def _maximal_cliques(adj: list[set[int]]) -> Iterator[frozenset[int]]:
    """Bron-Kerbosch with pivoting."""

    def expand(r: set[int], p: set[int], x: set[int]) -> Iterator[frozenset[int]]:
        if not p and not x:
            yield frozenset(r)
            return
        pivot = max(p | x, key=lambda v: len(adj[v] & p))
        for v in sorted(p - adj[pivot]):
            yield from expand(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    yield from expand(set(), set(range(len(adj))), set())


def _clique_subsets(clique: Sequence[int]) -> Iterator[tuple[int, ...]]:
    members = sorted(clique)
    for bits in range(1, 1 << len(members)):
        yield tuple(members[i] for i in range(len(members)) if bits >> i & 1)


def enumerate_bronkerbosch(ctx: FormalContext) -> Iterator[ContranominalScale]:
    """All scales via cliques of the conflict graph.

    Bron-Kerbosch yields the maximal cliques; every clique is then recovered
    by subset expansion with global de-duplication, since any clique of the
    conflict graph corresponds to exactly one scale.  Output is re-sorted
    into the canonical stream order.
    """
    graph = conflict_graph(ctx)
    if not graph.vertices:
        return
    adj = graph.adjacency()
    seen: set[tuple[int, ...]] = set()
    scales = []
    for clique in _maximal_cliques(adj):
        for subset in _clique_subsets(tuple(clique)):
            if subset in seen:
                continue
            seen.add(subset)
            pairs = sorted((graph.vertices[v] for v in subset), key=lambda p: p[1])
            scale = ContranominalScale(tuple(pairs))
            assert scale.is_valid_in(ctx)
            scales.append(scale)
    scales.sort(key=ContranominalScale.sort_key)
    yield from scales


def enumerate_bruteforce(ctx: FormalContext) -> Iterator[ContranominalScale]:
    """Third, definition-level oracle: test every (H, N) pair directly."""
    from itertools import combinations

    n_obj, n_att = ctx.n_objects, ctx.n_attributes
    limit = min(n_obj, n_att)
    scales = []
    for k in range(1, limit + 1):
        for atts in combinations(range(n_att), k):
            att_mask = 0
            for m in atts:
                att_mask |= 1 << m
            for objs in combinations(range(n_obj), k):
                # Within (H, N) each row must miss exactly one attribute and
                # the misses must cover all k columns.
                misses = []
                ok = True
                for g in objs:
                    gap = att_mask & ~ctx.row(g)
                    if gap.bit_count() != 1:
                        ok = False
                        break
                    misses.append(gap)
                if not ok:
                    continue
                union = 0
                for gap in misses:
                    union |= gap
                if union != att_mask:
                    continue
                pairs = sorted(
                    ((g, gap.bit_length() - 1) for g, gap in zip(objs, misses)),
                    key=lambda p: p[1],
                )
                scales.append(ContranominalScale(tuple(pairs)))
    scales.sort(key=ContranominalScale.sort_key)
    yield from scales


# -- reconstruction from clarified / reduced contexts ------------------------


def scales_from_clarified(
    scales: Iterable[ContranominalScale], cmap: ClarificationMap
) -> Iterator[ContranominalScale]:
    """Expand scales of the clarified context to the original one.

    Every object and attribute of a scale is substituted by each member of
    its duplicate class; the expansions of all scales are exactly the scales
    of the unclarified context.
    """
    obj_classes = cmap.object_classes
    att_classes = cmap.attribute_classes
    for scale in scales:
        options = []
        for g, m in scale.pairs:
            if g >= len(obj_classes) or m >= len(att_classes):
                raise ValueError("scale does not match the clarification map")
            options.append([(go, mo) for mo in att_classes[m] for go in obj_classes[g]])
        for combo in product(*options):
            yield ContranominalScale(tuple(sorted(combo, key=lambda p: p[1])))


def scales_from_reduced(
    scales: Iterable[ContranominalScale],
    trace: ReductionTrace,
    ctx_original: FormalContext,
) -> Iterator[ContranominalScale]:
    """Expand scales of the reduced context to the context it came from.

    A removed attribute x can stand in for a kept attribute n of a scale when
    n is among x's replacement witnesses and x is non-incident only where n
    is within the scale's object set; dually for removed objects.  Distinct
    substitution choices can collide, so results are de-duplicated.
    """
    kept_atts = trace.kept_attributes(ctx_original.n_attributes)
    kept_objs = trace.kept_objects(ctx_original.n_objects)
    removed_atts = trace.removed_attributes
    removed_objs = trace.removed_objects
    all_objs = ctx_original.all_objects_mask
    all_atts = ctx_original.all_attributes_mask
    cols = ctx_original.cols()
    rows = ctx_original.rows()
    seen: set[tuple[tuple[int, int], ...]] = set()

    for scale in scales:
        if any(g >= len(kept_objs) or m >= len(kept_atts) for g, m in scale.pairs):
            raise ValueError("scale does not match the reduction trace")
        base_pairs = [(kept_objs[g], kept_atts[m]) for g, m in scale.pairs]
        h_mask = 0
        for g, _ in base_pairs:
            h_mask |= 1 << g

        att_options = []
        for _, m in base_pairs:
            opts = [m]
            for x, witness in removed_atts:
                if m in witness and (h_mask & ~cols[x] & all_objs) & cols[m] == 0:
                    opts.append(x)
            att_options.append(opts)

        for att_choice in product(*att_options):
            if len(set(att_choice)) != len(att_choice):
                continue
            n_mask = 0
            for m in att_choice:
                n_mask |= 1 << m
            obj_options = []
            for g, _ in base_pairs:
                opts = [g]
                for y, witness in removed_objs:
                    if g in witness and (n_mask & ~rows[y] & all_atts) & rows[g] == 0:
                        opts.append(y)
                obj_options.append(opts)
            for obj_choice in product(*obj_options):
                if len(set(obj_choice)) != len(obj_choice):
                    continue
                pairs = tuple(
                    sorted(zip(obj_choice, att_choice), key=lambda p: p[1])
                )
                if pairs in seen:
                    continue
                seen.add(pairs)
                restored = ContranominalScale(pairs)
                assert restored.is_valid_in(ctx_original)
                yield restored


# -- bipartite graph adapter --------------------------------------------------


def to_bipartite(ctx: FormalContext) -> BipartiteGraph:
    """Associated bipartite graph of the complement context."""
    edges = [
        (g, m)
        for g in range(ctx.n_objects)
        for m in range(ctx.n_attributes)
        if not ctx.incident(g, m)
    ]
    return BipartiteGraph(ctx.objects, ctx.attributes, tuple(edges))


def induced_matchings(graph: BipartiteGraph) -> Iterator[tuple[tuple[int, int], ...]]:
    """All induced matchings of a bipartite graph, as sorted edge tuples.

    The edges of the graph are the non-incidences of a context on the same
    vertex sets; induced matchings of size k correspond exactly to scales of
    dimension k there.
    """
    edge_set = set(graph.edges)
    rows = []
    for i in range(len(graph.left)):
        mask = 0
        for j in range(len(graph.right)):
            if (i, j) not in edge_set:
                mask |= 1 << j
        rows.append(mask)
    ctx = FormalContext.from_masks(
        [f"L{i}" for i in range(len(graph.left))],
        [f"R{j}" for j in range(len(graph.right))],
        rows,
    )
    for scale in enumerate_scales(ctx):
        yield scale.pairs


# -- serialization -------------------------------------------------------------


def scale_to_line(scale: ContranominalScale, ctx: FormalContext) -> str:
    pairs = ",".join(
        f"({ctx.objects[g]},{ctx.attributes[m]})" for g, m in scale.pairs
    )
    return f"dim={scale.dimension}; pairs={pairs}"


def scale_to_json_obj(scale: ContranominalScale, ctx: FormalContext) -> dict:
    return {
        "dim": scale.dimension,
        "pairs": [[ctx.objects[g], ctx.attributes[m]] for g, m in scale.pairs],
    }


def count_report_json(count: ScaleCount) -> str:
    payload = {
        "total": count.total,
        "max_dimension": count.max_dimension,
        "histogram": {str(k): v for k, v in sorted(count.histogram.items())},
    }
    return json.dumps(payload, indent=2)

"""Isomorph-free exhaustive corpora: free trees and connected unicyclic
graphs up to a given order.

Trees are grown levelwise (every tree on n vertices is some tree on n-1
vertices plus a leaf) and deduplicated by canonical form; unicyclic graphs
are every tree plus one non-edge, deduplicated the same way. Streams emit
the canonically labeled representative of each class in sorted canonical
code order, so runs are byte-for-byte reproducible. Counts are externally
checkable against the published sequences for free trees and connected
unicyclic graphs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator

from .graph import (
    CapExceededError,
    Graph,
    canonical_graph,
    canonical_form,
    effective_cap,
    encode_graph6,
)

TREE_MAX_N = 14
UNICYCLIC_MAX_N = 12

_tree_cache: dict[int, tuple[Graph, ...]] = {}
_unicyclic_cache: dict[int, tuple[Graph, ...]] = {}


@dataclass(frozen=True)
class EnumerationStats:
    order: int
    graph_count: int
    elapsed_seconds: float


def _trees(n: int) -> tuple[Graph, ...]:
    if n in _tree_cache:
        return _tree_cache[n]
    if n == 1:
        result: tuple[Graph, ...] = (Graph(1),)
    else:
        reps: dict[str, Graph] = {}
        for parent in _trees(n - 1):
            for v in range(parent.n):
                child = parent.with_new_vertex([v])
                code = canonical_form(child)
                if code not in reps:
                    reps[code] = canonical_graph(child)
        result = tuple(reps[c] for c in sorted(reps))
    _tree_cache[n] = result
    return result


def enumerate_trees(n: int) -> Iterator[Graph]:
    """All free trees on n vertices, one canonical representative per class."""
    cap = effective_cap(TREE_MAX_N)
    if not 1 <= n <= cap:
        raise CapExceededError(f"tree enumeration supports 1 <= n <= {cap}, got {n}")
    yield from _trees(n)


def enumerate_unicyclic(n: int) -> Iterator[Graph]:
    """All connected unicyclic graphs on n vertices, one representative per
    class, built as tree plus one non-edge."""
    cap = effective_cap(UNICYCLIC_MAX_N)
    if not 3 <= n <= cap:
        raise CapExceededError(f"unicyclic enumeration supports 3 <= n <= {cap}, got {n}")
    if n in _unicyclic_cache:
        yield from _unicyclic_cache[n]
        return
    reps: dict[str, Graph] = {}
    for tree in _trees(n):
        adj = tree.adjacency
        for u in range(n):
            for v in range(u + 1, n):
                if adj[u] >> v & 1:
                    continue
                child = tree.with_edge(u, v)
                code = canonical_form(child)
                if code not in reps:
                    reps[code] = canonical_graph(child)
    result = tuple(reps[c] for c in sorted(reps))
    _unicyclic_cache[n] = result
    yield from result


def enumeration_stats(kind: str, n: int) -> tuple[list[str], EnumerationStats]:
    """Run one enumeration, returning graph6 lines plus timing stats."""
    start = time.perf_counter()
    if kind == "trees":
        lines = [encode_graph6(g) for g in enumerate_trees(n)]
    elif kind == "unicyclic":
        lines = [encode_graph6(g) for g in enumerate_unicyclic(n)]
    else:
        raise ValueError(f"unknown corpus kind {kind!r}")
    elapsed = time.perf_counter() - start
    return lines, EnumerationStats(order=n, graph_count=len(lines), elapsed_seconds=elapsed)

"""Immutable bitmask-backed simple graphs plus the structural vocabulary the
rest of the package builds on: leaves and support vertices, unique-cycle
detection, canonical labeling, and graph6 interchange.

Vertices are dense integers 0..n-1 and vertex sets are plain ints used as
bitmasks (bit v set <=> vertex v in the set). At the orders this package
targets (n <= 62 for graph6, n <= 16 for canonical forms) every set
operation is a couple of machine words.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator

GRAPH6_MAX_N = 62
CANONICAL_MAX_N = 16

_CAP_ENV = "ALLIANCE_LAB_MAX_N"
_G6_HEADER = ">>graph6<<"


class CapExceededError(ValueError):
    """Input exceeds the hard size cap of an operation."""


class Graph6ParseError(ValueError):
    """Malformed graph6 text; ``offset`` points at the offending byte."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def effective_cap(default: int) -> int:
    """Operation size cap; the ALLIANCE_LAB_MAX_N env var overrides it."""
    raw = os.environ.get(_CAP_ENV)
    return default if raw is None else int(raw)


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Vertices of a bitmask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def format_mask(mask: int) -> str:
    return "{" + ",".join(str(v) for v in bits(mask)) + "}"


@dataclass(frozen=True)
class CycleStats:
    """The unique cycle of a unicyclic graph and its leaf/support census.

    ``leaf_count`` counts leaves attached at cycle vertices, ``support_count``
    counts cycle vertices that are supports.
    """

    cycle_vertices: int
    cycle_length: int
    leaf_count: int
    support_count: int


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    Construction validates the simple-graph invariants (no self-loops, no
    duplicate edges, endpoints in range). All derived views are pure
    functions of the stored adjacency masks, so instances are safe to share
    across workers.
    """

    __slots__ = ("n", "_adj", "_edges", "_canon")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 1:
            raise ValueError("graph order must be at least 1")
        adj = [0] * n
        normalized = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for order {n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if adj[u] >> v & 1:
                raise ValueError(f"duplicate edge ({u},{v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            normalized.append((u, v))
        self.n = n
        self._adj = tuple(adj)
        self._edges = tuple(sorted(normalized))
        self._canon = None

    # -- basic views ---------------------------------------------------

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def adjacency(self) -> tuple[int, ...]:
        """Neighbor bitmask per vertex."""
        return self._adj

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range for order {self.n}")

    def neighbors(self, v: int) -> int:
        self._check_vertex(v)
        return self._adj[v]

    def closed_neighborhood(self, v: int) -> int:
        self._check_vertex(v)
        return self._adj[v] | (1 << v)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self._adj[v].bit_count()

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(m.bit_count() for m in self._adj)

    # -- leaves and supports -------------------------------------------

    def leaves(self) -> int:
        return mask_of(v for v in range(self.n) if self._adj[v].bit_count() == 1)

    def supports(self) -> int:
        lv = self.leaves()
        return mask_of(v for v in range(self.n) if self._adj[v] & lv)

    def leaves_at(self, v: int) -> int:
        self._check_vertex(v)
        return self.leaves() & self._adj[v]

    # -- global structure ----------------------------------------------

    def is_connected(self) -> bool:
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= self._adj[v]
            frontier = nxt & ~seen
            seen |= frontier
        return seen == self.full_mask

    def is_tree(self) -> bool:
        return self.edge_count == self.n - 1 and self.is_connected()

    def is_unicyclic(self) -> bool:
        return self.edge_count == self.n and self.is_connected()

    def is_bipartite(self) -> bool:
        color = [-1] * self.n
        for start in range(self.n):
            if color[start] != -1:
                continue
            color[start] = 0
            stack = [start]
            while stack:
                u = stack.pop()
                for w in bits(self._adj[u]):
                    if color[w] == -1:
                        color[w] = color[u] ^ 1
                        stack.append(w)
                    elif color[w] == color[u]:
                        return False
        return True

    def two_core(self) -> int:
        """Bitmask left after iteratively stripping degree-1 vertices."""
        alive = self.full_mask
        changed = True
        while changed:
            changed = False
            for v in bits(alive):
                if (self._adj[v] & alive).bit_count() <= 1:
                    alive &= ~(1 << v)
                    changed = True
        return alive

    def cycle_stats(self) -> CycleStats:
        if not self.is_unicyclic():
            raise ValueError("cycle_stats requires a connected unicyclic graph")
        cyc = self.two_core()
        length = cyc.bit_count()
        lv = self.leaves()
        cycle_nbrs = 0
        for v in bits(cyc):
            cycle_nbrs |= self._adj[v]
        return CycleStats(
            cycle_vertices=cyc,
            cycle_length=length,
            leaf_count=(lv & cycle_nbrs).bit_count(),
            support_count=(cyc & self.supports()).bit_count(),
        )

    def cycle_order(self) -> tuple[int, ...]:
        """The unique cycle as a vertex sequence, lowest vertex first."""
        cyc = self.cycle_stats().cycle_vertices
        start = next(bits(cyc))
        walk = [start]
        prev = -1
        cur = start
        while True:
            nxt = next(w for w in bits(self._adj[cur] & cyc) if w != prev)
            if nxt == start:
                return tuple(walk)
            walk.append(nxt)
            prev, cur = cur, nxt

    # -- builders (graphs are immutable; these return new graphs) -------

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, list(self._edges) + [(u, v)])

    def with_new_vertex(self, neighbors: Iterable[int]) -> "Graph":
        """New graph with vertex ``n`` attached to ``neighbors``."""
        extra = [(w, self.n) for w in neighbors]
        return Graph(self.n + 1, list(self._edges) + extra)

    def without_vertices(self, mask: int) -> tuple["Graph", tuple[int, ...]]:
        """Delete the masked vertices, compacting labels.

        Returns the new graph and the old->new label map (-1 for deleted).
        """
        old_to_new = []
        nxt = 0
        for v in range(self.n):
            if mask >> v & 1:
                old_to_new.append(-1)
            else:
                old_to_new.append(nxt)
                nxt += 1
        if nxt == 0:
            raise ValueError("cannot delete every vertex")
        edges = [
            (old_to_new[u], old_to_new[v])
            for u, v in self._edges
            if old_to_new[u] >= 0 and old_to_new[v] >= 0
        ]
        return Graph(nxt, edges), tuple(old_to_new)

    def relabeled(self, perm: tuple[int, ...]) -> "Graph":
        """Apply a permutation (perm[old] = new)."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self._edges])

    # -- value semantics -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self._edges)})"


# -- convenience constructors ------------------------------------------


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the center labeled 0."""
    if leaves < 1:
        raise ValueError("a star needs at least one leaf")
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# -- canonical labeling ------------------------------------------------
#
# Individualization-refinement: refine an ordered partition to equitability,
# then branch on the first non-singleton cell, skipping vertices that are
# twins of an already-branched cell mate (swapping twins is an automorphism,
# so their subtrees produce identical codes). The canonical code is the
# minimum upper-triangle bitstring over all discrete leaves, rendered as the
# graph6 string of the relabeled graph.


def _refine(adj: tuple[int, ...], cells: list[list[int]]) -> list[list[int]]:
    while True:
        changed = False
        for splitter in cells:
            smask = mask_of(splitter)
            new_cells: list[list[int]] = []
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups: dict[int, list[int]] = {}
                for v in cell:
                    groups.setdefault((adj[v] & smask).bit_count(), []).append(v)
                if len(groups) == 1:
                    new_cells.append(cell)
                else:
                    changed = True
                    for key in sorted(groups):
                        new_cells.append(groups[key])
            if changed:
                cells = new_cells
                break
        if not changed:
            return cells


def _leaf_code(adj: tuple[int, ...], n: int, cells: list[list[int]]) -> tuple[int, tuple[int, ...]]:
    perm = [0] * n
    for pos, cell in enumerate(cells):
        perm[cell[0]] = pos
    nadj = [0] * n
    for u in range(n):
        pu = perm[u]
        m = adj[u]
        while m:
            low = m & -m
            nadj[pu] |= 1 << perm[low.bit_length() - 1]
            m ^= low
    code = 0
    for j in range(1, n):
        col = nadj[j]
        for i in range(j):
            code = (code << 1) | (col >> i & 1)
    return code, tuple(perm)


def _search(adj: tuple[int, ...], n: int, cells: list[list[int]], best: list) -> None:
    cells = _refine(adj, cells)
    target = -1
    for i, cell in enumerate(cells):
        if len(cell) > 1:
            target = i
            break
    if target < 0:
        code, perm = _leaf_code(adj, n, cells)
        if best[0] is None or code < best[0]:
            best[0] = code
            best[1] = perm
        return
    cell = cells[target]
    rep_keys: list[tuple[int, int]] = []
    for v in cell:
        open_key = adj[v]
        closed_key = adj[v] | (1 << v)
        if any(open_key == ko or closed_key == kc for ko, kc in rep_keys):
            continue  # twin of an earlier cell mate: same subtree code
        rep_keys.append((open_key, closed_key))
        rest = [u for u in cell if u != v]
        child = cells[:target] + [[v], rest] + cells[target + 1 :]
        _search(adj, n, child, best)


def canonical_labeling(g: Graph) -> tuple[str, tuple[int, ...]]:
    """Canonical graph6 code of ``g`` plus a relabeling achieving it.

    The code is identical for isomorphic graphs and distinct otherwise.
    Limited to n <= 16 (one of the usual capability caps).
    """
    if g._canon is None:
        cap = effective_cap(CANONICAL_MAX_N)
        if g.n > cap:
            raise CapExceededError(f"canonical labeling capped at n <= {cap}, got {g.n}")
        by_degree: dict[int, list[int]] = {}
        for v in range(g.n):
            by_degree.setdefault(g._adj[v].bit_count(), []).append(v)
        cells = [by_degree[d] for d in sorted(by_degree)]
        best: list = [None, None]
        _search(g._adj, g.n, cells, best)
        perm = best[1]
        g._canon = (encode_graph6(g.relabeled(perm)), perm)
    return g._canon


def canonical_form(g: Graph) -> str:
    return canonical_labeling(g)[0]


def canonical_graph(g: Graph) -> Graph:
    """The canonically labeled representative of ``g``'s isomorphism class."""
    return g.relabeled(canonical_labeling(g)[1])


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return False
    if sorted(g1.degrees) != sorted(g2.degrees):
        return False
    return canonical_form(g1) == canonical_form(g2)


# -- graph6 interchange ------------------------------------------------


def encode_graph6(g: Graph) -> str:
    """Standard short-form graph6: chr(n+63) then the upper triangle in
    column-major order packed into 6-bit groups, each offset by 63."""
    if g.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 short form is limited to n <= {GRAPH6_MAX_N}")
    out = [chr(g.n + 63)]
    acc = 0
    nbits = 0
    for j in range(1, g.n):
        col = g._adj[j]
        for i in range(j):
            acc = (acc << 1) | (col >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = 0
                nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def decode_graph6(text: str) -> Graph:
    """Parse one short-form graph6 string (optional '>>graph6<<' header).

    Raises Graph6ParseError with the byte offset of the defect for anything
    malformed, including nonzero padding bits, so encode(decode(s)) == s on
    every accepted string.
    """
    s = text.strip()
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER) :]
    if not s:
        raise Graph6ParseError("empty graph6 string", 0)
    first = ord(s[0])
    if first == 126:
        raise Graph6ParseError("multi-byte order (n > 62) not supported", 0)
    if not 63 <= first <= 125:
        raise Graph6ParseError(f"invalid order byte {s[0]!r}", 0)
    n = first - 63
    if n == 0:
        raise Graph6ParseError("order-0 graph not supported", 0)
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    data = s[1:]
    if len(data) != nchars:
        where = min(len(s), 1 + nchars)
        raise Graph6ParseError(
            f"expected {nchars} data bytes for order {n}, found {len(data)}", where
        )
    edges = []
    bit_index = 0
    for idx, ch in enumerate(data):
        val = ord(ch) - 63
        if not 0 <= val <= 63:
            raise Graph6ParseError(f"invalid data byte {ch!r}", 1 + idx)
        for k in range(5, -1, -1):
            bit = val >> k & 1
            if bit_index >= nbits:
                if bit:
                    raise Graph6ParseError("nonzero padding bits", 1 + idx)
                continue
            if bit:
                # column-major upper triangle: recover (i, j) from position
                edges.append(_triangle_position(bit_index))
            bit_index += 1
    return Graph(n, edges)


def _triangle_position(index: int) -> tuple[int, int]:
    # bit positions run x(0,1), x(0,2), x(1,2), x(0,3), ... column j holds j bits
    j = 1
    while index >= j:
        index -= j
        j += 1
    return index, j


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    """Decode one graph per non-empty line."""
    for line in lines:
        line = line.strip()
        if line:
            yield decode_graph6(line)

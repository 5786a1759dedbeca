"""Constructive generators, build traces, and recognizers for the extremal
families: subdivided star-forest trees, the pendant-decorated even cycles,
their bridged combinations, and everything reachable from a decorated even
cycle by the two support-preserving attachment operations.

Generated graphs use a fixed deterministic labeling, so a trace replays to
one specific labeled graph; recognizers return traces whose replay is
isomorphic to the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .graph import (
    CapExceededError,
    Graph,
    bits,
    canonical_form,
    effective_cap,
)

ENUMERATE_G_MAX_ORDER = 14

O1 = "O1"
O2 = "O2"


@dataclass(frozen=True)
class StarForestSpec:
    """r disjoint stars whose centers are joined by r-1 once-subdivided edges.

    ``star_sizes[i]`` is the leaf count of star i; ``center_edges`` is a tree
    on the center indices 0..r-1 (empty when r == 1, which then needs at
    least two leaves so the result has order >= 3).
    """

    star_sizes: tuple[int, ...]
    center_edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        r = len(self.star_sizes)
        if r < 1:
            raise ValueError("at least one star required")
        if any(t < 1 for t in self.star_sizes):
            raise ValueError("every star needs at least one leaf")
        if r == 1:
            if self.star_sizes[0] < 2:
                raise ValueError("a single star needs at least two leaves")
            if self.center_edges:
                raise ValueError("center edges need at least two stars")
            return
        center_tree = Graph(r, self.center_edges)  # validates range/duplicates
        if not center_tree.is_tree():
            raise ValueError("center edges must form a tree on the star centers")

    @property
    def r(self) -> int:
        return len(self.star_sizes)


@dataclass(frozen=True)
class G1Spec:
    """Even cycle of length k with one pendant at every second cycle vertex."""

    cycle_length: int

    def __post_init__(self) -> None:
        k = self.cycle_length
        if k < 4 or k % 2:
            raise ValueError("cycle length must be an even number >= 4")


@dataclass(frozen=True)
class G0Spec:
    """Decorated even cycle bridged to a star forest.

    The bridge runs from cycle support ``attach_support`` through one
    subdivision vertex to center 0 of ``forest``; the forest's center edges
    are subdivided once as in the tree family.
    """

    base: G1Spec
    attach_support: int
    forest: StarForestSpec

    def __post_init__(self) -> None:
        k = self.base.cycle_length
        if not (0 <= self.attach_support < k and self.attach_support % 2 == 0):
            raise ValueError(
                f"attach_support must be a pendant-bearing cycle vertex (even index < {k})"
            )


@dataclass(frozen=True)
class GBuildTrace:
    """Replayable provenance: a decorated-cycle base plus ordered O1/O2 steps.

    Step targets are vertex labels in the replayed graph at the time the step
    applies; replaying is deterministic because new vertices always take the
    next free labels.
    """

    base: G1Spec
    steps: tuple[tuple[str, int], ...] = field(default_factory=tuple)


# -- generators ----------------------------------------------------------


def generate_f(spec: StarForestSpec) -> Graph:
    """Build the tree for a star-forest spec.

    Labels: centers 0..r-1, then the leaves star by star, then one
    subdivision vertex per center edge in sorted edge order.
    """
    r = spec.r
    edges = []
    nxt = r
    for i, t in enumerate(spec.star_sizes):
        for _ in range(t):
            edges.append((i, nxt))
            nxt += 1
    for a, b in sorted(tuple(sorted(e)) for e in spec.center_edges):
        edges.append((a, nxt))
        edges.append((nxt, b))
        nxt += 1
    return Graph(nxt, edges)


def generate_g1(spec: G1Spec) -> Graph:
    """Cycle 0..k-1 in order, pendant j = k+j attached at cycle vertex 2j."""
    k = spec.cycle_length
    edges = [(i, (i + 1) % k) for i in range(k)]
    for j in range(k // 2):
        edges.append((2 * j, k + j))
    return Graph(k + k // 2, edges)


def generate_g0(spec: G0Spec) -> Graph:
    """Bridge a star forest onto a decorated even cycle, subdividing the
    bridge and the center edges once."""
    g1 = generate_g1(spec.base)
    base_n = g1.n
    edges = list(g1.edges)
    bridge = base_n
    center = [base_n + 1 + i for i in range(spec.forest.r)]
    edges.append((spec.attach_support, bridge))
    edges.append((bridge, center[0]))
    nxt = base_n + 1 + spec.forest.r
    for i, t in enumerate(spec.forest.star_sizes):
        for _ in range(t):
            edges.append((center[i], nxt))
            nxt += 1
    for a, b in sorted(tuple(sorted(e)) for e in spec.forest.center_edges):
        edges.append((center[a], nxt))
        edges.append((nxt, center[b]))
        nxt += 1
    return Graph(nxt, edges)


# -- the two attachment operations ---------------------------------------


def _require_support(g: Graph, v: int) -> None:
    if not g.supports() >> v & 1:
        raise ValueError(f"vertex {v} is not a support vertex")


def attach_leaf(g: Graph, support: int) -> tuple[Graph, int]:
    """O1: join a new vertex to a support vertex. Returns the new label."""
    _require_support(g, support)
    return g.with_new_vertex([support]), g.n


def attach_path(g: Graph, support: int) -> tuple[Graph, tuple[int, int, int]]:
    """O2: attach a path a-b-c, joining a to a support vertex."""
    _require_support(g, support)
    a, b, c = g.n, g.n + 1, g.n + 2
    out = Graph(g.n + 3, list(g.edges) + [(support, a), (a, b), (b, c)])
    return out, (a, b, c)


def apply_o1(g: Graph, trace: GBuildTrace, support: int) -> tuple[Graph, GBuildTrace]:
    out, _ = attach_leaf(g, support)
    return out, GBuildTrace(trace.base, trace.steps + ((O1, support),))


def apply_o2(g: Graph, trace: GBuildTrace, support: int) -> tuple[Graph, GBuildTrace]:
    out, _ = attach_path(g, support)
    return out, GBuildTrace(trace.base, trace.steps + ((O2, support),))


def replay_trace(trace: GBuildTrace) -> Graph:
    g = generate_g1(trace.base)
    for op, support in trace.steps:
        if op == O1:
            g, _ = attach_leaf(g, support)
        elif op == O2:
            g, _ = attach_path(g, support)
        else:
            raise ValueError(f"unknown operation {op!r}")
    return g


def format_trace(trace: GBuildTrace) -> str:
    parts = [f"G1 k={trace.base.cycle_length}"]
    parts.extend(f"{op} @v{v}" for op, v in trace.steps)
    return "; ".join(parts)


def parse_trace(text: str) -> GBuildTrace:
    parts = [p.strip() for p in text.split(";")]
    head = parts[0].split()
    if len(head) != 2 or head[0] != "G1" or not head[1].startswith("k="):
        raise ValueError(f"bad trace header {parts[0]!r}")
    base = G1Spec(int(head[1][2:]))
    steps = []
    for part in parts[1:]:
        if not part:
            continue
        fields = part.split()
        if len(fields) != 2 or fields[0] not in (O1, O2) or not fields[1].startswith("@v"):
            raise ValueError(f"bad trace step {part!r}")
        steps.append((fields[0], int(fields[1][2:])))
    return GBuildTrace(base, tuple(steps))


def format_star_forest(spec: StarForestSpec) -> str:
    sizes = ",".join(str(t) for t in spec.star_sizes)
    if not spec.center_edges:
        return f"F stars={sizes}"
    edges = ",".join(f"{a}-{b}" for a, b in spec.center_edges)
    return f"F stars={sizes} centers={edges}"


# -- exhaustive family generation -----------------------------------------


def enumerate_g(max_order: int) -> Iterator[tuple[Graph, GBuildTrace]]:
    """Every family member up to ``max_order``, one per isomorphism class,
    each with a replayable trace; emitted sorted by (order, canonical code)."""
    cap = effective_cap(ENUMERATE_G_MAX_ORDER)
    if max_order > cap:
        raise CapExceededError(f"family enumeration capped at order {cap}, got {max_order}")
    found: dict[str, tuple[Graph, GBuildTrace]] = {}
    queue: list[tuple[Graph, GBuildTrace]] = []
    k = 4
    while k + k // 2 <= max_order:
        g = generate_g1(G1Spec(k))
        code = canonical_form(g)
        if code not in found:
            found[code] = (g, GBuildTrace(G1Spec(k)))
            queue.append(found[code])
        k += 2
    head = 0
    while head < len(queue):
        g, trace = queue[head]
        head += 1
        for support in bits(g.supports()):
            if g.n + 1 <= max_order:
                child, child_trace = apply_o1(g, trace, support)
                code = canonical_form(child)
                if code not in found:
                    found[code] = (child, child_trace)
                    queue.append(found[code])
            if g.n + 3 <= max_order:
                child, child_trace = apply_o2(g, trace, support)
                code = canonical_form(child)
                if code not in found:
                    found[code] = (child, child_trace)
                    queue.append(found[code])
    order = sorted(found, key=lambda c: (found[c][0].n, c))
    for code in order:
        yield found[code]


def random_g_trace(rng, max_steps: int = 5, max_order: int = 16) -> GBuildTrace:
    """Random family member: random even-cycle base, then random O1/O2 steps
    at random supports while the order budget allows."""
    cycle_choices = [k for k in range(4, max_order + 1, 2) if k + k // 2 <= max_order]
    base = G1Spec(rng.choice(cycle_choices))
    g = generate_g1(base)
    trace = GBuildTrace(base)
    for _ in range(rng.randint(0, max_steps)):
        ops = []
        if g.n + 1 <= max_order:
            ops.append(O1)
        if g.n + 3 <= max_order:
            ops.append(O2)
        if not ops:
            break
        op = rng.choice(ops)
        support = rng.choice(sorted(bits(g.supports())))
        if op == O1:
            g, trace = apply_o1(g, trace, support)
        else:
            g, trace = apply_o2(g, trace, support)
    return trace


# -- recognizers -----------------------------------------------------------


def is_in_f(t: Graph) -> tuple[bool, StarForestSpec | None]:
    """Structural membership test for the subdivided-star-forest trees.

    Membership holds iff no two supports are adjacent and every vertex is a
    leaf, a support, or a degree-2 vertex whose two neighbors are both
    supports. On success the reconstructed spec replays to an isomorph.
    """
    if not t.is_tree():
        raise ValueError("tree-family recognition requires a tree")
    if t.n < 3:
        return False, None
    leaves = t.leaves()
    supports = t.supports()
    middles = []
    for v in range(t.n):
        if leaves >> v & 1 or supports >> v & 1:
            continue
        if t.degree(v) != 2 or t.adjacency[v] & ~supports:
            return False, None
        middles.append(v)
    for v in bits(supports):
        if t.adjacency[v] & supports:
            return False, None
    centers = sorted(bits(supports))
    index = {c: i for i, c in enumerate(centers)}
    star_sizes = tuple(t.leaves_at(c).bit_count() for c in centers)
    center_edges = []
    for m in middles:
        a, b = sorted(index[w] for w in bits(t.adjacency[m]))
        center_edges.append((a, b))
    return True, StarForestSpec(star_sizes, tuple(sorted(center_edges)))


def _is_g1_instance(g: Graph, k: int) -> bool:
    if g.n != k + k // 2:
        return False
    cyc_order = g.cycle_order()
    if len(cyc_order) != k:
        return False
    pattern = []
    for v in cyc_order:
        d = g.degree(v)
        if d == 2:
            pattern.append(False)
        elif d == 3 and g.leaves_at(v).bit_count() == 1:
            pattern.append(True)
        else:
            return False
    if sum(pattern) != k // 2:
        return False
    return all(pattern[i] != pattern[(i + 1) % k] for i in range(k))


def _g1_isomorphism(g: Graph, k: int) -> dict[int, int]:
    """Map a recognized decorated-cycle instance onto the generated labeling."""
    cyc_order = list(g.cycle_order())
    supports = g.supports()
    if not supports >> cyc_order[0] & 1:
        cyc_order = cyc_order[1:] + cyc_order[:1]
    phi = {}
    for pos, v in enumerate(cyc_order):
        phi[v] = pos
        if pos % 2 == 0:
            leaf = next(bits(g.leaves_at(v)))
            phi[leaf] = k + pos // 2
    return phi


@dataclass(frozen=True)
class _Undo:
    op: str
    support_in_child: int
    added_parent: tuple[int, ...]
    child_to_parent: tuple[int, ...]


def _undo_candidates(g: Graph) -> Iterator[tuple[int, tuple[int, ...], int]]:
    """(removal mask, added labels, support label) for every reversible step.

    Undoing O1 removes one leaf from a support that keeps another leaf;
    removing any of its leaves gives the same child up to isomorphism, so
    only the lowest is tried. Undoing O2 removes a pendant path c-b-a whose
    anchor neighbor stays a support.
    """
    leaves = g.leaves()
    for v in bits(g.supports()):
        lv = g.leaves_at(v)
        if lv.bit_count() >= 2:
            leaf = next(bits(lv))
            yield (1 << leaf, (leaf,), v)
    for c in bits(leaves):
        b = next(bits(g.adjacency[c]))
        if g.degree(b) != 2:
            continue
        a = next(bits(g.adjacency[b] & ~(1 << c)))
        if g.degree(a) != 2:
            continue
        s = next(bits(g.adjacency[a] & ~(1 << b)))
        if g.leaves_at(s):  # s keeps a leaf, so it stays a support
            yield ((1 << a) | (1 << b) | (1 << c), (a, b, c), s)


def _peel(g: Graph, base_n: int, k: int, dead: set[str]) -> tuple[Graph, list[_Undo]] | None:
    if g.n == base_n:
        return (g, []) if _is_g1_instance(g, k) else None
    if g.n < base_n:
        return None
    code = canonical_form(g)
    if code in dead:
        return None
    for removal, added, support in _undo_candidates(g):
        child, old_to_new = g.without_vertices(removal)
        result = _peel(child, base_n, k, dead)
        if result is not None:
            base, undos = result
            parent_of = [0] * child.n
            for old, new in enumerate(old_to_new):
                if new >= 0:
                    parent_of[new] = old
            op = O1 if len(added) == 1 else O2
            undos.append(_Undo(op, old_to_new[support], added, tuple(parent_of)))
            return base, undos
    dead.add(code)
    return None


def is_in_g(g: Graph) -> tuple[bool, GBuildTrace | None]:
    """Backtracking reverse-peel recognizer for the unicyclic family.

    Peels O1/O2 attachments until a decorated even cycle remains, memoizing
    failed canonical forms per call, then lifts the successful chain into a
    replayable trace (replay is isomorphic to the input).
    """
    if not g.is_unicyclic():
        raise ValueError("family recognition requires a connected unicyclic graph")
    k = g.cycle_stats().cycle_length
    if k % 2:
        return False, None
    base_n = k + k // 2
    result = _peel(g, base_n, k, set())
    if result is None:
        return False, None
    base_instance, undos = result
    spec = G1Spec(k)
    phi = _g1_isomorphism(base_instance, k)
    replay = generate_g1(spec)
    steps = []
    for undo in undos:
        target = phi[undo.support_in_child]
        if undo.op == O1:
            replay, new_label = attach_leaf(replay, target)
            new_labels: tuple[int, ...] = (new_label,)
        else:
            replay, new_labels = attach_path(replay, target)
        steps.append((undo.op, target))
        lifted = {}
        for child_label, parent_label in enumerate(undo.child_to_parent):
            lifted[parent_label] = phi[child_label]
        for parent_label, new_label in zip(undo.added_parent, new_labels):
            lifted[parent_label] = new_label
        phi = lifted
    return True, GBuildTrace(spec, tuple(steps))

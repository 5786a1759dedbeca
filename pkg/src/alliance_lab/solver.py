"""Global offensive alliance predicates, bound formulas, and exact solvers.

A set S is a global offensive alliance (GOA) when it dominates the graph and
every vertex v outside S sees at least as many closed-neighborhood members
inside S as outside, i.e. |N[v] cap S| >= |N[v] - S|. For v outside S this is
the integer test 2*|N(v) cap S| >= deg(v) + 1, which already forces a
neighbor in S, so the majority test alone decides membership.

Two independent routes compute gamma_o: an exhaustive subset scan (the
oracle) and a branch-and-bound solver; both return the same value and the
same minimal witness under the (popcount, bitmask-value) scan order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .graph import CapExceededError, Graph, bits, effective_cap

ORACLE_MAX_N = 20
SOLVER_MAX_N = 32


@dataclass(frozen=True)
class SolveResult:
    """Exact gamma_o plus the minimal witness; all minimum GOAs on request."""

    value: int
    witness: int
    all_minimum_sets: tuple[int, ...] | None = None


@dataclass(frozen=True)
class BoundReport:
    """The three closed-form bounds from the same (n, l, s) triple.

    Kept as exact rationals so equality against gamma_o is exact. Each flag
    records whether the graph is in the class the bound applies to.
    """

    tree_lower: Fraction
    unicyclic_lower: Fraction
    bipartite_upper: Fraction
    tree_applicable: bool
    unicyclic_applicable: bool
    bipartite_applicable: bool


def is_dominating(g: Graph, s: int) -> bool:
    """True iff every vertex outside ``s`` has a neighbor in ``s``."""
    _check_mask(g, s)
    for v in range(g.n):
        if s >> v & 1:
            continue
        if not g.adjacency[v] & s:
            return False
    return True


def is_global_offensive_alliance(g: Graph, s: int) -> bool:
    _check_mask(g, s)
    adj = g.adjacency
    for v in range(g.n):
        if s >> v & 1:
            continue
        if 2 * (adj[v] & s).bit_count() < adj[v].bit_count() + 1:
            return False
    return True


def _check_mask(g: Graph, s: int) -> None:
    if s < 0 or s & ~g.full_mask:
        raise ValueError("vertex set out of range for this graph")


def _require_connected(g: Graph) -> None:
    if not g.is_connected():
        raise ValueError("solver requires a connected graph")


def _masks_of_size(n: int, k: int) -> Iterator[int]:
    """All k-subsets of 0..n-1 as bitmasks in increasing numeric order."""
    if k == 0:
        yield 0
        return
    if k > n:
        return
    mask = (1 << k) - 1
    limit = 1 << n
    while mask < limit:
        yield mask
        low = mask & -mask
        ripple = mask + low
        mask = (((ripple ^ mask) >> 2) // low) | ripple


def _is_goa_masks(adj: tuple[int, ...], n: int, s: int) -> bool:
    for v in range(n):
        if s >> v & 1:
            continue
        av = adj[v]
        if 2 * (av & s).bit_count() < av.bit_count() + 1:
            return False
    return True


def _goa_sets_of_size(g: Graph, k: int) -> tuple[int, ...]:
    adj = g.adjacency
    return tuple(s for s in _masks_of_size(g.n, k) if _is_goa_masks(adj, g.n, s))


def gamma_o_brute_force(g: Graph, all_minimum_sets: bool = False) -> SolveResult:
    """Exhaustive oracle: scan subsets by size then bitmask value.

    The witness is the first GOA found, i.e. the numerically smallest
    minimum-size bitmask.
    """
    _require_connected(g)
    cap = effective_cap(ORACLE_MAX_N)
    if g.n > cap:
        raise CapExceededError(f"brute-force solver capped at n <= {cap}, got {g.n}")
    adj = g.adjacency
    for k in range(g.n + 1):
        for s in _masks_of_size(g.n, k):
            if _is_goa_masks(adj, g.n, s):
                sets = _goa_sets_of_size(g, k) if all_minimum_sets else None
                return SolveResult(value=k, witness=s, all_minimum_sets=sets)
    raise AssertionError("the full vertex set is always a GOA")


def gamma(g: Graph) -> int:
    """Exact domination number by the same subset scan."""
    _require_connected(g)
    cap = effective_cap(ORACLE_MAX_N)
    if g.n > cap:
        raise CapExceededError(f"domination solver capped at n <= {cap}, got {g.n}")
    for k in range(g.n + 1):
        for s in _masks_of_size(g.n, k):
            if is_dominating(g, s):
                return k
    raise AssertionError("the full vertex set is always dominating")


def bounds(g: Graph) -> BoundReport:
    """Lower/upper bound report from the (n, l, s) triple."""
    if g.n < 3:
        raise ValueError("bounds require order >= 3")
    _require_connected(g)
    n = g.n
    l = g.leaves().bit_count()
    s = g.supports().bit_count()
    return BoundReport(
        tree_lower=Fraction(n - l + s + 1, 3),
        unicyclic_lower=Fraction(n - l + s, 3),
        bipartite_upper=Fraction(n - l + s, 2),
        tree_applicable=g.is_tree(),
        unicyclic_applicable=g.is_unicyclic(),
        bipartite_applicable=g.is_bipartite(),
    )


def _greedy_goa(n: int, adj: tuple[int, ...]) -> int:
    """Greedy upper bound: repeatedly add the vertex fixing the most violated
    constraints, ties broken by lowest index."""
    deg_plus = [adj[v].bit_count() + 1 for v in range(n)]

    def violated(s: int) -> list[int]:
        return [
            v
            for v in range(n)
            if not s >> v & 1 and 2 * (adj[v] & s).bit_count() < deg_plus[v]
        ]

    s = 0
    bad = violated(s)
    while bad:
        best_u = -1
        best_fixed = -1
        for u in range(n):
            if s >> u & 1:
                continue
            s2 = s | (1 << u)
            fixed = 0
            for v in bad:
                if v == u or 2 * (adj[v] & s2).bit_count() >= deg_plus[v]:
                    fixed += 1
            if fixed > best_fixed:
                best_fixed = fixed
                best_u = u
        s |= 1 << best_u
        bad = violated(s)
    return s


def _global_floor(g: Graph) -> int:
    """Valid lower bound on gamma_o for the whole graph."""
    n = g.n
    max_deg = max(g.degrees)
    floor = max(1, math.ceil(Fraction(n, max_deg + 1)))
    if n >= 3:
        rep = bounds(g)
        if rep.tree_applicable:
            floor = max(floor, math.ceil(rep.tree_lower))
        if rep.unicyclic_applicable:
            floor = max(floor, math.ceil(rep.unicyclic_lower))
    return floor


def gamma_o(g: Graph, all_minimum_sets: bool = False) -> SolveResult:
    """Branch-and-bound exact solver.

    Branches on the lowest-index undecided vertex whose majority constraint
    is still unmet, prunes with max(global class bound, partial-assignment
    bound), and seeds the incumbent with a greedy pass. Ties at the incumbent
    size are explored so the returned witness is the numerically smallest
    minimum bitmask, matching the brute-force oracle.
    """
    _require_connected(g)
    cap = effective_cap(SOLVER_MAX_N)
    if g.n > cap:
        raise CapExceededError(f"branch-and-bound solver capped at n <= {cap}, got {g.n}")

    n = g.n
    adj = g.adjacency
    full = g.full_mask
    deg_plus = [adj[v].bit_count() + 1 for v in range(n)]
    # an outside vertex v needs ceil((deg(v)+1)/2) neighbors inside
    need = [(d + 1) // 2 for d in deg_plus]

    incumbent = _greedy_goa(n, adj)
    best = [incumbent.bit_count(), incumbent]
    floor = _global_floor(g)

    def dfs(in_mask: int, out_mask: int) -> None:
        und = full & ~in_mask & ~out_mask
        in_size = in_mask.bit_count()

        extra = 0  # disjoint-neighborhood sum of outstanding needs
        used = 0
        branch_fallback = -1
        for v in bits(out_mask):
            av = adj[v]
            rem = need[v] - (av & in_mask).bit_count()
            if rem <= 0:
                continue
            free = av & und
            if free.bit_count() < rem:
                return  # v can never be satisfied
            if branch_fallback < 0:
                branch_fallback = (free & -free).bit_length() - 1
            if not free & used:
                extra += rem
                used |= free

        branch_v = -1
        for v in bits(und):
            if 2 * (adj[v] & in_mask).bit_count() < deg_plus[v]:
                branch_v = v
                break

        if branch_v < 0 and branch_fallback < 0:
            # every undecided vertex is satisfied if left outside and every
            # decided-out constraint is met: in_mask itself is a GOA
            if in_size < best[0] or (in_size == best[0] and in_mask < best[1]):
                best[0] = in_size
                best[1] = in_mask
            return

        lower = max(floor, in_size + max(extra, 1 if branch_v >= 0 else 0))
        if lower > best[0]:
            return

        v = branch_v if branch_v >= 0 else branch_fallback
        bit = 1 << v
        dfs(in_mask | bit, out_mask)
        dfs(in_mask, out_mask | bit)

    dfs(0, 0)

    sets: tuple[int, ...] | None = None
    if all_minimum_sets:
        scan_cap = effective_cap(ORACLE_MAX_N)
        if n > scan_cap:
            raise CapExceededError(
                f"all-minimum-set enumeration capped at n <= {scan_cap}, got {n}"
            )
        sets = _goa_sets_of_size(g, best[0])
    return SolveResult(value=best[0], witness=best[1], all_minimum_sets=sets)


def exists_min_goa_containing_supports(g: Graph) -> tuple[bool, int | None]:
    """Search all minimum GOAs for one containing every support vertex."""
    if g.n < 3:
        raise ValueError("requires order >= 3")
    result = gamma_o_brute_force(g, all_minimum_sets=True)
    supports = g.supports()
    assert result.all_minimum_sets is not None
    for s in result.all_minimum_sets:
        if s & supports == supports:
            return True, s
    return False, None

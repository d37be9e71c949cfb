"""Exact tight-Hamiltonian-cycle counting, permanents, and counting bounds.

The exact counter anchors cycles at vertex 0 to kill rotations and divides by
two for reversal, so all 2n symmetric traversals of one cycle collapse to a
single count. Counts are exact integers throughout; the vectorized backend
only operates in ranges where float64/int64 arithmetic is provably exact.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateCycle, ScaleLimit
from .hypercore import Hypergraph

DEFAULT_MEM_GIB = 8.0


def _mem_budget_bytes(mem_gib: float | None = None) -> int:
    if mem_gib is None:
        mem_gib = float(os.environ.get("HAMFORGE_MEM_GIB", DEFAULT_MEM_GIB))
    return int(mem_gib * (1 << 30))


@dataclass(frozen=True)
class CountResult:
    count: int
    method: str


@dataclass(frozen=True)
class TwoFactorProfile:
    """counts[k] = number of generalized 2-factors with exactly k cycles.

    A Hamiltonian cycle is a one-cycle factor with no single-edge components,
    so counts[1] >= H(G), with equality whenever n <= 4 (no room for a short
    cycle plus matching edges).
    """

    counts: tuple[int, ...]

    def weighted_sum(self) -> int:
        return sum(c << k for k, c in enumerate(self.counts))

    @property
    def f1(self) -> int:
        return self.counts[1] if len(self.counts) > 1 else 0


def brute_force_ham_count(graph: Hypergraph, limit: int = 10) -> CountResult:
    """Count Hamiltonian cycles by filtering all (n-1)! anchored permutations."""
    n, r = graph.n, graph.r
    if n < r + 2:
        raise DegenerateCycle(f"need n >= r+2 (got n={n}, r={r})")
    if n > limit:
        raise ScaleLimit(f"brute force enumerates (n-1)! permutations; n={n} > {limit}")
    edges = graph.edges
    total = 0
    for rest in itertools.permutations(range(1, n)):
        seq = (0,) + rest
        doubled = seq + seq[: r - 1]
        ok = True
        for i in range(n):
            if tuple(sorted(doubled[i : i + r])) not in edges:
                ok = False
                break
        if ok:
            total += 1
    assert total % 2 == 0
    return CountResult(count=total // 2, method="brute_force")


def _transition_sets(graph: Hypergraph) -> dict[tuple[int, ...], set[int]]:
    """state tuple (t1..t_{r-1}) -> vertices v with sorted(state+{v}) an edge."""
    out: dict[tuple[int, ...], set[int]] = {}
    for edge in graph.edges:
        for perm in itertools.permutations(edge):
            out.setdefault(perm[:-1], set()).add(perm[-1])
    return out


def _dp_count_dict(graph: Hypergraph) -> int:
    """Pure-python subset DP; arbitrary precision, no vectorization."""
    n, r = graph.n, graph.r
    trans = _transition_sets(graph)
    edges = graph.edges
    total = 0
    prefix_pool = (
        itertools.permutations(range(1, n), r - 2) if r > 2 else [()]
    )
    for mid in prefix_pool:
        prefix = (0,) + tuple(mid)
        start_mask = 0
        for v in prefix:
            start_mask |= 1 << v
        layer = {(start_mask, prefix): 1}
        for _ in range(n - (r - 1)):
            nxt: dict[tuple[int, tuple[int, ...]], int] = {}
            for (mask, state), cnt in layer.items():
                for v in trans.get(state, ()):
                    bit = 1 << v
                    if mask & bit:
                        continue
                    key = (mask | bit, state[1:] + (v,))
                    nxt[key] = nxt.get(key, 0) + cnt
            layer = nxt
        full = (1 << n) - 1
        for (mask, state), cnt in layer.items():
            if mask != full:
                continue
            closure = state + prefix
            if all(
                tuple(sorted(closure[h : h + r])) in edges for h in range(r - 1)
            ):
                total += cnt
    return total


@lru_cache(maxsize=8)
def _mask_layers(nfree: int) -> tuple[np.ndarray, ...]:
    """Sorted bitmask arrays grouped by popcount, over nfree free slots."""
    layers = []
    for c in range(nfree + 1):
        masks = np.sort(
            np.array(
                [sum(1 << i for i in combo) for combo in itertools.combinations(range(nfree), c)],
                dtype=np.int64,
            )
        )
        masks.setflags(write=False)
        layers.append(masks)
    return tuple(layers)


def _dp_count_numpy(graph: Hypergraph, dtype) -> int:
    """Layered vectorized subset DP over masks of the non-prefix vertices.

    DP arrays are laid out (tail, mask, t1) where the frontier state is the
    ordered tuple (t1, tail...) of the last r-1 placed vertices; this keeps
    the per-layer contraction a contiguous batched matmul.
    """
    n, r = graph.n, graph.r
    tail_dim = n ** (r - 2)
    rest_dim = n ** (r - 3) if r >= 3 else 0

    # T[t1, tail, v] = 1 iff the window (t1, tail..., v) is an edge.
    T = np.zeros((n, tail_dim, n), dtype=dtype)
    for edge in graph.edges:
        for perm in itertools.permutations(edge):
            tail = 0
            for t in perm[1:-1]:
                tail = tail * n + t
            T[perm[0], tail, perm[-1]] = 1
    T2 = np.ascontiguousarray(T.transpose(1, 0, 2))  # (tail, t1, v)

    edges = graph.edges
    total = 0
    prefix_pool = (
        itertools.permutations(range(1, n), r - 2) if r > 2 else [()]
    )
    for mid in prefix_pool:
        prefix = (0,) + tuple(mid)
        free = [v for v in range(n) if v not in prefix]
        nfree = len(free)
        layers = _mask_layers(nfree)

        cur = np.zeros((tail_dim, 1, n), dtype=dtype)
        tail0 = 0
        for t in prefix[1:]:
            tail0 = tail0 * n + t
        cur[tail0, 0, prefix[0]] = 1

        for c in range(nfree):
            masks = layers[c]
            nxt_masks = layers[c + 1]
            nxt = np.zeros((tail_dim, len(nxt_masks), n), dtype=dtype)
            S2 = cur @ T2  # (tail, m, v)
            if r == 2:
                for fi, v in enumerate(free):
                    sel = (masks >> fi) & 1 == 0
                    if sel.any():
                        rows = np.searchsorted(nxt_masks, masks[sel] | (1 << fi))
                        nxt[0, rows, v] += S2[0, sel, v]
            else:
                # next state: t1' = tail[0], tail' = tail[1:] + (v,)
                S4 = S2.reshape(n, rest_dim, len(masks), n)
                nxt4 = nxt.reshape(rest_dim, n, len(nxt_masks), n)
                for fi, v in enumerate(free):
                    sel = (masks >> fi) & 1 == 0
                    if sel.any():
                        rows = np.searchsorted(nxt_masks, masks[sel] | (1 << fi))
                        nxt4[:, v, rows, :] += S4[:, :, sel, v].transpose(1, 2, 0)
            cur = nxt

        final = cur[:, 0, :]  # (tail, t1)
        for tail_idx, t1 in zip(*np.nonzero(final)):
            x = int(tail_idx)
            tail_vs = []
            for _ in range(r - 2):
                tail_vs.append(x % n)
                x //= n
            tail_vs.reverse()
            closure = (int(t1),) + tuple(tail_vs) + prefix
            if all(
                tuple(sorted(closure[h : h + r])) in edges for h in range(r - 1)
            ):
                total += int(round(final[tail_idx, t1].item()))
    return total


def _estimate_dp_bytes(n: int, r: int) -> int:
    nfree = n - (r - 1)
    peak_masks = math.comb(nfree, nfree // 2)
    state_dim = n ** (r - 1)
    return 2 * peak_masks * state_dim * 8 + (n**r) * 8


def exact_ham_count(graph: Hypergraph, mem_gib: float | None = None) -> CountResult:
    """Exact Hamiltonian cycle count via subset DP with an ordered (r-1)-frontier.

    Equals brute_force_ham_count on its whole domain. Raises ScaleLimit with a
    state-count estimate when the DP would exceed the memory budget
    (default 8 GiB; HAMFORGE_MEM_GIB overrides).
    """
    n, r = graph.n, graph.r
    if n < r + 2:
        raise DegenerateCycle(f"need n >= r+2 (got n={n}, r={r})")
    need = _estimate_dp_bytes(n, r)
    budget = _mem_budget_bytes(mem_gib)
    if need > budget:
        raise ScaleLimit(
            f"DP needs ~{need / (1 << 30):.2f} GiB "
            f"(~{math.comb(n - r + 1, (n - r + 1) // 2) * n ** (r - 1):,} peak states), "
            f"budget is {budget / (1 << 30):.2f} GiB"
        )
    if n < 13:
        total = _dp_count_dict(graph)
    elif n <= 18:
        # every partial count is an integer below (n-2)! < 2^53: float64 is exact
        total = _dp_count_numpy(graph, np.float64)
    elif n <= 21:
        total = _dp_count_numpy(graph, np.int64)
    else:
        total = _dp_count_dict(graph)
    assert total % 2 == 0
    return CountResult(count=total // 2, method="subset_dp")


def expectation_value(n: int, p: float) -> float:
    """E(n,p) = p^n (n-1)!/2, the expected count in the binomial random model."""
    if n < 3:
        raise ValueError("n must be >= 3")
    if not 0 < p <= 1:
        raise ValueError("p must be in (0,1]")
    if n <= 170:
        return (p**n) * math.factorial(n - 1) / 2
    return math.exp(n * math.log(p) + math.lgamma(n) - math.log(2))


def log2_expectation_value(n: int, p: float) -> float:
    """log2 of E(n,p); stable for large n."""
    if n < 3:
        raise ValueError("n must be >= 3")
    if not 0 < p <= 1:
        raise ValueError("p must be in (0,1]")
    ln2 = math.log(2)
    return n * math.log2(p) + math.lgamma(n) / ln2 - 1.0


def permanent(matrix) -> int:
    """Exact permanent of a small square matrix via Ryser's formula (Gray code)."""
    a = [[int(x) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    if n > 30:
        raise ScaleLimit(f"Ryser is O(2^n n); order {n} > 30")
    cols = list(zip(*a))
    rowsums = [0] * n
    total = 0
    sign = 1  # (-1)^{n-|S|}, updated as |S| changes parity
    gray = 0
    for k in range(1, 1 << n):
        bit = (k & -k).bit_length() - 1
        mask = 1 << bit
        gray ^= mask
        col = cols[bit]
        if gray & mask:
            for i in range(n):
                rowsums[i] += col[i]
            sign = -sign
        else:
            for i in range(n):
                rowsums[i] -= col[i]
            sign = -sign
        prod = 1
        for s in rowsums:
            if s == 0:
                prod = 0
                break
            prod *= s
        if prod:
            total += sign * prod
    # sign bookkeeping above tracks (-1)^{|S|}; overall factor (-1)^n
    return total if n % 2 == 0 else -total


def permanent_brute_force(matrix) -> int:
    """Definition-level permanent (sum over all permutations); test oracle."""
    a = [[int(x) for x in row] for row in matrix]
    n = len(a)
    total = 0
    for perm in itertools.permutations(range(n)):
        prod = 1
        for i, j in enumerate(perm):
            prod *= a[i][j]
            if prod == 0:
                break
        total += prod
    return total


def adjacency_matrix(graph: Hypergraph) -> np.ndarray:
    """Symmetric 0/1 adjacency matrix of a 2-graph."""
    if graph.r != 2:
        raise ValueError("adjacency matrix requires r=2")
    a = np.zeros((graph.n, graph.n), dtype=np.int64)
    for u, v in graph.edges:
        a[u, v] = 1
        a[v, u] = 1
    return a


def two_factor_profile(graph: Hypergraph, limit: int = 10) -> TwoFactorProfile:
    """Count spanning subgraphs whose components are cycles and single edges,
    grouped by number of cycles. Exhaustive; n <= 10."""
    if graph.r != 2:
        raise ValueError("generalized 2-factors are defined for graphs (r=2)")
    n = graph.n
    if n > limit:
        raise ScaleLimit(f"two-factor enumeration is exponential; n={n} > {limit}")
    adj = [set() for _ in range(n)]
    for u, v in graph.edges:
        adj[u].add(v)
        adj[v].add(u)

    @lru_cache(maxsize=None)
    def profiles(uncovered: frozenset) -> tuple[tuple[int, int], ...]:
        # returns ((k, count), ...) for covering `uncovered` by cycles/edges
        if not uncovered:
            return ((0, 1),)
        v = min(uncovered)
        rest = uncovered - {v}
        acc: dict[int, int] = {}
        # v matched by a single edge
        for u in adj[v] & rest:
            for k, c in profiles(rest - {u}):
                acc[k] = acc.get(k, 0) + c
        # v on a cycle of length >= 3; v is the least vertex of its cycle.
        # Count each cycle once by requiring second vertex < last vertex.
        def extend(path: tuple[int, ...], used: frozenset):
            last = path[-1]
            for u in adj[last] & uncovered:
                if u in used:
                    continue
                new_path = path + (u,)
                if len(new_path) >= 3 and v in adj[u] and new_path[1] < u:
                    for k, c in profiles(uncovered - frozenset(new_path)):
                        acc[k + 1] = acc.get(k + 1, 0) + c
                extend(new_path, used | {u})

        extend((v,), frozenset((v,)))
        return tuple(sorted(acc.items()))

    result = dict(profiles(frozenset(range(n))))
    profiles.cache_clear()
    if not result:
        return TwoFactorProfile(counts=(0,))
    kmax = max(result)
    return TwoFactorProfile(counts=tuple(result.get(k, 0) for k in range(kmax + 1)))


def bregman_bound(matrix) -> float:
    """Product bound on the permanent of a binary matrix from its row sums.

    Rows with zero sum contribute factor 1 (the permanent is then 0 anyway).
    """
    a = [[int(x) for x in row] for row in matrix]
    log_total = 0.0
    for row in a:
        if any(x not in (0, 1) for x in row):
            raise ValueError("matrix entries must be 0/1")
        ri = sum(row)
        if ri > 0:
            log_total += math.lgamma(ri + 1) / ri
    return math.exp(log_total)


def alon_upper_bound_h2(n: int, p: float) -> float:
    """Asymptotic-only upper-bound expression for graph Hamiltonian counts.

    Evaluates the closed form without its (1+o(1)) factor; report it, never
    assert it as an inequality at finite n.
    """
    if not 0 < p < 1:
        raise ValueError("p must be in (0,1)")
    if n < 3:
        raise ValueError("n must be >= 3")
    return math.exp(log2_alon_upper_bound_h2(n, p) * math.log(2))


def log2_alon_upper_bound_h2(n: int, p: float) -> float:
    if not 0 < p < 1:
        raise ValueError("p must be in (0,1)")
    if n < 3:
        raise ValueError("n must be >= 3")
    ln2 = math.log(2)
    log2_const = (
        -1.0 / ln2
        + (1.0 / p - 1.0) * 0.5 * math.log2(2 * math.pi)
        + (1.0 / (2 * p)) * math.log2(p)
    )
    return log2_const + (0.5 + 1.0 / (2 * p)) * math.log2(n) + log2_expectation_value(n, p)

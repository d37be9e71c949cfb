"""Randomized edge-disjoint packings, their validator, and the partitioners
that group packing elements / leftover edges into vertex-disjoint k-sets.

The randomized builder follows the sample -> reassign -> color -> trim
pipeline: sample K vertex q-sets, give each multiply-covered edge at most one
owner via a uniform draw, color surviving edges red/white, and trim white
edges so every element ends with the same edge count z. Red degrees are what
survives trimming, so the red-degree floor is the retry predicate guarding
the final min-degree property.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from random import Random
from typing import Callable, Iterable, Sequence, TextIO

from .errors import (
    ConstructionBug,
    DivisibilityViolation,
    InfeasibleParams,
    InvalidParams,
    ParseError,
    PartitionFailed,
    RetryBudgetExhausted,
)
from .geometry import SteinerSystem
from .hypercore import Edge


@dataclass(frozen=True)
class PackingParams:
    """Parameters of an (n, r, k, beta, delta)-packing.

    Faithful mode derives (q, K, M) and the per-size degree thresholds from
    the exponents; direct mode takes them explicitly (with a flat threshold
    tau), because the faithful M = floor(n^delta/4) >= 1 needs astronomically
    large n. The validator reads thresholds through tau_for_size either way.
    """

    n: int
    r: int
    k: int
    q: int
    K: int
    M: int
    mode: str  # "faithful" | "direct"
    beta: float | None = None
    delta: float | None = None
    tau: float | None = None

    @classmethod
    def faithful(cls, n: int, r: int, k: int, beta: float, delta: float) -> "PackingParams":
        if not 0 < delta < beta < 1:
            raise InvalidParams("need 0 < delta < beta < 1")
        if r < 3 or k < 1:
            raise InvalidParams("need r >= 3 and k >= 1")
        q = math.ceil(n**beta)
        K = math.ceil(n ** (r - r * beta))
        if K % k:
            K += k - K % k
        M = math.floor(n**delta / 4)
        if M < 1:
            raise InfeasibleParams(
                f"faithful M = floor(n^delta/4) = {M} < 1 at n={n}, delta={delta}; "
                "use direct mode at desk scale"
            )
        return cls(n=n, r=r, k=k, q=q, K=K, M=M, mode="faithful", beta=beta, delta=delta)

    @classmethod
    def direct(cls, n: int, r: int, k: int, q: int, K: int, M: int, tau: float) -> "PackingParams":
        if r < 3 or k < 1 or q < r or n < q:
            raise InvalidParams("need r >= 3, k >= 1, r <= q <= n")
        if K < 1 or K % k:
            raise InvalidParams(f"K={K} must be a positive multiple of k={k}")
        if M < 1:
            raise InvalidParams("M must be >= 1")
        return cls(n=n, r=r, k=k, q=q, K=K, M=M, mode="direct", tau=tau)

    def tau_for_size(self, size: int) -> float:
        if not 1 <= size <= self.r - 1:
            raise InvalidParams(f"|X| must be in [1, r-1], got {size}")
        if self.mode == "faithful":
            return self.n ** (-self.delta) * math.comb(self.q - size, self.r - size)
        return self.tau

    def floor_element_count(self) -> float:
        if self.mode == "faithful":
            return self.n ** (self.r - self.r * self.beta)
        return self.K


@dataclass(frozen=True)
class Packing:
    """Pairwise edge-disjoint q-vertex r-subgraphs with equal edge counts."""

    n: int
    r: int
    q: int
    k: int
    z: int
    vertex_sets: tuple[tuple[int, ...], ...]
    edge_sets: tuple[tuple[Edge, ...], ...]

    @property
    def K(self) -> int:
        return len(self.vertex_sets)

    def covered_edges(self) -> set[Edge]:
        out: set[Edge] = set()
        for edges in self.edge_sets:
            out.update(edges)
        return out


@dataclass(frozen=True)
class PackingReport:
    ok: bool
    properties: tuple[tuple[str, bool, str], ...]  # (name, passed, detail)

    def failed(self) -> list[str]:
        return [name for name, passed, _ in self.properties if not passed]

    def detail(self, name: str) -> str:
        for pname, _, d in self.properties:
            if pname == name:
                return d
        raise KeyError(name)


def validate_packing(packing: Packing, params: PackingParams) -> PackingReport:
    """Check the five packing properties plus pairwise edge-disjointness."""
    props: list[tuple[str, bool, str]] = []
    n, r, q = packing.n, packing.r, packing.q

    bad = next(
        (vs for vs in packing.vertex_sets if len(set(vs)) != q),
        None,
    )
    props.append(
        ("i_element_order", bad is None,
         "all elements have q vertices" if bad is None else f"element {bad} has {len(set(bad))} vertices")
    )

    violation = ""
    ok2 = True
    for ei, (vs, edges) in enumerate(zip(packing.vertex_sets, packing.edge_sets)):
        edge_set = set(edges)
        stray = next((e for e in edges if not set(e) <= set(vs)), None)
        if stray is not None:
            ok2 = False
            violation = f"element {ei} edge {stray} leaves its vertex set"
            break
        for size in range(1, r):
            threshold = params.tau_for_size(size)
            for X in itertools.combinations(sorted(vs), size):
                deg = sum(1 for e in edge_set if set(X) <= set(e))
                if deg < threshold:
                    ok2 = False
                    violation = (
                        f"element {ei}: degree of X={X} is {deg} < {threshold:.4g}"
                    )
                    break
            if not ok2:
                break
        if not ok2:
            break
    props.append(("ii_min_degree", ok2, violation or "all co-degrees meet the threshold"))

    covered = packing.covered_edges()
    half = math.comb(n, r) / 2
    ok3 = len(covered) <= half
    props.append(
        ("iii_half_coverage", ok3,
         f"covered {len(covered)} of C(n,r) = {math.comb(n, r)} (half = {half:.1f})")
    )

    ok4 = packing.K >= params.floor_element_count() and packing.K % params.k == 0
    props.append(
        ("iv_element_count", ok4,
         f"K = {packing.K}, floor = {params.floor_element_count():.4g}, k = {params.k}")
    )

    sizes = {len(edges) for edges in packing.edge_sets}
    ok5 = sizes == {packing.z}
    props.append(
        ("v_uniform_edge_count", ok5,
         f"edge counts {sorted(sizes)} vs z = {packing.z}")
    )

    total = sum(len(edges) for edges in packing.edge_sets)
    ok_disjoint = total == len(covered)
    props.append(
        ("pairwise_edge_disjoint", ok_disjoint,
         f"{total} edge slots over {len(covered)} distinct edges")
    )

    return PackingReport(ok=all(p[1] for p in props), properties=tuple(props))


@dataclass(frozen=True)
class BuildStats:
    attempts: int
    failure_counts: dict


def build_random_packing(
    params: PackingParams, rng: Random, retries: int = 50
) -> tuple[Packing, BuildStats]:
    """Randomized packing construction with full-restart retries.

    Per attempt: sample K q-sets; each covered edge keeps at most one owner
    (dropped outright if covered more than M times or the uniform draw
    exceeds its multiplicity); color red/white; trim white edges to the
    minimum element size z (lexicographically smallest whites go first).

    Faithful mode gates each attempt on the three concentration claims in
    their stated forms: the red-degree floor (red edges survive trimming),
    the one-third per-element edge cap, and trim feasibility max red <= z.
    Direct mode exists precisely where those asymptotic thresholds cannot
    hold, so there the gates are trim feasibility plus the five-property
    validator on the trimmed elements (the claims' role, checked directly).
    Every successful attempt is validator-approved in both modes.
    """
    n, r, q, K, M, k = params.n, params.r, params.q, params.K, params.M, params.k
    failures: dict[str, int] = {"claim1_red_degree": 0, "claim2_edge_cap": 0, "claim3_trim": 0}
    cap = math.comb(q, r) / 3

    for attempt in range(1, retries + 1):
        vertex_sets = [tuple(sorted(rng.sample(range(n), q))) for _ in range(K)]

        owners_of: dict[Edge, list[int]] = {}
        for i, vs in enumerate(vertex_sets):
            for e in itertools.combinations(vs, r):
                owners_of.setdefault(e, []).append(i)

        red: list[set[Edge]] = [set() for _ in range(K)]
        white: list[set[Edge]] = [set() for _ in range(K)]
        for e in sorted(owners_of):
            owners = owners_of[e]
            if len(owners) > M:
                continue
            j = rng.randint(1, M)
            if j > len(owners):
                continue
            i = owners[j - 1]
            if rng.random() < 0.5:
                red[i].add(e)
            else:
                white[i].add(e)

        if params.mode == "faithful":
            # claim 1: red degrees meet the threshold (they survive trimming)
            ok = True
            for i, vs in enumerate(vertex_sets):
                for size in range(1, r):
                    threshold = params.tau_for_size(size)
                    for X in itertools.combinations(vs, size):
                        if sum(1 for e in red[i] if set(X) <= set(e)) < threshold:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                failures["claim1_red_degree"] += 1
                continue

        totals = [len(red[i]) + len(white[i]) for i in range(K)]
        if params.mode == "faithful" and max(totals) > cap:
            failures["claim2_edge_cap"] += 1
            continue

        z = min(totals)
        if max(len(red[i]) for i in range(K)) > z:
            failures["claim3_trim"] += 1
            continue

        edge_sets = []
        for i in range(K):
            keep = sorted(white[i])[totals[i] - z :]
            edge_sets.append(tuple(sorted(red[i] | set(keep))))

        packing = Packing(
            n=n, r=r, q=q, k=k, z=z,
            vertex_sets=tuple(vertex_sets),
            edge_sets=tuple(edge_sets),
        )
        report = validate_packing(packing, params)
        if not report.ok:
            key = "validation:" + ",".join(report.failed())
            failures[key] = failures.get(key, 0) + 1
            continue
        return packing, BuildStats(attempts=attempt, failure_counts=dict(failures))

    raise RetryBudgetExhausted(
        f"no valid packing in {retries} attempts; failures: {failures}",
        failure_counts=failures,
    )


def leftover_edges(packing: Packing, k: int | None = None) -> list[Edge]:
    """Edges of the complete r-graph not covered by any element, sorted."""
    covered = packing.covered_edges()
    out = [
        e
        for e in itertools.combinations(range(packing.n), packing.r)
        if e not in covered
    ]
    if k is not None and len(out) % k:
        raise DivisibilityViolation(
            f"|W| = {len(out)} is not a multiple of k = {k}",
            residue=len(out) % k,
        )
    return out


# ---------------------------------------------------------------------------
# disjoint-group partitioning
# ---------------------------------------------------------------------------

def partition_into_disjoint_groups(
    items: Sequence,
    k: int,
    conflict: Callable | None = None,
    *,
    vertex_key: Callable[..., Iterable[int]] | None = None,
    swap_budget: int = 10_000,
    restarts: int = 8,
    rng: Random | None = None,
) -> list[list]:
    """Partition items into |items|/k groups of k pairwise non-conflicting items.

    Greedy first-fit ordered by conflict degree, with relocation repair and
    shuffled restarts. Either a pairwise `conflict` predicate or a
    `vertex_key` (conflict = shared vertex) must be given; the vertex path
    scales to large leftover sets.
    """
    items = list(items)
    if k < 1:
        raise InvalidParams("k must be >= 1")
    if len(items) % k:
        raise DivisibilityViolation(
            f"{len(items)} items cannot form groups of {k}", residue=len(items) % k
        )
    if k == 1:
        return [[it] for it in items]
    if (conflict is None) == (vertex_key is None):
        raise InvalidParams("provide exactly one of conflict= or vertex_key=")

    n_groups = len(items) // k

    if vertex_key is not None:
        keys = [frozenset(vertex_key(it)) for it in items]

        def conflicts(i: int, j: int) -> bool:
            return bool(keys[i] & keys[j])

        counts: dict[int, int] = {}
        for ks in keys:
            for v in ks:
                counts[v] = counts.get(v, 0) + 1
        degree = [sum(counts[v] - 1 for v in ks) for ks in keys]
    else:
        if len(items) > 5000:
            raise InvalidParams("generic conflict predicate is quadratic; use vertex_key for large item sets")

        def conflicts(i: int, j: int) -> bool:
            return conflict(items[i], items[j])

        degree = [0] * len(items)
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                if conflicts(i, j):
                    degree[i] += 1
                    degree[j] += 1

    base_order = sorted(range(len(items)), key=lambda i: (-degree[i], i))

    def try_fill(order: list[int]) -> list[list[int]] | None:
        groups: list[list[int]] = [[] for _ in range(n_groups)]
        open_groups = list(range(n_groups))
        budget = swap_budget

        def fits(idx: int, group: list[int]) -> bool:
            return all(not conflicts(idx, member) for member in group)

        for idx in order:
            placed = False
            for g in open_groups:
                if fits(idx, groups[g]):
                    groups[g].append(idx)
                    placed = True
                    break
            if placed:
                open_groups = [g for g in open_groups if len(groups[g]) < k]
                continue
            # repair: relocate one member of an open group to make room
            for g in open_groups:
                if budget <= 0:
                    return None
                for mi, member in enumerate(groups[g]):
                    rest = groups[g][:mi] + groups[g][mi + 1 :]
                    if not fits(idx, rest):
                        continue
                    target = None
                    for h in open_groups:
                        if h != g and fits(member, groups[h]):
                            target = h
                            break
                    budget -= 1
                    if target is not None:
                        groups[g] = rest + [idx]
                        groups[target].append(member)
                        placed = True
                        break
                if placed:
                    break
            if not placed:
                return None
            open_groups = [g for g in open_groups if len(groups[g]) < k]
        return groups

    order = list(base_order)
    shuffler = rng or Random(0)
    for attempt in range(restarts + 1):
        result = try_fill(order)
        if result is not None:
            return [[items[i] for i in group] for group in result]
        order = list(range(len(items)))
        shuffler.shuffle(order)
    raise PartitionFailed(
        f"no disjoint {k}-grouping of {len(items)} items within budget "
        f"({restarts} restarts, {swap_budget} swaps each)"
    )


# ---------------------------------------------------------------------------
# partitioned families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyElement:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class PartitionedFamily:
    """Groups of k vertex-disjoint subgraphs plus groups of k disjoint
    leftover edges; the ownership structure behind the quasi-random builder
    and the permutation classifier."""

    n: int
    r: int
    k: int
    element_groups: tuple[tuple[FamilyElement, ...], ...]
    leftover_groups: tuple[tuple[Edge, ...], ...]
    steiner_q: int | None = None

    def total_edges(self) -> int:
        covered = sum(len(el.edges) for grp in self.element_groups for el in grp)
        return covered + sum(len(grp) for grp in self.leftover_groups)

    def is_complete(self) -> bool:
        return self.total_edges() == math.comb(self.n, self.r)

    def uniform_element_size(self) -> int | None:
        sizes = {len(el.edges) for grp in self.element_groups for el in grp}
        if len(sizes) == 1:
            return sizes.pop()
        return None

    def validate(self) -> None:
        seen: set[Edge] = set()
        for gi, grp in enumerate(self.element_groups):
            if len(grp) != self.k:
                raise InvalidParams(f"element group {gi} has {len(grp)} members, expected {self.k}")
            for a in range(len(grp)):
                for b in range(a + 1, len(grp)):
                    if set(grp[a].vertices) & set(grp[b].vertices):
                        raise InvalidParams(f"element group {gi} members {a},{b} share a vertex")
            for el in grp:
                for e in el.edges:
                    if e in seen:
                        raise InvalidParams(f"edge {e} appears twice in the family")
                    seen.add(e)
        for gi, grp in enumerate(self.leftover_groups):
            if len(grp) != self.k:
                raise InvalidParams(f"leftover group {gi} has {len(grp)} members, expected {self.k}")
            for a in range(len(grp)):
                for b in range(a + 1, len(grp)):
                    if set(grp[a]) & set(grp[b]):
                        raise InvalidParams(f"leftover group {gi} edges {a},{b} share a vertex")
            for e in grp:
                if e in seen:
                    raise InvalidParams(f"edge {e} appears twice in the family")
                seen.add(e)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "steiner_q": self.steiner_q,
            "element_groups": [
                [
                    {"vertices": list(el.vertices), "edges": [list(e) for e in el.edges]}
                    for el in grp
                ]
                for grp in self.element_groups
            ],
            "leftover_groups": [
                [list(e) for e in grp] for grp in self.leftover_groups
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PartitionedFamily":
        try:
            fam = cls(
                n=int(data["n"]),
                r=int(data["r"]),
                k=int(data["k"]),
                steiner_q=(None if data.get("steiner_q") is None else int(data["steiner_q"])),
                element_groups=tuple(
                    tuple(
                        FamilyElement(
                            vertices=tuple(el["vertices"]),
                            edges=tuple(tuple(e) for e in el["edges"]),
                        )
                        for el in grp
                    )
                    for grp in data["element_groups"]
                ),
                leftover_groups=tuple(
                    tuple(tuple(e) for e in grp) for grp in data["leftover_groups"]
                ),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed family JSON: {exc}") from None
        fam.validate()
        return fam


def family_from_design(system: SteinerSystem, k: int, *, rng: Random | None = None,
                       swap_budget: int = 10_000) -> PartitionedFamily:
    """Partition a Steiner system's blocks into vertex-disjoint k-groups.

    Each block becomes a complete 3-graph element; designs cover every
    triple, so there are no leftover edges.
    """
    blocks = list(system.blocks)
    groups = partition_into_disjoint_groups(
        blocks, k, vertex_key=lambda b: b, swap_budget=swap_budget, rng=rng
    )
    element_groups = tuple(
        tuple(
            FamilyElement(
                vertices=b, edges=tuple(itertools.combinations(b, 3))
            )
            for b in grp
        )
        for grp in groups
    )
    fam = PartitionedFamily(
        n=system.n, r=3, k=k,
        element_groups=element_groups,
        leftover_groups=(),
        steiner_q=system.q,
    )
    fam.validate()
    if not fam.is_complete():
        raise ConstructionBug("design-derived family does not cover all triples")
    return fam


def family_from_packing(packing: Packing, *, rng: Random | None = None,
                        swap_budget: int = 10_000) -> PartitionedFamily:
    """Group packing elements and leftover edges into vertex-disjoint k-sets."""
    k = packing.k
    elements = [
        FamilyElement(vertices=vs, edges=es)
        for vs, es in zip(packing.vertex_sets, packing.edge_sets)
    ]
    element_groups = partition_into_disjoint_groups(
        elements, k, vertex_key=lambda el: el.vertices,
        swap_budget=swap_budget, rng=rng,
    )
    leftovers = leftover_edges(packing, k)
    leftover_groups = partition_into_disjoint_groups(
        leftovers, k, vertex_key=lambda e: e, swap_budget=swap_budget, rng=rng
    )
    fam = PartitionedFamily(
        n=packing.n, r=packing.r, k=k,
        element_groups=tuple(tuple(grp) for grp in element_groups),
        leftover_groups=tuple(tuple(grp) for grp in leftover_groups),
        steiner_q=None,
    )
    fam.validate()
    if not fam.is_complete():
        raise ConstructionBug("packing-derived family must cover all of K_n^r")
    return fam


def singleton_leftover_family(n: int, r: int) -> PartitionedFamily:
    """Degenerate k=1 family: every edge of K_n^r in its own leftover group.

    No two windows can ever share a group, so every permutation is good with
    f = n and g = 0; useful as a boundary case for the estimators.
    """
    groups = tuple((e,) for e in itertools.combinations(range(n), r))
    return PartitionedFamily(
        n=n, r=r, k=1, element_groups=(), leftover_groups=groups, steiner_q=None
    )


# ---------------------------------------------------------------------------
# packing file format
# ---------------------------------------------------------------------------

def write_packing(packing: Packing, stream: TextIO) -> None:
    stream.write(
        f"{packing.n} {packing.r} {packing.q} {packing.K} {packing.k} {packing.z}\n"
    )
    for vs, edges in zip(packing.vertex_sets, packing.edge_sets):
        stream.write(" ".join(map(str, vs)) + "\n")
        for e in edges:
            stream.write(" ".join(map(str, e)) + "\n")
    leftovers = leftover_edges(packing)
    stream.write(f"W {len(leftovers)}\n")
    for e in leftovers:
        stream.write(" ".join(map(str, e)) + "\n")


def read_packing(stream: TextIO) -> Packing:
    header = stream.readline().split()
    if len(header) != 6:
        raise ParseError("line 1: packing header must be 'n r q K k z'")
    try:
        n, r, q, K, k, z = (int(x) for x in header)
    except ValueError:
        raise ParseError("line 1: non-integer packing header") from None
    lineno = 1
    vertex_sets = []
    edge_sets = []
    for _ in range(K):
        lineno += 1
        vs = tuple(int(x) for x in stream.readline().split())
        if len(vs) != q:
            raise ParseError(f"line {lineno}: element must list q = {q} vertices")
        edges = []
        for _ in range(z):
            lineno += 1
            e = tuple(int(x) for x in stream.readline().split())
            if len(e) != r:
                raise ParseError(f"line {lineno}: edge must have r = {r} vertices")
            edges.append(e)
        vertex_sets.append(vs)
        edge_sets.append(tuple(edges))
    lineno += 1
    w_header = stream.readline().split()
    if len(w_header) != 2 or w_header[0] != "W":
        raise ParseError(f"line {lineno}: expected leftover header 'W m'")
    return Packing(
        n=n, r=r, q=q, k=k, z=z,
        vertex_sets=tuple(vertex_sets),
        edge_sets=tuple(edge_sets),
    )

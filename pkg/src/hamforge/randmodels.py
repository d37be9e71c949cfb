"""Random r-graph samplers, the group-choice quasi-random builder, and the
sampled quasi-randomness audit.

Samplers take an explicit Random handle and draw in a fixed edge order, so a
seed fully determines the output.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Iterable, Sequence

from .errors import ConstructionBug, InvalidParams
from .hypercore import Edge, Hypergraph
from .packing import PartitionedFamily


@dataclass(frozen=True)
class DensitySpec:
    """Exact rational density p = num/den in lowest terms, 0 < p < 1."""

    num: int
    den: int

    def __post_init__(self):
        if not 0 < self.num < self.den:
            raise InvalidParams(f"need 0 < num < den, got {self.num}/{self.den}")
        if math.gcd(self.num, self.den) != 1:
            raise InvalidParams(f"{self.num}/{self.den} is not in lowest terms")

    @classmethod
    def parse(cls, text: str) -> "DensitySpec":
        try:
            num, den = (int(x) for x in text.split("/"))
        except ValueError:
            raise InvalidParams(f"density must look like 'NUM/DEN', got {text!r}") from None
        g = math.gcd(num, den)
        return cls(num // g, den // g)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def as_float(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def sample_gnp(n: int, r: int, p: float, rng: Random) -> Hypergraph:
    """Each r-set included independently with probability p."""
    if not 0 <= p <= 1:
        raise InvalidParams(f"p must be in [0,1], got {p}")
    edges = [e for e in itertools.combinations(range(n), r) if rng.random() < p]
    return Hypergraph.from_edges(n, r, edges)


def sample_gnm(n: int, r: int, m: int, rng: Random) -> Hypergraph:
    """Uniform r-graph with exactly m edges."""
    universe = list(itertools.combinations(range(n), r))
    if not 0 <= m <= len(universe):
        raise InvalidParams(f"m must be in [0, C(n,r)] = [0, {len(universe)}], got {m}")
    return Hypergraph.from_edges(n, r, rng.sample(universe, m))


def _edge_target(n: int, r: int, p) -> int:
    total = math.comb(n, r)
    if isinstance(p, DensitySpec):
        p = p.as_fraction()
    if isinstance(p, Fraction):
        m = p * total
        if m.denominator != 1:
            raise InvalidParams(f"p*C(n,r) = {m} is not an integer")
        return int(m)
    m = p * total
    if abs(m - round(m)) > 1e-9:
        raise InvalidParams(f"p*C(n,r) = {m} is not an integer")
    return int(round(m))


def sample_exact_density_subgraph(graph: Hypergraph, p, rng: Random) -> Hypergraph:
    """Uniform spanning subgraph with exactly p*C(n,r) edges of `graph`."""
    m = _edge_target(graph.n, graph.r, p)
    if graph.edge_count < m:
        raise InvalidParams(
            f"graph has {graph.edge_count} edges, fewer than p*C(n,r) = {m}"
        )
    chosen = rng.sample(graph.sorted_edges(), m)
    return Hypergraph.from_edges(graph.n, graph.r, chosen)


def build_quasirandom_from_partition(
    family: PartitionedFamily, spec: DensitySpec, rng: Random
) -> Hypergraph:
    """Choose exactly `num` of the k members of every group and take their edges.

    On a family that partitions all of K_n^r into equal-size elements plus
    single leftover edges, the output density is exactly num/den.
    """
    if spec.den != family.k:
        raise InvalidParams(
            f"density denominator {spec.den} must equal the family's k = {family.k}"
        )
    ln = spec.num
    edges: set[Edge] = set()
    for grp in family.element_groups:
        for idx in sorted(rng.sample(range(family.k), ln)):
            for e in grp[idx].edges:
                if e in edges:
                    raise ConstructionBug(f"edge {e} contributed twice")
                edges.add(e)
    for grp in family.leftover_groups:
        for idx in sorted(rng.sample(range(family.k), ln)):
            e = grp[idx]
            if e in edges:
                raise ConstructionBug(f"edge {e} contributed twice")
            edges.add(e)
    graph = Hypergraph.from_edges(family.n, family.r, edges)
    if family.is_complete() and family.uniform_element_size() is not None:
        want = _edge_target(family.n, family.r, spec.as_fraction())
        if graph.edge_count != want:
            raise ConstructionBug(
                f"complete family build has {graph.edge_count} edges, expected {want}"
            )
    return graph


@dataclass(frozen=True)
class AuditReport:
    """Sampled relaxation of the half-set density definition.

    `passed` means no sampled violation; it never claims exhaustive
    verification over all floor(n/2)-subsets.
    """

    p: float
    epsilon: float
    samples: int
    max_abs_deviation: float
    violations: int
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "epsilon": self.epsilon,
            "samples": self.samples,
            "max_abs_deviation": self.max_abs_deviation,
            "violations": self.violations,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def audit_quasirandomness(
    graph: Hypergraph,
    epsilon: float,
    samples: int,
    rng: Random,
    p: float | None = None,
    extra_subsets: Sequence[Iterable[int]] = (),
    seed: int | None = None,
) -> AuditReport:
    """Sample floor(n/2)-subsets and report the worst induced-density deviation.

    `extra_subsets` lets callers plant adversarial half-sets alongside the
    uniform samples.
    """
    if graph.n < 4:
        raise InvalidParams("audit needs n >= 4")
    if epsilon <= 0:
        raise InvalidParams("epsilon must be positive")
    if p is None:
        p = graph.density()
    half = graph.n // 2
    denom = math.comb(half, graph.r)
    subsets = [tuple(sorted(rng.sample(range(graph.n), half))) for _ in range(samples)]
    for extra in extra_subsets:
        sub = tuple(sorted(extra))
        if len(sub) != half or len(set(sub)) != half:
            raise InvalidParams(f"extra subset must have floor(n/2) = {half} distinct vertices")
        subsets.append(sub)

    max_dev = 0.0
    violations = 0
    for sub in subsets:
        inside = set(sub)
        count = sum(1 for e in graph.edges if inside.issuperset(e))
        dev = abs(count / denom - p)
        if dev > max_dev:
            max_dev = dev
        if dev >= epsilon:
            violations += 1
    return AuditReport(
        p=p,
        epsilon=epsilon,
        samples=len(subsets),
        max_abs_deviation=max_dev,
        violations=violations,
        seed=seed,
    )

"""Canonical hypergraph and permutation types.

Vertices are dense 0-based integers. Edges are strictly increasing r-tuples,
which gives every edge set a total order and makes iteration deterministic.
All types are immutable after construction; every operation here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .errors import DegenerateCycle, ParseError

Edge = tuple[int, ...]


def _normalize_edge(edge: Iterable[int], n: int, r: int) -> Edge:
    e = tuple(sorted(edge))
    if len(e) != r or len(set(e)) != r:
        raise ValueError(f"edge {tuple(edge)!r} does not have {r} distinct vertices")
    if e[0] < 0 or e[-1] >= n:
        raise ValueError(f"edge {e!r} has a vertex outside [0,{n})")
    return e


@dataclass(frozen=True)
class Hypergraph:
    """An n-vertex r-uniform hypergraph with a sorted, duplicate-free edge set."""

    n: int
    r: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("uniformity r must be >= 2")
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")

    @classmethod
    def from_edges(cls, n: int, r: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        normalized = set()
        for edge in edges:
            normalized.add(_normalize_edge(edge, n, r))
        return cls(n=n, r=r, edges=frozenset(normalized))

    @classmethod
    def complete(cls, n: int, r: int) -> "Hypergraph":
        import itertools

        return cls(n=n, r=r, edges=frozenset(itertools.combinations(range(n), r)))

    @classmethod
    def empty(cls, n: int, r: int) -> "Hypergraph":
        return cls(n=n, r=r, edges=frozenset())

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def has_edge(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in self.edges

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def density(self) -> float:
        total = math.comb(self.n, self.r)
        if total == 0:
            return 0.0
        return len(self.edges) / total

    def with_edge(self, edge: Iterable[int]) -> "Hypergraph":
        e = _normalize_edge(edge, self.n, self.r)
        return Hypergraph(self.n, self.r, self.edges | {e})


@dataclass(frozen=True)
class VertexPermutation:
    """A bijection on [0,n), stored as the visiting order."""

    order: tuple[int, ...]

    def __post_init__(self):
        n = len(self.order)
        if sorted(self.order) != list(range(n)):
            raise ValueError("order is not a permutation of 0..n-1")

    @property
    def n(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class CyclicWindowSet:
    """The n cyclic length-r windows of a permutation, each stored sorted.

    windows[i] is the sorted window starting at position i of the source.
    """

    windows: tuple[Edge, ...]
    source: tuple[int, ...]

    def as_set(self) -> frozenset[Edge]:
        return frozenset(self.windows)


@dataclass(frozen=True)
class CanonicalCycle:
    """Lexicographically least permutation among the 2n rotations/reversals."""

    representative: tuple[int, ...]


def _as_order(pi) -> tuple[int, ...]:
    if isinstance(pi, VertexPermutation):
        return pi.order
    order = tuple(pi)
    n = len(order)
    if sorted(order) != list(range(n)):
        raise ValueError("sequence is not a permutation of 0..n-1")
    return order


def window_set(pi, r: int) -> CyclicWindowSet:
    """Extract the n cyclic r-windows of a permutation.

    Requires n >= r+2; below that the cycle/permutation association the
    counting operations rely on degenerates.
    """
    order = _as_order(pi)
    n = len(order)
    if n < r + 2:
        raise DegenerateCycle(f"need n >= r+2 (got n={n}, r={r})")
    doubled = order + order[: r - 1]
    windows = tuple(tuple(sorted(doubled[i : i + r])) for i in range(n))
    return CyclicWindowSet(windows=windows, source=order)


def symmetry_images(order: Sequence[int]) -> list[tuple[int, ...]]:
    """All 2n rotations and reversed rotations of a permutation."""
    order = tuple(order)
    n = len(order)
    images = []
    for seq in (order, order[::-1]):
        for s in range(n):
            images.append(seq[s:] + seq[:s])
    return images


def canonicalize(pi) -> CanonicalCycle:
    """Stable representative of the 2n-element symmetry class of pi."""
    order = _as_order(pi)
    if len(order) < 3:
        raise DegenerateCycle("canonical cycle needs at least 3 vertices")
    return CanonicalCycle(representative=min(symmetry_images(order)))


def write_hypergraph(graph: Hypergraph, stream: TextIO) -> None:
    """Write the bit-exact text format: 'n r m' then m sorted edge lines."""
    edges = graph.sorted_edges()
    stream.write(f"{graph.n} {graph.r} {len(edges)}\n")
    for e in edges:
        stream.write(" ".join(map(str, e)) + "\n")


def read_hypergraph(stream: TextIO) -> Hypergraph:
    """Parse the text format, validating every line; errors name the line."""
    header = stream.readline()
    if not header:
        raise ParseError("line 1: empty input, expected header 'n r m'")
    parts = header.split()
    if len(parts) != 3:
        raise ParseError("line 1: header must be three integers 'n r m'")
    try:
        n, r, m = (int(p) for p in parts)
    except ValueError:
        raise ParseError("line 1: header fields are not integers") from None
    if r < 2 or n < 0 or m < 0:
        raise ParseError("line 1: header out of range (need n >= 0, r >= 2, m >= 0)")
    edges = set()
    for idx in range(m):
        lineno = idx + 2
        line = stream.readline()
        if not line:
            raise ParseError(f"line {lineno}: expected {m} edges, file ended early")
        fields = line.split()
        if len(fields) != r:
            raise ParseError(f"line {lineno}: expected {r} vertices, got {len(fields)}")
        try:
            verts = tuple(int(f) for f in fields)
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer vertex") from None
        if any(v < 0 or v >= n for v in verts):
            raise ParseError(f"line {lineno}: vertex out of range [0,{n})")
        if any(verts[i] >= verts[i + 1] for i in range(r - 1)):
            raise ParseError(f"line {lineno}: vertices must be strictly increasing")
        if verts in edges:
            raise ParseError(f"line {lineno}: duplicate edge {verts}")
        edges.add(verts)
    return Hypergraph(n=n, r=r, edges=frozenset(edges))

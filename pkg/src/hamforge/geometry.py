"""Finite-field arithmetic and the spherical Steiner systems S(3, q+1, q^s+1).

The system on the projective line over GF(q^s) is the orbit of the subfield
line GF(q) + {infinity} under fractional-linear maps; the exhaustive
validator is the ground truth for every constructed design.

Point indexing: infinity is index 0; field elements (encoded as integers in
base p from their coefficient vectors) take indices 1..q^s in encoding order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, TextIO

from .errors import (
    ConstructionBug,
    FieldDivisionError,
    InvalidParams,
    ParseError,
    ScaleLimit,
)

INFINITY = object()  # sentinel projective point


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, a) with q = p^a for prime p, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if p * p > q:
            break
        if q % p == 0:
            a = 0
            x = q
            while x % p == 0:
                x //= p
                a += 1
            return (p, a) if x == 1 else None
    return (q, 1)


def _poly_mul_mod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    # dense schoolbook multiply then reduce; coefficients little-endian
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    m = len(modulus) - 1
    for i in range(len(out) - 1, m - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(m):
                out[i - m + j] = (out[i - m + j] - c * modulus[j]) % p
    return [x % p for x in out[:m]] + [0] * max(0, m - len(out))


class FieldCtx:
    """GF(p^m) with the encoding-least monic irreducible modulus.

    Elements are integers in [0, p^m): the base-p digits of an element are
    its coefficient vector (constant term = least significant digit).
    Multiplication and inversion run on discrete-log tables.
    """

    def __init__(self, p: int, m: int):
        if not is_prime(p):
            raise InvalidParams(f"characteristic {p} is not prime")
        if m < 1:
            raise InvalidParams("extension degree must be >= 1")
        self.p = p
        self.m = m
        self.order = p**m
        if self.order > 200_000:
            raise ScaleLimit(f"field order {self.order} beyond desk scale")
        self.modulus = self._find_irreducible()
        self._build_tables()

    # -- construction ------------------------------------------------------
    def _decode(self, x: int) -> list[int]:
        coeffs = []
        for _ in range(self.m):
            coeffs.append(x % self.p)
            x //= self.p
        return coeffs

    def _encode(self, coeffs: Iterable[int]) -> int:
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + (c % self.p)
        return x

    def _find_irreducible(self) -> list[int]:
        p, m = self.p, self.m
        if m == 1:
            return [0, 1]  # x
        # monic degree-m candidates in increasing encoding of the low part
        for low in range(p**m):
            cand = self._decode(low) + [1]
            if self._is_irreducible(cand):
                return cand
        raise ConstructionBug("no irreducible polynomial found")

    def _is_irreducible(self, poly: list[int]) -> bool:
        p = self.p
        deg = len(poly) - 1
        if poly[0] == 0:
            return False
        # trial division by all monic polynomials of degree 1..deg//2
        for d in range(1, deg // 2 + 1):
            for low in range(p**d):
                div = self._decode_deg(low, d) + [1]
                if self._poly_divides(div, poly):
                    return False
        return True

    def _decode_deg(self, x: int, d: int) -> list[int]:
        coeffs = []
        for _ in range(d):
            coeffs.append(x % self.p)
            x //= self.p
        return coeffs

    def _poly_divides(self, div: list[int], poly: list[int]) -> bool:
        p = self.p
        rem = list(poly)
        dd = len(div) - 1
        inv_lead = pow(div[-1], p - 2, p)
        while len(rem) - 1 >= dd:
            lead = rem[-1]
            if lead:
                f = (lead * inv_lead) % p
                off = len(rem) - 1 - dd
                for i in range(dd + 1):
                    rem[off + i] = (rem[off + i] - f * div[i]) % p
            rem.pop()
            while len(rem) > dd and rem[-1] == 0:
                rem.pop()
        return all(c == 0 for c in rem)

    def _raw_mul(self, a: int, b: int) -> int:
        return self._encode(
            _poly_mul_mod(self._decode(a), self._decode(b), self.modulus, self.p)
        )

    def _build_tables(self):
        # find a multiplicative generator, then log/exp tables
        n = self.order - 1
        factors = set()
        x = n
        f = 2
        while f * f <= x:
            while x % f == 0:
                factors.add(f)
                x //= f
            f += 1
        if x > 1:
            factors.add(x)

        def raw_pow(base: int, e: int) -> int:
            acc = 1
            cur = base
            while e:
                if e & 1:
                    acc = self._raw_mul(acc, cur)
                cur = self._raw_mul(cur, cur)
                e >>= 1
            return acc

        gen = None
        for cand in range(2, self.order):
            if all(raw_pow(cand, n // f) != 1 for f in factors):
                gen = cand
                break
        if gen is None:
            if self.order == 2:
                gen = 1
            else:
                raise ConstructionBug("no multiplicative generator found")
        self.generator = gen
        self._exp = [1] * n
        self._log = [0] * self.order
        cur = 1
        for i in range(n):
            self._exp[i] = cur
            self._log[cur] = i
            cur = self._raw_mul(cur, gen)

    # -- field operations ----------------------------------------------------
    def elements(self) -> range:
        return range(self.order)

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._encode(
            (x + y) % self.p for x, y in zip(self._decode(a), self._decode(b))
        )

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self._encode((-x) % self.p for x in self._decode(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        n = self.order - 1
        return self._exp[(self._log[a] + self._log[b]) % n]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDivisionError("inverse of zero")
        n = self.order - 1
        return self._exp[(-self._log[a]) % n]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise FieldDivisionError("negative power of zero")
            return 0
        n = self.order - 1
        return self._exp[(self._log[a] * e) % n]

    def subfield(self, q: int) -> list[int]:
        """Elements of the order-q subfield: fixed points of x -> x^q."""
        sub = [x for x in self.elements() if self.pow(x, q) == x]
        if len(sub) != q:
            raise InvalidParams(f"GF({self.order}) has no subfield of order {q}")
        return sub


# ---------------------------------------------------------------------------
# the projective line and the spherical design
# ---------------------------------------------------------------------------

def apply_mobius(ctx: FieldCtx, a: int, b: int, c: int, d: int, z) -> object:
    """z -> (az+b)/(cz+d) on GF(order) + {infinity}."""
    if z is INFINITY:
        if c == 0:
            return INFINITY
        return ctx.div(a, c)
    den = ctx.add(ctx.mul(c, z), d)
    if den == 0:
        return INFINITY
    num = ctx.add(ctx.mul(a, z), b)
    return ctx.div(num, den)


def point_index(z) -> int:
    return 0 if z is INFINITY else 1 + z


@dataclass(frozen=True)
class SteinerSystem:
    """S(3, q+1, n) with n = q^s + 1; blocks are sorted point-index tuples."""

    n: int
    q: int
    s: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def block_size(self) -> int:
        return self.q + 1

    def expected_block_count(self) -> int:
        return math.comb(self.n, 3) // math.comb(self.q + 1, 3)

    def expected_point_count(self) -> int:
        return math.comb(self.n - 1, 2) // math.comb(self.q, 2)


@dataclass(frozen=True)
class SteinerReport:
    ok: bool
    problems: tuple[str, ...]

    def first_problem(self) -> str | None:
        return self.problems[0] if self.problems else None


def build_spherical_steiner(q: int, s: int) -> SteinerSystem:
    """Orbit of the subfield line under fractional-linear maps over GF(q^s).

    The result is validated exhaustively; a validation failure is a
    construction bug, not a tolerated outcome.
    """
    pp = prime_power(q)
    if pp is None:
        raise InvalidParams(f"q={q} is not a prime power")
    if s < 2:
        raise InvalidParams("need s >= 2 (s=1 gives the single-block design)")
    if q**s > 10_000:
        raise ScaleLimit(f"q^s = {q**s} beyond desk scale")
    p, a = pp
    ctx = FieldCtx(p, a * s)

    base = tuple(sorted(point_index(z) for z in [INFINITY, *ctx.subfield(q)]))
    points = [INFINITY, *ctx.elements()]

    # generators of the fractional-linear group: z+1, gz, 1/z
    gens = [(1, 1, 0, 1), (ctx.generator, 0, 0, 1), (0, 1, 1, 0)]

    def image(block: tuple[int, ...], g) -> tuple[int, ...]:
        out = []
        for idx in block:
            z = points[idx]
            out.append(point_index(apply_mobius(ctx, *g, z)))
        return tuple(sorted(out))

    seen = {base}
    frontier = [base]
    while frontier:
        nxt = []
        for block in frontier:
            for g in gens:
                img = image(block, g)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt

    system = SteinerSystem(n=q**s + 1, q=q, s=s, blocks=tuple(sorted(seen)))
    report = verify_steiner(system)
    if not report.ok:
        raise ConstructionBug(f"spherical design failed validation: {report.first_problem()}")
    return system


def verify_steiner(system: SteinerSystem) -> SteinerReport:
    """Exhaustively check block shape, counts, and exact triple coverage."""
    n, q = system.n, system.q
    problems: list[str] = []
    if math.comb(n, 3) > 20_000_000:
        raise ScaleLimit(f"exhaustive triple check over C({n},3) is over budget")

    size = q + 1
    malformed = False
    for b in system.blocks:
        if len(b) != size or len(set(b)) != size:
            problems.append(f"block {b} does not have {size} distinct points")
            malformed = True
            break
        if b[0] < 0 or b[-1] >= n:
            problems.append(f"block {b} has out-of-range points")
            malformed = True
            break
    if len(set(system.blocks)) != len(system.blocks):
        problems.append("duplicate blocks present")

    expected_blocks = system.expected_block_count()
    if len(system.blocks) != expected_blocks:
        problems.append(
            f"block count {len(system.blocks)} != C(n,3)/C(q+1,3) = {expected_blocks}"
        )

    if not malformed:
        import itertools

        coverage: dict[tuple[int, int, int], int] = {}
        for b in system.blocks:
            for triple in itertools.combinations(b, 3):
                coverage[triple] = coverage.get(triple, 0) + 1
        over = next((t for t, c in coverage.items() if c > 1), None)
        if over is not None:
            problems.append(f"triple {over} covered {coverage[over]} times")
        if len(coverage) != math.comb(n, 3):
            missing = next(
                t
                for t in itertools.combinations(range(n), 3)
                if t not in coverage
            )
            problems.append(f"triple {missing} covered 0 times")

        per_point = [0] * n
        for b in system.blocks:
            for v in b:
                per_point[v] += 1
        want = system.expected_point_count()
        off = next((v for v in range(n) if per_point[v] != want), None)
        if off is not None:
            problems.append(
                f"point {off} lies in {per_point[off]} blocks, expected {want}"
            )

    return SteinerReport(ok=not problems, problems=tuple(problems))


def write_design(system: SteinerSystem, stream: TextIO) -> None:
    stream.write(f"{system.n} {system.q} {system.s} {len(system.blocks)}\n")
    for b in system.blocks:
        stream.write(" ".join(map(str, b)) + "\n")


def read_design(stream: TextIO) -> SteinerSystem:
    header = stream.readline()
    parts = header.split()
    if len(parts) != 4:
        raise ParseError("line 1: design header must be 'n q s b'")
    try:
        n, q, s, b = (int(x) for x in parts)
    except ValueError:
        raise ParseError("line 1: non-integer design header") from None
    blocks = []
    for i in range(b):
        line = stream.readline()
        if not line:
            raise ParseError(f"line {i + 2}: expected {b} blocks, file ended early")
        try:
            block = tuple(int(x) for x in line.split())
        except ValueError:
            raise ParseError(f"line {i + 2}: non-integer point") from None
        if len(block) != q + 1:
            raise ParseError(f"line {i + 2}: block must have q+1 = {q + 1} points")
        if any(v < 0 or v >= n for v in block):
            raise ParseError(f"line {i + 2}: point out of range [0,{n})")
        if tuple(sorted(block)) != block:
            raise ParseError(f"line {i + 2}: points must be sorted ascending")
        blocks.append(block)
    return SteinerSystem(n=n, q=q, s=s, blocks=tuple(sorted(blocks)))

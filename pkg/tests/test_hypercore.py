import io
import math
import itertools
import random

import pytest

from hamforge.errors import DegenerateCycle, ParseError
from hamforge.hypercore import (
    CanonicalCycle,
    Hypergraph,
    canonicalize,
    read_hypergraph,
    symmetry_images,
    window_set,
    write_hypergraph,
)


def test_window_set_r3_example():
    ws = window_set((0, 1, 2, 3, 4), 3)
    assert ws.as_set() == frozenset(
        [(0, 1, 2), (1, 2, 3), (2, 3, 4), (0, 3, 4), (0, 1, 4)]
    )


def test_window_set_identity_cycle_r2():
    ws = window_set(tuple(range(6)), 2)
    assert ws.as_set() == frozenset([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])


def test_window_set_reversal_invariant():
    rng = random.Random(8)
    for _ in range(20):
        pi = tuple(rng.sample(range(8), 8))
        assert window_set(pi, 3).as_set() == window_set(pi[::-1], 3).as_set()


def test_window_count_and_distinctness():
    rng = random.Random(2)
    for n, r in [(5, 3), (6, 2), (7, 4), (9, 3), (10, 2)]:
        for _ in range(10):
            pi = tuple(rng.sample(range(n), n))
            ws = window_set(pi, r)
            assert len(ws.windows) == n
            assert len(ws.as_set()) == n


def test_window_set_degenerate():
    with pytest.raises(DegenerateCycle):
        window_set((0, 1, 2, 3), 3)


def test_canonicalize_rotation_reversal():
    assert canonicalize((0, 1, 2, 3)) == canonicalize((1, 2, 3, 0))
    assert canonicalize((0, 1, 2, 3)) == canonicalize((0, 3, 2, 1))


def test_canonicalize_collapses_symmetry_class():
    rng = random.Random(7)
    pi = tuple(rng.sample(range(7), 7))
    reps = {canonicalize(img).representative for img in symmetry_images(pi)}
    assert len(symmetry_images(pi)) == 14
    assert len(reps) == 1


@pytest.mark.parametrize("n", [5, 6, 7])
def test_canonicalize_exhaustive_classes(n):
    # distinct window sets <-> distinct representatives, over all of S_n
    reps = {}
    for pi in itertools.permutations(range(n)):
        rep = canonicalize(pi).representative
        ws = window_set(pi, 3).as_set()
        reps.setdefault(rep, set()).add(ws)
    assert len(reps) == math.factorial(n) // (2 * n)
    for windows in reps.values():
        assert len(windows) == 1
    all_window_sets = {next(iter(v)) for v in reps.values()}
    assert len(all_window_sets) == len(reps)


def test_density_complete():
    assert Hypergraph.complete(7, 3).density() == 1.0
    assert Hypergraph.empty(7, 3).density() == 0.0


def test_read_single_edge():
    g = read_hypergraph(io.StringIO("5 3 1\n0 1 2\n"))
    assert g.n == 5 and g.r == 3 and g.edges == frozenset([(0, 1, 2)])


def test_write_is_bit_exact():
    g = Hypergraph.from_edges(5, 3, [(2, 1, 0)])
    buf = io.StringIO()
    write_hypergraph(g, buf)
    assert buf.getvalue() == "5 3 1\n0 1 2\n"


def test_round_trip_random():
    rng = random.Random(42)
    for _ in range(10):
        edges = [e for e in itertools.combinations(range(10), 3) if rng.random() < 0.4]
        g = Hypergraph.from_edges(10, 3, edges)
        buf = io.StringIO()
        write_hypergraph(g, buf)
        again = read_hypergraph(io.StringIO(buf.getvalue()))
        assert again == g


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("", 1),
        ("5 3\n", 1),
        ("5 3 1\n0 1 1\n", 2),
        ("5 3 1\n0 2 1\n", 2),
        ("5 3 1\n0 1 9\n", 2),
        ("5 3 2\n0 1 2\n0 1 2\n", 3),
        ("5 3 2\n0 1 2\n", 3),
    ],
)
def test_parse_errors_name_line(text, lineno):
    with pytest.raises(ParseError) as err:
        read_hypergraph(io.StringIO(text))
    assert f"line {lineno}" in str(err.value)


def test_canonical_representative_starts_at_zero():
    rng = random.Random(3)
    for _ in range(10):
        pi = tuple(rng.sample(range(9), 9))
        rep = canonicalize(pi).representative
        assert rep[0] == 0
        assert isinstance(canonicalize(pi), CanonicalCycle)

import io
import itertools
import math
import random

import pytest

from hamforge.errors import (
    DivisibilityViolation,
    InfeasibleParams,
    InvalidParams,
    PartitionFailed,
    RetryBudgetExhausted,
)
from hamforge.geometry import build_spherical_steiner
from hamforge.packing import (
    Packing,
    PackingParams,
    build_random_packing,
    family_from_design,
    family_from_packing,
    leftover_edges,
    partition_into_disjoint_groups,
    read_packing,
    singleton_leftover_family,
    validate_packing,
    write_packing,
)

FEASIBLE = dict(n=60, r=3, k=3, q=8, K=30, M=1, tau=1)


def test_faithful_arithmetic():
    params = PackingParams.faithful(n=100, r=3, k=2, beta=0.45, delta=0.35)
    assert params.q == math.ceil(100**0.45) == 8
    assert params.K == 1996 and params.K % 2 == 0  # ceil(100^1.65) = 1996
    assert params.M == math.floor(100**0.35 / 4) == 1
    assert abs(params.tau_for_size(2) - 100 ** (-0.35) * 6) < 1e-12
    assert abs(params.tau_for_size(1) - 100 ** (-0.35) * math.comb(7, 2)) < 1e-12


def test_faithful_infeasible_m():
    with pytest.raises(InfeasibleParams):
        PackingParams.faithful(n=50, r=3, k=2, beta=0.3, delta=0.1)


def test_direct_params_validation():
    with pytest.raises(InvalidParams):
        PackingParams.direct(n=60, r=3, k=3, q=8, K=31, M=1, tau=1)  # K not multiple
    with pytest.raises(InvalidParams):
        PackingParams.direct(n=60, r=3, k=3, q=8, K=30, M=0, tau=1)


def test_build_feasible_config():
    params = PackingParams.direct(**FEASIBLE)
    packing, stats = build_random_packing(params, random.Random(2), retries=50)
    report = validate_packing(packing, params)
    assert report.ok, report.failed()
    assert packing.K == 30 and packing.k == 3
    # (v): uniform edge count by construction
    assert {len(es) for es in packing.edge_sets} == {packing.z}
    # reassignment keeps at most one owner per edge
    covered = packing.covered_edges()
    assert sum(len(es) for es in packing.edge_sets) == len(covered)


def test_build_self_validates_across_seeds():
    params = PackingParams.direct(**FEASIBLE)
    for seed in range(5):
        packing, _ = build_random_packing(params, random.Random(seed), retries=50)
        assert validate_packing(packing, params).ok


def test_retry_budget_exhausted_reports_failures():
    # edge cap far below what any attempt produces
    params = PackingParams.direct(n=60, r=3, k=3, q=8, K=210, M=3, tau=2)
    with pytest.raises(RetryBudgetExhausted) as err:
        build_random_packing(params, random.Random(0), retries=3)
    assert sum(err.value.failure_counts.values()) == 3


def test_validator_mutations():
    params = PackingParams.direct(**FEASIBLE)
    packing, _ = build_random_packing(params, random.Random(3), retries=50)

    # duplicate one edge across two elements -> disjointness fails
    edges = list(packing.edge_sets)
    donor = next(e for e in edges[1] if set(e) <= set(packing.vertex_sets[1]))
    edges0 = list(edges[0])
    edges0[-1] = donor
    mutated = Packing(
        n=packing.n, r=packing.r, q=packing.q, k=packing.k, z=packing.z,
        vertex_sets=packing.vertex_sets,
        edge_sets=(tuple(edges0),) + tuple(edges[1:]),
    )
    assert "pairwise_edge_disjoint" in validate_packing(mutated, params).failed()

    # removing one edge breaks the uniform edge count
    shrunk = Packing(
        n=packing.n, r=packing.r, q=packing.q, k=packing.k, z=packing.z,
        vertex_sets=packing.vertex_sets,
        edge_sets=(tuple(packing.edge_sets[0][:-1]),) + tuple(packing.edge_sets[1:]),
    )
    assert "v_uniform_edge_count" in validate_packing(shrunk, params).failed()

    # growing an element's vertex set breaks property (i)
    stretched = Packing(
        n=packing.n, r=packing.r, q=packing.q, k=packing.k, z=packing.z,
        vertex_sets=(packing.vertex_sets[0] + (59,),) + tuple(packing.vertex_sets[1:]),
        edge_sets=packing.edge_sets,
    )
    assert "i_element_order" in validate_packing(stretched, params).failed()


def test_leftover_edges_complement():
    params = PackingParams.direct(**FEASIBLE)
    packing, _ = build_random_packing(params, random.Random(4), retries=50)
    leftovers = leftover_edges(packing)
    assert len(leftovers) == math.comb(60, 3) - 30 * packing.z
    covered = packing.covered_edges()
    assert not covered & set(leftovers)
    with pytest.raises(DivisibilityViolation):
        # C(60,3) = 34220 is not a multiple of 3, so k=3 can never split W
        leftover_edges(packing, k=3)


def test_partition_steiner_blocks():
    system = build_spherical_steiner(2, 4)
    groups = partition_into_disjoint_groups(list(system.blocks), 2, vertex_key=lambda b: b)
    assert len(groups) == 340
    seen = set()
    for g in groups:
        assert len(g) == 2
        assert not set(g[0]) & set(g[1])
        seen.update(g)
    assert len(seen) == 680


def test_partition_k1_and_small_leftovers():
    items = list(range(7))
    assert partition_into_disjoint_groups(items, 1, conflict=lambda a, b: True) == [
        [i] for i in items
    ]
    triples = list(itertools.combinations(range(8), 3))
    groups = partition_into_disjoint_groups(triples, 2, vertex_key=lambda e: e)
    assert all(len(g) == 2 and not set(g[0]) & set(g[1]) for g in groups)
    assert sorted(e for g in groups for e in g) == triples


def test_partition_failure_and_divisibility():
    with pytest.raises(DivisibilityViolation):
        partition_into_disjoint_groups([1, 2, 3], 2, conflict=lambda a, b: False)
    # four items forming a clique of conflicts cannot be paired
    with pytest.raises(PartitionFailed):
        partition_into_disjoint_groups(
            [0, 1, 2, 3], 2, conflict=lambda a, b: True, restarts=2, swap_budget=50
        )


def test_family_from_design_complete():
    fam = family_from_design(build_spherical_steiner(3, 2), 1)
    fam.validate()
    assert fam.is_complete()
    assert fam.steiner_q == 3
    assert len(fam.element_groups) == 30
    assert fam.leftover_groups == ()

    fam17 = family_from_design(build_spherical_steiner(2, 4), 2, rng=random.Random(1))
    fam17.validate()
    assert fam17.is_complete() and len(fam17.element_groups) == 340


def test_family_outside_partition_regime():
    # S(3,4,10) blocks are each disjoint from only 3 others, far below the
    # |items| >= (degree+1)*k regime; the typed failure is the contract
    system = build_spherical_steiner(3, 2)
    with pytest.raises(PartitionFailed):
        family_from_design(system, 2, rng=random.Random(1))


def test_family_from_packing_round_trip():
    params = PackingParams.direct(n=40, r=3, k=2, q=6, K=10, M=1, tau=1)
    packing, _ = build_random_packing(params, random.Random(0), retries=30)
    fam = family_from_packing(packing, rng=random.Random(0))
    fam.validate()
    assert fam.is_complete()
    assert len(fam.element_groups) == 5
    assert len(fam.leftover_groups) == (math.comb(40, 3) - 10 * packing.z) // 2
    # JSON round trip
    again = type(fam).from_json_dict(fam.to_json_dict())
    assert again == fam


def test_singleton_family():
    fam = singleton_leftover_family(6, 3)
    fam.validate()
    assert fam.k == 1 and fam.is_complete()


def test_packing_file_round_trip():
    params = PackingParams.direct(**FEASIBLE)
    packing, _ = build_random_packing(params, random.Random(5), retries=50)
    buf = io.StringIO()
    write_packing(packing, buf)
    again = read_packing(io.StringIO(buf.getvalue()))
    assert again == packing
    header = buf.getvalue().splitlines()[0].split()
    assert [int(x) for x in header[:5]] == [60, 3, 8, 30, 3]

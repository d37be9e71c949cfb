"""Good/bad permutation classification and the Monte Carlo estimators for
bad fractions, f-bar, g-bar, and the arithmetic-geometric-mean lower bound
on the expected Hamiltonian count of group-choice builds.

A permutation is good when no group of the family holds two of its windows
in distinct members; f counts the groups its windows touch, g counts cyclic
consecutive window pairs landing inside one family element. All probability
products are carried in log2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from random import Random

from .counting import exact_ham_count, log2_expectation_value
from .errors import (
    FamilyIncomplete,
    FamilyKindMismatch,
    InsufficientGoodSamples,
    InvalidParams,
)
from .hypercore import window_set
from .packing import PartitionedFamily
from .randmodels import DensitySpec, build_quasirandom_from_partition


@dataclass(frozen=True)
class Classification:
    verdict: str  # "good" | "bad"
    f_value: int | None  # groups touched; only for good permutations
    g_value: int  # consecutive window pairs inside one element
    witness: tuple | None = None  # (group_kind, group_index, window_a, window_b)

    @property
    def is_good(self) -> bool:
        return self.verdict == "good"


class FamilyIndex:
    """Edge -> owning group lookup for a partitioned family."""

    def __init__(self, family: PartitionedFamily):
        self.family = family
        self.owner: dict[tuple, tuple] = {}
        for gi, grp in enumerate(family.element_groups):
            for ei, el in enumerate(grp):
                for e in el.edges:
                    self.owner[e] = ("L", gi, ei)
        for gi, grp in enumerate(family.leftover_groups):
            for pos, e in enumerate(grp):
                self.owner[e] = ("W", gi, pos)


def _index_cached(family: PartitionedFamily) -> FamilyIndex:
    # stash on the instance: hashing the nested family per lookup would cost
    # more than the classification itself
    index = family.__dict__.get("_window_index")
    if index is None:
        index = FamilyIndex(family)
        family.__dict__["_window_index"] = index
    return index


def classify(pi, family: PartitionedFamily) -> Classification:
    """Classify a permutation against a family that locates every window."""
    index = _index_cached(family)
    windows = window_set(pi, family.r).windows
    n = len(windows)

    owners = []
    for w in windows:
        owner = index.owner.get(w)
        if owner is None:
            raise FamilyIncomplete(f"window {w} is not locatable in the family")
        owners.append(owner)

    witness = None
    seen_l: dict[int, tuple[int, tuple]] = {}  # L-group -> (element, first window)
    seen_w: dict[int, tuple] = {}  # W-group -> first window
    touched_l: set[int] = set()
    touched_w: set[int] = set()
    for w, owner in zip(windows, owners):
        kind, gi, member = owner
        if kind == "L":
            touched_l.add(gi)
            if gi in seen_l:
                prev_member, prev_w = seen_l[gi]
                if prev_member != member and witness is None:
                    witness = ("L", gi, prev_w, w)
            else:
                seen_l[gi] = (member, w)
        else:
            touched_w.add(gi)
            if gi in seen_w:
                if witness is None and seen_w[gi] != w:
                    witness = ("W", gi, seen_w[gi], w)
            else:
                seen_w[gi] = w

    g_value = 0
    for i in range(n):
        a = owners[i]
        b = owners[(i + 1) % n]
        if a[0] == "L" and b[0] == "L" and a[1] == b[1] and a[2] == b[2]:
            g_value += 1

    if witness is not None:
        return Classification(verdict="bad", f_value=None, g_value=g_value, witness=witness)
    return Classification(
        verdict="good",
        f_value=len(touched_l) + len(touched_w),
        g_value=g_value,
        witness=None,
    )


@dataclass(frozen=True)
class Estimate:
    """Sample mean with a 3-sigma central-limit half-width."""

    mean: float
    ci3: float
    samples: int

    def to_json_dict(self) -> dict:
        return {"mean": self.mean, "ci3": self.ci3, "samples": self.samples}


def _estimate(values) -> Estimate:
    n = len(values)
    if n == 0:
        raise InvalidParams("no samples")
    mean = sum(values) / n
    var = sum((x - mean) ** 2 for x in values) / n
    return Estimate(mean=mean, ci3=3 * math.sqrt(var / n), samples=n)


def _random_permutation(n: int, rng: Random) -> tuple[int, ...]:
    order = list(range(n))
    rng.shuffle(order)
    return tuple(order)


def mc_bad_fraction(family: PartitionedFamily, samples: int, rng: Random) -> Estimate:
    """Unbiased Monte Carlo estimate of the bad-permutation fraction."""
    if samples < 1:
        raise InvalidParams("samples must be >= 1")
    hits = [
        0.0 if classify(_random_permutation(family.n, rng), family).is_good else 1.0
        for _ in range(samples)
    ]
    return _estimate(hits)


@dataclass(frozen=True)
class GbarStarResult:
    mc: Estimate
    exact: float | None  # formula value for Steiner-derived families


def gbar_star_formula(family: PartitionedFamily) -> float:
    """n(q-2)/(n-3) for a family built from a Steiner system S(3, q+1, n)."""
    if family.steiner_q is None:
        raise FamilyKindMismatch("g-bar-star formula needs a Steiner-derived family")
    q = family.steiner_q
    return family.n * (q - 2) / (family.n - 3)


def mc_gbar_star(
    family: PartitionedFamily, samples: int, rng: Random, require_formula: bool = False
) -> GbarStarResult:
    """Mean of g over uniform permutations; exact formula added when the
    family comes from a Steiner system."""
    exact = None
    if family.steiner_q is not None:
        exact = gbar_star_formula(family)
    elif require_formula:
        raise FamilyKindMismatch("g-bar-star formula needs a Steiner-derived family")
    gs = [
        float(classify(_random_permutation(family.n, rng), family).g_value)
        for _ in range(samples)
    ]
    return GbarStarResult(mc=_estimate(gs), exact=exact)


@dataclass(frozen=True)
class EstimateReport:
    """Monte Carlo summary feeding the AM-GM lower bound.

    log2_bound is log2 of (good_fraction * n!/(2n) * p^fbar); bound_linear is
    its float value when representable.
    """

    family_label: str
    n: int
    r: int
    p: DensitySpec
    samples: int
    bad_fraction: Estimate
    fbar: Estimate
    gbar: Estimate
    gbar_star: Estimate
    gbar_star_exact: float | None
    log2_bound: float
    log2_expectation: float
    log2_ratio: float
    seed: int | None = None

    @property
    def bound_linear(self) -> float:
        return 2.0**self.log2_bound if self.log2_bound < 1000 else math.inf

    def to_json_dict(self) -> dict:
        return {
            "family": self.family_label,
            "n": self.n,
            "r": self.r,
            "p": {"num": self.p.num, "den": self.p.den},
            "samples": self.samples,
            "bad_fraction": self.bad_fraction.to_json_dict(),
            "fbar": self.fbar.to_json_dict(),
            "gbar": self.gbar.to_json_dict(),
            "gbar_star": self.gbar_star.to_json_dict(),
            "gbar_star_exact": self.gbar_star_exact,
            "log2_bound": self.log2_bound,
            "log2_E": self.log2_expectation,
            "log2_ratio": self.log2_ratio,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"


def mc_fbar_and_bound(
    family: PartitionedFamily,
    spec: DensitySpec,
    samples: int,
    rng: Random,
    family_label: str = "family",
    seed: int | None = None,
) -> EstimateReport:
    """Estimate f-bar over good permutations and emit the AM-GM lower bound.

    Asserts f <= n - g on every good sample (a structural identity: windows
    inside one element are consecutive at worst).
    """
    if samples < 1:
        raise InvalidParams("samples must be >= 1")
    n = family.n
    bad_hits = []
    f_vals: list[float] = []
    g_good: list[float] = []
    g_all: list[float] = []
    for _ in range(samples):
        cls = classify(_random_permutation(n, rng), family)
        g_all.append(float(cls.g_value))
        if cls.is_good:
            bad_hits.append(0.0)
            if cls.f_value > n - cls.g_value:
                raise AssertionError(
                    f"good permutation with f={cls.f_value} > n-g={n - cls.g_value}"
                )
            f_vals.append(float(cls.f_value))
            g_good.append(float(cls.g_value))
        else:
            bad_hits.append(1.0)
    if not f_vals:
        raise InsufficientGoodSamples(f"no good permutation in {samples} samples")

    bad = _estimate(bad_hits)
    fbar = _estimate(f_vals)
    gbar = _estimate(g_good)
    g_star = _estimate(g_all)
    good_fraction = 1.0 - bad.mean

    ln2 = math.log(2)
    log2_bound = (
        math.log2(good_fraction)
        + math.lgamma(n + 1) / ln2
        - math.log2(2 * n)
        + fbar.mean * math.log2(spec.as_float())
    )
    log2_e = log2_expectation_value(n, spec.as_float())
    exact = gbar_star_formula(family) if family.steiner_q is not None else None
    return EstimateReport(
        family_label=family_label,
        n=n,
        r=family.r,
        p=spec,
        samples=samples,
        bad_fraction=bad,
        fbar=fbar,
        gbar=gbar,
        gbar_star=g_star,
        gbar_star_exact=exact,
        log2_bound=log2_bound,
        log2_expectation=log2_e,
        log2_ratio=log2_bound - log2_e,
        seed=seed,
    )


@dataclass(frozen=True)
class ExpectedHReport:
    """Exact Hamiltonian counts over repeated quasi-random builds."""

    builds: int
    values: tuple[int, ...]
    mean: float
    maximum: int
    log2_expectation: float
    mean_over_expectation: float
    max_over_expectation: float

    def mean_estimate(self) -> Estimate:
        return _estimate([float(v) for v in self.values])

    def to_json_dict(self) -> dict:
        return {
            "builds": self.builds,
            "mean": self.mean,
            "max": self.maximum,
            "log2_E": self.log2_expectation,
            "mean_over_E": self.mean_over_expectation,
            "max_over_E": self.max_over_expectation,
            "values": list(self.values),
        }


def mc_expected_H(
    family: PartitionedFamily,
    spec: DensitySpec,
    build_samples: int,
    rng: Random,
    mem_gib: float | None = None,
) -> ExpectedHReport:
    """Build quasi-random graphs from the family and exact-count each one."""
    if build_samples < 1:
        raise InvalidParams("build_samples must be >= 1")
    values = []
    for _ in range(build_samples):
        graph = build_quasirandom_from_partition(family, spec, rng)
        values.append(exact_ham_count(graph, mem_gib=mem_gib).count)
    mean = sum(values) / len(values)
    ev = 2.0 ** log2_expectation_value(family.n, spec.as_float())
    return ExpectedHReport(
        builds=build_samples,
        values=tuple(values),
        mean=mean,
        maximum=max(values),
        log2_expectation=log2_expectation_value(family.n, spec.as_float()),
        mean_over_expectation=mean / ev,
        max_over_expectation=max(values) / ev,
    )


def ratio_report(mean_h: float, n: int, p: float) -> dict:
    """Ratio of an observed mean count to the expectation value E(n,p)."""
    log2_e = log2_expectation_value(n, p)
    ev = 2.0**log2_e
    return {
        "mean_H": mean_h,
        "log2_E": log2_e,
        "E": ev,
        "ratio": mean_h / ev,
        "log2_ratio": (math.log2(mean_h) if mean_h > 0 else -math.inf) - log2_e,
    }

"""Random walks on the group and their Monte Carlo statistics.

All randomness flows through named PCG64 streams derived from
(seed, trial, stream), so every statistic is a pure function of its
arguments and is reproducible at any worker count.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from math import gcd

import numpy as np

from .coxeter import A2Vector
from .errors import (
    BudgetExhausted,
    InvalidMeasure,
    PrecisionExhausted,
    SingularSegment,
)
from .infinity import flags_opposite
from .isometry import (
    GroupElement,
    attracting_flag,
    cartan_projection,
    classify,
    repelling_flag,
)
from .lattices import Vertex, standard_vertex, vector_distance
from .residues import germ_flag, point_preimage_vertex, residue_opposite

MAX_RECOMMENDED_STEPS = 300
WILSON_Z = 1.96


@dataclass(frozen=True)
class MeasureSpec:
    """Finite symmetric step distribution on type-preserving elements."""

    support: tuple
    weights: tuple
    p: int
    common_denominator: int

    def thresholds(self):
        """Cumulative integer weights on the common-denominator scale."""
        acc = 0
        out = []
        for w in self.weights:
            acc += int(w * self.common_denominator)
            out.append(acc)
        return out

    def to_json(self):
        return {
            "p": self.p,
            "generators": [g.to_json() for g in self.support],
            "weights": [str(w) for w in self.weights],
        }


def measure_spec(pairs, allow_asymmetric=False) -> MeasureSpec:
    """Validate and freeze a step distribution.

    Checks: nonempty support over one prime, positive weights summing to 1,
    type-preserving elements, symmetry (g and g^-1 carry equal weight), and
    a support that moves the building at all (not all scalar matrices).
    Generation of a large group is the caller's assertion and is not
    decidable here.
    """
    if not pairs:
        raise InvalidMeasure("empty support")
    support = tuple(g for g, _ in pairs)
    weights = tuple(Fraction(w) for _, w in pairs)
    p = support[0].p
    if any(g.p != p for g in support):
        raise InvalidMeasure("support elements over different primes")
    if any(w <= 0 for w in weights):
        raise InvalidMeasure("weights must be positive")
    if sum(weights) != 1:
        raise InvalidMeasure(f"weights sum to {sum(weights)}, not 1")
    if any(not g.is_type_preserving for g in support):
        raise InvalidMeasure("support contains a non-type-preserving element")
    if len(set((g.rows, g.den) for g in support)) != len(support):
        raise InvalidMeasure("support contains duplicate elements")
    if all(g.is_scalar() for g in support):
        raise InvalidMeasure("support acts trivially (all scalar matrices)")
    if not allow_asymmetric:
        by_key = {(g.rows, g.den): w for g, w in zip(support, weights)}
        for g, w in zip(support, weights):
            gi = g.inverse()
            if by_key.get((gi.rows, gi.den)) != w:
                raise InvalidMeasure("measure is not symmetric")
    den = 1
    for w in weights:
        den = den * w.denominator // gcd(den, w.denominator)
    if den > 2 ** 62:
        raise InvalidMeasure("weight denominators too large for exact sampling")
    return MeasureSpec(support, weights, p, den)


def forced_spec(g: GroupElement) -> MeasureSpec:
    """Degenerate single-generator test measure (deterministic walk)."""
    return measure_spec([(g, Fraction(1))], allow_asymmetric=True)


def _rng(seed, trial, stream=0):
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((int(seed), int(trial), int(stream))))
    )


def draw_increments(spec: MeasureSpec, n, rng):
    """n i.i.d. support indices via exact integer thresholds."""
    thresholds = spec.thresholds()
    den = spec.common_denominator
    out = []
    for _ in range(n):
        r = int(rng.integers(0, den))
        for idx, t in enumerate(thresholds):
            if r < t:
                out.append(idx)
                break
    return out


@dataclass(frozen=True)
class WalkSample:
    """Increment indices and the left-to-right partial products Z_1..Z_n."""

    increments: tuple
    products: tuple
    seed: int
    n: int


def sample_walk(spec: MeasureSpec, n, seed, trial=0, stream=0) -> WalkSample:
    rng = _rng(seed, trial, stream)
    incs = draw_increments(spec, n, rng)
    products = []
    z = GroupElement.identity(spec.p)
    for i in incs:
        z = z * spec.support[i]
        products.append(z)
    return WalkSample(tuple(incs), tuple(products), seed, n)


def wilson_interval(successes, trials, z=WILSON_Z):
    """Display-only Wilson 95% bounds (floats; never feed exact decisions)."""
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _run_trials(worker, trials, workers):
    if workers <= 1:
        return [worker(t) for t in range(trials)]
    from concurrent.futures import ProcessPoolExecutor

    chunk = max(1, trials // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(worker, range(trials), chunksize=chunk))


def _srh_trial(spec, grid, seed, trial):
    rng = _rng(seed, trial, 0)
    n_max = max(grid)
    incs = draw_increments(spec, n_max, rng)
    out = []
    z = GroupElement.identity(spec.p)
    k = 0
    for n in grid:
        while k < n:
            z = z * spec.support[incs[k]]
            k += 1
        out.append(k > 0 and classify(z).strongly_regular)
    return out


@dataclass(frozen=True)
class ProportionCurve:
    grid: tuple
    trials: int
    successes: tuple
    seed: int

    def rows(self):
        out = []
        for n, k in zip(self.grid, self.successes):
            lo, hi = wilson_interval(k, self.trials)
            out.append(
                {
                    "n": n,
                    "trials": self.trials,
                    "successes": k,
                    "fraction": Fraction(k, self.trials),
                    "wilson_low": lo,
                    "wilson_high": hi,
                }
            )
        return out


def srh_proportion_curve(spec, n_grid, trials, seed, workers=1) -> ProportionCurve:
    """Fraction of trials whose walk product is strongly regular, per n."""
    grid = tuple(sorted(set(int(n) for n in n_grid)))
    if not grid or grid[0] < 0:
        raise ValueError("n grid must be nonnegative")
    if trials <= 0:
        raise ValueError("trials must be positive")
    results = _run_trials(partial(_srh_trial, spec, grid, seed), trials, workers)
    successes = tuple(sum(r[i] for r in results) for i in range(len(grid)))
    return ProportionCurve(grid, trials, successes, seed)


def _drift_trial(spec, n, seed, basepoint, trial):
    walk = sample_walk(spec, n, seed, trial, 0)
    theta = cartan_projection(walk.products[-1], basepoint)
    return tuple(c / n for c in theta.coords())


@dataclass(frozen=True)
class DriftEstimate:
    n: int
    trials: int
    mean: tuple
    spread: tuple
    seed: int

    @property
    def gaps(self):
        return (self.mean[0] - self.mean[1], self.mean[1] - self.mean[2])

    @property
    def regular(self) -> bool:
        return all(g > 0 for g in self.gaps)


def drift_estimate(spec, n, trials, seed, basepoint=None, workers=1) -> DriftEstimate:
    """Componentwise mean of cartan(Z_n, o)/n with per-coordinate ranges."""
    if n <= 0 or trials <= 0:
        raise ValueError("n and trials must be positive")
    o = basepoint or standard_vertex(spec.p)
    results = _run_trials(partial(_drift_trial, spec, n, seed, o), trials, workers)
    mean = tuple(sum(r[i] for r in results) / trials for i in range(3))
    spread = tuple(
        (min(r[i] for r in results), max(r[i] for r in results)) for i in range(3)
    )
    return DriftEstimate(n, trials, mean, spread, seed)


def _germ_or_none(o, v):
    try:
        return germ_flag(o, v)
    except SingularSegment:
        return None


def _converge_trial(spec, n_max, seed, basepoint, trial):
    rng = _rng(seed, trial, 0)
    incs = draw_increments(spec, n_max, rng)
    z = GroupElement.identity(spec.p)
    germs = []
    for i in incs:
        z = z * spec.support[i]
        flag = _germ_or_none(basepoint, z.apply(basepoint))
        germs.append(None if flag is None else (flag.point, flag.line))
    last = germs[-1]
    if last is None:
        return None
    k = n_max
    while k >= 2 and germs[k - 2] == last:
        k -= 1
    return k


@dataclass(frozen=True)
class StabilizationStats:
    n_max: int
    trials: int
    times: tuple
    seed: int

    @property
    def stabilized(self):
        return sum(1 for t in self.times if t is not None)

    @property
    def fraction_stabilized(self) -> Fraction:
        return Fraction(self.stabilized, self.trials)

    def histogram(self):
        counts = {}
        for t in self.times:
            key = "unstabilized" if t is None else t
            counts[key] = counts.get(key, 0) + 1
        return counts


def combinatorial_convergence_stats(
    spec, n_max, trials, seed, basepoint=None, workers=1
) -> StabilizationStats:
    """Distribution of germ stabilization times along the walk.

    The time of a trial is the smallest n0 with the residue germ at the
    basepoint defined and constant on [n0, n_max]; an undefined germ at
    n_max means the trial has not stabilized.
    """
    if n_max <= 0 or trials <= 0:
        raise ValueError("n_max and trials must be positive")
    o = basepoint or standard_vertex(spec.p)
    results = _run_trials(
        partial(_converge_trial, spec, n_max, seed, o), trials, workers
    )
    return StabilizationStats(n_max, trials, tuple(results), seed)


def _opposite_trial(spec, n, seed, basepoint, trial):
    w1 = sample_walk(spec, n, seed, trial, 0)
    w2 = sample_walk(spec, n, seed, trial, 1)
    f1 = _germ_or_none(basepoint, w1.products[-1].apply(basepoint))
    f2 = _germ_or_none(basepoint, w2.products[-1].apply(basepoint))
    return f1 is not None and f2 is not None and residue_opposite(f1, f2)


@dataclass(frozen=True)
class OppositeFrequency:
    n: int
    trials: int
    successes: int
    seed: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.successes, self.trials)

    @property
    def wilson(self):
        return wilson_interval(self.successes, self.trials)


def opposite_pair_frequency(
    spec, n, trials, seed, basepoint=None, workers=1
) -> OppositeFrequency:
    """Frequency of opposite germs for two independent walks at time n."""
    if n <= 0 or trials <= 0:
        raise ValueError("n and trials must be positive")
    o = basepoint or standard_vertex(spec.p)
    results = _run_trials(partial(_opposite_trial, spec, n, seed, o), trials, workers)
    return OppositeFrequency(n, trials, sum(results), seed)


def germ_cylinder_key(o: Vertex, y: Vertex, depth):
    """Germ data along the first `depth` sector steps from o toward y.

    Each step records the residue germ and moves to the preimage vertex of
    its point; a singular germ truncates the key.
    """
    v = o
    parts = []
    for _ in range(depth):
        flag = _germ_or_none(v, y)
        if flag is None:
            parts.append("*")
            break
        parts.append(f"{flag.point}|{flag.line}")
        v = point_preimage_vertex(v, flag.point)
    return tuple(parts)


def _boundary_trial(spec, n, seed, basepoint, depth, trial):
    walk = sample_walk(spec, n, seed, trial, 0)
    z = walk.products[-1]
    key1 = germ_cylinder_key(basepoint, z.apply(basepoint), depth)
    rng = _rng(seed, trial, 1)
    g = spec.support[draw_increments(spec, 1, rng)[0]]
    key2 = germ_cylinder_key(basepoint, (g * z).apply(basepoint), depth)
    return key1, key2


@dataclass(frozen=True)
class BoundaryHistogram:
    n: int
    depth: int
    trials: int
    counts: tuple
    convolved_counts: tuple
    seed: int

    def histogram(self):
        return dict(self.counts)

    @property
    def stationarity_defect(self) -> Fraction:
        """Exact total-variation distance to the one-step convolution."""
        h1, h2 = dict(self.counts), dict(self.convolved_counts)
        keys = set(h1) | set(h2)
        total = sum(abs(h1.get(k, 0) - h2.get(k, 0)) for k in keys)
        return Fraction(total, 2 * self.trials)


def empirical_boundary_measure(
    spec, n, trials, seed, basepoint=None, depth=2, workers=1
) -> BoundaryHistogram:
    """Histogram of depth-k germ cylinders of walk endpoints.

    The convolved histogram resamples one extra left increment per trial,
    estimating the one-step convolution of the empirical law; the TV
    distance between the two is the reported stationarity defect.
    """
    if n <= 0 or trials <= 0 or depth < 0:
        raise ValueError("n, trials must be positive and depth nonnegative")
    o = basepoint or standard_vertex(spec.p)
    results = _run_trials(
        partial(_boundary_trial, spec, n, seed, o, depth), trials, workers
    )
    h1, h2 = {}, {}
    for k1, k2 in results:
        h1[k1] = h1.get(k1, 0) + 1
        h2[k2] = h2.get(k2, 0) + 1
    return BoundaryHistogram(
        n,
        depth,
        trials,
        tuple(sorted(h1.items())),
        tuple(sorted(h2.items())),
        seed,
    )


def independent_pair_check(g1: GroupElement, g2: GroupElement):
    """Attracting/repelling flags of both elements, all pairwise opposite.

    Returns (c1_plus, c1_minus, c2_plus, c2_minus); raises ValueError when
    some pair fails exact transversality.
    """
    flags = (
        attracting_flag(g1),
        repelling_flag(g1),
        attracting_flag(g2),
        repelling_flag(g2),
    )
    for i in range(4):
        for j in range(i + 1, 4):
            if not flags_opposite(flags[i], flags[j]):
                raise ValueError(
                    f"flags {i} and {j} of the candidate pair are not opposite"
                )
    return flags


@dataclass(frozen=True)
class IndependentPair:
    g1: GroupElement
    g2: GroupElement
    flags: tuple
    steps_used: int


def find_independent_srh_pair(spec, seed, budget) -> IndependentPair:
    """Walk the chain until two strongly regular elements have four
    pairwise opposite eigenflags; raises BudgetExhausted otherwise."""
    rng = _rng(seed, 0, 0)
    incs = draw_increments(spec, budget, rng)
    z = GroupElement.identity(spec.p)
    candidates = []
    for step, i in enumerate(incs, start=1):
        z = z * spec.support[i]
        try:
            cls = classify(z)
            if not cls.strongly_regular:
                continue
            cp, cm = attracting_flag(z), repelling_flag(z)
        except PrecisionExhausted:
            continue
        for g_prev, cp_prev, cm_prev in candidates:
            quad = (cp_prev, cm_prev, cp, cm)
            ok = all(
                flags_opposite(quad[a], quad[b])
                for a in range(4)
                for b in range(a + 1, 4)
            )
            if ok:
                return IndependentPair(g_prev, z, quad, step)
        candidates.append((z, cp, cm))
    raise BudgetExhausted(
        f"no independent pair within {budget} steps; the action may be "
        "elementary-looking or the seed unlucky"
    )

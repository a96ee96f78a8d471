"""Convexity calculus: envelopes, lattice constants, mixed-norm inequalities.

The p-norm envelope of a gauge rho is

    lam(f) = inf{ (sum_j rho(f_j)^p)^(1/p) : f = sum_j f_j, f_j >= 0 },

the largest p-homogeneous gauge below rho; together with the exponent
p = 1/(1 + log2 kappa) it turns any quasi-triangle constant into an
equivalent p-norm.  The probes in this module report certified one-sided
bounds with explicit witnesses; none of them prove global constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import BoundResult, Tag
from .errors import InputError
from .gauges import Gauge, Lp, gauge_values_rows
from .measure import (
    MeasureSpace,
    Partition,
    ProductSpace,
    ScalarField,
    conditional_expectation,
    trivial_partition,
)
from .sampling import random_family, random_matrix, random_partition, random_values


def aoki_exponent(kappa: float) -> float:
    """p with 2^(1/p - 1) = kappa, i.e. p = 1/(1 + log2 kappa)."""
    if kappa < 1.0:
        raise InputError("modulus of concavity is never below 1")
    return 1.0 / (1.0 + math.log2(kappa))


# ---------------------------------------------------------------------------
# p-norm envelope
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """A finite decomposition f = sum_j parts[j], all parts nonnegative."""

    parts: Tuple[ScalarField, ...]

    def matrix(self) -> np.ndarray:
        return np.stack([p.values for p in self.parts])

    def check_sums_to(self, f: ScalarField, rtol: float = 1e-12) -> bool:
        tot = self.matrix().sum(axis=0)
        scale = np.maximum(np.abs(f.values), 1.0)
        return bool(np.all(np.abs(tot - f.values) <= rtol * scale))


def _envelope_value(g: Gauge, p: float, space: MeasureSpace, parts: np.ndarray) -> float:
    vals = gauge_values_rows(g, space, parts)
    return float(np.sum(vals**p) ** (1.0 / p))


def p_envelope(
    g: Gauge,
    p: float,
    space: MeasureSpace,
    f: ScalarField,
    budget: int = 64,
    seed: int = 0,
    short_circuit: bool = True,
) -> BoundResult:
    """Upper bound for the p-norm envelope of g at f, with a witness.

    When g is Lp with the same exponent the envelope equals the gauge (the
    p-triangle inequality is already tight), so the trivial decomposition
    is returned exactly.  The generic search combines the trivial and the
    per-atom decompositions with random support splits, proportional splits
    and pairwise mass-transfer refinements; budget counts random candidates.
    """
    if p <= 0:
        raise InputError("envelope exponent p must be > 0")
    if len(f) != len(space):
        raise InputError("field and space atom counts differ")
    vals = np.abs(f.values)
    n = vals.size

    if short_circuit and isinstance(g, Lp) and g.p == p:
        dec = Decomposition((ScalarField(vals),))
        return BoundResult(g.value(space, ScalarField(vals)), Tag.EXACT, witness=dec)

    def evaluate(parts: np.ndarray) -> float:
        keep = parts[np.any(parts > 0, axis=1)]
        if keep.size == 0:
            return 0.0
        return _envelope_value(g, p, space, keep)

    candidates: List[np.ndarray] = [vals[None, :]]
    support = np.where(vals > 0)[0]
    if support.size > 1:
        singletons = np.zeros((support.size, n))
        singletons[np.arange(support.size), support] = vals[support]
        candidates.append(singletons)

    rng = np.random.default_rng(seed)
    for _ in range(int(budget)):
        style = rng.integers(3)
        k = int(rng.integers(2, max(3, min(n, 4)) + 1))
        if style == 0 and support.size > 1:  # random support split
            owner = rng.integers(0, k, size=n)
            parts = np.zeros((k, n))
            parts[owner, np.arange(n)] = vals
        elif style == 1:  # proportional random split
            r = rng.random((k, n)) + 1e-3
            parts = r / r.sum(axis=0, keepdims=True) * vals
        else:  # biased split: heavy part plus remainder
            theta = rng.random(n)
            parts = np.stack([theta * vals, (1 - theta) * vals])
        candidates.append(parts)

    best = math.inf
    best_parts: Optional[np.ndarray] = None
    for parts in candidates:
        v = evaluate(parts)
        if v < best:
            best, best_parts = v, parts

    # pairwise mass-transfer refinement on the incumbent
    parts = best_parts.copy()
    thetas = np.array([0.25, 0.5, 0.75, 1.0])
    for _ in range(int(budget)):
        if parts.shape[0] < 2:
            break
        i, j = rng.choice(parts.shape[0], size=2, replace=False)
        w = int(rng.integers(n))
        if parts[i, w] <= 0:
            continue
        improved = False
        for theta in thetas:
            cand = parts.copy()
            moved = theta * cand[i, w]
            cand[i, w] -= moved
            cand[j, w] += moved
            v = evaluate(cand)
            if v < best * (1.0 - 1e-15):
                best, parts = v, cand
                improved = True
                break
        if not improved:
            continue
    keep = parts[np.any(parts > 0, axis=1)]
    if keep.size == 0:
        keep = vals[None, :]
    dec = Decomposition(tuple(ScalarField(row) for row in keep))
    return BoundResult(best, Tag.UPPER, witness=dec)


# ---------------------------------------------------------------------------
# lattice convexity / concavity probes
# ---------------------------------------------------------------------------

def lattice_constant_probe(
    g: Gauge,
    mode: str,
    p: float,
    space: MeasureSpace,
    trials: int = 1000,
    seed: int = 0,
    max_parts: int = 5,
) -> BoundResult:
    """Largest observed lattice ratio over seeded families: a lower bound.

    mode "convex":  rho((sum f_j^p)^(1/p)) / (sum rho(f_j)^p)^(1/p)
    mode "concave": the reciprocal quotient.
    """
    if mode not in ("convex", "concave"):
        raise InputError("mode must be 'convex' or 'concave'")
    if p <= 0:
        raise InputError("exponent p must be > 0")
    n = len(space)
    rng = np.random.default_rng(seed)
    styles = ("disjoint", "proportional", "random")
    best = 0.0
    best_family: Optional[np.ndarray] = None
    for t in range(int(trials)):
        k = int(rng.integers(2, max_parts + 1))
        fam = random_family(rng, n, k, styles[t % len(styles)])
        if not np.any(fam > 0):
            continue
        combined = (fam**p).sum(axis=0) ** (1.0 / p)
        G = float(gauge_values_rows(g, space, combined[None, :])[0])
        H = float(np.sum(gauge_values_rows(g, space, fam) ** p) ** (1.0 / p))
        if mode == "convex":
            ratio = G / H if H > 0 else 0.0
        else:
            ratio = H / G if G > 0 else 0.0
        if ratio > best:
            best, best_family = ratio, fam
    witness = None
    if best_family is not None:
        witness = tuple(ScalarField(row) for row in best_family)
    return BoundResult(best, Tag.LOWER, witness=witness)


@dataclass(frozen=True)
class LConvexityWitness:
    """A family certifying failure of the epsilon-lattice-convexity test."""

    f: ScalarField
    family: Tuple[ScalarField, ...]
    epsilon: float
    max_part_gauge: float
    gauge_f: float


def l_convexity_probe(
    g: Gauge,
    epsilon: float,
    space: MeasureSpace,
    trials: int = 10000,
    seed: int = 0,
) -> Optional[LConvexityWitness]:
    """Search for f_1..f_k <= f with mean >= (1-eps) f but all gauges < eps g(f).

    Returns a witness when the search finds one, None otherwise (absence of
    a witness is evidence, not proof).  Deterministic bite families (f minus
    one atom per member) are tried before random ones.
    """
    if not (0.0 < epsilon < 1.0):
        raise InputError("epsilon must be in (0, 1)")
    n = len(space)

    def test(fvals: np.ndarray, fam: np.ndarray) -> Optional[LConvexityWitness]:
        if np.any(fam > fvals[None, :] * (1 + 1e-12) + 1e-15):
            return None
        mean = fam.mean(axis=0)
        if np.any(mean < (1.0 - epsilon) * fvals - 1e-12):
            return None
        gf = float(gauge_values_rows(g, space, fvals[None, :])[0])
        if gf <= 0:
            return None
        parts = gauge_values_rows(g, space, fam)
        mx = float(np.max(parts))
        if mx < epsilon * gf:
            return LConvexityWitness(
                f=ScalarField(fvals),
                family=tuple(ScalarField(r) for r in fam),
                epsilon=epsilon,
                max_part_gauge=mx,
                gauge_f=gf,
            )
        return None

    # bite families: remove one atom entirely from each member
    ones = np.ones(n)
    for k in range(2, min(n, 8) + 1):
        fam = np.ones((k, n))
        for j in range(k):
            fam[j, j % n] = 0.0
        w = test(ones, fam)
        if w is not None:
            return w

    rng = np.random.default_rng(seed)
    for _ in range(int(trials)):
        fvals = random_values(rng, n, "uniform") + 0.05
        k = int(rng.integers(2, 9))
        # random bites scaled to respect the mean constraint
        mask = rng.random((k, n)) < rng.uniform(0.05, 0.5)
        delta = rng.uniform(0.0, 1.0)
        fam = fvals[None, :] * (1.0 - delta * mask)
        mean_bite = delta * mask.mean(axis=0)
        if np.any(mean_bite > epsilon):
            continue
        w = test(fvals, fam)
        if w is not None:
            return w
    return None


# ---------------------------------------------------------------------------
# mixed-norm interchange (Minkowski-type) checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MiiReport:
    """One interchange comparison: outer(inner-inside) vs inner(outer-inside).

    lhs = A over the first factor of (B along the second factor),
    rhs = B over the second factor of (A along the first factor).
    """

    lhs: float
    rhs: float
    ratio: float
    shape: Tuple[int, int]


def mii_check(
    gauge_a: Gauge,
    space_a: MeasureSpace,
    gauge_b: Gauge,
    space_b: MeasureSpace,
    f: np.ndarray,
) -> MiiReport:
    """Compare A(B-inside) against B(A-inside) for a matrix field.

    f[i, j] is the value at (atom i of the A-factor, atom j of the B-factor).
    The comparison direction is the one that admits a uniform constant when
    gauge_a is lattice p-convex and gauge_b is lattice p-concave for a
    common p (classical case: A = L2, B = L1 gives lhs <= rhs).
    """
    f = np.abs(np.asarray(f, dtype=float))
    if f.shape != (len(space_a), len(space_b)):
        raise InputError(
            f"matrix shape {f.shape} does not match spaces "
            f"({len(space_a)}, {len(space_b)})"
        )
    inner_b = gauge_values_rows(gauge_b, space_b, f)  # one value per A-atom
    lhs = float(gauge_values_rows(gauge_a, space_a, inner_b[None, :])[0])
    inner_a = gauge_values_rows(gauge_a, space_a, f.T)  # one value per B-atom
    rhs = float(gauge_values_rows(gauge_b, space_b, inner_a[None, :])[0])
    ratio = lhs / rhs if rhs > 0 else 0.0
    return MiiReport(lhs=lhs, rhs=rhs, ratio=ratio, shape=f.shape)


@dataclass(frozen=True)
class MiiSweepReport:
    per_dim: Dict[Tuple[int, int], float]
    max_ratio: float
    witness: np.ndarray
    witness_shape: Tuple[int, int]


def mii_sweep(
    gauge_a: Gauge,
    gauge_b: Gauge,
    dims: Sequence[Tuple[int, int]],
    trials: int = 200,
    seed: int = 0,
    counting: bool = True,
) -> MiiSweepReport:
    """Max interchange ratio over seeded random matrices per dimension pair.

    Identity-like matrices are always included: they are the classical
    family separating the two orders of evaluation.
    """
    rng = np.random.default_rng(seed)
    per_dim: Dict[Tuple[int, int], float] = {}
    overall = 0.0
    witness = np.zeros((1, 1))
    wshape = (1, 1)
    styles = ("identity", "scaled_identity", "uniform", "rank1", "sparse")
    for (m, n) in dims:
        sa = MeasureSpace(np.ones(m)) if counting else MeasureSpace(np.full(m, 1.0 / m))
        sb = MeasureSpace(np.ones(n)) if counting else MeasureSpace(np.full(n, 1.0 / n))
        best = 0.0
        for t in range(int(trials)):
            mat = random_matrix(rng, m, n, styles[t % len(styles)])
            if not np.any(mat > 0):
                continue
            rep = mii_check(gauge_a, sa, gauge_b, sb, mat)
            if rep.ratio > best:
                best = rep.ratio
                if rep.ratio > overall:
                    overall, witness, wshape = rep.ratio, mat, (m, n)
        per_dim[(m, n)] = best
    return MiiSweepReport(per_dim=per_dim, max_ratio=overall, witness=witness, witness_shape=wshape)


# ---------------------------------------------------------------------------
# leveling (conditional-expectation blow-up) probe
# ---------------------------------------------------------------------------

def leveling_constant_probe(
    g: Gauge,
    space: MeasureSpace,
    trials: int = 2000,
    seed: int = 0,
) -> BoundResult:
    """Largest observed rho(E(f | P)) / rho(f) over seeded (f, P) pairs.

    The single-spike field with the trivial partition is probed first; it
    is the extremal pair for averaging-unstable gauges.
    """
    n = len(space)
    triv = trivial_partition(space)
    cand: List[Tuple[np.ndarray, Partition]] = []
    for k in range(n):
        spike = np.zeros(n)
        spike[k] = 1.0
        cand.append((spike, triv))
    cand.append((np.ones(n), triv))
    rng = np.random.default_rng(seed)
    while len(cand) < trials:
        style = ("uniform", "spiky", "sparse")[len(cand) % 3]
        cand.append((random_values(rng, n, style), random_partition(rng, n)))

    best = 0.0
    best_witness: Optional[Tuple[ScalarField, Partition]] = None
    for vals, part in cand[: int(trials)]:
        f = ScalarField(vals)
        gf = g.value(space, f)
        if gf <= 0:
            continue
        ef = conditional_expectation(space, part, f)
        ratio = g.value(space, ScalarField(np.abs(ef.values))) / gf
        if ratio > best:
            best, best_witness = ratio, (f, part)
    return BoundResult(best, Tag.LOWER, witness=best_witness)

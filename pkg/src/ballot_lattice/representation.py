"""Utility representations and rationalizability machinery for ballots.

Everything here is exact: utilities are :class:`fractions.Fraction`,
spatial witnesses carry rational coordinates, and only
:func:`verify_concavity` (a sampling sanity check) drops to floating
point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable, Mapping

import numpy as np

from .order import OrderRelation, RankedBallot, join, meet, relation_of

__all__ = [
    "SUBSET_ENUMERATION_CAP",
    "UtilityAssignment",
    "PairRecord",
    "SpatialWitness",
    "DisjunctionVerdict",
    "ConcavityReport",
    "canonical_utility",
    "is_representation",
    "is_submodular",
    "rationalizability_class",
    "pair_record",
    "Y_set",
    "N_set",
    "extreme_points",
    "theorem3_check",
    "concave_witness",
    "verify_concavity",
]

#: Upper bound on the pairs fed to subset enumeration in theorem3_check.
SUBSET_ENUMERATION_CAP = 20


def _frac(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class UtilityAssignment:
    """Candidate utilities as exact rationals."""

    values: Mapping[str, Fraction]

    def __post_init__(self):
        object.__setattr__(
            self, "values", {str(c): _frac(v) for c, v in dict(self.values).items()}
        )

    def __getitem__(self, candidate: str) -> Fraction:
        return self.values[candidate]

    def __contains__(self, candidate: str) -> bool:
        return candidate in self.values

    def to_dict(self) -> dict[str, str]:
        return {c: str(v) for c, v in sorted(self.values.items())}


def canonical_utility(ballot: RankedBallot) -> UtilityAssignment:
    """Integer utilities k..1 down the ranking, 0 for every unranked candidate.

    Strictly decreasing along the chain and constant on the tail, so the
    assignment mirrors the ballot exactly while staying integer-valued.
    """
    k = len(ballot.ranked)
    values: dict[str, Fraction] = {
        c: Fraction(k - i) for i, c in enumerate(ballot.ranked)
    }
    values.update({c: Fraction(0) for c in ballot.unranked})
    return UtilityAssignment(values)


def is_representation(u: UtilityAssignment, r: OrderRelation) -> bool:
    """Weak preference never drops utility; strict preference strictly raises it."""
    for x in r.candidates:
        for y in r.candidates:
            if r.holds(x, y) and u[x] < u[y]:
                return False
            if r.strictly(x, y) and u[x] <= u[y]:
                return False
    return True


def is_submodular(u: UtilityAssignment, r: OrderRelation) -> bool:
    """``u(meet) + u(join) <= u(x) + u(y)`` wherever the meet exists.

    Pairs without a greatest lower bound are skipped (vacuously fine); a
    pair with a meet but no join cannot satisfy the inequality and fails.
    """
    for x, y in combinations(r.candidates, 2):
        low = meet(r, x, y)
        if low is None:
            continue
        high = join(r, x, y)
        if high is None:
            return False
        if u[low] + u[high] > u[x] + u[y]:
            return False
    return True


@dataclass(frozen=True)
class PairRecord:
    """Set of ordered weak-preference pairs ``(x, y)`` with ``x != y``.

    Tied candidates contribute both directions; strictly ordered ones a
    single direction.
    """

    pairs: frozenset[tuple[str, str]]

    def __post_init__(self):
        pairs = frozenset((str(x), str(y)) for x, y in self.pairs)
        for x, y in pairs:
            if x == y:
                raise ValueError(f"reflexive pair ({x!r}, {y!r}) not allowed in a record")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def candidates(self) -> frozenset[str]:
        return frozenset(c for pair in self.pairs for c in pair)


def pair_record(ballot: RankedBallot) -> PairRecord:
    """Every weak-preference pair on the ballot."""
    r = relation_of(ballot)
    return PairRecord(
        frozenset(
            (x, y)
            for x in r.candidates
            for y in r.candidates
            if x != y and r.holds(x, y)
        )
    )


def Y_set(record: PairRecord) -> frozenset[str]:
    """Candidates weakly preferred to at least one other candidate."""
    return frozenset(x for x, _ in record.pairs)


def N_set(record: PairRecord) -> frozenset[str]:
    """Candidates at least one other candidate is weakly preferred to."""
    return frozenset(y for _, y in record.pairs)


def extreme_points(ballot: RankedBallot, subset: Iterable[str]) -> frozenset[str]:
    """Extreme points of a candidate subset under the ballot's ranking.

    The rule is combinatorial: the best-ranked member, plus every
    unranked member (or the worst-ranked member when none is unranked).
    A subset containing only unranked candidates has no extreme points.
    """
    members = frozenset(subset)
    unknown = members - ballot.candidates
    if unknown:
        raise ValueError(f"unknown candidates {sorted(unknown)}")
    ranked_members = [c for c in ballot.ranked if c in members]
    if not ranked_members:
        return frozenset()
    unranked_members = members & ballot.unranked
    if unranked_members:
        return frozenset({ranked_members[0]}) | unranked_members
    return frozenset({ranked_members[0], ranked_members[-1]})


@dataclass(frozen=True)
class DisjunctionVerdict:
    """Outcome of the record disjunction check (claim T3).

    ``outcome`` is ``"disjunct1"`` (an extreme point outside Y),
    ``"disjunct2"`` (a balanced sub-record inside the extreme points,
    detached from the rest) or ``"fails"``.  ``all_unranked`` flags
    records whose candidates are entirely unranked, the one shape where
    failure is expected.
    """

    outcome: str
    witness: Any
    all_unranked: bool

    @property
    def ok(self) -> bool:
        return self.outcome != "fails"

    def to_dict(self) -> dict:
        witness = self.witness
        if isinstance(witness, tuple):
            witness = [list(p) for p in witness]
        return {
            "disjunct": self.outcome,
            "witness": witness,
            "all_unranked": self.all_unranked,
        }


def theorem3_check(ballot: RankedBallot, sub_record: PairRecord) -> DisjunctionVerdict:
    """Decide which disjunct a nonempty sub-record of the ballot satisfies.

    Disjunct 1 looks for an extreme point outside ``Y``.  Disjunct 2
    searches for a nonempty sub-sub-record whose sources and targets
    coincide, sit inside the extreme points, and share no source with the
    rest; subsets are enumerated in increasing-size, lexicographic order
    so the witness is deterministic.

    Only pairs between unranked candidates can sit in a balanced
    sub-record: among pairs with a ranked source, the best-ranked source
    is never anyone's target, so sources and targets cannot coincide.
    The disjunct-2 enumeration therefore runs over unranked-to-unranked
    pairs only; the no-pruning equivalent lives in the test suite as an
    oracle.

    Raises:
        ValueError: empty sub-record, pairs that are not on the ballot,
            or more enumerable pairs than ``SUBSET_ENUMERATION_CAP``.
    """
    if not sub_record.pairs:
        raise ValueError("sub-record must be nonempty")
    full = pair_record(ballot)
    if not sub_record.pairs <= full.pairs:
        stray = sorted(sub_record.pairs - full.pairs)
        raise ValueError(f"sub-record contains pairs not on the ballot: {stray}")

    cands = sorted(sub_record.candidates())
    all_unranked = all(c in ballot.unranked for c in cands)
    extremes = extreme_points(ballot, cands)
    y_all = Y_set(sub_record)

    for e in sorted(extremes):
        if e not in y_all:
            return DisjunctionVerdict("disjunct1", e, all_unranked)

    base = sorted(
        p for p in sub_record.pairs if p[0] in ballot.unranked and p[1] in ballot.unranked
    )
    if len(base) > SUBSET_ENUMERATION_CAP:
        raise ValueError(
            f"subset enumeration bound exceeded: {len(base)} unranked pairs, "
            f"cap is {SUBSET_ENUMERATION_CAP}"
        )
    for size in range(1, len(base) + 1):
        for subset in combinations(base, size):
            chosen = frozenset(subset)
            sources = frozenset(x for x, _ in chosen)
            targets = frozenset(y for _, y in chosen)
            if sources != targets or not sources <= extremes:
                continue
            rest = sub_record.pairs - chosen
            if sources & frozenset(x for x, _ in rest):
                continue
            return DisjunctionVerdict("disjunct2", subset, all_unranked)
    return DisjunctionVerdict("fails", None, all_unranked)


@dataclass(frozen=True)
class SpatialWitness:
    """Spatial embedding whose squared-distance utility mirrors a ballot.

    Ranked candidates march away from the peak along the first axis and
    the unranked ones share a sphere strictly farther out, so
    ``u(c) = -dist(points[c], peak)^2`` is strictly concave and induces
    exactly the ballot's preferences.
    """

    dimension: int
    peak: tuple[Fraction, ...]
    points: Mapping[str, tuple[Fraction, ...]]

    def __post_init__(self):
        peak = tuple(_frac(v) for v in self.peak)
        points = {
            str(c): tuple(_frac(v) for v in pt) for c, pt in dict(self.points).items()
        }
        if len(peak) != self.dimension:
            raise ValueError("peak dimension mismatch")
        for c, pt in points.items():
            if len(pt) != self.dimension:
                raise ValueError(f"point for {c!r} has wrong dimension")
        if len({pt for pt in points.values()}) != len(points):
            raise ValueError("distinct candidates must map to distinct points")
        object.__setattr__(self, "peak", peak)
        object.__setattr__(self, "points", points)

    def utility(self, candidate: str) -> Fraction:
        return -sum(
            (a - b) ** 2 for a, b in zip(self.points[candidate], self.peak)
        )

    def utilities(self) -> UtilityAssignment:
        return UtilityAssignment({c: self.utility(c) for c in self.points})

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "peak": [str(v) for v in self.peak],
            "points": {
                c: [str(v) for v in pt] for c, pt in sorted(self.points.items())
            },
        }


def _circle_points(count: int, radius: Fraction) -> list[tuple[Fraction, Fraction]]:
    # Rational points on the circle of the given radius via the tangent
    # half-angle parametrization; t = 0, 1, 2, ... never repeats a point.
    out = []
    for t in range(count):
        den = Fraction(1 + t * t)
        out.append((radius * (1 - t * t) / den, radius * 2 * t / den))
    return out


def concave_witness(ballot: RankedBallot) -> SpatialWitness:
    """Build the spatial witness for a ballot.

    Rank ``i`` sits at distance ``i - 1`` from the peak along axis 1, so
    its utility is ``-(i - 1)^2``; the ``m`` unranked candidates sit at
    distinct rational points at common distance ``k`` (the ranked count)
    in the remaining axes, an antipodal pair when ``m == 2`` and points on
    a circle otherwise.  A genuinely regular simplex has no all-rational
    embedding for ``m >= 3``, and equal utility only needs the common
    distance, so exactness wins.
    """
    k = len(ballot.ranked)
    m = len(ballot.unranked)
    dim = max(1, m)
    zero = Fraction(0)
    points: dict[str, tuple[Fraction, ...]] = {}
    for i, c in enumerate(ballot.ranked):
        coords = [zero] * dim
        coords[0] = Fraction(i)
        points[c] = tuple(coords)
    radius = Fraction(k)
    tail = sorted(ballot.unranked)
    if m == 2:
        for c, sign in zip(tail, (1, -1)):
            coords = [zero] * dim
            coords[1] = sign * radius
            points[c] = tuple(coords)
    elif m >= 3:
        for c, (u1, u2) in zip(tail, _circle_points(m, radius)):
            coords = [zero] * dim
            coords[1] = u1
            coords[2] = u2
            points[c] = tuple(coords)
    return SpatialWitness(dim, tuple([zero] * dim), points)


@dataclass(frozen=True)
class ConcavityReport:
    """Outcome of sampled concavity checks; truthy when every trial passed."""

    ok: bool
    trials: int
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "trials": self.trials, "witness": self.witness}


def verify_concavity(
    witness: SpatialWitness,
    trials: int = 1000,
    *,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> ConcavityReport:
    """Sample convex combinations and re-check both concavity inequalities.

    Pairs of distinct points are drawn from the convex hull of the
    embedding; each trial checks the strict-concavity and
    strict-quasiconcavity inequalities at a sampled lambda and at the
    midpoint, with ``tolerance`` of slack on the comparisons.  Identical
    endpoint draws are rejected and resampled.  The quadratic rule is
    concave analytically; this is a floating-point sanity check, not the
    argument.
    """
    names = sorted(witness.points)
    if len(names) < 2:
        # A single embedded point has no distinct pairs to test.
        return ConcavityReport(True, 0)
    pts = np.array([[float(v) for v in witness.points[c]] for c in names])
    peak = np.array([float(v) for v in witness.peak])
    rng = np.random.default_rng(seed)

    def utility(z: np.ndarray) -> np.ndarray:
        d = z - peak
        return -(d * d).sum(axis=1)

    done = 0
    while done < trials:
        batch = min(trials - done, 4096)
        weights = rng.dirichlet(np.ones(len(names)), size=(batch, 2))
        lam = np.clip(rng.uniform(size=batch), 1e-9, 1 - 1e-9)
        x = weights[:, 0, :] @ pts
        y = weights[:, 1, :] @ pts
        keep = ((x - y) ** 2).sum(axis=1) > 1e-18
        if not keep.any():
            continue
        x, y, lam = x[keep], y[keep], lam[keep]
        take = min(trials - done, x.shape[0])
        x, y, lam = x[:take], y[:take], lam[:take]
        ux, uy = utility(x), utility(y)
        for lam_vec in (lam, np.full(take, 0.5)):
            mix = x * lam_vec[:, None] + y * (1 - lam_vec)[:, None]
            umix = utility(mix)
            concave_margin = umix - (lam_vec * ux + (1 - lam_vec) * uy)
            quasi_margin = umix - np.minimum(ux, uy)
            bad = (concave_margin <= -tolerance) | (quasi_margin <= -tolerance)
            if bad.any():
                i = int(np.argmax(bad))
                return ConcavityReport(
                    False,
                    done + i + 1,
                    {
                        "x": x[i].tolist(),
                        "y": y[i].tolist(),
                        "lam": float(lam_vec[i]),
                        "concavity_margin": float(concave_margin[i]),
                        "quasiconcavity_margin": float(quasi_margin[i]),
                    },
                )
        done += take
    return ConcavityReport(True, trials)


def rationalizability_class(u: UtilityAssignment, record: PairRecord) -> str:
    """Strongest of ``strict``, ``almost_strict``, ``rationalizable``, ``none``.

    Strict needs a utility gap on every pair; almost-strict allows
    equality exactly on mutual pairs; rationalizable needs only the weak
    inequalities.
    """
    if not all(u[x] >= u[y] for x, y in record.pairs):
        return "none"
    if all(u[x] > u[y] for x, y in record.pairs):
        return "strict"
    if all(u[x] > u[y] for x, y in record.pairs if (y, x) not in record.pairs):
        return "almost_strict"
    return "rationalizable"

"""Independent reference implementations used only as test oracles.

Everything here re-derives results straight from definitions, without the
shortcuts the production code takes: bound properties are verified by
full scans, the census is built by generate-and-dedup, the disjunction
search enumerates all 2^pairs subsets without pruning, and the
instant-runoff reference recounts every round from scratch.
"""

from __future__ import annotations

from itertools import combinations, permutations

from ballot_lattice.election import ElectionProfile
from ballot_lattice.order import OrderRelation, RankedBallot, relation_of


# ---------------------------------------------------------------------------
# bounds


def _above(rel: OrderRelation, u: str, v: str) -> bool:
    return u == v or rel.strictly(u, v)


def is_least_upper_bound(rel: OrderRelation, x: str, y: str, candidate: str | None) -> bool:
    """Verify a claimed join (or claimed absence) against the definition."""

    def lub(u: str) -> bool:
        if not (_above(rel, u, x) and _above(rel, u, y)):
            return False
        return all(
            _above(rel, v, u)
            for v in rel.candidates
            if _above(rel, v, x) and _above(rel, v, y)
        )

    if candidate is None:
        return not any(lub(u) for u in rel.candidates)
    return lub(candidate)


def is_greatest_lower_bound(rel: OrderRelation, x: str, y: str, candidate: str | None) -> bool:
    """Verify a claimed meet (or claimed absence) against the definition."""

    def glb(u: str) -> bool:
        if not (_above(rel, x, u) and _above(rel, y, u)):
            return False
        return all(
            _above(rel, u, v)
            for v in rel.candidates
            if _above(rel, x, v) and _above(rel, y, v)
        )

    if candidate is None:
        return not any(glb(u) for u in rel.candidates)
    return glb(candidate)


def naive_covers(rel: OrderRelation) -> set[tuple[str, str]]:
    """Covering pairs recomputed from the definition."""
    out = set()
    for x in rel.candidates:
        for y in rel.candidates:
            if not rel.strictly(x, y):
                continue
            if any(rel.strictly(x, z) and rel.strictly(z, y) for z in rel.candidates):
                continue
            out.add((x, y))
    return out


# ---------------------------------------------------------------------------
# census


def naive_census(candidates) -> dict[OrderRelation, RankedBallot]:
    """Generate every ranked prefix of every length and dedup by relation."""
    cands = tuple(sorted(set(candidates)))
    seen: dict[OrderRelation, RankedBallot] = {}
    for k in range(1, len(cands) + 1):
        for prefix in permutations(cands, k):
            ballot = RankedBallot(tuple(prefix), frozenset(cands) - set(prefix))
            seen.setdefault(relation_of(ballot), ballot)
    return seen


def closed_form_count(n: int) -> int:
    """Sum of k-permutations for k = 1..n minus the n-1 block (n >= 2)."""
    fact = lambda m: 1 if m <= 1 else m * fact(m - 1)
    if n == 1:
        return 1
    return sum(fact(n) // fact(n - k) for k in range(1, n + 1)) - fact(n)


# ---------------------------------------------------------------------------
# record disjunction, no pruning


def oracle_extremes(ballot: RankedBallot, members) -> set[str]:
    members = set(members)
    ranked = [c for c in ballot.ranked if c in members]
    if not ranked:
        return set()
    tail = members & set(ballot.unranked)
    if tail:
        return {ranked[0]} | tail
    return {ranked[0], ranked[-1]}


def subset_disjunction_oracle(ballot: RankedBallot, pairs) -> tuple[str, object]:
    """Full 2^|pairs| search, increasing size then lexicographic."""
    pairs = sorted(set(pairs))
    cands = sorted({c for pair in pairs for c in pair})
    extremes = oracle_extremes(ballot, cands)
    y_all = {x for x, _ in pairs}
    for e in sorted(extremes):
        if e not in y_all:
            return ("disjunct1", e)
    for size in range(1, len(pairs) + 1):
        for chosen in combinations(pairs, size):
            sources = {x for x, _ in chosen}
            targets = {y for _, y in chosen}
            if sources != targets or not sources <= extremes:
                continue
            rest = set(pairs) - set(chosen)
            if sources & {x for x, _ in rest}:
                continue
            return ("disjunct2", tuple(chosen))
    return ("fails", None)


def validate_disjunct2_witness(ballot: RankedBallot, pairs, witness) -> bool:
    """Re-check a disjunct-2 witness from the definitions alone."""
    pairs = set(pairs)
    chosen = set(tuple(p) for p in witness)
    if not chosen or not chosen <= pairs:
        return False
    cands = sorted({c for pair in pairs for c in pair})
    extremes = oracle_extremes(ballot, cands)
    sources = {x for x, _ in chosen}
    targets = {y for _, y in chosen}
    rest = pairs - chosen
    return sources == targets and sources <= extremes and not sources & {x for x, _ in rest}


# ---------------------------------------------------------------------------
# instant runoff, stateless recount


def irv_reference(profile: ElectionProfile):
    """Recount every round from the raw ballots; returns (rounds, winner).

    Each round entry is (tallies, eliminated, exhausted) with the same
    tie-break rules as the production tabulator: previous-round tally,
    then smallest id.
    """
    eliminated: list[str] = []
    rounds = []
    while True:
        active = [c for c in profile.candidates if c not in eliminated]
        tallies = {c: 0 for c in active}
        exhausted = 0
        for _, ballot in profile.ballots:
            choice = next((c for c in ballot.ranked if c not in eliminated), None)
            if choice is None:
                exhausted += 1
            else:
                tallies[choice] += 1
        live = len(profile.ballots) - exhausted
        leader = max(active, key=lambda c: tallies[c])
        if live > 0 and 2 * tallies[leader] > live:
            rounds.append((tallies, None, exhausted))
            return rounds, leader
        if len(active) == 1:
            rounds.append((tallies, None, exhausted))
            return rounds, active[0]
        prev = rounds[-1][0] if rounds else {}
        low = min(tallies.values())
        tied = [c for c in active if tallies[c] == low]
        loser = min(tied, key=lambda c: (prev.get(c, 0), c))
        rounds.append((tallies, loser, exhausted))
        eliminated.append(loser)

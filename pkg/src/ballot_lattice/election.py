"""Election ingestion, instant-runoff tabulation and truncation analysis.

Ballots arrive as ``voter_id,rank1,...,rankJ`` CSV rows.  Tabulation is
classic instant runoff with one deliberate stance: unranked candidates
never receive transfers, because leaving candidates off a ballot
expresses indifference between them, not consent to support whichever
survives.  Ballots whose ranked chain is wiped out leave the count as
exhausted.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import combinations, combinations_with_replacement
from pathlib import Path
from typing import Iterable, Mapping

from .checks import check_remark1, is_join_semilattice, is_modular
from .enumeration import enumerate_ballots
from .order import (
    MAX_RELATION_CANDIDATES,
    RankedBallot,
    format_ballot,
    is_complete,
    is_top_truncated,
    is_total,
    relation_of,
)
from .representation import canonical_utility, pair_record, rationalizability_class

__all__ = [
    "ProfileError",
    "ElectionProfile",
    "TabulationRound",
    "TabulationResult",
    "TruncationReport",
    "load_profile",
    "tabulate_irv",
    "truncate_ballot",
    "truncation_experiment",
    "profile_report",
    "find_truncation_sensitive_profile",
    "fixture_path",
]


class ProfileError(ValueError):
    """Malformed election input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        prefix = f"profile csv: line {line}: " if line is not None else "profile csv: "
        super().__init__(prefix + message)
        self.line = line


@dataclass(frozen=True)
class ElectionProfile:
    """A finite election: candidate universe plus one ballot per voter."""

    candidates: tuple[str, ...]
    ballots: tuple[tuple[str, RankedBallot], ...]

    def __post_init__(self):
        cands = tuple(sorted(set(self.candidates)))
        if len(cands) < 3:
            raise ValueError(
                f"an election needs at least three candidates, got {len(cands)}"
            )
        ballots = tuple((str(v), b) for v, b in self.ballots)
        if not ballots:
            raise ValueError("an election needs at least one ballot")
        universe = frozenset(cands)
        seen: set[str] = set()
        for voter, ballot in ballots:
            if voter in seen:
                raise ValueError(f"duplicate voter id {voter!r}")
            seen.add(voter)
            if ballot.candidates != universe:
                raise ValueError(
                    f"ballot for {voter!r} covers {sorted(ballot.candidates)}, "
                    f"not the election's candidates {list(cands)}"
                )
        object.__setattr__(self, "candidates", cands)
        object.__setattr__(self, "ballots", ballots)


def _validate_header(header: list[str]) -> None:
    if not header or header[0].strip() != "voter_id":
        raise ProfileError('header must start with "voter_id"', 1)
    if len(header) < 2:
        raise ProfileError("header needs at least one rank column", 1)
    for i, cell in enumerate(header[1:], start=1):
        if cell.strip() != f"rank{i}":
            raise ProfileError(f'header column {i + 1} must be "rank{i}"', 1)


def load_profile(
    path, *, candidates: Iterable[str] | None = None, fmt: str = "csv"
) -> ElectionProfile:
    """Load an election from ``voter_id,rank1,...,rankJ`` CSV.

    Mentioned candidates are ranked in column order; everything else in
    the universe is unranked.  Without an explicit ``candidates`` list
    the universe is the union of all mentioned candidates.  Blank cells
    may only pad out the end of a row.

    Raises:
        ProfileError: malformed header or row, duplicate voter ids,
            candidates outside the supplied universe, or fewer than three
            candidates overall.
    """
    if fmt != "csv":
        raise ValueError(f"unsupported profile format {fmt!r}")
    rows: list[tuple[int, str, list[str]]] = []
    with Path(path).open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ProfileError("empty file", 1) from None
        _validate_header(header)
        width = len(header)
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) > width:
                raise ProfileError(
                    f"row has {len(row)} cells but the header has {width}", line
                )
            voter = row[0].strip()
            if not voter:
                raise ProfileError("missing voter_id", line)
            ranked: list[str] = []
            blank_seen = False
            for cell in (c.strip() for c in row[1:]):
                if cell:
                    if blank_seen:
                        raise ProfileError(
                            "gap in ranking: blank cell before a filled cell", line
                        )
                    if cell in ranked:
                        raise ProfileError(
                            f"duplicate candidate {cell!r} in ranking", line
                        )
                    ranked.append(cell)
                else:
                    blank_seen = True
            if not ranked:
                raise ProfileError("empty ranking row", line)
            rows.append((line, voter, ranked))
    if not rows:
        raise ProfileError("no ballots in file")

    mentioned = {c for _, _, ranked in rows for c in ranked}
    if candidates is not None:
        universe = set(candidates)
        for line, _, ranked in rows:
            stray = [c for c in ranked if c not in universe]
            if stray:
                raise ProfileError(f"unknown candidate {stray[0]!r}", line)
    else:
        universe = mentioned
    if len(universe) < 3:
        raise ProfileError(f"fewer than 3 candidates overall (got {len(universe)})")

    seen_voters: dict[str, int] = {}
    ballots: list[tuple[str, RankedBallot]] = []
    for line, voter, ranked in rows:
        if voter in seen_voters:
            raise ProfileError(f"duplicate voter_id {voter!r}", line)
        seen_voters[voter] = line
        try:
            ballot = RankedBallot(tuple(ranked), frozenset(universe) - set(ranked))
        except ValueError as exc:
            raise ProfileError(str(exc), line) from None
        ballots.append((voter, ballot))
    return ElectionProfile(tuple(sorted(universe)), tuple(ballots))


@dataclass(frozen=True)
class TabulationRound:
    """One counting round; tallies cover exactly the candidates still standing."""

    tallies: Mapping[str, int]
    eliminated: str | None
    exhausted: int

    def to_dict(self) -> dict:
        return {
            "tallies": {c: self.tallies[c] for c in sorted(self.tallies)},
            "eliminated": self.eliminated,
            "exhausted": self.exhausted,
        }


@dataclass(frozen=True)
class TabulationResult:
    rounds: tuple[TabulationRound, ...]
    winner: str

    def to_dict(self) -> dict:
        return {"rounds": [r.to_dict() for r in self.rounds], "winner": self.winner}


def tabulate_irv(profile: ElectionProfile) -> TabulationResult:
    """Instant-runoff count of a profile.

    Each round counts every ballot for its best-ranked surviving
    candidate; ballots whose ranked chain has been wiped out are
    exhausted and stay out.  A candidate holding a strict majority of the
    live ballots wins; otherwise the lowest tally is eliminated, breaking
    ties by the previous round's tally and then by smallest id.  With a
    single candidate left, that candidate wins.
    """
    chains = [ballot.ranked for _, ballot in profile.ballots]
    cursors = [0] * len(chains)
    active = set(profile.candidates)
    rounds: list[TabulationRound] = []
    prev_tallies: dict[str, int] = {}
    while True:
        tallies = {c: 0 for c in sorted(active)}
        exhausted = 0
        for i, chain in enumerate(chains):
            while cursors[i] < len(chain) and chain[cursors[i]] not in active:
                cursors[i] += 1
            if cursors[i] >= len(chain):
                exhausted += 1
            else:
                tallies[chain[cursors[i]]] += 1
        live = len(chains) - exhausted
        leader = max(tallies, key=tallies.get)
        if live > 0 and 2 * tallies[leader] > live:
            rounds.append(TabulationRound(tallies, None, exhausted))
            return TabulationResult(tuple(rounds), leader)
        if len(active) == 1:
            rounds.append(TabulationRound(tallies, None, exhausted))
            return TabulationResult(tuple(rounds), next(iter(active)))
        low = min(tallies.values())
        tied = [c for c in tallies if tallies[c] == low]
        loser = min(tied, key=lambda c: (prev_tallies.get(c, 0), c))
        rounds.append(TabulationRound(tallies, loser, exhausted))
        active.remove(loser)
        prev_tallies = tallies


def truncate_ballot(ballot: RankedBallot, length: int) -> RankedBallot:
    """Keep the first ``length`` ranked entries; dropped ones become unranked.

    Ballot normalization applies, so truncating to one below the field
    size is a no-op.
    """
    if length < 1:
        raise ValueError("truncation length must be at least 1")
    keep = ballot.ranked[: min(length, len(ballot.ranked))]
    return RankedBallot(keep, frozenset(ballot.candidates) - set(keep))


@dataclass(frozen=True)
class TruncationReport:
    """Tabulations per ballot length plus the length pairs whose winners differ."""

    results: Mapping[int, TabulationResult]
    winner_divergence: tuple[tuple[int, int], ...]

    def winners(self) -> dict[int, str]:
        return {length: result.winner for length, result in sorted(self.results.items())}

    def to_dict(self) -> dict:
        return {
            "results": {str(k): v.to_dict() for k, v in sorted(self.results.items())},
            "winners": {str(k): v for k, v in self.winners().items()},
            "winner_divergence": [list(pair) for pair in self.winner_divergence],
        }


def truncation_experiment(
    profile: ElectionProfile, lengths: Iterable[int]
) -> TruncationReport:
    """Re-tabulate the election at each ballot length and compare winners."""
    wanted = sorted({int(v) for v in lengths})
    if not wanted:
        raise ValueError("no truncation lengths given")
    n = len(profile.candidates)
    for length in wanted:
        if not 1 <= length <= n:
            raise ValueError(f"truncation length {length} outside 1..{n}")
    results: dict[int, TabulationResult] = {}
    for length in wanted:
        truncated = ElectionProfile(
            profile.candidates,
            tuple((voter, truncate_ballot(b, length)) for voter, b in profile.ballots),
        )
        results[length] = tabulate_irv(truncated)
    divergence = tuple(
        (a, b)
        for a, b in combinations(wanted, 2)
        if results[a].winner != results[b].winner
    )
    return TruncationReport(results, divergence)


def profile_report(profile: ElectionProfile) -> dict:
    """Per-ballot structural summaries plus aggregate ranking statistics.

    Ballots are grouped by identical content.  Order-level checks are
    skipped with a note when the candidate universe exceeds the relation
    cap; tabulation itself has no such cap.
    """
    n = len(profile.candidates)
    groups: dict[RankedBallot, list[str]] = {}
    for voter, ballot in profile.ballots:
        groups.setdefault(ballot, []).append(voter)

    entries = []
    total_ranked = 0
    for ballot, voters in sorted(groups.items(), key=lambda kv: format_ballot(kv[0])):
        total_ranked += len(ballot.ranked) * len(voters)
        text = format_ballot(ballot)
        entry: dict = {
            "ballot": text,
            "voters": sorted(voters),
            "count": len(voters),
            "ranked_fraction": str(Fraction(len(ballot.ranked), n)),
        }
        if n <= MAX_RELATION_CANDIDATES:
            rel = relation_of(ballot)
            entry["order"] = {
                "is_top_truncated": is_top_truncated(rel),
                "is_complete": is_complete(rel),
                "is_total": is_total(rel),
            }
            entry["claims"] = [
                report.to_dict()
                for report in (
                    is_join_semilattice(rel, text),
                    is_modular(rel, text),
                    *check_remark1(rel, text),
                )
            ]
            entry["rationalizability"] = rationalizability_class(
                canonical_utility(ballot), pair_record(ballot)
            )
        else:
            entry["order"] = {
                "skipped": (
                    "candidate universe exceeds the relation cap of "
                    f"{MAX_RELATION_CANDIDATES}"
                )
            }
        entries.append(entry)

    mean_fraction = Fraction(total_ranked, n * len(profile.ballots))
    return {
        "candidates": list(profile.candidates),
        "num_ballots": len(profile.ballots),
        "ballot_types": entries,
        "aggregate": {
            "mean_ranked_fraction": str(mean_fraction),
            "mean_ranked_pct": round(float(mean_fraction) * 100, 1),
        },
    }


def find_truncation_sensitive_profile(
    candidates: Iterable[str] = ("a", "b", "c"), max_voters: int = 9
) -> tuple[ElectionProfile, tuple[int, int]] | None:
    """Exhaustively search small profiles for truncation sensitivity.

    Walks profiles in deterministic order (voter count ascending, then
    ballot multisets lexicographically over the census order) and returns
    the first whose instant-runoff winner differs between two truncation
    lengths, together with that length pair.  The bundled fixture at
    :func:`fixture_path` is exactly the first hit for the defaults.
    Returns None when nothing in range diverges.
    """
    cands = tuple(sorted(set(candidates)))
    types = list(enumerate_ballots(cands))
    lengths = range(1, len(cands) + 1)
    for voters in range(1, max_voters + 1):
        for combo in combinations_with_replacement(range(len(types)), voters):
            profile = ElectionProfile(
                cands,
                tuple((f"v{i + 1}", types[t]) for i, t in enumerate(combo)),
            )
            report = truncation_experiment(profile, lengths)
            if report.winner_divergence:
                return profile, report.winner_divergence[0]
    return None


def fixture_path() -> Path:
    """Path of the bundled truncation-sensitivity election."""
    return Path(str(resources.files("ballot_lattice").joinpath("data/truncation_fixture.csv")))

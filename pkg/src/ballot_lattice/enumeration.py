"""Exhaustive ballot census and the claim sweep built on it.

Small candidate sets admit a complete census: every distinct way to rank
a nonempty subset of the field and leave the rest tied.  The sweep runs
every claim checker over the census and aggregates witnessed verdicts, so
the structural claims are machine-checked instead of trusted.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Iterator

from .checks import (
    CLAIM_DESCRIPTIONS,
    FAILS,
    HOLDS,
    VACUOUS,
    check_remark1,
    is_join_semilattice,
    is_modular,
)
from .order import RankedBallot, format_ballot, relation_of
from .representation import (
    PairRecord,
    canonical_utility,
    concave_witness,
    is_representation,
    is_submodular,
    pair_record,
    rationalizability_class,
    theorem3_check,
    verify_concavity,
)

__all__ = [
    "MAX_ENUMERATION_CANDIDATES",
    "SUBRECORD_SWEEP_MAX_N",
    "MUST_CLAIMS",
    "INFORMATIONAL_CLAIMS",
    "SWEEP_CLAIMS",
    "default_candidates",
    "ballot_count",
    "enumerate_ballots",
    "ClaimStats",
    "VerificationSummary",
    "exhaustive_verify",
]

MAX_ENUMERATION_CANDIDATES = 7

#: Sub-record sweeps cost 2^(pair count) per ballot; past this candidate
#: count the record-disjunction claims are skipped.
SUBRECORD_SWEEP_MAX_N = 4

#: Claims evaluated by the sweep, in report order, with descriptions.
SWEEP_CLAIMS = {
    "T1": CLAIM_DESCRIPTIONS["T1"],
    "P1": CLAIM_DESCRIPTIONS["P1"],
    "R1.1": CLAIM_DESCRIPTIONS["R1.1"],
    "R1.2": CLAIM_DESCRIPTIONS["R1.2"],
    "R1.3": CLAIM_DESCRIPTIONS["R1.3"],
    "R1.4": CLAIM_DESCRIPTIONS["R1.4"],
    "C1.repr": "canonical utility represents the ballot order",
    "C1.submod": "canonical utility is submodular",
    "RAT": "canonical utility class is strict exactly on total rankings",
    "T3.full": "the full pair record satisfies the disjunction",
    "T3.sub": "sub-record failures happen only on all-unranked records",
    "T4": "spatial witness has exact utilities, an almost-strict class and passes concavity sampling",
}

#: Claims that must hold on every enumerated ballot for a run to succeed.
MUST_CLAIMS = frozenset(
    {"T1", "P1", "R1.3", "R1.4", "C1.repr", "C1.submod", "RAT", "T3.full", "T4"}
)

#: Claims reported for information only; failures never fail a run.
INFORMATIONAL_CLAIMS = frozenset({"R1.1", "R1.2", "T3.sub"})


def default_candidates(n: int) -> tuple[str, ...]:
    """Single-letter candidate ids ``a``, ``b``, ``c``, ..."""
    if not 1 <= n <= len(string.ascii_lowercase):
        raise ValueError(f"candidate count {n} out of range")
    return tuple(string.ascii_lowercase[:n])


def ballot_count(n: int) -> int:
    """Closed form for the census size.

    Permutations of every prefix length, minus the length ``n - 1`` block
    that normalization folds into the full rankings.
    """
    if n < 1:
        raise ValueError("need at least one candidate")
    if n == 1:
        return 1
    total = 0
    for k in range(1, n + 1):
        if k == n - 1:
            continue
        perms = 1
        for j in range(k):
            perms *= n - j
        total += perms
    return total


def enumerate_ballots(candidates: Iterable[str]) -> Iterator[RankedBallot]:
    """Yield every distinct ballot on the candidate set.

    Deterministic order: ranked-prefix length ascending, then
    lexicographic.  Length ``n - 1`` prefixes are skipped because a lone
    unranked candidate normalizes into the full ranking, which would
    repeat a length-``n`` ballot; each distinct relation therefore shows
    up exactly once.
    """
    cands = tuple(sorted(set(candidates)))
    n = len(cands)
    if not 1 <= n <= MAX_ENUMERATION_CANDIDATES:
        raise ValueError(
            f"enumeration supports 1..{MAX_ENUMERATION_CANDIDATES} candidates, got {n}"
        )
    for k in range(1, n + 1):
        if n > 1 and k == n - 1:
            continue
        for prefix in permutations(cands, k):
            yield RankedBallot(tuple(prefix), frozenset(cands) - set(prefix))


@dataclass
class ClaimStats:
    """Aggregated verdicts for one claim across a sweep."""

    claim: str
    description: str
    must: bool
    holds: int = 0
    fails: int = 0
    vacuous: int = 0
    witnesses: list = field(default_factory=list)

    def record(self, verdict: str, subject: str, witness=None) -> None:
        if verdict == HOLDS:
            self.holds += 1
        elif verdict == FAILS:
            self.fails += 1
            self.witnesses.append({"subject": subject, "witness": witness})
        elif verdict == VACUOUS:
            self.vacuous += 1
        else:
            raise ValueError(f"unknown verdict {verdict!r}")

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "description": self.description,
            "must": self.must,
            "holds": self.holds,
            "fails": self.fails,
            "vacuous": self.vacuous,
            "witnesses": self.witnesses,
        }


@dataclass
class VerificationSummary:
    """Outcome of one exhaustive sweep."""

    n: int
    ballot_count: int
    claims: list[ClaimStats]

    def claim(self, code: str) -> ClaimStats:
        for stats in self.claims:
            if stats.claim == code:
                return stats
        raise KeyError(code)

    @property
    def must_failures(self) -> list[str]:
        return [c.claim for c in self.claims if c.must and c.fails]

    @property
    def ok(self) -> bool:
        return not self.must_failures

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "ballot_count": self.ballot_count,
            "ok": self.ok,
            "must_failures": self.must_failures,
            "claims": [c.to_dict() for c in self.claims],
        }


def _subrecord_violations(
    ballot: RankedBallot, record: PairRecord, limit: int = 5
) -> list[list[list[str]]]:
    """Sub-records that fail the disjunction without being all-unranked."""
    pairs = sorted(record.pairs)
    bad: list[list[list[str]]] = []
    for size in range(1, len(pairs) + 1):
        for chosen in combinations(pairs, size):
            verdict = theorem3_check(ballot, PairRecord(frozenset(chosen)))
            if verdict.outcome == "fails" and not verdict.all_unranked:
                bad.append([list(p) for p in chosen])
                if len(bad) >= limit:
                    return bad
    return bad


def _witness_issues(ballot: RankedBallot, trials: int) -> tuple[list, str]:
    """Check the spatial witness; returns (issues, rationalizability class)."""
    witness = concave_witness(ballot)
    issues = []
    k = len(ballot.ranked)
    for i, c in enumerate(ballot.ranked):
        expected = -Fraction(i * i)
        if witness.utility(c) != expected:
            issues.append({"candidate": c, "got": str(witness.utility(c)), "want": str(expected)})
    for c in ballot.unranked:
        expected = -Fraction(k * k)
        if witness.utility(c) != expected:
            issues.append({"candidate": c, "got": str(witness.utility(c)), "want": str(expected)})
    cls = rationalizability_class(witness.utilities(), pair_record(ballot))
    report = verify_concavity(witness, trials)
    if not report.ok:
        issues.append({"concavity": report.witness})
    return issues, cls


def exhaustive_verify(
    n: int, *, trials: int = 1000, sweep_subrecords: bool | None = None
) -> VerificationSummary:
    """Run every claim over the full ballot census on ``n`` candidates.

    The record-disjunction claims (``T3.*``) cost up to ``2^pairs`` per
    ballot, so by default they run only for ``n <= 4``
    (``SUBRECORD_SWEEP_MAX_N``); pass ``sweep_subrecords`` to override.
    A summary is returned rather than raising, so callers decide how hard
    to fail; ``summary.ok`` is False exactly when a must-hold claim
    failed somewhere.
    """
    stats = {
        code: ClaimStats(code, text, code in MUST_CLAIMS)
        for code, text in SWEEP_CLAIMS.items()
    }
    do_t3 = sweep_subrecords if sweep_subrecords is not None else n <= SUBRECORD_SWEEP_MAX_N
    count = 0
    for ballot in enumerate_ballots(default_candidates(n)):
        count += 1
        subject = format_ballot(ballot)
        rel = relation_of(ballot)

        report = is_join_semilattice(rel, subject)
        stats["T1"].record(report.verdict, subject, report.witness)
        report = is_modular(rel, subject)
        stats["P1"].record(report.verdict, subject, report.witness)
        for report in check_remark1(rel, subject):
            stats[report.claim].record(report.verdict, subject, report.witness)

        util = canonical_utility(ballot)
        stats["C1.repr"].record(
            HOLDS if is_representation(util, rel) else FAILS, subject
        )
        stats["C1.submod"].record(
            HOLDS if is_submodular(util, rel) else FAILS, subject
        )

        record = pair_record(ballot)
        expected_class = "strict" if ballot.is_total() else "almost_strict"
        got_class = rationalizability_class(util, record)
        if got_class == expected_class:
            stats["RAT"].record(HOLDS, subject)
        else:
            stats["RAT"].record(
                FAILS, subject, {"expected": expected_class, "got": got_class}
            )

        if do_t3 and record.pairs:
            verdict = theorem3_check(ballot, record)
            stats["T3.full"].record(
                HOLDS if verdict.ok else FAILS,
                subject,
                None if verdict.ok else verdict.to_dict(),
            )
            violations = _subrecord_violations(ballot, record)
            stats["T3.sub"].record(
                FAILS if violations else HOLDS, subject, violations or None
            )
        else:
            stats["T3.full"].record(VACUOUS, subject)
            stats["T3.sub"].record(VACUOUS, subject)

        issues, got_class = _witness_issues(ballot, trials)
        if not issues and got_class == expected_class:
            stats["T4"].record(HOLDS, subject)
        else:
            stats["T4"].record(
                FAILS,
                subject,
                {"issues": issues, "class": got_class, "expected": expected_class},
            )
    return VerificationSummary(n, count, [stats[code] for code in SWEEP_CLAIMS])

"""Structural claim checkers producing witness-carrying reports.

Each checker returns a :class:`ClaimReport` rather than a bare boolean so
that a failing verdict always points at a concrete pair, triple or
element set that can be replayed against the base predicates in
:mod:`ballot_lattice.order`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .order import (
    OrderRelation,
    atoms,
    coatoms,
    is_complete,
    is_total,
    join,
    join_irreducibles,
    meet_irreducibles,
    transitivity_gap,
)

__all__ = [
    "HOLDS",
    "FAILS",
    "VACUOUS",
    "CLAIM_DESCRIPTIONS",
    "ClaimReport",
    "is_join_semilattice",
    "is_modular",
    "check_remark1",
]

HOLDS = "holds"
FAILS = "fails"
VACUOUS = "vacuous"

#: Human-readable summaries of the claim codes used across the package.
CLAIM_DESCRIPTIONS = {
    "T1": "every pair of candidates has a join",
    "P1": "modular: x tied to (x v y) forces (x v z) tied to ((x v y) v z)",
    "R1.1": "every join-irreducible element is an atom",
    "R1.2": "a join-irreducible element forces a total order",
    "R1.3": "exactly n-1 meet-irreducible elements",
    "R1.4": "co-atom count between 1 and n-1",
}


@dataclass(frozen=True)
class ClaimReport:
    """Outcome of one claim on one relation.

    ``witness`` is None unless ``verdict`` is ``"fails"``, in which case
    it holds the offending pair, triple or element set.
    """

    claim: str
    subject: str
    verdict: str
    witness: Any = None

    @property
    def ok(self) -> bool:
        return self.verdict != FAILS

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "subject": self.subject,
            "verdict": self.verdict,
            "witness": self.witness,
        }


def is_join_semilattice(r: OrderRelation, subject: str | None = None) -> ClaimReport:
    """Claim T1: the relation is an order and every pair has a join.

    Fails with the first transitivity gap when the relation is not even a
    weak order, otherwise with the first pair (in lexicographic order)
    lacking a least upper bound.
    """
    subject = subject or r.digest()
    gap = transitivity_gap(r)
    if gap is not None:
        return ClaimReport(
            "T1", subject, FAILS, {"kind": "not_transitive", "triple": list(gap)}
        )
    for x in r.candidates:
        for y in r.candidates:
            if x <= y and join(r, x, y) is None:
                return ClaimReport(
                    "T1", subject, FAILS, {"kind": "missing_join", "pair": [x, y]}
                )
    return ClaimReport("T1", subject, HOLDS)


def is_modular(r: OrderRelation, subject: str | None = None) -> ClaimReport:
    """Claim P1: strong quasisubmodularity over all triples.

    The premise counts ``x`` equal to ``x v y`` as tied, which is how the
    condition ever fires on a relation without non-trivial ties.  Triples
    whose premise needs a missing join are skipped (the premise cannot be
    evaluated); a missing join in the conclusion is a failure.
    """
    subject = subject or r.digest()
    joins: dict[tuple[str, str], str | None] = {}
    for x in r.candidates:
        for y in r.candidates:
            joins[(x, y)] = join(r, x, y)

    def tied_or_equal(u: str, v: str) -> bool:
        return u == v or r.indifferent(u, v)

    for x in r.candidates:
        for y in r.candidates:
            xy = joins[(x, y)]
            if xy is None or not tied_or_equal(x, xy):
                continue
            for z in r.candidates:
                left = joins[(x, z)]
                right = joins[(xy, z)]
                if left is None or right is None:
                    return ClaimReport(
                        "P1",
                        subject,
                        FAILS,
                        {"kind": "missing_join", "triple": [x, y, z]},
                    )
                if not tied_or_equal(left, right):
                    return ClaimReport(
                        "P1",
                        subject,
                        FAILS,
                        {
                            "kind": "not_modular",
                            "triple": [x, y, z],
                            "left": left,
                            "right": right,
                        },
                    )
    return ClaimReport("P1", subject, HOLDS)


def _first_untotal_pair(r: OrderRelation) -> tuple[str, str] | None:
    for x in r.candidates:
        for y in r.candidates:
            if x < y and not (r.strictly(x, y) or r.strictly(y, x)):
                return (x, y)
    return None


def check_remark1(r: OrderRelation, subject: str | None = None) -> list[ClaimReport]:
    """Evaluate claims R1.1 through R1.4 on one relation.

    R1.1 and R1.2 are vacuous without a join-irreducible element.  The
    checks report what actually holds on the given relation; nothing here
    assumes it came from a ballot.
    """
    subject = subject or r.digest()
    n = len(r.candidates)
    out: list[ClaimReport] = []

    ji = join_irreducibles(r)
    if not ji:
        out.append(ClaimReport("R1.1", subject, VACUOUS))
        out.append(ClaimReport("R1.2", subject, VACUOUS))
    else:
        stray = sorted(ji - atoms(r))
        if stray:
            out.append(
                ClaimReport(
                    "R1.1",
                    subject,
                    FAILS,
                    {"kind": "join_irreducible_not_atom", "elements": stray},
                )
            )
        else:
            out.append(ClaimReport("R1.1", subject, HOLDS))
        if is_complete(r) and is_total(r):
            out.append(ClaimReport("R1.2", subject, HOLDS))
        else:
            pair = _first_untotal_pair(r)
            out.append(
                ClaimReport(
                    "R1.2",
                    subject,
                    FAILS,
                    {"kind": "not_totally_ordered", "pair": list(pair)},
                )
            )

    mi = meet_irreducibles(r)
    if len(mi) == n - 1:
        out.append(ClaimReport("R1.3", subject, HOLDS))
    else:
        out.append(
            ClaimReport(
                "R1.3",
                subject,
                FAILS,
                {
                    "kind": "meet_irreducible_count",
                    "count": len(mi),
                    "expected": n - 1,
                    "elements": sorted(mi),
                },
            )
        )

    cps = coatoms(r)
    if 1 <= len(cps) <= n - 1:
        out.append(ClaimReport("R1.4", subject, HOLDS))
    else:
        out.append(
            ClaimReport(
                "R1.4",
                subject,
                FAILS,
                {
                    "kind": "coatom_count",
                    "count": len(cps),
                    "allowed": [1, n - 1],
                    "elements": sorted(cps),
                },
            )
        )
    return out

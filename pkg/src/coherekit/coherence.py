"""Coherence checking for prevision assessments on conditional random
quantities.

An assessment attaches an exact rational prevision to each quantity of a
finite family.  It is coherent when, for every nonempty subfamily, the
vector of assessed previsions lies in the convex hull of the payoff
points generated by the possible worlds where at least one bet of the
subfamily stands (the all-subfamilies characterization).  The independent
Dutch-book oracle searches, subfamily by subfamily, for a stake vector
whose gain is uniformly positive over those same worlds; one exists
exactly when some hull membership fails.

Symbols appearing in payoffs but assessed nowhere (for instance the
prevision of B|K inside the table of (B|K)|(A|H) when B|K itself is not
part of the family) are treated as unknown previsions ranging over [0,1]
and eliminated exactly: each one may appear in only a single distinct
payoff row of a subfamily, affinely, in which case replacing that moving
row by its endpoint rows is an exact reformulation of the hull test.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .crq import CRQ, payoff_at, support
from .linprog import best_uniform_gain, convex_combination
from .errors import (
    CapExceeded,
    DimensionMismatch,
    EmptySupport,
    MissingSymbol,
    PreconditionFailed,
)
from .events import AtomRegistry, Constituent
from .polynomials import Poly, Rational

DEFAULT_FAMILY_CAP = 12
_CORNER_LIMIT = 3  # unknown symbols allowed per payoff row


def family_cap(override: Optional[int] = None) -> int:
    """Configured family-size cap; COHERE_SUBSET_CAP overrides the default."""
    if override is not None:
        return override
    return int(os.environ.get("COHERE_SUBSET_CAP", DEFAULT_FAMILY_CAP))


class Assessment:
    """An ordered family of quantities with exact assessed previsions.

    The valuation maps every determinable symbol to its value: each
    quantity's own symbol gets its assessed prevision, and linked symbols
    (negations, sums) are solved for in both directions.  Symbols left
    over are the free ones handled by exact elimination.
    """

    def __init__(self, items: Sequence[tuple[CRQ, Rational]]):
        if not items:
            raise PreconditionFailed("assessment needs at least one quantity")
        self.items: tuple[tuple[CRQ, Fraction], ...] = tuple(
            (crq, Fraction(value)) for crq, value in items
        )
        registry = self.items[0][0].registry
        for crq, _ in self.items:
            if crq.registry is not registry:
                raise PreconditionFailed("family members use different registries")
        self.registry: AtomRegistry = registry
        self.valuation: dict[str, Fraction] = self._derive_valuation()
        self.free_symbols: frozenset[str] = frozenset(
            sym
            for crq, _ in self.items
            for _, poly in crq.rows
            for sym in poly.symbols()
            if sym not in self.valuation
        )
        # Called-off analysis per member (fails fast when an inner
        # prevision needed by the support rule is not determined).
        self.supports: tuple[frozenset[Constituent], ...] = tuple(
            support(crq, self.valuation) for crq, _ in self.items
        )
        worlds = registry.constituents()
        self._cells: list[list[Union[Poly, Fraction]]] = []
        for i, (crq, value) in enumerate(self.items):
            live = self.supports[i]
            row: list[Union[Poly, Fraction]] = []
            for c in worlds:
                if c in live:
                    row.append(crq.payoff_poly(c).substitute(self.valuation))
                else:
                    row.append(value)
            self._cells.append(row)

    def _derive_valuation(self) -> dict[str, Fraction]:
        values: dict[str, Fraction] = {}
        for crq, value in self.items:
            values.setdefault(crq.own_symbol, value)
        links: dict[str, Poly] = {}
        for crq, _ in self.items:
            for name, poly in crq.links:
                if name in links and links[name] != poly:
                    raise PreconditionFailed(
                        f"conflicting definitions for linked symbol {name}"
                    )
                links[name] = poly
        changed = True
        while changed:
            changed = False
            for name, poly in links.items():
                unknowns = poly.symbols() - values.keys()
                if name not in values and not unknowns:
                    values[name] = poly.value(values)
                    changed = True
                elif name in values and len(unknowns) == 1:
                    solved = _solve_affine(poly, values, values[name])
                    if solved is not None:
                        sym, value = solved
                        values[sym] = value
                        changed = True
        return values

    @property
    def previsions(self) -> tuple[Fraction, ...]:
        return tuple(value for _, value in self.items)

    def __len__(self) -> int:
        return len(self.items)


def _solve_affine(
    poly: Poly, values: Mapping[str, Fraction], target: Fraction
) -> Optional[tuple[str, Fraction]]:
    """Solve target = poly for its single unknown symbol if affine."""
    reduced = poly.substitute(values)
    unknowns = reduced.symbols()
    if len(unknowns) != 1:
        return None
    (sym,) = unknowns
    if reduced.degree_in(sym) != 1:
        return None
    constant = Fraction(0)
    slope = Fraction(0)
    for mono, coef in reduced.terms.items():
        if mono == ():
            constant = coef
        elif mono == ((sym, 1),):
            slope = coef
        else:  # pragma: no cover - excluded by the degree check
            return None
    if slope == 0:
        return None
    return sym, (target - constant) / slope


# -- point tables -----------------------------------------------------------


@dataclass(frozen=True)
class PointEntry:
    """One payoff point: the world it comes from, the rational vector, and
    the endpoint assignment used when unknown symbols were eliminated."""

    constituent: Constituent
    values: tuple[Fraction, ...]
    corner: Optional[tuple[tuple[str, Fraction], ...]] = None


@dataclass(frozen=True)
class PointTable:
    """Payoff points of a subfamily over its live worlds."""

    subset: tuple[int, ...]
    entries: tuple[PointEntry, ...]
    previsions: tuple[Fraction, ...]

    @property
    def dimension(self) -> int:
        return len(self.subset)

    @property
    def constituents(self) -> tuple[Constituent, ...]:
        seen: list[Constituent] = []
        for entry in self.entries:
            if not seen or seen[-1] is not entry.constituent:
                seen.append(entry.constituent)
        return tuple(seen)

    @property
    def points(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(entry.values for entry in self.entries)


@dataclass(frozen=True)
class SigmaSolution:
    """Nonnegative weights putting the assessed previsions inside the hull."""

    lambdas: tuple[Fraction, ...]

    def verify(self, table: PointTable) -> bool:
        if len(self.lambdas) != len(table.entries):
            return False
        if any(w < 0 for w in self.lambdas) or sum(self.lambdas) != 1:
            return False
        for d in range(table.dimension):
            total = sum(
                w * entry.values[d] for w, entry in zip(self.lambdas, table.entries)
            )
            if total != table.previsions[d]:
                return False
        return True


@dataclass(frozen=True)
class DutchBook:
    """A sure-win combination of bets against an incoherent assessment."""

    subset: tuple[int, ...]
    stakes: tuple[Fraction, ...]
    guaranteed_gain: Fraction


@dataclass(frozen=True)
class CoherenceResult:
    coherent: bool
    witness: Optional[tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.coherent


def _normalize_subset(assessment: Assessment, subset: Iterable[int]) -> tuple[int, ...]:
    indices = tuple(subset)
    if not indices:
        raise PreconditionFailed("subset must be nonempty")
    if len(set(indices)) != len(indices):
        raise PreconditionFailed("subset has repeated indices")
    for i in indices:
        if not 0 <= i < len(assessment):
            raise PreconditionFailed(f"index {i} outside the family")
    return tuple(sorted(indices))


def _subset_entries(
    assessment: Assessment, subset: tuple[int, ...]
) -> list[PointEntry]:
    live_union = frozenset().union(*(assessment.supports[i] for i in subset))
    worlds = [c for c in assessment.registry.constituents() if c in live_union]
    raw: list[tuple[Constituent, tuple[Poly, ...]]] = []
    for c in worlds:
        vec = tuple(Poly.coerce(assessment._cells[i][c.index]) for i in subset)
        raw.append((c, vec))
    # Guard the exact elimination of unknown symbols.
    owners: dict[str, tuple[Poly, ...]] = {}
    for _, vec in raw:
        frees = {sym for poly in vec for sym in poly.symbols()}
        for sym in frees:
            if sym in owners and owners[sym] != vec:
                raise MissingSymbol(
                    f"prevision symbol {sym} is not assessed and appears in "
                    "several distinct payoff rows; it cannot be eliminated"
                )
            owners.setdefault(sym, vec)
        if len(frees) > _CORNER_LIMIT:
            raise MissingSymbol(
                "too many unknown prevision symbols in one payoff row: "
                + ", ".join(sorted(frees))
            )
        for poly in vec:
            if not poly.is_affine_in(frees):
                raise MissingSymbol(
                    "payoff is nonlinear in unknown prevision symbol(s) "
                    + ", ".join(sorted(frees))
                )
    entries: list[PointEntry] = []
    for c, vec in raw:
        frees = sorted({sym for poly in vec for sym in poly.symbols()})
        if not frees:
            entries.append(
                PointEntry(c, tuple(poly.constant_value() for poly in vec))
            )
            continue
        for corner in itertools.product((Fraction(0), Fraction(1)), repeat=len(frees)):
            corner_map = dict(zip(frees, corner))
            values = tuple(poly.value(corner_map) for poly in vec)
            entries.append(PointEntry(c, values, tuple(sorted(corner_map.items()))))
    return entries


def build_points(assessment: Assessment, subset: Iterable[int]) -> PointTable:
    """The payoff points of a subfamily, one per live world (expanded to
    endpoint rows when unknown symbols were eliminated)."""
    indices = _normalize_subset(assessment, subset)
    entries = _subset_entries(assessment, indices)
    if not entries:
        raise EmptySupport("every bet of the subfamily is called off everywhere")
    previsions = tuple(assessment.items[i][1] for i in indices)
    return PointTable(indices, tuple(entries), previsions)


def solve_sigma(
    table: PointTable, previsions: Optional[Sequence[Rational]] = None
) -> Optional[SigmaSolution]:
    """Exact feasibility of the prevision vector as a convex combination of
    the table's points; None when it lies outside the hull."""
    target = (
        table.previsions
        if previsions is None
        else tuple(Fraction(v) for v in previsions)
    )
    if len(target) != table.dimension:
        raise DimensionMismatch("prevision vector does not match table dimension")
    weights = convex_combination(table.points, target)
    if weights is None:
        return None
    solution = SigmaSolution(tuple(weights))
    assert solution.verify(PointTable(table.subset, table.entries, tuple(target)))
    return solution


def subsets_by_size(n: int) -> Iterator[tuple[int, ...]]:
    """All nonempty index subsets, smallest first, lexicographic within size."""
    for size in range(1, n + 1):
        yield from itertools.combinations(range(n), size)


def _check_cap(assessment: Assessment, cap: Optional[int]) -> None:
    limit = family_cap(cap)
    if len(assessment) > limit:
        raise CapExceeded(
            f"family of size {len(assessment)} exceeds the cap of {limit} "
            "(set COHERE_SUBSET_CAP to raise it)"
        )


def check_coherence(assessment: Assessment, cap: Optional[int] = None) -> CoherenceResult:
    """Decide coherence by solving the hull system of every subfamily.

    Returns the smallest failing subfamily (lexicographic within size) as
    witness when incoherent.  Subfamilies whose bets are all called off at
    every world impose no constraint and are skipped.
    """
    _check_cap(assessment, cap)
    for subset in subsets_by_size(len(assessment)):
        entries = _subset_entries(assessment, subset)
        if not entries:
            continue
        target = tuple(assessment.items[i][1] for i in subset)
        if convex_combination([e.values for e in entries], target) is None:
            return CoherenceResult(False, subset)
    return CoherenceResult(True)


def find_dutch_book(assessment: Assessment, cap: Optional[int] = None) -> Optional[DutchBook]:
    """Search independently for a sure-win stake vector (the betting-scheme
    oracle): for each subfamily, maximize the worst-case gain over its live
    worlds subject to unit stake bounds; report the first subfamily with a
    strictly positive optimum."""
    _check_cap(assessment, cap)
    for subset in subsets_by_size(len(assessment)):
        entries = _subset_entries(assessment, subset)
        if not entries:
            continue
        target = tuple(assessment.items[i][1] for i in subset)
        deviations = [
            tuple(entry.values[d] - target[d] for d in range(len(subset)))
            for entry in entries
        ]
        epsilon, stakes = best_uniform_gain(deviations)
        if epsilon > 0:
            return DutchBook(subset, tuple(stakes), epsilon)
    return None

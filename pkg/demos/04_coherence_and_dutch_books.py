"""Coherence checking and Dutch books.

An assessment is coherent when no combination of stakes on its bets
guarantees a positive gain in every world where at least one bet stands.
The engine decides this two independent ways: solving the convex-hull
system of every subfamily, and searching directly for sure-win stakes.
This script shows both on a family of nested conditionals, including the
fact that every point of the unit cube is coherent for
{A|H, C|(A|H), C|(!A|H)} over independent atoms.
"""

from fractions import Fraction

from coherekit import (
    Assessment,
    AtomRegistry,
    TRUE,
    check_coherence,
    conditional_event,
    find_dutch_book,
    iterated_simple,
    negate,
)

registry = AtomRegistry(["A", "C", "H"])
a, c, h = registry.atom("A"), registry.atom("C"), registry.atom("H")

rule = conditional_event(a, h, "x")
nested = iterated_simple(rule, c, "y")
nested_opposite = iterated_simple(negate(rule, "xn"), c, "z")

print("any (x, y, z) in the unit cube is coherent for")
print("{A|H, C|(A|H), C|(!A|H)}; a few corners and interior points:")
for point in [(0, 0, 0), (1, 1, 1), (Fraction(1, 2),) * 3, (1, 0, Fraction(3, 4))]:
    verdict = check_coherence(
        Assessment(list(zip((rule, nested, nested_opposite), point)))
    )
    print(f"   {tuple(str(Fraction(v)) for v in point)}: "
          f"{'coherent' if verdict.coherent else 'incoherent'}")

print("\npricing the conclusion against the premises:")
conclusion = conditional_event(c, TRUE, "pc")
assessment = Assessment([(rule, 1), (nested, 1), (conclusion, 0)])
verdict = check_coherence(assessment)
print("   P(A|H) = 1, P(C|(A|H)) = 1, P(C) = 0 ->",
      "coherent" if verdict.coherent else "incoherent")
print("   failing subfamily:", verdict.witness)

book = find_dutch_book(assessment)
print("   sure-win stakes against it:")
for index, stake in zip(book.subset, book.stakes):
    name = assessment.items[index][0].own_symbol
    print(f"      stake {stake} on {name}")
print(f"   guaranteed gain in every live world: {book.guaranteed_gain}")

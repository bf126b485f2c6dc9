"""Conjunctions of conditionals and iterated conditionals.

Two conditional bets can be compounded: their conjunction pays the
minimum of the two (and its own prevision when both are called off), and
the iterated conditional "(B given K) given (A given H)" prices B|K in a
world where the rule A|H was learned rather than a plain fact.  Both are
payoff tables whose entries are polynomials in the constituent
previsions; coherence then forces the product rule
P[(A|H) and (B|K)] = P[(B|K) given (A|H)] * P(A|H).
"""

from fractions import Fraction

from coherekit import (
    Assessment,
    AtomRegistry,
    check_coherence,
    conditional_event,
    conjunction,
    iterated,
    product_prevision,
)

registry = AtomRegistry(["A", "B", "H", "K"])
a, b, h, k = registry.atoms("A", "B", "H", "K")

rule = conditional_event(a, h, "x")
payout = conditional_event(b, k, "y")

both = conjunction(rule, payout, "z")
print("conjunction (A given H) and (B given K):")
for region, payoff in both.rows:
    print(f"   {str(region):<14} -> {payoff}")

nested = iterated(rule, payout, "mu", "z")
print("\niterated ((B given K) given (A given H)):")
for region, payoff in nested.rows:
    print(f"   {str(region):<14} -> {payoff}")

x, mu = Fraction(1, 2), Fraction(1, 3)
z = product_prevision(x, mu)
print(f"\nwith P(A|H) = {x} and the iterated prevision {mu},")
print(f"the only coherent conjunction prevision is the product {z}:")
for candidate in (z, z + Fraction(1, 10)):
    verdict = check_coherence(
        Assessment([(rule, x), (nested, mu), (both, candidate)])
    )
    print(f"   z = {candidate}: {'coherent' if verdict.coherent else 'incoherent'}")

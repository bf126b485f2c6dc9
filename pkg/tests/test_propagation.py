"""Bound propagation: closed forms, generic extension sweep, decomposition."""

import random
from fractions import Fraction

import pytest

from coherekit.coherence import Assessment, check_coherence
from coherekit.crq import conditional_event, conjunction, iterated, iterated_simple
from coherekit.errors import IncoherentPremises, OutOfRange, PreconditionFailed
from coherekit.events import FALSE, TRUE, AtomRegistry
from coherekit.propagation import (
    ExtensionInterval,
    extension_interval,
    mp_bounds,
    mp_family,
    product_prevision,
    verify_decomposition,
)

F = Fraction


# -- closed forms -------------------------------------------------------------


def test_mp_bounds_samples():
    assert mp_bounds(1, 1).as_tuple() == (F(1), F(1))
    assert mp_bounds(F(1, 2), F(1, 2)).as_tuple() == (F(1, 4), F(3, 4))
    assert mp_bounds(0, F(2, 3)).as_tuple() == (F(0), F(1))
    assert mp_bounds(F(1, 2), F(1, 2)).exactness == "closed-form"


def test_mp_bounds_out_of_range():
    with pytest.raises(OutOfRange):
        mp_bounds(F(3, 2), F(1, 2))
    with pytest.raises(OutOfRange):
        mp_bounds(F(1, 2), F(-1, 10))


def test_product_prevision_samples():
    assert product_prevision(F(1, 2), F(1, 3)) == F(1, 6)
    assert product_prevision(0, F(9, 10)) == 0
    assert product_prevision(1, F(9, 10)) == F(9, 10)
    with pytest.raises(OutOfRange):
        product_prevision(2, F(1, 2))


# -- generic extension sweep ---------------------------------------------------


def test_extension_matches_closed_form_at_half_half():
    premises, target = mp_family(F(1, 2), F(1, 2))
    interval = extension_interval(premises, target)
    assert interval.as_tuple() == (F(1, 4), F(3, 4))
    assert interval.exactness == "certified-by-LP"


def test_extension_classical_reduction():
    nested = extension_interval(*mp_family(F(1, 2), F(1, 2)))
    classical = extension_interval(*mp_family(F(1, 2), F(1, 2), classical=True))
    assert nested.as_tuple() == classical.as_tuple()


def test_extension_point_interval_for_conjunction_target():
    """Premises {A|H = x, (B|K)|(A|H) = mu}; the only coherent prevision
    for the conjunction is the product mu*x."""
    reg = AtomRegistry(["A", "B", "H", "K"])
    a, b, h, k = reg.atoms("A", "B", "H", "K")
    ce_a = conditional_event(a, h, "x")
    ce_b = conditional_event(b, k, "y")
    premise = iterated(ce_a, ce_b, "mu", "zc")
    target = conjunction(ce_a, ce_b, "zc")
    premises = Assessment([(ce_a, F(1, 2)), (premise, F(1, 3))])
    interval = extension_interval(premises, target)
    assert interval.as_tuple() == (F(1, 6), F(1, 6))
    assert interval.exactness == "certified-by-LP"


def test_extension_interval_sandwich():
    premises, target = mp_family(F(1, 2), F(3, 4))
    interval = extension_interval(premises, target)
    low, high = interval.as_tuple()
    assert (low, high) == (F(3, 8), F(7, 8))
    mid = (low + high) / 2
    assert check_coherence(
        Assessment(tuple(premises.items) + ((target, mid),))
    ).coherent
    for outside in (low - F(1, 1000), high + F(1, 1000)):
        if 0 <= outside <= 1:
            assert not check_coherence(
                Assessment(tuple(premises.items) + ((target, outside),))
            ).coherent


def test_extension_requires_coherent_premises():
    premises, target = mp_family(F(1, 2), F(1, 2))
    bad = Assessment(tuple(premises.items) + ((target, F(99, 100)),))
    with pytest.raises(IncoherentPremises):
        extension_interval(bad, conditional_event(target.registry.atom("A"), TRUE, "w"))


def test_extension_grid_agrees_with_closed_form():
    grid = [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]
    for xv in grid:
        for yv in (F(0), F(1, 2), F(1)):
            premises, target = mp_family(xv, yv)
            interval = extension_interval(premises, target)
            closed = mp_bounds(xv, yv)
            assert interval.as_tuple() == closed.as_tuple(), (xv, yv)
            assert interval.exactness == "certified-by-LP"


# -- decomposition --------------------------------------------------------------


def independent_events():
    reg = AtomRegistry(["A", "B", "H", "K"])
    return reg.atoms("A", "B", "H", "K")


def test_decomposition_independent_events():
    a, b, h, k = independent_events()
    assert verify_decomposition(
        a, b, h, k, F(1, 2), F(1, 2), F(1, 4), F(1, 4)
    )


def test_decomposition_fails_off_the_split():
    a, b, h, k = independent_events()
    assert not verify_decomposition(
        a, b, h, k, F(1, 2), F(1, 2), F(1, 4), F(1, 3)
    )


def test_decomposition_random_splits():
    rng = random.Random(11)
    a, b, h, k = independent_events()
    for _ in range(20):
        xv = F(rng.randint(0, 8), 8)
        yv = F(rng.randint(0, 8), 8)
        z1 = yv * F(rng.randint(0, 4), 4)
        z2 = yv - z1
        assert verify_decomposition(a, b, h, k, xv, yv, z1, z2)


def test_decomposition_with_logical_relations():
    reg = AtomRegistry(["A", "B", "D", "H"])
    a, b, d, h = reg.atoms("A", "B", "D", "H")
    cases = [
        (a, b, h, b | d),  # consequent implies its conditioning event
        (a, b, h, h),      # both conditionals share one conditioning event
        (a, a & b, h, d),  # consequents overlap
    ]
    for ev_a, ev_b, ev_h, ev_k in cases:
        assert verify_decomposition(
            ev_a, ev_b, ev_h, ev_k, F(1, 3), F(2, 5), F(1, 5), F(1, 5)
        )


def test_decomposition_sure_conditioning_event():
    """With K the sure event the identity needs no split constraint."""
    reg = AtomRegistry(["A", "B", "H"])
    a, b, h = reg.atoms("A", "B", "H")
    assert verify_decomposition(
        a, b, h, TRUE, F(1, 2), F(1, 2), F(1, 8), F(1, 2) - F(1, 8), registry=reg
    )
    # even an inconsistent split is invisible: no world has both bets void
    assert verify_decomposition(
        a, b, h, TRUE, F(1, 2), F(1, 2), F(0), F(1, 7), registry=reg
    )


def test_decomposition_rejects_impossible_conditioning():
    a, b, h, k = independent_events()
    with pytest.raises(PreconditionFailed):
        verify_decomposition(a, b, h & ~h, k, F(1, 2), F(1, 2), F(1, 4), F(1, 4))

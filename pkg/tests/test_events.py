from dataclasses import replace
from fractions import Fraction

import mpmath
import pytest

from core.errors import InputError, NoFrontFacetReachable, NotAnEvent
from core.lattice import PathSpec, ThetaSpec, box_at, primal_lattice
from core.minima import LatticePoint, MinimaResult, box_norm, successive_minima
from core.scale import ScaleValue
from tools.event_tool import (
    Event,
    EventRelationReport,
    companion_scale,
    dedupe_events,
    front_facet_events,
    shrink_to_event,
    verify_event_relations,
)

FIBONACCI = {1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233}


def test_shrink_on_zero_theta(zero_primal):
    lattice, path = zero_primal(1)
    event = shrink_to_event(lattice, path, 3)
    assert event.mu == 1
    assert event.u == 3 and event.lambda1 == Fraction(1, 3)
    assert event.witness.coefficients == (1, 0)


def test_shrink_prefers_largest_first_coordinate(third):
    event = shrink_to_event(third, PathSpec.primal(1, 1), 3)
    assert event.lambda1 == 1 and event.u == 3
    assert event.witness.coefficients == (3, 1)
    assert event.witness.coordinates == (3, 0)


def test_shrink_lands_on_front_facet(golden):
    path = PathSpec.primal(1, 1)
    for u in (Fraction(7, 2), Fraction(12), Fraction(77, 3)):
        event = shrink_to_event(golden, path, u)
        assert event.mu <= 1
        assert event.u <= u
        box = box_at(path, event.u)
        assert successive_minima(golden, box, 1).lambda_1 == event.lambda1
        assert box_norm(event.witness, box) == event.lambda1
        assert ScaleValue(abs(event.witness.coordinates[0])) == event.lambda1 * box.half_widths[0]


def test_no_front_facet_on_dual_path(z2):
    with pytest.raises(NoFrontFacetReachable):
        shrink_to_event(z2, PathSpec.dual(1, 1), 2)


def test_shrink_needs_axis_path(z3):
    with pytest.raises(InputError):
        shrink_to_event(z3, PathSpec((1, 1, -2), 1), 2)
    with pytest.raises(InputError):
        shrink_to_event(z3, PathSpec.primal(1, 1), 2)


def test_zero_theta_has_one_event(zero_primal):
    lattice, path = zero_primal(1)
    events = front_facet_events(lattice, path, Fraction(2), Fraction(50), 10)
    assert len(events) == 1
    assert events[0].witness.coefficients == (1, 0)
    assert events[0].u == 2


def test_rational_theta_settles_on_denominator():
    lattice = primal_lattice(ThetaSpec.from_strings(["rat:22/7"]), 1)
    events = front_facet_events(lattice, PathSpec.primal(1, 1), Fraction(10), Fraction(1000), 20)
    assert [event.witness.coefficients for event in events] == [(7, 22)]


def test_golden_events_are_convergents(golden):
    events = front_facet_events(golden, PathSpec.primal(1, 1), Fraction(2), Fraction(200), 80)
    xs = [event.witness.coefficients[0] for event in events]
    assert set(xs) <= FIBONACCI
    assert {3, 5, 8, 13} <= set(xs)
    assert [event.u for event in events] == sorted(event.u for event in events)
    assert len(set(xs)) == len(xs)


def test_dedupe_keeps_smallest_u(z2):
    witness = LatticePoint.from_coefficients(z2, (1, 0))
    other = LatticePoint.from_coefficients(z2, (0, 1))
    late = Event(ScaleValue(5), ScaleValue(1), witness)
    early = Event(ScaleValue(3), ScaleValue(1), witness)
    middle = Event(ScaleValue(4), ScaleValue(1), other)
    assert dedupe_events([late, None, middle, early]) == [early, middle]


def test_companion_scale(z3):
    path = PathSpec.primal(1, 2)
    witness = LatticePoint.from_coefficients(z3, (1, 0, 0))
    second = LatticePoint.from_coefficients(z3, (0, 1, 0))
    event = Event(ScaleValue(2), ScaleValue(1), witness)
    minima = MinimaResult(2, (ScaleValue(1), ScaleValue(2)), (witness, second))
    assert companion_scale(event, 2, minima, path) == ScaleValue(1, 4, 3)
    assert companion_scale(event, 1, minima, path) == 2
    assert companion_scale(event, 2, minima, PathSpec.dual(1, 2)) == ScaleValue(1, 16, 3)
    with pytest.raises(InputError):
        companion_scale(event, 3, minima, path)


def test_companion_scale_below_domain(z3):
    witness = LatticePoint.from_coefficients(z3, (1, 0, 0))
    event = Event(ScaleValue(Fraction(3, 2)), ScaleValue(1), witness)
    minima = MinimaResult(2, (ScaleValue(1), ScaleValue(64)), (witness, witness))
    with pytest.raises(InputError):
        companion_scale(event, 2, minima, PathSpec.primal(1, 2))


def test_event_relations_hold_for_golden(golden):
    path = PathSpec.primal(1, 1)
    events = front_facet_events(golden, path, Fraction(3), Fraction(300), 60)
    assert events
    for event in events:
        report = verify_event_relations(golden, path, event, 2)
        assert report.passed, report.as_dict()
        assert report.u1 <= report.u0
        assert report.brackets_hold, report.as_dict()["brackets"]
        assert abs(report.s1 - report.s1_predicted) < 1e-20


def test_event_relations_dual(sqrt2_dual):
    path = PathSpec.dual(1, 1)
    events = front_facet_events(sqrt2_dual, path, Fraction(2), Fraction(100), 60)
    assert events
    assert all(event.u <= 100 for event in events)
    for event in events:
        report = verify_event_relations(sqrt2_dual, path, event, 2)
        assert report.mode == "dual"
        assert report.passed, report.as_dict()
        assert report.brackets_hold, report.as_dict()["brackets"]
        assert report.u1 >= report.u0


def test_brackets_at_ratio_one_hold_at_working_precision():
    # the value sits 1e-28 under its lower end; 0.1 rounds up at double precision
    with mpmath.workdps(30):
        value = mpmath.mpf("0.1")
        below = value - mpmath.mpf("1e-28")
        above = value + mpmath.mpf("1e-19")
    report = EventRelationReport(
        "primal", 2, ScaleValue(2), ScaleValue(3), value, value, value,
        ScaleValue(1), ScaleValue(1), ScaleValue(1), (ScaleValue(1),), (True,),
        (("eq:core_psied", value, below, value),),
    )
    assert report.brackets_hold
    assert not replace(report, brackets=(("eq:core_psied", above, value, above),)).brackets_hold


def test_off_facet_event_is_rejected(golden):
    path = PathSpec.primal(1, 1)
    event = shrink_to_event(golden, path, 12)
    moved = Event(event.u * 2, event.lambda1, event.witness)
    with pytest.raises(NotAnEvent):
        verify_event_relations(golden, path, moved, 2)

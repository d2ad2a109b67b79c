from fractions import Fraction

import pytest

from core.errors import HypothesisViolation, InputError
from core.minima import LatticePoint
from tools.lemma_tool import (
    LemmaInstance,
    generate_instance,
    lemma_core_check,
    random_unimodular_lattice,
    run_lemma_trials,
)


def instance_on_z2(z2, lam, half_widths=(1, 1), v=(1, 0), p=2) -> LemmaInstance:
    point = LatticePoint.from_coefficients(z2, v)
    return LemmaInstance(z2, tuple(Fraction(h) for h in half_widths), Fraction(lam), p, point, "z2")


def test_unit_square(z2):
    report = lemma_core_check(instance_on_z2(z2, 1))
    assert report.passed
    assert [point.coefficients for point in report.constructed] == [(0, 1)]
    assert report.floor_coefficients == (0,)


def test_floor_coefficient_reaches_lambda(z2):
    companion = LatticePoint.from_coefficients(z2, (3, 1))
    report = lemma_core_check(instance_on_z2(z2, 3), companions=[companion])
    assert report.floor_coefficients == (3,)
    assert report.constructed[0].coordinates == (0, 1)
    assert report.passed


def test_negative_companion_is_flipped(z2):
    companion = LatticePoint.from_coefficients(z2, (-2, 1))
    report = lemma_core_check(instance_on_z2(z2, 2), companions=[companion])
    assert report.floor_coefficients == (2,)
    assert report.constructed[0].coefficients == (0, -1)


@pytest.mark.parametrize("kwargs", [
    {"lam": 1, "half_widths": (2, 1)},
    {"lam": Fraction(1, 2)},
    {"lam": 1, "p": 3},
])
def test_hypotheses_rejected(z2, kwargs):
    with pytest.raises(HypothesisViolation):
        lemma_core_check(instance_on_z2(z2, **kwargs))


def test_companion_outside_p2(z2):
    companion = LatticePoint.from_coefficients(z2, (0, 5))
    with pytest.raises(HypothesisViolation):
        lemma_core_check(instance_on_z2(z2, 2), companions=[companion])


def test_random_lattices_are_unimodular():
    for seed in range(10):
        lattice = random_unimodular_lattice(seed, 4, denominator_bound=3)
        assert abs(lattice.determinant()) == 1
    assert random_unimodular_lattice("a", 3) == random_unimodular_lattice("a", 3)
    with pytest.raises(InputError):
        random_unimodular_lattice(0, 1)


def test_generated_instances_satisfy_hypotheses():
    for d in (2, 3, 4):
        instance = generate_instance(f"gen:{d}", d)
        assert instance.v.coordinates[0] == instance.half_widths[0]
        assert all(abs(z) <= h for z, h in zip(instance.v.coordinates, instance.half_widths))
        assert 2 <= instance.p <= d and instance.lam >= 1
        assert lemma_core_check(instance).passed


def test_trial_suite():
    result = run_lemma_trials("suite", 30)
    assert result.rejected == 0
    assert not result.violations
    assert result.summary == "30/30 pass"
    assert result.as_dict()["passed_trials"] == 30


def test_trial_suite_is_deterministic():
    first = run_lemma_trials("again", 6, dims=(3,))
    assert first == run_lemma_trials("again", 6, dims=(3,))


def test_trial_suite_arguments():
    with pytest.raises(InputError):
        run_lemma_trials("x", 0)
    with pytest.raises(InputError):
        run_lemma_trials("x", 3, dims=(1,))

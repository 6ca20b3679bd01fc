import numpy as np
import pytest

from hsflow import grid_calculus as gc
from hsflow import initial_data
from hsflow import triple_algebra as ta
from hsflow.errors import NotPositive, ValidationError

LAT = gc.Lattice((16, 4, 4, 4))


def test_standard_generator():
    tf = initial_data.generate_initial(LAT, "hyperkahler-standard")
    q, g, mu = gc.pointwise_normalize(tf)
    assert np.abs(q - np.eye(3)).max() == 0.0
    assert tf.max_dabs() == 0.0


def test_zero_amplitude_equals_standard():
    tf = initial_data.generate_initial(LAT, "t3-invariant", amplitude=0.0, seed=3)
    ref = initial_data.generate_initial(LAT, "hyperkahler-standard")
    assert np.array_equal(tf.c, ref.c)


def test_t3_invariant_depends_on_x0_only():
    tf = initial_data.generate_initial(LAT, "t3-invariant", 0.05, seed=7)
    assert tf.max_dabs() <= 1e-11
    for axis in (1, 2, 3):
        rolled = np.roll(tf.c, 1, axis=axis)
        assert np.abs(rolled - tf.c).max() == 0.0
    # actually non-constant along x0
    assert np.abs(np.roll(tf.c, 1, axis=0) - tf.c).max() > 1e-4


def test_exact_perturbation_periods_unchanged():
    tf = initial_data.generate_initial(LAT, "exact-perturbation", 0.05, seed=11)
    ref = initial_data.generate_initial(LAT, "hyperkahler-standard")
    assert tf.max_dabs() <= 1e-11
    assert np.abs(tf.periods() - ref.periods()).max() <= 1e-13
    # the perturbation is genuinely four-dimensional
    assert any(np.abs(np.roll(tf.c, 1, axis=a) - tf.c).max() > 1e-6
               for a in (1, 2, 3))


def test_seed_reproducible():
    a = initial_data.generate_initial(LAT, "exact-perturbation", 0.05, seed=5)
    b = initial_data.generate_initial(LAT, "exact-perturbation", 0.05, seed=5)
    c = initial_data.generate_initial(LAT, "exact-perturbation", 0.05, seed=6)
    assert np.array_equal(a.c, b.c)
    assert not np.array_equal(a.c, c.c)


def test_unknown_generator():
    with pytest.raises(ValidationError):
        initial_data.generate_initial(LAT, "nope")


def test_overlarge_amplitude_reports_admissible():
    with pytest.raises(NotPositive, match="max admissible amplitude"):
        initial_data.generate_initial(LAT, "t3-invariant", 5.0, seed=7)


def test_reported_admissible_amplitude_works():
    try:
        initial_data.generate_initial(LAT, "t3-invariant", 5.0, seed=7)
    except NotPositive as exc:
        admissible = float(str(exc).rsplit("about", 1)[1])
    tf = initial_data.generate_initial(LAT, "t3-invariant", admissible, seed=7)
    assert tf.max_dabs() <= 1e-11

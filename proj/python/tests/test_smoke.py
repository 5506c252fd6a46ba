import math

import pytest

import pycasimir as pc


def test_pair_closed():
    e = pc.pair_energy(1.0, 1.0)
    assert e["value"] == pytest.approx(-23 / (4 * math.pi), rel=1e-14)


def test_pair_rspace_sum_cold():
    e = pc.pair_energy(1.0, 1.0, beta=1e6, route="rspace")
    assert e["value"] == pytest.approx(-1.8302822, rel=1e-4)


def test_pair_closed_rejects_temperature():
    with pytest.raises(ValueError):
        pc.pair_energy(1.0, 1.0, beta=1.0, route="closed")


def test_kernels():
    d, delta = pc.kernels_r(1.0, 1.0)
    assert d == pytest.approx(7 / 3 * math.exp(-1), rel=1e-12)
    assert delta == pytest.approx(-2 / 3 * math.exp(-1), rel=1e-12)


def test_matsubara_callable():
    s = pc.matsubara_sum(lambda k: 1.0 / (1.0 + k * k), 2 * math.pi)
    assert s["value"] == pytest.approx(math.pi / math.tanh(math.pi), rel=1e-8)
    assert pc.oscillator_sum_closed(2.0, 1.0) == pytest.approx(1 / math.tanh(1.0), rel=1e-12)


def test_sphere_hardcore_sweep():
    r_mins = [10 ** (-4 + 0.25 * i) for i in range(9)]
    sw = pc.sphere_energy_hardcore_sweep(1.0, 0.1, r_mins)
    assert sw["fit"]["finite_1_over_a"] == pytest.approx(pc.finite_part_prediction(1.0, 0.1), rel=1e-2)


def test_sphere_exponential():
    e = pc.sphere_energy(1.0, 0.1, "exp", 0.3)
    assert e["total"] < 0.0


def test_self_energy_and_dielectric():
    assert pc.self_energy(0.1, 1.0, 1.0)["value"] == pytest.approx(-1.51982e-2, rel=1e-5)
    assert pc.dielectric(0.1 / (4 * math.pi))["epsilon"] == pytest.approx(1 / 0.9, rel=1e-12)


def test_numerical_error_type():
    with pytest.raises(pc.NumericalError):
        pc.sphere_energy_hardcore_sweep(1.0, 0.1, [1e-3] * 6)

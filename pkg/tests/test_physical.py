import math

import pytest

from rydjt.physical import (
    SPECIES_MASS_KG,
    PhysicalParams,
    classical_distortion,
    facilitation_detuning,
    kappa_from_physical,
    report,
    vdw_gradient,
)


@pytest.fixture
def k39():
    return PhysicalParams.from_lab(trap_hz=70e3, spacing_um=5.0, c6_ghz_um6=88.0, species="K39")


def test_oscillator_length(k39):
    assert k39.x_ho * 1e9 == pytest.approx(60.88, abs=0.01)


def test_gradient_and_distortion(k39):
    assert vdw_gradient(k39) == pytest.approx(6.76e-3, rel=1e-2)
    assert classical_distortion(k39) * 1e9 == pytest.approx(350, rel=5e-2)


def test_distortion_consistent_with_kappa(k39):
    # |dr| = sqrt(2) kappa/omega x_ho
    _, ratio = kappa_from_physical(k39)
    assert classical_distortion(k39) == pytest.approx(math.sqrt(2) * ratio * k39.x_ho, rel=1e-12)


def test_detuning(k39):
    assert facilitation_detuning(k39) / (2 * math.pi) / 1e6 == pytest.approx(-5.632, abs=1e-3)


def test_gradient_scaling():
    a = PhysicalParams.from_lab(trap_hz=70e3, spacing_um=5.0, species="K39")
    b = PhysicalParams.from_lab(trap_hz=70e3, spacing_um=10.0, species="K39")
    assert vdw_gradient(a) / vdw_gradient(b) == pytest.approx(2**7)


def test_report_keys(k39):
    r = report(k39)
    assert set(r) == {"x_ho_nm", "kappa_over_omega", "distortion_nm", "detuning_mhz",
                      "vdw_gradient_ghz_per_um"}
    assert r["kappa_over_omega"] == pytest.approx(4.156, abs=1e-3)


def test_validation():
    with pytest.raises(KeyError):
        PhysicalParams.from_lab(trap_hz=70e3, spacing_um=5.0, species="Xe")
    with pytest.raises(ValueError):
        PhysicalParams(SPECIES_MASS_KG["K39"], -1.0, 5e-6, 88.0)
    with pytest.raises(ValueError):
        PhysicalParams(SPECIES_MASS_KG["K39"], 1.0, 5e-6, -1.0)

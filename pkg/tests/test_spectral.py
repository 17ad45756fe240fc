"""Numerical cross-checks: torus spectra, fiber unions, flat bands."""

import numpy as np
import pytest
from gmpy2 import mpq

from conftest import random_potential, seeded
from fermicert.errors import SizeLimitExceeded
from fermicert.models import FlatBandState, lieb_flat_band_state, lieb_model, zd_model
from fermicert.spectral import (
    band_csv,
    band_functions,
    dispersion_root_check,
    flat_band_check,
    floquet_union,
    torus_matrix,
    torus_spectrum,
)


def test_torus_spectrum_small_ring():
    # 4-site ring: eigenvalues 2*cos(2*pi*m/4) = 2, 0, 0, -2
    values = torus_spectrum(zd_model(1, (1,)), (4,))
    assert np.allclose(values, [-2.0, 0.0, 0.0, 2.0], atol=1e-12)


def test_constant_potential_shifts_the_spectrum():
    base = torus_spectrum(zd_model(2, (1, 1)), (2, 3))
    shifted = torus_spectrum(zd_model(2, (1, 1), potential=mpq(5, 2)), (2, 3))
    assert np.allclose(shifted, base + 2.5, atol=1e-12)


def test_torus_matrix_is_symmetric():
    mat = torus_matrix(lieb_model((2, 1), potential=mpq(1, 3)), (2, 2))
    assert np.max(np.abs(mat - mat.T)) < 1e-14


def test_union_matches_torus_spectrum():
    rng = seeded(71)
    for _ in range(3):
        pots = random_potential(rng, 3, (2, 1))
        spec = lieb_model((2, 1), potential=pots)
        torus = torus_spectrum(spec, (2, 2))
        union = floquet_union(spec, (2, 2))
        assert torus.shape == union.shape
        assert np.max(np.abs(torus - union)) < 1e-9


def test_size_guard():
    with pytest.raises(SizeLimitExceeded):
        torus_spectrum(zd_model(1, (1,)), (5000,))


def test_lieb_flat_band_state_is_exact():
    spec = lieb_model((1, 1))
    state = lieb_flat_band_state()
    assert flat_band_check(spec, state, 0)
    assert flat_band_check(spec, state.translate((3, -2)), 0)
    # wrong energy and wrong state must both fail
    assert not flat_band_check(spec, state, 1)
    broken = FlatBandState(state.amplitudes[:-1])
    assert not flat_band_check(spec, broken, 0)


def test_flat_band_shifts_with_constant_potential():
    spec = lieb_model((1, 1), potential=mpq(5, 4))
    state = lieb_flat_band_state()
    assert flat_band_check(spec, state, mpq(5, 4))
    assert not flat_band_check(spec, state, 0)


def test_flat_band_persists_with_matching_potential():
    # a potential supported only on corner sites keeps the mid-band state
    spec = lieb_model((1, 1), potential=[(1, (0, 0), mpq(7, 3))])
    assert flat_band_check(spec, lieb_flat_band_state(), 0)


def test_fiber_eigenvalues_lie_on_the_dispersion_variety():
    rng = seeded(73)
    spec = lieb_model((2, 1), potential=random_potential(rng, 3, (2, 1)))
    result = dispersion_root_check(spec, samples=4, seed=5)
    assert result.passed(1e-7)


def test_band_functions_and_csv():
    spec = lieb_model((1, 1))
    rows = band_functions(spec, [(0.0, 0.0), (0.5, 0.0), (0.5, 0.5)], samples=9)
    assert len(rows) == 9
    text = band_csv(rows, 2)
    lines = text.strip().split("\n")
    assert lines[0] == "k1,k2,E1,E2,E3"
    assert len(lines) == 10
    # the middle band is flat at zero everywhere
    middles = [float(line.split(",")[3]) for line in lines[1:]]
    assert max(abs(x) for x in middles) < 1e-9


def test_band_functions_without_resampling():
    spec = zd_model(1, (1,))
    rows = band_functions(spec, [(0.0,), (0.25,), (0.5,)])
    energies = [row[1][0] for row in rows]
    assert np.allclose(energies, [2.0, 0.0, -2.0], atol=1e-12)

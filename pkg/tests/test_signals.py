"""Signal core: grids, inner products, Fourier transforms, shifts and test signals."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from phasespace_lab.models.grids import Grid1D, PhasePoint
from phasespace_lab.models.signals import Signal
from phasespace_lab.services.signals import (
    bandlimited_eval,
    dft,
    dilate,
    gaussian,
    guard_check,
    hermite,
    idft,
    inner,
    modulate,
    normalize,
    packet_fits,
    random_signal,
    tail_fraction,
    tf_shift,
    translate,
)
from phasespace_lab.utils.errors import (
    GridMismatchError,
    GuardViolationError,
    ParameterError,
    ZeroSignalError,
)


class TestGrid:
    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValidationError):
            Grid1D(n=100, dt=0.1)

    def test_rejects_nonpositive_spacing(self):
        with pytest.raises(ValidationError):
            Grid1D(n=64, dt=0.0)

    def test_centered_samples(self, small_grid):
        t = small_grid.t
        assert t[small_grid.n // 2] == 0.0
        assert t[0] == -small_grid.half_width

    def test_dual_grid_spacing(self, grid):
        assert grid.dual().dt == pytest.approx(1 / (grid.n * grid.dt))


class TestInnerProduct:
    def test_conjugate_linear_in_second_slot(self, grid, g0, h1):
        c = 0.3 - 1.2j
        assert inner(g0, h1.scaled(c)) == pytest.approx(np.conj(c) * inner(g0, h1))
        assert inner(g0.scaled(c), h1) == pytest.approx(c * inner(g0, h1))

    def test_energy_of_gaussian(self, g0):
        # ∫ e^{−2πt²} dt = 2^{-1/2}
        assert g0.energy == pytest.approx(2**-0.5, rel=1e-12)

    def test_grid_mismatch(self, g0, small_grid):
        with pytest.raises(GridMismatchError):
            inner(g0, gaussian(small_grid))

    def test_normalize_zero_signal(self, grid):
        with pytest.raises(ZeroSignalError):
            normalize(Signal(grid=grid, values=np.zeros(grid.n)))


class TestFourier:
    def test_gaussian_is_its_own_transform(self, g0):
        spectrum = dft(g0)
        np.testing.assert_allclose(spectrum.values, np.exp(-np.pi * spectrum.t**2), atol=1e-12)

    def test_idft_inverts_dft(self, grid):
        f = random_signal(3, 1 / (8 * grid.dt), grid)
        np.testing.assert_allclose(idft(dft(f)).values, f.values, atol=1e-12)

    def test_plancherel(self, grid):
        f = random_signal(5, 2.0, grid)
        assert dft(f).energy == pytest.approx(f.energy, rel=1e-12)


class TestShifts:
    def test_whole_sample_translation_is_a_roll(self, grid, h1):
        moved = translate(h1, 5 * grid.dt)
        np.testing.assert_allclose(moved.values, np.roll(h1.values, 5), atol=1e-13)

    def test_tf_shift_of_gaussian(self, grid, g0):
        z = PhasePoint(x=1.3, xi=-0.7)
        np.testing.assert_allclose(tf_shift(g0, z).values, gaussian(grid, z).values, atol=1e-11)

    def test_tf_shift_composition(self, grid, h1):
        a = PhasePoint(x=0.75, xi=0.4)
        b = PhasePoint(x=-1.1, xi=1.5)
        lhs = tf_shift(tf_shift(h1, b), a)
        rhs = tf_shift(h1, a + b).scaled(np.exp(-2j * np.pi * a.x * b.xi))
        np.testing.assert_allclose(lhs.values, rhs.values, atol=1e-10)

    def test_modulation_preserves_modulus(self, g0):
        np.testing.assert_allclose(np.abs(modulate(g0, 2.5).values), np.abs(g0.values))

    @pytest.mark.parametrize("a", [2.0, 0.5, -1.0])
    def test_dilate_gaussian(self, grid, g0, a):
        expected = math.sqrt(abs(a)) * np.exp(-np.pi * (a * grid.t) ** 2)
        np.testing.assert_allclose(dilate(g0, a).values, expected, atol=1e-10)

    def test_dilate_by_zero(self, g0):
        with pytest.raises(ParameterError):
            dilate(g0, 0.0)

    def test_bandlimited_eval_reproduces_samples(self, grid, h1):
        np.testing.assert_allclose(bandlimited_eval(h1, grid.t), h1.values, atol=1e-12)

    def test_bandlimited_eval_is_zero_off_grid(self, grid, g0):
        outside = np.array([-grid.half_width - 1.0, grid.half_width + 0.5])
        assert np.all(bandlimited_eval(g0, outside) == 0)


class TestGuard:
    def test_centered_packet_is_clear(self, g0):
        assert tail_fraction(g0) < 1e-20
        assert guard_check(g0, "test", strict=True) < 1e-20

    def test_edge_packet_raises_in_strict_mode(self, grid):
        f = gaussian(grid, PhasePoint(x=grid.half_width - 1.0))
        with pytest.raises(GuardViolationError):
            guard_check(f, "test", strict=True)

    def test_edge_packet_only_warns_by_default(self, grid):
        f = gaussian(grid, PhasePoint(x=grid.half_width - 1.0))
        assert guard_check(f, "test") > 1e-12

    def test_packet_fits(self, grid):
        assert packet_fits(grid, 0.0)
        assert packet_fits(grid, 9.0)
        assert not packet_fits(grid, 12.0)


class TestTestSignals:
    def test_hermite_functions_are_orthonormal(self, grid):
        hs = [hermite(grid, k) for k in range(5)]
        gram = np.array([[inner(a, b) for b in hs] for a in hs])
        np.testing.assert_allclose(gram, np.eye(5), atol=1e-10)

    def test_hermite_parity(self, grid):
        h = hermite(grid, 3).values
        # t_m ↦ −t_m maps index m to n − m
        np.testing.assert_allclose(h[1:], -h[1:][::-1], atol=1e-14)

    def test_negative_hermite_order(self, grid):
        with pytest.raises(ParameterError):
            hermite(grid, -1)

    def test_random_signal_is_seeded_and_unit(self, grid):
        band = 1 / (8 * grid.dt)
        a = random_signal(11, band, grid)
        b = random_signal(11, band, grid)
        assert a.energy == pytest.approx(1.0, rel=1e-12)
        np.testing.assert_array_equal(a.values, b.values)
        assert not np.array_equal(a.values, random_signal(12, band, grid).values)

    def test_random_signal_is_band_limited(self, grid):
        band = 1.0
        f = random_signal(2, band, grid)
        spectrum = dft(f)
        assert np.max(np.abs(spectrum.values[np.abs(spectrum.t) > band + 1e-12])) < 1e-12

    def test_random_signal_band_must_be_below_nyquist(self, grid):
        with pytest.raises(ParameterError):
            random_signal(1, 1 / (2 * grid.dt), grid)

"""Hologram synthesis against the threshold rule evaluated independently,
plus diffraction-order structure, symmetry and separation checks."""

import math

import numpy as np
import pytest

from evfaraday import (BeamParameters, BinaryMask, ComplexField,
                       ELEMENTARY_CHARGE, GridSpec, HologramSpec,
                       PlaneReference, SphericalReference, angular_intensity,
                       default_carrier, design_value, diffract_far_field,
                       effective_width, extract_order, harmonic_fraction,
                       isolate_chirped_order, locate_minimum_width_plane,
                       pattern_orientation, radial_peak_radius,
                       spherical_focus_distance, synthesize_hologram)
from evfaraday.gratings import frequency_to_angle
from evfaraday.errors import CarrierResolutionError, OrderSeparationError

E60 = 60e3 * ELEMENTARY_CHARGE
BEAM = BeamParameters(E60, 0.0)


def plane_spec(grid, fringes=32, l=1, phi0=0.0):
    k_x = 2 * math.pi * fringes / grid.physical_side_length
    return HologramSpec(l, phi0, PlaneReference(k_x))


class TestDesignValue:
    def test_bright_probe_on_axis_direction(self):
        spec = plane_spec(GridSpec(64, 1e-6))
        # phi = 0, x = 0: (1/3)|2 + 1|^2 = 3
        assert design_value(spec, 0.0, 0.0) == pytest.approx(3.0, rel=1e-12)

    def test_nodal_line_value(self):
        spec = plane_spec(GridSpec(64, 1e-6))
        # phi = pi/2 (x = 0, y > 0): cos term vanishes, value 1/3 < 1/2
        for y in (1e-9, 3e-8, 4.9e-7):
            assert design_value(spec, 0.0, y) == pytest.approx(1 / 3, rel=1e-12)

    def test_mask_matches_independent_formula(self):
        grid = GridSpec(128, 1e-6)
        spec = plane_spec(grid, fringes=16, l=2, phi0=0.4)
        mask = synthesize_hologram(spec, grid)
        xg, yg = grid.meshgrid()
        phi = np.arctan2(yg, xg)
        value = np.abs(2 * np.cos(spec.l * (phi - spec.phi0))
                       + np.exp(1j * spec.reference.k_x * xg)) ** 2 / 3
        aperture = xg ** 2 + yg ** 2 <= (grid.physical_side_length / 2) ** 2
        expected = ((value > 0.5) & aperture).astype(np.uint8)
        assert np.array_equal(mask.values, expected)

    def test_nodal_line_pixels_dark(self):
        grid = GridSpec(128, 1e-6)
        mask = synthesize_hologram(plane_spec(grid, fringes=16), grid)
        n = grid.samples_per_side
        # pixel columns adjacent to x = 0 sit near phi = +-pi/2 where the
        # metric is ~1/3; away from the axis (|cos phi| < 1/24) they are
        # closed, while a few near-axis pixels may legitimately open
        for col in (n // 2 - 1, n // 2):
            assert mask.values[:n // 2 - 16, col].sum() == 0
            assert mask.values[n // 2 + 16:, col].sum() == 0


class TestMaskGeometry:
    def test_half_period_fringe_offset(self):
        # fringes on opposite sides of the l=1 nodal line are shifted by
        # half a carrier period: compare the near-axis row left/right of x=0
        grid = GridSpec(256, 1e-6)
        fringes = 16
        mask = synthesize_hologram(plane_spec(grid, fringes=fringes), grid)
        n = grid.samples_per_side
        period_px = n // fringes
        row = mask.values[n // 2, :].astype(int)
        right = row[n // 2:n // 2 + 4 * period_px]
        left = row[n // 2 - 4 * period_px:n // 2][::-1]
        # correlate over whole periods; the maximum must sit half a period off
        lags = range(period_px)
        scores = [np.sum(right == np.roll(left, lag)) for lag in lags]
        assert abs(int(np.argmax(scores)) - period_px // 2) <= 1

    def test_phi0_shift_by_pi_over_l_preserves_order_structure(self):
        # shifting phi0 by pi/l negates the encoded amplitude, which moves
        # every fringe by half a carrier period; the observables of each
        # diffraction order (petal orientation mod pi/l and its modulation
        # depth) are invariant
        grid = GridSpec(256, 1e-6)
        for l in (1, 2):
            measured = []
            for phi0 in (0.3, 0.3 + math.pi / l):
                spec = plane_spec(grid, fringes=40, l=l, phi0=phi0)
                mask = synthesize_hologram(spec, grid)
                far = diffract_far_field(mask, E60, 8)
                field = extract_order(far, spec, +1, 8)
                prof = angular_intensity(field, radial_peak_radius(field), 256)
                measured.append((pattern_orientation(prof, l),
                                 harmonic_fraction(prof, 2 * l)))
            (ori_a, frac_a), (ori_b, frac_b) = measured
            period = math.pi / l
            delta = abs(ori_a - ori_b)
            assert min(delta, period - delta) < math.radians(0.5)
            assert frac_b == pytest.approx(frac_a, rel=0.05)

    def test_aperture_applied(self):
        grid = GridSpec(128, 1e-6)
        mask = synthesize_hologram(plane_spec(grid, fringes=16), grid)
        xg, yg = grid.meshgrid()
        outside = xg ** 2 + yg ** 2 > (grid.physical_side_length / 2) ** 2
        assert mask.values[outside].sum() == 0

    def test_carrier_resolution_guard(self):
        grid = GridSpec(64, 1e-6)
        with pytest.raises(CarrierResolutionError):
            synthesize_hologram(plane_spec(grid, fringes=20), grid)

    def test_binary_values_enforced(self):
        grid = GridSpec(16, 1e-6)
        with pytest.raises(ValueError):
            BinaryMask(grid, 2 * np.ones((16, 16)))

    def test_default_carrier_resolves_ten_fringes(self):
        grid = GridSpec(128, 1e-6)
        assert default_carrier(grid) == pytest.approx(
            2 * math.pi * 10 / grid.physical_side_length, rel=1e-12)


class TestFarField:
    def test_uniform_mask_single_central_peak(self):
        grid = GridSpec(64, 1e-6)
        ones = BinaryMask(grid, np.ones((64, 64), dtype=np.uint8))
        far = diffract_far_field(ones, E60, pad_factor=1)
        intensity = np.abs(far.amplitudes) ** 2
        centre = 64 // 2
        peak = intensity[centre, centre]
        intensity[centre, centre] = 0.0
        assert peak > 0
        assert intensity.max() < 1e-20 * peak

    def test_parseval(self):
        grid = GridSpec(128, 1e-6)
        mask = synthesize_hologram(plane_spec(grid, fringes=16), grid)
        for pad in (1, 4):
            far = diffract_far_field(mask, E60, pad)
            total = float((np.abs(far.amplitudes) ** 2).sum())
            assert total == pytest.approx(float(mask.values.sum()), rel=1e-10)

    def test_shift_theorem(self):
        grid = GridSpec(128, 1e-6)
        mask = synthesize_hologram(plane_spec(grid, fringes=16), grid)
        rolled = BinaryMask(grid, np.roll(mask.values, 1, axis=1))
        a = np.abs(diffract_far_field(mask, E60, 1).amplitudes) ** 2
        b = np.abs(diffract_far_field(rolled, E60, 1).amplitudes) ** 2
        assert np.allclose(a, b, rtol=0, atol=1e-9 * a.max())

    def test_energy_sits_at_carrier_orders(self):
        grid = GridSpec(256, 1e-6)
        fringes = 32
        mask = synthesize_hologram(plane_spec(grid, fringes=fringes), grid)
        far = diffract_far_field(mask, E60, 2)
        intensity = np.abs(far.amplitudes) ** 2
        m = far.grid.samples_per_side
        c = m // 2
        off = fringes * 2   # carrier offset in far-field pixels at pad 2
        half = off // 2

        def window(col, h):
            return intensity[c - h:c + h, col - h:col + h].sum()

        three = window(c, half) + window(c + off, half) + window(c - off, half)
        assert three > 0.5 * intensity.sum()
        # tight non-overlapping windows: an order centre dominates the
        # midpoint between orders
        tight = off // 4
        assert window(c + off, tight) > 10 * window(c + off // 2, tight)

    def test_illumination_energy_validated(self):
        grid = GridSpec(64, 1e-6)
        ones = BinaryMask(grid, np.ones((64, 64), dtype=np.uint8))
        with pytest.raises(ValueError):
            diffract_far_field(ones, 0.0)

    def test_frequency_to_angle(self):
        from evfaraday import base_wavenumber
        nu = 1e7
        expected = 2 * math.pi / base_wavenumber(BEAM) * nu
        assert frequency_to_angle(nu, BEAM) == pytest.approx(expected, rel=1e-12)


@pytest.fixture(scope="module")
def far_and_spec():
    grid = GridSpec(256, 1e-6)
    spec = plane_spec(grid, fringes=32, l=1, phi0=0.3)
    mask = synthesize_hologram(spec, grid)
    return diffract_far_field(mask, E60, 8), spec


@pytest.fixture(scope="module")
def sph():
    grid = GridSpec(128, 1e-6)
    r_max = grid.physical_side_length / 2
    curvature = math.pi / (8 * grid.pitch * r_max)
    spec = HologramSpec(1, 0.0, SphericalReference(curvature))
    return synthesize_hologram(spec, grid), spec


class TestExtractOrder:
    def test_first_order_two_lobes_oriented(self, far_and_spec):
        far, spec = far_and_spec
        field = extract_order(far, spec, +1, 8)
        radius = radial_peak_radius(field)
        prof = angular_intensity(field, radius, 256)
        assert harmonic_fraction(prof, 2 * spec.l) > 0.5
        orientation = pattern_orientation(prof, spec.l)
        err = abs(orientation - spec.phi0)
        err = min(err, math.pi / spec.l - err)
        assert err < math.radians(2.0)

    def test_zero_order_unstructured(self, far_and_spec):
        far, spec = far_and_spec
        field = extract_order(far, spec, 0, 8)
        prof = angular_intensity(field, radial_peak_radius(field), 256)
        assert harmonic_fraction(prof, 2 * spec.l) < 0.1

    def test_opposite_orders_mirror_conjugate(self, far_and_spec):
        # a real mask has a Hermitian far field, so +1 and -1 intensities
        # are point reflections of each other.  The outermost row/column of
        # the half-open even crops has no mirror partner, so the comparison
        # runs on the shared region with a common normalisation.
        far, spec = far_and_spec
        plus = extract_order(far, spec, +1, 8).intensity()[1:, 1:]
        minus = extract_order(far, spec, -1, 8).intensity()
        reflected = np.roll(minus[::-1, ::-1], 1, axis=(0, 1))[1:, 1:]
        reflected = reflected * (plus.sum() / reflected.sum())
        assert np.max(np.abs(plus - reflected)) < 1e-6 * plus.max()

    def test_weak_carrier_fails_separation(self):
        grid = GridSpec(256, 1e-6)
        spec = plane_spec(grid, fringes=10)   # the ten-fringe default
        mask = synthesize_hologram(spec, grid)
        far = diffract_far_field(mask, E60, 4)
        with pytest.raises(OrderSeparationError):
            extract_order(far, spec, +1, 4)

    def test_spherical_reference_rejected(self):
        grid = GridSpec(128, 1e-6)
        sph = HologramSpec(1, 0.0, SphericalReference(1e13))
        mask = synthesize_hologram(plane_spec(grid, fringes=16), grid)
        far = diffract_far_field(mask, E60, 2)
        with pytest.raises(OrderSeparationError):
            extract_order(far, sph, +1, 2)

    def test_invalid_order(self, far_and_spec):
        far, spec = far_and_spec
        with pytest.raises(ValueError):
            extract_order(far, spec, 2, 8)


class TestSphericalReference:
    def test_broken_ring_morphology(self, sph):
        mask, spec = sph
        n = mask.grid.samples_per_side
        # several zone transitions along the bright azimuth
        radial_cut = mask.values[n // 2, n // 2:].astype(int)
        assert np.count_nonzero(np.diff(radial_cut)) >= 4
        # rings are broken: near the nodal azimuth (x ~ 0, away from the
        # centre) the threshold metric stays at ~1/3 and pixels are closed
        for col in (n // 2 - 1, n // 2):
            assert mask.values[:n // 2 - 16, col].sum() == 0
            assert mask.values[n // 2 + 16:, col].sum() == 0

    def test_longitudinal_focus_locations(self, sph):
        mask, spec = sph
        expected = spherical_focus_distance(spec, BEAM)
        converging = isolate_chirped_order(mask, spec, -1)
        z_real, w_real = locate_minimum_width_plane(converging, BEAM,
                                                    1.4 * expected)
        assert z_real == pytest.approx(expected, rel=0.1)
        assert w_real < 0.5 * effective_width(converging)

        diverging = isolate_chirped_order(mask, spec, +1)
        reversed_field = ComplexField(diverging.grid, 0.0,
                                      np.conj(diverging.amplitudes))
        z_virtual, _ = locate_minimum_width_plane(reversed_field, BEAM,
                                                  1.4 * expected)
        # virtual focus mirrors the real one through the mask plane
        assert z_virtual == pytest.approx(z_real, rel=1e-6)

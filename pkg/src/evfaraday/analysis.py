"""Measurements on sampled fields: angular intensity profiles, pattern
orientation (the Faraday observable), second-moment beam width, and mode
overlap."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import GridMismatchError, NoPatternError
from .modes import ComplexField


@dataclass(frozen=True)
class AngularProfile:
    """Intensity samples on a circle, uniformly spaced over [0, 2 pi)."""

    radius: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        n = samples.size
        if samples.ndim != 1 or n < 64 or n & (n - 1):
            raise ValueError("sample count must be a power of two >= 64")
        if np.any(samples < 0):
            raise ValueError("intensity samples must be non-negative")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "samples", samples)

    def angles(self) -> np.ndarray:
        n = self.samples.size
        return 2.0 * np.pi * np.arange(n) / n


def angular_intensity(field: ComplexField, radius: float,
                      n_samples: int = 256) -> AngularProfile:
    """Bilinearly interpolated intensity on the circle of the given radius."""
    grid = field.grid
    n = grid.samples_per_side
    max_radius = (n / 2 - 1) * grid.pitch
    if not 0 < radius <= max_radius:
        raise ValueError(
            f"radius {radius:.6e} m outside the usable range "
            f"(0, {max_radius:.6e}] m of this grid")
    phi = 2.0 * np.pi * np.arange(n_samples) / n_samples
    x = radius * np.cos(phi)
    y = radius * np.sin(phi)
    # fractional indices of physical points; pixel centres sit at half-pixels
    ix = x / grid.pitch + n / 2 - 0.5
    iy = y / grid.pitch + n / 2 - 0.5
    vals = ndimage.map_coordinates(field.intensity(), np.vstack([iy, ix]),
                                   order=1, mode="nearest")
    return AngularProfile(radius, np.maximum(vals, 0.0))


def circular_harmonic(profile: AngularProfile, k: int) -> complex:
    """k-th circular Fourier coefficient c_k = mean(I(phi) e^{-i k phi})."""
    n = profile.samples.size
    if not 0 <= k < n // 2:
        raise ValueError(f"harmonic {k} not resolved by {n} samples")
    return complex(np.fft.fft(profile.samples)[k]) / n


def harmonic_fraction(profile: AngularProfile, k: int) -> float:
    """Modulation amplitude of the k-th harmonic relative to the mean.

    Equals 1 for a fully modulated cos^2 pattern of that harmonic and 0 for
    a flat profile.
    """
    mean = float(profile.samples.mean())
    if mean <= 0:
        return 0.0
    return 2.0 * abs(circular_harmonic(profile, k)) / mean


def pattern_orientation(profile: AngularProfile, l: int) -> float:
    """Orientation of a 2|l|-petal pattern, reported in [0, pi/|l|).

    For intensity proportional to cos^2(l (phi - Phi)) this returns
    Phi mod pi/|l|.  Raises NoPatternError when the 2|l|-th harmonic
    amplitude is below 0.1 of the profile mean.
    """
    la = abs(l)
    if la < 1:
        raise ValueError("orientation needs |l| >= 1")
    c = circular_harmonic(profile, 2 * la)
    mean = float(profile.samples.mean())
    if mean <= 0 or 2.0 * abs(c) < 0.1 * mean:
        raise NoPatternError(
            f"harmonic 2|l| = {2 * la} amplitude {2 * abs(c):.3e} is below "
            f"0.1 of the mean {mean:.3e}; no orientation defined")
    period = math.pi / la
    return (-np.angle(c) / (2.0 * la)) % period


def unwrap_orientations(angles, l: int, start: float = 0.0) -> np.ndarray:
    """Continue mod-pi/|l| orientations across a series by nearest branch."""
    period = math.pi / abs(l)
    out = np.empty(len(angles))
    prev = start
    for i, a in enumerate(angles):
        k = round((prev - a) / period)
        prev = a + k * period
        out[i] = prev
    return out


def radial_peak_radius(field: ComplexField, floor_pixels: float = 2.0) -> float:
    """Radius of maximum azimuthally averaged intensity, in metres.

    Used to pick the most informative circle for angular profiling; the
    result never falls below floor_pixels grid pitches so the circle stays
    resolvable.
    """
    intensity = field.intensity()
    xg, yg = field.grid.meshgrid()
    bins = np.floor(np.hypot(xg, yg) / field.grid.pitch).astype(int).ravel()
    sums = np.bincount(bins, weights=intensity.ravel())
    counts = np.maximum(np.bincount(bins), 1)
    usable = field.grid.samples_per_side // 2 - 1
    mean = sums[:usable] / counts[:usable]
    peak = int(np.argmax(mean)) + 0.5
    return max(peak, floor_pixels) * field.grid.pitch


def effective_width(field: ComplexField, l: int = 0) -> float:
    """Waist estimate sqrt(2 <r^2> / (|l|+1)) from the intensity second
    moment about the beam axis.

    Calibrated so an n = 0 mode of waist w returns w; independent of the
    field's overall amplitude scale.
    """
    intensity = field.intensity()
    total = float(intensity.sum())
    if total <= 0:
        raise ValueError("cannot measure the width of a zero-norm field")
    xg, yg = field.grid.meshgrid()
    mean_r2 = float((intensity * (xg ** 2 + yg ** 2)).sum()) / total
    return math.sqrt(2.0 * mean_r2 / (abs(l) + 1))


def fidelity(a: ComplexField, b: ComplexField) -> float:
    """Squared overlap |<a|b>|^2 of two unit-norm fields on the same grid."""
    if a.grid != b.grid:
        raise GridMismatchError("fields live on different grids")
    overlap = np.vdot(a.amplitudes, b.amplitudes) * a.grid.pitch ** 2
    return float(abs(overlap) ** 2)

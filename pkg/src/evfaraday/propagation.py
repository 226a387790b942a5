"""Split-step Fourier solver for the paraxial envelope equation in the
magnetic channel.

The quadratic confinement term is applied as a per-pixel phase and the
transverse Laplacian as a per-spatial-frequency phase, combined with
symmetric (Strang) splitting.  The angular-momentum part of the Zeeman
interaction reduces to the exact scalar phase exp(-i l k_L z) on a
definite-l component, so general beams are propagated as mode lists and
each component is advanced independently.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.fft as _fft

from .core import BeamParameters, base_wavenumber, larmor_wavenumber
from .errors import ContainmentError, GridMismatchError, StepTooLargeError
from .modes import ComplexField, GridSpec, ModeSuperposition, mode_field

#: Border-to-peak intensity ratio above which propagation refuses to continue.
BORDER_INTENSITY_LIMIT = 1e-6


def fft_workers() -> int:
    """FFT worker count: the CPU count, capped by EVF_THREADS if set."""
    n = os.cpu_count() or 1
    cap = os.environ.get("EVF_THREADS")
    if cap:
        n = max(1, min(n, int(cap)))
    return n


@dataclass(frozen=True)
class PropagationPlan:
    """Precomputed unit-modulus phase factors for one step length.

    kinetic_phase is the full-step spectral factor exp(-i k_perp^2 dz/(2 k0))
    in FFT layout; half_kinetic_phase is its square root used at the ends of
    a Strang sweep; potential_phase is the per-pixel confinement factor
    exp(-i k0 k_L^2 r^2 dz / 2).
    """

    grid: GridSpec
    params: BeamParameters
    dz: float
    kinetic_phase: np.ndarray
    half_kinetic_phase: np.ndarray
    potential_phase: np.ndarray
    steps_per_output: int = 1


def aliasing_limit(grid: GridSpec, p: BeamParameters) -> float:
    """Largest dz with kinetic phase below pi at the corner spatial frequency."""
    kperp_max_sq = 2.0 * (math.pi / grid.pitch) ** 2
    return 2.0 * math.pi * base_wavenumber(p) / kperp_max_sq


def default_step_size(grid: GridSpec, p: BeamParameters) -> float:
    """min(pi / (40 |k_L|), aliasing limit / 4).

    Guarantees at least 40 steps per width-oscillation period while staying
    well inside the anti-aliasing bound.
    """
    dz = aliasing_limit(grid, p) / 4.0
    k_l = larmor_wavenumber(p)
    if k_l != 0.0:
        dz = min(dz, math.pi / (40.0 * abs(k_l)))
    return dz


def make_plan(grid: GridSpec, p: BeamParameters, dz: float,
              steps_per_output: int = 1) -> PropagationPlan:
    """Build the phase factors for step dz, enforcing the aliasing bound."""
    if not dz > 0:
        raise ValueError("dz must be positive")
    if steps_per_output < 1:
        raise ValueError("steps_per_output must be a positive integer")
    limit = aliasing_limit(grid, p)
    if dz >= limit:
        raise StepTooLargeError(
            f"dz = {dz:.6e} m violates the anti-aliasing bound; maximum "
            f"admissible dz on this grid is {limit:.6e} m")
    k0 = base_wavenumber(p)
    k_l = larmor_wavenumber(p)
    k = 2.0 * np.pi * np.fft.fftfreq(grid.samples_per_side, d=grid.pitch)
    kx, ky = np.meshgrid(k, k)
    k_sq = kx ** 2 + ky ** 2
    xg, yg = grid.meshgrid()
    r_sq = xg ** 2 + yg ** 2
    return PropagationPlan(
        grid=grid, params=p, dz=dz,
        kinetic_phase=np.exp(-1j * k_sq * dz / (2.0 * k0)),
        half_kinetic_phase=np.exp(-1j * k_sq * dz / (4.0 * k0)),
        potential_phase=np.exp(-1j * k0 * k_l ** 2 * r_sq * dz / 2.0),
        steps_per_output=steps_per_output)


def grid_norm(field: ComplexField) -> float:
    """Discrete squared norm sum |a|^2 pitch^2."""
    return float(np.sum(np.abs(field.amplitudes) ** 2)) * field.grid.pitch ** 2


def _check_contained(amps: np.ndarray, context: str):
    intensity = np.abs(amps) ** 2
    peak = intensity.max()
    if peak == 0.0:
        return
    border = max(intensity[0].max(), intensity[-1].max(),
                 intensity[:, 0].max(), intensity[:, -1].max())
    if border > BORDER_INTENSITY_LIMIT * peak:
        raise ContainmentError(
            f"{context}: border intensity is {border / peak:.3e} of the peak "
            f"(limit {BORDER_INTENSITY_LIMIT:.0e}); enlarge the grid")


def _strang_sweep(stack: np.ndarray, plan: PropagationPlan,
                  n_steps: int) -> np.ndarray:
    """Advance v-envelopes by n_steps symmetric splits.

    Interior half-kinetic factors are merged pairwise, so the sweep costs
    one spectral round trip per step plus one to open the bracket.
    """
    workers = fft_workers()
    half = plan.half_kinetic_phase
    full = plan.kinetic_phase
    pot = plan.potential_phase
    spec = _fft.fft2(stack, workers=workers)
    spec *= half
    stack = _fft.ifft2(spec, workers=workers)
    for step in range(n_steps):
        stack *= pot
        spec = _fft.fft2(stack, workers=workers)
        spec *= half if step == n_steps - 1 else full
        stack = _fft.ifft2(spec, workers=workers)
    return stack


def propagate_definite_l(field: ComplexField, l: int, plan: PropagationPlan,
                         n_steps: int) -> ComplexField:
    """Advance one OAM eigencomponent by n_steps * dz.

    The caller asserts the field has azimuthal dependence exp(i l phi); the
    Zeeman interaction is then the exact scalar phase exp(-i l k_L dz) per
    step and is applied once at the end.
    """
    if field.grid != plan.grid:
        raise GridMismatchError("field and plan grids differ")
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    if n_steps == 0:
        return ComplexField(field.grid, field.z_position, field.amplitudes.copy())
    _check_contained(field.amplitudes, "input field")
    stack = _strang_sweep(field.amplitudes[np.newaxis].copy(), plan, n_steps)
    _check_contained(stack[0], "propagated field")
    advance = n_steps * plan.dz
    zeeman = np.exp(-1j * l * larmor_wavenumber(plan.params) * advance)
    return ComplexField(field.grid, field.z_position + advance,
                        stack[0] * zeeman)


def superposition_evolution(s: ModeSuperposition, grid: GridSpec,
                            plan: PropagationPlan, n_outputs: int):
    """Yield (z, ComplexField) for a superposition propagated from z = 0.

    Emits the initial field and then one field every
    plan.steps_per_output * plan.dz, n_outputs times.  All definite-l
    components advance through the same Strang sweeps; the per-component
    Zeeman phase is applied when a field is assembled.
    """
    if grid != plan.grid:
        raise GridMismatchError("grid and plan grids differ")
    if n_outputs < 1:
        raise ValueError("n_outputs must be >= 1")
    k_l = larmor_wavenumber(plan.params)
    ls = np.array([idx.l for idx, _, _ in s.terms])
    stack = np.stack([coeff * mode_field(grid, idx.n, idx.l, w).amplitudes
                      for idx, coeff, w in s.terms])

    def assemble(z):
        out = np.tensordot(np.exp(-1j * ls * k_l * z), stack, axes=1)
        return ComplexField(grid, z, out)

    # residual grid correction so the assembled sum starts at unit norm
    initial = assemble(0.0)
    stack /= math.sqrt(grid_norm(initial))
    initial = assemble(0.0)
    _check_contained(initial.amplitudes, "initial field")
    yield 0.0, initial

    z = 0.0
    for _ in range(n_outputs):
        stack = _strang_sweep(stack, plan, plan.steps_per_output)
        z += plan.steps_per_output * plan.dz
        out = assemble(z)
        _check_contained(out.amplitudes, f"field at z = {z:.6e} m")
        yield z, out


def propagate_superposition(s: ModeSuperposition, grid: GridSpec,
                            plan: PropagationPlan, z_total: float) -> ComplexField:
    """Propagate a superposition from z = 0 to z_total in one sweep.

    z_total must be an integer multiple of plan.dz.
    """
    ratio = z_total / plan.dz
    n_steps = round(ratio)
    if n_steps < 1 or abs(ratio - n_steps) > 1e-9:
        raise ValueError(
            f"z_total = {z_total!r} is not a positive integer multiple of "
            f"dz = {plan.dz!r}")
    stepped = PropagationPlan(
        grid=plan.grid, params=plan.params, dz=plan.dz,
        kinetic_phase=plan.kinetic_phase,
        half_kinetic_phase=plan.half_kinetic_phase,
        potential_phase=plan.potential_phase,
        steps_per_output=n_steps)
    for _, out in superposition_evolution(s, grid, stepped, 1):
        pass
    return out

"""Polar decomposition of wavefunctions and the quantum potential.

Writing psi = lambda * exp(i*Phi/hbar) splits the Schrodinger equation
into two real equations,

    (grad Phi)^2 / 2m + V + V_q = -dPhi/dt          (phase equation)
    lap Phi + 2 (grad Phi)(grad ln lambda)
                          = -2m d(ln lambda)/dt     (continuity)

with the quantum potential V_q = -(hbar^2/2m) lap(lambda)/lambda and the
effective potential V_t = V + V_q.  This module performs the
decomposition, evaluates V_q and V_t, and verifies the identities that
stationary states must satisfy:

  * for stationary 1D states with monotone phase, lambda^2 * dPhi/dx is
    spatially constant (equivalently lambda = P^(-1/2) up to one global
    factor) — checked against its spatial median;
  * harmonic eigenmoduli satisfy
    lambda_n'' + (2m/hbar^2) [ (n+1/2) hbar w - (m w^2/2) x^2 ] lambda_n = 0;
  * any stationary state satisfies (dPhi/dx)^2 = 2m (E - V_t).

lambda vanishes at nodes, where ln(lambda) and lap(lambda)/lambda are
singular; such points are masked (threshold 1e-6 of the peak modulus)
and every derived quantity is NaN there and at neighbouring points whose
stencils touch them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .grids import Grid1D, PhysicalConstants
from .spectral import EigenPair
from .states import WaveFunction
from .stencils import gradient, second_derivative

NODE_THRESHOLD = 1e-6  # relative to max lambda
_VACUOUS_MOMENTUM = 1e-8  # times hbar/dx; below this the phase is flat


@dataclass(frozen=True)
class PolarField:
    """Modulus lambda and phase Phi (action units) of psi = lambda e^{i Phi/hbar}.

    phase is NaN exactly where node_mask is True.  Within each contiguous
    unmasked run the phase is unwrapped left to right, the run's leftmost
    value lying in (-pi*hbar, pi*hbar].
    """

    modulus: np.ndarray
    phase: np.ndarray
    node_mask: np.ndarray
    grid: Grid1D
    time: float = 0.0

    def __post_init__(self) -> None:
        n = self.grid.n_points
        for name in ("modulus", "phase", "node_mask"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"{name} must have shape ({n},)")


@dataclass(frozen=True)
class QuantumPotentialField:
    """v_q and v_t = V + v_q on a grid, NaN where the node mask dilates."""

    v_q: np.ndarray
    v_t: np.ndarray
    grid: Grid1D


def _unmasked_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """[start, stop) index pairs of contiguous unmasked runs."""
    runs = []
    idx = np.flatnonzero(~mask)
    if idx.size == 0:
        return runs
    breaks = np.flatnonzero(np.diff(idx) > 1)
    start = idx[0]
    for b in breaks:
        runs.append((int(start), int(idx[b]) + 1))
        start = idx[b + 1]
    runs.append((int(start), int(idx[-1]) + 1))
    return runs


def decompose(
    psi: WaveFunction, constants: PhysicalConstants = PhysicalConstants()
) -> PolarField:
    """Split psi into modulus and unwrapped phase (in action units).

    Raises ValueError for an identically vanishing field (every point
    would be masked, leaving no phase reference anywhere).
    """
    lam = np.abs(psi.values)
    peak = float(lam.max())
    if peak == 0.0:
        raise ValueError("cannot decompose an identically zero wavefunction")
    mask = lam < NODE_THRESHOLD * peak
    if mask.all():
        raise ValueError("wavefunction is masked everywhere; nothing to decompose")
    phase = np.full(psi.grid.n_points, np.nan)
    angles = np.angle(psi.values)
    for start, stop in _unmasked_runs(mask):
        phase[start:stop] = constants.hbar * np.unwrap(angles[start:stop])
    return PolarField(lam, phase, mask, psi.grid, psi.time)


def recompose(
    polar: PolarField, constants: PhysicalConstants = PhysicalConstants()
) -> WaveFunction:
    """Inverse of decompose; masked points borrow the nearest unmasked phase."""
    phase = polar.phase
    if polar.node_mask.any():
        x = polar.grid.x
        good = ~polar.node_mask
        phase = np.interp(x, x[good], polar.phase[good])
    values = polar.modulus * np.exp(1j * phase / constants.hbar)
    return WaveFunction(values, polar.grid, polar.time)


def quantum_potential(
    polar: PolarField, constants: PhysicalConstants = PhysicalConstants()
) -> np.ndarray:
    """v_q = -(hbar^2/2m) * lambda''/lambda, NaN on the dilated node mask.

    The mask is widened by one point on each side because the central
    second difference at a node's neighbour already straddles the
    singular point.  A node falling *between* grid points leaves both
    neighbours above the modulus threshold while |psi| kinks there, so
    the second difference of the modulus picks up an O(1/dx) artifact;
    such crossings announce themselves as a ~pi*hbar step in the phase,
    and points whose stencil spans one are masked too (same detector as
    phase_jump_guard).
    """
    lam = polar.modulus
    d2 = second_derivative(lam, polar.grid.dx)
    v_q = -(constants.hbar**2) / (2.0 * constants.mass) * d2 / np.where(
        polar.node_mask, np.nan, lam
    )
    dilated = polar.node_mask.copy()
    dilated[1:] |= polar.node_mask[:-1]
    dilated[:-1] |= polar.node_mask[1:]
    jump = np.abs(np.diff(polar.phase)) > 0.5 * np.pi * constants.hbar
    dilated[:-1] |= jump
    dilated[1:] |= jump
    v_q[dilated] = np.nan
    return v_q


def total_potential(v_q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """v_t = V + v_q; NaN entries of v_q stay NaN."""
    if v_q.shape != v.shape:
        raise ValueError(f"shape mismatch: v_q {v_q.shape} vs V {v.shape}")
    return v + v_q


def quantum_potential_field(
    polar: PolarField,
    potential_values: np.ndarray,
    constants: PhysicalConstants = PhysicalConstants(),
) -> QuantumPotentialField:
    v_q = quantum_potential(polar, constants)
    return QuantumPotentialField(v_q, total_potential(v_q, potential_values), polar.grid)


def phase_jump_guard(
    polar: PolarField, constants: PhysicalConstants = PhysicalConstants()
) -> np.ndarray:
    """Phase with NaN at points whose central stencil crosses a branch jump.

    A node falling between two grid points flips the sign of a real
    wavefunction without pushing either neighbour below the node
    threshold, so the stored phase steps by ~pi*hbar there.  Derivatives
    across such a step are meaningless; this guard blanks any point
    adjacent to a step larger than pi*hbar/2.
    """
    phase = polar.phase.copy()
    jump = np.abs(np.diff(phase)) > 0.5 * np.pi * constants.hbar
    bad = np.zeros(phase.shape, dtype=bool)
    bad[:-1] |= jump
    bad[1:] |= jump
    phase[bad] = np.nan
    return phase


def align_phase_series(
    fields: Sequence[PolarField],
    constants: PhysicalConstants = PhysicalConstants(),
) -> np.ndarray:
    """Stack phases of a time series, matching 2*pi*hbar branches in time.

    Each slice is shifted by the multiple of 2*pi*hbar that best matches
    the previous slice at the leftmost point unmasked in both.  Intended
    for node-free or stationary fields, where one global shift per slice
    suffices; use it to difference phases across slices (a single slice
    needs no alignment).
    """
    if len(fields) == 0:
        raise ValueError("empty phase series")
    stacked = np.stack([f.phase for f in fields])
    two_pi_hbar = 2.0 * np.pi * constants.hbar
    for k in range(1, len(fields)):
        both = ~(fields[k - 1].node_mask | fields[k].node_mask)
        ref = int(np.argmax(both))
        if not both[ref]:
            raise ValueError(f"slices {k-1} and {k} share no unmasked point")
        delta = stacked[k - 1, ref] - stacked[k, ref]
        stacked[k] += two_pi_hbar * np.round(delta / two_pi_hbar)
    return stacked


def madelung_residuals(
    series: Sequence[WaveFunction],
    potential_values: np.ndarray,
    constants: PhysicalConstants = PhysicalConstants(),
) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of the phase and continuity equations along an evolution.

    Returns (r_phase, r_continuity), each of shape (len(series)-2,
    n_points): time derivatives are central, so only interior slices are
    evaluated.  Row k corresponds to series[k+1].

        r_phase      = (grad Phi)^2/2m + V + v_q + dPhi/dt
        r_continuity = lap Phi + 2 (grad Phi)(grad ln lambda)
                       + 2m d(ln lambda)/dt

    The temporal phase derivative is computed from the principal angle of
    psi_{k+1} * conj(psi_{k-1}), which equals the central difference of
    Phi whenever the true phase advance over 2*dt stays below pi*hbar —
    no cross-slice branch bookkeeping needed.  Node masks, their
    dilation, and branch-jump guards all enter as NaN.
    """
    if len(series) < 3:
        raise ValueError("need at least 3 time slices for central differences")
    times = np.array([w.time for w in series])
    dts = np.diff(times)
    dt = float(dts[0])
    if dt <= 0 or not np.allclose(dts, dt, rtol=1e-9, atol=0.0):
        raise ValueError("time slices must be uniformly spaced and increasing")
    grid = series[0].grid
    if potential_values.shape != (grid.n_points,):
        raise ValueError("potential_values must live on the series grid")
    m, hbar = constants.mass, constants.hbar

    polars = [decompose(w, constants) for w in series]
    guarded = [phase_jump_guard(p, constants) for p in polars]
    log_lam = [
        np.where(p.node_mask, np.nan, np.log(np.where(p.node_mask, 1.0, p.modulus)))
        for p in polars
    ]
    v_qs = [quantum_potential(p, constants) for p in polars]

    n_rows = len(series) - 2
    r_phase = np.empty((n_rows, grid.n_points))
    r_cont = np.empty((n_rows, grid.n_points))
    for row in range(n_rows):
        k = row + 1
        grad_phi = gradient(guarded[k], grid.dx)
        lap_phi = second_derivative(guarded[k], grid.dx)
        grad_log = gradient(log_lam[k], grid.dx)
        dphi_dt = (
            hbar
            * np.angle(series[k + 1].values * np.conj(series[k - 1].values))
            / (2.0 * dt)
        )
        # a masked neighbour slice must poison the time stencil too
        either = polars[k - 1].node_mask | polars[k + 1].node_mask
        dphi_dt[either] = np.nan
        dlog_dt = (log_lam[k + 1] - log_lam[k - 1]) / (2.0 * dt)
        r_phase[row] = (
            grad_phi**2 / (2.0 * m) + potential_values + v_qs[k] + dphi_dt
        )
        r_cont[row] = lap_phi + 2.0 * grad_phi * grad_log + 2.0 * m * dlog_dt
    return r_phase, r_cont


@dataclass(frozen=True)
class AmplitudeRelationResult:
    """Outcome of the stationary amplitude-phase check.

    vacuous is True when the phase is flat (bound states), where the
    relation constrains nothing; deviation is None in that case.
    """

    vacuous: bool
    deviation: float | None

    def __str__(self) -> str:
        if self.vacuous:
            return "relation vacuous (constant phase)"
        return f"deviation {self.deviation:.3e}"


def verify_1d_amplitude_relation(
    polar: PolarField, constants: PhysicalConstants = PhysicalConstants()
) -> AmplitudeRelationResult:
    """Constancy of lambda^2 * dPhi/dx for a stationary 1D state.

    For scattering-type states the product equals m times the (constant)
    probability current, i.e. lambda = (dPhi/dx)^(-1/2) up to one global
    factor.  Returns the maximum relative deviation from the spatial
    median over unmasked interior points.  A flat phase (bound state)
    makes the relation vacuous; mixed-sign momentum is rejected.
    """
    phase = phase_jump_guard(polar, constants)
    p_field = gradient(phase, polar.grid.dx)[1:-1]
    lam2 = polar.modulus[1:-1] ** 2
    valid = ~np.isnan(p_field)
    if not valid.any():
        raise ValueError("no unmasked interior points to evaluate")
    p_valid = p_field[valid]
    if np.max(np.abs(p_valid)) < _VACUOUS_MOMENTUM * constants.hbar / polar.grid.dx:
        return AmplitudeRelationResult(vacuous=True, deviation=None)
    if np.any(p_valid <= 0.0):
        raise ValueError(
            "phase gradient changes sign; the stationary amplitude "
            "relation applies to one-directional (scattering) states"
        )
    product = lam2[valid] * p_valid
    med = float(np.median(product))
    deviation = float(np.max(np.abs(product - med)) / abs(med))
    return AmplitudeRelationResult(vacuous=False, deviation=deviation)


def stationary_continuity_residual(
    polar: PolarField, constants: PhysicalConstants = PhysicalConstants()
) -> np.ndarray:
    """Raw differential form lap Phi + 2 (dPhi/dx)(d ln lambda/dx), masked.

    Diagnostic companion to verify_1d_amplitude_relation: the integrated
    (median-constancy) form is the robust check, this exposes the
    pointwise residual of the stationary continuity equation.
    """
    phase = phase_jump_guard(polar, constants)
    log_lam = np.where(
        polar.node_mask, np.nan, np.log(np.where(polar.node_mask, 1.0, polar.modulus))
    )
    dx = polar.grid.dx
    return second_derivative(phase, dx) + 2.0 * gradient(phase, dx) * gradient(
        log_lam, dx
    )


def verify_oscillator_identity(
    n: int,
    eig: EigenPair,
    omega: float,
    constants: PhysicalConstants = PhysicalConstants(),
) -> float:
    """Residual of the harmonic-modulus identity, normalized.

    Checks lambda_n'' + (2m/hbar^2) [ (n+1/2) hbar w - (m w^2/2) x^2 ]
    lambda_n = 0 in multiplied form (no division by lambda_n, so nodes
    are harmless).  The identity is linear and insensitive to an overall
    sign per nodal segment, so it is evaluated on the signed
    eigenfunction: |psi| has kinks at the nodes that a second difference
    turns into O(1/dx) spikes, while psi itself stays smooth.  Returns
    max |residual| / max |lambda''| over interior points.
    """
    if n != eig.index:
        raise ValueError(f"quantum number {n} does not match eigenpair index {eig.index}")
    grid = eig.state.grid
    m, hbar = constants.mass, constants.hbar
    lam = np.real(eig.state.values)
    d2 = second_derivative(lam, grid.dx)
    bracket = (n + 0.5) * hbar * omega - 0.5 * m * omega**2 * grid.x**2
    residual = d2 + (2.0 * m / hbar**2) * bracket * lam
    interior = slice(1, -1)
    return float(
        np.max(np.abs(residual[interior])) / np.max(np.abs(d2[interior]))
    )


def verify_modified_hj(
    state: Union[EigenPair, WaveFunction],
    potential_values: np.ndarray,
    constants: PhysicalConstants = PhysicalConstants(),
    energy: float | None = None,
) -> float:
    """Max residual of (dPhi/dx)^2 = 2m (E - V_t) for a stationary state.

    Accepts an EigenPair (energy taken from it) or a WaveFunction with an
    explicit energy (scattering states).  Evaluated at unmasked interior
    points; returns max |(dPhi/dx)^2 - 2m(E - V_t)|.
    """
    if isinstance(state, EigenPair):
        psi = state.state
        energy = state.energy
    else:
        psi = state
        if energy is None:
            raise ValueError("a bare WaveFunction needs an explicit energy")
    polar = decompose(psi, constants)
    phase = phase_jump_guard(polar, constants)
    grad_phi = gradient(phase, polar.grid.dx)
    v_q = quantum_potential(polar, constants)
    v_t = total_potential(v_q, potential_values)
    residual = grad_phi**2 - 2.0 * constants.mass * (energy - v_t)
    interior = residual[1:-1]
    finite = interior[~np.isnan(interior)]
    if finite.size == 0:
        raise ValueError("every interior point is masked")
    return float(np.max(np.abs(finite)))

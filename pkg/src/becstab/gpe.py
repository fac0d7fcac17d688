"""Grid-based energy minimizer for the full mean-field functional.

This is the brute-force cross-check for the Gaussian ansatz: it discretises
the per-particle energy functional on a uniform grid and walks downhill with
norm-preserving steepest descent (first-order imaginary-time stepping).  No
closed-form input enters, so agreement with the variational module is a real
test, and the variational energy must always sit at or above the value found
here (the Gaussian is one admissible state among many).

Conventions, chosen so that a sampled Gaussian of width ``s`` reproduces the
variational energies exactly as the spacing h -> 0:

* 1D: ``values`` holds the per-particle wave function phi(x) on the symmetric
  grid [-r_max, r_max], with int |phi|^2 dx = 1 and

      e[phi] = int [ phi'^2 / 2 + (x^2/2) phi^2 + Gamma phi^4 ] dx.

* 3D: the trap is isotropic, so the ground state is spherically symmetric
  and ``values`` holds u(r) = r * phi(r) on [0, r_max] with u(0) = 0 and
  4 pi int u^2 dr = 1.  Then

      e[u] = 4 pi int [ u'^2 / 2 + (r^2/2) u^2 ] dr
           + 8 pi^2 Gamma int u^4 / r^2 dr,

  the interaction coefficient 2 pi Gamma absorbing the contact-coupling
  normalisation used throughout the package.

All integrals use trapezoidal weights; with both endpoint values pinned to
zero that reduces to a plain sum, and the summation-by-parts identity makes
the bond-difference kinetic sum equal to the 3-point second-difference form.
Energies are per particle in units of hbar*omega, as everywhere else.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, IO, Optional, Union

import numpy as np

from .units import Dimension
from .variational import EnergyBreakdown

DEFAULT_MAX_ITER = 500_000
# Relative energy change below this across a 50-iteration window ends the run.
_CONVERGENCE_RTOL = 1e-11
_CONVERGENCE_WINDOW = 50
# Collapse detection: cloud width at grid scale, or unbounded energy descent.
_COLLAPSE_WIDTH_FACTOR = 4.0
_COLLAPSE_ENERGY = -1e3
_NORM_TOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Uniform-grid discretisation parameters.

    3D grids are radial ([0, r_max] with n_points samples); 1D grids span
    [-r_max, r_max] with 2*n_points - 1 samples.  Both share the spacing
    h = r_max / (n_points - 1).  Lengths are in oscillator units.
    """

    dimension: Dimension
    r_max: float = 8.0
    n_points: int = 512

    def __post_init__(self) -> None:
        if self.n_points < 64:
            raise ValueError(f"n_points must be >= 64, got {self.n_points}")
        if self.r_max < 6.0:
            raise ValueError(f"r_max must be >= 6 oscillator lengths, got {self.r_max}")

    @property
    def spacing(self) -> float:
        return self.r_max / (self.n_points - 1)

    def axis(self) -> np.ndarray:
        if self.dimension is Dimension.D3:
            return np.linspace(0.0, self.r_max, self.n_points)
        return np.linspace(-self.r_max, self.r_max, 2 * self.n_points - 1)


@dataclass(frozen=True, eq=False)
class GridState:
    """A normalised grid wave function with its energy bookkeeping.

    ``values`` is phi (1D) or u = r*phi (3D); see the module docstring for
    the stored normalisation.  ``iterations`` counts minimizer sweeps (0 for
    hand-built states).
    """

    values: np.ndarray
    spec: GridSpec
    gamma_total: float
    energy: EnergyBreakdown
    iterations: int = 0
    converged: bool = False
    collapsed: bool = False


class _Discretisation:
    """Precomputed arrays and energy/gradient kernels for one (spec, gamma)."""

    def __init__(self, spec: GridSpec, gamma: float):
        self.spec = spec
        self.gamma = gamma
        self.h = spec.spacing
        axis = spec.axis()
        self.axis = axis
        self.sq = axis * axis
        if spec.dimension is Dimension.D3:
            self.weight = 4.0 * math.pi
            self.int_coef = 2.0 * math.pi * gamma
            quartic = np.zeros_like(axis)
            quartic[1:] = 1.0 / self.sq[1:]   # u^4/r^2 term; u(0)=0 kills r=0
        else:
            self.weight = 1.0
            self.int_coef = gamma
            quartic = np.ones_like(axis)
        self.quartic_weight = quartic

    def normalized(self, values: np.ndarray) -> np.ndarray:
        # Dirichlet grid: both endpoint samples are pinned to zero.
        out = np.array(values, dtype=float)
        out[0] = 0.0
        out[-1] = 0.0
        norm = self.norm(out)
        if norm == 0.0:
            raise ValueError("cannot normalise an all-zero grid function")
        return out / math.sqrt(norm)

    def norm(self, values: np.ndarray) -> float:
        return self.weight * self.h * float(np.dot(values, values))

    def breakdown(self, values: np.ndarray) -> EnergyBreakdown:
        bond = np.diff(values)
        kinetic = 0.5 * self.weight / self.h * float(np.dot(bond, bond))
        density = values * values
        potential = 0.5 * self.weight * self.h * float(np.dot(self.sq, density))
        interaction = (
            self.int_coef * self.weight * self.h
            * float(np.dot(self.quartic_weight, density * density))
        )
        return EnergyBreakdown.from_parts(kinetic, potential, interaction)

    def gradient(self, values: np.ndarray) -> np.ndarray:
        grad = np.empty_like(values)
        grad[1:-1] = (
            -(values[2:] - 2.0 * values[1:-1] + values[:-2]) / self.h
            + self.h * self.sq[1:-1] * values[1:-1]
            + 4.0 * self.int_coef * self.h
            * self.quartic_weight[1:-1] * values[1:-1] ** 3
        )
        grad[1:-1] *= self.weight
        grad[0] = 0.0
        grad[-1] = 0.0
        return grad

    def width_from_potential(self, potential: float) -> float:
        # <r^2> (or <x^2>) equals twice the trap term of the breakdown.
        if self.spec.dimension is Dimension.D3:
            return math.sqrt(4.0 * potential / 3.0)
        return 2.0 * math.sqrt(potential)


def sample_gaussian(spec: GridSpec, s: float = 1.0) -> np.ndarray:
    """Normalised grid samples of the Gaussian of width ``s``."""
    if not s > 0.0:
        raise ValueError(f"width must be positive, got {s}")
    axis = spec.axis()
    if spec.dimension is Dimension.D3:
        raw = axis * np.exp(-(axis * axis) / (2.0 * s * s))
    else:
        raw = np.exp(-(axis * axis) / (2.0 * s * s))
    return _Discretisation(spec, 0.0).normalized(raw)


def state_from_values(spec: GridSpec, gamma: float, values: np.ndarray) -> GridState:
    """Wrap raw grid samples into a :class:`GridState`.

    The samples must already be normalised (within 1e-9); the endpoint
    samples are pinned to zero, as the Dirichlet discretisation assumes
    fully decayed tails at the grid edge.
    """
    arr = np.array(values, dtype=float)
    expected = spec.n_points if spec.dimension is Dimension.D3 else 2 * spec.n_points - 1
    if arr.shape != (expected,):
        raise ValueError(f"expected {expected} samples for this grid, got {arr.shape}")
    arr[0] = 0.0
    arr[-1] = 0.0
    disc = _Discretisation(spec, gamma)
    norm = disc.norm(arr)
    if abs(norm - 1.0) > _NORM_TOL:
        raise ValueError(f"state is not normalised: integral of |phi|^2 = {norm!r}")
    return GridState(
        values=arr,
        spec=spec,
        gamma_total=gamma,
        energy=disc.breakdown(arr),
    )


def gaussian_state(spec: GridSpec, gamma: float, s: float = 1.0) -> GridState:
    """Ready-made normalised Gaussian state (the default minimizer start)."""
    return state_from_values(spec, gamma, sample_gaussian(spec, s))


def discrete_energy(state: GridState) -> EnergyBreakdown:
    """Trapezoidal energy of a normalised state; rejects unnormalised input."""
    disc = _Discretisation(state.spec, state.gamma_total)
    norm = disc.norm(state.values)
    if abs(norm - 1.0) > _NORM_TOL:
        raise ValueError(f"state is not normalised: integral of |phi|^2 = {norm!r}")
    return disc.breakdown(state.values)


def minimize(
    spec: GridSpec,
    gamma: float,
    init: Optional[GridState] = None,
    max_iter: int = DEFAULT_MAX_ITER,
    on_accept: Optional[Callable[[float, np.ndarray], None]] = None,
) -> GridState:
    """Norm-preserving steepest descent on the discrete energy.

    Each sweep takes a gradient step and renormalises; a step is accepted
    only if the energy does not increase, so the energy trace is monotone.
    The step size starts at h^2/4, halves on any rejected step and doubles
    after 100 consecutive acceptances, capped at 8x the initial value.

    Termination: relative energy change below 1e-11 across a 50-sweep
    window (``converged``), detected collapse of an attractive cloud to the
    grid scale (``collapsed``), or the iteration cap (neither flag set; not
    an exception).  For attractive couplings the default Gaussian start
    lies in the metastable basin, so the local minimum is found, never the
    unbounded global descent.

    ``on_accept(energy, values)`` is invoked after every accepted sweep
    with a read-only view of the live state.
    """
    disc = _Discretisation(spec, gamma)
    if init is not None:
        if init.spec != spec:
            raise ValueError("init state was built for a different grid")
        values = disc.normalized(init.values)
    else:
        values = sample_gaussian(spec, 1.0)

    energy = disc.breakdown(values)
    total = energy.total
    step0 = disc.h * disc.h / 4.0
    step = step0
    step_cap = 8.0 * step0
    streak = 0
    width_floor = _COLLAPSE_WIDTH_FACTOR * disc.h
    recent: deque[float] = deque(maxlen=_CONVERGENCE_WINDOW + 1)
    recent.append(total)

    converged = False
    collapsed = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        # Endpoints stay pinned: the gradient vanishes there by construction.
        grad = disc.gradient(values)
        trial = values - step * grad
        trial /= math.sqrt(disc.norm(trial))
        trial_energy = disc.breakdown(trial)
        if trial_energy.total <= total:
            values = trial
            energy = trial_energy
            total = trial_energy.total
            streak += 1
            if streak >= 100:
                step = min(2.0 * step, step_cap)
                streak = 0
            if on_accept is not None:
                view = values.view()
                view.flags.writeable = False
                on_accept(total, view)
            if (
                total < _COLLAPSE_ENERGY
                or disc.width_from_potential(energy.potential) < width_floor
            ):
                collapsed = True
                break
        else:
            step *= 0.5
            streak = 0
        recent.append(total)
        if len(recent) > _CONVERGENCE_WINDOW:
            if abs(recent[0] - total) < _CONVERGENCE_RTOL * max(1.0, abs(total)):
                converged = True
                break

    return GridState(
        values=values,
        spec=spec,
        gamma_total=gamma,
        energy=energy,
        iterations=iterations,
        converged=converged,
        collapsed=collapsed,
    )


def measured_width(state: GridState) -> float:
    """Root-mean-square cloud width mapped to the Gaussian ``s`` convention.

    Returns sqrt(2 <r^2> / 3) in 3D and sqrt(2 <x^2>) in 1D, which equal
    sigma/a_ho exactly when the state is Gaussian.  Collapsed states have no
    meaningful width; minimizer output that failed to converge is rejected
    too (hand-built states, ``iterations`` = 0, are always measurable).
    """
    if state.collapsed:
        raise ValueError("collapsed state has no meaningful width")
    if state.iterations > 0 and not state.converged:
        raise ValueError("unconverged minimizer state; width would be untrustworthy")
    disc = _Discretisation(state.spec, state.gamma_total)
    density = state.values * state.values
    mean_sq = disc.weight * disc.h * float(np.dot(disc.sq, density))
    if state.spec.dimension is Dimension.D3:
        return math.sqrt(2.0 * mean_sq / 3.0)
    return math.sqrt(2.0 * mean_sq)


def critical_scan(spec: GridSpec, bracket: tuple[float, float]) -> float:
    """Bisect the coupling between collapsing and stable descent outcomes.

    ``bracket`` = (gamma_lo, gamma_hi) with gamma_lo < gamma_hi < 0; the
    lower edge must collapse and the upper edge must converge, otherwise the
    bracket is rejected.  Probes are sequential and warm-start from the most
    recent stable profile.  A probe that hits the iteration cap without
    collapsing counts as stable.  Returns the bracket midpoint once its
    width is below 0.01.
    """
    gamma_lo, gamma_hi = bracket
    if not (gamma_lo < gamma_hi < 0.0):
        raise ValueError(f"bracket must satisfy gamma_lo < gamma_hi < 0, got {bracket}")

    low_state = minimize(spec, gamma_lo)
    if not low_state.collapsed:
        raise ValueError(f"bad bracket: gamma_lo={gamma_lo} did not collapse")
    high_state = minimize(spec, gamma_hi)
    if high_state.collapsed or not high_state.converged:
        raise ValueError(f"bad bracket: gamma_hi={gamma_hi} did not converge to a stable state")

    warm = high_state
    while gamma_hi - gamma_lo > 0.01:
        mid = 0.5 * (gamma_lo + gamma_hi)
        probe = minimize(spec, mid, init=warm)
        if probe.collapsed:
            gamma_lo = mid
        else:
            gamma_hi = mid
            warm = probe
    return 0.5 * (gamma_lo + gamma_hi)


def dump_profile(state: GridState, destination: Union[str, Path, IO[str]]) -> None:
    """Write the density profile |phi|^2 as two-column CSV (coordinate, density)."""
    axis = state.spec.axis()
    values = state.values
    if state.spec.dimension is Dimension.D3:
        header = "r,density"
        density = np.empty_like(values)
        density[1:] = (values[1:] / axis[1:]) ** 2
        # phi(0) = u'(0); one-sided first-order estimate from the pinned origin.
        density[0] = (values[1] / state.spec.spacing) ** 2
    else:
        header = "x,density"
        density = values * values

    lines = [header]
    lines.extend(f"{repr(float(c))},{repr(float(d))}" for c, d in zip(axis, density))
    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)  # type: ignore[union-attr]
    else:
        Path(destination).write_text(text)  # type: ignore[arg-type]

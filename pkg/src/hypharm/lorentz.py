"""Lorentz-type size functionals for radial and polar grid functions.

Functions are tabulated on radial grids (optionally crossed with a polar
angle) and |f| is replaced by its piecewise-linear interpolant.  Each grid
cell is subdivided and the interpolant is frozen to its midpoint value on
every subcell, giving a staircase approximation whose measure masses are
*exact*: the volume of a radial shell has a closed form because the density
is a finite signed sum of exponentials (see space.density_expansion).  All
functionals below -- distribution function, decreasing rearrangement,
L^{p,q} norms, the averaged M_p functional, and the mixed angular/weak
functional -- are then evaluated on the staircase in closed form, so the
only approximation error is the staircase itself (second order in the
subcell width).

Conventions.  The L^{p,q} norm carries the q/p normalisation that makes
every q give |B|^{1/p} on the indicator of a ball, and p = q reduces
exactly to the plain L^p integral of the staircase.  Polar functions use
angular weights normalised to total mass one, so a function constant in
the angle has the same size as its radial restriction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .space import SpaceError, SpaceParams, ball_volume


def _interp_complex(x: np.ndarray, xp: np.ndarray, fp: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(fp):
        return np.interp(x, xp, fp.real) + 1j * np.interp(x, xp, fp.imag)
    return np.interp(x, xp, fp)


def _check_radial_grid(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size < 2:
        raise SpaceError("radial grid must be 1-d with at least two nodes")
    if not np.all(np.isfinite(r)) or r[0] < 0.0:
        raise SpaceError("radial grid must be finite and nonnegative")
    if np.any(np.diff(r) <= 0.0):
        raise SpaceError("radial grid must be strictly increasing")
    return r


@dataclass(frozen=True)
class RadialGridFunction:
    """Complex-valued radial function sampled on a strictly increasing grid.

    The function is treated as supported on [r[0], r[-1]]; size functionals
    integrate only over the tabulated range.
    """

    space: SpaceParams
    r: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        r = _check_radial_grid(self.r)
        v = np.asarray(self.values, dtype=complex)
        if v.shape != r.shape:
            raise SpaceError("values must match the radial grid shape")
        if not np.all(np.isfinite(v)):
            raise SpaceError("values must be finite")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(
        cls,
        space: SpaceParams,
        fn: Callable[[np.ndarray], np.ndarray],
        r_max: float,
        num: int = 2001,
        r_min: float = 0.0,
    ) -> "RadialGridFunction":
        r = np.linspace(r_min, r_max, num)
        return cls(space, r, np.asarray(fn(r), dtype=complex))

    def truncated(self, R: float) -> "RadialGridFunction":
        """Restriction to [r[0], R], adding an interpolated node at R."""
        r, v = _truncate_samples(self.r, self.values, R)
        return RadialGridFunction(self.space, r, v)


@dataclass(frozen=True)
class PolarGridFunction:
    """Function of (radius, polar angle) on a product grid.

    theta_weights are angular quadrature weights, normalised to sum to one;
    when omitted they are trapezoid weights against sin^(dim-2)(theta).
    """

    space: SpaceParams
    r: np.ndarray
    theta: np.ndarray
    values: np.ndarray
    theta_weights: np.ndarray | None = None

    def __post_init__(self) -> None:
        r = _check_radial_grid(self.r)
        th = np.asarray(self.theta, dtype=float)
        if th.ndim != 1 or th.size < 1:
            raise SpaceError("theta grid must be 1-d and nonempty")
        if np.any(th < 0.0) or np.any(th > math.pi + 1e-12):
            raise SpaceError("theta nodes must lie in [0, pi]")
        if th.size > 1 and np.any(np.diff(th) <= 0.0):
            raise SpaceError("theta grid must be strictly increasing")
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (r.size, th.size):
            raise SpaceError("values must have shape (n_r, n_theta)")
        if not np.all(np.isfinite(v)):
            raise SpaceError("values must be finite")
        if self.theta_weights is None:
            w = _sin_power_trapezoid(th, self.space.dim - 2)
        else:
            w = np.asarray(self.theta_weights, dtype=float)
            if w.shape != th.shape or np.any(w < 0.0) or w.sum() <= 0.0:
                raise SpaceError("theta_weights must be nonnegative, matching theta")
            w = w / w.sum()
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "theta_weights", w)

    def a_q_profile(self, q: float) -> np.ndarray:
        """Angular L^q average at each radius (sup over angle for q = inf)."""
        if math.isinf(q):
            return np.max(np.abs(self.values), axis=1)
        if q <= 0.0:
            raise SpaceError("angular exponent must be positive")
        pw = np.abs(self.values) ** q @ self.theta_weights
        return pw ** (1.0 / q)

    def truncated(self, R: float) -> "PolarGridFunction":
        r, v = _truncate_samples(self.r, self.values, R)
        return PolarGridFunction(self.space, r, self.theta, v, self.theta_weights)


def _sin_power_trapezoid(theta: np.ndarray, exponent: int) -> np.ndarray:
    if theta.size == 1:
        return np.array([1.0])
    w = np.zeros_like(theta)
    dth = np.diff(theta)
    w[:-1] += 0.5 * dth
    w[1:] += 0.5 * dth
    w = w * np.sin(theta) ** exponent
    total = w.sum()
    if total <= 0.0:
        raise SpaceError("degenerate angular weights; refine the theta grid")
    return w / total


def _truncate_samples(
    r: np.ndarray, values: np.ndarray, R: float
) -> tuple[np.ndarray, np.ndarray]:
    R = float(R)
    if not R > r[0]:
        raise SpaceError(f"truncation radius {R} must exceed the first grid node")
    if R >= r[-1]:
        return r, values
    k = int(np.searchsorted(r, R, side="right"))
    # k >= 1 since R > r[0]
    if R - r[k - 1] <= 1e-12 * max(1.0, R):
        return r[:k], values[:k]  # R sits on a grid node already
    # otherwise append an interpolated node exactly at R
    if values.ndim == 1:
        v_R = _interp_complex(np.array([R]), r, values)
        return np.concatenate((r[:k], [R])), np.concatenate((values[:k], v_R))
    frac = (R - r[k - 1]) / (r[k] - r[k - 1])
    v_R = values[k - 1] + frac * (values[k] - values[k - 1])
    return np.concatenate((r[:k], [R])), np.vstack((values[:k], v_R[None, :]))


def _radial_cell_masses(
    space: SpaceParams, r: np.ndarray, refine: int
) -> tuple[np.ndarray, np.ndarray]:
    """Exact measures of refined subcells and their right edges."""
    edges_frac = np.arange(refine + 1) / refine
    sub = r[:-1, None] + np.diff(r)[:, None] * edges_frac[None, :]
    vols = ball_volume(space, sub)
    masses = np.maximum(np.diff(vols, axis=1), 0.0)  # clip quadrature-of-zero noise
    return masses.ravel(), sub[:, 1:].ravel()


def _midpoint_values(abs_vals: np.ndarray, refine: int) -> np.ndarray:
    """Midpoint samples of the linear interpolant on refined subcells.

    abs_vals has the radial axis first; the output flattens (cell, subcell)
    in radial order, keeping any trailing axes.
    """
    mid_frac = (np.arange(refine) + 0.5) / refine
    dv = np.diff(abs_vals, axis=0)
    mids = abs_vals[:-1, None, ...] + dv[:, None, ...] * mid_frac.reshape(
        (1, refine) + (1,) * (abs_vals.ndim - 1)
    )
    return mids.reshape((-1,) + abs_vals.shape[1:])


def _measure_atoms(
    f: RadialGridFunction | PolarGridFunction, refine: int
) -> tuple[np.ndarray, np.ndarray]:
    """Staircase of |f| as atoms (value, exact mass), unsorted."""
    if refine < 1:
        raise SpaceError("refine must be a positive integer")
    masses_r, _ = _radial_cell_masses(f.space, f.r, refine)
    mids = _midpoint_values(np.abs(f.values), refine)
    if isinstance(f, RadialGridFunction):
        return mids, masses_r
    atom_vals = mids.ravel()
    atom_masses = (masses_r[:, None] * f.theta_weights[None, :]).ravel()
    return atom_vals, atom_masses


def _sorted_atoms(
    f: RadialGridFunction | PolarGridFunction, refine: int
) -> tuple[np.ndarray, np.ndarray]:
    vals, masses = _measure_atoms(f, refine)
    order = np.argsort(-vals, kind="stable")
    v = vals[order]
    keep = v > 0.0
    return v[keep], np.cumsum(masses[order][keep])


def distribution_function(
    f: RadialGridFunction | PolarGridFunction, s: float, refine: int = 4
) -> float:
    """Measure of {|f| > s} over the tabulated range, s > 0."""
    if not s > 0.0:
        raise SpaceError("distribution function needs a level s > 0")
    vals, masses = _measure_atoms(f, refine)
    return float(masses[vals > s].sum())


def rearrangement(
    f: RadialGridFunction | PolarGridFunction,
    t: float | np.ndarray,
    refine: int = 4,
):
    """Right-continuous decreasing rearrangement f*(t) for t >= 0."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0):
        raise SpaceError("rearrangement argument must be nonnegative")
    v, cm = _sorted_atoms(f, refine)
    idx = np.searchsorted(cm, t_arr, side="right")
    if v.size == 0:
        out = np.zeros_like(t_arr)
    else:
        out = np.where(idx < v.size, v[np.minimum(idx, v.size - 1)], 0.0)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


@dataclass(frozen=True)
class LorentzEstimate:
    """A size-functional evaluation at a truncation radius.

    tail_slope is a doubling exponent: log2 of the value ratio between the
    full truncation radius and half of it (or a log-log regression slope
    when a schedule sequence is present); None when undefined.  sequence,
    when present, holds (radius, value) pairs.  functional names which
    quantity was computed ("lorentz", "m_p", or "a_pq"; for "a_pq" the q
    field is the angular exponent and the radial part is weak-type p).
    """

    p: float
    q: float
    truncation_R: float
    value: float
    tail_slope: float | None = None
    sequence: tuple[tuple[float, float], ...] | None = None
    functional: str = "lorentz"

    def __post_init__(self) -> None:
        if self.value < 0.0:
            raise SpaceError("size functionals are nonnegative")

    def as_dict(self) -> dict:
        out = {
            "functional": self.functional,
            "p": self.p,
            "q": "inf" if math.isinf(self.q) else self.q,
            "truncation_R": self.truncation_R,
            "value": self.value,
        }
        if self.tail_slope is not None and math.isfinite(self.tail_slope):
            out["tail_slope"] = self.tail_slope
        if self.sequence is not None:
            out["sequence"] = [[R, v] for R, v in self.sequence]
        return out


def _staircase_norm(v: np.ndarray, cm: np.ndarray, p: float, q: float) -> float:
    if v.size == 0:
        return 0.0
    if math.isinf(q):
        return float(np.max(v * cm ** (1.0 / p)))
    powers = cm ** (q / p)
    prev = np.concatenate(([0.0], powers[:-1]))
    return float(np.sum(v**q * (powers - prev)) ** (1.0 / q))


def _check_pq(p: float, q: float) -> tuple[float, float]:
    p = float(p)
    q = float(q)
    if not (1.0 < p < math.inf):
        raise SpaceError(f"first exponent must lie in (1, inf), got {p}")
    if q < 1.0:
        raise SpaceError(f"second exponent must be >= 1, got {q}")
    return p, q


def lorentz_norm(
    f: RadialGridFunction | PolarGridFunction,
    p: float,
    q: float,
    truncation_R: float | None = None,
    refine: int = 4,
) -> LorentzEstimate:
    """L^{p,q} norm of the staircase of |f| truncated at a radius.

    q = inf gives the weak norm sup_s s * d_f(s)^{1/p}, evaluated exactly
    on the staircase; finite q uses the closed-form integral of the
    rearrangement (normalised so every q gives measure^{1/p} on
    indicators).  tail_slope compares the truncation radius with half of
    it: log2(value(R) / value(R/2)), None when either value vanishes.
    """
    p, q = _check_pq(p, q)
    R = float(truncation_R) if truncation_R is not None else float(f.r[-1])
    if R > f.r[-1] + 1e-9:
        raise SpaceError(
            f"truncation radius {R} is beyond the tabulated grid (max {f.r[-1]})"
        )
    value = _staircase_norm(*_sorted_atoms(f.truncated(R), refine), p, q)
    slope: float | None = None
    if R / 2.0 > f.r[0]:
        half = _staircase_norm(*_sorted_atoms(f.truncated(R / 2.0), refine), p, q)
        if half > 0.0 and value > 0.0:
            slope = math.log2(value / half)
    return LorentzEstimate(p=p, q=q, truncation_R=R, value=value, tail_slope=slope)


def m_p(
    f: RadialGridFunction,
    p: float,
    r_schedule: Sequence[float] | np.ndarray,
    refine: int = 4,
) -> LorentzEstimate:
    """Ball-averaged L^p size: sup over the schedule tail of ((1/R) int_{B_R} |f|^p)^{1/p}.

    Computes the sequence ((1/R) int_{B_R} |f|^p dmu)^{1/p} on the given
    increasing radius schedule, reports the max over the tail half as the
    value, and fits the tail-half log-log slope of the sequence.
    """
    if not isinstance(f, RadialGridFunction):
        raise SpaceError("m_p is defined for radial grid functions")
    if not p > 0.0:
        raise SpaceError(f"exponent must be positive, got {p}")
    sched = np.asarray(r_schedule, dtype=float)
    if sched.ndim != 1 or sched.size < 2:
        raise SpaceError("radius schedule must be 1-d with at least two entries")
    if np.any(np.diff(sched) <= 0.0) or sched[0] <= f.r[0]:
        raise SpaceError("radius schedule must be increasing and start inside the grid")
    if sched[-1] > f.r[-1] + 1e-9:
        raise SpaceError("radius schedule runs past the tabulated grid")
    masses, edges = _radial_cell_masses(f.space, f.r, refine)
    mids = _midpoint_values(np.abs(f.values), refine)
    cum = np.concatenate(([0.0], np.cumsum(mids**p * masses)))
    edges = np.concatenate(([f.r[0]], edges))
    cum_at = np.interp(sched, edges, cum)
    seq_vals = (cum_at / sched) ** (1.0 / p)
    half = sched.size // 2
    tail_R, tail_v = sched[half:], seq_vals[half:]
    value = float(np.max(tail_v))
    slope: float | None = None
    if np.all(tail_v > 0.0):
        slope = float(np.polyfit(np.log(tail_R), np.log(tail_v), 1)[0])
    return LorentzEstimate(
        p=p,
        q=p,
        truncation_R=float(sched[-1]),
        value=value,
        tail_slope=slope,
        sequence=tuple(zip(sched.tolist(), seq_vals.tolist())),
        functional="m_p",
    )


def a_pq(
    u: PolarGridFunction,
    p: float,
    q: float,
    truncation_R: float | None = None,
    refine: int = 4,
) -> LorentzEstimate:
    """Weak-L^p norm (in the radius) of the angular L^q average of u.

    The returned estimate records the angular exponent in its q field; the
    radial functional is always weak-type (second exponent inf).
    """
    p = float(p)
    q = float(q)
    if not (1.0 < p < math.inf):
        raise SpaceError(f"first exponent must lie in (1, inf), got {p}")
    if not (math.isinf(q) or q >= 1.0):
        raise SpaceError(f"angular exponent must be >= 1 or inf, got {q}")
    profile = RadialGridFunction(u.space, u.r, u.a_q_profile(q))
    est = lorentz_norm(profile, p, math.inf, truncation_R, refine)
    return replace(est, q=q, functional="a_pq")


def radialize(u: PolarGridFunction) -> RadialGridFunction:
    """Angular average of u against its normalised weights."""
    return RadialGridFunction(u.space, u.r, u.values @ u.theta_weights)

"""Model parameters for rank-one symmetric spaces and Damek-Ricci spaces.

Every space here is determined by two nonnegative integers and a
normalization convention, and everything downstream (spherical functions,
Lorentz functionals, spectra) only ever sees the radial volume density J and
the half-sum rho.  The two conventions in force:

* ``symmetric`` - geodesic distance t, multiplicities (m1, m2) of the
  indivisible and doubled restricted roots,

      J(t) = sinh(t)^m1 * sinh(2t)^m2,      rho = (m1 + 2*m2) / 2.

  Real hyperbolic space H^n is the pair (n-1, 0).

* ``dr`` - Damek-Ricci coordinates, m = dim of the v-layer, l = dim of the
  center,

      J(r) = 2^m * sinh(r)^l * sinh(r/2)^m,  Q = m/2 + l,  rho = Q/2.

  With l = 0 this is again H^{m+1}, in the metric where the density grows
  like e^{Q r} rather than e^{2 rho t}; the two pictures of the same manifold
  are distinct parameter objects and are never mixed in one computation.

Leading constants are exactly as written above (no sphere-area factor);
``ball_volume`` accepts an optional constant for callers that want one.
All densities integrate in closed form as signed exponential sums, which is
what ``ball_volume`` and the cell masses in :mod:`.lorentz` use.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "SpaceError",
    "SpaceParams",
    "symmetric_rank_one",
    "damek_ricci",
    "real_hyperbolic",
    "make_space",
    "space_id",
    "density",
    "log_density",
    "density_log_derivative",
    "gamma_p",
    "ball_volume",
]


class SpaceError(ValueError):
    """Raised for invalid space parameters or malformed space strings."""


@dataclass(frozen=True)
class SpaceParams:
    """Immutable parameter pack for one space in one normalization.

    ``kind`` is ``"symmetric"`` or ``"dr"``.  ``m1``/``m2`` store (m1, m2)
    root multiplicities in the symmetric case and (m, l) layer dimensions in
    the DR case.  ``rho`` is the half-sum constant, ``dim`` the manifold
    dimension, ``q_hom`` the homogeneous dimension of the nilpotent part
    (equal to 2*rho in both conventions).
    """

    kind: str
    m1: int
    m2: int
    rho: float
    dim: int
    q_hom: float

    @property
    def normalization(self) -> str:
        return "sym" if self.kind == "symmetric" else "dr"

    def __str__(self) -> str:
        return space_id(self)


def symmetric_rank_one(m1: int, m2: int) -> SpaceParams:
    """Rank-one symmetric space with root multiplicities (m1, m2)."""
    _check_int(m1, "m1")
    _check_int(m2, "m2")
    if m1 + m2 < 1:
        raise SpaceError("zero-dimensional space: need m1 + m2 >= 1")
    rho = (m1 + 2 * m2) / 2.0
    return SpaceParams("symmetric", m1, m2, rho, m1 + m2 + 1, 2.0 * rho)


def damek_ricci(m: int, l: int) -> SpaceParams:
    """Damek-Ricci space with dim v = m, dim z = l.

    The H-type constraint forces m even (and >= 2) whenever the center is
    nontrivial; l = 0 waives it and gives real hyperbolic H^{m+1} in DR
    normalization.
    """
    _check_int(m, "m")
    _check_int(l, "l")
    if m + l < 1:
        raise SpaceError("zero-dimensional space: need m + l >= 1")
    if l > 0 and (m < 2 or m % 2):
        raise SpaceError(f"H-type requires even m >= 2 when l > 0, got m={m}, l={l}")
    if l == 0 and m < 1:
        raise SpaceError("need m >= 1 when l = 0")
    q = m / 2.0 + l
    return SpaceParams("dr", m, l, q / 2.0, m + l + 1, q)


def real_hyperbolic(n: int) -> SpaceParams:
    """H^n as a symmetric space: identical to symmetric_rank_one(n-1, 0)."""
    _check_int(n, "n")
    if n < 2:
        raise SpaceError(f"real hyperbolic space needs n >= 2, got {n}")
    return symmetric_rank_one(n - 1, 0)


_SPACE_RE = re.compile(
    r"^\s*(?:[hH](?P<n>\d+)|sym:(?P<s1>\d+)\s*,\s*(?P<s2>\d+)|dr:(?P<d1>\d+)\s*,\s*(?P<d2>\d+))"
    r"\s*(?:;\s*norm=(?P<norm>sym|dr)\s*)?$"
)


def make_space(spec: str) -> SpaceParams:
    """Build a space from its configuration string.

    Grammar: ``"H<n>"`` | ``"sym:<m1>,<m2>"`` | ``"dr:<m>,<l>"``, optionally
    followed by ``";norm=sym"`` or ``";norm=dr"``.  ``H<n>`` defaults to the
    symmetric normalization; ``"H<n>;norm=dr"`` requests the same manifold as
    a DR space, i.e. damek_ricci(n-1, 0).  Asking for sym:... in DR
    normalization (or vice versa) is a contradiction and raises SpaceError.
    """
    match = _SPACE_RE.match(spec)
    if match is None:
        raise SpaceError(f"cannot parse space spec {spec!r}")
    norm = match.group("norm")
    if match.group("n") is not None:
        n = int(match.group("n"))
        if norm == "dr":
            if n < 2:
                raise SpaceError(f"real hyperbolic space needs n >= 2, got {n}")
            return damek_ricci(n - 1, 0)
        return real_hyperbolic(n)
    if match.group("s1") is not None:
        if norm == "dr":
            raise SpaceError("sym:... parameters cannot carry norm=dr")
        return symmetric_rank_one(int(match.group("s1")), int(match.group("s2")))
    if norm == "sym":
        raise SpaceError("dr:... parameters cannot carry norm=sym")
    return damek_ricci(int(match.group("d1")), int(match.group("d2")))


def space_id(space: SpaceParams) -> str:
    """Canonical round-trippable string, e.g. ``"sym:2,0"`` or ``"dr:2,1"``."""
    prefix = "sym" if space.kind == "symmetric" else "dr"
    return f"{prefix}:{space.m1},{space.m2}"


def density(space: SpaceParams, r):
    """Radial volume density J(r); scalar or ndarray, r >= 0.

    Values overflow float64 once (2*rho)*r exceeds ~700; callers staying
    below r = 300/rho are safe.  Use log_density past that.
    """
    r = _check_radius(r)
    if space.kind == "symmetric":
        return np.sinh(r) ** space.m1 * np.sinh(2.0 * r) ** space.m2
    return 2.0**space.m1 * np.sinh(r) ** space.m2 * np.sinh(r / 2.0) ** space.m1


def log_density(space: SpaceParams, r):
    """log J(r) for r > 0, stable for large r."""
    r = _check_radius(r)
    if np.any(r <= 0):
        raise SpaceError("log_density needs r > 0")
    # log sinh(x) = x - log 2 + log1p(-e^{-2x}) avoids overflow.
    def logsinh(x):
        return x - math.log(2.0) + np.log1p(-np.exp(-2.0 * x))

    if space.kind == "symmetric":
        return space.m1 * logsinh(r) + space.m2 * logsinh(2.0 * r)
    return (
        space.m1 * math.log(2.0)
        + space.m2 * logsinh(r)
        + space.m1 * logsinh(r / 2.0)
    )


def density_log_derivative(space: SpaceParams, r):
    """J'(r)/J(r); requires r > 0 (pole at the origin)."""
    r = _check_radius(r)
    if np.any(r <= 0):
        raise SpaceError("density_log_derivative needs r > 0")
    if space.kind == "symmetric":
        return space.m1 / np.tanh(r) + 2.0 * space.m2 / np.tanh(2.0 * r)
    return space.m2 / np.tanh(r) + 0.5 * space.m1 / np.tanh(r / 2.0)


def gamma_p(p: float) -> float:
    """gamma_p = 2/p - 1 on 0 < p <= 2; the strip half-width is gamma_p*rho."""
    if not 0.0 < p <= 2.0:
        raise SpaceError(f"gamma_p defined for 0 < p <= 2, got p={p}")
    return 2.0 / p - 1.0


@lru_cache(maxsize=None)
def density_expansion(space: SpaceParams) -> tuple[tuple[float, float], ...]:
    """J(r) as a signed exponential sum: tuples (mu, coeff) with
    J(r) = sum coeff * e^{mu r}.  Exact; at most (m1+1)(m2+1) terms."""
    terms: dict[float, float] = {}
    if space.kind == "symmetric":
        a, b = space.m1, space.m2
        for j in range(a + 1):
            cj = math.comb(a, j) * (-1.0) ** j / 2.0**a
            for i in range(b + 1):
                ci = math.comb(b, i) * (-1.0) ** i / 2.0**b
                mu = float((a - 2 * j) + 2 * (b - 2 * i))
                terms[mu] = terms.get(mu, 0.0) + cj * ci
    else:
        m, l = space.m1, space.m2
        for j in range(l + 1):
            cj = math.comb(l, j) * (-1.0) ** j / 2.0**l
            for i in range(m + 1):
                ci = math.comb(m, i) * (-1.0) ** i  # 2^m prefactor cancels 2^{-m}
                mu = float(l - 2 * j) + (m - 2 * i) / 2.0
                terms[mu] = terms.get(mu, 0.0) + cj * ci
    return tuple(sorted(terms.items()))


def ball_volume(space: SpaceParams, r, sphere_constant: float = 1.0):
    """Volume of the ball of radius r: sphere_constant * integral_0^r J.

    Exact (closed-form antiderivative of the exponential sum), vectorized
    over r.  The default constant 1.0 matches the bare density convention;
    pass the sphere area of S^{dim-1} to get geometric volumes.
    """
    r = _check_radius(r)
    out = np.zeros_like(np.asarray(r, dtype=float))
    for mu, coeff in density_expansion(space):
        if mu == 0.0:
            out = out + coeff * r
        else:
            out = out + coeff * np.expm1(mu * r) / mu
    out = sphere_constant * out
    return float(out) if np.isscalar(r) or np.ndim(r) == 0 else out


def _check_int(value, name: str) -> None:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise SpaceError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise SpaceError(f"{name} must be nonnegative, got {value}")


def _check_radius(r):
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise SpaceError("radius must be finite and >= 0")
    return arr if arr.ndim else float(arr)

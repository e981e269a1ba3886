"""Power-sequence verification engine for finite eigenfunction combinations.

A combination f = sum c_i phi_{lambda_i} is an exact object for the radial
Laplacian: Delta^k f has coefficients c_i * Lambda_i^k with
Lambda_i = -(lambda_i^2 + rho^2), for every integer k (negative powers
included when no Lambda_i vanishes).  The engine tabulates the normalized
powers Delta^k f / z^k on a radial grid, measures a chosen size functional
per k, and classifies the run:

  - "eigenfunction"      uniform bounds hold and Delta f = -|z| f up to a
                         small residual;
  - "bounded_not_eigen"  uniform bounds hold but the residual is large
                         (equal-modulus constructions land here);
  - "unbounded"          the per-k values spread beyond the configured
                         ratio, or they keep growing when the truncation
                         radius doubles.

Thresholds live in RoeConfig and are deliberately crude: the quantities
they separate differ by orders of magnitude in every instance of interest.
grid differentiation is never used to *generate* the sequence, only the
exact coefficient action; finite differences appear solely in residual
checks elsewhere.

A one-dimensional Euclidean demo (sums of sines under d^2/dx^2) ships with
the same report type, as the flat-space baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericsError
from .lorentz import PolarGridFunction, RadialGridFunction, a_pq, lorentz_norm, m_p
from .space import SpaceError, SpaceParams, gamma_p
from .spherical import SpectralPoint, phi_ode

_NORM_KINDS = (
    "weak_pprime",
    "M_pprime",
    "A_pprime_q",
    "sup_phi_ratio",
    "sup_weighted_infty",
    "sup_infty",
)


@dataclass(frozen=True)
class RoeConfig:
    """Classification thresholds (documented defaults, adjustable).

    bounded_ratio: max/min of per-k values must not exceed this;
    stability_tol: relative change of any per-k value when the truncation
    radius doubles (half vs full) must not exceed this;
    residual_tol: eigen-residual threshold for the eigenfunction verdict.
    """

    bounded_ratio: float = 10.0
    stability_tol: float = 0.10
    residual_tol: float = 1e-4


@dataclass(frozen=True)
class NormSpec:
    """Which size functional to apply per k.

    kind: one of weak_pprime (weak-L^p norm), M_pprime (ball-average
    functional), A_pprime_q (angular q-mean then radial weak-p),
    sup_phi_ratio (sup of |f|/|phi_lam_ref|), sup_weighted_infty (sup of
    |f|/phi_{i gamma_p rho}), sup_infty (plain sup, Euclidean demo).
    p is the Lebesgue exponent of the functional (the weight exponent for
    sup_weighted_infty); q is the angular exponent for A_pprime_q; lam_ref
    is the reference spectral parameter for sup_phi_ratio.
    """

    kind: str = "weak_pprime"
    p: float = 2.0
    q: float = 2.0
    lam_ref: complex | None = None

    def __post_init__(self) -> None:
        if self.kind not in _NORM_KINDS:
            raise SpaceError(f"unknown norm kind {self.kind!r}; pick from {_NORM_KINDS}")
        if self.kind == "sup_phi_ratio" and self.lam_ref is None:
            raise SpaceError("sup_phi_ratio needs lam_ref")


@dataclass(frozen=True)
class EigenCombination:
    """Finite combination sum c_i phi_{lambda_i} on a fixed space.

    The lambda_i must be pairwise distinct up to sign (phi is even in
    lambda, so a repeated +-lambda would be a disguised single term).
    """

    space: SpaceParams
    terms: tuple[tuple[complex, SpectralPoint], ...]

    def __post_init__(self) -> None:
        terms = tuple((complex(c), pt) for c, pt in self.terms)
        if not terms:
            raise SpaceError("combination needs at least one term")
        for c, pt in terms:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise SpaceError("coefficients must be finite")
            if not isinstance(pt, SpectralPoint):
                raise SpaceError("terms must pair coefficients with SpectralPoint")
            if abs(pt.rho - self.space.rho) > 1e-12 * max(1.0, self.space.rho):
                raise SpaceError("spectral point was built for a different space")
        sq = [pt.lam**2 for _, pt in terms]
        for i in range(len(sq)):
            for j in range(i + 1, len(sq)):
                if abs(sq[i] - sq[j]) <= 1e-12 * (1.0 + abs(sq[i]) + abs(sq[j])):
                    raise SpaceError(
                        "spectral parameters must be pairwise distinct up to sign"
                    )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_lambdas(
        cls,
        space: SpaceParams,
        lams: Sequence[complex],
        coeffs: Sequence[complex] | None = None,
    ) -> "EigenCombination":
        if coeffs is None:
            coeffs = [1.0] * len(lams)
        if len(coeffs) != len(lams):
            raise SpaceError("need one coefficient per spectral parameter")
        pts = [SpectralPoint.for_space(space, lam) for lam in lams]
        return cls(space, tuple(zip(map(complex, coeffs), pts)))

    @property
    def eigenvalues(self) -> tuple[complex, ...]:
        return tuple(pt.eigenvalue for _, pt in self.terms)

    @property
    def coefficients(self) -> tuple[complex, ...]:
        return tuple(c for c, _ in self.terms)

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        """Pointwise values sum c_i phi_{lambda_i}(t)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for c, pt in self.terms:
            out = out + c * phi_ode(self.space, pt.lam, t)
        return out


def laplacian_power(f: EigenCombination, k: int) -> EigenCombination:
    """Coefficient-exact k-th Laplacian power (k any integer).

    Each coefficient is multiplied by Lambda_i^k; negative k requires every
    eigenvalue to be nonzero.
    """
    k = int(k)
    if k == 0:
        return f
    new_terms = []
    for c, pt in f.terms:
        w = pt.eigenvalue
        if k < 0 and abs(w) == 0.0:
            raise SpaceError("negative power undefined: a term has zero eigenvalue")
        new_terms.append((c * w**k, pt))
    return EigenCombination(f.space, tuple(new_terms))


def eigen_residual(
    f: EigenCombination, w: complex, probe_grid: np.ndarray
) -> float:
    """sup |Delta f - w f| / sup |f| on the probe grid.

    Delta f is exact (coefficient action); only phi evaluation error enters.
    The ratio is scale-invariant in f.
    """
    grid = np.asarray(probe_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise SpaceError("probe grid must be a nonempty 1-d radius array")
    fv = f.evaluate(grid)
    dfv = laplacian_power(f, 1).evaluate(grid)
    denom = float(np.max(np.abs(fv)))
    if denom == 0.0:
        raise NumericsError("combination vanishes on the probe grid")
    return float(np.max(np.abs(dfv - complex(w) * fv)) / denom)


@dataclass(frozen=True)
class RoeReport:
    """Outcome of a power-sequence run; serializable for the CLI."""

    z: complex
    k_range: tuple[int, int]
    norm_kind: NormSpec
    per_k_values: tuple[float, ...]
    bound_M: float
    eigen_residual: float
    verdict: str
    theorem_tag: str = ""
    stability: float = 0.0
    per_k_values_half_R: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in self.per_k_values):
            raise NumericsError("per-k values must be finite")

    @property
    def ks(self) -> list[int]:
        return list(range(self.k_range[0], self.k_range[1] + 1))

    def as_dict(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "k_range": list(self.k_range),
            "norm_kind": {
                "kind": self.norm_kind.kind,
                "p": self.norm_kind.p,
                "q": self.norm_kind.q,
                "lam_ref": None
                if self.norm_kind.lam_ref is None
                else [
                    complex(self.norm_kind.lam_ref).real,
                    complex(self.norm_kind.lam_ref).imag,
                ],
            },
            "per_k_values": list(self.per_k_values),
            "bound_M": self.bound_M,
            "eigen_residual": self.eigen_residual,
            "stability": self.stability,
            "verdict": self.verdict,
            "theorem_tag": self.theorem_tag,
        }


def _norm_on_grid(
    space: SpaceParams,
    r: np.ndarray,
    vals: np.ndarray,
    norm: NormSpec,
    R: float,
    phi_weight: np.ndarray | None,
) -> float:
    """Dispatch a size functional on tabulated values, truncated at R."""
    if norm.kind in ("weak_pprime",):
        f = RadialGridFunction(space, r, vals)
        return lorentz_norm(f, norm.p, math.inf, truncation_R=R).value
    if norm.kind == "M_pprime":
        f = RadialGridFunction(space, r, vals)
        sched = np.linspace(R / 8.0, R, 16)
        return m_p(f, norm.p, sched).value
    if norm.kind == "A_pprime_q":
        theta = np.linspace(0.0, math.pi, 9)
        u = PolarGridFunction(space, r, theta, np.tile(vals[:, None], (1, 9)))
        return a_pq(u, norm.p, norm.q, truncation_R=R).value
    # sup-type functionals
    mask = r <= R
    av = np.abs(vals[mask])
    if norm.kind == "sup_infty":
        return float(np.max(av))
    w = np.abs(phi_weight[mask])
    ok = w >= 1e-8 * np.max(w)
    return float(np.max(av[ok] / w[ok]))


def roe_verify(
    space: SpaceParams,
    f: EigenCombination,
    z: complex,
    norm: NormSpec | str = "weak_pprime",
    k_range: tuple[int, int] = (-8, 8),
    truncation_R: float = 40.0,
    num: int | None = None,
    config: RoeConfig = RoeConfig(),
    theorem_tag: str = "",
) -> RoeReport:
    """Run the normalized power sequence Delta^k f / z^k through a functional.

    For each k in k_range the chosen functional of Delta^k f / z^k is
    computed at truncation_R and at truncation_R/2 (the doubling-stability
    probe).  bound_M is the max over k at the full radius.  The eigen
    residual is always measured against -|z| regardless of the phase of z.
    """
    if str(space) != str(f.space):
        raise SpaceError("combination was built on a different space")
    z = complex(z)
    if z == 0:
        raise SpaceError("modulus scale z must be nonzero")
    kmin, kmax = int(k_range[0]), int(k_range[1])
    if kmin > kmax:
        raise SpaceError("empty k range")
    if not truncation_R > 0.0:
        raise SpaceError("truncation radius must be positive")
    if isinstance(norm, str):
        norm = NormSpec(kind=norm)
    if num is None:
        num = max(1601, int(60.0 * truncation_R) + 1)
    r = np.linspace(0.0, truncation_R, num)

    phis = [phi_ode(space, pt.lam, r) for _, pt in f.terms]
    lams = f.eigenvalues
    coeffs = f.coefficients
    if kmin < 0 and any(abs(w) == 0.0 for w in lams):
        raise SpaceError("negative powers undefined: a term has zero eigenvalue")

    phi_weight = None
    if norm.kind == "sup_phi_ratio":
        phi_weight = phi_ode(space, norm.lam_ref, r)
    elif norm.kind == "sup_weighted_infty":
        lam_w = 1j * gamma_p(norm.p) * space.rho
        phi_weight = phi_ode(space, lam_w, r)

    per_full: list[float] = []
    per_half: list[float] = []
    for k in range(kmin, kmax + 1):
        ck = [c * (w / z) ** k for c, w in zip(coeffs, lams)]
        vals = np.zeros(r.shape, dtype=complex)
        for c, phi in zip(ck, phis):
            vals = vals + c * phi
        if not np.all(np.isfinite(vals)):
            raise NumericsError(f"power k={k} overflowed the tabulation")
        per_full.append(_norm_on_grid(space, r, vals, norm, truncation_R, phi_weight))
        per_half.append(
            _norm_on_grid(space, r, vals, norm, truncation_R / 2.0, phi_weight)
        )

    # eigen_residual against -|z|, reusing the tabulated phi's (the exact
    # coefficient action makes Delta f a relabeled combination)
    fv = np.zeros(r.shape, dtype=complex)
    dfv = np.zeros(r.shape, dtype=complex)
    for c, w, phi in zip(coeffs, lams, phis):
        fv = fv + c * phi
        dfv = dfv + c * w * phi
    denom = float(np.max(np.abs(fv)))
    if denom == 0.0:
        raise NumericsError("combination vanishes on the probe grid")
    resid = float(np.max(np.abs(dfv + abs(z) * fv)) / denom)

    vmax, vmin = max(per_full), min(per_full)
    ratio_ok = vmin > 0.0 and vmax / vmin <= config.bounded_ratio
    stability = 0.0
    for vf, vh in zip(per_full, per_half):
        if vh > 0.0:
            stability = max(stability, abs(vf - vh) / vh)
        elif vf > 0.0:
            stability = math.inf
    bounded = ratio_ok and stability <= config.stability_tol
    if not bounded:
        verdict = "unbounded"
    elif resid <= config.residual_tol:
        verdict = "eigenfunction"
    else:
        verdict = "bounded_not_eigen"

    return RoeReport(
        z=z,
        k_range=(kmin, kmax),
        norm_kind=norm,
        per_k_values=tuple(per_full),
        bound_M=vmax,
        eigen_residual=resid,
        verdict=verdict,
        theorem_tag=theorem_tag,
        stability=stability,
        per_k_values_half_R=tuple(per_half),
    )


def euclid_roe_demo(
    alpha: float,
    terms: Sequence[tuple[float, float] | tuple[float, float, float]],
    k_range: tuple[int, int] = (-10, 10),
    x_max: float = 100.0,
    num: int = 8001,
    config: RoeConfig = RoeConfig(),
) -> RoeReport:
    """Flat 1-D baseline: f = sum c_j sin(omega_j x + phase_j) under d^2/dx^2.

    Exact powers multiply each coefficient by (-omega_j^2)^k; per-k values
    are sup norms of Delta^k f / alpha^k on [0, x_max], with the same
    doubling-stability probe and verdict rules as the curved runs.  A
    bounded two-sided run forces every omega_j^2 = alpha, which is exactly
    what the verdict separates.
    """
    if not alpha > 0.0:
        raise SpaceError("alpha must be positive")
    if not terms:
        raise SpaceError("need at least one sine term")
    parsed = []
    for term in terms:
        if len(term) == 2:
            c, om = term
            ph = 0.0
        else:
            c, om, ph = term
        if om == 0.0:
            raise SpaceError("zero frequency not allowed (power sequence degenerates)")
        parsed.append((float(c), float(om), float(ph)))
    kmin, kmax = int(k_range[0]), int(k_range[1])
    if kmin > kmax:
        raise SpaceError("empty k range")
    x = np.linspace(0.0, x_max, num)
    waves = [c * np.sin(om * x + ph) for c, om, ph in parsed]
    half = x <= x_max / 2.0

    per_full: list[float] = []
    per_half: list[float] = []
    for k in range(kmin, kmax + 1):
        vals = np.zeros_like(x)
        for (c, om, ph), wave in zip(parsed, waves):
            vals = vals + ((-om * om) / alpha) ** k * wave
        per_full.append(float(np.max(np.abs(vals))))
        per_half.append(float(np.max(np.abs(vals[half]))))

    fv = np.sum(waves, axis=0)
    dfv = np.sum([-om * om * wave for (c, om, ph), wave in zip(parsed, waves)], axis=0)
    denom = float(np.max(np.abs(fv)))
    if denom == 0.0:
        raise NumericsError("the sine combination vanishes on the grid")
    resid = float(np.max(np.abs(dfv + alpha * fv)) / denom)

    vmax, vmin = max(per_full), min(per_full)
    ratio_ok = vmin > 0.0 and vmax / vmin <= config.bounded_ratio
    stability = max(
        (abs(vf - vh) / vh if vh > 0.0 else math.inf)
        for vf, vh in zip(per_full, per_half)
    )
    bounded = ratio_ok and stability <= config.stability_tol
    if not bounded:
        verdict = "unbounded"
    elif resid <= config.residual_tol:
        verdict = "eigenfunction"
    else:
        verdict = "bounded_not_eigen"
    return RoeReport(
        z=complex(alpha),
        k_range=(kmin, kmax),
        norm_kind=NormSpec(kind="sup_infty"),
        per_k_values=tuple(per_full),
        bound_M=vmax,
        eigen_residual=resid,
        verdict=verdict,
        theorem_tag="flat_baseline",
        stability=stability,
        per_k_values_half_R=tuple(per_half),
    )

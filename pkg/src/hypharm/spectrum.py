"""Geometry of the L^p spectrum regions and equal-modulus solvers.

The map Lambda(z) = -(z^2 + rho^2) sends the horizontal strip
|Im z| <= gamma_p * rho to a filled parabolic region sigma_p in the
eigenvalue plane (a ray on the negative real axis when p = 2, since the
strip degenerates to the real line).  Because gamma_p = |2/p - 1| is the
same for p and its conjugate exponent, sigma_p = sigma_{p'}; exponents
above 2 are therefore mapped to their conjugates throughout.

On the horizontal line Im z = gamma * rho the modulus |Lambda| is strictly
increasing in Re z >= 0, so "find a point of given modulus on a given
line" has a closed-form solution; that solver is the engine behind the
two-term equal-modulus combinations whose power sequences stay uniformly
bounded without being eigenfunctions, and behind the one-sided pairs whose
backward powers blow up.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .roe import EigenCombination
from .space import SpaceError, SpaceParams, gamma_p


class NoSolutionError(SpaceError):
    """Requested modulus is below the minimum attainable on the line."""


def lambda_map(space: SpaceParams, z: complex) -> complex:
    """Eigenvalue parameterization Lambda(z) = -(z^2 + rho^2)."""
    z = complex(z)
    return -(z * z + space.rho**2)


def _effective_gamma(p: float) -> float:
    p = float(p)
    if p < 1.0 or math.isinf(p) or math.isnan(p):
        raise SpaceError(f"exponent must be a real number >= 1, got {p}")
    return abs(2.0 / p - 1.0)


@dataclass(frozen=True)
class SpectrumRegion:
    """The region sigma_p for one space, with its boundary parameterization.

    The boundary curve is alpha -> Lambda(alpha + i gamma rho); for p = 2
    it degenerates to the real ray (-inf, -rho^2].
    """

    space: SpaceParams
    p: float

    def __post_init__(self) -> None:
        _effective_gamma(self.p)  # validates

    @property
    def gamma(self) -> float:
        return _effective_gamma(self.p)

    def boundary(self, alphas: np.ndarray) -> np.ndarray:
        """Boundary points Lambda(alpha + i gamma rho) for real alpha."""
        a = np.asarray(alphas, dtype=float)
        z = a + 1j * self.gamma * self.space.rho
        return -(z * z + self.space.rho**2)

    def contains(self, w: complex) -> bool:
        return spectrum_contains(self.space, self.p, w)


def spectrum_contains(space: SpaceParams, p: float, w: complex) -> bool:
    """Whether w lies in sigma_p (boundary included, small float slack)."""
    gamma = _effective_gamma(p)
    z = cmath.sqrt(-complex(w) - space.rho**2)
    bound = gamma * space.rho
    return abs(z.imag) <= bound + 1e-9 * (1.0 + bound)


def min_modulus_on_spectrum(
    space: SpaceParams,
    p: float,
    alpha_max: float = 10.0,
    step: float = 1e-4,
) -> float:
    """min over sigma_p of |w|, by grid minimization over the boundary.

    The minimum of |Lambda| over the region sits on the boundary line (the
    modulus grows with |Im z| constrained away from rho), so scanning the
    boundary parameter suffices.  Closed form for reference:
    rho^2 (1 - gamma_p^2) = 4 rho^2 / (p p').
    """
    p = float(p)
    if p <= 1.0:
        raise SpaceError(f"exponent must lie in (1, 2] (or its conjugate), got {p}")
    if p > 2.0:
        p = p / (p - 1.0)
    gamma = _effective_gamma(p)
    n = int(round(2.0 * alpha_max / step)) + 1
    alphas = np.linspace(-alpha_max, alpha_max, n)
    z = alphas + 1j * gamma * space.rho
    w = -(z * z + space.rho**2)
    return float(np.min(np.abs(w)))


def equal_modulus_solve(
    space: SpaceParams, gamma: float, target_modulus: float
) -> tuple[float, float]:
    """Point of given |Lambda| on the line Im z = gamma rho.

    Returns (s, theta) with s >= 0, |Lambda(s + i gamma rho)| =
    target_modulus, and theta = arg Lambda(s + i gamma rho) normalized to
    (0, 2pi].  |Lambda|^2 = (s^2 + rho^2 - gamma^2 rho^2)^2 + 4 s^2 gamma^2
    rho^2 is strictly increasing in s >= 0, so the solution is unique; in
    x = s^2 the equation is an explicit quadratic.
    """
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise SpaceError(f"gamma must lie in [0, 1], got {gamma}")
    T = float(target_modulus)
    if not T > 0.0:
        raise SpaceError("target modulus must be positive")
    rho = space.rho
    b = gamma * rho
    floor = rho**2 - b**2  # modulus at s = 0
    if T < floor * (1.0 - 1e-12):
        raise NoSolutionError(
            f"target modulus {T} is below the line minimum {floor}"
        )
    x = -(rho**2 + b**2) + math.sqrt(T**2 + 4.0 * rho**2 * b**2)
    s = math.sqrt(max(x, 0.0))
    w = lambda_map(space, s + 1j * b)
    theta = math.atan2(w.imag, w.real)
    if theta <= 0.0:
        theta += 2.0 * math.pi
    return s, theta


@dataclass(frozen=True)
class SharpnessPair:
    """Two-term equal-modulus combination with its phase bookkeeping.

    combination = phi_{lam1} + phi_{lam2} with |Lambda(lam1)| =
    |Lambda(lam2)| = target_modulus; theta and psi are the arguments of the
    two eigenvalues, so the k-th power has coefficients
    target_modulus^k e^{ik theta} and target_modulus^k e^{ik psi}.
    """

    combination: EigenCombination
    theta: float
    psi: float
    target_modulus: float
    p: float
    q: float
    r: float
    beta: float


def counterexample_pair(
    space: SpaceParams, p: float, beta: float
) -> SharpnessPair:
    """Uniformly-bounded-but-not-eigen two-term combination inside S_p.

    Picks intermediate exponents q, r splitting (p, 2) into thirds, then
    solves for points of modulus |Lambda(beta + i gamma_p rho)| on the two
    lower boundary lines Im z = -gamma_q rho, -gamma_r rho.  Both spectral
    parameters are strictly inside the strip S_p, the two eigenvalues share
    one modulus but differ in phase, and the combination is not an
    eigenfunction.  Infeasible targets (beta too small for the inner lines)
    propagate as NoSolutionError.
    """
    p = float(p)
    beta = float(beta)
    if not 1.0 < p < 2.0:
        raise SpaceError(f"exponent must lie strictly inside (1, 2), got {p}")
    if beta == 0.0:
        raise SpaceError("beta must be nonzero (target off the region vertex)")
    g_p = gamma_p(p)
    T = abs(lambda_map(space, beta + 1j * g_p * space.rho))
    q = p + (2.0 - p) / 3.0
    r = p + 2.0 * (2.0 - p) / 3.0
    lams = []
    phases = []
    for expo in (q, r):
        g = gamma_p(expo)
        s, theta_upper = equal_modulus_solve(space, g, T)
        # the construction sits on the conjugate line Im z = -g rho, so the
        # eigenvalue is the conjugate of the solver's: flip the phase
        lams.append(s - 1j * g * space.rho)
        phase = (2.0 * math.pi - theta_upper) % (2.0 * math.pi)
        phases.append(phase)
    combo = EigenCombination.from_lambdas(space, lams, [1.0, 1.0])
    return SharpnessPair(
        combination=combo,
        theta=phases[0],
        psi=phases[1],
        target_modulus=T,
        p=p,
        q=q,
        r=r,
        beta=beta,
    )


def one_sided_pair(space: SpaceParams, alpha: float) -> EigenCombination:
    """phi_{alpha/2} + phi_{alpha/3}: both eigenvalue moduli sit strictly
    below alpha^2 + rho^2, so forward powers stay bounded while backward
    powers of the normalized sequence grow geometrically."""
    alpha = float(alpha)
    if alpha == 0.0:
        raise SpaceError("alpha must be nonzero")
    return EigenCombination.from_lambdas(space, [alpha / 2.0, alpha / 3.0], [1.0, 1.0])

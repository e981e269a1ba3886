"""Poisson kernels and Poisson transforms, in two boundary pictures.

N-picture (DR normalization).  The kernel lives on the nilpotent factor
N = v x z and is radial in (|X|, |Y|) = (u, v):

    P_a(u, v) = C * a^Q * ((a + u^2/4)^2 + v^2)^(-Q),    a = e^t,

with C fixed so the kernel has unit mass against
sigma_{m-1} sigma_{l-1} u^(m-1) v^(l-1) du dv (t-independent by dilation;
``normalize_C``).  When the center is trivial (l = 0) the v-slot is absent
and P_a(u) = C a^Q (a + u^2/4)^(-2Q).  Complex powers of P feed the
integral-picture spherical function, see ``spherical.phi_n_integral``.

KM-picture (symmetric normalization, real hyperbolic H^n with n >= 3).
Boundary data F on the sphere S^(n-1), normalized measure, transform

    (P_lam F)(x) = int_{S^(n-1)} F(b) (cosh t - sinh t cos psi)^(-(i lam + rho)) db

where t = d(o, x) and psi is the angle between the direction of x and b.
The constant function maps to the spherical function, which is the anchor
test for the kernel's normalization.  Only zonal (axially symmetric) data is
supported, so fields live on a polar (t, theta) grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn
from scipy.special import roots_chebyt, roots_gegenbauer

from .errors import NumericsError
from .space import SpaceError, SpaceParams

__all__ = [
    "ZonalBoundary",
    "NRadialBoundary",
    "PoissonField",
    "sphere_area",
    "poisson_kernel_N",
    "normalize_C",
    "n_transform_radial",
    "poisson_transform_KM",
    "mean_value_check",
    "sup_envelope",
    "zonal_mode_profiles",
    "mode_ode_residual",
]


def sphere_area(k: int) -> float:
    """Surface area of S^(k-1) in R^k; sphere_area(1) = 2 (two points)."""
    if k < 1:
        raise SpaceError(f"sphere_area needs k >= 1, got {k}")
    return 2.0 * math.pi ** (k / 2.0) / gamma_fn(k / 2.0)


@dataclass(frozen=True)
class ZonalBoundary:
    """Axially symmetric boundary data on S^(n-1): theta -> complex."""

    fn: Callable[[np.ndarray], np.ndarray]
    name: str = "zonal"


@dataclass(frozen=True)
class NRadialBoundary:
    """Boundary data on N radial in both layers: (u, v) -> complex."""

    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = "n-radial"


def _require_dr(space: SpaceParams) -> None:
    if space.kind != "dr":
        raise SpaceError("N-picture kernel needs a DR-normalized space")


def _require_km(space: SpaceParams) -> None:
    if space.kind != "symmetric" or space.m2 != 0 or space.dim < 3:
        raise SpaceError(
            "KM-picture transform implemented for real hyperbolic H^n "
            f"(symmetric, m2 = 0, dim >= 3); got {space}"
        )


def poisson_kernel_N(space: SpaceParams, t: float, u, v=None, constant: float | None = None):
    """N-picture Poisson kernel P_{e^t}(u, v); v is ignored/forbidden when l = 0.

    Vectorized over u, v.  ``constant`` overrides the normalizing C (pass 1.0
    for the bare kernel).
    """
    _require_dr(space)
    m, l = space.m1, space.m2
    c = normalize_C(space) if constant is None else constant
    a = math.exp(t)
    u = np.asarray(u, dtype=float)
    if l == 0:
        if v is not None:
            raise SpaceError("space has trivial center; kernel takes u only")
        return c * a**space.q_hom * (a + u**2 / 4.0) ** (-2.0 * space.q_hom)
    v = np.asarray(v, dtype=float)
    base = (a + u**2 / 4.0) ** 2 + v**2
    return c * a**space.q_hom * base ** (-space.q_hom)


@lru_cache(maxsize=None)
def normalize_C(space: SpaceParams) -> float:
    """Normalizing constant: unit kernel mass at t = 0 (hence every t)."""
    _require_dr(space)
    m, l = space.m1, space.m2
    q = space.q_hom
    if l == 0:
        val, err = quad(
            lambda u: (1.0 + u**2 / 4.0) ** (-2.0 * q) * u ** (m - 1),
            0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200,
        )
        mass = sphere_area(m) * val
    else:
        def inner(u: float) -> float:
            b = (1.0 + u**2 / 4.0) ** 2
            val, _ = quad(
                lambda v: (b + v**2) ** (-q) * v ** (l - 1),
                0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200,
            )
            return val * u ** (m - 1)

        val, err = quad(inner, 0.0, np.inf, epsabs=1e-12, epsrel=1e-11, limit=200)
        mass = sphere_area(m) * sphere_area(l) * val
    if not np.isfinite(mass) or mass <= 0.0:
        raise NumericsError(f"kernel mass quadrature failed for {space}")
    return 1.0 / mass


@lru_cache(maxsize=8)
def _gauss_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _panel_nodes(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights over consecutive panels."""
    x, w = _gauss_rule(order)
    lo = edges[:-1, None]
    half = 0.5 * (edges[1:, None] - lo)
    return (lo + half * (x[None, :] + 1.0)).ravel(), (half * w[None, :]).ravel()


def _geometric_edges(scale: float, decades_down: int, decades_up: int) -> np.ndarray:
    exps = np.arange(-float(decades_down), float(decades_up) + 1.0)
    return np.concatenate(([0.0], scale * 10.0**exps))


def _eval_boundary(boundary: NRadialBoundary, u: np.ndarray, v) -> np.ndarray:
    """Boundary values on a node array, tolerating scalar-only callables."""
    try:
        out = np.asarray(boundary.fn(u, v), dtype=complex)
    except (TypeError, ValueError):
        out = None
    if out is not None and out.shape == u.shape:
        return out
    if out is not None and out.ndim == 0:
        return np.full(u.shape, complex(out))
    uf = u.ravel()
    vf = v.ravel() if isinstance(v, np.ndarray) else [v] * uf.size
    vals = np.array([complex(boundary.fn(a, b)) for a, b in zip(uf, vf)])
    return vals.reshape(u.shape)


def n_transform_radial(
    space: SpaceParams,
    lam: complex,
    boundary: NRadialBoundary,
    t: float,
    epsabs: float = 1e-10,
) -> complex:
    """Poisson transform of radial N-picture data at the axis point a_t.

    Computes sigma_{m-1} sigma_{l-1} * double integral of
    F(u, v) P_{e^t}(u, v)^(1/2 - i lam / Q) u^(m-1) v^(l-1) du dv,
    reducing to a single integral when l = 0.

    The integrand mixes two length scales e^t apart (the data's and the
    kernel's), which defeats plain adaptive quadrature once t is a few
    units: the subdivision reports convergence while missing one scale.
    Composite Gauss panels on a geometric ladder spanning both scales are
    exact-ish on every panel; two rule orders are compared so a genuinely
    unresolved integrand still errors out instead of returning quietly.
    """
    _require_dr(space)
    m, l = space.m1, space.m2
    s = 0.5 - 1j * complex(lam) / space.q_hom
    a = math.exp(t)
    u_edges = _geometric_edges(max(1.0, 2.0 * math.sqrt(a)), 7, 6)
    v_edges = _geometric_edges(max(1.0, a), 7, 7)

    vals = []
    for order in (28, 40):
        un, uw = _panel_nodes(u_edges, order)
        if l == 0:
            fvals = _eval_boundary(boundary, un, None)
            p = poisson_kernel_N(space, t, un)
            total = np.dot(fvals * np.exp(s * np.log(p)), uw * un ** (m - 1))
            vals.append(sphere_area(m) * total)
            continue
        vn, vw = _panel_nodes(v_edges, order)
        uu, vv = np.meshgrid(un, vn, indexing="ij")
        fvals = _eval_boundary(boundary, uu, vv)
        p = poisson_kernel_N(space, t, uu, vv)
        total = np.einsum(
            "ij,i,j->", fvals * np.exp(s * np.log(p)), uw * un ** (m - 1), vw * vn ** (l - 1)
        )
        vals.append(sphere_area(m) * sphere_area(l) * total)

    if abs(vals[1] - vals[0]) > max(100.0 * epsabs, 1e-6 * abs(vals[1])):
        raise NumericsError("N-picture transform quadrature did not converge")
    return complex(vals[1])


# --------------------------------------------------------------------------
# KM picture
# --------------------------------------------------------------------------

@lru_cache(maxsize=64)
def sphere_rule(exponent: int, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule for int_0^pi f(cos x) sin^exponent(x) dx.

    Returns (cos-nodes, weights); exponent 0 is the Chebyshev case (the
    1/sqrt(1-x^2) weight is exactly the dx -> d(cos x) Jacobian), higher
    exponents use Gauss-Gegenbauer nodes with alpha = exponent/2.  Exact for
    integrands polynomial of degree <= 2 n_nodes - 1 in cos x.
    """
    if exponent < 0:
        raise SpaceError("sphere_rule needs exponent >= 0")
    if exponent == 0:
        x, w = roots_chebyt(n_nodes)
    else:
        x, w = roots_gegenbauer(n_nodes, exponent / 2.0)
    order = np.argsort(-x)  # theta ascending
    return x[order], w[order]


@dataclass(frozen=True)
class PoissonField:
    """A zonal Poisson transform tabulated on a polar (t, theta) grid.

    ``values[i, j]`` is the field at radius t_grid[i], polar angle
    arccos(theta_nodes[j]); theta_weights are normalized boundary-sphere
    weights for the theta direction.  ``evaluate`` recomputes the transform
    by fresh quadrature at arbitrary points and is the reference the grid is
    checked against.
    """

    space: SpaceParams
    lam: complex
    t_grid: np.ndarray
    theta_nodes: np.ndarray      # cos(theta), descending in theta? stored theta-ascending
    theta_weights: np.ndarray
    values: np.ndarray
    boundary: ZonalBoundary
    n_boundary: int = 64

    @property
    def theta_grid(self) -> np.ndarray:
        return np.arccos(np.clip(self.theta_nodes, -1.0, 1.0))

    def evaluate(self, t: float, theta: float) -> complex:
        out = _km_eval(
            self.space, self.lam, self.boundary, float(t),
            np.array([math.cos(theta)]), self.n_boundary,
        )
        return complex(out[0])

    def a_q_profile(self, q: float) -> np.ndarray:
        """Angular L^q size (A_q profile) at each radius, normalized measure."""
        if q <= 0:
            raise SpaceError(f"a_q_profile needs q > 0, got {q}")
        if math.isinf(q):
            return np.max(np.abs(self.values), axis=1)
        pw = np.abs(self.values) ** q @ self.theta_weights
        return pw ** (1.0 / q)

    def radial_average(self) -> np.ndarray:
        """Angular mean at each radius (the radialization of the field)."""
        return self.values @ self.theta_weights.astype(complex)


def _km_eval(
    space: SpaceParams,
    lam: complex,
    boundary: ZonalBoundary,
    t: float,
    cos_theta_x: np.ndarray,
    n_boundary: int,
) -> np.ndarray:
    """Transform at radius t for an array of observer angles (fresh rule).

    Integrates in coordinates adapted to the observer direction, with the
    kernel angle chi remapped through cosh t - sinh t cos chi = e^s.  The
    remap equidistributes the kernel's dynamic range, so the Gauss order
    needed for a given accuracy grows like t |lam| instead of e^t; a plain
    rule in cos chi loses all accuracy beyond t ~ 3.
    """
    n = space.dim
    yb, wb = sphere_rule(n - 2, n_boundary)
    xc, wc = sphere_rule(n - 3, n_boundary)
    if t == 0.0:
        fv = np.asarray(boundary.fn(np.arccos(np.clip(yb, -1, 1))), dtype=complex)
        mean = np.dot(fv, wb) / wb.sum()
        return np.full(cos_theta_x.shape, mean, dtype=complex)
    s = t * yb
    st = math.sinh(t)
    # endpoint-stable 1 -/+ cos(chi(s)); their product is sin^2 chi
    one_m = np.expm1(t * (1.0 + yb)) * (math.exp(-t) / st)
    one_p = -np.expm1(-t * (1.0 - yb)) * (math.exp(t) / st)
    x_chi = np.clip(1.0 - one_m, -1.0, 1.0)
    s_chi = np.sqrt(np.maximum(one_m * one_p, 0.0))
    cx = cos_theta_x[:, None, None]
    sx = np.sqrt(np.maximum(0.0, 1.0 - cos_theta_x**2))[:, None, None]
    cos_b = cx * x_chi[None, :, None] + sx * s_chi[None, :, None] * xc[None, None, :]
    fvals = np.asarray(boundary.fn(np.arccos(np.clip(cos_b, -1.0, 1.0))), dtype=complex)
    # e^s ds against the stored (1-y^2)^((n-3)/2) weight; ratio smooth in y
    ratio = (one_m * one_p) / (1.0 - yb * yb)
    kfac = np.exp((1.0 - space.rho - 1j * lam) * s) * ratio ** ((n - 3) / 2.0)
    pref = t / (st * wb.sum() * wc.sum())
    return pref * np.einsum("abc,b,c->a", fvals, wb * kfac, wc)


def poisson_transform_KM(
    space: SpaceParams,
    lam: complex,
    boundary: ZonalBoundary,
    t_grid,
    n_theta: int = 48,
    n_boundary: int = 64,
) -> PoissonField:
    """Tabulate the KM-picture Poisson transform of zonal boundary data.

    The observer angles are Gauss nodes for the sphere measure
    sin^(n-2)(theta) d theta, so angular functionals (A_q profiles,
    radialization, zonal mode projections) are spectrally accurate on the
    stored grid.
    """
    _require_km(space)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0 or np.any(t_grid < 0) or np.any(np.diff(t_grid) <= 0):
        raise SpaceError("t_grid must be 1-d, nonnegative, strictly increasing")
    xt, wt = sphere_rule(space.dim - 2, n_theta)
    weights = wt / wt.sum()
    values = np.empty((t_grid.size, xt.size), dtype=complex)
    for i, t in enumerate(t_grid):
        values[i] = _km_eval(space, lam, boundary, float(t), xt, n_boundary)
    if not np.all(np.isfinite(values)):
        raise NumericsError("Poisson transform produced non-finite values")
    return PoissonField(space, complex(lam), t_grid, xt, weights, values, boundary, n_boundary)


def phi_km(space: SpaceParams, lam: complex, t: float, n_boundary: int = 64) -> complex:
    """Spherical function via the KM transform of F = 1 (anchor identity)."""
    _require_km(space)
    one = ZonalBoundary(lambda th: np.ones_like(th), name="one")
    return complex(_km_eval(space, lam, one, float(t), np.array([1.0]), n_boundary)[0])


def mean_value_check(
    u: PoissonField,
    lam: complex,
    s: float,
    r: float,
    n_angle: int = 64,
) -> float:
    """Absolute defect in the eigenfunction mean-value identity.

    Checks u(a_s) * phi_lam(a_r) = int_K u(a_s k a_r) dk by rotating the
    probe point through the full isotropy orbit (boost composition on the
    hyperboloid) and integrating with the sphere rule.  Returns
    |lhs - rhs|; both sides use fresh quadrature, not grid interpolation.
    """
    space = u.space
    _require_km(space)
    if r == 0.0:
        return 0.0  # both sides are u(g) * phi_lam(0) = u(g) by definition
    xs, ws = sphere_rule(space.dim - 2, n_angle)
    ch = math.cosh(s) * math.cosh(r) + math.sinh(s) * math.sinh(r) * xs
    dd = np.arccosh(np.maximum(ch, 1.0))
    num = math.sinh(s) * math.cosh(r) + math.cosh(s) * math.sinh(r) * xs
    sinh_dd = np.sinh(dd)
    cos_big = np.where(sinh_dd > 1e-12, num / np.where(sinh_dd > 1e-12, sinh_dd, 1.0), 1.0)
    cos_big = np.clip(cos_big, -1.0, 1.0)
    orbit = np.array(
        [u.evaluate(float(d), float(math.acos(c))) for d, c in zip(dd, cos_big)]
    )
    rhs = complex(np.dot(orbit, ws) / ws.sum())
    lhs = u.evaluate(s, 0.0) * phi_km(space, lam, r, u.n_boundary)
    return abs(lhs - rhs)


def sup_envelope(
    u: PoissonField,
    q: float = 2.0,
    weight: str = "exp_rho",
    p: float | None = None,
) -> tuple[float, float]:
    """Sup over the radial grid of weight(t) * A_q(u)(t), with its argmax.

    weight = "exp_rho" uses e^(rho t); weight = "inv_phi" uses
    1 / phi_{i gamma_p rho}(t) and needs p in (0, 2].  Finite values of the
    sup are the size criteria the boundary-data theorems run on.  Returns
    (sup value, radius where it is attained).
    """
    prof = u.a_q_profile(q)
    if weight == "exp_rho":
        w = np.exp(u.space.rho * u.t_grid)
    elif weight == "inv_phi":
        if p is None:
            raise SpaceError("inv_phi weight needs p")
        from .space import gamma_p as _gp
        from .spherical import phi_ode

        lam_w = 1j * _gp(p) * u.space.rho
        w = 1.0 / np.real(phi_ode(u.space, lam_w, u.t_grid))
    else:
        raise SpaceError(f"unknown weight {weight!r}")
    vals = w * prof
    i = int(np.argmax(vals))
    return float(vals[i]), float(u.t_grid[i])


def gegenbauer_table(lmax: int, alpha: float, x: np.ndarray) -> np.ndarray:
    """C_l^alpha(x) for l = 0..lmax by the three-term recurrence."""
    out = np.empty((lmax + 1,) + x.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = 2.0 * alpha * x
    for n in range(2, lmax + 1):
        out[n] = (2.0 * x * (n + alpha - 1.0) * out[n - 1] - (n + 2.0 * alpha - 2.0) * out[n - 2]) / n
    return out


def zonal_mode_profiles(u: PoissonField, lmax: int) -> np.ndarray:
    """Radial profiles of the zonal harmonic components, shape (lmax+1, nt).

    Projects each radius onto the Gegenbauer polynomials C_l^((n-2)/2)(cos
    theta), orthogonal for the stored angular weights; exact while
    2*n_theta - 1 >= 2*lmax.
    """
    alpha = (u.space.dim - 2) / 2.0
    gg = gegenbauer_table(lmax, alpha, u.theta_nodes)
    norms = (gg**2) @ u.theta_weights
    proj = (u.values @ (gg * u.theta_weights[None, :]).T) / norms[None, :]
    return proj.T


def mode_ode_residual(
    space: SpaceParams,
    lam: complex,
    ell: int,
    t_grid: np.ndarray,
    profile: np.ndarray,
) -> float:
    """Normalized defect of the radial mode equation on a uniform grid.

    The l-th zonal mode Phi of an eigenfunction satisfies

        Phi'' + (n-1) coth(t) Phi' - l(l+n-2)/sinh^2(t) Phi
            = -(lam^2 + rho^2) Phi.

    Finite differences on the interior points; returns
    max |defect| / max |(lam^2+rho^2) Phi| over the window.
    """
    _require_km(space)
    t = np.asarray(t_grid, dtype=float)
    h = np.diff(t)
    if t.size < 5 or np.any(t <= 0) or np.ptp(h) > 1e-9 * h[0]:
        raise SpaceError("mode residual needs a uniform grid with t > 0")
    h = h[0]
    f = np.asarray(profile, dtype=complex)
    d1 = (f[2:] - f[:-2]) / (2.0 * h)
    d2 = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h**2
    tm = t[1:-1]
    n = space.dim
    lhs = d2 + (n - 1) / np.tanh(tm) * d1 - ell * (ell + n - 2) / np.sinh(tm) ** 2 * f[1:-1]
    ev = -(lam**2 + space.rho**2)
    defect = lhs - ev * f[1:-1]
    scale = np.max(np.abs(ev * f[1:-1]))
    if scale == 0.0:
        return float(np.max(np.abs(defect)))
    return float(np.max(np.abs(defect)) / scale)

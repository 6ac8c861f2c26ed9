"""Collision-induced exchange coupling J and direct shift U.

The level shifts of the symmetric (+) and antisymmetric (-) spatial pair
states are time averages over one trap period of

    <Phi_pm| V |Phi_pm> = (D(t) +- E(t)) / (1 +- S^2)

where, in reduced units (lengths in z0, momenta in hbar/z0, energies in the
Coulomb prefactor C = Q^2/(4 pi eps0 z0)),

    D(t) = int V(r) N(r; 2 x(t), 1) dr                      (direct)
    E(t) = exp(-2 x(t)^2) int V(r) N(r; 0, 1) cos(2 p(t) r) dr (exchange)

with N(r; mu, 1) the unit-variance normal density in the relative coordinate
and S^2 = exp(-L^2/2z0^2). Since S does not depend on time,

    J = (<E> - S^2 <D>) / (1 - S^4),    U = (<D> - S^2 <E>) / (1 - S^4).

Both D and E depend on time only through cos^2(omega_z t), so the average
runs over a quarter period. The collision happens near omega_z t = pi/2 in a
window of width ~z0/L, so the quarter period is split into panels that
double in width away from the collision, each integrated by Gauss-Legendre.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import erfcx

from .errors import (ConvergenceError, OscillatoryIntegrandWarning, RegimeError,
                     RegimeWarning)
from .geometry import TrapConfig
from .potential import CLASSICAL_ALPHA, MARGINAL_ALPHA_TOL, alpha
from .units import CONSTANTS, IonSpecies

ASYMPTOTIC_A = 2.0 / math.sqrt(math.pi)
OSCILLATORY_WARN_K = 1e4
# exp(-2 x^2) below this is dropped from the exchange average
_EXCHANGE_WINDOW_CUTOFF = 1e-22
_INNER_EPSREL = 1e-13


@dataclass(frozen=True)
class QuadratureSettings:
    """Controls for :func:`level_shifts_quadrature`.

    ``time_nodes`` is the Gauss-Legendre order per time panel; it is doubled
    until successive averages agree to ``rel_tol`` or ``max_time_nodes`` is
    exceeded. ``spatial_truncation`` bounds the relative-coordinate integrals
    at that many z0 from the Gaussian centre. ``abs_tol`` (J) is an absolute
    floor for the convergence test; zero means relative only.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    time_nodes: int = 16
    spatial_truncation: float = 9.0
    max_time_nodes: int = 256

    def __post_init__(self):
        if not 0 < self.rel_tol <= 1e-3:
            raise ValueError("rel_tol must lie in (0, 1e-3]")
        if self.abs_tol < 0:
            raise ValueError("abs_tol must be non-negative")
        if self.time_nodes < 16 or self.time_nodes % 2:
            raise ValueError("time_nodes must be even and at least 16")
        # exp(-R^2/2) must be below 1e-16 of the peak
        if self.spatial_truncation < 8.6:
            raise ValueError("spatial_truncation must be at least 8.6 z0")


@dataclass(frozen=True)
class CouplingResult:
    """Level shifts of the two-ion pair, in joules.

    ``v_plus`` and ``v_minus`` are derived from ``direct_U`` and
    ``exchange_J``, so ``v_plus - v_minus == 2 * exchange_J`` holds exactly.
    """

    exchange_J: float
    direct_U: float
    interference_A: float
    method: str
    alpha: float = float("nan")
    info: dict = field(default_factory=dict, compare=False)

    @property
    def v_plus(self) -> float:
        return self.direct_U + self.exchange_J

    @property
    def v_minus(self) -> float:
        return self.direct_U - self.exchange_J


@dataclass(frozen=True)
class ReducedShifts:
    """Time-averaged direct and exchange integrals in units of C."""

    ell: float
    omega_perp: float
    direct: float
    exchange: float
    time_nodes: int
    achieved_rel: float

    @property
    def overlap_sq(self) -> float:
        return math.exp(-0.5 * self.ell ** 2)

    @property
    def J(self) -> float:
        s2 = self.overlap_sq
        return (self.exchange - s2 * self.direct) / (1.0 - s2 * s2)

    @property
    def U(self) -> float:
        s2 = self.overlap_sq
        return (self.direct - s2 * self.exchange) / (1.0 - s2 * s2)

    @property
    def v_plus(self) -> float:
        return (self.direct + self.exchange) / (1.0 + self.overlap_sq)

    @property
    def v_minus(self) -> float:
        return (self.direct - self.exchange) / (1.0 - self.overlap_sq)


# --- relative-coordinate integrals -------------------------------------------

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def direct_integral(x: float, omega_perp: float, truncation: float = 9.0) -> float:
    """Expectation of V over the relative-coordinate density centred at 2x."""
    c = 2.0 * abs(x)
    s = math.sqrt(0.5 * omega_perp)
    pref = math.sqrt(math.pi) * s * _INV_SQRT_2PI

    # V is even, so fold the density onto r >= 0
    def f(r):
        return pref * erfcx(s * r) * (math.exp(-0.5 * (r - c) ** 2) + math.exp(-0.5 * (r + c) ** 2))

    lo = max(0.0, c - truncation)
    val, _ = quad(f, lo, c + truncation, epsabs=0.0, epsrel=_INNER_EPSREL, limit=200)
    return val


def exchange_kernel(k: float, omega_perp: float, truncation: float = 9.0) -> float:
    """int V(r) N(r; 0, 1) cos(k r) dr over the whole line."""
    s = math.sqrt(0.5 * omega_perp)
    pref = 2.0 * math.sqrt(math.pi) * s * _INV_SQRT_2PI

    def f(r):
        return pref * math.exp(-0.5 * r * r) * erfcx(s * r)

    # the envelope is O(1) at r=0, so 1e-18 is far below anything J can resolve
    if k < 1e-8:
        val, _ = quad(f, 0.0, truncation, epsabs=1e-18, epsrel=_INNER_EPSREL, limit=200)
    else:
        val, _ = quad(f, 0.0, truncation, weight="cos", wvar=k,
                      epsabs=1e-18, epsrel=_INNER_EPSREL, limit=1000)
    return val


# --- time average --------------------------------------------------------------

def collision_panels(ell: float) -> list[tuple[float, float]]:
    """Panels in delta = pi/2 - omega_z t over [0, pi/2], finest at the collision."""
    half = 0.5 * math.pi
    width = min(half, 1.0 / ell)
    edges = [0.0, width]
    while edges[-1] < half:
        edges.append(min(half, 2.0 * edges[-1]))
    return list(zip(edges[:-1], edges[1:]))


def _panel_nodes(ell, n):
    xg, wg = np.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    for a, b in collision_panels(ell):
        nodes.append(0.5 * (b - a) * xg + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * wg)
    return np.concatenate(nodes), np.concatenate(weights)


def _time_average(ell, omega_perp, n, truncation, with_direct=True):
    # QUADPACK roundoff notices on tiny tails are expected; accuracy is
    # governed by the node-doubling test in the caller
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return _time_average_nodes(ell, omega_perp, n, truncation, with_direct)


def _time_average_nodes(ell, omega_perp, n, truncation, with_direct):
    delta, w = _panel_nodes(ell, n)
    direct = exchange = 0.0
    for d, wi in zip(delta, w):
        x = 0.5 * ell * math.sin(d)
        p = 0.5 * ell * math.cos(d)
        if with_direct:
            direct += wi * direct_integral(x, omega_perp, truncation)
        window = math.exp(-2.0 * x * x)
        if window > _EXCHANGE_WINDOW_CUTOFF:
            exchange += wi * window * exchange_kernel(2.0 * p, omega_perp, truncation)
    # quarter-period average: (2/pi) * integral over [0, pi/2]
    return 2.0 / math.pi * direct, 2.0 / math.pi * exchange


def _rel_change(a, b, floor):
    return abs(a - b) / max(abs(b), floor, 1e-300)


def level_shifts_reduced(ell: float, omega_perp: float,
                         settings: QuadratureSettings | None = None,
                         abs_floor: float = 0.0) -> ReducedShifts:
    """Direct and exchange averages for L = ``ell`` z0, in units of C."""
    settings = settings or QuadratureSettings()
    if not ell > 0:
        raise ValueError("ell must be positive")
    if ell > OSCILLATORY_WARN_K:
        warnings.warn(
            f"exchange integrand oscillates with 2 p_max z0/hbar = {ell:.3g}; "
            "consider raising time_nodes if convergence is slow",
            OscillatoryIntegrandWarning, stacklevel=2)
    trunc = settings.spatial_truncation
    n = settings.time_nodes
    prev = _time_average(ell, omega_perp, n, trunc)
    while True:
        n *= 2
        cur = _time_average(ell, omega_perp, n, trunc)
        s2 = math.exp(-0.5 * ell * ell)
        j_prev = prev[1] - s2 * prev[0]
        j_cur = cur[1] - s2 * cur[0]
        err = max(_rel_change(prev[0], cur[0], abs_floor),
                  _rel_change(j_prev, j_cur, abs_floor))
        if err <= settings.rel_tol:
            return ReducedShifts(ell, omega_perp, cur[0], cur[1], n, err)
        if n >= settings.max_time_nodes:
            raise ConvergenceError(
                f"time average did not reach rel_tol={settings.rel_tol:g} with "
                f"{n} nodes per panel (achieved {err:.2e})", achieved=err)
        prev = cur


def implied_interference(J_reduced: float, ell: float, omega_perp: float) -> float:
    """Invert J = C (omega_perp/sqrt(pi)) (z0/L)^3 A for A."""
    return math.sqrt(math.pi) * ell ** 3 * J_reduced / omega_perp


def _check_alpha(cfg, what):
    a = alpha(cfg)
    if a < 1.0 - MARGINAL_ALPHA_TOL:
        warnings.warn(
            f"{what}: alpha = {a:.3g} < 1, the ions do not have the kinetic "
            "energy to cross the Coulomb barrier", RegimeWarning, stacklevel=3)
    return a


def level_shifts_quadrature(cfg: TrapConfig,
                            settings: QuadratureSettings | None = None) -> CouplingResult:
    """V_pm, J and U for ``cfg`` by numerical quadrature.

    The slowing of the ions by their mutual repulsion is not included, so
    the returned J underestimates the coupling near alpha = 1.
    """
    settings = settings or QuadratureSettings()
    a = _check_alpha(cfg, "level_shifts_quadrature")
    C = cfg.coulomb_prefactor
    floor = settings.abs_tol / C if settings.abs_tol else 0.0
    red = level_shifts_reduced(cfg.ell, cfg.omega_perp, settings, abs_floor=floor)
    return CouplingResult(
        exchange_J=C * red.J,
        direct_U=C * red.U,
        interference_A=implied_interference(red.J, red.ell, red.omega_perp),
        method="quadrature",
        alpha=a,
        info={"time_nodes": red.time_nodes, "achieved_rel": red.achieved_rel,
              "ell": red.ell, "omega_perp": red.omega_perp},
    )


# --- interference term ----------------------------------------------------------

def interference_kernel(k: float, omega_perp: float, truncation: float = 9.0) -> float:
    """int_0^inf exp((w-1) z^2/2) erfc(sqrt(w/2) z) cos(k z) dz, w = omega_perp."""
    s = math.sqrt(0.5 * omega_perp)

    def g(z):
        return math.exp(-0.5 * z * z) * erfcx(s * z)

    if k < 1e-8:
        val, _ = quad(g, 0.0, truncation, epsabs=1e-18, epsrel=_INNER_EPSREL, limit=200)
    else:
        val, _ = quad(g, 0.0, truncation, weight="cos", wvar=k,
                      epsabs=1e-18, epsrel=_INNER_EPSREL, limit=1000)
    return val


def interference_term_reduced(ell: float, omega_perp: float, nodes: int = 24,
                              truncation: float = 9.0) -> float:
    """Interference term A for L = ``ell`` z0.

    A = sqrt(pi/omega_perp) (L/z0)^3 < exp(-2 x^2/z0^2) I(2 p z0/hbar) >_t

    where I is :func:`interference_kernel` and the average runs over the
    collision windows of one period. This normalisation makes
    J = C (omega_perp/sqrt(pi)) (z0/L)^3 A exact for the exchange part of the
    level splitting and sends A to 2/sqrt(pi) at large L.
    """
    delta, w = _panel_nodes(ell, nodes)
    acc = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for d, wi in zip(delta, w):
            x = 0.5 * ell * math.sin(d)
            window = math.exp(-2.0 * x * x)
            if window > _EXCHANGE_WINDOW_CUTOFF:
                acc += wi * window * interference_kernel(ell * math.cos(d), omega_perp, truncation)
    avg = 2.0 / math.pi * acc
    return math.sqrt(math.pi / omega_perp) * ell ** 3 * avg


def interference_term(cfg: TrapConfig) -> float:
    _check_alpha(cfg, "interference_term")
    return interference_term_reduced(cfg.ell, cfg.omega_perp)


# --- closed forms ------------------------------------------------------------------

def exchange_asymptotic(cfg: TrapConfig) -> float:
    """Long-distance J = (Q^2/2 pi^2 eps0) (hbar omega_xy/m omega_z^2) / L^3."""
    sp = cfg.species
    q2 = sp.charge ** 2 / (2.0 * math.pi ** 2 * CONSTANTS.vacuum_permittivity)
    return q2 * CONSTANTS.hbar * cfg.omega_xy / (sp.mass * cfg.omega_z ** 2) / cfg.L ** 3


def long_distance_ratio(cfg: TrapConfig) -> float:
    """L / (z0 sqrt(omega_perp/2)); the asymptotic forms need this >> 1."""
    return cfg.ell / math.sqrt(0.5 * cfg.omega_perp)


def coupling_asymptotic(cfg: TrapConfig) -> CouplingResult:
    ratio = long_distance_ratio(cfg)
    if ratio <= 10.0:
        warnings.warn(
            f"L/(z0 sqrt(omega_perp/2)) = {ratio:.3g} <= 10; the long-distance "
            "form of J is unreliable", RegimeWarning, stacklevel=2)
    try:
        U = direct_interaction_renormalized(cfg)
    except RegimeError:
        U = float("nan")
    return CouplingResult(exchange_J=exchange_asymptotic(cfg), direct_U=U,
                          interference_A=ASYMPTOTIC_A, method="asymptotic",
                          alpha=alpha(cfg), info={"long_distance_ratio": ratio})


def coupling_jld2(cfg: TrapConfig, alpha_value: float | None = None) -> float:
    """J = (hbar/2 pi)^(3/2) sqrt(omega_xy/m) (2/alpha) / L."""
    a = alpha(cfg) if alpha_value is None else alpha_value
    hb = CONSTANTS.hbar / (2.0 * math.pi)
    return hb ** 1.5 * math.sqrt(cfg.omega_xy / cfg.species.mass) * 2.0 / (a * cfg.L)


def restriction_product(species: IonSpecies, omega_xy: float) -> float:
    """omega_perp * J (J) at the alpha = 1 design point; independent of L."""
    if not omega_xy > 0:
        raise ValueError("omega_xy must be positive")
    q2_half = species.charge ** 2 / (8.0 * math.pi * CONSTANTS.vacuum_permittivity)
    hb = CONSTANTS.hbar / (2.0 * math.pi)
    return q2_half ** -0.5 * hb ** 1.75 * (omega_xy ** 5 / species.mass) ** 0.25


def _perp_per_length(species, omega_xy):
    """omega_perp / L along the alpha = 1 line."""
    q = math.sqrt(species.charge_squared_coulomb)
    return (species.mass * CONSTANTS.hbar * omega_xy ** 3 / (8.0 * math.pi)) ** 0.25 / q


def design_point_alpha1(species: IonSpecies, omega_xy: float,
                        omega_perp_target: float) -> TrapConfig:
    """Trap with alpha = 1 at the requested confinement ratio."""
    if omega_perp_target < 3:
        raise ValueError("omega_perp target must be at least 3")
    L = omega_perp_target / _perp_per_length(species, omega_xy)
    return TrapConfig.from_omega_perp(species, omega_xy, omega_perp_target, L)


def design_point_alpha1_for_length(species: IonSpecies, omega_xy: float, L: float) -> TrapConfig:
    """Trap with alpha = 1 at a given trapping distance."""
    omega_perp = _perp_per_length(species, omega_xy) * L
    if omega_perp < 3:
        raise ValueError(f"alpha = 1 at L = {L:g} m needs omega_perp = {omega_perp:.3g} < 3")
    return TrapConfig.from_omega_perp(species, omega_xy, omega_perp, L)


def renormalized_log_argument(cfg: TrapConfig) -> float:
    g = CONSTANTS.euler_mascheroni
    return 2.0 ** 1.5 * math.exp(0.5 * g) * math.sqrt(cfg.omega_perp) * cfg.ell


def direct_interaction_renormalized(cfg: TrapConfig) -> float:
    """U = Qr^2/(4 pi eps0 L) with the colliding-regime renormalised charge Qr."""
    arg = renormalized_log_argument(cfg)
    if arg <= 1.0:
        raise RegimeError(f"renormalised charge needs log argument > 1, got {arg:.3g}")
    q2 = cfg.species.charge_squared_coulomb * 2.0 / math.pi * math.log(arg)
    return q2 / cfg.L


def classical_log_argument(cfg: TrapConfig) -> float:
    sp = cfg.species
    return (2.0 * math.pi * math.e ** 2 * CONSTANTS.vacuum_permittivity * sp.mass
            * cfg.omega_z ** 2 * cfg.L ** 3 / sp.charge ** 2)


def classical_direct_interaction(cfg: TrapConfig) -> CouplingResult:
    """Direct shift of two ions that never reach each other (alpha << 1)."""
    a = alpha(cfg)
    if a >= CLASSICAL_ALPHA:
        raise RegimeError(f"classical form needs alpha < {CLASSICAL_ALPHA}, got {a:.3g}")
    arg = classical_log_argument(cfg)
    if arg <= 1.0:
        raise RegimeError(f"renormalised charge needs log argument > 1, got {arg:.3g}")
    q2 = cfg.species.charge_squared_coulomb * 2.0 / math.pi * math.log(arg)
    return CouplingResult(exchange_J=0.0, direct_U=q2 / cfg.L, interference_A=0.0,
                          method="classical", alpha=a)


@dataclass(frozen=True)
class InteractionTime:
    delta_tau: float
    validity_ratio: float

    @property
    def perturbative(self) -> bool:
        return self.validity_ratio < 0.1


def interaction_time_estimate(cfg: TrapConfig) -> InteractionTime:
    """Time the ions spend within the interaction range per collision."""
    q = math.sqrt(cfg.species.charge_squared_coulomb)
    dt = (math.sqrt(cfg.species.mass) * cfg.z0 ** 1.5
          * (2.0 / cfg.omega_perp) ** 0.75 / q)
    return InteractionTime(dt, dt * cfg.omega_z / (2.0 * math.pi))


def validity_ratio_alpha1(ell: float, omega_perp: float) -> float:
    """Closed form of delta_tau omega_z / 2 pi at alpha = 1."""
    return math.pi ** -0.75 * math.sqrt(2.0 / omega_perp) / ell


# --- dispatch ------------------------------------------------------------------------

METHODS = ("quadrature", "asymptotic", "classical")


def compute_coupling(cfg: TrapConfig, method: str = "asymptotic",
                     settings: QuadratureSettings | None = None) -> CouplingResult:
    """Run ``method`` for ``cfg``, switching to the classical form when alpha < 0.1."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    a = alpha(cfg)
    if a < CLASSICAL_ALPHA and method != "classical":
        warnings.warn(f"alpha = {a:.3g} < {CLASSICAL_ALPHA}: no exchange, using the "
                      "classical direct interaction", RegimeWarning, stacklevel=2)
        method = "classical"
    elif CLASSICAL_ALPHA <= a < 1.0 - MARGINAL_ALPHA_TOL and method != "classical":
        warnings.warn(f"alpha = {a:.3g} lies between the classical and colliding "
                      "limits; neither form is quantitatively reliable",
                      RegimeWarning, stacklevel=2)
    if method == "classical":
        return classical_direct_interaction(cfg)
    if method == "asymptotic":
        return coupling_asymptotic(cfg)
    with warnings.catch_warnings():
        # regime already reported above
        warnings.simplefilter("ignore", RegimeWarning)
        return level_shifts_quadrature(cfg, settings)

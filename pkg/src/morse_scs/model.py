"""Morse oscillator: parameters, bound-state spectrum and eigenfunctions.

Working units put hbar = 1 and measure x in units of 1/beta. With the
default ``energy_scale = hbar^2 beta^2 / (2 m_r) = 1`` the levels are
``E_n = -(p - n)^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalOverflow
from .specfun import assoc_laguerre_scaled, log_gamma

__all__ = [
    "PRESETS",
    "MorseParams",
    "epsilon",
    "energy",
    "shifted_energy",
    "log_norm_const",
    "eigenfunction",
    "eigenfunction_deriv",
]

#: Anharmonicity ratio nu = omega_e / (omega_e x_e) for the bundled molecules.
PRESETS: dict[str, float] = {"hcl": 57.44, "cs2": 524.55}

_LOG_OVERFLOW = 700.0


@dataclass(frozen=True)
class MorseParams:
    """Parameters of one Morse system.

    Only ``nu`` shapes the dimensionless problem. ``beta`` rescales lengths
    and ``energy_scale`` (hbar^2 beta^2 / 2 m_r) rescales energies; V_0 and
    m_r never appear separately.
    """

    nu: float
    beta: float = 1.0
    energy_scale: float = 1.0

    def __post_init__(self):
        if not self.nu > 1.0:
            raise DomainError(f"nu must exceed 1, got {self.nu!r}")
        if self.p_floor < 1:
            raise DomainError(f"nu={self.nu} supports fewer than two bound states")
        if not self.beta > 0.0:
            raise DomainError(f"beta must be positive, got {self.beta!r}")
        if not self.energy_scale > 0.0:
            raise DomainError(f"energy_scale must be positive, got {self.energy_scale!r}")

    @classmethod
    def from_preset(cls, name: str, **kwargs) -> "MorseParams":
        try:
            nu = PRESETS[name.lower()]
        except KeyError:
            raise DomainError(f"unknown molecule {name!r}; choose from {sorted(PRESETS)}") from None
        return cls(nu=nu, **kwargs)

    @property
    def p(self) -> float:
        return (self.nu - 1.0) / 2.0

    @property
    def p_floor(self) -> int:
        return math.floor(self.p)

    @property
    def n_bound(self) -> int:
        """Number of bound states, indices 0 .. p_floor."""
        return self.p_floor + 1

    def check_index(self, n: int) -> int:
        if not 0 <= n <= self.p_floor:
            raise IndexError(f"state index {n} outside [0, {self.p_floor}]")
        return int(n)


def epsilon(params: MorseParams, n: int) -> float:
    """eps_n = p - n; must be strictly positive for a normalizable state."""
    params.check_index(n)
    eps = params.p - n
    if not eps > 0.0:
        raise DomainError(f"eps_{n} = {eps} is not positive; state is not normalizable")
    return eps


def energy(params: MorseParams, n: int) -> float:
    """Bound-state energy -energy_scale * (p - n)^2; zero at the threshold n = p."""
    params.check_index(n)
    return -params.energy_scale * (params.p - n) ** 2


def shifted_energy(params: MorseParams, n: int) -> float:
    """e(n) = eps_0^2 - eps_n^2 = n (2p - n), dimensionless."""
    params.check_index(n)
    return n * (2.0 * params.p - n)


def log_norm_const(params: MorseParams, n: int) -> float:
    """ln of the eigenfunction normalization sqrt(2 beta eps_n n! / Gamma(2p-n+1))."""
    eps = epsilon(params, n)
    return 0.5 * (
        math.log(2.0 * params.beta * eps) + log_gamma(n + 1.0) - log_gamma(2.0 * params.p - n + 1.0)
    )


def _log_prefactor(params: MorseParams, n: int, y: np.ndarray) -> np.ndarray:
    # ln(N_n e^{-y/2} y^eps); -inf where y == 0
    eps = epsilon(params, n)
    with np.errstate(divide="ignore"):
        logy = np.log(y)
    out = log_norm_const(params, n) - 0.5 * y + eps * logy
    if np.any(out > _LOG_OVERFLOW):
        raise NumericalOverflow(f"eigenfunction prefactor for n={n} exceeds exp({_LOG_OVERFLOW})")
    return out


def _assemble(logpref: np.ndarray, mant: np.ndarray, scale: np.ndarray) -> np.ndarray:
    with np.errstate(under="ignore", over="ignore", invalid="ignore"):
        expo = logpref + scale
        out = np.where(np.isneginf(expo), 0.0, mant * np.exp(expo))
    if not np.all(np.isfinite(out)):
        raise NumericalOverflow("eigenfunction value overflows double precision")
    return out


def eigenfunction(params: MorseParams, n: int, x):
    """psi_n(x) = N_n e^{-y/2} y^{eps_n} L_n^{2 eps_n}(y), y = nu exp(-beta x).

    Vectorized over ``x``. Returns exactly 0 where y underflows to 0.
    """
    x = np.asarray(x, dtype=float)
    y = params.nu * np.exp(-params.beta * x)
    logpref = _log_prefactor(params, n, y)
    mant, scale = assoc_laguerre_scaled(n, 2.0 * epsilon(params, n), y)
    out = _assemble(logpref, mant, scale)
    return out.item() if out.ndim == 0 else out


def eigenfunction_deriv(params: MorseParams, n: int, x):
    """d psi_n / dx via dy/dx = -beta y.

    ``dpsi/dx = -beta N_n e^{-y/2} y^{eps} [(eps - y/2) L(y) + y L'(y)]``
    """
    x = np.asarray(x, dtype=float)
    eps = epsilon(params, n)
    y = params.nu * np.exp(-params.beta * x)
    logpref = _log_prefactor(params, n, y)
    mant, scale = assoc_laguerre_scaled(n, 2.0 * eps, y)
    term = _assemble(logpref, mant * (eps - 0.5 * y), scale)
    if n > 0:
        dmant, dscale = assoc_laguerre_scaled(n - 1, 2.0 * eps + 1.0, y)
        term = term - _assemble(logpref, dmant * y, dscale)
    out = -params.beta * term
    return out.item() if out.ndim == 0 else out

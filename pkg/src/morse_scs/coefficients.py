"""Squeezed coherent state coefficients on the finite Morse basis.

The state with coherence ``z`` and squeezing ``gamma`` is

    Psi = N^{-1/2} sum_{n=0}^{[p]-1} Z(z, gamma, n) / sqrt(rho(n)) psi_n

where Z solves ``Z(n+1) = z Z(n) - gamma k(n) Z(n-1)``, Z(0) = 1, Z(1) = z.
The recurrence is the production path; the hypergeometric and Hermite
closed forms below exist as independent cross-checks.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateState, DomainError, NumericalOverflow, SqueezingWarning
from .ladders import LadderSpec
from .model import MorseParams, energy
from .specfun import hermite, hyp2f1_terminating, log_gamma

__all__ = [
    "StateParams",
    "StateVector",
    "ResidualReport",
    "z_recurrence",
    "z_recurrence_scaled",
    "z_closed_form_energy",
    "z_closed_form_ho",
    "f_recurrence",
    "h_branch_integer_A",
    "h_closed_form",
    "build_state",
    "probability",
    "residual",
    "zeta_lambda_to_z_gamma",
    "z_gamma_to_zeta_lambda",
]

_RESCALE_ABOVE = 1e100
_LOG_RESCALE = math.log(_RESCALE_ABOVE)


@dataclass(frozen=True)
class StateParams:
    """Coherence ``z`` and squeezing ``gamma`` (both complex)."""

    z: complex
    gamma: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "gamma", complex(self.gamma))
        if abs(self.gamma) >= 1.0:
            warnings.warn(
                f"|gamma| = {abs(self.gamma):.3g} >= 1: finite sums remain normalizable "
                "but the oscillator analogue is not",
                SqueezingWarning,
                stacklevel=3,
            )


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class StateVector:
    """Normalized coefficients c_n on psi_0 .. psi_{dim-1}.

    ``time`` records the evolution phase already applied to ``coeffs``.
    """

    coeffs: np.ndarray
    log_norm: float
    spec: LadderSpec
    params: StateParams
    time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(np.asarray(self.coeffs, dtype=complex)))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def morse(self) -> MorseParams:
        return self.spec.params

    def probabilities(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2

    def energies(self) -> np.ndarray:
        return np.array([energy(self.morse, n) for n in range(self.dim)])

    def evolved(self, t: float) -> "StateVector":
        """The state after time ``t`` (units of 1/energy_scale, hbar = 1)."""
        phases = np.exp(-1j * self.energies() * (t - self.time))
        return StateVector(self.coeffs * phases, self.log_norm, self.spec, self.params, float(t))


@dataclass(frozen=True)
class ResidualReport:
    """Boundary defect of a truncated squeezed state.

    ``(A- + gamma A+) Psi - z Psi = -lambda1 psi_{[p]-1} + lambda0 psi_{[p]}``
    with both amplitudes taken for the normalized state.
    """

    lambda1: complex
    lambda0: complex
    relative_residual: float
    absolute: float = field(default=0.0)


def _scaled_recurrence(z: complex, gamma: complex, k: np.ndarray, n_max: int):
    """Z(0..n_max) as mantissa * exp(log_scale); ``k[n]`` must cover n <= n_max-1."""
    mant = np.zeros(n_max + 1, dtype=complex)
    scale = np.zeros(n_max + 1)
    mant[0] = 1.0
    if n_max == 0:
        return mant, scale
    mant[1] = z
    prev, cur, s = 1.0 + 0j, complex(z), 0.0
    for n in range(1, n_max):
        prev, cur = cur, z * cur - gamma * k[n] * prev
        if abs(cur) > _RESCALE_ABOVE:
            prev /= _RESCALE_ABOVE
            cur /= _RESCALE_ABOVE
            s += _LOG_RESCALE
        mant[n + 1] = cur
        scale[n + 1] = s
    return mant, scale


def z_recurrence_scaled(spec: LadderSpec, params: StateParams, n_max: int):
    """Z(z, gamma, n) for n = 0 .. n_max as ``(mantissa, log_scale)`` arrays."""
    spec.params.check_index(n_max)
    k = spec.k_values(max(n_max - 1, 0))
    return _scaled_recurrence(params.z, params.gamma, k, n_max)


def z_recurrence(spec: LadderSpec, params: StateParams, n_max: int) -> np.ndarray:
    """Z(z, gamma, n) for n = 0 .. n_max by forward recurrence."""
    mant, scale = z_recurrence_scaled(spec, params, n_max)
    with np.errstate(over="ignore", invalid="ignore"):
        out = mant * np.exp(scale)
    if not np.all(np.isfinite(out)):
        raise NumericalOverflow("Z overflows double precision; use z_recurrence_scaled")
    return out


def z_closed_form_energy(morse: MorseParams, params: StateParams, n: int) -> complex:
    """Z for k(n) = n(2p-n) through a terminating 2F1.

    ``Z = (-1)^n gamma^{n/2} Gamma(2p)/Gamma(2p-n) 2F1(-n, -z/(2 sqrt g) + (1-2p)/2; 1-2p; 2)``
    """
    if params.gamma == 0:
        raise DomainError("closed form is singular at gamma = 0; use z_recurrence")
    morse.check_index(n)
    two_p = 2.0 * morse.p
    root = cmath.sqrt(params.gamma)
    b = -params.z / (2.0 * root) + (1.0 - two_p) / 2.0
    series = hyp2f1_terminating(n, b, 1.0 - two_p, 2.0)
    ratio = math.exp(log_gamma(two_p) - log_gamma(two_p - n))
    return (-1) ** n * root**n * ratio * series


def z_closed_form_ho(params: StateParams, n: int) -> complex:
    """Oscillator coefficient (gamma/2)^{n/2} H_n(z / sqrt(2 gamma))."""
    if params.gamma == 0:
        raise DomainError("closed form is singular at gamma = 0; use z_recurrence")
    s = cmath.sqrt(params.gamma / 2.0)
    return s**n * hermite(n, params.z / (2.0 * s))


def f_recurrence(A: float, w: complex, n_max: int) -> np.ndarray:
    """f(n, w) with f(n+1) = 2w f(n) - 2n(A-n) f(n-1), f(0)=1, f(1)=2w."""
    out = np.zeros(n_max + 1, dtype=complex)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * w
    for n in range(1, n_max):
        out[n + 1] = 2.0 * w * out[n] - 2.0 * n * (A - n) * out[n - 1]
    return out


def _branch_variable(params: StateParams) -> complex:
    if params.gamma == 0:
        raise DomainError("w = z / sqrt(2 gamma) needs gamma != 0")
    return params.z / cmath.sqrt(2.0 * params.gamma)


def h_branch_integer_A(A: int, params: StateParams, k_max: int) -> np.ndarray:
    """Polynomials h(k, w), k = 0 .. k_max, of the infinite branch for integer A.

    For integer A the f-recurrence decouples at n = A and
    ``f(A + k, w) = h(k, w) f(A, w)`` with
    ``h(k+1) = 2w h(k) + 2k(A+k) h(k-1)``, h(0)=1, h(1)=2w, w = z/sqrt(2 gamma).
    """
    if int(A) != A or A < 1:
        raise DomainError(f"A must be a positive integer, got {A!r}")
    w = _branch_variable(params)
    return f_recurrence(-float(A), w, k_max)


def h_closed_form(A: int, w: complex, k: int) -> complex:
    """2^{k/2} (A+1)_k 2F1(-k, -w/sqrt2 + (1+A)/2; 1+A; 2)."""
    poch = math.prod(A + 1 + j for j in range(k))
    series = hyp2f1_terminating(k, -w / math.sqrt(2.0) + (1.0 + A) / 2.0, 1.0 + A, 2.0)
    return 2.0 ** (k / 2.0) * poch * series


def _log_weights(spec: LadderSpec, params: StateParams, n_max: int):
    # ln|Z(n)|^2 - ln rho(n) and the complex phase of Z(n), n = 0..n_max
    mant, scale = z_recurrence_scaled(spec, params, n_max)
    lr = spec.log_rho(n_max)
    with np.errstate(divide="ignore"):
        logw = 2.0 * (np.log(np.abs(mant)) + scale) - lr
    return mant, scale, logw, lr


def build_state(spec: LadderSpec, params: StateParams) -> StateVector:
    """Normalized squeezed coherent state on psi_0 .. psi_{[p]-1}."""
    dim = spec.dim
    mant, scale, logw, lr = _log_weights(spec, params, dim - 1)
    finite = np.isfinite(logw)
    if not np.any(finite):
        raise DegenerateState("all coefficients Z(n) vanish")
    top = logw[finite].max()
    log_norm = top + math.log(np.exp(logw[finite] - top).sum())
    with np.errstate(under="ignore"):
        mag = np.where(finite, np.exp(0.5 * (logw - log_norm)), 0.0)
    return StateVector(mag * np.exp(1j * np.angle(mant)), float(log_norm), spec, params)


def probability(state: StateVector) -> np.ndarray:
    """Occupation probabilities P(n) = |c_n|^2."""
    return state.probabilities()


def residual(spec: LadderSpec, state: StateVector) -> ResidualReport:
    """Eigenvalue defect of the truncated state.

    ``lambda1 = Z([p]) / sqrt(rho([p]-1))`` and
    ``lambda0 = gamma k([p]) Z([p]-1) / sqrt(rho([p]))``, both divided by
    sqrt(N). ``relative_residual`` is their joint norm over |z| (the plain
    norm when z = 0).
    """
    top = spec.params.p_floor
    params = state.params
    mant, scale = z_recurrence_scaled(spec, params, top)
    lr = spec.log_rho(top)

    def _amp(m: complex, log_mag: float) -> complex:
        if m == 0:
            return 0j
        return m * math.exp(log_mag)

    lam1 = _amp(mant[top], scale[top] - 0.5 * lr[top - 1] - 0.5 * state.log_norm)
    k_top = spec.k(top)
    lam0 = params.gamma * k_top * _amp(mant[top - 1], scale[top - 1] - 0.5 * lr[top] - 0.5 * state.log_norm)
    norm = math.hypot(abs(lam1), abs(lam0))
    rel = norm / abs(params.z) if params.z != 0 else norm
    return ResidualReport(lam1, lam0, rel, norm)


def zeta_lambda_to_z_gamma(zeta: complex, lam: complex) -> StateParams:
    """gamma = (1-lambda)/(1+lambda), z = sqrt(2) zeta / (1+lambda)."""
    if lam == -1:
        raise DomainError("lambda = -1 has no (z, gamma) image")
    return StateParams(z=math.sqrt(2.0) * zeta / (1.0 + lam), gamma=(1.0 - lam) / (1.0 + lam))


def z_gamma_to_zeta_lambda(params: StateParams) -> tuple[complex, complex]:
    """Inverse map: lambda = (1-gamma)/(1+gamma), zeta = z (1+lambda) / sqrt(2)."""
    if params.gamma == -1:
        raise DomainError("gamma = -1 has no (zeta, lambda) image")
    lam = (1.0 - params.gamma) / (1.0 + params.gamma)
    return params.z * (1.0 + lam) / math.sqrt(2.0), lam


"""Expectation values of squeezed coherent states.

Position and momentum moments need the wavefunction in x and are
integrated with composite Gauss-Legendre quadrature. Number statistics
and the ladder quadratures X, P are finite sums in the eigenbasis.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .coefficients import StateParams, StateVector, _scaled_recurrence, build_state, residual
from .errors import DimensionError, DomainError, TailError
from .ladders import LadderSpec
from .model import MorseParams, eigenfunction, eigenfunction_deriv, energy

__all__ = [
    "QuadratureConfig",
    "ObservableReport",
    "DensityGrid",
    "LadderStatistics",
    "wavefunction",
    "wavefunction_deriv",
    "moments",
    "dispersion_x",
    "dispersion_p",
    "n_statistics",
    "ladder_statistics",
    "ho_reference",
    "density_grid",
    "autocorrelation",
    "vibration_period",
    "mandel_scan",
    "gram_matrix",
    "compute_report",
]

NODES_ENV = "MORSE_QUAD_NODES"

# basis states whose coefficient is this small relative to the largest are skipped
_COEFF_CUTOFF = 1e-18


def _default_nodes() -> int:
    raw = os.environ.get(NODES_ENV)
    if raw is None:
        return 64
    nodes = int(raw)
    if nodes < 2:
        raise DomainError(f"{NODES_ENV} must be >= 2, got {raw!r}")
    return nodes


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite Gauss-Legendre rule on [x_min, x_max].

    ``panels=None`` picks the panel count from ``panel_width``; the default
    width 8/nu resolves the fastest oscillation of the highest bound state.
    The window is widened (doubling its width toward the offending side)
    until the integrand at both ends falls below ``tail_tolerance`` times
    its peak.
    """

    x_min: float = -2.0
    x_max: float = 14.0
    panels: int | None = None
    nodes_per_panel: int = field(default_factory=_default_nodes)
    tail_tolerance: float = 1e-14
    panel_width: float = 0.25
    max_expansions: int = 8

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise DomainError(f"empty window [{self.x_min}, {self.x_max}]")

    @classmethod
    def for_params(cls, params: MorseParams, **kwargs) -> "QuadratureConfig":
        kwargs.setdefault("x_min", -2.0 / params.beta)
        kwargs.setdefault("x_max", 14.0 / params.beta)
        kwargs.setdefault("panel_width", min(0.25, 8.0 / params.nu) / params.beta)
        return cls(**kwargs)

    def n_panels(self) -> int:
        if self.panels is not None:
            return self.panels
        return max(1, math.ceil((self.x_max - self.x_min) / self.panel_width))

    def nodes_weights(self) -> tuple[np.ndarray, np.ndarray]:
        t, w = np.polynomial.legendre.leggauss(self.nodes_per_panel)
        edges = np.linspace(self.x_min, self.x_max, self.n_panels() + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
        wt = (half[:, None] * w[None, :]).ravel()
        return x, wt

    def widened(self, left: bool, right: bool) -> "QuadratureConfig":
        width = self.x_max - self.x_min
        panels = None if self.panels is None else self.panels * (1 + left + right)
        return replace(
            self,
            x_min=self.x_min - width if left else self.x_min,
            x_max=self.x_max + width if right else self.x_max,
            panels=panels,
        )


@dataclass(frozen=True)
class ObservableReport:
    mean_x: float
    var_x: float
    mean_p: float
    var_p: float
    delta_sq: float
    total_noise: float
    mean_N: float
    var_N: float
    mandel_Q: float
    mean_C: float
    var_X: float
    var_P: float
    mean_F: float
    residual: float | None = None
    vacuum: bool = False


@dataclass(frozen=True)
class DensityGrid:
    x_values: np.ndarray
    density: np.ndarray
    time: float | None = None

    def integral(self) -> float:
        if len(self.x_values) < 2:
            return 0.0
        return float(np.trapezoid(self.density, self.x_values))


@dataclass(frozen=True)
class LadderStatistics:
    var_X: float
    var_P: float
    mean_C: float
    mean_F: float


def _active(state: StateVector) -> np.ndarray:
    mag = np.abs(state.coeffs)
    return np.nonzero(mag > _COEFF_CUTOFF * mag.max())[0]


def _superpose(state: StateVector, x: np.ndarray, func) -> np.ndarray:
    out = np.zeros(x.shape, dtype=complex)
    for n in _active(state):
        out += state.coeffs[n] * func(state.morse, int(n), x)
    return out


def wavefunction(state: StateVector, x):
    """Psi(x) = sum_n c_n psi_n(x)."""
    x = np.asarray(x, dtype=float)
    out = _superpose(state, x, eigenfunction)
    return out.item() if out.ndim == 0 else out


def wavefunction_deriv(state: StateVector, x):
    x = np.asarray(x, dtype=float)
    out = _superpose(state, x, eigenfunction_deriv)
    return out.item() if out.ndim == 0 else out


def _tail_ok(f_end: float, peak: float, tol: float) -> bool:
    return f_end <= tol * peak


def _fit_window(sample, quad: QuadratureConfig):
    """Widen ``quad`` until ``sample(x)`` is negligible at both endpoints.

    ``sample`` maps an array of abscissae to a nonnegative integrand
    magnitude. Returns the final config and the nodes/weights.
    """
    for _ in range(quad.max_expansions + 1):
        x, w = quad.nodes_weights()
        peak = float(np.max(sample(x)))
        ends = sample(np.array([quad.x_min, quad.x_max]))
        left = not _tail_ok(ends[0], peak, quad.tail_tolerance)
        right = not _tail_ok(ends[1], peak, quad.tail_tolerance)
        if not (left or right):
            return quad, x, w
        quad = quad.widened(left, right)
    raise TailError(
        f"integrand still above {quad.tail_tolerance:g} x peak at the window edges "
        f"after {quad.max_expansions} expansions ([{quad.x_min}, {quad.x_max}])"
    )


def moments(state: StateVector, quad: QuadratureConfig | None = None) -> dict[str, float]:
    """Norm and first/second moments of x and p by quadrature.

    ``<p^2>`` uses the first-derivative form ``int |Psi'|^2 dx`` and
    ``<p> = Im int Psi* Psi' dx`` (hbar = 1).
    """
    if quad is None:
        quad = QuadratureConfig.for_params(state.morse)

    def integrand(xs):
        psi = wavefunction_deriv_pair(state, xs)
        return np.abs(psi[0]) ** 2 * (1.0 + xs**2) + np.abs(psi[1]) ** 2

    quad, x, w = _fit_window(integrand, quad)
    psi, dpsi = wavefunction_deriv_pair(state, x)
    dens = np.abs(psi) ** 2
    norm = float(w @ dens)
    mean_x = float(w @ (dens * x))
    x2 = float(w @ (dens * x * x))
    mean_p = float(w @ (np.conj(psi) * dpsi).imag)
    p2 = float(w @ np.abs(dpsi) ** 2)
    return {
        "norm": norm,
        "mean_x": mean_x,
        "x2": x2,
        "mean_p": mean_p,
        "p2": p2,
        "x_min": quad.x_min,
        "x_max": quad.x_max,
    }


def wavefunction_deriv_pair(state: StateVector, x: np.ndarray):
    """(Psi(x), Psi'(x)) evaluated together."""
    x = np.asarray(x, dtype=float)
    psi = np.zeros(x.shape, dtype=complex)
    dpsi = np.zeros(x.shape, dtype=complex)
    for n in _active(state):
        c = state.coeffs[n]
        psi += c * eigenfunction(state.morse, int(n), x)
        dpsi += c * eigenfunction_deriv(state.morse, int(n), x)
    return psi, dpsi


def dispersion_x(state: StateVector, quad: QuadratureConfig | None = None) -> tuple[float, float]:
    """(<x>, <x^2> - <x>^2)."""
    m = moments(state, quad)
    return m["mean_x"], m["x2"] - m["mean_x"] ** 2


def dispersion_p(state: StateVector, quad: QuadratureConfig | None = None) -> tuple[float, float]:
    """(<p>, <p^2> - <p>^2)."""
    m = moments(state, quad)
    return m["mean_p"], m["p2"] - m["mean_p"] ** 2


def _number_stats(prob: np.ndarray) -> tuple[float, float, float]:
    n = np.arange(len(prob))
    total = prob.sum()
    mean = float(prob @ n / total)
    var = float(prob @ (n * n) / total - mean**2)
    q = 0.0 if mean < 1e-300 else (var - mean) / mean
    return mean, var, q


def n_statistics(state: StateVector) -> tuple[float, float, float]:
    """(<N>, (Delta N)^2, Mandel Q). Q is set to 0 for the exact vacuum."""
    return _number_stats(state.probabilities())


def ladder_statistics(spec: LadderSpec, state: StateVector) -> LadderStatistics:
    """Variances of X = (A+ + A-)/sqrt2 and P = i(A+ - A-)/sqrt2, <C(N)> and <F>.

    The quadratic forms are taken in the space psi_0 .. psi_{dim}, one state
    beyond the support of the superposition, so that A+ acting on the top
    occupied state is not cut off. With that choice ``<C>`` equals the
    weighted sum of C(n) = k(n+1) - k(n) over the occupied states.
    """
    dim = state.dim + 1
    if dim > spec.params.n_bound:
        raise DimensionError(f"state dimension {state.dim} leaves no room for A+ in the bound-state space")
    op = spec.matrix_elements(dim)
    c = np.zeros(dim, dtype=complex)
    c[:-1] = state.coeffs
    X, P = op.position_like(), op.momentum_like()
    xc, pc = X @ c, P @ c
    mean_X = float(np.vdot(c, xc).real)
    mean_P = float(np.vdot(c, pc).real)
    var_X = float(np.vdot(xc, xc).real) - mean_X**2
    var_P = float(np.vdot(pc, pc).real) - mean_P**2
    anti = float((np.vdot(xc, pc) + np.vdot(pc, xc)).real)
    mean_F = anti - 2.0 * mean_X * mean_P
    mean_C = float(state.probabilities() @ spec.commutator_values(state.dim - 1))
    return LadderStatistics(var_X, var_P, mean_C, mean_F)


def _ho_prob(params: StateParams, n_terms: int) -> np.ndarray:
    k = np.arange(n_terms, dtype=float)
    mant, scale = _scaled_recurrence(params.z, params.gamma, k, n_terms - 1)
    lr = np.concatenate([[0.0], np.cumsum(np.log(np.arange(1, n_terms)))])
    with np.errstate(divide="ignore"):
        logw = 2.0 * (np.log(np.abs(mant)) + scale) - lr
    finite = np.isfinite(logw)
    top = logw[finite].max()
    return np.where(finite, np.exp(logw - top), 0.0)


def ho_reference(params: StateParams, n_terms: int = 200) -> ObservableReport:
    """Harmonic-oscillator squeezed coherent state (hbar = m = omega = 1).

    Dispersions are analytic; the number statistics are finite sums over
    the first ``n_terms`` Fock states.
    """
    g = params.gamma
    if abs(g) >= 1.0:
        raise DomainError(f"oscillator squeezed states need |gamma| < 1, got {abs(g)}")
    denom = 1.0 - abs(g) ** 2
    var_x = (1.0 - g.real) / denom - 0.5
    var_p = (1.0 + g.real) / denom - 0.5
    alpha = (params.z - g * params.z.conjugate()) / denom
    mean_N, var_N, q = _number_stats(_ho_prob(params, n_terms))
    lam = (1.0 - g) / (1.0 + g)
    mean_F = lam.imag / lam.real if lam.real != 0 else math.nan
    return ObservableReport(
        mean_x=math.sqrt(2.0) * alpha.real,
        var_x=var_x,
        mean_p=math.sqrt(2.0) * alpha.imag,
        var_p=var_p,
        delta_sq=var_x * var_p,
        total_noise=var_x + var_p,
        mean_N=mean_N,
        var_N=var_N,
        mandel_Q=q,
        mean_C=1.0,
        var_X=var_x,
        var_P=var_p,
        mean_F=mean_F,
        residual=0.0,
        vacuum=mean_N < 1e-300,
    )


def density_grid(state: StateVector, x_range: tuple[float, float], n_points: int, time: float | None = None) -> DensityGrid:
    """|Psi(x; t)|^2 on a uniform grid; ``time=None`` gives the static density."""
    if n_points < 1:
        raise DomainError("n_points must be >= 1")
    x = np.linspace(x_range[0], x_range[1], n_points)
    evolved = state if time is None else state.evolved(time)
    dens = np.abs(wavefunction(evolved, x)) ** 2
    return DensityGrid(np.atleast_1d(x), np.atleast_1d(dens), time)


def autocorrelation(state: StateVector, t: float) -> float:
    """|<Psi(0)|Psi(t)>|^2 = |sum_n P(n) exp(-i E_n t)|^2."""
    amp = np.sum(state.probabilities() * np.exp(-1j * state.energies() * t))
    return float(abs(amp) ** 2)


def vibration_period(params: MorseParams) -> float:
    """2 pi / (E_1 - E_0)."""
    return 2.0 * math.pi / (energy(params, 1) - energy(params, 0))


def mandel_scan(spec: LadderSpec, z: float, r_range: tuple[float, float] = (-3.0, 3.0), n_steps: int = 201) -> list[tuple[float, float]]:
    """Mandel Q along gamma = tanh(r)."""
    rs = np.linspace(r_range[0], r_range[1], n_steps)
    out = []
    for r in rs:
        state = build_state(spec, StateParams(z, math.tanh(r)))
        out.append((float(r), n_statistics(state)[2]))
    return out


def gram_matrix(params: MorseParams, n_max: int, quad: QuadratureConfig | None = None) -> np.ndarray:
    """Overlaps int psi_n psi_m dx for 0 <= n, m <= n_max."""
    if quad is None:
        quad = QuadratureConfig.for_params(params)

    def integrand(xs):
        return sum(eigenfunction(params, n, xs) ** 2 for n in range(n_max + 1))

    quad, x, w = _fit_window(integrand, quad)
    basis = np.array([eigenfunction(params, n, x) for n in range(n_max + 1)])
    return (basis * w) @ basis.T


def compute_report(spec: LadderSpec, params: StateParams, quad: QuadratureConfig | None = None) -> ObservableReport:
    """Every observable of the squeezed coherent state with ``params``."""
    state = build_state(spec, params)
    m = moments(state, quad)
    var_x = m["x2"] - m["mean_x"] ** 2
    var_p = m["p2"] - m["mean_p"] ** 2
    mean_N, var_N, q = n_statistics(state)
    lad = ladder_statistics(spec, state)
    res = residual(spec, state)
    return ObservableReport(
        mean_x=m["mean_x"],
        var_x=var_x,
        mean_p=m["mean_p"],
        var_p=var_p,
        delta_sq=var_x * var_p,
        total_noise=var_x + var_p,
        mean_N=mean_N,
        var_N=var_N,
        mandel_Q=q,
        mean_C=lad.mean_C,
        var_X=lad.var_X,
        var_P=lad.var_P,
        mean_F=lad.mean_F,
        residual=res.relative_residual,
        vacuum=mean_N < 1e-300,
    )

"""Ladder algebras on the finite Morse eigenbasis.

A ladder choice is fixed by k(n), the squared lowering amplitude
``A- psi_n = sqrt(k(n)) psi_{n-1}``. Three choices are supported:

* ``oscillator``: k(n) = n, the h(2) (Heisenberg-Weyl) ladder;
* ``energy``: k(n) = n (2p - n), the shifted energies, an su(1,1) ladder;
* ``special``: k(n) = n ([p] + 1 - n), which annihilates the top state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .model import MorseParams

__all__ = ["LadderKind", "LadderSpec", "TridiagonalOperator"]


class LadderKind(str, enum.Enum):
    OSCILLATOR = "oscillator"
    ENERGY = "energy"
    SPECIAL = "special"


def _k_formula(kind: LadderKind, params: MorseParams, n):
    if kind is LadderKind.OSCILLATOR:
        return 1.0 * n
    if kind is LadderKind.ENERGY:
        return n * (2.0 * params.p - n)
    return 1.0 * n * (params.p_floor + 1 - n)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Lowering operator truncated to ``dim`` states, stored by its sub-diagonal.

    ``sub[n-1] = sqrt(k(n))`` is the amplitude of psi_n -> psi_{n-1}. The
    raising operator is the transpose.
    """

    sub: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.sub) + 1

    def lowering(self) -> np.ndarray:
        return np.diag(self.sub, k=1)

    def raising(self) -> np.ndarray:
        return np.diag(self.sub, k=-1)

    def position_like(self) -> np.ndarray:
        """X = (A+ + A-) / sqrt(2)."""
        return (self.raising() + self.lowering()) / math.sqrt(2.0)

    def momentum_like(self) -> np.ndarray:
        """P = i (A+ - A-) / sqrt(2)."""
        return 1j * (self.raising() - self.lowering()) / math.sqrt(2.0)

    def commutator(self) -> np.ndarray:
        """[A-, A+] of the truncated matrices."""
        lo, hi = self.lowering(), self.raising()
        return lo @ hi - hi @ lo


@dataclass(frozen=True)
class LadderSpec:
    """A ladder choice bound to one Morse system."""

    kind: LadderKind
    params: MorseParams

    def __post_init__(self):
        object.__setattr__(self, "kind", LadderKind(self.kind))

    @property
    def dim(self) -> int:
        """Number of states in a squeezed-state superposition, indices 0 .. [p]-1."""
        return self.params.p_floor

    def k(self, n: int) -> float:
        self.params.check_index(n)
        return float(_k_formula(self.kind, self.params, n))

    def k_values(self, n_max: int) -> np.ndarray:
        """k(0), ..., k(n_max)."""
        self.params.check_index(n_max)
        return np.asarray(_k_formula(self.kind, self.params, np.arange(n_max + 1)), dtype=float)

    def log_rho(self, n_max: int | None = None) -> np.ndarray:
        """ln rho(n) = sum_{i<=n} ln k(i) for n = 0 .. n_max (default [p]-1)."""
        if n_max is None:
            n_max = self.dim - 1
        kv = self.k_values(n_max)
        out = np.zeros(n_max + 1)
        out[1:] = np.cumsum(np.log(kv[1:]))
        return out

    def commutator(self, n: int) -> float:
        """C(n) = k(n+1) - k(n), defined for 0 <= n <= [p]-1."""
        if not 0 <= n <= self.params.p_floor - 1:
            raise IndexError(f"C(n) needs 0 <= n <= {self.params.p_floor - 1}, got {n}")
        return self.k(n + 1) - self.k(n)

    def commutator_values(self, n_max: int | None = None) -> np.ndarray:
        if n_max is None:
            n_max = self.dim - 1
        kv = self.k_values(n_max + 1)
        return np.diff(kv)

    def matrix_elements(self, dim: int) -> TridiagonalOperator:
        """Lowering amplitudes on psi_0 .. psi_{dim-1}.

        ``dim`` may reach [p] + 1, the full bound-state space; squeezed states
        live on the first [p] of them.
        """
        if not 1 <= dim <= self.params.n_bound:
            raise DimensionError(f"dim must lie in [1, {self.params.n_bound}], got {dim}")
        kv = self.k_values(dim - 1)
        return TridiagonalOperator(np.sqrt(kv[1:]))

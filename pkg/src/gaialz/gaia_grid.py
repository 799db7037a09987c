"""S-matrix of the ramp model as a time-ordered product of unitary factors.

Each coupled pair (i, j) contributes one 2x2 unitary block acting on levels
i and j at its crossing time. The block mixes the pair with the standard
two-level transition amplitude and a phase theta that combines local terms
(Gamma-function phase, coupling argument, dynamical phase, scale logarithm)
with a non-local term collected from every other crossing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .errors import DegenerateOffset, ShapeMismatch
from .models import GridModel, LzsmModel

__all__ = [
    "RED_REGION_THRESHOLD",
    "SMatrix",
    "PhaseBreakdown",
    "arg_gamma",
    "kappa_grid",
    "lz_probability",
    "theta_grid",
    "unitary_factor",
    "smatrix_grid",
    "gaia_validity_margin",
]

# Sweep points with gaia_validity_margin below this ratio sit in the
# "crossings not independent" region and carry no accuracy claim.
RED_REGION_THRESHOLD = 10.0


@dataclass(frozen=True)
class SMatrix:
    """2N x 2N transition-amplitude matrix; entry (i, j) is <i|S|j>."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeMismatch(f"S-matrix must be square, got shape {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def probabilities(self) -> np.ndarray:
        """|S_ij|^2 for every entry."""
        return np.abs(self.matrix) ** 2

    def probability(self, i: int, j: int) -> float:
        """Transition probability from level j to level i (1-based)."""
        return float(abs(self.matrix[i - 1, j - 1]) ** 2)

    def unitarity_residual(self) -> float:
        eye = np.eye(self.dim)
        return float(np.max(np.abs(self.matrix.conj().T @ self.matrix - eye)))


@dataclass(frozen=True)
class PhaseBreakdown:
    """Additive decomposition of one crossing phase theta.

    ``nonlocal_term`` carries its sign as it enters theta (minus the
    other-crossing sum), so the fields add up to theta exactly.
    """

    quarter_pi: float
    gamma_arg: float
    coupling_arg: float
    dynamical: float
    scale_log: float
    nonlocal_term: float

    @property
    def total(self) -> float:
        return (
            self.quarter_pi
            + self.gamma_arg
            + self.coupling_arg
            + self.dynamical
            + self.scale_log
            + self.nonlocal_term
        )


def arg_gamma(kappa: float) -> float:
    """arg Gamma(1 - i*kappa), via complex log-Gamma (~1e-13 relative)."""
    return float(loggamma(complex(1.0, -kappa)).imag)


def kappa_grid(model: GridModel, i: int, j: int) -> float:
    """Adiabaticity parameter |b_ij|^2 / (2v) of the pair (i, j)."""
    return abs(model.coupling(i, j)) ** 2 / (2 * model.v)


def lz_probability(kappa: float) -> float:
    """exp(-2*pi*kappa): probability of staying diabatic through a crossing."""
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    return math.exp(-2 * math.pi * kappa)


def nonlocal_theta_grid(model: GridModel, i: int, j: int) -> float:
    """Sum of kappa-weighted log offset gaps from every other crossing.

    Crossings of pair (k, j) shift the phase of pair (i, j) through
    kappa_{k,j} * log|a_k - a_i|, and crossings of (i, l) through
    kappa_{i,l} * log|a_l - a_j| (up-band offsets reduce to their down-band
    values). Uncoupled partners carry kappa = 0 and drop out.
    """
    model._check_pair(i, j)
    a = model.a
    ai = a[i - 1]
    aj = a[j - 1 - model.N]
    total = 0.0
    for k in range(1, model.N + 1):
        if k == i:
            continue
        kap = kappa_grid(model, k, j)
        if kap == 0.0:
            continue
        gap = abs(a[k - 1] - ai)
        if gap == 0.0:
            raise DegenerateOffset(
                f"pairs ({k},{j}) and ({i},{j}) cross at the same point"
            )
        total += kap * math.log(gap)
    for ell in range(model.N + 1, 2 * model.N + 1):
        if ell == j:
            continue
        kap = kappa_grid(model, i, ell)
        if kap == 0.0:
            continue
        gap = abs(a[ell - 1 - model.N] - aj)
        if gap == 0.0:
            raise DegenerateOffset(
                f"pairs ({i},{ell}) and ({i},{j}) cross at the same point"
            )
        total += kap * math.log(gap)
    return total


def theta_grid(model: GridModel, i: int, j: int) -> tuple[float, PhaseBreakdown]:
    """Crossing phase of the pair (i, j) and its additive decomposition."""
    kap = kappa_grid(model, i, j)
    coupling = model.coupling(i, j)
    gap = model.offset_gap(i, j)
    parts = PhaseBreakdown(
        quarter_pi=math.pi / 4,
        gamma_arg=arg_gamma(kap),
        coupling_arg=cmath.phase(coupling) if coupling != 0 else 0.0,
        dynamical=model.eta * gap * gap / (4 * model.v),
        scale_log=kap * math.log(2 * model.eta / (4 * model.v)),
        nonlocal_term=-nonlocal_theta_grid(model, i, j),
    )
    return parts.total, parts


def unitary_factor(model: GridModel, i: int, j: int) -> np.ndarray:
    """Identity except the 2x2 block coupling levels i and j at their crossing."""
    u = np.eye(2 * model.N, dtype=complex)
    if model.coupling(i, j) == 0:
        return u
    theta, _ = theta_grid(model, i, j)
    p = lz_probability(kappa_grid(model, i, j))
    root = math.sqrt(1 - p)
    alpha_plus = root * cmath.exp(1j * theta)
    alpha_minus = -root * cmath.exp(-1j * theta)
    u[i - 1, i - 1] = u[j - 1, j - 1] = math.sqrt(p)
    u[i - 1, j - 1] = -alpha_plus
    u[j - 1, i - 1] = -alpha_minus
    return u


def smatrix_grid(model: GridModel) -> SMatrix:
    """Product of all crossing factors, earliest crossing applied first.

    Simultaneous crossings of a valid model act on disjoint levels and
    commute, so ascending time order fixes the product completely.
    """
    s = np.eye(2 * model.N, dtype=complex)
    for c in model.crossings():
        theta, _ = theta_grid(model, c.i, c.j)
        root_p = math.sqrt(c.p)
        root = math.sqrt(1 - c.p)
        alpha_plus = root * cmath.exp(1j * theta)
        alpha_minus = -root * cmath.exp(-1j * theta)
        ri, rj = c.i - 1, c.j - 1
        top = root_p * s[ri] - alpha_plus * s[rj]
        bottom = -alpha_minus * s[ri] + root_p * s[rj]
        s[ri] = top
        s[rj] = bottom
    return SMatrix(s)


def gaia_validity_margin(model) -> float:
    """Ratio of the smallest inter-crossing interval to the LZ duration.

    In sweep-scaled units the crossings are separated by sqrt(eta*v) times
    the smallest gap between distinct crossing times, while a transition
    occupies max(1, sqrt(kappa))/sqrt(2); their ratio must be large for the
    crossings to act independently. Models with fewer than two distinct
    coupled crossing times return +inf.
    """
    if isinstance(model, LzsmModel):
        crossings = []
        for cluster in range(1, model.n_crossings + 1):
            crossings.extend(model.cluster_crossings(cluster))
    elif isinstance(model, GridModel):
        crossings = model.crossings()
    else:
        raise ShapeMismatch(f"unsupported model type {type(model).__name__}")
    if not crossings:
        return math.inf
    times = sorted(c.time for c in crossings)
    gaps = [b - a for a, b in zip(times, times[1:]) if b - a > 0]
    if not gaps:
        return math.inf
    kappa_max = max(c.kappa for c in crossings)
    lz_duration = max(1.0, math.sqrt(kappa_max)) / math.sqrt(2)
    return math.sqrt(model.eta * model.v) * min(gaps) / lz_duration

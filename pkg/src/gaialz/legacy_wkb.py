"""Pre-unitary form of the ramp-model S-matrix, and the impulse form.

The older construction composes non-unitary connection factors M_{i,j}
between diagonal normalization ladders; it equals the unitary product after
a telescoping exchange (verified here as a property). The adiabatic-impulse
form replaces the closed-form phases with numerically integrated adiabatic
phases along instantaneous-eigenvalue branches; it needs equidistant
offsets so each level's branch sequence is a fixed rank table.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from .errors import BranchTrackingFailure, ConditioningWarning, ShapeMismatch
from .exact_oracle import default_window
from .gaia_grid import (
    SMatrix,
    arg_gamma,
    kappa_grid,
    lz_probability,
    nonlocal_theta_grid,
    unitary_factor,
)
from .models import GridModel

__all__ = [
    "ConnectionFactor",
    "NormalizationLadder",
    "AiaPath",
    "m_factor",
    "normalization_ladders",
    "smatrix_legacy",
    "verify_appendix_identity",
    "stokes_phase",
    "branch_rank",
    "aia_path",
    "smatrix_aia",
]


@dataclass(frozen=True)
class ConnectionFactor:
    """Non-unitary crossing factor: block [[p, -alpha+], [-alpha-, 1]].

    The off-diagonal amplitudes absorb the normalization ladder of earlier
    and later crossings, so |alpha+| != |alpha-| in general and M'M != I
    whenever the pair is coupled.
    """

    i: int
    j: int
    p: float
    alpha_plus: complex
    alpha_minus: complex
    matrix: np.ndarray


def _pair_range(N: int, k: int):
    """Pairs (i, j) with j - i = k, 1 <= i <= N < j <= 2N."""
    return [(i, i + k) for i in range(max(1, N + 1 - k), min(N, 2 * N - k) + 1)]


def _ladder_prefactor(model: GridModel, i: int, j: int) -> float:
    """prod_{k<i} p_{k,j}^{1/2} * prod_{N<l<j} p_{i,l}^{-1/2}."""
    value = 1.0
    for k in range(1, i):
        value *= math.sqrt(lz_probability(kappa_grid(model, k, j)))
    for ell in range(model.N + 1, j):
        value /= math.sqrt(lz_probability(kappa_grid(model, i, ell)))
    return value


def m_factor(model: GridModel, i: int, j: int) -> ConnectionFactor:
    """Connection factor of pair (i, j), evaluated from its printed parts."""
    kap = kappa_grid(model, i, j)
    p = lz_probability(kap)
    matrix = np.eye(2 * model.N, dtype=complex)
    if kap == 0.0:
        return ConnectionFactor(i, j, p, 0j, 0j, matrix)
    b = model.coupling(i, j)
    gap = model.offset_gap(i, j)
    unimod = cmath.exp(
        1j
        * (
            math.pi / 4
            + arg_gamma(kap)
            + cmath.phase(b)
            + kap * math.log(2 * model.eta)
            - kap * math.log(4 * model.v)
            + model.eta * gap * gap / (4 * model.v)
            - nonlocal_theta_grid(model, i, j)
        )
    )
    ladder = _ladder_prefactor(model, i, j)
    root = math.sqrt(1 - p)
    alpha_plus = root * ladder * unimod
    alpha_minus = -root / ladder * unimod.conjugate()
    matrix[i - 1, i - 1] = p
    matrix[i - 1, j - 1] = -alpha_plus
    matrix[j - 1, i - 1] = -alpha_minus
    return ConnectionFactor(i, j, p, alpha_plus, alpha_minus, matrix)


@dataclass(frozen=True)
class NormalizationLadder:
    """Diagonals of the intermediate normalization matrices, k = 0..2N-1.

    factor(0) normalizes the up band by every partner (the left ladder) and
    factor(2N-1) the down band (the right ladder); intermediate k values
    interpolate, with exchange step k moving one crossing group between
    them.
    """

    diagonals: tuple

    def factor(self, k: int) -> np.ndarray:
        return self.diagonals[k]

    @property
    def n_plus(self) -> np.ndarray:
        return self.diagonals[0]

    @property
    def n_minus(self) -> np.ndarray:
        return self.diagonals[-1]


def _ladder_diagonal(model: GridModel, k: int) -> np.ndarray:
    N = model.N
    diag = np.ones(2 * N)
    for i in range(1, N + 1):
        for ell in range(N + 1, min(i + k, 2 * N) + 1):
            diag[i - 1] /= math.sqrt(lz_probability(kappa_grid(model, i, ell)))
    for j in range(N + 1, 2 * N + 1):
        top = min(max(j - k - 1, 0), N)
        for ell in range(1, top + 1):
            diag[j - 1] /= math.sqrt(lz_probability(kappa_grid(model, ell, j)))
    return diag


def normalization_ladders(model: GridModel) -> NormalizationLadder:
    return NormalizationLadder(
        tuple(_ladder_diagonal(model, k) for k in range(2 * model.N))
    )


def smatrix_legacy(model: GridModel) -> SMatrix:
    """Ladder-normalized product of connection factors, latest group leftmost.

    The ladder multiplies the diagonal groups j - i = 2N-1, ..., 1 in that
    fixed order, so it represents the time-ordered product only when every
    crossing of a larger diagonal happens no later than every crossing of a
    smaller one; offset layouts that break this raise ShapeMismatch. Equals
    the unitary product for well-conditioned models; when any crossing has
    p < 1e-6 the p^{-1/2} ladder entries overwhelm double precision and a
    ConditioningWarning is emitted.
    """
    crossings = model.crossings()
    floor = math.inf
    idx = 0
    while idx < len(crossings):
        tied = [crossings[idx]]
        while (
            idx + 1 < len(crossings)
            and crossings[idx + 1].time == tied[0].time
        ):
            idx += 1
            tied.append(crossings[idx])
        diagonals = [c.j - c.i for c in tied]
        if max(diagonals) > floor:
            raise ShapeMismatch(
                "crossing times do not follow descending diagonals j - i; "
                "the ladder product is undefined for this offset layout"
            )
        floor = min(floor, min(diagonals))
        idx += 1
    if any(c.p < 1e-6 for c in crossings):
        worst = min(c.p for c in crossings)
        warnings.warn(
            ConditioningWarning(
                f"smallest crossing probability is {worst:.3e}; the ladder "
                "normalization amplifies roundoff beyond the product's value"
            )
        )
    ladders = normalization_ladders(model)
    x = np.diag(ladders.n_minus).astype(complex)
    for k in range(2 * model.N - 1, 0, -1):
        for i, j in _pair_range(model.N, k):
            cf = m_factor(model, i, j)
            if cf.p == 1.0:
                continue
            ri, rj = i - 1, j - 1
            top = cf.p * x[ri] - cf.alpha_plus * x[rj]
            bottom = -cf.alpha_minus * x[ri] + x[rj]
            x[ri] = top
            x[rj] = bottom
    return SMatrix(x / ladders.n_plus[:, None])


def verify_appendix_identity(model: GridModel, k: int) -> float:
    """Max residual of the exchange step: M~_k Ntil_k = Ntil_{k-1} U~_k."""
    if not 1 <= k <= 2 * model.N - 1:
        raise ShapeMismatch(f"k must be in 1..{2 * model.N - 1}, got {k}")
    dim = 2 * model.N
    m_group = np.eye(dim, dtype=complex)
    u_group = np.eye(dim, dtype=complex)
    for i, j in _pair_range(model.N, k):
        m_group = m_group @ m_factor(model, i, j).matrix
        u_group = u_group @ unitary_factor(model, i, j)
    ladders = normalization_ladders(model)
    lhs = m_group * ladders.factor(k)[None, :]
    rhs = ladders.factor(k - 1)[:, None] * u_group
    return float(np.max(np.abs(lhs - rhs)))


def stokes_phase(kappa: float) -> float:
    """pi/4 + kappa*(ln kappa - 1) + arg Gamma(1 - i*kappa); pi/4 at kappa=0."""
    if kappa == 0.0:
        return math.pi / 4
    return math.pi / 4 + kappa * (math.log(kappa) - 1) + arg_gamma(kappa)


def branch_rank(N: int, level: int, interval: int) -> int:
    """Sorted-eigenvalue rank (1 = lowest) ridden by a diabatic level.

    ``interval`` indexes the 2N gaps between consecutive crossing groups,
    counted so that interval 2N precedes every crossing and interval 1
    follows the last one. A down-band level starts at rank N + level and
    drops one rank per crossing it traverses; an up-band level starts at
    rank level - N and gains one per crossing.
    """
    if not 1 <= interval <= 2 * N:
        raise ShapeMismatch(f"interval must be in 1..{2 * N}, got {interval}")
    if level <= N:
        crossed = min(max(2 * N - level - interval + 1, 0), N)
        return N + level - crossed
    m = level - N
    crossed = min(max(N + m - interval, 0), N)
    return m + crossed


@dataclass(frozen=True)
class AiaPath:
    """Time-ordered branch ranks of one diabatic level, earliest first."""

    level: int
    ranks: tuple


def aia_path(model: GridModel, level: int) -> AiaPath:
    N = model.N
    if not 1 <= level <= 2 * N:
        raise ShapeMismatch(f"level must be in 1..{2 * N}, got {level}")
    return AiaPath(
        level=level,
        ranks=tuple(branch_rank(N, level, m) for m in range(2 * N, 0, -1)),
    )


def _equidistant_spacing(model: GridModel) -> float:
    if model.N == 1:
        return 1.0
    diffs = np.diff(model.a)
    spacing = float(diffs[0])
    scale = max(1.0, float(np.max(np.abs(model.a))))
    if spacing <= 0 or np.max(np.abs(diffs - spacing)) > 1e-12 * scale:
        raise ShapeMismatch(
            "adiabatic-impulse form needs equidistant ascending offsets"
        )
    return spacing


def smatrix_aia(
    model: GridModel, quadrature_tol: float = 1e-10, window=None
) -> SMatrix:
    """Impulse product with numerically integrated adiabatic phases.

    Alternates diagonal phase factors exp(-i * integral of the branch
    energies) over each inter-crossing interval with per-group connection
    blocks carrying the Stokes phase. The unbounded end segments are
    truncated to the oracle window, which only shifts diagonal phases, so
    |S_ij| are the meaningful outputs.
    """
    N = model.N
    spacing = _equidistant_spacing(model)
    if window is None:
        window = default_window(model)
    t_start, t_end = float(window[0]), float(window[1])
    group_times = [(N - k) * spacing / (2 * model.v) for k in range(1, 2 * N)]
    bounds = [t_start] + group_times[::-1] + [t_end]
    if bounds[0] >= bounds[1] or bounds[-2] >= bounds[-1]:
        raise ShapeMismatch("window must bracket every crossing time")

    def sorted_energies(t):
        w = np.linalg.eigvalsh(model.hamiltonian(t))
        scale = max(1.0, float(np.max(np.abs(w))))
        if w.size > 1 and float(np.min(np.diff(w))) < 1e-12 * scale:
            raise BranchTrackingFailure(
                f"instantaneous eigenvalues degenerate at t={t}"
            )
        return w

    def k_factor(m):
        lo, hi = bounds[2 * N - m], bounds[2 * N - m + 1]
        integrals, _ = quad_vec(
            sorted_energies, lo, hi, epsabs=quadrature_tol, epsrel=1e-11
        )
        phases = np.array(
            [integrals[branch_rank(N, level, m) - 1] for level in range(1, 2 * N + 1)]
        )
        return np.exp(-1j * phases)

    x = np.diag(k_factor(2 * N)).astype(complex)
    for k in range(2 * N - 1, 0, -1):
        for i, j in _pair_range(N, k):
            kap = kappa_grid(model, i, j)
            if kap == 0.0:
                continue
            p = lz_probability(kap)
            phi = stokes_phase(kap)
            root = math.sqrt(1 - p)
            alpha_plus = root * cmath.exp(1j * phi)
            alpha_minus = -root * cmath.exp(-1j * phi)
            ri, rj = i - 1, j - 1
            top = math.sqrt(p) * x[ri] - alpha_plus * x[rj]
            bottom = -alpha_minus * x[ri] + math.sqrt(p) * x[rj]
            x[ri] = top
            x[rj] = bottom
        x = k_factor(k)[:, None] * x
    return SMatrix(x)

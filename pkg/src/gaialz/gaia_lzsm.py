"""GAIA for the sinusoidally driven model.

Crossings recur twice per drive period with alternating gap slope; each
gets a 2x2-block unitary whose phase combines the local Stokes pieces, the
accumulated dynamical phase, and a non-local term collecting every other
crossing of the schedule. The infinite products behind the non-local term
regularize to finite sine ratios: the family of crossings sharing the
reference slope sign enters the numerator and the opposite family the
denominator, which is what the truncated-product check below converges to.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateCrossing, NonPositiveParameter, ShapeMismatch
from .exact_oracle import PropagationTrace
from .gaia_grid import SMatrix, arg_gamma
from .models import Crossing, LzsmModel

__all__ = [
    "CrossingSchedule",
    "StepUnitary",
    "DestructiveCondition",
    "thread_count",
    "zeta",
    "nonlocal_theta_lzsm",
    "nonlocal_theta_product",
    "theta_lzsm",
    "crossing_schedule",
    "step_unitary",
    "propagate_lzsm",
    "destructive_condition",
    "solve_destructive",
]


def thread_count() -> int:
    """Worker cap for parallel scans; GAIA_THREADS overrides the CPU count."""
    raw = os.environ.get("GAIA_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        count = 0
    if count < 1:
        raise NonPositiveParameter(
            f"GAIA_THREADS must be a positive integer, got {raw!r}"
        )
    return count


def _slope_sign(crossing: Crossing) -> float:
    return 1.0 if crossing.slope > 0 else -1.0


def zeta(model: LzsmModel, i: int, j: int, n: int) -> float:
    """Signed dynamical phase of crossing n, referenced to model.t_ref."""
    c = model.crossing(i, j, n)
    gap = model.offset_gap(i, j)

    def antiderivative(t: float) -> float:
        return (2 / model.v) * math.cos(model.v * t) + gap * t

    return (
        _slope_sign(c)
        * model.eta
        * (antiderivative(c.time) - antiderivative(model.t_ref))
    )


def _require_coupled(model: LzsmModel, i: int, j: int) -> complex:
    b = model.coupling(i, j)
    if b == 0:
        raise ShapeMismatch(f"pair ({i}, {j}) is uncoupled and never crosses")
    return b


def _partner_pairs(model: LzsmModel, i: int, j: int):
    """Coupled pairs sharing exactly one level with (i, j)."""
    for k in range(1, model.N + 1):
        if k != i and model.coupling(k, j) != 0:
            yield k, j
    for ell in range(model.N + 1, 2 * model.N + 1):
        if ell != j and model.coupling(i, ell) != 0:
            yield i, ell


def _checked_sin(x: float, context: str) -> float:
    value = abs(math.sin(x))
    if value < 1e-12:
        raise DegenerateCrossing(context)
    return value


def nonlocal_theta_lzsm(
    model: LzsmModel, i: int, j: int, n: int, cross_form: str = "sin"
) -> float:
    """Closed form of the regularized product over all other crossings.

    The own-pair factor compares crossing n with its successor; each
    partner pair contributes the ratio of its same-slope-sign crossing to
    its opposite one ("sin"), or the half-period ratio anchored at its
    ordinal-0 crossing ("tan").
    """
    if cross_form not in ("sin", "tan"):
        raise ShapeMismatch(f"cross_form must be 'sin' or 'tan', got {cross_form!r}")
    _require_coupled(model, i, j)
    c = model.crossing(i, j, n)
    succ = model.crossing(i, j, n + 1)
    own = _checked_sin(
        model.v * (c.time - succ.time) / 2,
        f"crossings {n} and {n + 1} of pair ({i}, {j}) coincide",
    )
    total = 2 * c.kappa * math.log(model.v / (2 * abs(c.slope) * own))
    for pi, pj in _partner_pairs(model, i, j):
        kap = model.crossing(pi, pj, 0).kappa
        label = f"pair ({pi}, {pj}) crosses where pair ({i}, {j}) does"
        if cross_form == "sin":
            t_same = model.crossing_in_cluster(pi, pj, c.cluster).time
            t_opp = model.crossing_in_cluster(pi, pj, c.cluster + 1).time
            num = _checked_sin(model.v * (c.time - t_same) / 2, label)
            den = _checked_sin(model.v * (c.time - t_opp) / 2, label)
        else:
            x = model.v * (c.time - model.crossing(pi, pj, 0).time) / 2
            num = _checked_sin(x, label)
            den = _checked_sin(x + math.pi / 2, label)
        total += kap * math.log(num / den)
    return total


def nonlocal_theta_product(
    model: LzsmModel, i: int, j: int, n: int, max_ordinal: int = 2000
) -> float:
    """Truncated counterpart of nonlocal_theta_lzsm, for convergence checks.

    Sums log factors over crossings within max_ordinal of the reference,
    same-sign family minus opposite family; the own-pair numerator is the
    period lattice itself, which supplies the v/(2|lambda|) scale.
    """
    half = max_ordinal // 2
    _require_coupled(model, i, j)
    c = model.crossing(i, j, n)
    succ = model.crossing(i, j, n + 1)
    period = model.period()
    lam = abs(c.slope)
    own = 0.0
    for q in range(1, half + 1):
        own += 2 * math.log(lam * q * period)
    for q in range(-half, half + 1):
        own -= math.log(lam * abs(c.time - succ.time - q * period))
    total = 2 * c.kappa * own
    for pi, pj in _partner_pairs(model, i, j):
        kap = model.crossing(pi, pj, 0).kappa
        t_same = model.crossing_in_cluster(pi, pj, c.cluster).time
        t_opp = model.crossing_in_cluster(pi, pj, c.cluster + 1).time
        acc = 0.0
        for q in range(-half, half + 1):
            acc += math.log(abs(c.time - t_same - q * period))
            acc -= math.log(abs(c.time - t_opp - q * period))
        total += kap * acc
    return total


def theta_lzsm(
    model: LzsmModel, i: int, j: int, n: int, cross_form: str = "sin"
) -> float:
    """Connection phase of crossing n of the coupled pair (i, j)."""
    b = _require_coupled(model, i, j)
    c = model.crossing(i, j, n)
    return (
        math.pi / 4
        + arg_gamma(c.kappa)
        + cmath.phase(b)
        + zeta(model, i, j, n)
        + c.kappa * math.log(model.eta / abs(c.slope))
        - nonlocal_theta_lzsm(model, i, j, n, cross_form)
    )


@dataclass(frozen=True)
class CrossingSchedule:
    """Crossings to propagate, grouped by drive half-period cluster.

    Cluster tuples are time-ordered and times never decrease across the
    flattened schedule; exactly simultaneous crossings must touch disjoint
    levels, otherwise the impulse product has no defined order.
    """

    clusters: Tuple[Tuple[Crossing, ...], ...]

    @property
    def crossings(self) -> Tuple[Crossing, ...]:
        return tuple(c for group in self.clusters for c in group)


def crossing_schedule(
    model: LzsmModel,
    n_crossings: Optional[int] = None,
    cross_form: str = "sin",
) -> CrossingSchedule:
    """Schedule clusters 1..n with phases attached to every crossing."""
    count = model.n_crossings if n_crossings is None else int(n_crossings)
    if count < 0:
        raise NonPositiveParameter(f"n_crossings must be >= 0, got {count}")
    tie = 1e-9 * model.period()
    groups = []
    for cluster in range(1, count + 1):
        events = [
            event.with_theta(
                theta_lzsm(model, event.i, event.j, event.n, cross_form)
            )
            for event in model.cluster_crossings(cluster)
        ]
        for first, second in zip(events, events[1:]):
            shared = {first.i, first.j} & {second.i, second.j}
            if shared and abs(first.time - second.time) < tie:
                raise DegenerateCrossing(
                    f"pairs ({first.i}, {first.j}) and ({second.i}, {second.j}) "
                    f"cross simultaneously at t={first.time}"
                )
        groups.append(tuple(events))
    return CrossingSchedule(clusters=tuple(groups))


@dataclass(frozen=True)
class StepUnitary:
    """One crossing and the unitary it imprints on the full state."""

    crossing: Crossing
    matrix: np.ndarray


def step_unitary(model: LzsmModel, crossing: Crossing) -> StepUnitary:
    """Block unitary of one crossing; identity when the pair is uncoupled."""
    matrix = np.eye(model.dim, dtype=complex)
    if model.coupling(crossing.i, crossing.j) == 0:
        return StepUnitary(crossing=crossing, matrix=matrix)
    theta = crossing.theta
    if theta is None:
        theta = theta_lzsm(model, crossing.i, crossing.j, crossing.n)
    sgn = _slope_sign(crossing)
    root = math.sqrt(1 - crossing.p)
    alpha_plus = sgn * root * cmath.exp(sgn * 1j * theta)
    alpha_minus = -sgn * root * cmath.exp(-sgn * 1j * theta)
    ri, rj = crossing.i - 1, crossing.j - 1
    sq = math.sqrt(crossing.p)
    matrix[ri, ri] = sq
    matrix[rj, rj] = sq
    matrix[ri, rj] = -alpha_plus
    matrix[rj, ri] = -alpha_minus
    return StepUnitary(crossing=crossing, matrix=matrix)


def _initial_vector(model: LzsmModel, initial_state) -> np.ndarray:
    if isinstance(initial_state, (int, np.integer)):
        if not 1 <= initial_state <= model.dim:
            raise ShapeMismatch(
                f"initial_state must be in 1..{model.dim}, got {initial_state}"
            )
        psi = np.zeros(model.dim, dtype=complex)
        psi[initial_state - 1] = 1.0
        return psi
    psi = np.asarray(initial_state, dtype=complex)
    if psi.shape != (model.dim,):
        raise ShapeMismatch(
            f"initial state must have {model.dim} components, got shape {psi.shape}"
        )
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-10:
        raise ShapeMismatch(f"initial state must be normalized, |psi| = {norm}")
    return psi


def propagate_lzsm(
    model: LzsmModel,
    initial_state=1,
    n_crossings: Optional[int] = None,
    cross_form: str = "sin",
) -> Tuple[PropagationTrace, SMatrix]:
    """Compose the schedule onto an initial state, sampling between clusters.

    The trace starts a quarter period before the first cluster and then
    records diabatic populations at the midpoints following each cluster,
    where the impulse picture is well defined.
    """
    schedule = crossing_schedule(model, n_crossings, cross_form)
    count = len(schedule.clusters)
    psi = _initial_vector(model, initial_state)
    if count and schedule.clusters[0]:
        t_start = schedule.clusters[0][0].time - model.period() / 4
    elif count:
        t_start = math.pi / model.v - model.period() / 4
    else:
        t_start = 0.0
    times = [t_start]
    rows = [np.abs(psi) ** 2]
    u = np.eye(model.dim, dtype=complex)
    for cluster, group in enumerate(schedule.clusters, start=1):
        for event in group:
            u = step_unitary(model, event).matrix @ u
        times.append((cluster + 0.5) * math.pi / model.v)
        rows.append(np.abs(u @ psi) ** 2)
    trace = PropagationTrace(
        times=np.array(times),
        probabilities=np.array(rows),
        propagator=u.copy(),
    )
    return trace, SMatrix(u)


@dataclass(frozen=True)
class DestructiveCondition:
    """Distance of both return-phase sums from 2*pi*Z, plus the amplitude."""

    residuals: Tuple[float, float]
    holds: bool
    s11: complex


def _return_phase_sums(model: LzsmModel) -> Tuple[List[float], List[float]]:
    """Theta sums over the first two crossings of pairs (1, N+1), (1, N+2).

    Each theta enters with its static-offset phase removed: the interference
    condition constrains the drive-accumulated part of the return phases,
    so only eta*(2/v)*cos(v*t) contributes to the dynamical piece here.
    """
    if model.N < 2:
        raise ShapeMismatch(
            "the two-path return condition needs at least two up-band levels"
        )
    sums, probs = [], []
    for j in (model.N + 1, model.N + 2):
        if model.coupling(1, j) == 0:
            sums.append(0.0)
            probs.append(1.0)
        else:
            gap = model.offset_gap(1, j)
            total = 0.0
            for n in (1, 2):
                c = model.crossing(1, j, n)
                offset_part = (
                    _slope_sign(c) * model.eta * gap * (c.time - model.t_ref)
                )
                total += theta_lzsm(model, 1, j, n) - offset_part
            sums.append(total)
            probs.append(model.crossing(1, j, 1).p)
    return sums, probs


def destructive_condition(
    model: LzsmModel, tolerance: float = 1e-3
) -> DestructiveCondition:
    """Check whether level 1 returns to itself after one full drive period.

    The amplitude splits into staying put, exchanging with level N+1, and
    exchanging with level N+2; it has unit magnitude exactly when both
    accumulated phase pairs land on a multiple of 2*pi. The pairs are the
    drive parts of the return phases, per _return_phase_sums.
    """
    sums, probs = _return_phase_sums(model)
    residuals = tuple(abs(math.remainder(s, 2 * math.pi)) for s in sums)
    p1, p2 = probs
    s11 = (
        (1 - p1) * cmath.exp(1j * sums[0])
        + p1 * (1 - p2) * cmath.exp(1j * sums[1])
        + p1 * p2
    )
    return DestructiveCondition(
        residuals=residuals,
        holds=residuals[0] <= tolerance and residuals[1] <= tolerance,
        s11=s11,
    )


def _signed_residuals(model: LzsmModel) -> Tuple[float, float]:
    sums, _ = _return_phase_sums(model)
    return tuple(math.remainder(s, 2 * math.pi) for s in sums)


def solve_destructive(
    model_family: Callable[[float], LzsmModel],
    eta_range: Tuple[float, float],
    tol: float = 1e-3,
    samples: int = 400,
) -> List[float]:
    """Every eta in the range where both return-phase residuals vanish.

    Scans the range, locates local minima of the larger residual magnitude,
    polishes each bracket, and keeps minima at or below tol. Returns a
    sorted, deduplicated list; empty when the range contains no
    simultaneous solution.
    """
    lo, hi = float(eta_range[0]), float(eta_range[1])
    if not hi > lo:
        raise ShapeMismatch(f"eta_range must satisfy lo < hi, got ({lo}, {hi})")
    grid = np.linspace(lo, hi, samples)
    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_signed_residuals, map(model_family, grid)))
    else:
        values = [_signed_residuals(model_family(e)) for e in grid]
    worst = [max(abs(r[0]), abs(r[1])) for r in values]

    def worst_residual(eta: float) -> float:
        r = _signed_residuals(model_family(eta))
        return max(abs(r[0]), abs(r[1]))

    brackets = []
    last = len(grid) - 1
    for idx in range(len(grid)):
        below = idx == 0 or worst[idx] <= worst[idx - 1]
        above = idx == last or worst[idx] <= worst[idx + 1]
        if below and above:
            brackets.append((grid[max(idx - 1, 0)], grid[min(idx + 1, last)]))

    solutions = []
    for a, b in brackets:
        result = minimize_scalar(
            worst_residual, bounds=(float(a), float(b)), method="bounded",
            options={"xatol": 1e-12},
        )
        eta_star = float(result.x)
        if worst_residual(eta_star) <= tol:
            solutions.append(eta_star)
    solutions.sort()
    deduped = []
    for eta in solutions:
        if not deduped or abs(eta - deduped[-1]) > 1e-6 * max(1.0, abs(eta)):
            deduped.append(eta)
    return deduped

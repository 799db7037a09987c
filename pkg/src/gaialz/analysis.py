"""Closed forms for the symmetric four-level ramp, and oracle comparisons.

The four-level model with equal direct couplings (Delta) and equal skew
couplings (gamma) admits a fully explicit S-matrix; its 3<-4 transition
probability splits into two interfering paths whose relative phase carries
the non-local term, so its zeros probe that term directly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ShapeMismatch
from .exact_oracle import PropagatorConfig, default_window, propagate_exact
from .gaia_grid import (
    RED_REGION_THRESHOLD,
    SMatrix,
    arg_gamma,
    gaia_validity_margin,
    kappa_grid,
    lz_probability,
    smatrix_grid,
    theta_grid,
)
from .gaia_lzsm import propagate_lzsm
from .models import GridModel, LzsmModel

__all__ = [
    "InterferenceReport",
    "ComparisonRow",
    "s4_closed_form",
    "p34",
    "p34_zeros",
    "compare_gaia_oracle",
]


def _require_interference_model(model) -> float:
    """Validate the symmetric four-level family; returns the offset gap."""
    if not isinstance(model, GridModel) or model.N != 2:
        raise ShapeMismatch("closed form needs a ramp model with N = 2")
    if model.b[0, 0] != model.b[1, 1] or model.b[0, 1] != model.b[1, 0]:
        raise ShapeMismatch(
            "closed form needs b_13 = b_24 and b_14 = b_23 (symmetric couplings)"
        )
    gap = float(model.a[1] - model.a[0])
    if gap <= 0:
        raise ShapeMismatch("closed form assumes a_2 > a_1")
    return gap


def _alpha_factors(model: GridModel, i: int, j: int):
    """(alpha+, alpha-, sqrt(p)) of one crossing; (0, 0, 1) if uncoupled."""
    kap = kappa_grid(model, i, j)
    p = lz_probability(kap)
    if kap == 0.0:
        return 0j, 0j, 1.0
    theta, _ = theta_grid(model, i, j)
    root = math.sqrt(1 - p)
    return (
        root * cmath.exp(1j * theta),
        -root * cmath.exp(-1j * theta),
        math.sqrt(p),
    )


def s4_closed_form(model: GridModel) -> SMatrix:
    """The explicit S-matrix of the symmetric four-level ramp.

    Entries (1,2) and (4,3) vanish identically: no path connects those
    levels in this crossing layout.
    """
    _require_interference_model(model)
    ap13, am13, sp13 = _alpha_factors(model, 1, 3)
    ap24, am24, sp24 = _alpha_factors(model, 2, 4)
    ap14, am14, sp14 = _alpha_factors(model, 1, 4)
    ap23, am23, sp23 = _alpha_factors(model, 2, 3)
    rows = [
        [
            sp14 * sp13,
            0.0,
            -ap13,
            -sp13 * ap14,
        ],
        [
            ap24 * am14 * sp23 + ap23 * am13 * sp14,
            sp23 * sp24,
            -ap23 * sp13,
            -ap24 * sp23 * sp14 - ap23 * am13 * ap14,
        ],
        [
            -am23 * ap24 * am14 - am13 * sp23 * sp14,
            -am23 * sp24,
            sp23 * sp13,
            ap24 * am23 * sp14 + am13 * ap14 * sp23,
        ],
        [
            -sp24 * am14,
            -am24,
            0.0,
            sp24 * sp14,
        ],
    ]
    return SMatrix(np.array(rows, dtype=complex))


@dataclass(frozen=True)
class InterferenceReport:
    """Two-path decomposition of the 3<-4 transition probability."""

    p_a: float
    p_b: float
    phase: float
    p34: float
    zeros: Tuple[float, ...] = ()


def p34(model: GridModel) -> InterferenceReport:
    """P_34 as direct paths plus their interference term."""
    gap = _require_interference_model(model)
    kap_delta = kappa_grid(model, 1, 3)
    kap_gamma = kappa_grid(model, 1, 4)
    p_delta = lz_probability(kap_delta)
    p_gamma = lz_probability(kap_gamma)
    p_a = p_gamma * (1 - p_delta) * (1 - p_gamma)
    p_b = (1 - p_gamma) * (1 - p_delta) * p_gamma
    scale = model.eta * gap * gap / (2 * model.v)
    phase = (
        2 * (arg_gamma(kap_gamma) - arg_gamma(kap_delta))
        + scale
        + 2 * (kap_gamma - kap_delta) * math.log(scale)
    )
    value = p_a + p_b + 2 * math.sqrt(p_a * p_b) * math.cos(phase)
    return InterferenceReport(
        p_a=p_a,
        p_b=p_b,
        phase=phase,
        p34=min(1.0, max(0.0, value)),
    )


def p34_zeros(model_family, sweep: Sequence[float]) -> List[float]:
    """Parameter values in the sweep range where P_34 vanishes.

    Brackets the interference phase crossing pi (mod 2*pi), requires the
    two path probabilities to agree there (otherwise the minimum cannot
    reach zero), then polishes the tangential minimum of P_34 itself.
    Returns an empty list when no zero lies in range.
    """
    points = sorted(float(x) for x in sweep)
    if len(points) < 2:
        return [
            x for x in points if p34(model_family(x)).p34 < 1e-10
        ]

    def phase_gap(x: float) -> float:
        return math.remainder(p34(model_family(x)).phase - math.pi, 2 * math.pi)

    def value(x: float) -> float:
        return p34(model_family(x)).p34

    gaps = [phase_gap(x) for x in points]
    zeros: List[float] = []
    for idx in range(len(points) - 1):
        g_a, g_b = gaps[idx], gaps[idx + 1]
        if g_a == 0.0:
            candidate = points[idx]
        elif g_a * g_b < 0 and abs(g_a - g_b) < math.pi:
            a, b = points[idx], points[idx + 1]
            f_a = g_a
            for _ in range(80):
                mid = 0.5 * (a + b)
                f_m = phase_gap(mid)
                if f_m == 0.0 or b - a < 1e-13 * max(1.0, abs(mid)):
                    a = b = mid
                    break
                if f_a * f_m < 0:
                    b = mid
                else:
                    a, f_a = mid, f_m
            candidate = 0.5 * (a + b)
        else:
            continue
        report = p34(model_family(candidate))
        if abs(report.p_a - report.p_b) > 1e-9 * max(report.p_a, report.p_b, 1e-300):
            continue
        cell = points[idx + 1] - points[idx]
        lo = max(points[0], candidate - cell)
        hi = min(points[-1], candidate + cell)
        result = minimize_scalar(
            value, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
        )
        best = float(result.x)
        if value(best) < 1e-10:
            zeros.append(best)
    if gaps[-1] == 0.0 and value(points[-1]) < 1e-10:
        zeros.append(points[-1])
    return zeros


@dataclass(frozen=True)
class ComparisonRow:
    """One aligned GAIA-vs-oracle probability, ready for CSV output."""

    parameter: float
    observable: str
    p_gaia: float
    p_exact: float
    diff: float
    margin: float
    status: str


def compare_gaia_oracle(
    model,
    observables,
    parameter: float = math.nan,
    window: Optional[Tuple[float, float]] = None,
    tolerance: float = 1e-8,
    initial_state: int = 1,
    cross_form: str = "sin",
) -> List[ComparisonRow]:
    """Aligned GAIA and exact probabilities for the requested observables.

    Ramp models take (i, j) index pairs (one row each, labeled by
    ``parameter``); driven models take level indices and produce one row
    per trace sample time, with the time in the parameter column. Rows
    are flagged RED when the validity margin falls below the threshold.
    """
    margin = gaia_validity_margin(model)
    status = "RED" if margin < RED_REGION_THRESHOLD else "OK"
    rows: List[ComparisonRow] = []
    if isinstance(model, GridModel):
        smat = smatrix_grid(model)
        win = window if window is not None else default_window(model)
        trace = propagate_exact(
            model, PropagatorConfig(window=win, tolerance=tolerance)
        )
        for i, j in observables:
            p_gaia = smat.probability(i, j)
            p_exact = float(abs(trace.propagator[i - 1, j - 1]) ** 2)
            rows.append(
                ComparisonRow(
                    parameter=parameter,
                    observable=f"P_{i}_{j}",
                    p_gaia=p_gaia,
                    p_exact=p_exact,
                    diff=abs(p_gaia - p_exact),
                    margin=margin,
                    status=status,
                )
            )
        return rows
    if not isinstance(model, LzsmModel):
        raise ShapeMismatch(f"unsupported model type {type(model).__name__}")
    levels = [int(level) for level in observables]
    for level in levels:
        if not 1 <= level <= model.dim:
            raise ShapeMismatch(f"observable level {level} out of range")
    trace_gaia, _ = propagate_lzsm(
        model, initial_state=initial_state, cross_form=cross_form
    )
    config = PropagatorConfig(
        window=(float(trace_gaia.times[0]), float(trace_gaia.times[-1])),
        tolerance=tolerance,
        sample_times=[float(t) for t in trace_gaia.times],
        initial_state=initial_state,
    )
    trace_exact = propagate_exact(model, config)
    for level in levels:
        for idx, t in enumerate(trace_gaia.times):
            p_gaia = float(trace_gaia.probabilities[idx, level - 1])
            p_exact = float(trace_exact.probabilities[idx, level - 1])
            rows.append(
                ComparisonRow(
                    parameter=float(t),
                    observable=f"P_{level}",
                    p_gaia=p_gaia,
                    p_exact=p_exact,
                    diff=abs(p_gaia - p_exact),
                    margin=margin,
                    status=status,
                )
            )
    return rows

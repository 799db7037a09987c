"""Direct numerical propagator used to audit the analytic S-matrices.

Integrates the Schroedinger equation with an exponential midpoint rule:
each step applies the exact exponential of the Hamiltonian evaluated at
the step midpoint, with step doubling for error control. The commutator
driving the local error is time-independent for both supported drives, so
the accepted step settles to a constant and cost scales linearly with the
window length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import NonHermitianInput, ShapeMismatch, StepLimitExceeded
from .models import GridModel, LzsmModel

__all__ = [
    "MARGIN_COEFF",
    "WINDOW_SAFETY",
    "PropagatorConfig",
    "PropagationTrace",
    "default_window",
    "propagate_exact",
]

MARGIN_COEFF = 20.0
WINDOW_SAFETY = 5.0


def default_window(model) -> Tuple[float, float]:
    """Integration window that comfortably brackets every anticrossing.

    Ramp models get the outermost crossing times padded by a multiple of
    the largest transition duration; periodic models get a quarter period
    beyond the first and last propagated cluster.
    """
    if isinstance(model, LzsmModel):
        quarter = model.period() / 4
        first = model.cluster_crossings(1)
        last = model.cluster_crossings(model.n_crossings)
        t_first = first[0].time if first else math.pi / model.v
        t_last = last[-1].time if last else model.n_crossings * math.pi / model.v
        return (t_first - quarter, t_last + quarter)
    crossings = model.crossings()
    if crossings:
        kap_max = max(c.kappa for c in crossings)
        t_lo = min(c.time for c in crossings)
        t_hi = max(c.time for c in crossings)
    else:
        kap_max = 0.0
        t_lo = t_hi = 0.0
    margin = (
        MARGIN_COEFF
        * WINDOW_SAFETY
        * max(1.0, math.sqrt(kap_max))
        / math.sqrt(model.eta * model.v)
    )
    return (t_lo - margin, t_hi + margin)


@dataclass(frozen=True)
class PropagatorConfig:
    """Controls for one oracle run.

    ``tolerance`` bounds the local propagator defect per step.
    ``sample_times`` are where populations get recorded; they must lie
    inside the window. ``initial_state`` is the 1-based diabatic level
    whose column of the propagator is traced.
    """

    window: Tuple[float, float]
    tolerance: float = 1e-10
    max_steps: int = 500_000
    sample_times: Optional[Sequence[float]] = None
    initial_state: int = 1


@dataclass(frozen=True)
class PropagationTrace:
    """Sampled populations plus the full end-to-end propagator."""

    times: np.ndarray
    probabilities: np.ndarray
    propagator: np.ndarray

    def probability(self, level: int) -> np.ndarray:
        """Population history of a diabatic level (1-based)."""
        return self.probabilities[:, level - 1]


def _check_hermitian(h: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(h))))
    if float(np.max(np.abs(h - h.conj().T))) > 1e-12 * scale:
        raise NonHermitianInput("hamiltonian(t) returned a non-Hermitian matrix")


def _midpoint_pair(model, t: float, h: float):
    """Propagators for one full step and the same step split in two."""
    mids = (t + h / 2, t + h / 4, t + 3 * h / 4)
    hams = np.stack([model.hamiltonian(m) for m in mids]).astype(complex)
    w, v = np.linalg.eigh(hams)
    durations = np.array([h, h / 2, h / 2])
    phases = np.exp(-1j * durations[:, None] * w)
    us = (v * phases[:, None, :]) @ v.conj().swapaxes(1, 2)
    return us[0], us[2] @ us[1]


def propagate_exact(model, config: Optional[PropagatorConfig] = None) -> PropagationTrace:
    """Integrate exp-ordered dynamics over the window; exactly unitary output."""
    cfg = config if config is not None else PropagatorConfig(window=default_window(model))
    t_start, t_end = float(cfg.window[0]), float(cfg.window[1])
    if t_start == t_end:
        raise ShapeMismatch("window must have nonzero extent")
    span = abs(t_end - t_start)
    direction = 1.0 if t_end > t_start else -1.0
    dim = model.dim
    if not 1 <= cfg.initial_state <= dim:
        raise ShapeMismatch(
            f"initial_state must be in 1..{dim}, got {cfg.initial_state}"
        )
    if cfg.sample_times is None:
        samples = [t_end]
    else:
        samples = sorted((float(s) for s in cfg.sample_times), key=lambda s: direction * s)
        lo, hi = min(t_start, t_end), max(t_start, t_end)
        slack = 1e-12 * max(1.0, span)
        if samples and (samples[0] < lo - slack or samples[-1] > hi + slack):
            raise ShapeMismatch("sample_times must lie inside the window")

    h0 = model.hamiltonian(t_start)
    _check_hermitian(np.asarray(h0))
    scale0 = max(1.0, float(np.max(np.abs(np.linalg.eigvalsh(h0)))))
    h = direction * min(1e-3 * span, 1.0 / scale0)

    u = np.eye(dim, dtype=complex)
    col = cfg.initial_state - 1
    t = t_start
    steps = 0
    rows = []
    targets = list(samples)
    if not targets or targets[-1] != t_end:
        targets.append(t_end)
    tiny = 1e-14 * max(1.0, span)
    for idx, target in enumerate(targets):
        while (target - t) * direction > tiny:
            steps += 1
            if steps > cfg.max_steps:
                raise StepLimitExceeded(
                    f"exceeded {cfg.max_steps} steps at t={t}"
                )
            h_step = h
            hit = (t + h_step - target) * direction >= 0
            if hit:
                h_step = target - t
            u_full, u_half = _midpoint_pair(model, t, h_step)
            err = float(np.max(np.abs(u_full - u_half)))
            accepted = err <= cfg.tolerance
            if accepted:
                u = u_half @ u
                t = target if hit else t + h_step
            factor = 0.9 * (cfg.tolerance / max(err, 1e-300)) ** (1.0 / 3.0)
            factor = min(5.0, max(0.2, factor))
            if not accepted:
                h = h_step * factor
            elif not hit:
                h = h_step * factor
        t = target
        if idx < len(samples):
            rows.append(np.abs(u[:, col]) ** 2)
    return PropagationTrace(
        times=np.array(samples),
        probabilities=np.array(rows).reshape(len(samples), dim),
        propagator=u,
    )

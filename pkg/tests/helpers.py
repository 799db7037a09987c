"""Shared random-model generators for the test suite.

Couplings are drawn through the target kappa of each pair, so the
conditioning of every model is controlled explicitly: kappa <= 0.6 keeps
the 1e-10 identity checks inside double precision, while the unitarity
suites go up to kappa = 2.
"""

import numpy as np

from gaialz import build_grid, build_lzsm


def draw_grid(rng, N=None, kappa_max=0.6, equidistant=True):
    """Random ramp model; equidistant offsets keep k-group order = time order."""
    if N is None:
        N = int(rng.integers(1, 5))
    v = float(rng.uniform(0.5, 2.0))
    eta = float(rng.uniform(1.0, 20.0))
    spacing = float(rng.uniform(1.0, 3.0))
    if equidistant:
        jitter = rng.uniform(-0.4, 0.4, N) * spacing / (2 * N)
        a = spacing * np.arange(N) + jitter
    else:
        while True:
            a = rng.uniform(-3.0, 3.0, N)
            if len(np.unique(a)) == N:
                break
    kap = rng.uniform(0.02, kappa_max, (N, N))
    phase = rng.uniform(0.0, 2 * np.pi, (N, N))
    b = np.sqrt(2 * v * kap) * np.exp(1j * phase)
    return build_grid(N, v, eta, a, b)


def draw_lzsm(rng, N=None, kappa_max=2.0, n_crossings=20):
    """Random driven model with all pairs coupled and |a_i - a_j| < 2."""
    if N is None:
        N = int(rng.integers(1, 4))
    v = float(rng.uniform(0.5, 2.0))
    eta = float(rng.uniform(1.0, 20.0))
    while True:
        a = np.sort(rng.uniform(0.0, 1.2, N))
        if N == 1 or np.min(np.diff(a)) > 0.05:
            break
    slope_min = 2 * v * np.sqrt(1 - (np.ptp(a) / 2) ** 2)
    kap = rng.uniform(0.02, kappa_max, (N, N))
    phase = rng.uniform(0.0, 2 * np.pi, (N, N))
    b = np.sqrt(slope_min * kap) * np.exp(1j * phase)
    return build_lzsm(N, v, eta, a, b, n_crossings=n_crossings)

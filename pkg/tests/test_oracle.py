import math

import numpy as np
import pytest

from gaialz import (
    NonHermitianInput,
    PropagatorConfig,
    ShapeMismatch,
    StepLimitExceeded,
    build_grid,
    build_lzsm,
    default_window,
    propagate_exact,
)


class TestDefaultWindow:
    def test_grid_brackets_crossings(self):
        m = build_grid(2, 1.0, 4.0, [0.0, 3.0], 0.5 * np.ones((2, 2)))
        lo, hi = default_window(m)
        times = [c.time for c in m.crossings()]
        kap_max = max(c.kappa for c in m.crossings())
        margin = 100 * max(1.0, math.sqrt(kap_max)) / math.sqrt(m.eta * m.v)
        assert lo == pytest.approx(min(times) - margin)
        assert hi == pytest.approx(max(times) + margin)

    def test_lzsm_quarter_period_padding(self):
        m = build_lzsm(1, 2.0, 4.0, [0.0], [[0.5]], n_crossings=6)
        lo, hi = default_window(m)
        quarter = m.period() / 4
        assert lo == pytest.approx(m.cluster_crossings(1)[0].time - quarter)
        assert hi == pytest.approx(m.cluster_crossings(6)[-1].time + quarter)


class TestPropagateExact:
    def test_zero_coupling_keeps_populations(self):
        m = build_grid(2, 1.0, 3.0, [0.0, 1.0], np.zeros((2, 2)))
        trace = propagate_exact(m, PropagatorConfig(window=(-5.0, 5.0)))
        assert np.allclose(trace.probabilities[-1], [1.0, 0.0, 0.0, 0.0])
        # diagonal propagator with unimodular entries
        off = trace.propagator - np.diag(np.diag(trace.propagator))
        assert np.max(np.abs(off)) < 1e-10
        assert np.allclose(np.abs(np.diag(trace.propagator)), 1.0)

    def test_propagator_unitary(self):
        m = build_grid(1, 1.0, 2.0, [0.0], [[0.7]])
        trace = propagate_exact(m, PropagatorConfig(window=(-6.0, 6.0)))
        u = trace.propagator
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-11

    def test_two_level_lz_probability(self):
        kappa = 0.5
        eta, v = 10.0, 1.0
        m = build_grid(1, v, eta, [0.0], [[math.sqrt(2 * v * kappa)]])
        trace = propagate_exact(
            m, PropagatorConfig(window=(-30.0, 30.0), tolerance=1e-8)
        )
        p11 = abs(trace.propagator[0, 0]) ** 2
        assert p11 == pytest.approx(math.exp(-2 * math.pi * kappa), abs=0.01)

    def test_window_widening_is_converged(self):
        # the default window leaves a residual probability ripple of order
        # sqrt(p(1-p)) divided by the scaled window size, so the 1e-3
        # figure applies in the strongly coupled regime; weaker coupling
        # converges within the 0.01 budget of the LZ check above
        m = build_grid(1, 1.0, 10.0, [0.0], [[math.sqrt(2.0)]])
        lo, hi = default_window(m)
        base = propagate_exact(m, PropagatorConfig(window=(lo, hi), tolerance=1e-8))
        wide = propagate_exact(
            m, PropagatorConfig(window=(2 * lo, 2 * hi), tolerance=1e-8)
        )
        diff = np.max(np.abs(np.abs(base.propagator) ** 2 - np.abs(wide.propagator) ** 2))
        assert diff <= 1e-3

    def test_time_reversal_roundtrip(self):
        m = build_grid(1, 1.0, 2.0, [0.0], [[0.7]])
        fwd = propagate_exact(m, PropagatorConfig(window=(-6.0, 6.0)))
        back = propagate_exact(m, PropagatorConfig(window=(6.0, -6.0)))
        roundtrip = back.propagator @ fwd.propagator
        assert np.max(np.abs(roundtrip - np.eye(2))) <= 1e-8

    def test_tolerance_ordering(self):
        m = build_grid(1, 1.0, 2.0, [0.0], [[0.7]])

        def p11(tol):
            trace = propagate_exact(
                m, PropagatorConfig(window=(-6.0, 6.0), tolerance=tol)
            )
            return abs(trace.propagator[0, 0]) ** 2

        coarse, fine, finest = p11(1e-6), p11(1e-8), p11(1e-10)
        assert abs(fine - finest) < abs(coarse - fine)

    def test_sample_times_recorded(self):
        m = build_grid(1, 1.0, 2.0, [0.0], [[0.4]])
        wanted = [-4.0, -1.0, 0.0, 2.5, 4.0]
        trace = propagate_exact(
            m,
            PropagatorConfig(window=(-4.0, 4.0), sample_times=wanted, tolerance=1e-8),
        )
        assert np.allclose(trace.times, wanted)
        assert trace.probabilities.shape == (5, 2)
        # populations sum to one at every sample
        assert np.allclose(trace.probabilities.sum(axis=1), 1.0, atol=1e-9)
        assert np.allclose(trace.probability(1), trace.probabilities[:, 0])

    def test_sample_times_outside_window(self):
        m = build_grid(1, 1.0, 2.0, [0.0], [[0.4]])
        with pytest.raises(ShapeMismatch):
            propagate_exact(
                m, PropagatorConfig(window=(-4.0, 4.0), sample_times=[5.0])
            )

    def test_initial_state_selects_column(self):
        m = build_grid(2, 1.0, 3.0, [0.0, 1.0], 0.3 * np.ones((2, 2)))
        trace = propagate_exact(
            m,
            PropagatorConfig(
                window=(-6.0, 6.0),
                sample_times=[-6.0],
                initial_state=3,
                tolerance=1e-8,
            ),
        )
        assert np.allclose(trace.probabilities[0], [0.0, 0.0, 1.0, 0.0])
        with pytest.raises(ShapeMismatch):
            propagate_exact(m, PropagatorConfig(window=(-6.0, 6.0), initial_state=5))

    def test_step_limit(self):
        m = build_grid(1, 1.0, 5.0, [0.0], [[0.7]])
        with pytest.raises(StepLimitExceeded):
            propagate_exact(
                m, PropagatorConfig(window=(-8.0, 8.0), max_steps=3, tolerance=1e-12)
            )

    def test_empty_window_rejected(self):
        m = build_grid(1, 1.0, 5.0, [0.0], [[0.7]])
        with pytest.raises(ShapeMismatch):
            propagate_exact(m, PropagatorConfig(window=(2.0, 2.0)))

    def test_non_hermitian_input(self):
        class Broken:
            dim = 2

            def hamiltonian(self, t):
                return np.array([[0.0, 1.0], [0.5, 0.0]])

        with pytest.raises(NonHermitianInput):
            propagate_exact(Broken(), PropagatorConfig(window=(0.0, 1.0)))

    def test_lzsm_default_run(self):
        m = build_lzsm(1, 1.0, 6.0, [0.0], [[0.6]], n_crossings=2)
        trace = propagate_exact(m)
        assert trace.probabilities.shape == (1, 2)
        u = trace.propagator
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-11

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ilshade_rsp.adapt import (
    TERMINAL_CR,
    HistoricalMemory,
    SuccessSet,
    assign_parameters,
    update_memory,
    weighted_lehmer_mean,
)
from ilshade_rsp.core import RngStream


def cauchy_u(target, location, scale=0.1):
    """Uniform draw that makes the inverse-CDF Cauchy sampler emit `target`."""
    return math.atan((target - location) / scale) / math.pi + 0.5


class TestHistoricalMemory:
    def test_initial_layout(self):
        mem = HistoricalMemory(5)
        assert np.array_equal(mem.m_f, [0.3, 0.3, 0.3, 0.3, 0.9])
        assert np.array_equal(mem.m_cr, [0.8, 0.8, 0.8, 0.8, 0.9])
        assert mem.update_pos == 0

    def test_rejects_degenerate_size(self):
        with pytest.raises(ValueError):
            HistoricalMemory(1)


class TestWeightedLehmerMean:
    def test_single_value(self):
        assert weighted_lehmer_mean([0.5], [1.0]) == 0.5

    def test_equal_weights_hand_computed(self):
        assert weighted_lehmer_mean([0.2, 0.4], [0.5, 0.5]) == pytest.approx(1 / 3)

    def test_constant_values(self):
        assert weighted_lehmer_mean([0.7, 0.7, 0.7], [1, 2, 3]) == pytest.approx(0.7)

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            weighted_lehmer_mean([], [])

    def test_zero_weights_raise(self):
        with pytest.raises(ValueError):
            weighted_lehmer_mean([0.5], [0.0])

    @settings(max_examples=1000, deadline=None)
    @given(
        st.lists(st.floats(0.01, 1.0), min_size=1, max_size=20),
        st.data(),
    )
    def test_bounded_and_dominates_arithmetic_mean(self, values, data):
        weights = data.draw(
            st.lists(
                st.floats(0.01, 10.0),
                min_size=len(values),
                max_size=len(values),
            )
        )
        m = weighted_lehmer_mean(values, weights)
        assert min(values) - 1e-12 <= m <= max(values) + 1e-12
        arith = np.average(values, weights=weights)
        assert m >= arith - 1e-12


class TestAssignParameters:
    def test_cr_floor_early_phase(self, scripted):
        mem = HistoricalMemory(5)
        # slot 0; F draw hits 0.5; CR normal yields 0.2 -> floored to 0.7
        rng = scripted(
            integers=[0],
            uniform=[cauchy_u(0.5, 0.3)],
            normal=[(0.2 - 0.8) / 0.1],
        )
        F, CR = assign_parameters(mem, nfe=10, nfe_max=100, rng=rng)
        assert F == pytest.approx(0.5)
        assert CR == 0.7

    def test_cr_floor_middle_phase(self, scripted):
        mem = HistoricalMemory(5)
        rng = scripted(
            integers=[0],
            uniform=[cauchy_u(0.5, 0.3)],
            normal=[(0.2 - 0.8) / 0.1],
        )
        _, CR = assign_parameters(mem, nfe=30, nfe_max=100, rng=rng)
        assert CR == 0.6

    def test_f_capped_before_sixty_percent(self, scripted):
        mem = HistoricalMemory(5)
        rng = scripted(integers=[0], uniform=[cauchy_u(0.9, 0.3)], normal=[0.0])
        F, _ = assign_parameters(mem, nfe=30, nfe_max=100, rng=rng)
        assert F == 0.7

    def test_f_not_capped_late(self, scripted):
        mem = HistoricalMemory(5)
        rng = scripted(integers=[0], uniform=[cauchy_u(0.9, 0.3)], normal=[0.0])
        F, _ = assign_parameters(mem, nfe=70, nfe_max=100, rng=rng)
        assert F == pytest.approx(0.9)

    def test_last_slot_uses_fixed_means(self, scripted):
        mem = HistoricalMemory(5)
        rng = scripted(integers=[4], uniform=[cauchy_u(0.85, 0.9)], normal=[0.0])
        F, CR = assign_parameters(mem, nfe=90, nfe_max=100, rng=rng)
        assert F == pytest.approx(0.85)
        assert CR == pytest.approx(0.9)

    def test_nonpositive_f_redrawn(self, scripted):
        mem = HistoricalMemory(5)
        rng = scripted(
            integers=[0],
            uniform=[cauchy_u(-0.2, 0.3), cauchy_u(0.4, 0.3)],
            normal=[0.0],
        )
        F, _ = assign_parameters(mem, nfe=90, nfe_max=100, rng=rng)
        assert F == pytest.approx(0.4)

    def test_f_truncated_to_one(self, scripted):
        mem = HistoricalMemory(5)
        rng = scripted(integers=[0], uniform=[cauchy_u(1.8, 0.3)], normal=[0.0])
        F, _ = assign_parameters(mem, nfe=90, nfe_max=100, rng=rng)
        assert F == 1.0

    def test_terminal_slot_emits_zero_cr_without_draw(self, scripted):
        mem = HistoricalMemory(5)
        mem.m_cr[0] = TERMINAL_CR
        # no normal value scripted: a draw would fail the test
        rng = scripted(integers=[0], uniform=[cauchy_u(0.5, 0.3)])
        _, CR = assign_parameters(mem, nfe=90, nfe_max=100, rng=rng)
        assert CR == 0.0

    def test_ranges_always_valid(self):
        mem = HistoricalMemory(5)
        rng = RngStream(6)
        for trial in range(2000):
            nfe = trial % 100
            F, CR = assign_parameters(mem, nfe, 100, rng)
            assert 0.0 < F <= 1.0
            assert 0.0 <= CR <= 1.0
            if nfe < 25:
                assert CR >= 0.7
            elif nfe < 50:
                assert CR >= 0.6


class TestUpdateMemory:
    def test_empty_set_is_noop(self):
        mem = HistoricalMemory(5)
        before_f, before_cr, pos = mem.m_f.copy(), mem.m_cr.copy(), mem.update_pos
        update_memory(mem, SuccessSet())
        assert np.array_equal(mem.m_f, before_f)
        assert np.array_equal(mem.m_cr, before_cr)
        assert mem.update_pos == pos

    def test_constant_values_write_through(self):
        mem = HistoricalMemory(5)
        s = SuccessSet()
        s.add(0.5, 0.6, 1.0)
        s.add(0.5, 0.6, 2.5)
        update_memory(mem, s)
        assert mem.m_f[0] == pytest.approx(0.5)
        assert mem.m_cr[0] == pytest.approx(0.6)
        assert mem.update_pos == 1

    def test_position_wraps_over_writable_slots(self):
        mem = HistoricalMemory(5)
        for _ in range(4):
            s = SuccessSet()
            s.add(0.4, 0.5, 1.0)
            update_memory(mem, s)
        assert mem.update_pos == 0

    def test_terminal_marker_on_all_zero_cr(self):
        mem = HistoricalMemory(5)
        s = SuccessSet()
        s.add(0.4, 0.0, 1.0)
        s.add(0.6, 0.0, 2.0)
        update_memory(mem, s)
        assert mem.m_cr[0] == TERMINAL_CR
        assert mem.m_f[0] > 0

    def test_last_slot_never_written(self):
        mem = HistoricalMemory(4)
        rng = RngStream(0)
        for _ in range(100):
            s = SuccessSet()
            for _ in range(3):
                s.add(rng.uniform() + 0.01, rng.uniform(), rng.uniform() + 0.01)
            update_memory(mem, s)
        assert mem.m_f[-1] == 0.9
        assert mem.m_cr[-1] == 0.9

    def test_ties_rejected_from_success_set(self):
        s = SuccessSet()
        with pytest.raises(ValueError):
            s.add(0.5, 0.5, 0.0)

import numpy as np
import pytest


class ScriptedRng:
    """Drop-in RngStream replacement replaying preloaded draws per channel.

    Exhausting a channel raises, so a test that consumes more randomness than
    it scripted fails loudly instead of silently passing.
    """

    def __init__(self, uniform=(), integers=(), normal=(), exponential=()):
        self._uniform = list(uniform)
        self._integers = list(integers)
        self._normal = list(normal)
        self._exponential = list(exponential)

    def _pop(self, queue, name):
        if not queue:
            raise AssertionError(f"scripted rng ran out of {name} draws")
        return queue.pop(0)

    def uniform(self):
        return self._pop(self._uniform, "uniform")

    def uniforms(self, n):
        return np.array([self.uniform() for _ in range(n)])

    def integers(self, low, high):
        value = self._pop(self._integers, "integer")
        assert low <= value < high, f"scripted integer {value} outside [{low}, {high})"
        return value

    def normal(self):
        return self._pop(self._normal, "normal")

    def exponential(self):
        return self._pop(self._exponential, "exponential")


@pytest.fixture
def scripted():
    return ScriptedRng

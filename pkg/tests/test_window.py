"""Tests for window widening."""

from unittest.mock import MagicMock

import pytest

from cs_fermionic.algebra import PPoly, ZSeries, series_residue
from cs_fermionic.config import CSConfig
from cs_fermionic.errors import WindowBudgetExceeded, WindowTooNarrow
from cs_fermionic.window import (
    WindowPolicy,
    next_window_depth,
    widen_on_narrow_window,
    with_policy,
)


def _narrow(needed=None):
    return WindowTooNarrow("too narrow", needed=needed, window=(-2, 3))


class TestNextWindowDepth:
    """Test depth growth between attempts."""

    def test_doubles(self):
        """Depth doubles when the error carries no hint."""
        assert next_window_depth(4, _narrow()) == 8
        assert next_window_depth(8, _narrow()) == 16

    def test_grows_from_zero(self):
        """A zero depth still grows."""
        assert next_window_depth(0, _narrow()) == 1

    def test_uses_needed_depth_when_larger(self):
        """A requested depth beyond the doubling is used directly."""
        assert next_window_depth(4, _narrow(needed=20)) == 20
        assert next_window_depth(4, _narrow(needed=5)) == 8


class TestWidenDecorator:
    """Test the widening decorator."""

    def test_successful_first_attempt(self):
        """A computation that fits runs once at the initial depth."""
        mock_func = MagicMock(return_value="done")

        @widen_on_narrow_window(max_doublings=3, initial_depth=4)
        def compute(*, depth):
            return mock_func(depth)

        assert compute() == "done"
        mock_func.assert_called_once_with(4)

    def test_widens_then_succeeds(self):
        """Each narrow-window failure reruns with a doubled depth."""
        mock_func = MagicMock(side_effect=[_narrow(), _narrow(), "done"])

        @widen_on_narrow_window(max_doublings=3, initial_depth=2)
        def compute(*, depth):
            return mock_func(depth)

        assert compute() == "done"
        assert [c.args[0] for c in mock_func.call_args_list] == [2, 4, 8]

    def test_caller_depth_is_starting_point(self):
        """An explicit depth keyword overrides the initial depth."""
        mock_func = MagicMock(return_value="done")

        @widen_on_narrow_window(initial_depth=2)
        def compute(*, depth):
            return mock_func(depth)

        compute(depth=7)
        mock_func.assert_called_once_with(7)

    def test_budget_exhausted(self):
        """The decorator gives up after max_doublings widenings."""
        mock_func = MagicMock(side_effect=_narrow())

        @widen_on_narrow_window(max_doublings=2, initial_depth=1)
        def compute(*, depth):
            return mock_func(depth)

        with pytest.raises(WindowBudgetExceeded) as exc_info:
            compute()

        assert "after 2 widenings" in str(exc_info.value)
        assert isinstance(exc_info.value.last_error, WindowTooNarrow)
        assert mock_func.call_count == 3

    def test_other_errors_propagate(self):
        """Errors other than a narrow window are raised immediately."""
        mock_func = MagicMock(side_effect=ValueError("bad input"))

        @widen_on_narrow_window(max_doublings=3)
        def compute(*, depth):
            return mock_func(depth)

        with pytest.raises(ValueError):
            compute()

        assert mock_func.call_count == 1

    def test_disabled_widening(self):
        """With widening disabled the first narrow window is final."""
        mock_func = MagicMock(side_effect=[_narrow(), "done"])

        @widen_on_narrow_window(initial_depth=3, enabled=False)
        def compute(*, depth):
            return mock_func(depth)

        with pytest.raises(WindowBudgetExceeded, match="after 0 widenings"):
            compute()
        mock_func.assert_called_once_with(3)

    def test_widening_a_real_series(self):
        """A residue outside the window succeeds once the window covers z^-1."""

        @widen_on_narrow_window(max_doublings=4, initial_depth=0)
        def residue(*, depth):
            series = ZSeries({-1: PPoly.p(1), 2: PPoly.p(2)}, lo=1 - depth)
            return series_residue(series)

        assert residue() == PPoly.p(1)


class TestWindowPolicy:
    """Test WindowPolicy class."""

    def test_default_policy(self):
        """Test default widening policy."""
        policy = WindowPolicy()
        assert policy.max_doublings == 6
        assert policy.initial_depth == 4
        assert policy.enabled is True

    def test_from_config(self):
        """The policy mirrors the config fields."""
        config = CSConfig(
            max_window_doublings=2, initial_window_depth=9, enable_window_widening=False
        )
        policy = WindowPolicy.from_config(config)
        assert policy.max_doublings == 2
        assert policy.initial_depth == 9
        assert policy.enabled is False

    def test_should_widen(self):
        """Only narrow windows with remaining budget are widened."""
        policy = WindowPolicy(max_doublings=2)

        assert policy.should_widen(_narrow(), attempt=0)
        assert policy.should_widen(_narrow(), attempt=1)
        assert not policy.should_widen(_narrow(), attempt=2)
        assert not policy.should_widen(ValueError("bad"), attempt=0)

    def test_disabled_policy_never_widens(self):
        """A disabled policy refuses every widening."""
        policy = WindowPolicy(enabled=False)
        assert not policy.should_widen(_narrow(), attempt=0)

    def test_next_depth(self):
        """The policy uses the shared depth rule."""
        assert WindowPolicy().next_depth(5, _narrow()) == 10

    def test_decorator_asks_the_policy(self):
        """Widening decisions and depths come from the policy methods."""

        class OneShot(WindowPolicy):
            def should_widen(self, error, attempt):
                return attempt < 1

            def next_depth(self, depth, error):
                return depth + 100

        mock_func = MagicMock(side_effect=_narrow())

        @OneShot(max_doublings=5, initial_depth=2).as_decorator()
        def compute(*, depth):
            return mock_func(depth)

        with pytest.raises(WindowBudgetExceeded, match="after 1 widenings"):
            compute()
        assert [c.args[0] for c in mock_func.call_args_list] == [2, 102]

    def test_with_policy_rebinds(self):
        """with_policy replaces the decorator's policy; None keeps it."""
        calls = []

        @widen_on_narrow_window(max_doublings=0, initial_depth=1)
        def compute(*, depth):
            calls.append(depth)
            if depth < 4:
                raise _narrow()
            return depth

        assert with_policy(compute, None) is compute
        with pytest.raises(WindowBudgetExceeded):
            compute()
        assert with_policy(compute, WindowPolicy(max_doublings=3))() == 4
        assert calls == [1, 4]

    def test_as_decorator(self):
        """Test converting policy to decorator."""
        policy = WindowPolicy(max_doublings=2, initial_depth=1)
        mock_func = MagicMock(side_effect=[_narrow(), "done"])

        @policy.as_decorator()
        def compute(*, depth):
            return mock_func(depth)

        assert compute() == "done"
        assert mock_func.call_count == 2

    def test_disabled_decorator_runs_once(self):
        """A disabled policy makes a single attempt."""
        policy = WindowPolicy(enabled=False)
        mock_func = MagicMock(side_effect=_narrow())

        @policy.as_decorator()
        def compute(*, depth):
            return mock_func(depth)

        with pytest.raises(WindowBudgetExceeded):
            compute()
        assert mock_func.call_count == 1

"""Window widening for truncated series computations."""

from functools import wraps
from typing import Any, Callable, Optional

from .config import CSConfig
from .errors import WindowBudgetExceeded, WindowTooNarrow
from .logging_config import get_logger

logger = get_logger(__name__)


def next_window_depth(depth: int, error: WindowTooNarrow) -> int:
    """Compute the depth for the next attempt.

    Args:
        depth: Depth used by the failed attempt
        error: The failure, possibly carrying the depth it needs

    Returns:
        Doubled depth, or the requested depth when that is larger
    """
    doubled = max(2 * depth, depth + 1)
    if error.needed is not None and error.needed > doubled:
        return error.needed
    return doubled


class WindowPolicy:
    """Configurable widening policy for truncated computations.

    A disabled policy still runs one attempt at the initial depth.
    """

    def __init__(
        self, max_doublings: int = 6, initial_depth: int = 4, enabled: bool = True
    ):
        self.max_doublings = max_doublings
        self.initial_depth = initial_depth
        self.enabled = enabled

    @classmethod
    def from_config(cls, config: CSConfig) -> "WindowPolicy":
        return cls(
            max_doublings=config.max_window_doublings,
            initial_depth=config.initial_window_depth,
            enabled=config.enable_window_widening,
        )

    def should_widen(self, error: Exception, attempt: int) -> bool:
        """Check if another attempt is allowed after an error.

        Args:
            error: The exception that occurred
            attempt: Number of widenings already performed

        Returns:
            True if the error is a narrow window and budget remains
        """
        if not self.enabled or attempt >= self.max_doublings:
            return False
        return isinstance(error, WindowTooNarrow)

    def next_depth(self, depth: int, error: WindowTooNarrow) -> int:
        return next_window_depth(depth, error)

    def run(self, func: Callable, *args: Any, **kwargs: Any) -> Any:
        """Call ``func(*args, depth=..., **kwargs)``, widening while allowed.

        A ``depth`` keyword from the caller is the starting point.

        Raises:
            WindowBudgetExceeded: When the window is still too narrow and
                the policy allows no further widening
        """
        depth = kwargs.pop("depth", None) or self.initial_depth
        attempt = 0
        while True:
            logger.debug(
                f"Running {func.__name__} at depth {depth} (widening {attempt})"
            )
            try:
                result = func(*args, depth=depth, **kwargs)
            except WindowTooNarrow as error:
                if not self.should_widen(error, attempt):
                    logger.error(
                        f"Window budget exhausted for {func.__name__}",
                        extra={
                            "extra_fields": {
                                "function": func.__name__,
                                "depth": depth,
                                "doublings": attempt,
                                "last_error": str(error),
                            }
                        },
                    )
                    raise WindowBudgetExceeded(
                        f"Window still too narrow after {attempt} widenings",
                        last_error=error,
                    ) from error
                new_depth = self.next_depth(depth, error)
                logger.warning(
                    f"Window too narrow in {func.__name__}: {error}. "
                    f"Widening depth {depth} -> {new_depth}",
                    extra={
                        "extra_fields": {
                            "function": func.__name__,
                            "attempt": attempt + 1,
                            "depth": depth,
                            "new_depth": new_depth,
                            "window": error.window,
                        }
                    },
                )
                depth = new_depth
                attempt += 1
                continue
            if attempt:
                logger.info(
                    f"{func.__name__} succeeded after widening to depth {depth}"
                )
            return result

    def as_decorator(self) -> Callable:
        """The policy as a decorator for functions taking a ``depth`` keyword."""

        def decorator(func: Callable) -> Callable:
            @wraps(func)
            def wrapper(*args: Any, **kwargs: Any) -> Any:
                return self.run(func, *args, **kwargs)

            return wrapper

        return decorator


def widen_on_narrow_window(
    max_doublings: int = 6, initial_depth: int = 4, enabled: bool = True
) -> Callable:
    """Decorator that reruns a truncated computation with a wider window.

    The wrapped function must accept a ``depth`` keyword.

    Args:
        max_doublings: Maximum number of widenings before giving up
        initial_depth: Depth of the first attempt
        enabled: Whether widening happens at all

    Returns:
        Decorated function
    """
    return WindowPolicy(max_doublings, initial_depth, enabled).as_decorator()


def with_policy(func: Callable, policy: Optional[WindowPolicy]) -> Callable:
    """Rebind a widening-decorated function to another policy."""
    if policy is None:
        return func
    return policy.as_decorator()(getattr(func, "__wrapped__", func))

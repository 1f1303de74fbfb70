"""Tests for logging functionality."""

import json
import logging
import time

import pytest

from cs_fermionic.config import CSConfig
from cs_fermionic.debug_utils import (
    DebugContext,
    DebugStats,
    debug_config,
    debug_mode,
    dump_debug_info,
    trace_kernel,
)
from cs_fermionic.logging_config import (
    LogContext,
    StructuredFormatter,
    case_id_var,
    get_logger,
    log_execution_time,
    setup_logging,
    with_case_id,
)
from cs_fermionic.suites import SuiteGrid, SuiteReport


@pytest.fixture(autouse=True)
def restore_root_logger():
    """setup_logging replaces the root handlers; put them back afterwards."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers = handlers
    root.setLevel(level)


def _record(msg="Test message"):
    return logging.LogRecord(
        name="test",
        level=logging.INFO,
        pathname="test.py",
        lineno=10,
        msg=msg,
        args=(),
        exc_info=None,
        func="check",
    )


class TestStructuredFormatter:
    """Test structured logging formatter."""

    def test_format_basic_message(self):
        """Test basic log message formatting."""
        data = json.loads(StructuredFormatter().format(_record()))

        assert data["level"] == "INFO"
        assert data["logger"] == "test"
        assert data["message"] == "Test message"
        assert data["source"] == "test.check:10"
        assert "thread" in data
        assert "case_id" not in data

    def test_format_with_case_id(self):
        """Records inside a suite case carry its identifier."""
        token = case_id_var.set("prop2:7")
        try:
            data = json.loads(StructuredFormatter().format(_record()))
            assert data["case_id"] == "prop2:7"
        finally:
            case_id_var.reset(token)

    def test_format_with_extra_fields(self):
        """Test formatting with extra fields."""
        record = _record()
        record.extra_fields = {"suite": "lemma1", "n": 3}

        data = json.loads(StructuredFormatter().format(record))

        assert data["suite"] == "lemma1"
        assert data["n"] == 3

    def test_format_non_json_values(self):
        """Values json cannot encode are stringified."""
        record = _record()
        record.extra_fields = {"window": (-2, None), "scalar": object()}

        data = json.loads(StructuredFormatter().format(record))

        assert data["window"] == [-2, None]
        assert isinstance(data["scalar"], str)


class TestLoggingSetup:
    """Test logging setup and configuration."""

    def test_setup_logging_json_format(self, tmp_path):
        """Test setting up JSON formatted logging."""
        log_file = tmp_path / "test.log"
        setup_logging("INFO", "json", str(log_file))

        get_logger("test").info("Test message")

        with open(log_file) as f:
            data = json.loads(f.readline())
            assert data["level"] == "INFO"
            assert data["message"] == "Test message"

    def test_setup_logging_simple_format(self, tmp_path):
        """Test setting up simple formatted logging."""
        log_file = tmp_path / "test.log"
        setup_logging("DEBUG", "simple", str(log_file))

        get_logger("test").debug("Debug message")

        content = log_file.read_text()
        assert "DEBUG" in content
        assert "Debug message" in content

    def test_simple_format_shows_case_id(self, tmp_path):
        """Plain-text lines carry the case id, or a dash outside cases."""
        log_file = tmp_path / "test.log"
        setup_logging("INFO", "simple", str(log_file))
        logger = get_logger("test")

        @with_case_id("lemma1:2")
        def run_case():
            logger.info("inside")

        run_case()
        logger.info("outside")

        inside, outside = log_file.read_text().splitlines()
        assert "[lemma1:2] inside" in inside
        assert "[-] outside" in outside

    def test_setup_logging_replaces_handlers(self, tmp_path):
        """Calling setup twice leaves a single handler."""
        setup_logging("INFO", "json", str(tmp_path / "a.log"))
        setup_logging("INFO", "json", str(tmp_path / "b.log"))

        assert len(logging.getLogger().handlers) == 1

    def test_get_logger(self):
        """Test getting a logger instance."""
        logger = get_logger("cs_fermionic.fock")
        assert logger.name == "cs_fermionic.fock"
        assert isinstance(logger, logging.Logger)


class TestLoggingDecorators:
    """Test logging decorator functions."""

    def test_with_case_id_decorator(self):
        """Test case ID decorator."""

        @with_case_id("lemma2:0")
        def run_case():
            return case_id_var.get()

        assert run_case() == "lemma2:0"
        assert case_id_var.get() is None

    def test_with_case_id_auto_generate(self):
        """Without an id each call gets a fresh ad hoc one."""

        @with_case_id()
        def run_case():
            return case_id_var.get()

        first, second = run_case(), run_case()
        assert first.startswith("adhoc-")
        assert len(first) == len("adhoc-") + 12
        assert first != second

    def test_with_case_id_resets_on_error(self):
        """The case ID is cleared even when the case raises."""

        @with_case_id("broken:1")
        def run_case():
            raise RuntimeError("boom")

        with pytest.raises(RuntimeError):
            run_case()
        assert case_id_var.get() is None

    def test_log_execution_time_decorator(self, caplog):
        """Test execution time logging decorator."""

        @log_execution_time()
        def kernel():
            time.sleep(0.01)
            return "result"

        with caplog.at_level(logging.DEBUG):
            result = kernel()

        assert result == "result"
        assert "kernel finished" in caplog.text
        assert caplog.records[-1].extra_fields["elapsed_ms"] >= 10

    def test_log_execution_time_with_error(self, caplog):
        """Test execution time logging with error."""

        @log_execution_time()
        def kernel():
            raise ValueError("Test error")

        with pytest.raises(ValueError):
            with caplog.at_level(logging.ERROR):
                kernel()

        assert "kernel raised ValueError: Test error" in caplog.text
        assert caplog.records[-1].exc_info is not None


class TestLogContext:
    """Test LogContext context manager."""

    def test_log_context_adds_fields(self, caplog):
        """Fields given to the context reach records logged inside it."""
        logger = get_logger("test.context")

        with caplog.at_level(logging.INFO):
            with LogContext(logger, suite="prop6", n=3):
                logger.info("Inside")

        record = caplog.records[-1]
        assert record.extra_fields == {"suite": "prop6", "n": 3}

    def test_log_context_record_fields_win(self, caplog):
        """Fields passed on the call override the context."""
        logger = get_logger("test.context")

        with caplog.at_level(logging.INFO):
            with LogContext(logger, suite="prop6", n=3):
                logger.info("Inside", extra={"extra_fields": {"n": 4}})

        assert caplog.records[-1].extra_fields == {"suite": "prop6", "n": 4}

    def test_log_context_removed_on_exit(self, caplog):
        """Records after the block carry no context fields."""
        logger = get_logger("test.restore")

        with LogContext(logger, suite="x") as context:
            assert context in logger.filters

        assert context not in logger.filters
        with caplog.at_level(logging.INFO):
            logger.info("Outside")
        assert not hasattr(caplog.records[-1], "extra_fields")


class TestDebugUtilities:
    """Test debug utilities."""

    def test_debug_context(self, caplog):
        """Test DebugContext manager."""
        with caplog.at_level(logging.DEBUG):
            with DebugContext("prop2:4") as ctx:
                ctx.checkpoint("build", {"grade": 2})
                ctx.checkpoint("compare", {"terms": 5})

        assert "Debug checkpoint: build" in caplog.text
        assert "Debug checkpoint: compare" in caplog.text
        assert "Debug context prop2:4 completed" in caplog.text
        names = [c["name"] for c in ctx.debug_info["checkpoints"]]
        assert names == ["build", "compare"]
        assert ctx.debug_info["label"] == "prop2:4"

    def test_debug_context_records_error(self):
        """An exception leaving the block is recorded."""
        ctx = DebugContext()
        with pytest.raises(KeyError):
            with ctx:
                raise KeyError("missing")

        assert ctx.debug_info["error"] == "KeyError: 'missing'"

    def test_debug_config(self, caplog):
        """The configuration is logged at debug level."""
        with caplog.at_level(logging.DEBUG):
            debug_config(CSConfig(seed=42))

        assert "Configuration" in caplog.text

    def test_trace_kernel_success(self, caplog):
        """Test kernel tracing for successful calls."""

        @trace_kernel
        def kernel(x: int) -> int:
            return 2 * x

        with caplog.at_level(logging.DEBUG):
            result = kernel(21)

        assert result == 42
        assert "Kernel started: kernel" in caplog.text
        assert "Kernel completed: kernel" in caplog.text
        assert caplog.records[-1].extra_fields["args"] == ["21"]
        assert caplog.records[-1].extra_fields["result"] == "42"

    def test_trace_kernel_error(self, caplog):
        """Test kernel tracing for failed calls."""

        @trace_kernel
        def kernel() -> None:
            raise ArithmeticError("no inverse")

        with pytest.raises(ArithmeticError):
            with caplog.at_level(logging.DEBUG):
                kernel()

        assert "Kernel failed: kernel" in caplog.text
        assert caplog.records[-1].extra_fields["error_type"] == "ArithmeticError"

    def test_debug_mode_context(self, caplog):
        """debug_mode lowers the package level and restores it."""
        package_logger = logging.getLogger("cs_fermionic")
        original_level = package_logger.level

        with caplog.at_level(logging.DEBUG):
            with debug_mode(True):
                assert package_logger.level == logging.DEBUG
                get_logger("cs_fermionic.test").debug("Debug message in debug mode")

        assert package_logger.level == original_level
        assert "Debug message in debug mode" in caplog.text

    def test_debug_mode_disabled(self):
        """debug_mode(False) leaves levels alone."""
        package_logger = logging.getLogger("cs_fermionic")
        original_level = package_logger.level

        with debug_mode(False):
            assert package_logger.level == original_level

    def test_dump_debug_info(self, tmp_path):
        """Test dumping debug info to file."""
        config = CSConfig(enable_debug_mode=True)
        report = SuiteReport(
            suite="lemma1",
            seed=3,
            grid=SuiteGrid().model_dump(),
            passed=0,
            failed=0,
            cases=[],
        )
        debug_file = tmp_path / "debug.json"

        written = dump_debug_info(report, config, filename=str(debug_file))

        assert written == str(debug_file)
        data = json.loads(debug_file.read_text())
        assert data["report"]["suite"] == "lemma1"
        assert data["report"]["seed"] == 3
        assert data["config"]["enable_debug_mode"] is True
        assert data["failing_cases"] == []

    def test_dump_debug_info_disabled(self, tmp_path):
        """Test debug dumping when disabled."""
        report = SuiteReport(
            suite="lemma1", seed=3, grid={}, passed=0, failed=0, cases=[]
        )
        debug_file = tmp_path / "debug.json"

        assert dump_debug_info(report, CSConfig(), filename=str(debug_file)) is None
        assert not debug_file.exists()


class TestDebugStats:
    """Test debug statistics collector."""

    def test_record_metrics(self):
        """Test recording metrics."""
        stats = DebugStats()

        stats.record("case_ms", 100)
        stats.record("case_ms", 150)
        stats.record("case_ms", 200)
        stats.record("terms", 50)

        assert stats.stats["case_ms"] == [100, 150, 200]
        assert len(stats.stats["terms"]) == 1

    def test_summary(self):
        """Summary reports count, min, max and average."""
        stats = DebugStats()
        for value in (100, 200, 300):
            stats.record("case_ms", value)

        summary = stats.summary()["case_ms"]

        assert summary == {"count": 3, "total": 600, "min": 100, "max": 300, "avg": 200}

    def test_log_summary(self, caplog):
        """The summary is logged at debug level."""
        stats = DebugStats()
        stats.record("case_ms", 1.5)

        with caplog.at_level(logging.DEBUG):
            stats.log_summary()

        assert "Debug statistics summary" in caplog.text

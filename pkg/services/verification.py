import asyncio
import math
import time
import uuid
from dataclasses import asdict, dataclass, field
from numbers import Integral, Real
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Protocol, Sequence

import numpy as np
import psutil
from loguru import logger

from utils.config import RunConfig

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class VerificationReport:
    """Outcome of one named check"""
    check_id: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    computed: Dict[str, Any] = field(default_factory=dict)
    expected: Optional[Dict[str, Any]] = None
    tolerance: float = 0.0
    status: str = SKIPPED
    runtime_ms: int = 0

    @property
    def ok(self) -> bool:
        return self.status in (PASS, SKIPPED)

    def as_dict(self) -> Dict[str, Any]:
        return jsonable(asdict(self))


class Outcome(NamedTuple):
    """What a check function hands back before judging"""
    inputs: Dict[str, Any]
    computed: Dict[str, Any]
    expected: Optional[Dict[str, Any]] = None
    tolerance: float = 0.0


@dataclass(frozen=True)
class Check:
    check_id: str
    run: Callable[[RunConfig], Outcome]


@dataclass(frozen=True)
class DerivedCheck:
    """A check computed from the reports of earlier checks in the same run"""
    check_id: str
    run: Callable[[Dict[str, VerificationReport], RunConfig], Outcome]


def jsonable(value: Any) -> Any:
    """Plain JSON types for numpy scalars, tuples, complex numbers and nested containers"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, Integral):
        return int(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Real):
        return float(value)
    return value


def _matches(computed: Any, expected: Any, tolerance: float) -> bool:
    if isinstance(expected, bool) or isinstance(computed, bool):
        return computed == expected
    if isinstance(expected, Integral) and isinstance(computed, Integral):
        return computed == expected
    if isinstance(expected, Real) and isinstance(computed, Real):
        return math.isfinite(computed) and abs(computed - expected) <= tolerance
    return jsonable(computed) == jsonable(expected)


def judge(computed: Dict[str, Any], expected: Optional[Dict[str, Any]], tolerance: float) -> str:
    """pass iff every expected entry is met: exact for integers, within tolerance for reals"""
    if expected is None:
        return PASS
    for key, want in expected.items():
        if key == "provenance":
            continue
        if key not in computed or not _matches(computed[key], want, tolerance):
            return FAIL
    return PASS


class ReportObserver(Protocol):
    """Protocol for verification run observers"""
    async def on_run_started(self, run_id: str, command: str, config: RunConfig) -> None:
        """Called before the first check of a run"""
        pass

    async def on_report(self, run_id: str, report: VerificationReport) -> None:
        """Called once per finished report, in check order"""
        pass

    async def on_run_finished(self, run_id: str, status: str, peak_rss_mb: float) -> None:
        """Called after the last report of a run"""
        pass


class LoggingObserver:
    """Writes one log line per report"""

    async def on_run_started(self, run_id: str, command: str, config: RunConfig) -> None:
        logger.info(f"Run {run_id[:8]}: {command} with radius={config.radius}, tol={config.quadrature_tol}, threads={config.threads}")

    async def on_report(self, run_id: str, report: VerificationReport) -> None:
        if report.status == FAIL:
            logger.warning(f"{report.check_id}: FAIL ({report.runtime_ms} ms) {report.computed}")
        else:
            logger.info(f"{report.check_id}: {report.status} ({report.runtime_ms} ms)")

    async def on_run_finished(self, run_id: str, status: str, peak_rss_mb: float) -> None:
        logger.info(f"Run {run_id[:8]} finished: {status}, peak RSS {peak_rss_mb:.1f} MB")


class ArchiveObserver:
    """Persists runs and reports to the SQLite archive"""

    async def on_run_started(self, run_id: str, command: str, config: RunConfig) -> None:
        from database.repository import Repository
        await Repository.start_run(run_id, command, config.as_dict())

    async def on_report(self, run_id: str, report: VerificationReport) -> None:
        from database.repository import Repository
        await Repository.save_report(run_id, report.as_dict())

    async def on_run_finished(self, run_id: str, status: str, peak_rss_mb: float) -> None:
        from database.repository import Repository
        await Repository.finish_run(run_id, status, peak_rss_mb)


class VerificationService:
    """Runs checks concurrently and reports them in their fixed order"""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(VerificationService, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._initialized = True
        self._observers: List[ReportObserver] = []
        self._process = psutil.Process()
        self._peak_rss = 0

    @classmethod
    def reset(cls) -> None:
        cls._instance = None

    def add_observer(self, observer: ReportObserver) -> None:
        """Add observer for reports"""
        if observer not in self._observers:
            self._observers.append(observer)

    def remove_observer(self, observer: ReportObserver) -> None:
        """Remove observer"""
        if observer in self._observers:
            self._observers.remove(observer)

    async def _notify_observers(self, event: str, *args) -> None:
        """Notify all observers; a failing observer never fails the run"""
        for observer in self._observers:
            try:
                await getattr(observer, event)(*args)
            except Exception as e:
                logger.error(f"Error notifying observer {type(observer).__name__} about {event}: {e}")

    def _sample_rss(self) -> None:
        try:
            self._peak_rss = max(self._peak_rss, self._process.memory_info().rss)
        except psutil.Error as e:
            logger.debug(f"RSS sample failed: {e}")

    def _finish(self, check_id: str, started: float, build: Callable[[], Outcome]) -> VerificationReport:
        try:
            outcome = build()
            status = judge(outcome.computed, outcome.expected, outcome.tolerance)
            report = VerificationReport(
                check_id, outcome.inputs, outcome.computed, outcome.expected, outcome.tolerance, status
            )
        except Exception as e:
            logger.exception(f"Check {check_id} raised: {e}")
            report = VerificationReport(check_id, computed={"error": f"{type(e).__name__}: {e}"}, status=FAIL)
        report.runtime_ms = int(round((time.perf_counter() - started) * 1000))
        self._sample_rss()
        return report

    def execute(self, check: Check, config: RunConfig) -> VerificationReport:
        """Run one check; exceptions become fail reports"""
        return self._finish(check.check_id, time.perf_counter(), lambda: check.run(config))

    async def run(
        self,
        command: str,
        checks: Sequence[Check],
        config: RunConfig,
        derived: Sequence[DerivedCheck] = (),
    ) -> List[VerificationReport]:
        run_id = uuid.uuid4().hex
        self._peak_rss = 0
        self._sample_rss()
        await self._notify_observers("on_run_started", run_id, command, config)

        reports = list(await asyncio.gather(*(asyncio.to_thread(self.execute, check, config) for check in checks)))
        by_id = {r.check_id: r for r in reports}
        for check in derived:
            report = self._finish(check.check_id, time.perf_counter(), lambda: check.run(by_id, config))
            by_id[check.check_id] = report
            reports.append(report)

        for report in reports:
            await self._notify_observers("on_report", run_id, report)

        status = PASS if all(r.ok for r in reports) else FAIL
        await self._notify_observers("on_run_finished", run_id, status, self._peak_rss / 2 ** 20)
        return reports

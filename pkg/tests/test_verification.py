import asyncio
import time

import numpy as np
import pytest
from loguru import logger

from services.checks import (
    LATTICE_PAIR_TOL,
    check_exact_constant,
    check_lattice_pair,
    check_newform_prefix,
    check_traces,
    cmd_verify_lseries,
    cmd_verify_theorem1,
)
from services.verification import (
    FAIL,
    PASS,
    SKIPPED,
    Check,
    DerivedCheck,
    Outcome,
    VerificationReport,
    VerificationService,
    jsonable,
    judge,
)
from utils.config import RunConfig


class RecordingObserver:
    def __init__(self):
        self.events = []

    async def on_run_started(self, run_id, command, config):
        self.events.append(("started", command))

    async def on_report(self, run_id, report):
        self.events.append(("report", report.check_id, report.status))

    async def on_run_finished(self, run_id, status, peak_rss_mb):
        self.events.append(("finished", status))


class BrokenObserver:
    async def on_run_started(self, run_id, command, config):
        raise RuntimeError("observer down")

    async def on_report(self, run_id, report):
        raise RuntimeError("observer down")

    async def on_run_finished(self, run_id, status, peak_rss_mb):
        raise RuntimeError("observer down")


def slow(delay, value):
    def run(config):
        time.sleep(delay)
        return Outcome({"delay": delay}, {"value": value}, {"value": 1.0}, 0.1)
    return run


def explode(config):
    raise ValueError("no convergence")


@pytest.fixture
def errors():
    messages = []
    handler = logger.add(messages.append, level="ERROR")
    yield messages
    logger.remove(handler)


# -- judging


@pytest.mark.parametrize(
    "computed, expected, tolerance, status",
    [
        ({"x": 1.05}, {"x": 1.0}, 0.1, PASS),
        ({"x": 1.2}, {"x": 1.0}, 0.1, FAIL),
        ({"x": float("nan")}, {"x": 1.0}, 1.0, FAIL),
        ({"n": 3}, {"n": 3}, 0.0, PASS),
        ({"n": 4}, {"n": 3}, 10.0, FAIL),
        ({"ok": True}, {"ok": True, "provenance": "recorded"}, 0.0, PASS),
        ({"ok": 1}, {"ok": True}, 0.0, PASS),
        ({"table": {"5": 0, "7": np.int64(0)}}, {"table": {"5": 0, "7": 0}}, 0.0, PASS),
        ({}, {"x": 1.0}, 1.0, FAIL),
        ({"x": 5.0}, None, 0.0, PASS),
    ],
)
def test_judge(computed, expected, tolerance, status):
    assert judge(computed, expected, tolerance) == status


def test_jsonable():
    value = {1: (np.int64(2), np.float64(0.5)), "z": 1 + 2j, "a": np.array([1, 2]), "b": np.bool_(True)}
    assert jsonable(value) == {"1": [2, 0.5], "z": [1.0, 2.0], "a": [1, 2], "b": True}
    assert type(jsonable(np.int64(2))) is int


def test_report_ok():
    assert VerificationReport("x").status == SKIPPED
    assert VerificationReport("x").ok
    assert not VerificationReport("x", status=FAIL).ok
    assert VerificationReport("x", computed={"v": np.float64(1.5)}).as_dict()["computed"] == {"v": 1.5}


# -- the service


def test_service_is_a_singleton():
    assert VerificationService() is VerificationService()


def test_observers_are_not_duplicated():
    service = VerificationService()
    observer = RecordingObserver()
    service.add_observer(observer)
    service.add_observer(observer)
    asyncio.run(service.run("demo", [Check("a", slow(0, 1.0))], RunConfig()))
    assert [e[0] for e in observer.events] == ["started", "report", "finished"]
    service.remove_observer(observer)
    service.remove_observer(observer)


def test_reports_keep_check_order():
    service = VerificationService()
    observer = RecordingObserver()
    service.add_observer(observer)
    checks = [Check("slow", slow(0.2, 1.0)), Check("fast", slow(0.0, 1.05)), Check("off", slow(0.0, 2.0))]
    reports = asyncio.run(service.run("demo", checks, RunConfig()))
    assert [r.check_id for r in reports] == ["slow", "fast", "off"]
    assert [r.status for r in reports] == [PASS, PASS, FAIL]
    assert reports[0].runtime_ms >= 150
    assert observer.events[-1] == ("finished", FAIL)


def test_exception_becomes_fail_report():
    reports = asyncio.run(VerificationService().run("demo", [Check("boom", explode)], RunConfig()))
    assert reports[0].status == FAIL
    assert reports[0].computed == {"error": "ValueError: no convergence"}


def test_derived_check_sees_earlier_reports():
    def total(reports, config):
        return Outcome({}, {"sum": reports["a"].computed["value"] + reports["b"].computed["value"]}, {"sum": 2.0}, 1e-12)

    checks = [Check("a", slow(0, 1.0)), Check("b", slow(0, 1.0))]
    reports = asyncio.run(VerificationService().run("demo", checks, RunConfig(), [DerivedCheck("a+b", total)]))
    assert reports[-1].check_id == "a+b"
    assert reports[-1].status == PASS


def test_failing_observer_does_not_fail_the_run(errors):
    service = VerificationService()
    service.add_observer(BrokenObserver())
    reports = asyncio.run(service.run("demo", [Check("a", slow(0, 1.0))], RunConfig()))
    assert reports[0].status == PASS
    assert len(errors) == 3
    assert all("BrokenObserver" in m for m in errors)


# -- checks


def route_reports(lattice, eisenstein):
    return {
        "theorem1.lattice": VerificationReport("theorem1.lattice", computed={"value": lattice}, status=PASS),
        "theorem1.eisenstein": VerificationReport("theorem1.eisenstein", computed={"value": eisenstein}, status=PASS),
    }


@pytest.mark.parametrize("gap, status", [(1e-7, PASS), (1e-5, FAIL)])
def test_lattice_pair_is_tighter_than_agreement(gap, status):
    # quadrature_tol 1e-6 leaves the four-way agreement at 1e-4; the lattice pair stays at 1e-6
    outcome = check_lattice_pair(route_reports(2.0, 2.0 + gap), RunConfig(quadrature_tol=1e-6))
    assert outcome.tolerance == LATTICE_PAIR_TOL
    assert outcome.computed["difference"] == pytest.approx(gap)
    assert judge(outcome.computed, outcome.expected, outcome.tolerance) == status


def test_lattice_pair_with_a_failed_route():
    reports = route_reports(2.0, 2.0)
    reports["theorem1.eisenstein"] = VerificationReport("theorem1.eisenstein", computed={"error": "boom"}, status=FAIL)
    outcome = check_lattice_pair(reports, RunConfig())
    assert outcome.computed["missing"] == ["theorem1.eisenstein"]
    assert judge(outcome.computed, outcome.expected, outcome.tolerance) == FAIL


def test_cheap_checks_pass():
    config = RunConfig(p_max=30)
    for check in (check_exact_constant, check_newform_prefix, check_traces):
        outcome = check(config)
        assert judge(outcome.computed, outcome.expected, outcome.tolerance) == PASS


def test_lseries_run():
    config = RunConfig(radius=128, n_max=2000, p_max=30, r2_p_max=5)
    reports = asyncio.run(cmd_verify_lseries(config))
    assert [r.check_id for r in reports] == [
        "lseries.central_value",
        "lseries.euler_product",
        "lseries.d3",
        "lseries.newform_prefix",
        "lseries.traces",
        "lseries.point_counts",
        "lseries.dichotomy",
    ]
    assert all(r.status == PASS for r in reports), [r.as_dict() for r in reports if r.status != PASS]


@pytest.mark.slow
def test_theorem1_run():
    reports = asyncio.run(cmd_verify_theorem1(RunConfig(radius=256, quadrature_tol=1e-5)))
    by_id = {r.check_id: r for r in reports}
    assert list(by_id) == [
        "theorem1.family",
        "theorem1.k2_relation",
        "theorem1.lattice",
        "theorem1.eisenstein",
        "theorem1.exact_constant",
        "theorem1.agreement",
        "theorem1.lattice_pair",
    ]
    assert all(r.status == PASS for cid, r in by_id.items() if cid not in ("theorem1.agreement", "theorem1.lattice_pair"))
    assert by_id["theorem1.lattice"].computed["det_T"] == 72
    assert by_id["theorem1.agreement"].computed["missing"] == []


@pytest.mark.slow
def test_theorem1_report_does_not_depend_on_threads():
    runs = []
    for threads in (1, 4, 8):
        reports = asyncio.run(cmd_verify_theorem1(RunConfig(radius=128, quadrature_tol=1e-5, threads=threads)))
        runs.append([(r.check_id, r.status, r.computed) for r in reports])
    assert runs[0] == runs[1] == runs[2]

import argparse
from abc import ABC, abstractmethod
from typing import List

from database.repository import Repository
from services.verification import ArchiveObserver, Check, LoggingObserver, VerificationReport, VerificationService
from utils.config import OUTPUT_FORMATS, Config, RunConfig
from utils.report_factory import ReportFactory


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags every subcommand accepts; None means keep the configured value"""
    group = parser.add_argument_group("run configuration")
    group.add_argument("--radius", type=int, help="lattice box radius R")
    group.add_argument("--tol", type=float, dest="quadrature_tol", help="quadrature tolerance")
    group.add_argument("--n-max", type=int, dest="n_max", help="terms of the newform L-series")
    group.add_argument("--p-max", type=int, dest="p_max", help="largest prime for traces and counts")
    group.add_argument("--threads", type=int, help="worker threads for the numeric kernels")
    group.add_argument("--output", choices=OUTPUT_FORMATS, help="report format")
    group.add_argument("--archive", dest="archive_path", help="SQLite file that archives runs")
    group.add_argument("--log-level", dest="log_level", help="loguru level for stderr")
    group.add_argument("--log-file", dest="log_file", help="also log to this rotating file")


def overrides_from(args: argparse.Namespace) -> dict:
    names = ("radius", "quadrature_tol", "n_max", "p_max", "threads", "output", "archive_path", "log_level", "log_file")
    return {name: getattr(args, name, None) for name in names}


class Command(ABC):
    """Base command class implementing Command Pattern"""
    name: str = ""
    help: str = ""
    details: bool = True

    def __init__(self):
        self.config = Config()
        self.service = VerificationService()

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        """Subcommand-specific flags"""

    @property
    def run_config(self) -> RunConfig:
        return self.config.run

    async def execute(self, args: argparse.Namespace) -> int:
        """Run the command, print its reports and return the exit code"""
        run = self.run_config
        logging_observer = LoggingObserver()
        archive = ArchiveObserver() if run.archive_path else None
        self.service.add_observer(logging_observer)
        if archive is not None:
            await Repository.init_db()
            self.service.add_observer(archive)
        try:
            reports = await self._handle(args, run)
        finally:
            self.service.remove_observer(logging_observer)
            if archive is not None:
                self.service.remove_observer(archive)
                await Repository.close_db()
        print(self.render(reports, args, run))
        return 0 if all(r.ok for r in reports) else 1

    async def run_checks(self, checks: List[Check], run: RunConfig) -> List[VerificationReport]:
        return await self.service.run(self.name, checks, run)

    def render(self, reports: List[VerificationReport], args: argparse.Namespace, run: RunConfig) -> str:
        return ReportFactory.render(reports, run.output, self.details)

    @abstractmethod
    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        """Implementation of command handling"""
        pass

import argparse
import math
import re
from typing import Dict, List, Optional

from loguru import logger

from algebra.matrix import block_determinants, det_exact, gram_report, picard_index_check, symmetrize
from algebra.polynomial import ExactPolynomial
from algebra.symbols import primes_up_to
from counting.fields import FiniteField
from counting.points import CSV_COLUMNS, count_report, expected_trace, report_rows
from database.repository import Repository
from fibration.curve import FunctionFieldCurve, invariant_ratio, rescale_at_infinity
from fibration.fibers import ShiodaInput, classify_fibers, component_counts, local_fiber, shioda_rank
from fibration.group_law import point_order, recover_y, verify_section
from lattice.characters import dirichlet_L, kronecker_character
from lattice.eisenstein import specialized_m10
from lattice.sums import central_value, d3, zagier_A, zagier_A_product, zagier_B_identity
from mahler.family import mahler_family, verify_homogeneous_equivalence
from mahler.laurent import format_laurent, parse_laurent
from mahler.quadrature import QuadratureResult, mahler_measure
from modular.newform import hecke_prime_power_check, multiplicativity_defects, newform_coeffs, trace_table
from services.checks import cmd_verify_lseries, cmd_verify_theorem1, provenance
from services.verification import Check, Outcome, VerificationReport
from utils.config import RunConfig
from utils.fixtures import CURVE_FILES, load_curve, load_matrix, recorded_value, sections_for
from utils.report_factory import ReportFactory
from .base_command import Command

# weights of the models whose coefficients satisfy deg a_i <= 2i; the Neron models are only classified locally
MODEL_WEIGHTS = {"es": 2, "e-sigma": 2}
# places of the fiber table as ascending coefficients in s
FIBER_PLACES = {"s": [0, 1], "10s-1": [-1, 10], "s^2-10s+1": [1, -10, 1], "s-1": [-1, 1], "9s-1": [-1, 9]}
# model -> (reference model, weight of the rescaling at infinity or None, exact invariant ratios)
MODEL_RELATIONS = {
    "neron-s": ("es", None, {"delta": 1}),
    "e-sigma": ("es", 2, {"delta": 1}),
    "neron-sigma": ("e-sigma", None, {"delta": 3 ** 12, "c4": 3 ** 4}),
}
ORDER_BOUND = 6
NEWFORM_TERMS = 20


class VerifyTheorem1Command(Command):
    name = "verify-theorem1"
    help = "m(P_10) by quadrature, the relation with m(P_2), the lattice sum and the Eisenstein series"
    details = False

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        return await cmd_verify_theorem1(run)


class VerifyLseriesCommand(Command):
    name = "verify-lseries"
    help = "L(Y_10, 3) as a lattice sum and as L(f, 3); Frobenius traces from point counts"
    details = False

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        return await cmd_verify_lseries(run)


def quadrature_outcome(inputs: dict, r: QuadratureResult) -> Outcome:
    """Deterministic routes must converge; a statistical estimate passes with its error bar"""
    if r.statistical:
        if not r.converged:
            logger.warning(f"statistical error {r.error_estimate:.3g} is above the requested tolerance")
        return Outcome(inputs, r.as_dict(), {"statistical": True})
    return Outcome(inputs, r.as_dict(), {"converged": True})


class MahlerCommand(Command):
    name = "mahler"
    help = (
        "Mahler measure of a Laurent polynomial; fails when a deterministic quadrature misses the tolerance. "
        "Quasi-Monte-Carlo estimates always pass and report their error bar and converged flag"
    )

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("expression", help="e.g. 'x + 1/x + y + 1/y + z + 1/z - 10'")
        parser.add_argument("--variables", help="comma-separated variable order")

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        variables = [v.strip() for v in args.variables.split(",")] if args.variables else None

        def measure(config: RunConfig) -> Outcome:
            p = parse_laurent(args.expression, variables)
            r = mahler_measure(p, config.quadrature_tol, threads=config.threads)
            inputs = {"polynomial": format_laurent(p), "variables": list(p.variables), "tol": config.quadrature_tol}
            return quadrature_outcome(inputs, r)

        return await self.run_checks([Check("mahler", measure)], run)


class MahlerFamilyCommand(Command):
    name = "mahler-family"
    help = "m(P_k) for P_k = x + 1/x + y + 1/y + z + 1/z - k; fails unless the adaptive quadrature meets quadrature_tol"

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--k", type=float, required=True)
        parser.add_argument("--homogeneous", action="store_true", help="also compare with the homogeneous quartic form")

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        def family(config: RunConfig) -> Outcome:
            r = mahler_family(args.k, config.quadrature_tol)
            return quadrature_outcome({"k": args.k, "tol": config.quadrature_tol}, r)

        def homogeneous(config: RunConfig) -> Outcome:
            diff = verify_homogeneous_equivalence(args.k, config.quadrature_tol, config.threads)
            return Outcome(
                {"k": args.k}, {"difference": diff}, {"difference": 0.0}, max(1e-3, 100 * config.quadrature_tol)
            )

        checks = [Check("mahler-family", family)]
        if args.homogeneous:
            checks.append(Check("mahler-family.homogeneous", homogeneous))
        return await self.run_checks(checks, run)


class LValueCommand(Command):
    name = "lvalue"
    help = "lattice sums and L-values with their tail bounds"

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--which", choices=("S", "d3", "A", "B", "chi", "m10"), required=True)
        parser.add_argument("--s", type=float, default=3.0, help="exponent for A, B and chi")
        parser.add_argument("--d", type=int, default=-3, help="discriminant of the Kronecker character for chi")

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        which, s = args.which, args.s

        def value(config: RunConfig) -> Outcome:
            inputs = {"which": which, "radius": config.radius}
            if which == "S":
                r = central_value(config.radius, config.threads)
                return Outcome(inputs, {"value": r.corrected, "raw": r.value, "tail_estimate": r.tail_estimate, "tail_bound": r.tail_bound})
            if which == "m10":
                r = specialized_m10(config.radius, config.threads)
                return Outcome(inputs, {"value": r.corrected, "raw": r.value, "tail_estimate": r.tail_estimate, "tail_bound": r.tail_bound})
            if which == "d3":
                return Outcome(inputs, {"value": d3(min(config.radius, 1024), config.threads)}, {"value": recorded_value("d3"), "provenance": provenance("d3")}, 1e-9)
            inputs["s"] = s
            if which == "A":
                r = zagier_A(s, config.radius, config.threads)
                return Outcome(
                    inputs,
                    {"lattice": r.corrected, "product": zagier_A_product(s), "tail_bound": r.tail_bound},
                    {"lattice": zagier_A_product(s), "provenance": "derived: 2 L(chi_-3, s) L(chi_24, s)"},
                    r.tail_bound,
                )
            if which == "B":
                r = zagier_B_identity(s, config.radius, config.threads)
                return Outcome(inputs, r._asdict(), {"lhs": r.rhs, "provenance": "derived: factor times the base sum"}, r.tail_bound)
            chi = kronecker_character(args.d)
            r = dirichlet_L(chi, s)
            inputs["d"] = args.d
            return Outcome(inputs, {"value": r.value, "tail": r.tail, "tail_bound": r.tail_bound, "error_estimate": r.error_estimate})

        return await self.run_checks([Check(f"lvalue.{which}", value)], run)


class NewformCommand(Command):
    name = "newform"
    help = "q-expansion coefficients of the level-8 newform; --n-max sets how many"

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        n = args.n_max or NEWFORM_TERMS

        def coefficients(config: RunConfig) -> Outcome:
            coeffs = newform_coeffs(n)
            hecke = {str(p): bad for p in primes_up_to(math.isqrt(n)) if (bad := hecke_prime_power_check(p, coeffs))}
            computed = {"coefficients": coeffs, "hecke_failures": hecke, "multiplicativity_defects": multiplicativity_defects(coeffs, n)}
            expected: Dict = {"hecke_failures": {}, "multiplicativity_defects": []}
            prefix = recorded_value("newform_prefix")
            if n >= len(prefix):
                computed["prefix"] = coeffs[: len(prefix)]
                expected.update(prefix=prefix, provenance=provenance("newform_prefix"))
            return Outcome({"n_max": n}, computed, expected)

        return await self.run_checks([Check("newform", coefficients)], run)


class CountCommand(Command):
    name = "count"
    help = "points of Y_10 over F_q and the trace A_q they determine"

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--p", type=int, required=True)
        parser.add_argument("--r", type=int, default=1, choices=(1, 2))

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        self.rows: List[dict] = []

        def count(config: RunConfig) -> Outcome:
            report = count_report(FiniteField(args.p, args.r), config.threads)
            row = report_rows([report], {(args.p, args.r): expected_trace(args.p, args.r)})[0]
            self.rows.append(row)
            return Outcome({"p": args.p, "r": args.r}, row, {"match": True, "cong_N": True, "cong_A": True})

        return await self.run_checks([Check("count", count)], run)

    def render(self, reports: List[VerificationReport], args: argparse.Namespace, run: RunConfig) -> str:
        if run.output == "csv" and self.rows:
            return ReportFactory.create_csv(self.rows, CSV_COLUMNS)
        return super().render(reports, args, run)


class TracesCommand(Command):
    name = "traces"
    help = "a_p from the eta product against A_p from the CM dichotomy"

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        self.rows: List[dict] = []

        def traces(config: RunConfig) -> Outcome:
            table = trace_table(config.p_max)
            self.rows.extend({"p": p, "a_p": a, "A_p": A} for p, (a, A) in table.items())
            return Outcome(
                {"p_max": config.p_max},
                {"traces": {str(p): [a, A] for p, (a, A) in table.items()}, "mismatches": [p for p, (a, A) in table.items() if a != A]},
                {"mismatches": []},
            )

        return await self.run_checks([Check("traces", traces)], run)

    def render(self, reports: List[VerificationReport], args: argparse.Namespace, run: RunConfig) -> str:
        if run.output == "csv" and self.rows:
            return ReportFactory.create_csv(self.rows, ("p", "a_p", "A_p"))
        return super().render(reports, args, run)


def _expected_order(name: str) -> Optional[int]:
    """k s6 has order 6 / gcd(k, 6); the Mordell-Weil generator has none"""
    if name == "zero":
        return 1
    m = re.fullmatch(r"(\d*)s6", name)
    if m is None:
        return None
    k = int(m.group(1) or 1)
    return 6 // math.gcd(k, 6)


def fiber_table_places() -> Dict[str, str]:
    """Fiber-table keys as the labels classify_fibers prints"""
    return {key: str(ExactPolynomial(tuple(coeffs), "s").monic()) for key, coeffs in FIBER_PLACES.items()}


class FibrationCommand(Command):
    name = "fibration"
    help = "singular fibers, torsion and sections of the elliptic fibration"

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--model", choices=sorted(CURVE_FILES), default="es")
        parser.add_argument("--classify", action="store_true")
        parser.add_argument("--torsion", action="store_true")
        parser.add_argument("--sections", action="store_true")

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        model = args.model
        checks = []
        if args.classify or not (args.torsion or args.sections):
            checks.append(Check(f"fibration.{model}.fibers", lambda config: self._fibers(model)))
        if args.torsion:
            checks.append(Check(f"fibration.{model}.torsion", lambda config: self._torsion(model)))
        if args.sections:
            checks.append(Check(f"fibration.{model}.sections", lambda config: self._sections(model)))
        if model in MODEL_RELATIONS and (args.classify or not (args.torsion or args.sections)):
            checks.append(Check(f"fibration.{model}.consistency", lambda config: self._consistency(model)))
        return await self.run_checks(checks, run)

    @staticmethod
    def _fibers(model: str) -> Outcome:
        curve = load_curve(model)
        weight = MODEL_WEIGHTS.get(model)
        if weight is None:
            report = local_fiber(curve, ExactPolynomial.gen(curve.var, curve.field))
            return Outcome({"model": model, "place": curve.var}, {"fibers": [report.as_dict()]})
        reports = classify_fibers(curve, weight)
        computed = {"fibers": [r.as_dict() for r in reports], "kodaira": {r.label: r.kodaira for r in reports}}
        if model != "es":
            return Outcome({"model": model, "weight": weight}, computed)
        computed["mordell_weil_rank"] = shioda_rank(ShiodaInput(recorded_value("picard_number"), component_counts(reports)))
        labels = fiber_table_places()
        table = recorded_value("fiber_table")
        expected = {labels.get(key, key): kodaira for key, kodaira in table.items()}
        return Outcome(
            {"model": model, "weight": weight},
            computed,
            {"kodaira": expected, "mordell_weil_rank": recorded_value("mordell_weil_rank"), "provenance": provenance("fiber_table")},
        )

    @staticmethod
    def _torsion(model: str) -> Outcome:
        curve = load_curve(model)
        points = sections_for(model)
        orders = {name: point_order(curve, P, ORDER_BOUND) for name, P in points.items()}
        return Outcome(
            {"model": model, "bound": ORDER_BOUND},
            {"orders": orders},
            {"orders": {name: _expected_order(name) for name in points}},
        )

    @staticmethod
    def _sections(model: str) -> Outcome:
        curve: FunctionFieldCurve = load_curve(model)
        points = sections_for(model)
        on_curve: Dict[str, bool] = {}
        residuals: Dict[str, str] = {}
        recovered: Dict[str, bool] = {}
        for name, P in points.items():
            residual = verify_section(curve, P)
            on_curve[name] = residual.is_zero()
            if not on_curve[name]:
                # keep the stored coordinates; only ask whether some Y fits X and Z
                logger.warning(f"Section {name} misses {model}; residual {residual}")
                residuals[name] = str(residual)
                recovered[name] = recover_y(curve, P.X, P.Z).exists
        computed = {
            "on_curve": on_curve,
            "exists": {name: on_curve[name] or recovered.get(name, False) for name in points},
        }
        if residuals:
            computed["residuals"] = residuals
            computed["recovered"] = recovered
        return Outcome({"model": model}, computed, {"exists": {name: True for name in points}})

    @staticmethod
    def _consistency(model: str) -> Outcome:
        base_model, weight, ratios = MODEL_RELATIONS[model]
        base = load_curve(base_model)
        if weight:
            base = rescale_at_infinity(base, weight)
        curve = load_curve(model)
        computed = {}
        for name in ratios:
            ratio = invariant_ratio(curve, base, name)
            computed[name] = None if ratio is None else str(ratio)
        return Outcome(
            {"model": model, "against": base_model, "rescaled_weight": weight},
            {"ratios": computed},
            {"ratios": {name: str(value) for name, value in ratios.items()}},
        )


class GramCommand(Command):
    name = "gram"
    help = "exact determinants of the Neron-Severi and transcendental Gram matrices"

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--fixture", choices=("ns20", "t2"), required=True)
        parser.add_argument("--det", action="store_true", help="report the determinant")
        parser.add_argument("--symmetrize", choices=("none", "upper", "lower"), default=None,
                            help="copy one triangle onto the other; defaults to upper for asymmetric input")

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        def gram(config: RunConfig) -> Outcome:
            m = load_matrix(args.fixture)
            mode = args.symmetrize or ("none" if m.is_symmetric() else "upper")
            if mode == "none" and not m.is_symmetric():
                logger.warning(f"{args.fixture} is not symmetric; its determinant is not a Gram determinant")
            used = m if mode == "none" else symmetrize(m, mode)
            computed = {"size": used.rows, "symmetrization": mode, "det": det_exact(used)}
            if not m.is_symmetric():
                computed["gram_report"] = gram_report(m)
            if args.fixture == "ns20":
                computed["block_determinants"] = [d for _, d in block_determinants(used)]
                key = "ns20_det"
                if computed["det"] == recorded_value(key):
                    computed["picard_det"] = int(picard_index_check(computed["det"], recorded_value("picard_index")))
            else:
                key = "transcendental_det"
            expected = {"det": recorded_value(key), "provenance": provenance(key)} if args.det else None
            return Outcome({"fixture": args.fixture, "symmetrize": mode}, computed, expected)

        return await self.run_checks([Check(f"gram.{args.fixture}", gram)], run)


class HistoryCommand(Command):
    name = "history"
    help = "recent runs from the archive"

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--limit", type=int, default=20)
        parser.add_argument("--run", dest="run_id", help="show the reports of one run")

    async def execute(self, args: argparse.Namespace) -> int:
        await Repository.init_db()
        try:
            if args.run_id:
                rows = await Repository.get_run_reports(args.run_id)
                reports = [VerificationReport(**row) for row in rows]
                print(ReportFactory.render(reports, self.run_config.output, details=True))
                return 0 if all(r.ok for r in reports) else 1
            runs = await Repository.get_recent_runs(args.limit)
        finally:
            await Repository.close_db()
        if self.run_config.output == "json":
            print(ReportFactory.create_json_rows(runs))
        elif self.run_config.output == "csv":
            print(ReportFactory.create_csv(runs))
        else:
            print("\n".join(ReportFactory.create_mapping_text(run) + "\n" for run in runs) or "no archived runs")
        return 0

    async def _handle(self, args: argparse.Namespace, run: RunConfig) -> List[VerificationReport]:
        return []


COMMANDS = [
    VerifyTheorem1Command,
    VerifyLseriesCommand,
    MahlerCommand,
    MahlerFamilyCommand,
    LValueCommand,
    NewformCommand,
    CountCommand,
    TracesCommand,
    FibrationCommand,
    GramCommand,
    HistoryCommand,
]

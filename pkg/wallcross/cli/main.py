"""
Command line driver for wallcross.

Reads a JSON problem file, dispatches to the engines and renders exact
results as text or JSON. Library errors become exit codes: 1 for invalid
input, 2 for failed mathematical preconditions, 3 for internal invariants.
"""

import argparse
import asyncio
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, TextIO

from ..data_structures.multipoly import MultiPoly
from ..models.base import to_jsonable
from ..models.error_codes import ExitCode, PreconditionError, ValidationError, WallcrossError, get_message
from ..models.problems import CrossingTrace
from ..monitoring.logger import configure_logging
from ..monitoring.metrics import metrics
from ..services.euler_service import WallCrossingEngine
from ..services.problem_file import ProblemFile
from ..services.selftest_service import run_selftest
from ..services.vortex_service import VortexService
from ..services.weight_combinatorics import (
    check_proper,
    classify_level,
    enumerate_walls,
    find_walls_containing,
    quotient_dimension,
)
from ..utils.environment import config
from ..utils.exact_linalg import rank
from ..utils.rationals import format_rational

logger = logging.getLogger(__name__)

COMMANDS = ("check", "walls", "classify", "euler", "crossing", "vortex", "trace", "table", "selftest")


class ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as validation errors instead of exiting"""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ValidationError(message, "arguments")


@dataclass
class CommandResult:
    """Rendered output of one command"""
    text: str
    data: Any
    exit_code: ExitCode = ExitCode.SUCCESS


class WallcrossCLI:
    def __init__(self) -> None:
        self.args: Optional[argparse.Namespace] = None
        self.problem: Optional[ProblemFile] = None
        self.engine: Optional[WallCrossingEngine] = None
        self.logger = logging.getLogger("wallcross.cli")

    def build_parser(self) -> argparse.ArgumentParser:
        parser = ArgumentParser(
            prog="wallcross",
            description="Exact Euler classes of toric quotients and vortex invariants",
        )
        parser.add_argument("command", choices=COMMANDS, help="Operation to run")
        parser.add_argument("input", nargs="?", help="JSON problem file")
        parser.add_argument("--seed", type=int, default=config.default_seed,
                            help="Path planning seed")
        parser.add_argument("--format", choices=("text", "json"), default=config.output_format,
                            help="Output format")
        parser.add_argument("--retries", type=int, default=config.path_retries,
                            help="Path planning retry budget")
        parser.add_argument("--out", help="Write output to this file instead of stdout")
        parser.add_argument("--parallel", action="store_true", default=config.parallel,
                            help="Evaluate top-level crossings in a process pool")
        parser.add_argument("--workers", type=int, default=config.max_workers,
                            help="Process pool size for --parallel")
        parser.add_argument("--verbose", "-v", action="count", default=0,
                            help="Log engine activity to stderr (-vv for debug)")
        return parser

    def parse_command_arguments(self, args: List[str]) -> argparse.Namespace:
        """Parse command line arguments."""
        self.args = self.build_parser().parse_args(args)
        if self.args.retries < 1:
            raise ValidationError("must be at least 1", "--retries")
        return self.args

    def _configure_logging(self) -> None:
        assert self.args is not None
        level = config.log_level
        if self.args.verbose == 1:
            level = "INFO"
        elif self.args.verbose >= 2:
            level = "DEBUG"
        configure_logging(level)

    def _load(self) -> ProblemFile:
        assert self.args is not None
        if not self.args.input:
            raise ValidationError(f"command {self.args.command} needs a problem file", "input")
        return ProblemFile(filename=self.args.input).load()

    # -- Commands -------------------------------------------------------------

    def cmd_check(self, problem: ProblemFile) -> CommandResult:
        ws = problem.weight_system
        assert ws is not None
        certificate = check_proper(ws)
        level = classify_level(ws, problem.tau)
        spanning = rank(ws.active_weights) == ws.k if ws.k else True
        data = {
            "proper": certificate is not None,
            "certificate": list(certificate) if certificate is not None else None,
            "spanning": spanning,
            "level": level.render(),
            "regular": level.is_regular,
            "super_regular": level.kind.value == "super_regular",
            "orbifold": level.is_orbifold,
            "dimension": quotient_dimension(ws),
            "walls": len(enumerate_walls(ws)),
        }
        lines = [
            f"proper: {'yes ' + str(data['certificate']) if data['proper'] else 'no'}",
            f"spanning: {'yes' if spanning else 'no'}",
            f"level: {data['level']}",
            f"regular: {'yes' if data['regular'] else 'no'}",
            f"super_regular: {'yes' if data['super_regular'] else 'no'}",
            f"dimension: {data['dimension']}",
            f"walls: {data['walls']}",
        ]
        return CommandResult("\n".join(lines), data)

    def cmd_walls(self, problem: ProblemFile) -> CommandResult:
        assert problem.weight_system is not None
        walls = enumerate_walls(problem.weight_system)
        return CommandResult("\n".join(w.render() for w in walls), [w.to_dict() for w in walls])

    def cmd_classify(self, problem: ProblemFile) -> CommandResult:
        assert problem.weight_system is not None
        level = classify_level(problem.weight_system, problem.tau)
        return CommandResult(level.render(), level.to_dict())

    def cmd_euler(self, problem: ProblemFile) -> CommandResult:
        assert self.args is not None and self.engine is not None
        toric = problem.toric_problem()
        x = problem.require_class()
        if self.args.parallel:
            value = asyncio.run(
                self.engine.euler_class_parallel(toric, x, self.args.seed, self.args.workers)
            )
        else:
            value = self.engine.euler_class(toric, x, self.args.seed)
        return CommandResult(format_rational(value), {"value": format_rational(value)})

    def cmd_crossing(self, problem: ProblemFile) -> CommandResult:
        assert self.args is not None and self.engine is not None
        ws = problem.weight_system
        assert ws is not None
        if problem.eta is None:
            raise ValidationError("crossing needs a direction", "eta")
        walls = find_walls_containing(ws, problem.tau)
        if not walls:
            raise PreconditionError("tau lies on no wall", "tau")
        if len(walls) > 1:
            raise PreconditionError("tau lies on more than one wall", "tau")
        value = self.engine.wall_crossing_difference(
            ws, walls[0], problem.tau, problem.eta, problem.require_class(), self.args.seed
        )
        data = {"value": format_rational(value), "wall": walls[0].to_dict()}
        return CommandResult(format_rational(value), data)

    def cmd_vortex(self, problem: ProblemFile) -> CommandResult:
        assert self.args is not None and self.engine is not None
        service = VortexService(self.engine)
        vp = problem.vortex_problem()
        report, _ = service.moduli_data(vp)
        data: Dict[str, Any] = {"report": report.to_dict()}
        lines = []
        if vp.genus == 0:
            value = service.vortex_invariant(vp, self.args.seed)
            data["value"] = format_rational(value)
            lines.append(format_rational(value))
        else:
            data["value"] = None
            lines.append(f"invariant: not computed in genus {vp.genus}")
        for key, item in report.to_dict().items():
            if key != "fiber":
                lines.append(f"{key}: {item}")
        return CommandResult("\n".join(lines), data)

    def cmd_trace(self, problem: ProblemFile) -> CommandResult:
        assert self.args is not None and self.engine is not None
        value, tree = self.engine.euler_trace(
            problem.toric_problem(), problem.require_class(), self.args.seed
        )
        text = "\n".join([f"value: {format_rational(value)}"] + _render_trace(tree, 0))
        return CommandResult(text, {"value": format_rational(value), "tree": tree.to_dict()})

    def cmd_table(self, problem: ProblemFile) -> CommandResult:
        assert self.args is not None and self.engine is not None
        toric = problem.toric_problem()
        table = self.engine.euler_table(toric, self.args.seed)
        lines = []
        data = {}
        for exponent, value in table.items():
            name = MultiPoly.monomial(exponent).render()
            lines.append(f"{name}: {format_rational(value)}")
            data[name] = format_rational(value)
        return CommandResult("\n".join(lines), data)

    def cmd_selftest(self) -> CommandResult:
        assert self.args is not None
        passed, results = run_selftest(self.args.seed)
        lines = [r.render() for r in results]
        for r in results:
            lines.extend(f"  {failure}" for failure in r.failures)
        data = {r.name: {"checks": r.checks, "failures": r.failures} for r in results}
        code = ExitCode.SUCCESS if passed else ExitCode.INTERNAL_INVARIANT
        return CommandResult("\n".join(lines), data, code)

    # -- Driver ---------------------------------------------------------------

    def dispatch(self) -> CommandResult:
        assert self.args is not None
        self.engine = WallCrossingEngine(seed=self.args.seed, retries=self.args.retries)
        if self.args.command == "selftest":
            return self.cmd_selftest()
        self.problem = self._load()
        handlers: Dict[str, Callable[[ProblemFile], CommandResult]] = {
            "check": self.cmd_check,
            "walls": self.cmd_walls,
            "classify": self.cmd_classify,
            "euler": self.cmd_euler,
            "crossing": self.cmd_crossing,
            "vortex": self.cmd_vortex,
            "trace": self.cmd_trace,
            "table": self.cmd_table,
        }
        return handlers[self.args.command](self.problem)

    def emit(self, result: CommandResult, stdout: TextIO) -> None:
        assert self.args is not None
        if self.args.format == "json":
            output = json.dumps(to_jsonable(result.data), indent=2)
        else:
            output = result.text
        if self.args.out:
            Path(self.args.out).write_text(output + "\n")
            self.logger.info(f"Wrote output to {self.args.out}")
        else:
            stdout.write(output + "\n")

    def run(self, argv: List[str], stdout: TextIO = sys.stdout, stderr: TextIO = sys.stderr) -> int:
        """Run one command and return its exit code."""
        try:
            self.parse_command_arguments(argv)
            self._configure_logging()
            result = self.dispatch()
            self.emit(result, stdout)
            self.logger.debug(f"Counters: {metrics.snapshot()}")
            return int(result.exit_code)
        except WallcrossError as e:
            stderr.write(f"error: {e}\n")
            self.logger.debug(get_message(e.code))
            return int(e.code)
        except OSError as e:
            stderr.write(f"error: --out: {e}\n")
            return int(ExitCode.VALIDATION_ERROR)


def _render_trace(node: CrossingTrace, depth: int) -> List[str]:
    indent = "  " * depth
    header = f"{indent}k={node.k} tau={[format_rational(Fraction(t)) for t in node.tau]} class={node.pushed_class} value={format_rational(node.value)}"
    if node.crossing is not None:
        header += f" wall={[i + 1 for i in node.crossing.wall.index_set]} e1={list(node.crossing.e1)}"
    if node.note:
        header += f" ({node.note})"
    lines = [header]
    for child in node.children:
        lines.extend(_render_trace(child, depth + 1))
    return lines


def main(argv: Optional[List[str]] = None) -> int:
    return WallcrossCLI().run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

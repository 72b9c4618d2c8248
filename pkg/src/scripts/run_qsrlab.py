# src/scripts/run_qsrlab.py

"""
qsrlab command line.

    qsrlab entropy  --in rho.json --quantity dmax --sigma sigma.json
    qsrlab protocol --in phi.json --partition R,A,B,C --n 8 --b 1
    qsrlab verify   --suite hayashi-nagaoka --trials 100 --seed 7
    qsrlab sweep    --in rho.json --sigma sigma.json --eps 0.3 --n-max 6
    qsrlab cost     --in phi.json --partition R,A,B,C

Exit codes: 0 success, 1 failed check, 2 input error, 3 numeric error.
"""

import argparse
import logging
import sys
import time
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from domain_models.state_redistribution import __version__
from domain_models.state_redistribution.schemas import RunReport
from domain_models.state_redistribution.services import (
    LabService,
    default_protocol_config,
    load_state,
    load_suite_config,
    save_report,
    to_jsonable,
)
from domain_models.state_redistribution.services.lab_service import QUANTITIES
from domain_models.state_redistribution.verify import CheckerFactory
from shared_libs.configs.config_loader import ConfigLoader, get_settings, installed_settings, set_settings
from shared_libs.quantum.states import PureVector
from shared_libs.utils.exceptions import ConfigurationError, InputValidationError, NumericError
from shared_libs.utils.logging_utils import setup_logging

logger = logging.getLogger("QSRLAB_CLI")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_NUMERIC_ERROR = 0, 1, 2, 3


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so run_command can map usage errors to exit code 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise _ArgumentError(message)


def _labels(text: str) -> List[str]:
    labels = [part.strip() for part in text.split(",") if part.strip()]
    if not labels:
        raise argparse.ArgumentTypeError("expected a comma-separated label list")
    return labels


def _dims(text: str) -> List[int]:
    try:
        dims = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dimension list '{text}'") from None
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"invalid dimension list '{text}'")
    return dims


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qsrlab", description="One-shot quantum state redistribution lab.")
    parser.add_argument("--config", type=str, default=None, help="Lab settings YAML (key LAB_CONFIG).")
    parser.add_argument("--log-level", type=str, default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    parser.add_argument("--out", type=str, default=None, help="Write the JSON run report here.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    entropy = sub.add_parser("entropy", help="Compute one entropic quantity.")
    entropy.add_argument("--in", dest="input", required=True)
    entropy.add_argument("--quantity", required=True, choices=list(QUANTITIES))
    entropy.add_argument("--sigma", default=None)
    entropy.add_argument("--eps", type=float, default=None)
    entropy.add_argument("--partition", type=_labels, default=None,
                         help="Register groups, comma separated; join registers of one group with '+'.")

    for name, help_text in (("protocol", "Simulate the redistribution protocol."),
                            ("cost", "Print both one-sided costs and their minimum.")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--partition", type=_labels, default=["R", "A", "B", "C"])
        p.add_argument("--sigma-c", dest="sigma_c", default=None)
        p.add_argument("--eps1", type=float, default=None)
        p.add_argument("--eps2", type=float, default=None)
        if name == "protocol":
            p.add_argument("--n", type=int, default=None)
            p.add_argument("--b", type=int, default=None)
            p.add_argument("--formulas", action="store_true", help="Derive n and b from k and D_H.")
            p.add_argument("--reversed", action="store_true", help="Run the protocol with A and B exchanged.")
            p.add_argument("--seed", type=int, default=0)
        else:
            p.add_argument("--smoothed", action="store_true", help="Use the smoothed k at eps1.")

    verify = sub.add_parser("verify", help="Run seeded inequality suites.")
    verify.add_argument("--suite", required=True, choices=CheckerFactory().available() + ["all"])
    verify.add_argument("--trials", type=int, default=None)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--dims", type=_dims, default=None)
    verify.add_argument("--suite-config", default=None, help="Suite list YAML (key VERIFY_SUITES).")

    sweep = sub.add_parser("sweep", help="D_H on n copies against n D(rho||sigma).")
    sweep.add_argument("--in", dest="input", required=True)
    sweep.add_argument("--sigma", required=True)
    sweep.add_argument("--eps", type=float, required=True)
    sweep.add_argument("--n-max", dest="n_max", type=int, required=True)
    return parser


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


# --- Subcommands: each returns (results, passed, printable lines) ---

def _entropy(service: LabService, args) -> Tuple[Any, bool, List[str]]:
    state = load_state(args.input)
    sigma = load_state(args.sigma) if args.sigma else None
    result = service.entropy(args.quantity, state, sigma, args.eps, args.partition)
    if "value" in result:
        lines = [_fmt(result["value"])]
    else:
        lines = [f"{k}={_fmt(result[k])}" for k in ("h0", "h_inf", "spread", "k1", "k2", "k3", "k4")
                 if result.get(k) is not None]
    return result, True, lines


def _protocol_config(args, **extra):
    sigma_c = None
    if args.sigma_c:
        loaded = load_state(args.sigma_c)
        sigma_c = loaded.density() if isinstance(loaded, PureVector) else loaded
    return default_protocol_config(sigma_C=sigma_c, eps1=args.eps1, eps2=args.eps2, **extra)


def _protocol(service: LabService, args) -> Tuple[Any, bool, List[str]]:
    extra: Dict[str, Any] = {"seed": args.seed, "derive_sizes": args.formulas}
    if not args.formulas:
        extra.update(n=args.n, b=args.b)
    config = _protocol_config(args, **extra)
    transcript, passed = service.protocol(load_state(args.input), args.partition, config, reverse=args.reversed)
    lines = [f"{field}={_fmt(getattr(transcript, field))}"
             for field in ("side", "n", "b", "qubits_sent", "measured_P", "derived_bound", "guaranteed_P", "cost_bound")]
    return transcript, passed, lines


def _cost(service: LabService, args) -> Tuple[Any, bool, List[str]]:
    result, passed = service.cost(load_state(args.input), args.partition, _protocol_config(args), args.smoothed)
    return result, passed, [f"{side}={_fmt(result[side])}" for side in ("B", "A", "achievable")]


def _verify(service: LabService, args) -> Tuple[Any, bool, List[str]]:
    service.suite_config = load_suite_config(args.suite_config)
    reports, passed = service.verify(args.suite, args.trials, args.seed, args.dims)
    lines = [f"{r.suite}: {'PASS' if r.passed else 'FAIL'} trials={r.trials} failures={len(r.failures)} "
             f"errors={len(r.errors)} max_violation={_fmt(r.max_violation)}" for r in reports]
    return reports, passed, lines


def _sweep(service: LabService, args) -> Tuple[Any, bool, List[str]]:
    report, passed = service.sweep(load_state(args.input), load_state(args.sigma), args.eps, args.n_max)
    lines = [f"n={p.n} value={_fmt(p.value)} reference={_fmt(p.reference)} gap={_fmt(p.gap)}"
             + (f" oracle={_fmt(p.oracle)}" if p.oracle is not None else "") for p in report.points]
    lines += [f"note: {note}" for note in report.notes]
    lines.append("PASS" if passed else "FAIL")
    return report, passed, lines


COMMANDS = {"entropy": _entropy, "protocol": _protocol, "cost": _cost, "verify": _verify, "sweep": _sweep}


def run_command(argv: Sequence[str], stdout=None) -> Tuple[int, RunReport]:
    """Parses argv, runs one subcommand and returns its exit code with the run report."""
    stdout = stdout or sys.stdout
    argv = list(argv)
    started = time.perf_counter()
    previous_settings = installed_settings()
    seed: Optional[int] = None
    config: Dict[str, Any] = {}
    results: Any = None

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # --help and --version
        code = e.code if isinstance(e.code, int) else EXIT_OK
        return code, RunReport(command=argv, exit_code=code, tool_version=__version__)
    except _ArgumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR, RunReport(command=argv, results={"error": str(e)}, exit_code=EXIT_INPUT_ERROR,
                                           tool_version=__version__)

    setup_logging(getattr(logging, args.log_level))
    try:
        if args.config:
            set_settings(ConfigLoader().get_lab_settings(args.config))
        seed = getattr(args, "seed", None)
        config = {"settings": get_settings().model_dump(),
                  "arguments": {k: v for k, v in vars(args).items() if k not in ("log_level", "out")}}
        service = LabService()
        results, passed, lines = COMMANDS[args.command](service, args)
        exit_code = EXIT_OK if passed else EXIT_CHECK_FAILED
        for line in lines:
            print(line, file=stdout)
    except (InputValidationError, ConfigurationError, ValidationError) as e:
        logger.error(f"Input error: {e}")
        print(f"error: {e}", file=sys.stderr)
        exit_code, results = EXIT_INPUT_ERROR, {"error": type(e).__name__, "message": str(e)}
    except NumericError as e:
        logger.error(f"Numeric error: {e}")
        print(f"numeric error: {e}", file=sys.stderr)
        exit_code, results = EXIT_NUMERIC_ERROR, {"error": type(e).__name__, "message": str(e),
                                                  "witness": getattr(e, "witness", None)}
    except Exception as e:
        logger.critical(f"Unhandled failure during '{args.command}': {e}", exc_info=True)
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        exit_code, results = EXIT_NUMERIC_ERROR, {"error": type(e).__name__, "message": str(e)}
    finally:
        set_settings(previous_settings)

    report = RunReport(command=argv, config=to_jsonable(config), results=to_jsonable(results), exit_code=exit_code,
                       wall_time=time.perf_counter() - started, tool_version=__version__, seed=seed)
    if args.out:
        save_report(report, args.out)
    return exit_code, report


def main() -> None:
    exit_code, _ = run_command(sys.argv[1:])
    sys.exit(exit_code)


if __name__ == "__main__":
    main()

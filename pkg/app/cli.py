# app/cli.py
"""
Командний рядок: guesswork {exponent,moment,simulate,toy,check,rank}.

Кожна команда друкує самоописну таблицю (CSV за замовчуванням або JSON).
Коди виходу: 0 = успіх, 1 = помилка використання, 2 = перевищено ліміт
чи спрацював запобіжник (зокрема розбіжність закритої форми з оптимізатором),
3 = провалено набір перевірок.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Tuple

from pydantic import ValidationError

from app import __version__
from app.constants import DEFAULT_TOY_BUDGETS
from app.exceptions import CapExceededError, GuessworkError, OptimizerDisagreementError, ResolutionError
from app.logging_setup import configure_logging
from app.models import Channel, LogBase, Pmf
from app.schemas import ChannelSpec, RunConfig, ToyConfig
from app.services import checks, exponents, oracle, passwords, reporting, simulation
from app.services.channels import channel_from_spec, load_channel_json
from app.services.ranking import rank_given_side_info, rank_no_side_info

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GUARD = 2
EXIT_CHECK_FAILED = 3

EXIT_CODES_HELP = (
    "exit codes: 0 ok; 1 usage or invalid configuration; "
    "2 cap exceeded, resolution guard or closed form vs optimizer disagreement; "
    "3 a check failed"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse виходить з кодом 2; у нас 2 зарезервовано для лімітів."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _n_grid(text: str) -> List[int]:
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--n-grid expects a:b or a:b:step, got {text!r}")
    if len(parts) == 2:
        parts.append(1)
    if len(parts) != 3 or parts[2] < 1 or parts[0] > parts[1]:
        raise argparse.ArgumentTypeError(f"--n-grid expects a:b or a:b:step with a <= b, got {text!r}")
    start, stop, step = parts
    return list(range(start, stop + 1, step))


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--channel", choices=["bec", "bsc", "custom"], default="bec")
    common.add_argument("--param", type=float, default=None, help="epsilon for bec, delta for bsc")
    common.add_argument("--channel-file", default=None, help="JSON with px, w, alphabet_x, alphabet_y")
    common.add_argument("--rho", type=float, default=1.0)
    common.add_argument("--m", type=int, default=1)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--n-grid", type=_n_grid, default=None, help="a:b:step, inclusive")
    common.add_argument("--trials", type=int, default=10_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--base", choices=["bits", "nats"], default="bits")
    common.add_argument("--resolution", type=float, default=1e-3)
    common.add_argument("--strategy", choices=["centralized", "decentralized", "single"], default="centralized")
    common.add_argument("--output", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default=None, help="write to this file instead of stdout")

    parser = _Parser(
        prog="guesswork",
        description="Guesswork moments and exponents with side information",
        epilog=EXIT_CODES_HELP,
    )
    parser.add_argument("--version", action="version", version=f"guesswork {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    exponent = sub.add_parser("exponent", parents=[common], help="asymptotic exponents")
    exponent.add_argument("--sweep", action="store_true", help="emit the parameter grid for bec or bsc")
    exponent.add_argument("--points", type=int, default=11)

    sub.add_parser("moment", parents=[common], help="exact moments by enumeration")
    sub.add_parser("simulate", parents=[common], help="seeded Monte Carlo with exponent fit")

    toy = sub.add_parser("toy", parents=[common], help="sister-password success curves")
    toy.add_argument("--corpus", default=None, help="password list; synthetic corpus when omitted")
    toy.add_argument("--top-k", type=int, default=1000)
    toy.add_argument("--flip-prob", type=float, default=0.3)
    toy.add_argument("--budgets", type=_int_list, default=None)
    toy.set_defaults(m=3)

    check = sub.add_parser("check", parents=[common], help="property suites")
    check.add_argument("--suite", choices=["all", *checks.SUITES], default="all")

    rank = sub.add_parser("rank", parents=[common], help="exact rank of x given y")
    rank.add_argument("--x", required=True)
    rank.add_argument("--y", default=None)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    n_values = args.n_grid or ([args.n] if args.n is not None else [])
    channel = None
    if args.channel_file is None and args.channel != "custom" and args.param is not None:
        channel = ChannelSpec(family=args.channel, param=args.param)
    return RunConfig(
        subcommand=args.subcommand,
        channel=channel,
        channel_file=args.channel_file,
        rho=args.rho,
        m=args.m,
        n_values=n_values,
        trials=args.trials,
        master_seed=args.seed,
        base=LogBase(args.base),
        resolution=args.resolution,
        strategy=args.strategy,
        output=args.output,
        sweep=getattr(args, "sweep", False),
        suite=getattr(args, "suite", "all"),
        corpus=getattr(args, "corpus", None),
        top_k=getattr(args, "top_k", 1000),
        flip_prob=getattr(args, "flip_prob", 0.3),
        budgets=getattr(args, "budgets", None) or [],
        x=getattr(args, "x", None),
        y=getattr(args, "y", None),
    )


def _channel(config: RunConfig) -> Tuple[str, Pmf, Channel]:
    if config.channel_file:
        p_x, w = load_channel_json(config.channel_file)
        return "custom", p_x, w
    if config.channel is None:
        raise UsageError("--param is required for bec and bsc; --channel custom needs --channel-file")
    p_x, w = channel_from_spec(config.channel)
    return config.channel.family, p_x, w


def _require_n(config: RunConfig) -> List[int]:
    if not config.n_values:
        raise UsageError("--n or --n-grid is required")
    return config.n_values


# ---------- Commands ----------
def cmd_exponent(config: RunConfig, args: argparse.Namespace) -> Tuple[list, dict]:
    if config.sweep:
        rows = exponents.sweep(args.channel, config.rho, max(config.m, 4), args.points, config.base)
        return rows, {}
    family, p_x, w = _channel(config)
    param = config.channel.param if config.channel else None
    result = exponents.exponent_for(
        family, config.strategy, config.m, config.rho, param=param, p_x=p_x, w=w,
        resolution=config.resolution, base=config.base,
    )
    row = {
        "model": family if param is None else f"{family}({param:g})",
        "rho": config.rho,
        "m": config.m,
        "strategy": config.strategy,
        "value": result.value,
        "method": result.method,
        "is_bound": result.is_bound,
        "closed_form": result.closed_form,
        "maximizer": result.maximizer.model_dump(exclude_none=True),
    }
    return [row], {}


def cmd_moment(config: RunConfig, args: argparse.Namespace) -> Tuple[list, dict]:
    _, p_x, w = _channel(config)
    reports = []
    for n in _require_n(config):
        if config.strategy == "single":
            reports.append(oracle.conditional_moment_exact(p_x, w, n, config.rho))
        elif config.strategy == "centralized":
            reports.append(oracle.centralized_moment_exact(p_x, w, n, config.m, config.rho))
        else:
            reports.append(oracle.decentralized_moment_exact(p_x, w, n, config.m, config.rho))
    return reports, {}


def cmd_simulate(config: RunConfig, args: argparse.Namespace) -> Tuple[list, dict]:
    _, p_x, w = _channel(config)
    run = simulation.simulate_centralized if config.strategy == "centralized" else simulation.simulate_decentralized
    m = 1 if config.strategy == "single" else config.m
    summaries = [run(p_x, w, n, m, config.rho, config.trials, config.master_seed) for n in _require_n(config)]
    extra = {}
    if len(set(config.n_values)) >= 3:
        extra["fit"] = simulation.exponent_fit(summaries, config.base)
    return summaries, extra


def cmd_toy(config: RunConfig, args: argparse.Namespace) -> Tuple[list, dict]:
    if config.corpus:
        corpus = passwords.load_corpus(config.corpus, top_k=config.top_k)
    else:
        corpus = passwords.synthetic_corpus(config.top_k, config.master_seed)
    toy_config = ToyConfig(m=config.m, flip_prob=config.flip_prob)
    budgets = config.budgets or list(DEFAULT_TOY_BUDGETS)
    curves = passwords.success_curve(corpus, toy_config, budgets, config.master_seed)
    rows = [
        {"strategy": strategy, "budget": point.budget, "fraction_recovered": point.fraction_recovered}
        for strategy, curve in curves.items()
        for point in curve.points
    ]
    meta = {
        "seed": config.master_seed,
        "flip_prob": toy_config.flip_prob,
        "m": toy_config.m,
        "top_k": config.top_k,
        "substitution": "uniform over the other 25 letters",
        "entries": len(corpus),
    }
    return rows, meta


def cmd_check(config: RunConfig, args: argparse.Namespace) -> Tuple[list, dict]:
    return checks.run_checks(config.suite), {}


def cmd_rank(config: RunConfig, args: argparse.Namespace) -> Tuple[list, dict]:
    _, p_x, w = _channel(config)
    row = {"x": config.x, "y": config.y, "rank_no_side_info": rank_no_side_info(config.x, p_x)}
    if config.y is not None:
        row["rank"] = rank_given_side_info(config.x, config.y, p_x, w)
    return [row], {}


COMMANDS = {
    "exponent": cmd_exponent,
    "moment": cmd_moment,
    "simulate": cmd_simulate,
    "toy": cmd_toy,
    "check": cmd_check,
    "rank": cmd_rank,
}


def _emit(text: str, out: Optional[str], stdout: TextIO) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        config = _config(args)
        records, extra = COMMANDS[config.subcommand](config, args)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        fields = ", ".join(".".join(str(p) for p in e["loc"]) or "config" for e in exc.errors())
        stderr.write(f"invalid configuration ({fields}): {exc}\n")
        return EXIT_USAGE
    except (CapExceededError, ResolutionError, OptimizerDisagreementError) as exc:
        stderr.write(f"{exc}\n")
        return EXIT_GUARD
    except (GuessworkError, ValueError) as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE

    metadata = reporting.build_metadata(config, **extra)
    _emit(reporting.render(records, metadata, config.output), args.out, stdout)
    if config.subcommand == "check" and not all(r.passed for r in records):
        failed = [f"{r.suite}: {r.name}" for r in records if not r.passed]
        stderr.write("failed checks:\n" + "\n".join(failed) + "\n")
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

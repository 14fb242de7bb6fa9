"""Command-line front end: ingest space/family specs, run coverability
checks, emit verified certificates and trend reports.

Exit codes are the machine interface; human text goes to stderr only:

    0  certified-net / TB-consistent ladder / certificate verified /
       all property checks passed
    1  refuted-at-scale / TB-refuting ladder / certificate invalid /
       some property check failed
    2  inconclusive
    3  usage or configuration error
    4  input/output or parse error
    5  internal verification failure

Mode selection: ``--verify-only CERT`` re-verifies a serialized
certificate, ``--trials N`` runs the randomized property suite, anything
else runs a coverability check from ``--input`` (single family) or
``--generator`` + ``--ladder`` (growth-index ladder).

Report JSON goes to ``--out`` when given, else to stdout.  Floats
serialize in shortest round-trip decimal form and keys are sorted, so
output is deterministic given config and seed.  The environment variable
``LAMBDAP_THREADS`` caps worker threads for per-index ladder runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .compactness import (
    CompactnessReport,
    LadderTrend,
    TREND_CONSISTENT,
    TREND_REFUTING,
    VERDICT_CERTIFIED,
    VERDICT_REFUTED,
    assemble_lambda_net,
    default_level_grid,
    ladder_trend,
    trend_to_csv,
)
from .covering import certificate_from_json, lambda_distance_oracle, lp_distance_oracle, verify_certificate
from .errors import ConfigurationError, VerificationError
from .families import GeneratorSpec, KINDS, family_generator, generate, load_family_file
from .measure import FunctionFamily
from .properties import run_all, summary_json
from .truncation import truncate

EXIT_USAGE = 3
EXIT_IO = 4
EXIT_INTERNAL = 5

_VERDICT_EXIT = {VERDICT_CERTIFIED: 0, VERDICT_REFUTED: 1}
_TREND_EXIT = {TREND_CONSISTENT: 0, TREND_REFUTING: 1}

GENERATOR_KINDS = tuple(k for k in KINDS if k != "custom-json")


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2, which is taken
        raise _CliError(EXIT_USAGE, message)


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


@dataclass(frozen=True)
class RunConfig:
    p: float
    epsilon: float | None
    grid_max: float
    ladder: tuple[int, ...] | None
    out: Path | None
    formats: frozenset
    seed: int
    threads: int

    def __post_init__(self) -> None:
        if self.p < 1.0:
            raise ConfigurationError("--p must be >= 1")
        if self.epsilon is not None and self.epsilon <= 0.0:
            raise ConfigurationError("--epsilon must be positive")
        if self.grid_max < 1.0:
            raise ConfigurationError("--grid-max must be >= 1")
        if self.ladder is not None and any(
            a >= b for a, b in zip(self.ladder, self.ladder[1:])
        ):
            raise ConfigurationError("--ladder indices must be strictly increasing")
        if not self.formats <= {"json", "csv"}:
            raise ConfigurationError("--format entries must be among json,csv")
        if self.threads < 1:
            raise ConfigurationError("LAMBDAP_THREADS must be a positive integer")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="asymlp",
        description="Coverability certification for function families under "
        "the bounded F-norm distance.",
    )
    parser.add_argument("--input", help="JSON file with {'space': ..., 'family': ...}")
    parser.add_argument("--generator", choices=GENERATOR_KINDS, help="built-in family generator")
    parser.add_argument("--p", type=float, default=1.0, help="integrability exponent (>= 1)")
    parser.add_argument("--epsilon", type=float, help="target covering radius")
    parser.add_argument("--grid-max", type=float, default=16.0,
                        help="largest power in the clamp-level grid")
    parser.add_argument("--ladder", help="comma-separated growth indices, e.g. 8,16,32")
    parser.add_argument("--out", help="output directory for report files")
    parser.add_argument("--format", default="json,csv",
                        help="comma-separated subset of json,csv")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int,
                        help="run the randomized property suite with this many trials")
    parser.add_argument("--verify-only", metavar="CERTIFICATE.JSON",
                        help="re-verify a serialized certificate against the family")
    parser.add_argument("--metric", choices=("lambda", "lp"), default="lambda",
                        help="oracle for --verify-only")
    parser.add_argument("--truncation-level", type=float,
                        help="clamp the family at this level before --verify-only")
    parser.add_argument("--quiet", action="store_true", help="suppress stderr chatter")
    return parser


def _parse_ladder(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise _CliError(EXIT_USAGE, f"bad --ladder value {text!r}: {exc}") from exc


def _threads_from_env() -> int:
    raw = os.environ.get("LAMBDAP_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return int(raw)
    except ValueError as exc:
        raise _CliError(EXIT_USAGE, f"bad LAMBDAP_THREADS value {raw!r}") from exc


def _load_family(path: str) -> FunctionFamily:
    try:
        return load_family_file(path)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise _CliError(EXIT_IO, f"cannot load family from {path!r}: {exc}") from exc


def _dump_json(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(config: RunConfig, name: str, payload: str) -> None:
    if config.out is None:
        sys.stdout.write(payload)
        return
    config.out.mkdir(parents=True, exist_ok=True)
    (config.out / name).write_text(payload, encoding="utf-8")


def _reverify_report(report: CompactnessReport, family: FunctionFamily) -> None:
    lam = lambda_distance_oracle(family.space, family, report.p)
    for cert in (report.net, report.packing):
        if cert is not None and not verify_certificate(cert, lam):
            raise VerificationError(
                f"embedded certificate for {report.family_label!r} failed re-verification"
            )


def _run_check(args, config: RunConfig) -> int:
    if config.epsilon is None:
        raise _CliError(EXIT_USAGE, "--epsilon is required for a coverability check")
    grid = default_level_grid(config.grid_max)
    csv_wanted = "csv" in config.formats
    json_wanted = "json" in config.formats

    if args.input and args.ladder:
        raise _CliError(EXIT_USAGE, "--ladder needs --generator; --input is a single family")

    if args.input:
        family = _load_family(args.input)
        report = assemble_lambda_net(family, config.p, config.epsilon, grid)
        _reverify_report(report, family)
        if json_wanted:
            _emit(config, "report.json", _dump_json(report.to_json()))
        if csv_wanted and config.out is not None:
            _emit(config, "profile.csv", _profile_csv(report))
        _say(args, f"verdict: {report.verdict}")
        return _VERDICT_EXIT.get(report.verdict, 2)

    if args.generator:
        if config.ladder is None:
            raise _CliError(EXIT_USAGE, "--generator requires --ladder indices")
        spec = GeneratorSpec(kind=args.generator, n=1, seed=config.seed)
        producer = family_generator(spec)
        trend = ladder_trend(
            producer, config.ladder, config.p, config.epsilon, grid, threads=config.threads
        )
        for index, report in zip(config.ladder, trend.reports):
            _reverify_report(report, producer(index))
        if json_wanted:
            _emit(config, "report.json", _dump_json(trend.to_json()))
        if csv_wanted and config.out is not None:
            _emit(config, "trend.csv", trend_to_csv(trend))
        _say(args, f"ladder verdict: {trend.verdict}")
        return _TREND_EXIT.get(trend.verdict, 2)

    raise _CliError(EXIT_USAGE, "one of --input or --generator is required")


def _profile_csv(report: CompactnessReport) -> str:
    lines = ["level,sup_truncation_error,sup_level_set_measure,half_epsilon_cover_size"]
    sizes = dict(report.cover_sizes)
    for e in report.profile.entries:
        lines.append(
            f"{e.level!r},{e.sup_truncation_error!r},{e.sup_level_set_measure!r},{sizes[e.level]}"
        )
    return "\n".join(lines) + "\n"


def _run_verify(args, config: RunConfig) -> int:
    try:
        with open(args.verify_only, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        cert = certificate_from_json(obj)
    except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        raise _CliError(EXIT_IO, f"cannot load certificate {args.verify_only!r}: {exc}") from exc

    if args.input:
        family = _load_family(args.input)
    elif args.generator:
        if config.ladder is None or len(config.ladder) != 1:
            raise _CliError(EXIT_USAGE, "--verify-only with --generator needs --ladder N")
        family = generate(GeneratorSpec(kind=args.generator, n=config.ladder[0], seed=config.seed))
    else:
        raise _CliError(EXIT_USAGE, "--verify-only needs the family: --input or --generator")

    if args.truncation_level is not None:
        clamped = tuple(truncate(f, args.truncation_level) for f in family.members)
        family = FunctionFamily(family.space, clamped, label=family.label)
    make_oracle = lambda_distance_oracle if args.metric == "lambda" else lp_distance_oracle
    oracle = make_oracle(family.space, family, config.p)
    try:
        ok = verify_certificate(cert, oracle)
    except IndexError as exc:
        raise _CliError(EXIT_IO, f"certificate does not match the family: {exc}") from exc
    _say(args, f"certificate {'verified' if ok else 'INVALID'} under {oracle.tag}")
    return 0 if ok else 1


def _run_properties(args, config: RunConfig) -> int:
    if args.trials < 1:
        raise _CliError(EXIT_USAGE, "--trials must be >= 1")
    results = run_all(config.seed, args.trials)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        _say(args, f"{status} {r.name} ({r.trials} trials)")
        if not r.passed:
            _say(args, f"  counterexample: {json.dumps(r.counterexample, sort_keys=True)}")
    if config.out is not None:
        _emit(config, "property_summary.json",
              _dump_json(summary_json(config.seed, args.trials, results)))
    return 0 if all(r.passed for r in results) else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = RunConfig(
            p=args.p,
            epsilon=args.epsilon,
            grid_max=args.grid_max,
            ladder=_parse_ladder(args.ladder),
            out=Path(args.out) if args.out else None,
            formats=frozenset(args.format.split(",")) if args.format else frozenset(),
            seed=args.seed,
            threads=_threads_from_env(),
        )
        if args.verify_only and args.trials is not None:
            raise _CliError(EXIT_USAGE, "--verify-only and --trials are mutually exclusive")
        if args.verify_only:
            return _run_verify(args, config)
        if args.trials is not None:
            return _run_properties(args, config)
        return _run_check(args, config)
    except _CliError as exc:
        print(f"asymlp: error: {exc}", file=sys.stderr)
        return exc.code
    except ConfigurationError as exc:
        print(f"asymlp: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as exc:
        print(f"asymlp: internal verification failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"asymlp: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

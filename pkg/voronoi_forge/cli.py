#!/usr/bin/env python3
"""
voronoi-forge: verify the identities of the twisted Petersson/Voronoi
machinery, or compute single values.

    voronoi-forge verify <suite> [--config PATH] [--seed N] [--jobs N]
                                 [--out PATH] [--format jsonl|csv] [--key value ...]
    voronoi-forge compute <kind> [--key value ...]

Reports go to --out (stdout by default); progress and the summary table go
to stderr.
"""

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import IO, Any, Callable, Dict, Iterator, List, Optional, Tuple

from dotenv import load_dotenv
from rich.console import Console

from .cache import initialize_cache
from .characters import gauss_sum, parse_character
from .config import SuiteConfig, load_config
from .cyclotomic import CyclotomicElement, cyc_reduce
from .errors import (
    AccuracyNotCertified,
    ConfigError,
    InvalidParams,
    NotPrimitive,
    OutOfDomain,
    OutOfRange,
    PoleError,
    PrecisionExhausted,
    ToleranceNotMet,
)
from .expsums import CharSumParams, char_sum_C, dft_d, kloosterman
from .lfunction import completed_L
from .modforms import eigenform_by_label
from .report import (
    SuiteSummary,
    VerificationReport,
    emit_report,
    format_value,
    print_summary,
)
from .special import TestFunction, bessel_j, hankel_transform
from .spectral import petersson_geometric
from .suites import ALL, Case, execute_case, registry
from .utils import OPIK_MODES, configure_opik, default_opik_mode

# Load environment variables from .env file
load_dotenv()

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

USAGE_ERRORS = (
    ConfigError,
    InvalidParams,
    NotPrimitive,
    OutOfRange,
    OutOfDomain,
    PoleError,
    ValueError,
)
NUMERIC_ERRORS = (ToleranceNotMet, PrecisionExhausted, AccuracyNotCertified)

COMPUTE_KINDS = (
    "kloosterman",
    "gauss-sum",
    "char-sum-C",
    "dft-d",
    "bessel-j",
    "hankel",
    "petersson-g",
    "lambda",
    "completed-L",
)


def parse_arguments(
    argv: Optional[List[str]] = None,
) -> Tuple[argparse.Namespace, Dict[str, str]]:
    """Parse command-line arguments; unknown --key value pairs are returned separately."""
    parser = argparse.ArgumentParser(
        prog="voronoi-forge",
        description="voronoi-forge: verify twisted Petersson, Voronoi and character-sum identities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  voronoi-forge verify charsum-reciprocity --seed 7
  voronoi-forge verify petersson --k 14
  voronoi-forge verify dft-duality --jobs 4 --format csv --out dft.csv
  voronoi-forge verify all --config sweeps.env --quiet
  voronoi-forge verify voronoi --voronoi_perturb_index 10
  voronoi-forge compute kloosterman --m 1 --n 1 --c 3
  voronoi-forge compute lambda --k 12 --n 2
  voronoi-forge compute completed-L --form 12 --chi 3:1 --s 0.5
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser(
        "verify",
        help="Run a verification suite and write one report record per case",
        allow_abbrev=False,
    )
    verify.add_argument("suite", choices=registry.names + [ALL], help="Suite to run")
    verify.add_argument(
        "--config", type=str, help="Path to a key=value configuration file"
    )
    verify.add_argument(
        "--seed", type=int, default=0, help="Sampling seed (default: 0)"
    )
    verify.add_argument(
        "--jobs", type=int, default=1, help="Worker processes (default: 1)"
    )
    verify.add_argument(
        "--out", default="-", help="Report destination, - for stdout (default: -)"
    )
    verify.add_argument(
        "--format",
        choices=["jsonl", "csv"],
        default="jsonl",
        help="Report format (default: jsonl)",
    )
    verify.add_argument(
        "--timing",
        action="store_true",
        help="Record per-case runtime in runtimeMs (reports are no longer byte-stable)",
    )
    verify.add_argument(
        "--opik",
        choices=list(OPIK_MODES),
        default=default_opik_mode(),
        help="Opik tracing mode: local, hosted, or disabled (default: VF_OPIK_MODE or disabled)",
    )
    verify.add_argument("--debug", action="store_true", help="Print every case")
    verify.add_argument(
        "--quiet", action="store_true", help="Print only the final verdict"
    )

    compute = commands.add_parser(
        "compute",
        help="Compute a single value; parameters are given as --key value pairs",
        allow_abbrev=False,
    )
    compute.add_argument(
        "kind", choices=list(COMPUTE_KINDS), help="Quantity to compute"
    )

    args, extra = parser.parse_known_args(argv)
    try:
        pairs = parse_pairs(extra)
    except ConfigError as e:
        parser.error(str(e))
    return args, pairs


def parse_pairs(tokens: List[str]) -> Dict[str, str]:
    """["--key", "value", "--other=value"] -> {"key": "value", "other": "value"}."""
    pairs: Dict[str, str] = {}
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if not token.startswith("--") or len(token) == 2:
            raise ConfigError(f"Expected --key value, got '{token}'")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(tokens):
                raise ConfigError(f"Missing value for --{key}")
            value = tokens[i + 1]
            i += 2
        pairs[key.replace("-", "_")] = value
    return pairs


# verify


def _run_cases(
    cases: List[Case],
    cfg: SuiteConfig,
    seed: int,
    jobs: int,
    trace: bool,
    timing: bool,
) -> Iterator[Tuple[Case, VerificationReport, Optional[str]]]:
    """Results in case-index order, whatever order the workers finish in."""
    if jobs <= 1 or len(cases) <= 1:
        for case in cases:
            record, error = execute_case(case, cfg, seed, trace, timing)
            yield case, record, error
        return
    run = partial(execute_case, cfg=cfg, seed=seed, trace=trace, timing=timing)
    chunksize = max(1, len(cases) // (jobs * 16))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = pool.map(run, cases, chunksize=chunksize)
        for case, (record, error) in zip(cases, results):
            yield case, record, error


def run_verify(args: argparse.Namespace, overrides: Dict[str, str]) -> int:
    console = Console(stderr=True)
    verbose = not args.quiet

    try:
        cfg = load_config(args.config, overrides)
        plan = [
            (name, registry.cases(name, cfg, args.seed))
            for name in registry.expand(args.suite)
        ]
    except ConfigError as e:
        console.print(f"❌ {e}")
        return EXIT_USAGE
    if args.jobs < 1:
        console.print(f"❌ --jobs must be at least 1, got {args.jobs}")
        return EXIT_USAGE

    initialize_cache()
    trace = configure_opik(args.opik, console=console)
    summaries: List[SuiteSummary] = []

    def records() -> Iterator[VerificationReport]:
        for name, cases in plan:
            summary = SuiteSummary(suite=name)
            summaries.append(summary)
            if verbose:
                console.print(
                    f"🔍 {name}: {len(cases)} cases ({registry.describe(name)})"
                )
            for case, record, error in _run_cases(
                cases, cfg, args.seed, args.jobs, trace, args.timing
            ):
                summary.add(record)
                if verbose and (args.debug or not record.passed):
                    mark = "✅" if record.passed else "❌"
                    console.print(
                        f"{mark} {name}[{case.index}] {case.report_params()} "
                        f"residual={record.residual:.3e} tolerance={record.tolerance:.1e}"
                    )
                    if error:
                        console.print(f"   {error}")
                yield record

    try:
        if args.out == "-":
            emit_report(records(), args.format, sys.stdout)
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as stream:
                emit_report(records(), args.format, stream)
    except OSError as e:
        console.print(f"❌ Could not write report to {args.out}: {e}")
        return EXIT_IO

    if verbose:
        print_summary(console, summaries)
    total = sum(s.cases for s in summaries)
    failures = sum(s.failures for s in summaries)
    if failures:
        console.print(f"❌ {failures} of {total} cases failed")
        return EXIT_FAILED
    console.print(f"✅ All {total} cases passed")
    return EXIT_OK


# compute


def _require(params: Dict[str, str], key: str, cast: Callable[[str], Any] = int) -> Any:
    if key not in params:
        raise ConfigError(f"Missing parameter --{key.replace('_', '-')}")
    try:
        return cast(params[key])
    except ValueError:
        raise ConfigError(f"Parameter --{key} has an invalid value: {params[key]!r}")


def _optional(
    params: Dict[str, str], key: str, default: Any, cast: Callable[[str], Any]
) -> Any:
    return _require(params, key, cast) if key in params else default


def _number(text: str) -> Any:
    """Real unless the text carries an imaginary part."""
    text = text.replace(" ", "")
    return complex(text) if "j" in text else float(text)


def exact_text(x: CyclotomicElement) -> str:
    """Power-basis form of x modulo the L-th cyclotomic polynomial."""
    coeffs = cyc_reduce(x)
    terms = []
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        terms.append(str(c) if j == 0 else f"{c}*z{x.order}^{j}")
    return " + ".join(terms) if terms else "0"


def compute_value(kind: str, params: Dict[str, str]) -> Tuple[Any, Optional[str]]:
    """The value of one quantity, and its exact form where there is one."""
    if kind == "kloosterman":
        value = kloosterman(
            _require(params, "m"), _require(params, "n"), _require(params, "c")
        )
        return value.numeric.real, exact_text(value.exact)
    if kind == "gauss-sum":
        gauss = gauss_sum(parse_character(_require(params, "chi", str)))
        return gauss.epsilon, exact_text(gauss.exact)
    if kind == "char-sum-C":
        p = CharSumParams(
            parse_character(_require(params, "psi", str)),
            _require(params, "h"),
            _require(params, "a"),
            _optional(params, "u", 1, int),
            _require(params, "b"),
            _optional(params, "v", 1, int),
        )
        value = char_sum_C(p)
        return value.numeric, exact_text(value.exact)
    if kind == "dft-d":
        value = dft_d(
            parse_character(_require(params, "chi", str)),
            _require(params, "ell"),
            _require(params, "m"),
            _require(params, "c"),
        )
        return value.numeric, exact_text(value.exact)
    if kind == "bessel-j":
        return bessel_j(_require(params, "k"), _require(params, "x", _number)), None
    if kind == "hankel":
        g = TestFunction(
            _optional(params, "center", 3.0, float),
            _optional(params, "half_width", 1.0, float),
        )
        a = _require(params, "a", float)
        return hankel_transform(g, _require(params, "k"), a), None
    if kind == "petersson-g":
        value = petersson_geometric(
            _require(params, "k"),
            _require(params, "ell"),
            _require(params, "n"),
            _optional(params, "tol", 1e-10, float),
        )
        return value.value, None
    if kind == "lambda":
        n = _require(params, "n")
        label = params.get("form") or str(_require(params, "k"))
        return eigenform_by_label(label, max(n, 10)).lam(n), None
    if kind == "completed-L":
        label = params.get("form") or str(_optional(params, "k", 12, int))
        form = eigenform_by_label(label)
        value = completed_L(
            form,
            parse_character(_require(params, "chi", str)),
            _require(params, "s", lambda t: complex(t.replace(" ", ""))),
            target=_optional(params, "target", 1e-6, float),
        )
        return value.value, None
    raise ConfigError(f"Unknown kind '{kind}'; choose from {', '.join(COMPUTE_KINDS)}")


def run_compute(args: argparse.Namespace, params: Dict[str, str], out: IO[str]) -> int:
    console = Console(stderr=True)
    try:
        value, exact = compute_value(args.kind, params)
    except USAGE_ERRORS as e:
        console.print(f"❌ {e}")
        return EXIT_USAGE
    except NUMERIC_ERRORS as e:
        console.print(f"❌ {type(e).__name__}: {e}")
        return EXIT_FAILED
    print(format_value(value), file=out)
    if exact is not None:
        console.print(f"exact: {exact}")
    return EXIT_OK


def run(argv: Optional[List[str]] = None) -> int:
    args, pairs = parse_arguments(argv)
    if args.command == "verify":
        return run_verify(args, pairs)
    return run_compute(args, pairs, sys.stdout)


def main() -> None:
    """Main entry point for voronoi-forge."""
    sys.exit(run())


if __name__ == "__main__":
    main()

# Copyright 2026 The relmalcev Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Mal'cev conditions from relational inequalities."""
from pathlib import Path
from typing import Callable
from typing import Optional

import contextlib
import functools
import json
import logging

import click
import coloredlogs

from relmalcev import lib
from relmalcev.classes.malcev_condition import Algorithm
from relmalcev.classes.output_format import OutputFormat
from relmalcev.decide import DEFAULT_ARITY_CAP
from relmalcev.decide import DEFAULT_K_MAX
from relmalcev.decide import check_algebra
from relmalcev.decide import check_variety
from relmalcev.decide import equivalence_report
from relmalcev.decide import kfamily_witness
from relmalcev.decide import synthesize_terms
from relmalcev.decide import verify_witness
from relmalcev.finalg import DEFAULT_ENUMERATION_BOUND
from relmalcev.finalg import DEFAULT_SIZE_CAP
from relmalcev.finalg import CapacityExceededError
from relmalcev.log import APP_VERSION
from relmalcev.log import JsonEncoderStrFallback
from relmalcev.log import get_json_logger
from relmalcev.log import get_logger
from relmalcev.malcevgen import gen_eq
from relmalcev.malcevgen import gen_eqr
from relmalcev.malcevgen import render_condition
from relmalcev.malcevgen import render_conditions
from relmalcev.relterm import expand_plus
from relmalcev.relterm import parse_inequality
from relmalcev.relterm import parse_term
from relmalcev.termgraph import build_graph
from relmalcev.termgraph import graph_is_regular
from relmalcev.termgraph import to_dot
from relmalcev.utils import assert_positive
from relmalcev.utils import parse_k_range


json_logger = get_json_logger()
logger = get_logger()
coloredlogs.install(logger=logger)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_INTERNAL = 4


def _enable_debug() -> None:
    logger.setLevel("DEBUG")
    for handler in logger.handlers:
        handler.setLevel(logging.DEBUG)
    logger.debug("Debug logging enabled")


def _log_run_configs(command: str, configs: dict) -> None:
    logger.debug(f"Starting relmalcev {command} with configs:")
    json_logger.info(
        json.dumps(
            {"relmalcev_run_configs": {"command": command, **configs}},
            cls=JsonEncoderStrFallback,
        )
    )


@contextlib.contextmanager
def _exit_codes():
    """Map library errors onto the documented exit codes."""
    try:
        yield
    except CapacityExceededError as error:
        logger.error(f"{error} (partial count: {error.partial_count})")
        raise SystemExit(EXIT_CAPACITY)
    except ValueError as error:
        logger.error(error)
        raise SystemExit(EXIT_USAGE)
    except Exception as error:
        logger.error(error, exc_info=True)
        json_logger.error(error, exc_info=True)
        raise SystemExit(EXIT_INTERNAL)


def _echo_json(payload) -> None:
    click.echo(
        json.dumps(payload, indent=2, ensure_ascii=False, cls=JsonEncoderStrFallback)
    )


def debug_option(function: Callable) -> Callable:
    @click.option(
        "--debug",
        help="If True, print additional diagnostic information.",
        is_flag=True,
        default=False,
    )
    @functools.wraps(function)
    def wrapper(*args, debug: bool = False, **kwargs):
        if debug:
            _enable_debug()
        return function(*args, **kwargs)

    return wrapper


def algebra_option(function: Callable) -> Callable:
    return click.option(
        "--algebra",
        "algebra_source",
        help="Catalog algebra name (bare2, bare3, z2, lat2, slat2, bool2) "
        "or a path to an algebra JSON or YAML file.",
        required=True,
        type=str,
    )(function)


def size_cap_option(function: Callable) -> Callable:
    return click.option(
        "--size-cap",
        help="Maximum number of elements a free algebra or subpower may reach. "
        "Uses the environment variable MALCEV_CAP if present.",
        envvar="MALCEV_CAP",
        default=DEFAULT_SIZE_CAP,
        type=int,
        show_default=True,
    )(function)


def bound_option(function: Callable) -> Callable:
    return click.option(
        "--bound",
        help="Enumeration bound: at most 2^BOUND candidate relations are enumerated.",
        default=DEFAULT_ENUMERATION_BOUND,
        type=int,
        show_default=True,
    )(function)


def threads_option(function: Callable) -> Callable:
    return click.option(
        "--threads",
        help="Number of threads evaluating relation tuples in algebra-level checks.",
        default=1,
        type=int,
        show_default=True,
    )(function)


def k_range_option(function: Callable) -> Callable:
    return click.option(
        "--k-range",
        help="Range K_MIN..K_MAX of k values used when '+' occurs on the right side.",
        default=f"2..{DEFAULT_K_MAX}",
        type=str,
        show_default=True,
    )(function)


def algorithm_option(default: str) -> Callable:
    return click.option(
        "--algorithm",
        help="'crr' for compatible reflexive relations, 'classic' for congruences.",
        type=click.Choice([item.value for item in Algorithm], case_sensitive=False),
        default=default,
        show_default=True,
    )


@click.group()
@click.version_option(version=APP_VERSION)
def main() -> None:
    """Mal'cev conditions from relational inequalities p <= q.

    Terms are built from variables with '&' (meet), 'o' (composition) and
    '+' (union of alternating compositions), binding in that order.

    \b
    > relmalcev term "X & (Y o Z)" --regular
    > relmalcev gen "X o X <= X" --algorithm crr
    > relmalcev check "X o X <= X" --algebra z2 --level variety --mode crr
    > relmalcev synthesize "R & (S o T) <= (R & S) o T" --algebra bool2
    > relmalcev run ALL configs/
    """


@main.command()
@click.argument("term")
@click.option("--regular", help="Report whether the term is regular.", is_flag=True)
@click.option("--vars", "show_vars", help="Report the variables and the L/R sets.", is_flag=True)
@debug_option
def term(term: str, regular: bool, show_vars: bool) -> None:
    """Parse TERM and print its syntax tree."""
    with _exit_codes():
        t = parse_term(term)
        click.echo(lib.term_report(t, regular=regular, show_vars=show_vars), nl=False)


@main.command()
@click.argument("term")
@click.option("--dot", help="Print the graph in DOT format instead of JSON.", is_flag=True)
@click.option(
    "--k",
    help="Expand every '+' into K alternating compositions before building the graph.",
    default=None,
    type=int,
)
@debug_option
def graph(term: str, dot: bool, k: Optional[int]) -> None:
    """Build the labelled graph of a +-free TERM."""
    with _exit_codes():
        t = parse_term(term)
        if k is not None:
            t = expand_plus(t, k)
        elif not t.is_plus_free():
            raise ValueError(
                f"'{term}' contains '+'; pass --k to expand it into compositions first."
            )
        g = build_graph(t)
        if dot:
            click.echo(to_dot(g), nl=False)
        else:
            _echo_json({**g.to_dict(), "regular": graph_is_regular(g)})


@main.command()
@click.argument("inequality")
@algorithm_option(Algorithm.CRR.value)
@k_range_option
@click.option(
    "--format",
    "output_format",
    help="Output format of the generated conditions.",
    type=click.Choice([item.value for item in OutputFormat], case_sensitive=False),
    default=OutputFormat.JSON.value,
    show_default=True,
)
@click.option(
    "--prune-trivial",
    help="Drop identities whose two sides coincide after resolving projections.",
    is_flag=True,
    default=False,
)
@click.option(
    "--output-dir",
    help="Write one file per condition into this directory instead of printing.",
    default=None,
    type=click.Path(file_okay=False),
)
@debug_option
def gen(
    inequality: str,
    algorithm: str,
    k_range: str,
    output_format: str,
    prune_trivial: bool,
    output_dir: Optional[str],
) -> None:
    """Generate the Mal'cev condition(s) of INEQUALITY."""
    with _exit_codes():
        k_min, k_max = parse_k_range(k_range)
        output_format = OutputFormat.from_name(output_format)
        _log_run_configs("gen", locals())
        conditions = lib.generate_conditions(
            inequality, Algorithm.from_name(algorithm), k_min, k_max
        )
        if output_dir:
            for path in lib.write_conditions(
                conditions, Path(output_dir), output_format, prune_trivial
            ):
                click.echo(str(path))
        elif len(conditions) == 1 and conditions[0].k is None:
            click.echo(
                render_condition(conditions[0], output_format, prune_trivial), nl=False
            )
        else:
            click.echo(
                render_conditions(conditions, output_format, prune_trivial), nl=False
            )


@main.command()
@click.argument("inequality")
@algebra_option
@click.option(
    "--level",
    help="'algebra' enumerates the relations of the algebra itself; "
    "'variety' runs the generic test in a free algebra.",
    type=click.Choice(["algebra", "variety"], case_sensitive=False),
    default="variety",
    show_default=True,
)
@click.option(
    "--mode",
    help="Range of the variables: compatible reflexive relations or congruences.",
    type=click.Choice(["crr", "con"], case_sensitive=False),
    default="crr",
    show_default=True,
)
@bound_option
@threads_option
@size_cap_option
@click.option(
    "--k-max",
    help="Largest k expected to suffice for '+' on the right side.",
    default=DEFAULT_K_MAX,
    type=int,
    show_default=True,
)
@debug_option
def check(
    inequality: str,
    algebra_source: str,
    level: str,
    mode: str,
    bound: int,
    threads: int,
    size_cap: int,
    k_max: int,
) -> None:
    """Decide whether INEQUALITY holds in an algebra or in its variety."""
    with _exit_codes():
        assert_positive(threads, "--threads")
        assert_positive(size_cap, "--size-cap")
        _log_run_configs("check", locals())
        algebra = lib.resolve_algebra(algebra_source)
        ineq = parse_inequality(inequality)
        if level.lower() == "algebra":
            verdict = check_algebra(algebra, ineq, mode, bound=bound, threads=threads)
        else:
            verdict = check_variety(algebra, ineq, mode, k_max=k_max, size_cap=size_cap)
        _echo_json(verdict.to_dict())
    if not verdict.holds:
        raise SystemExit(EXIT_FAILED)


@main.command()
@click.argument("inequality")
@algebra_option
@algorithm_option(Algorithm.CRR.value)
@k_range_option
@click.option(
    "--arity-cap",
    help="Largest symbol arity the search accepts.",
    default=DEFAULT_ARITY_CAP,
    type=int,
    show_default=True,
)
@size_cap_option
@debug_option
def synthesize(
    inequality: str,
    algebra_source: str,
    algorithm: str,
    k_range: str,
    arity_cap: int,
    size_cap: int,
) -> None:
    """Find terms of an algebra satisfying the condition of INEQUALITY."""
    with _exit_codes():
        assert_positive(size_cap, "--size-cap")
        k_min, k_max = parse_k_range(k_range)
        _log_run_configs("synthesize", locals())
        algebra = lib.resolve_algebra(algebra_source)
        ineq = parse_inequality(inequality)
        algorithm = Algorithm.from_name(algorithm)
        if not ineq.rhs.is_plus_free():
            witness = kfamily_witness(
                algebra, ineq, k_min, k_max, algorithm, arity_cap, size_cap
            )
        else:
            generate = gen_eqr if algorithm == Algorithm.CRR else gen_eq
            condition = generate(ineq.lhs, ineq.rhs)
            witness = synthesize_terms(algebra, condition, arity_cap, size_cap)
        if witness is not None and not verify_witness(algebra, witness.condition, witness):
            raise RuntimeError(f"Synthesized terms fail the identities on {algebra.name}.")
    if witness is None:
        click.echo("no witness")
        raise SystemExit(EXIT_FAILED)
    click.echo(lib.witness_listing(witness), nl=False)


@main.command()
@click.argument("inequality")
@algebra_option
@size_cap_option
@debug_option
def equivalence(inequality: str, algebra_source: str, size_cap: int) -> None:
    """Run the generic test over relations and over congruences side by side."""
    with _exit_codes():
        _log_run_configs("equivalence", locals())
        algebra = lib.resolve_algebra(algebra_source)
        report = equivalence_report(algebra, parse_inequality(inequality), size_cap)
        _echo_json(report.to_dict())
    if report.discrepancy:
        raise SystemExit(EXIT_FAILED)


@main.command()
@click.argument("check_ids")
@click.argument("config_path", type=click.Path(exists=True))
@bound_option
@threads_option
@size_cap_option
@debug_option
def run(check_ids: str, config_path: str, bound: int, threads: int, size_cap: int) -> None:
    """Run CHECK_IDS from a CONFIG_PATH.

    CHECK_IDS:
    comma-separated check ID(s) from the `checks` node of the YAML suite.
    Set CHECK_IDS to 'ALL' to run every check in CONFIG_PATH.

    CONFIG_PATH:
    Path to a YAML file or a directory of YAML files holding `checks` and,
    optionally, extra `algebras`.

    \b
    > relmalcev run ALL configs/
    > relmalcev run Z2_PERMUTABLE,LAT2_MAJORITY configs/checks.yml --threads 4
    """
    with _exit_codes():
        _log_run_configs("run", locals())
        results, passed = lib.run_suite(
            check_ids, Path(config_path), bound=bound, size_cap=size_cap, threads=threads
        )
        _echo_json(results)
    if not passed:
        raise SystemExit(EXIT_FAILED)


if __name__ == "__main__":
    main()

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

"""Orchestration helpers used by the command line: algebra sources, check suites, file output."""
from pathlib import Path
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

import itertools
import json
import logging

from relmalcev.classes.check_config import CheckConfig
from relmalcev.classes.check_verdict import CheckVerdict
from relmalcev.classes.check_verdict import TermWitness
from relmalcev.classes.config_type import ConfigType
from relmalcev.classes.finite_algebra import FiniteAlgebra
from relmalcev.classes.malcev_condition import Algorithm
from relmalcev.classes.malcev_condition import MalcevCondition
from relmalcev.classes.output_format import OutputFormat
from relmalcev.classes.rel_term import BinaryTerm
from relmalcev.classes.rel_term import RelTerm
from relmalcev.classes.rel_term import Variable
from relmalcev.classes.relation_mode import CheckLevel
from relmalcev.decide import check_algebra
from relmalcev.decide import check_variety
from relmalcev.finalg import DEFAULT_ENUMERATION_BOUND
from relmalcev.finalg import DEFAULT_SIZE_CAP
from relmalcev.malcevgen import gen_eq
from relmalcev.malcevgen import gen_eq_family
from relmalcev.malcevgen import gen_eqr
from relmalcev.malcevgen import gen_eqr_family
from relmalcev.malcevgen import render_condition
from relmalcev.relterm import is_regular
from relmalcev.relterm import left_vars
from relmalcev.relterm import parse_inequality
from relmalcev.relterm import render
from relmalcev.relterm import right_vars
from relmalcev.relterm import variables
from relmalcev.utils import assert_not_none_or_empty
from relmalcev.utils import get_package_path
from relmalcev.utils import load_yaml
from relmalcev.utils import slugify


logger = logging.getLogger(__name__)

CATALOG_PATH = ("catalog", "algebras.yml")
ALL_CHECKS = "ALL"


def load_configs(configs_path: Path, configs_type: ConfigType) -> Dict:
    if configs_path.is_file():
        yaml_files = [configs_path]
    else:
        yaml_files = sorted(
            itertools.chain(
                configs_path.glob("**/*.yaml"), configs_path.glob("**/*.yml")
            )
        )
    all_configs: Dict = {}
    for file in yaml_files:
        config = load_yaml(file, configs_type.value)
        if not config:
            continue
        duplicates = set(all_configs) & set(config)
        if duplicates:
            raise ValueError(
                f"Duplicate {configs_type.value} IDs {sorted(duplicates)} in {file}."
            )
        all_configs.update(config)
    if configs_type.is_required():
        assert_not_none_or_empty(
            all_configs,
            f"Failed to load {configs_type.value} from file path: {configs_path}",
        )
    return all_configs


def load_algebras_config(configs_path: Path) -> Dict[str, FiniteAlgebra]:
    configs = load_configs(configs_path, ConfigType.ALGEBRAS)
    return {
        algebra_id: FiniteAlgebra.from_dict(algebra_id, config)
        for algebra_id, config in configs.items()
    }


def load_checks_config(configs_path: Path) -> Dict[str, CheckConfig]:
    configs = load_configs(configs_path, ConfigType.CHECKS)
    return {
        check_id: CheckConfig.from_dict(check_id, config)
        for check_id, config in configs.items()
    }


def load_catalog() -> Dict[str, FiniteAlgebra]:
    return load_algebras_config(get_package_path(*CATALOG_PATH))


def load_algebra_json(path: Path) -> FiniteAlgebra:
    with path.open() as f:
        config = json.load(f)
    if not isinstance(config, dict):
        raise ValueError(f"Algebra file {path} must hold a JSON object.")
    return FiniteAlgebra.from_dict(path.stem.upper(), config)


def resolve_algebra(
    source: str, extra: Optional[Dict[str, FiniteAlgebra]] = None
) -> FiniteAlgebra:
    """Catalog name first (case-insensitive), then algebras from loaded configs, then a file path."""
    catalog = load_catalog()
    key = source.upper()
    if key in catalog:
        return catalog[key]
    if extra and key in extra:
        return extra[key]
    path = Path(source)
    if not path.is_file():
        raise ValueError(
            f"Algebra '{source}' is neither a catalog name {sorted(catalog)} "
            "nor an existing file."
        )
    if path.suffix.lower() == ".json":
        return load_algebra_json(path)
    algebras = load_algebras_config(path)
    if len(algebras) != 1:
        raise ValueError(
            f"Algebra file {path} defines {len(algebras)} algebras; "
            "reference one of them by name from a check suite instead."
        )
    return next(iter(algebras.values()))


def describe_node(t: RelTerm) -> str:
    """Prefix form of the syntax tree, e.g. Meet(X, Compose(Y, Z))."""
    if isinstance(t, Variable):
        return t.var.display_name
    if isinstance(t, BinaryTerm):
        return f"{type(t).__name__}({describe_node(t.left)}, {describe_node(t.right)})"
    raise NotImplementedError(f"Term node {type(t).__name__} not supported.")


def term_report(t: RelTerm, regular: bool = False, show_vars: bool = False) -> str:
    lines = [f"term: {render(t)}", f"ast: {describe_node(t)}"]
    if show_vars:
        lines.append(f"variables: {', '.join(var.display_name for var in variables(t))}")
        if t.is_plus_free():
            lines.append(f"left: {_var_list(left_vars(t))}")
            lines.append(f"right: {_var_list(right_vars(t))}")
    if regular:
        lines.append(f"regular: {str(is_regular(t)).lower()}")
    return "\n".join(lines) + "\n"


def _var_list(names: frozenset) -> str:
    return ", ".join(var.display_name for var in sorted(names, key=lambda var: var.index))


def witness_listing(witness: TermWitness) -> str:
    """One line `symbol(x1,...,xr) = term` per symbol, after a header naming the source."""
    condition = witness.condition
    lines = [
        f"# algebra: {witness.algebra.name}",
        f"# source: {condition.source}",
        f"# algorithm: {condition.algorithm.value}"
        + (f", k = {condition.k}" if condition.k is not None else ""),
    ]
    for symbol in condition.symbols:
        args = ",".join(f"x{i}" for i in range(1, symbol.arity + 1))
        lines.append(f"{symbol.name}({args}) = {witness.term(symbol.name)}")
    return "\n".join(lines) + "\n"


def generate_conditions(
    source: str,
    algorithm: Algorithm,
    k_min: int,
    k_max: int,
) -> List[MalcevCondition]:
    """One condition for a +-free inequality, else one per k in k_min..k_max."""
    ineq = parse_inequality(source)
    if algorithm == Algorithm.CRR:
        if ineq.rhs.is_plus_free():
            return [gen_eqr(ineq.lhs, ineq.rhs)]
        return gen_eqr_family(ineq.lhs, ineq.rhs, k_min, k_max)
    elif algorithm == Algorithm.CLASSIC:
        if ineq.rhs.is_plus_free():
            return [gen_eq(ineq.lhs, ineq.rhs)]
        return gen_eq_family(ineq.lhs, ineq.rhs, k_min, k_max)
    else:
        raise NotImplementedError(f"Algorithm: {algorithm} not implemented.")


def condition_file_name(condition: MalcevCondition, output_format: OutputFormat) -> str:
    slug = slugify(condition.source)
    suffix = output_format.file_suffix
    if condition.k is None:
        return f"{slug}.{suffix}"
    return f"{slug}-k{condition.k}.{suffix}"


def write_conditions(
    conditions: List[MalcevCondition],
    output_dir: Path,
    output_format: OutputFormat,
    prune_trivial: bool = False,
) -> List[Path]:
    output_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for condition in conditions:
        path = output_dir / condition_file_name(condition, output_format)
        path.write_text(render_condition(condition, output_format, prune_trivial))
        logger.debug(f"Wrote {path}")
        paths.append(path)
    return paths


def run_check(
    check: CheckConfig,
    algebra: FiniteAlgebra,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    size_cap: int = DEFAULT_SIZE_CAP,
    threads: int = 1,
) -> CheckVerdict:
    ineq = parse_inequality(check.inequality)
    if check.level == CheckLevel.ALGEBRA:
        return check_algebra(algebra, ineq, check.mode, bound=bound, threads=threads)
    elif check.level == CheckLevel.VARIETY:
        return check_variety(algebra, ineq, check.mode, size_cap=size_cap)
    else:
        raise NotImplementedError(f"Check level: {check.level} not implemented.")


def select_checks(
    check_ids: str, checks: Dict[str, CheckConfig]
) -> Dict[str, CheckConfig]:
    if check_ids.upper() == ALL_CHECKS:
        return checks
    selected = {}
    for check_id in check_ids.split(","):
        key = check_id.strip().upper()
        if key not in checks:
            raise ValueError(
                f"Check ID '{check_id.strip()}' not found in the loaded suite: "
                f"{sorted(checks)}."
            )
        selected[key] = checks[key]
    return selected


def run_suite(
    check_ids: str,
    configs_path: Path,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    size_cap: int = DEFAULT_SIZE_CAP,
    threads: int = 1,
) -> Tuple[List[dict], bool]:
    """Run the selected checks; the bool is False when any verdict misses its `expect`."""
    checks = select_checks(check_ids, load_checks_config(configs_path))
    algebras = load_algebras_config(configs_path)
    results = []
    passed = True
    for check_id, check in checks.items():
        algebra = resolve_algebra(check.algebra, algebras)
        logger.info(
            f"Running check {check_id}: '{check.inequality}' on {algebra.name} "
            f"({check.level.value}, {check.mode.value})"
        )
        verdict = run_check(check, algebra, bound, size_cap, threads)
        matched = check.expect is None or check.expect == verdict.holds
        if not matched:
            logger.error(
                f"Check {check_id} expected holds = {check.expect}, got {verdict.holds}."
            )
        passed = passed and matched
        results.append(
            {
                "check_id": check_id,
                "inequality": check.inequality,
                "algebra": algebra.name,
                "expect": check.expect,
                "matched": matched,
                "verdict": verdict.to_dict(),
            }
        )
    return results, passed

"""posskc: conditional-possibility queries on min-based possibilistic
networks through knowledge compilation.

Three pipelines answer Pi(x|e) on the same network: possibilistic
circuits over an indicator/parameter encoding, logical compilation with
condition/forget/evaluate, and compilation of an equivalent possibilistic
knowledge base.  A brute-force chain-rule oracle serves as ground truth,
and a benchmark harness compares encoding sizes across the pipelines.
"""

from .bench import (
    GenConfig,
    baseline_counts,
    compare_network,
    cross_validate,
    random_network,
    run_comparison,
)
from .circuits import (
    PfEncoding,
    PfPipeline,
    PossCircuit,
    build_circuit,
    encode_pf,
    evaluate_fmin,
    indicator_weights,
    query_pf,
)
from .cnf import Clause, CnfFormula, cnf_stats, parse_dimacs, to_dimacs
from .compiler import DEFAULT_NODE_BUDGET, compile_cnf
from .degrees import SCALE, Degree, ONE, ZERO, complement, min_condition, parse_degree
from .errors import (
    CompileBudgetError,
    DegreeError,
    FormatError,
    NetworkValidationError,
    PosskcError,
    QueryError,
    SizeGuardError,
)
from .logical import LogicalEncoding, LogicalPipeline, encode_logical, explore, query_logical
from .network import (
    PossNetwork,
    chain_rule_joint,
    enumerate_worlds,
    oracle_conditional,
    oracle_possibility,
    parse_network,
    serialize_network,
)
from .nnf import (
    NnfDag,
    condition,
    entails_clause,
    forget,
    is_consistent,
    nnf_stats,
    parse_nnf,
    pi_evaluate,
    smooth,
    validate_properties,
    write_nnf,
)
from .pkb import (
    PkbPipeline,
    PossibilisticBase,
    WeightedFormula,
    encode_pkb,
    parse_base,
    pi_sigma,
    query_pkb,
    serialize_base,
    to_possibilistic_base,
)

__version__ = "0.1.0"

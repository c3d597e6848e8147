"""Pipeline 1: possibilistic circuits over an indicator/parameter CNF.

The network's possibilistic function maps evidence to the joint maximum
of the min of indicator values and table degrees.  Its CNF encoding uses
one evidence indicator per value and parameter variables for the table
entries; compiling the CNF and rereading And as min / Or as max yields a
circuit that evaluates any Pi(term) in one bottom-up pass, with the
indicators switched per query.

Two encoding modes exist.  The plain mode spends one parameter per table
entry and links it biconditionally to its indicators.  The local mode
exploits structure: degree-1 entries vanish, degree-0 entries become
hard clauses, and the remaining entries share one parameter per distinct
degree within each variable's table, linked by a single clause.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import CnfFormula, Indicator, Parameter
from .compiler import DEFAULT_NODE_BUDGET, compile_cnf
from .degrees import Degree, ONE, ZERO, min_condition
from .errors import SizeGuardError
from .network import (
    EventTerm,
    PossNetwork,
    check_event,
    chain_rule_joint,
    enumerate_worlds,
    world_consistent,
)
from .nnf import NnfDag, WeightMap, pi_evaluate

FMIN_WORLD_GUARD = 1 << 20
"""evaluate_fmin enumerates instantiations; refuse beyond this many."""


@dataclass
class PfEncoding:
    """Indicator/parameter CNF plus the degree map for its parameters."""

    cnf: CnfFormula
    weight_map: WeightMap
    local_structure: bool
    indicators: dict  # (variable name, value) -> variable id


@dataclass
class PossCircuit:
    """Compiled circuit: decomposable DAG plus base parameter weights."""

    dag: NnfDag
    base_weights: WeightMap


def evaluate_fmin(net: PossNetwork, e: EventTerm) -> Degree:
    """The possibilistic function itself, by explicit enumeration.

    Max over complete instantiations of the min of indicator values
    (1 when the instantiation agrees with e, else 0) and the selected
    table degrees.  Equals the oracle possibility; used as a bridge
    check, not an inference engine.
    """
    check_event(net, e)
    count = 1
    for v in net.variables:
        count *= len(v.domain)
        if count > FMIN_WORLD_GUARD:
            raise SizeGuardError(f"f_min enumeration beyond {FMIN_WORLD_GUARD} worlds")
    best = ZERO
    for w in enumerate_worlds(net):
        if not world_consistent(w, e):
            continue
        d = chain_rule_joint(net, w)
        if d > best:
            best = d
            if best == ONE:
                break
    return best


def encode_pf(net: PossNetwork, local_structure: bool = True) -> PfEncoding:
    """CNF encoding of the possibilistic function.

    Indicator block per variable: one at-least-one clause over its
    indicators and one at-most-one clause per value pair.  Entry clauses
    follow table order; see the module docstring for the two modes.
    """
    f = CnfFormula()
    indicators: dict = {}
    for v in net.variables:
        for val in v.domain:
            indicators[(v.name, val)] = f.new_var(Indicator(v.name, val))
    weight_map: WeightMap = {}

    theta_ids: dict = {}
    if local_structure:
        for v in net.variables:
            degrees = sorted(
                {
                    d
                    for d in net.cpt[v.name].values()
                    if ZERO < d < ONE
                },
                reverse=True,
            )
            for d in degrees:
                vid = f.new_var(Parameter(v.name, d))
                theta_ids[(v.name, d)] = vid
                weight_map[vid] = d
    else:
        for v in net.variables:
            for cfg in net.parent_configs(v.name):
                for val in v.domain:
                    d = net.cpt[v.name][(val, cfg)]
                    owner = f"{v.name}={val}|{','.join(cfg)}"
                    vid = f.new_var(Parameter(owner, d))
                    theta_ids[(v.name, val, cfg)] = vid
                    weight_map[vid] = d

    for v in net.variables:
        lams = [indicators[(v.name, val)] for val in v.domain]
        f.add_clause(lams)
        for i in range(len(lams)):
            for j in range(i + 1, len(lams)):
                f.add_clause([-lams[i], -lams[j]])

    for v in net.variables:
        pnames = net.parents[v.name]
        for cfg in net.parent_configs(v.name):
            neg_parents = [
                -indicators[(p, pv)] for p, pv in zip(pnames, cfg)
            ]
            for val in v.domain:
                d = net.cpt[v.name][(val, cfg)]
                lam = indicators[(v.name, val)]
                if local_structure:
                    if d == ONE:
                        continue
                    if d == ZERO:
                        f.add_clause([-lam, *neg_parents])
                    else:
                        f.add_clause([-lam, *neg_parents, theta_ids[(v.name, d)]])
                else:
                    theta = theta_ids[(v.name, val, cfg)]
                    f.add_clause([-lam, *neg_parents, theta])
                    f.add_clause([-theta, lam])
                    for p, pv in zip(pnames, cfg):
                        f.add_clause([-theta, indicators[(p, pv)]])
    return PfEncoding(f, weight_map, local_structure, indicators)


def build_circuit(enc: PfEncoding, node_budget: int = DEFAULT_NODE_BUDGET) -> PossCircuit:
    """Compile the encoding; budget failures propagate loudly."""
    return PossCircuit(compile_cnf(enc.cnf, node_budget=node_budget), dict(enc.weight_map))


def indicator_weights(enc: PfEncoding, term: EventTerm) -> WeightMap:
    """Per-query weights: an indicator weighs 1 when its value is
    consistent with the conditioning term, 0 when the term excludes it."""
    w: WeightMap = dict(enc.weight_map)
    for (var, val), vid in enc.indicators.items():
        if var in term and term[var] != val:
            w[vid] = ZERO
        else:
            w[vid] = ONE
    return w


class PfPipeline:
    """Compile once, then answer any number of queries on the circuit."""

    def __init__(
        self,
        net: PossNetwork,
        local_structure: bool = True,
        node_budget: int = DEFAULT_NODE_BUDGET,
    ):
        self.net = net
        self.encoding = encode_pf(net, local_structure)
        self.circuit = build_circuit(self.encoding, node_budget=node_budget)

    def possibility(self, term: EventTerm) -> Degree:
        """Pi(term) in one evaluation pass over the circuit."""
        check_event(self.net, term)
        return pi_evaluate(self.circuit.dag, indicator_weights(self.encoding, term))

    def query(self, x: EventTerm, e: EventTerm) -> Degree:
        """Pi(x|e) from two evaluation passes and min-conditioning."""
        check_event(self.net, x)
        check_event(self.net, e)
        if any(var in e and e[var] != val for var, val in x.items()):
            joint = ZERO
        else:
            joint = self.possibility({**e, **x})
        return min_condition(joint, self.possibility(e))


def query_pf(
    net: PossNetwork,
    x: EventTerm,
    e: EventTerm,
    local_structure: bool = True,
) -> Degree:
    """One-shot convenience wrapper around PfPipeline."""
    return PfPipeline(net, local_structure).query(x, e)

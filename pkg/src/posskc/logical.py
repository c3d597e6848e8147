"""Pipeline 2: logical encoding explored by condition, forget, evaluate.

The network becomes a CNF over instance propositions and one global
parameter proposition per distinct degree strictly between 0 and 1:
every table entry with such a degree d contributes the single clause
(not u1 or ... or not um or not x or theta_d), degree-0 entries
contribute the hard clause without the parameter, and degree-1 entries
contribute nothing.  After compiling once, Pi(term) is answered by
conditioning on the term's instance literals, forgetting every instance
variable, and evaluating the remaining parameter structure with max-min.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import CnfFormula, Parameter
from .compiler import DEFAULT_NODE_BUDGET, compile_cnf
from .degrees import Degree, ONE, ZERO, min_condition
from .encodings import InstanceMap
from .network import EventTerm, PossNetwork, check_event
from .nnf import NnfDag, WeightMap, condition, forget, pi_evaluate


@dataclass
class LogicalEncoding:
    """Instance/parameter CNF with the degree map for its parameters."""

    cnf: CnfFormula
    imap: InstanceMap
    delta_vars: frozenset
    theta_weights: WeightMap


def encode_logical(net: PossNetwork) -> LogicalEncoding:
    """Build the logical CNF; parameter ids run by descending degree."""
    f = CnfFormula()
    imap = InstanceMap(net, f)
    distinct = sorted(
        {d for v in net.variables for d in net.cpt[v.name].values() if ZERO < d < ONE},
        reverse=True,
    )
    theta: dict[Degree, int] = {}
    weights: WeightMap = {}
    for d in distinct:
        vid = f.new_var(Parameter("*", d))
        theta[d] = vid
        weights[vid] = d
    for v in net.variables:
        pnames = net.parents[v.name]
        for cfg in net.parent_configs(v.name):
            neg_parents = [-imap.literal(p, pv) for p, pv in zip(pnames, cfg)]
            for val in v.domain:
                d = net.cpt[v.name][(val, cfg)]
                if d == ONE:
                    continue
                head = [*neg_parents, -imap.literal(v.name, val)]
                if d == ZERO:
                    f.add_clause(head)
                else:
                    f.add_clause([*head, theta[d]])
    for c in imap.exactly_one_clauses():
        f.add_clause(c)
    return LogicalEncoding(f, imap, frozenset(imap.all_vars()), weights)


def explore(compiled: NnfDag, enc: LogicalEncoding, term: EventTerm) -> Degree:
    """Pi(term): condition on the term, forget the instance layer, evaluate."""
    check_event(enc.imap.net, term)
    lits = enc.imap.term_literals(term)
    conditioned = condition(compiled, lits)
    projected = forget(conditioned, enc.delta_vars)
    return pi_evaluate(projected, enc.theta_weights)


class LogicalPipeline:
    """Compile once, then answer queries by condition/forget/evaluate."""

    def __init__(self, net: PossNetwork, node_budget: int = DEFAULT_NODE_BUDGET):
        self.net = net
        self.encoding = encode_logical(net)
        self.dag = compile_cnf(self.encoding.cnf, node_budget=node_budget)

    def possibility(self, term: EventTerm) -> Degree:
        return explore(self.dag, self.encoding, term)

    def query(self, x: EventTerm, e: EventTerm) -> Degree:
        check_event(self.net, x)
        check_event(self.net, e)
        if any(var in e and e[var] != val for var, val in x.items()):
            joint = ZERO
        else:
            joint = self.possibility({**e, **x})
        return min_condition(joint, self.possibility(e))


def query_logical(net: PossNetwork, x: EventTerm, e: EventTerm) -> Degree:
    """One-shot convenience wrapper around LogicalPipeline."""
    return LogicalPipeline(net).query(x, e)

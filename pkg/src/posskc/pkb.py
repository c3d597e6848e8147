"""Pipeline 3: possibilistic-knowledge-base compilation.

Every table entry with degree below 1 becomes a weighted clause (negate
the entry's value and its parent values) whose weight is one minus the
degree; the resulting base induces the same joint distribution as the
network.  The base compiles to CNF by tagging each weighted clause with
a level variable shared by all clauses of equal weight, and queries run
level by level on the compiled DAG: activate strata from the strongest
down by conditioning away their level variables, and stop when the
evidence plus active strata refute the target.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import Clause, CnfFormula, Level
from .compiler import DEFAULT_NODE_BUDGET, compile_cnf
from .degrees import Degree, ONE, ZERO, complement, parse_degree
from .encodings import InstanceMap
from .errors import DegreeError, FormatError
from .network import EventTerm, PossNetwork, World, check_event
from .nnf import NnfDag, condition, entails_clause, is_consistent


@dataclass(frozen=True)
class WeightedFormula:
    """A clause over instance literals, necessary to degree ``weight``."""

    clause: Clause
    weight: Degree

    def __post_init__(self) -> None:
        if self.weight == ZERO:
            raise ValueError("weighted formulas carry nonzero weight")


@dataclass
class PossibilisticBase:
    """Weighted clauses plus their descending ladder of distinct weights.

    Weight-1 formulas are hard knowledge and stay outside the ladder.
    The instance map ties clause literals back to network values.
    """

    formulas: tuple[WeightedFormula, ...]
    levels: tuple[Degree, ...]
    imap: InstanceMap

    def hard_formulas(self) -> tuple[WeightedFormula, ...]:
        return tuple(wf for wf in self.formulas if wf.weight == ONE)


def to_possibilistic_base(net: PossNetwork) -> PossibilisticBase:
    """Transform a network into its equivalent possibilistic base."""
    skeleton = CnfFormula()
    imap = InstanceMap(net, skeleton)
    formulas: list[WeightedFormula] = []
    for v in net.variables:
        pnames = net.parents[v.name]
        for cfg in net.parent_configs(v.name):
            neg_parents = [-imap.literal(p, pv) for p, pv in zip(pnames, cfg)]
            for val in v.domain:
                d = net.cpt[v.name][(val, cfg)]
                if d == ONE:
                    continue
                clause = Clause([-imap.literal(v.name, val), *neg_parents])
                formulas.append(WeightedFormula(clause, complement(d)))
    levels = tuple(
        sorted({wf.weight for wf in formulas if wf.weight < ONE}, reverse=True)
    )
    return PossibilisticBase(tuple(formulas), levels, imap)


def pi_sigma(base: PossibilisticBase, w: World) -> Degree:
    """Joint degree induced by the base: 1 when the world satisfies every
    formula, else one minus the largest violated weight."""
    net = base.imap.net
    assignment: dict[int, bool] = {}
    for v in net.variables:
        for val in v.domain:
            lit = base.imap.literal(v.name, val)
            assignment[abs(lit)] = (lit > 0) == (w[v.name] == val)
    worst: Degree | None = None
    for wf in base.formulas:
        satisfied = any(assignment[abs(l)] == (l > 0) for l in wf.clause)
        if not satisfied and (worst is None or wf.weight > worst):
            worst = wf.weight
    return ONE if worst is None else complement(worst)


def encode_pkb(base: PossibilisticBase) -> CnfFormula:
    """Level-variable CNF of the base.

    One level variable per distinct sub-1 weight (rank by descending
    weight); each weighted clause is disjoined with its level variable,
    hard clauses pass through, exactly-one clauses append as hard ones.
    """
    f = CnfFormula()
    imap = InstanceMap(base.imap.net, f)
    level_var: dict[Degree, int] = {}
    for rank, weight in enumerate(base.levels, start=1):
        level_var[weight] = f.new_var(Level(rank, weight))
    for wf in base.formulas:
        if wf.weight == ONE:
            f.add_clause(wf.clause)
        else:
            f.add_clause([*wf.clause.literals, level_var[wf.weight]])
    for c in imap.exactly_one_clauses():
        f.add_clause(c)
    return f


def serialize_base(base: PossibilisticBase) -> str:
    """One line per formula: space-separated literals, colon, weight.

    Positive instance literals print as VAR=value; negative literals of
    binary variables print as the opposite value, other negatives as
    !VAR=value.  Hard formulas carry weight 1.
    """
    net = base.imap.net
    names: dict[int, str] = {}
    for v in net.variables:
        if len(v.domain) == 2:
            vid = base.imap.literal(v.name, v.domain[0])
            names[vid] = f"{v.name}={v.domain[0]}"
            names[-vid] = f"{v.name}={v.domain[1]}"
        else:
            for val in v.domain:
                vid = base.imap.literal(v.name, val)
                names[vid] = f"{v.name}={val}"
                names[-vid] = f"!{v.name}={val}"
    lines = []
    for wf in base.formulas:
        lines.append(" ".join(names[l] for l in wf.clause) + f" : {wf.weight}")
    return "\n".join(lines) + "\n"


def parse_base(text: str, net: PossNetwork) -> PossibilisticBase:
    """Parse the base serialization against a known network."""
    skeleton = CnfFormula()
    imap = InstanceMap(net, skeleton)
    formulas: list[WeightedFormula] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, sep, rhs = line.rpartition(":")
        if not sep:
            raise FormatError(f"missing ':' separator: {line!r}", ln)
        try:
            weight = parse_degree(rhs.strip())
        except DegreeError as exc:
            raise FormatError(f"bad weight: {exc}", ln) from exc
        lits: list[int] = []
        for tok in lhs.split():
            negated = tok.startswith("!")
            body = tok[1:] if negated else tok
            var, sep2, val = body.partition("=")
            if not sep2:
                raise FormatError(f"bad literal token {tok!r}", ln)
            try:
                lit = imap.literal(var, val)
            except KeyError as exc:
                raise FormatError(f"unknown literal {tok!r}", ln) from exc
            lits.append(-lit if negated else lit)
        try:
            formulas.append(WeightedFormula(Clause(lits), weight))
        except ValueError as exc:
            raise FormatError(str(exc), ln) from exc
    levels = tuple(
        sorted({wf.weight for wf in formulas if wf.weight < ONE}, reverse=True)
    )
    return PossibilisticBase(tuple(formulas), levels, imap)


class PkbPipeline:
    """Compile the level-variable CNF once; query level by level."""

    def __init__(self, net: PossNetwork, node_budget: int = DEFAULT_NODE_BUDGET):
        self.net = net
        self.base = to_possibilistic_base(net)
        self.cnf = encode_pkb(self.base)
        self.dag = compile_cnf(self.cnf, node_budget=node_budget)
        by_weight = {
            v.role.weight: v.id for v in self.cnf.variables if isinstance(v.role, Level)
        }
        self.level_vars: tuple[tuple[int, Degree], ...] = tuple(
            (by_weight[w], w) for w in self.base.levels
        )
        self.imap = self.base.imap

    def query_detail(self, x: EventTerm, e: EventTerm) -> tuple[Degree, int]:
        """Pi(x|e) plus the number of level iterations performed.

        Two hard-level pre-checks precede the level loop: impossible
        evidence yields 1 outright, and a target refuted by the hard
        knowledge (or conflicting with the evidence) yields 0.  The loop
        then activates strata from the strongest weight down; entering
        stratum i means the evidence stays possible there, and if the
        target is refuted by the activated knowledge the answer is one
        minus that stratum's weight.
        """
        check_event(self.net, x)
        check_event(self.net, e)
        e_lits = self.imap.term_literals(e)
        x_lits = self.imap.term_literals(x)
        not_e = [-l for l in e_lits]
        not_x = Clause([-l for l in x_lits])
        if not is_consistent(condition(self.dag, e_lits)):
            return ONE, 0
        conflict = any(var in e and e[var] != val for var, val in x.items())
        if conflict or not is_consistent(condition(self.dag, sorted(set(e_lits + x_lits)))):
            return ZERO, 0
        k = self.dag
        iterations = 0
        for level_id, weight in self.level_vars:
            iterations += 1
            if entails_clause(k, Clause([level_id, *not_e])):
                return ONE, iterations
            k = condition(k, [-level_id])
            if entails_clause(condition(k, e_lits), not_x):
                return complement(weight), iterations
        return ONE, iterations

    def query(self, x: EventTerm, e: EventTerm) -> Degree:
        return self.query_detail(x, e)[0]

    def possibility(self, term: EventTerm) -> Degree:
        """Pi(term), as the conditional against empty evidence."""
        return self.query(term, {})


def query_pkb(net: PossNetwork, x: EventTerm, e: EventTerm) -> Degree:
    """One-shot convenience wrapper around PkbPipeline."""
    return PkbPipeline(net).query(x, e)

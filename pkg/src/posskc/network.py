"""Min-based possibilistic networks: data model, PNET text format, and
the brute-force oracle used as ground truth everywhere.

A network is a DAG of finite-domain variables, each carrying a
conditional possibility table normalized so that for every parent
configuration the maximum entry over the variable's own values is 1.
The joint possibility of a complete world is the minimum of the selected
table entries (the min-based chain rule), and the oracle computes event
possibilities by explicit maximization over worlds.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping

from .degrees import Degree, ONE, ZERO, min_condition, parse_degree
from .errors import DegreeError, FormatError, NetworkValidationError, QueryError

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

World = dict  # variable name -> domain value, total over the network
EventTerm = Mapping  # variable name -> domain value, partial (possibly empty)

CptKey = tuple  # (own value, tuple of parent values in parents order)


@dataclass(frozen=True)
class NetVariable:
    """A finite-domain network variable with an ordered domain."""

    name: str
    domain: tuple[str, ...]

    def __post_init__(self) -> None:
        if not _IDENT_RE.match(self.name):
            raise NetworkValidationError(f"bad variable name {self.name!r}")
        if len(self.domain) < 2:
            raise NetworkValidationError(f"variable {self.name} needs at least 2 values")
        if len(set(self.domain)) != len(self.domain):
            raise NetworkValidationError(f"variable {self.name} has duplicate values")
        for v in self.domain:
            if not _IDENT_RE.match(v):
                raise NetworkValidationError(f"bad value name {v!r} for variable {self.name}")


class PossNetwork:
    """An immutable, validated min-based possibilistic network."""

    def __init__(
        self,
        name: str,
        variables: list[NetVariable] | tuple[NetVariable, ...],
        parents: Mapping[str, tuple[str, ...]],
        cpt: Mapping[str, Mapping[CptKey, Degree]],
    ):
        self.name = name
        self.variables: tuple[NetVariable, ...] = tuple(variables)
        self._by_name = {v.name: v for v in self.variables}
        self.parents: dict[str, tuple[str, ...]] = {
            v.name: tuple(parents.get(v.name, ())) for v in self.variables
        }
        self.cpt: dict[str, dict[CptKey, Degree]] = {
            v.name: dict(cpt.get(v.name, {})) for v in self.variables
        }
        self._validate(name)
        self.topo_order: tuple[str, ...] = self._topological_order()

    def variable(self, name: str) -> NetVariable:
        try:
            return self._by_name[name]
        except KeyError:
            raise NetworkValidationError(f"unknown variable {name!r}") from None

    def domain_of(self, name: str) -> tuple[str, ...]:
        return self.variable(name).domain

    @property
    def var_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def parent_configs(self, name: str) -> Iterator[tuple[str, ...]]:
        """Parent-value tuples in file order: first parent varies fastest."""
        doms = [self._by_name[p].domain for p in self.parents[name]]
        for rev in itertools.product(*reversed(doms)):
            yield tuple(reversed(rev))

    def _validate(self, name: str) -> None:
        if not _IDENT_RE.match(name):
            raise NetworkValidationError(f"bad network name {name!r}")
        if len(self._by_name) != len(self.variables):
            seen: set[str] = set()
            for v in self.variables:
                if v.name in seen:
                    raise NetworkValidationError(f"duplicate variable {v.name}")
                seen.add(v.name)
        for child, ps in self.parents.items():
            if len(set(ps)) != len(ps):
                raise NetworkValidationError(f"duplicate parent in {child}'s parent list")
            for p in ps:
                if p not in self._by_name:
                    raise NetworkValidationError(f"unknown parent {p!r} of {child}")
                if p == child:
                    raise NetworkValidationError(f"variable {child} cannot be its own parent")
        self._check_acyclic()
        for v in self.variables:
            table = self.cpt[v.name]
            expected = set()
            for cfg in self.parent_configs(v.name):
                for val in v.domain:
                    expected.add((val, cfg))
            extra = set(table) - expected
            if extra:
                val, cfg = sorted(extra)[0]
                raise NetworkValidationError(
                    f"unexpected CPT entry for {v.name}: value {val!r} under {cfg!r}"
                )
            missing = expected - set(table)
            if missing:
                val, cfg = sorted(missing)[0]
                raise NetworkValidationError(
                    f"missing CPT entry for {v.name}: value {val!r} under {cfg!r}"
                )
            for cfg in self.parent_configs(v.name):
                col_max = max(table[(val, cfg)] for val in v.domain)
                if col_max != ONE:
                    where = f" under {' '.join(cfg)}" if cfg else ""
                    raise NetworkValidationError(
                        f"normalization violation in cpt {v.name}{where}: "
                        f"max over values is {col_max}, expected 1"
                    )

    def _check_acyclic(self) -> None:
        indeg = {v.name: len(self.parents[v.name]) for v in self.variables}
        children: dict[str, list[str]] = {v.name: [] for v in self.variables}
        for child, ps in self.parents.items():
            for p in ps:
                children[p].append(child)
        queue = [n for n, d in indeg.items() if d == 0]
        seen = 0
        while queue:
            n = queue.pop()
            seen += 1
            for c in children[n]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    queue.append(c)
        if seen != len(self.variables):
            cyclic = sorted(n for n, d in indeg.items() if d > 0)
            raise NetworkValidationError(f"parent relation has a cycle through {cyclic}")

    def _topological_order(self) -> tuple[str, ...]:
        order: list[str] = []
        placed: set[str] = set()
        pending = list(self.var_names)
        while pending:
            rest = []
            for n in pending:
                if all(p in placed for p in self.parents[n]):
                    order.append(n)
                    placed.add(n)
                else:
                    rest.append(n)
            pending = rest
        return tuple(order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PossNetwork):
            return NotImplemented
        return (
            self.name == other.name
            and self.variables == other.variables
            and self.parents == other.parents
            and self.cpt == other.cpt
        )

    def __repr__(self) -> str:
        return f"PossNetwork({self.name!r}, {len(self.variables)} variables)"


def check_event(net: PossNetwork, term: EventTerm) -> None:
    """Validate an event term against the network's variables and domains."""
    for var, val in term.items():
        if var not in net._by_name:
            raise QueryError(f"unknown variable {var!r}")
        if val not in net.domain_of(var):
            raise QueryError(f"unknown value {val!r} for variable {var}")


def enumerate_worlds(net: PossNetwork) -> Iterator[World]:
    """Every complete world exactly once, lexicographic in declaration and
    domain order.  Cost is the product of domain sizes; desk scale only."""
    names = net.var_names
    for combo in itertools.product(*(net.domain_of(n) for n in names)):
        yield dict(zip(names, combo))


def chain_rule_joint(net: PossNetwork, w: World) -> Degree:
    """Joint possibility of a complete world: min of selected CPT entries."""
    best = ONE
    for v in net.variables:
        cfg = tuple(w[p] for p in net.parents[v.name])
        d = net.cpt[v.name][(w[v.name], cfg)]
        if d < best:
            best = d
    return best


def world_consistent(w: World, e: EventTerm) -> bool:
    return all(w[var] == val for var, val in e.items())


def oracle_possibility(net: PossNetwork, e: EventTerm) -> Degree:
    """Pi(e) by explicit maximization of the chain rule over worlds."""
    check_event(net, e)
    best = ZERO
    for w in enumerate_worlds(net):
        if world_consistent(w, e):
            d = chain_rule_joint(net, w)
            if d > best:
                best = d
                if best == ONE:
                    break
    return best


def oracle_conditional(net: PossNetwork, x: EventTerm, e: EventTerm) -> Degree:
    """Pi(x|e) by min-conditioning the oracle marginals.

    Conflicting assignments between x and e make the joint impossible
    (degree 0) rather than an error.
    """
    check_event(net, x)
    check_event(net, e)
    conflict = any(var in e and e[var] != val for var, val in x.items())
    if conflict:
        joint = ZERO
    else:
        joint = oracle_possibility(net, {**e, **x})
    return min_condition(joint, oracle_possibility(net, e))


def parse_network(text: str) -> PossNetwork:
    """Parse the PNET line-oriented text format.

    Layout: a ``network <name>`` line, then ``var <name> <v1> <v2> ...``
    declarations, optional ``parents <var> <p1> ...`` lines (roots omit
    theirs), and one ``cpt <var>`` block per variable whose entries read
    ``value | pval1 pval2 ... : degree`` (root entries omit the bar).
    ``#`` starts a comment; parent values follow the declaration order.
    """
    name: str | None = None
    variables: list[NetVariable] = []
    var_names: set[str] = set()
    parents: dict[str, tuple[str, ...]] = {}
    cpt: dict[str, dict[CptKey, Degree]] = {}
    current_cpt: str | None = None

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "network":
            if name is not None:
                raise FormatError("duplicate 'network' line", ln)
            if len(tokens) != 2:
                raise FormatError("expected 'network <name>'", ln)
            name = tokens[1]
            current_cpt = None
        elif head == "var":
            if len(tokens) < 4:
                raise FormatError("expected 'var <name> <v1> <v2> ...' with at least 2 values", ln)
            current_cpt = None
            vname = tokens[1]
            if vname in var_names:
                raise NetworkValidationError(f"duplicate variable {vname} (line {ln})")
            try:
                variables.append(NetVariable(vname, tuple(tokens[2:])))
            except NetworkValidationError as exc:
                raise FormatError(str(exc), ln) from exc
            var_names.add(vname)
        elif head == "parents":
            if len(tokens) < 3:
                raise FormatError("expected 'parents <var> <p1> ...'", ln)
            current_cpt = None
            child = tokens[1]
            if child not in var_names:
                raise NetworkValidationError(f"parents for unknown variable {child!r} (line {ln})")
            if child in parents:
                raise NetworkValidationError(f"duplicate parents line for {child} (line {ln})")
            parents[child] = tuple(tokens[2:])
        elif head == "cpt":
            if len(tokens) != 2:
                raise FormatError("expected 'cpt <var>'", ln)
            target = tokens[1]
            if target not in var_names:
                raise NetworkValidationError(f"cpt for unknown variable {target!r} (line {ln})")
            if target in cpt:
                raise NetworkValidationError(f"duplicate cpt block for {target} (line {ln})")
            cpt[target] = {}
            current_cpt = target
        else:
            if current_cpt is None:
                raise FormatError(f"unexpected line {line!r} (no open cpt block)", ln)
            if ":" not in line:
                raise FormatError(f"cpt entry missing ':' separator: {line!r}", ln)
            lhs, _, rhs = line.rpartition(":")
            try:
                degree = parse_degree(rhs.strip())
            except DegreeError as exc:
                raise FormatError(str(exc), ln) from exc
            lhs = lhs.strip()
            if "|" in lhs:
                val_part, _, par_part = lhs.partition("|")
                own = val_part.strip()
                cfg = tuple(par_part.split())
            else:
                own = lhs
                cfg = ()
            if not own or len(own.split()) != 1:
                raise FormatError(f"cpt entry needs exactly one own value: {line!r}", ln)
            key = (own, cfg)
            if key in cpt[current_cpt]:
                raise NetworkValidationError(
                    f"duplicate CPT entry for {current_cpt}: {own} | {' '.join(cfg)} (line {ln})"
                )
            cpt[current_cpt][key] = degree

    if name is None:
        raise FormatError("missing 'network' line")
    return PossNetwork(name, variables, parents, cpt)


def serialize_network(net: PossNetwork) -> str:
    """Serialize to PNET text; parse(serialize(net)) == net byte-stably."""
    out = [f"network {net.name}"]
    for v in net.variables:
        out.append("var " + v.name + " " + " ".join(v.domain))
    for v in net.variables:
        if net.parents[v.name]:
            out.append("parents " + v.name + " " + " ".join(net.parents[v.name]))
    for v in net.variables:
        out.append("cpt " + v.name)
        for cfg in net.parent_configs(v.name):
            for val in v.domain:
                d = net.cpt[v.name][(val, cfg)]
                if cfg:
                    out.append(f"{val} | {' '.join(cfg)} : {d}")
                else:
                    out.append(f"{val} : {d}")
    return "\n".join(out) + "\n"

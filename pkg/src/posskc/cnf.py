"""Role-tagged propositional CNF, brute-force model enumeration, and
DIMACS interchange.

Variables carry a semantic role (network-instance proposition, evidence
indicator, weighted parameter, or stratum level variable) directly in the
formula so that the weight map needed for circuit evaluation can be
rebuilt from a serialized encoding alone.  Literals are plain signed
integers: ``+v`` is the positive literal of variable ``v``, ``-v`` its
negation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .degrees import Degree, parse_degree
from .errors import FormatError, SizeGuardError

ENUMERATION_GUARD = 24
"""enumerate_models refuses formulas with more variables than this."""


@dataclass(frozen=True)
class Instance:
    """Proposition standing for a network variable taking a value."""

    var: str
    value: str

    def label(self) -> str:
        return f"{self.var}={self.value}"


@dataclass(frozen=True)
class Indicator:
    """Evidence indicator: switches a network value on or off per query."""

    var: str
    value: str

    def label(self) -> str:
        return f"lambda[{self.var}={self.value}]"


@dataclass(frozen=True)
class Parameter:
    """Weighted parameter carrying a possibility degree into the encoding.

    ``owner`` scopes the sharing: a network-variable name when parameters
    are shared per distribution, an entry key when one parameter stands
    for a single table entry, or ``*`` when shared across the network.
    """

    owner: str
    degree: Degree

    def label(self) -> str:
        return f"theta[{self.owner}:{self.degree}]"


@dataclass(frozen=True)
class Level:
    """Stratum variable tagging all base formulas of one weight."""

    rank: int
    weight: Degree

    def label(self) -> str:
        return f"A{self.rank}"


Role = Union[Instance, Indicator, Parameter, Level]


@dataclass(frozen=True)
class PropVariable:
    id: int
    role: Role | None = None

    def label(self) -> str:
        return self.role.label() if self.role is not None else f"v{self.id}"


@dataclass(frozen=True)
class Clause:
    """A disjunction of literals, stored sorted by variable then sign.

    The empty clause (false) is representable.  A clause may contain a
    variable with both signs (a tautology); such clauses are legal as
    standalone query objects but are rejected inside a CnfFormula.
    """

    literals: tuple[int, ...]

    def __init__(self, literals: Iterable[int]):
        lits = sorted(set(literals), key=lambda l: (abs(l), l > 0))
        if any(l == 0 for l in lits):
            raise ValueError("0 is not a literal")
        object.__setattr__(self, "literals", tuple(lits))

    def is_tautology(self) -> bool:
        seen = set(self.literals)
        return any(-l in seen for l in self.literals)

    def variables(self) -> set[int]:
        return {abs(l) for l in self.literals}

    def __iter__(self) -> Iterator[int]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)


Interpretation = dict  # variable id -> bool, total over the registry


class CnfFormula:
    """A clause set over a dense registry of role-tagged variables.

    Mutable while being built (new_var / add_clause); treated as frozen
    once handed to the compiler or serialized.
    """

    def __init__(self) -> None:
        self._variables: list[PropVariable] = []
        self._clauses: list[Clause] = []

    @property
    def variables(self) -> tuple[PropVariable, ...]:
        return tuple(self._variables)

    @property
    def clauses(self) -> tuple[Clause, ...]:
        return tuple(self._clauses)

    @property
    def num_vars(self) -> int:
        return len(self._variables)

    @property
    def num_clauses(self) -> int:
        return len(self._clauses)

    def var(self, vid: int) -> PropVariable:
        if not 1 <= vid <= len(self._variables):
            raise KeyError(f"variable {vid} not registered")
        return self._variables[vid - 1]

    def new_var(self, role: Role | None = None) -> int:
        vid = len(self._variables) + 1
        self._variables.append(PropVariable(vid, role))
        return vid

    def add_clause(self, literals: Iterable[int]) -> Clause:
        cl = literals if isinstance(literals, Clause) else Clause(literals)
        for l in cl:
            if not 1 <= abs(l) <= len(self._variables):
                raise ValueError(f"literal {l} names an unregistered variable")
        if cl.is_tautology():
            raise ValueError(f"tautological clause {cl.literals} not allowed in a formula")
        self._clauses.append(cl)
        return cl

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CnfFormula):
            return NotImplemented
        return self._variables == other._variables and self._clauses == other._clauses

    def __repr__(self) -> str:
        return f"CnfFormula(vars={self.num_vars}, clauses={self.num_clauses})"


def cnf_stats(f: CnfFormula) -> dict:
    return {"vars": f.num_vars, "clauses": f.num_clauses}


def satisfies_clause(clause: Clause, interp: Interpretation) -> bool:
    return any(interp[abs(l)] == (l > 0) for l in clause)


def satisfies(f: CnfFormula, interp: Interpretation) -> bool:
    return all(satisfies_clause(c, interp) for c in f.clauses)


def model_mask(f: CnfFormula) -> int:
    """Model set of ``f`` as a bitmask over all 2**n assignments.

    Assignment index m encodes variable i as bit (n - i) of m, so
    ascending bit positions enumerate assignments in lexicographic order
    with variable 1 most significant and False before True.  Built from
    per-literal subcube masks with big-integer AND/OR, which keeps the
    brute-force oracle fast enough for sweep-scale testing.
    """
    n = f.num_vars
    if n > ENUMERATION_GUARD:
        raise SizeGuardError(f"model enumeration over {n} variables exceeds guard {ENUMERATION_GUARD}")
    total = 1 << (1 << n)
    full = total - 1
    pos = {}
    for i in range(1, n + 1):
        b = 1 << (n - i)
        unit = ((1 << b) - 1) << b
        rep = full // ((1 << (2 * b)) - 1)
        pos[i] = rep * unit
    mask = full
    for c in f.clauses:
        cm = 0
        for l in c:
            cm |= pos[abs(l)] if l > 0 else (full ^ pos[abs(l)])
        mask &= cm
    return mask


def enumerate_models(f: CnfFormula) -> Iterator[Interpretation]:
    """Yield exactly the satisfying total interpretations, lexicographic.

    Guarded at ENUMERATION_GUARD variables; cost is exponential by design
    (this is the test oracle, not an inference procedure).
    """
    n = f.num_vars
    mask = model_mask(f)
    while mask:
        lsb = mask & -mask
        m = lsb.bit_length() - 1
        yield {i: bool((m >> (n - i)) & 1) for i in range(1, n + 1)}
        mask ^= lsb


def _role_tokens(role: Role) -> list[str]:
    if isinstance(role, Instance):
        return ["instance", role.var, role.value]
    if isinstance(role, Indicator):
        return ["indicator", role.var, role.value]
    if isinstance(role, Parameter):
        return ["parameter", role.owner, str(role.degree)]
    if isinstance(role, Level):
        return ["level", str(role.rank), str(role.weight)]
    raise TypeError(f"unknown role {role!r}")


def _parse_role(tokens: list[str], line_no: int) -> Role:
    kind = tokens[0]
    try:
        if kind == "instance" and len(tokens) == 3:
            return Instance(tokens[1], tokens[2])
        if kind == "indicator" and len(tokens) == 3:
            return Indicator(tokens[1], tokens[2])
        if kind == "parameter" and len(tokens) == 3:
            return Parameter(tokens[1], parse_degree(tokens[2]))
        if kind == "level" and len(tokens) == 3:
            return Level(int(tokens[1]), parse_degree(tokens[2]))
    except ValueError as exc:
        raise FormatError(f"bad role annotation {' '.join(tokens)!r}: {exc}", line_no) from exc
    raise FormatError(f"bad role annotation {' '.join(tokens)!r}", line_no)


def to_dimacs(f: CnfFormula) -> str:
    """Serialize with role metadata in ``c var <id> <role> ...`` comments."""
    out = []
    for v in f.variables:
        if v.role is not None:
            out.append("c var " + str(v.id) + " " + " ".join(_role_tokens(v.role)))
    out.append(f"p cnf {f.num_vars} {f.num_clauses}")
    for c in f.clauses:
        out.append(" ".join(str(l) for l in c.literals) + " 0")
    return "\n".join(out) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    roles: dict[int, Role] = {}
    header: tuple[int, int] | None = None
    lit_tokens: list[tuple[str, int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 4 and parts[1] == "var":
                try:
                    vid = int(parts[2])
                except ValueError as exc:
                    raise FormatError(f"bad variable id in role comment: {parts[2]!r}", ln) from exc
                roles[vid] = _parse_role(parts[3:], ln)
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise FormatError(f"malformed header: {line!r}", ln)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as exc:
                raise FormatError(f"malformed header: {line!r}", ln) from exc
            if header[0] < 0 or header[1] < 0:
                raise FormatError(f"malformed header: {line!r}", ln)
            continue
        if header is None:
            raise FormatError(f"clause before header: {line!r}", ln)
        for tok in line.split():
            lit_tokens.append((tok, ln))
    if header is None:
        raise FormatError("missing 'p cnf' header")
    n_vars, n_clauses = header
    f = CnfFormula()
    for vid in range(1, n_vars + 1):
        f.new_var(roles.pop(vid, None))
    if roles:
        bad = min(roles)
        raise FormatError(f"role comment for variable {bad} beyond declared {n_vars}")
    current: list[int] = []
    for tok, ln in lit_tokens:
        try:
            lit = int(tok)
        except ValueError as exc:
            raise FormatError(f"bad literal token {tok!r}", ln) from exc
        if lit == 0:
            try:
                f.add_clause(current)
            except ValueError as exc:
                raise FormatError(str(exc), ln) from exc
            current = []
        else:
            if not 1 <= abs(lit) <= n_vars:
                raise FormatError(f"literal {lit} beyond declared {n_vars} variables", ln)
            current.append(lit)
    if current:
        raise FormatError("last clause not terminated by 0")
    if f.num_clauses != n_clauses:
        raise FormatError(f"header declares {n_clauses} clauses, found {f.num_clauses}")
    return f

"""Shared brute-force helpers for the test suite.

Everything here works by definition (explicit enumeration or per-literal
subcube masks) so it can serve as an independent oracle for the compiled
structures under test.
"""

from __future__ import annotations

import itertools
import random

from posskc.cnf import Clause, CnfFormula


def all_assignments(n: int):
    """All total assignments over variables 1..n, lexicographic, False first."""
    for bits in itertools.product([False, True], repeat=n):
        yield {i + 1: bits[i] for i in range(n)}


def models_by_definition(f: CnfFormula) -> set:
    """Model set computed by checking every clause on every assignment."""
    out = set()
    for a in all_assignments(f.num_vars):
        if all(any(a[abs(l)] == (l > 0) for l in c) for c in f.clauses):
            out.add(tuple(a[i] for i in range(1, f.num_vars + 1)))
    return out


def interp_key(interp: dict, n: int) -> tuple:
    return tuple(interp[i] for i in range(1, n + 1))


def random_cnf(rng: random.Random, n_vars: int, n_clauses: int, max_len: int = 3) -> CnfFormula:
    """Random non-tautological CNF over exactly n_vars registered variables."""
    f = CnfFormula()
    for _ in range(n_vars):
        f.new_var()
    for _ in range(n_clauses):
        k = rng.randint(1, max_len)
        vs = rng.sample(range(1, n_vars + 1), min(k, n_vars))
        f.add_clause([v if rng.random() < 0.5 else -v for v in vs])
    return f


def conditioned_models(f, term, n):
    """Models of f with the term's literals substituted (term vars free)."""
    base = models_by_definition(f)
    fixed = {abs(l): l > 0 for l in term}
    want = set()
    for a in all_assignments(n):
        b = dict(a)
        b.update(fixed)
        if tuple(b[i] for i in range(1, n + 1)) in base:
            want.add(tuple(a[i] for i in range(1, n + 1)))
    return want


def subcube_patterns(n: int):
    """Bit patterns over all 2**n assignment indices, one per variable.

    Assignment index m encodes variable i as bit (n - i), matching the
    lexicographic convention of posskc.cnf.model_mask.
    """
    total_bits = 1 << n
    full = (1 << total_bits) - 1
    pos = {}
    for i in range(1, n + 1):
        b = 1 << (n - i)
        unit = ((1 << b) - 1) << b
        pos[i] = (full // ((1 << (2 * b)) - 1)) * unit
    return full, pos


def dag_model_mask(dag, n_vars: int) -> int:
    """Model set of an NNF DAG as a bitmask, one bottom-up bigint pass."""
    from posskc.nnf import AndNode, FalseNode, LitNode, OrNode, TrueNode

    full, pos = subcube_patterns(n_vars)
    val = [0] * len(dag.nodes)
    for i, node in enumerate(dag.nodes):
        if isinstance(node, TrueNode):
            val[i] = full
        elif isinstance(node, FalseNode):
            val[i] = 0
        elif isinstance(node, LitNode):
            v = abs(node.lit)
            val[i] = pos[v] if node.lit > 0 else (full ^ pos[v])
        elif isinstance(node, AndNode):
            acc = full
            for c in node.children:
                acc &= val[c]
            val[i] = acc
        elif isinstance(node, OrNode):
            acc = 0
            for c in node.children:
                acc |= val[c]
            val[i] = acc
        else:
            raise TypeError(f"unknown node {node!r}")
    return val[dag.root]


def dag_model_set(dag, n_vars: int) -> set:
    """Model set of an NNF DAG over variables 1..n_vars as bool tuples."""
    mask = dag_model_mask(dag, n_vars)
    out = set()
    while mask:
        lsb = mask & -mask
        m = lsb.bit_length() - 1
        out.add(tuple(bool((m >> (n_vars - i)) & 1) for i in range(1, n_vars + 1)))
        mask ^= lsb
    return out


def dag_satisfied_by(dag, assignment: dict) -> bool:
    from posskc.nnf import AndNode, FalseNode, LitNode, OrNode, TrueNode

    val: list[bool] = [False] * len(dag.nodes)
    for i, node in enumerate(dag.nodes):
        if isinstance(node, TrueNode):
            val[i] = True
        elif isinstance(node, FalseNode):
            val[i] = False
        elif isinstance(node, LitNode):
            val[i] = assignment[abs(node.lit)] == (node.lit > 0)
        elif isinstance(node, AndNode):
            val[i] = all(val[c] for c in node.children)
        elif isinstance(node, OrNode):
            val[i] = any(val[c] for c in node.children)
        else:
            raise TypeError(f"unknown node {node!r}")
    return val[dag.root]


def clause_holds_on(models: set, clause: Clause, n_vars: int) -> bool:
    """Whether every model (as a bool tuple) satisfies the clause."""
    for m in models:
        if not any(m[abs(l) - 1] == (l > 0) for l in clause):
            return False
    return True

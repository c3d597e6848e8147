"""Pipeline 2: logical encoding queried by condition, forget, evaluate."""

import pytest

from posskc.bench import GenConfig, random_network
from posskc.cnf import Clause, Instance, Parameter, cnf_stats
from posskc.compiler import compile_cnf
from posskc.degrees import parse_degree
from posskc.errors import QueryError
from posskc.logical import (
    LogicalPipeline,
    encode_logical,
    explore,
    query_logical,
)
from posskc.network import (
    chain_rule_joint,
    enumerate_worlds,
    oracle_conditional,
    parse_network,
)
from posskc.pkb import encode_pkb, to_possibilistic_base

D = parse_degree


def small_nets(count, max_nodes, seed, binary_only=True):
    nets = []
    for i in range(count):
        n = 2 + (seed + 17 * i) % (max_nodes - 1)
        cfg = GenConfig(
            n_nodes=n, max_parents=3, seed=seed + i, binary_only=binary_only
        )
        nets.append(random_network(cfg))
    return nets


class TestEncodeLogical:
    def test_example_counts(self, alarm):
        enc = encode_logical(alarm)
        assert cnf_stats(enc.cnf) == {"vars": 7, "clauses": 6}

    def test_example_roles(self, alarm):
        enc = encode_logical(alarm)
        roles = [v.role for v in enc.cnf.variables]
        assert sum(isinstance(r, Instance) for r in roles) == 3
        thetas = [r for r in roles if isinstance(r, Parameter)]
        assert [t.degree for t in thetas] == [D("0.8"), D("0.7"), D("0.4"), D("0.2")]
        assert all(t.owner == "*" for t in thetas)

    def test_delta_vars_are_the_instance_layer(self, alarm):
        enc = encode_logical(alarm)
        inst_ids = {
            v.id for v in enc.cnf.variables if isinstance(v.role, Instance)
        }
        assert enc.delta_vars == frozenset(inst_ids)

    def test_theta_weights_map_parameter_ids(self, alarm):
        enc = encode_logical(alarm)
        for vid, d in enc.theta_weights.items():
            role = enc.cnf.var(vid).role
            assert isinstance(role, Parameter)
            assert role.degree == d

    def test_parameters_shared_across_tables(self, alarm):
        # degree 0.4 appears in both B's and D's tables but yields one theta
        enc = encode_logical(alarm)
        thetas = [
            v.role for v in enc.cnf.variables if isinstance(v.role, Parameter)
        ]
        assert len(thetas) == len({t.degree for t in thetas}) == 4

    def test_uniform_single_binary_root(self):
        net = parse_network("network u\nvar X x1 x2\ncpt X\nx1 : 1\nx2 : 1")
        enc = encode_logical(net)
        assert cnf_stats(enc.cnf) == {"vars": 1, "clauses": 0}

    def test_degree_zero_yields_hard_clause(self):
        net = parse_network("network z\nvar X x1 x2\ncpt X\nx1 : 1\nx2 : 0")
        enc = encode_logical(net)
        assert cnf_stats(enc.cnf) == {"vars": 1, "clauses": 1}
        assert enc.cnf.clauses[0] == Clause([1])
        assert enc.theta_weights == {}

    def test_multivalued_gets_exactly_one_block(self):
        net = parse_network(
            "network m\nvar X a b c\ncpt X\na : 1\nb : 0.5\nc : 0.5"
        )
        enc = encode_logical(net)
        # 3 instance vars + 1 theta; 2 entry clauses + 1 ALO + 3 AMO
        assert cnf_stats(enc.cnf) == {"vars": 4, "clauses": 6}


class TestExplore:
    def test_example_joint(self, alarm):
        enc = encode_logical(alarm)
        dag = compile_cnf(enc.cnf)
        assert explore(dag, enc, {"F": "f2", "D": "d1"}) == D("0.4")

    def test_empty_term_is_one(self, alarm):
        enc = encode_logical(alarm)
        dag = compile_cnf(enc.cnf)
        assert explore(dag, enc, {}) == D("1")

    def test_example_pair(self, alarm):
        enc = encode_logical(alarm)
        dag = compile_cnf(enc.cnf)
        assert explore(dag, enc, {"D": "d1", "B": "b1"}) == D("0.7")

    def test_complete_worlds_match_chain_rule(self, alarm):
        enc = encode_logical(alarm)
        dag = compile_cnf(enc.cnf)
        for w in enumerate_worlds(alarm):
            assert explore(dag, enc, w) == chain_rule_joint(alarm, w)

    def test_complete_worlds_on_random_nets(self):
        for net in small_nets(10, 6, seed=19):
            p = LogicalPipeline(net)
            for w in enumerate_worlds(net):
                assert p.possibility(w) == chain_rule_joint(net, w)

    def test_rejects_unknown_variable(self, alarm):
        enc = encode_logical(alarm)
        dag = compile_cnf(enc.cnf)
        with pytest.raises(QueryError):
            explore(dag, enc, {"Q": "q1"})


class TestQueryLogical:
    def test_example_conditional(self, alarm):
        assert query_logical(alarm, {"F": "f2"}, {"D": "d1"}) == D("0.4")

    def test_example_conditional_complement(self, alarm):
        assert query_logical(alarm, {"F": "f1"}, {"D": "d1"}) == D("1")

    def test_marginal(self, alarm):
        assert query_logical(alarm, {"B": "b2"}, {}) == D("0.4")

    def test_contradicting_target_and_evidence(self, alarm):
        assert query_logical(alarm, {"D": "d1"}, {"D": "d2"}) == D("0")

    def test_matches_oracle_on_random_nets(self):
        for net in small_nets(15, 8, seed=211):
            p = LogicalPipeline(net)
            names = [v.name for v in net.variables]
            for qi in range(3):
                tgt = net.variables[qi % len(names)]
                ev = net.variables[(qi + 1) % len(names)]
                x = {tgt.name: tgt.domain[qi % len(tgt.domain)]}
                e = {} if qi == 0 else {ev.name: ev.domain[0]}
                assert p.query(x, e) == oracle_conditional(net, x, e)

    def test_matches_oracle_multivalued(self):
        for net in small_nets(8, 5, seed=83, binary_only=False):
            p = LogicalPipeline(net)
            tgt = net.variables[-1]
            ev = net.variables[0]
            x = {tgt.name: tgt.domain[-1]}
            e = {ev.name: ev.domain[0]} if ev.name != tgt.name else {}
            assert p.query(x, e) == oracle_conditional(net, x, e)


class TestSizeParity:
    def test_same_counts_as_base_encoding_on_example(self, alarm):
        enc = encode_logical(alarm)
        kb_cnf = encode_pkb(to_possibilistic_base(alarm))
        assert cnf_stats(enc.cnf) == cnf_stats(kb_cnf)

    def test_same_counts_as_base_encoding_random(self):
        for net in small_nets(10, 9, seed=307) + small_nets(
            6, 6, seed=311, binary_only=False
        ):
            assert cnf_stats(encode_logical(net).cnf) == cnf_stats(
                encode_pkb(to_possibilistic_base(net))
            )

    def test_never_larger_than_entrywise_baseline(self):
        from posskc.bench import baseline_counts

        for net in small_nets(10, 8, seed=401):
            got = cnf_stats(encode_logical(net).cnf)
            base = baseline_counts(net, "logical")
            assert got["vars"] <= base["vars"]
            assert got["clauses"] <= base["clauses"]

    def test_strictly_smaller_on_example(self, alarm):
        from posskc.bench import baseline_counts

        got = cnf_stats(encode_logical(alarm).cnf)
        base = baseline_counts(alarm, "logical")
        assert got["vars"] < base["vars"]
        assert got["clauses"] < base["clauses"]

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qeagraph.algebra import complex_algebra
from qeagraph.atoms import CopyRule, Signature, build_eta, reduct
from qeagraph.errors import FormatError, InvalidParameter, ResourceLimit
from qeagraph.graph import build_standard
from qeagraph.terms import (SUITES, Compl, Cyl, Diag, Equation, Join, Meet, One, Repl, Strategy,
                            Swap, Var, Zero, check_equation, eval_term, expand_suite, families,
                            format_term, load_suite, parse_equation, parse_equations, parse_term,
                            reverify)

E1 = build_standard("edgeless", 1)
A_E1 = complex_algebra(build_eta(E1, 3))
A_K2 = complex_algebra(build_eta(build_standard("complete", 2), 3))
A_C5 = complex_algebra(build_eta(build_standard("cycle", 5), 3))


def terms(n=3, depth=4):
    idx = st.integers(0, n - 1)
    leaves = st.one_of(st.just(Zero()), st.just(One()), st.sampled_from("xyz").map(Var),
                       st.builds(Diag, idx, idx))
    return st.recursive(leaves, lambda t: st.one_of(
        st.builds(Compl, t), st.builds(Join, t, t), st.builds(Meet, t, t),
        st.builds(Cyl, idx, t), st.builds(Repl, idx, idx, t), st.builds(Swap, idx, idx, t),
    ), max_leaves=8)


def random_term(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([Zero(), One(), Var("x"), Var("y"), Diag(rng.randrange(3), rng.randrange(3))])
    kind = rng.randrange(6)
    sub = lambda: random_term(rng, depth - 1)  # noqa: E731
    i, j = rng.randrange(3), rng.randrange(3)
    return [Compl(sub()), Join(sub(), sub()), Meet(sub(), sub()), Cyl(i, sub()),
            Repl(i, j, sub()), Swap(i, j, sub())][kind]


CORPUS = [random_term(random.Random(k), 4) for k in range(60)]


class TestSyntax:
    @pytest.mark.parametrize("t", CORPUS, ids=[f"corpus{k}" for k in range(60)])
    def test_corpus_round_trip(self, t):
        text = format_term(t)
        assert parse_term(text) == t
        assert format_term(parse_term(text)) == text

    @given(terms())
    @settings(max_examples=200, deadline=None)
    def test_round_trip(self, t):
        assert parse_term(format_term(t)) == t

    def test_whitespace_insensitive(self):
        assert parse_term(" c0 ( x*d01 ) +-y ") == parse_term("c0(x * d01) + -y")

    def test_precedence(self):
        assert parse_term("x + y * z") == Join(Var("x"), Meet(Var("y"), Var("z")))
        assert parse_term("-x * y") == Meet(Compl(Var("x")), Var("y"))
        assert parse_term("x + y + z") == Join(Join(Var("x"), Var("y")), Var("z"))
        assert format_term(parse_term("(x + y) * z")) == "(x + y) * z"
        assert format_term(parse_term("x + (y + z)")) == "x + (y + z)"

    def test_fully_parenthesised_form(self):
        assert parse_term("((x + y) * c1(z))") == parse_term("(x + y) * c1(z)")

    def test_schema_letters(self):
        assert parse_term("sij(ck(x))") == Repl("i", "j", Cyl("k", Var("x")))

    @pytest.mark.parametrize("text", ["", "x +", "c(x)", "c0 x", "d0", "q", "(x", "x)", "s01x",
                                      "c9(x", "a"])
    def test_errors(self, text):
        with pytest.raises(FormatError):
            parse_term(text)

    def test_families(self):
        assert families(parse_term("c0(x) * d12 + s01(p12(y))")) == {"cyl", "diag", "repl", "swap"}


class TestEvaluation:
    @given(terms(), terms(), st.data())
    @settings(max_examples=80, deadline=None)
    def test_boolean_structure(self, t, u, data):
        env = {v: A_K2.element(data.draw(st.sets(st.integers(0, A_K2.size - 1), max_size=20)))
               for v in "xyz"}
        assert eval_term(Compl(t), env, A_K2) == ~eval_term(t, env, A_K2)
        assert eval_term(Join(t, u), env, A_K2) == eval_term(t, env, A_K2) | eval_term(u, env, A_K2)
        assert eval_term(Meet(t, u), env, A_K2) == eval_term(t, env, A_K2) & eval_term(u, env, A_K2)

    def test_operators(self):
        x = A_E1.atom(0)
        assert eval_term("c2(x)", {"x": x}, A_E1).indices() == [0, 1, 2, 3]
        assert eval_term("s01(x)", {"x": x}, A_E1) == eval_term("c0(x * d01)", {"x": x}, A_E1)
        assert eval_term("d01", {}, A_E1).indices() == [0, 1, 2, 3]

    def test_binding_errors(self):
        with pytest.raises(InvalidParameter):
            eval_term("c3(x)", {"x": A_E1.top}, A_E1)
        with pytest.raises(InvalidParameter):
            eval_term("c0(y)", {"x": A_E1.top}, A_E1)
        with pytest.raises(InvalidParameter):
            eval_term("cj(x)", {"x": A_E1.top}, A_E1)
        df = complex_algebra(reduct(build_eta(E1, 3), Signature.DF))
        with pytest.raises(InvalidParameter):
            eval_term("d01", {}, df)


def _instance_count(eq, n):
    """Independent count of admissible index tuples."""
    letters = sorted(set("".join(eq.placeholders)))
    total = 0
    for values in itertools.product(range(n), repeat=len(letters)):
        m = dict(zip(letters, values))
        if all(len(set(m[g] for g in guard)) == len(guard) for guard in eq.guards):
            total += 1
    return total


class TestSuites:
    def test_ca_has_eight_schemata(self):
        assert len(load_suite("ca")) == 8

    def test_qea_contains_ca(self):
        qea = {str(e) for e in load_suite("qea")}
        assert {str(e) for e in load_suite("ca")} <= qea

    def test_df_is_diagonal_free(self):
        for eq in load_suite("df"):
            assert eq.families <= {"cyl"}

    @pytest.mark.parametrize("name", sorted(SUITES))
    @pytest.mark.parametrize("n", [3, 4])
    def test_instance_counts(self, name, n):
        schemata = load_suite(name)
        assert len(expand_suite(schemata, n)) == sum(_instance_count(e, n) for e in schemata)

    def test_frozen_counts(self):
        assert {k: len(expand_suite(load_suite(k), 3)) for k in SUITES} == \
            {"df": 19, "ca": 40, "sc": 58, "qa": 112, "qea": 139}

    def test_triple_law_guard(self):
        p7 = next(e for e in load_suite("qea") if e.label == "P7")
        assert all(len({m["i"], m["j"], m["k"]}) == 3 for m, _ in p7.instances(3))
        assert len(p7.instances(3)) == 6

    def test_file_suite(self, tmp_path):
        path = tmp_path / "mine.eq"
        path.write_text("# two laws\nA: c0(c0(x)) = c0(x)\nB: pij(x) = pji(x) | distinct(i, j)\n")
        eqs = load_suite(str(path))
        assert [e.label for e in eqs] == ["A", "B"]
        assert len(expand_suite(eqs, 3)) == 1 + 6

    def test_unknown_suite(self):
        with pytest.raises(InvalidParameter):
            load_suite("nope")

    @pytest.mark.parametrize("line", ["x = y = z", "x", "x = y | unique(i)", "x = y | distinct(i, q)"])
    def test_equation_errors(self, line):
        with pytest.raises(FormatError):
            parse_equation(line)

    def test_error_reports_line(self):
        with pytest.raises(FormatError) as info:
            parse_equations("x = x\n\n(x = y\n")
        assert "3" in str(info.value)

    def test_str_round_trip(self):
        for eq in load_suite("qea"):
            assert str(parse_equation(str(eq))) == str(eq)


class TestChecking:
    def test_false_equation_counterexample(self):
        res = check_equation(parse_equation("c0(x) = x"), A_E1, Strategy("exhaustive"))
        assert not res.passed
        assert res.counterexample["env"] == {"x": [0]}
        assert reverify(res.equation, A_E1, res.counterexample) == res.counterexample["diff"]

    def test_random_counterexample_reverifies(self):
        res = check_equation(parse_equation("c0(x) = x"), A_C5, Strategy("random", 50, 3))
        assert not res.passed and reverify(res.equation, A_C5, res.counterexample)

    def test_swap_involution_reproducible(self):
        eq = parse_equation("p01(p01(x)) = x")
        first = check_equation(eq, A_C5, Strategy("random", 1000, 7))
        second = check_equation(eq, A_C5, Strategy("random", 1000, 7))
        assert first.passed and second.passed and first.checked == second.checked == 1000

    def test_commutativity_fails_on_one_node_graph(self):
        # c0 c1 {b} and c1 c0 {b} differ for b = part 001 K (a,0) (a,0) -
        res = check_equation(parse_equation("c0(c1(x)) = c1(c0(x))"), A_E1, Strategy("exhaustive"))
        assert not res.passed
        x = A_E1.atom(1)
        assert A_E1.cyl(0, A_E1.cyl(1, x)).indices() == [0, 1, 4, 7, 8, 9]
        assert A_E1.cyl(1, A_E1.cyl(0, x)).indices() == [0, 1, 4, 5, 6, 7]

    def test_commutativity_holds_with_copy_clique(self):
        a = complex_algebra(build_eta(E1, 3, CopyRule.CLIQUE))
        for eq, m, ground in expand_suite(load_suite("qea"), 3):
            assert check_equation(ground, a, Strategy("random", 300, 5), 0).passed, str(ground)

    @pytest.mark.parametrize("name", sorted(SUITES))
    def test_exhaustive_and_random_agree(self, name):
        for k, (eq, m, ground) in enumerate(expand_suite(load_suite(name), 3)):
            ex = check_equation(ground, A_E1, Strategy("exhaustive"), k)
            rnd = check_equation(ground, A_E1, Strategy("random", 1000, 1), k)
            assert ex.passed == rnd.passed, str(ground)

    def test_exhaustive_limits(self):
        with pytest.raises(ResourceLimit):
            check_equation(parse_equation("x = x"), A_K2, Strategy("exhaustive"))
        with pytest.raises(ResourceLimit):
            check_equation(parse_equation("x + y + z = z + y + x"), A_E1, Strategy("exhaustive"))

    def test_unexpanded_schema(self):
        with pytest.raises(InvalidParameter):
            check_equation(parse_equation("ci(x) = ci(x)"), A_E1)

    def test_strategy_validation(self):
        with pytest.raises(InvalidParameter):
            Strategy("sometimes")
        with pytest.raises(InvalidParameter):
            Strategy("random", 0)

    def test_two_variable_exhaustive(self):
        res = check_equation(parse_equation("c1(x * c1(y)) = c1(x) * c1(y)"), A_E1, Strategy("exhaustive"))
        assert res.passed and res.checked == 2 ** 20

    def test_qea_on_k2_random(self):
        for k, (eq, m, ground) in enumerate(expand_suite(load_suite("qea"), 3)):
            assert check_equation(ground, A_K2, Strategy("random", 200, 9), k).passed, str(ground)

    def test_equation_object(self):
        eq = Equation(Var("x"), Var("x"), (), "t")
        assert eq.variables == ["x"] and str(eq) == "t: x = x"
        assert np.array_equal(eval_term(eq.lhs, {"x": A_E1.top}, A_E1).bits, A_E1.top.bits)

import random

import pytest

from treelogic import TreeAutomaton
from treelogic.compiler import (CompilationContext, CompileError,
                                WidthOverflowError, base_automaton,
                                compile_formula, is_satisfiable, stats_lines,
                                zero_pad_closure)
from treelogic.formulas import (VarTable, build_var_table, expand_macros,
                                parse_formula)
from treelogic.trees import Node, node_count

from conftest import fixture_text
from oracle import evaluate, iter_trees, language_sample

T_SIBLINGS = Node("00", Node("10"), Node("01"))


def compiled(text, ambient=None, **kw):
    formula, defs = parse_formula(text)
    expanded = expand_macros(formula, defs)
    table = build_var_table(expanded, ambient)
    ctx = CompilationContext(table=table, **kw)
    return compile_formula(expanded, ctx), table, ctx


# ----------------------------------------------------------------------
# base automata


def test_singleton_base_shape_and_language():
    aut = base_automaton("sing", (0,), 1)
    assert len(aut.states) == 3
    assert not aut.accepts(None)
    # brute force over every labeling with up to 3 nodes
    for tree in iter_trees(3, 1):
        ones = sum(label.count("1") for label in _labels_of(tree))
        assert aut.accepts(tree) == (ones == 1)


def _labels_of(tree):
    if tree is None:
        return []
    return [tree.label] + _labels_of(tree.left) + _labels_of(tree.right)


def test_precedence_with_singletons_accepts_sibling_order():
    prec = base_automaton("prec", (0, 1), 2)
    both = prec.intersect(base_automaton("sing", (0,), 2)) \
               .intersect(base_automaton("sing", (1,), 2))
    assert both.accepts(T_SIBLINGS)
    assert not both.accepts(Node("00", Node("01"), Node("10")))


def test_proper_domination_needs_dominating_node():
    pdom = base_automaton("pdom", (0, 1), 2)
    assert not pdom.accepts(Node("00", Node("01"), None))  # no x at all
    assert pdom.accepts(Node("10", Node("01"), None))
    assert not pdom.accepts(Node("11"))  # same node is not proper


def test_base_positions_validated():
    with pytest.raises(CompileError):
        base_automaton("prec", (0, 2), 2)
    with pytest.raises(CompileError):
        base_automaton("sing", (0, 1), 2)


def test_reflexive_instances():
    assert base_automaton("rdom", (1, 1), 2).equivalent(TreeAutomaton.all_trees(2))
    assert base_automaton("prec", (1, 1), 2).is_empty()
    assert base_automaton("idom", (0, 0), 1).is_empty()


def test_base_against_oracle_on_small_trees():
    cases = ["rdom(x, y)", "pdom(x, y)", "idom(x, y)", "prec(x, y)",
             "eq1(x, y)", "in(x, Y)", "sub(X, Y)", "eqset(X, Y)", "sing(X)"]
    for text in cases:
        aut, table, _ = compiled(text)
        for tree in iter_trees(3, table.width):
            assert aut.accepts(tree) == evaluate(parse_formula(text)[0], tree, table), \
                (text, tree)


# ----------------------------------------------------------------------
# zero-padding closure


def test_closure_is_idempotent(ac_com_automaton):
    once = zero_pad_closure(ac_com_automaton)
    twice = zero_pad_closure(once)
    assert once.equivalent(twice)
    # the reference automaton is already closed
    assert once.equivalent(ac_com_automaton)


def test_closure_of_single_tree_language():
    # accepts exactly one two-node tree
    one = TreeAutomaton(
        1, {"q0", "q1", "q2"}, "q0", {"q2"},
        {("q0", "q0"): {"1": "q1"}, ("q1", "q0"): {"0": "q2"}})
    target = Node("0", Node("1"), None)
    assert language_sample(one, 3) == frozenset({"(0 (1 () ()) ())"})
    closed = zero_pad_closure(one)
    # brute force: closure accepts exactly the zero-frontier variants
    for tree in iter_trees(4, 1):
        assert closed.accepts(tree) == (_strip_zero_frontier(tree) ==
                                        _strip_zero_frontier(target)), tree


def _strip_zero_frontier(tree):
    if tree is None:
        return None
    left = _strip_zero_frontier(tree.left)
    right = _strip_zero_frontier(tree.right)
    if left is None and right is None and set(tree.label) <= {"0"}:
        return None
    return Node(tree.label, left, right)


def test_closure_of_empty_is_empty():
    assert zero_pad_closure(TreeAutomaton.empty_language(2)).is_empty()


def test_closure_against_brute_force_randomized():
    # Two trees encode the same assignment iff they share the nonzero core;
    # the closed language holds a tree iff its class meets the language.
    # Accepted trees with up to 8 nodes (5 grafted zero nodes over a 3-node
    # core) surface every inhabited class for these tiny automata; the bound
    # was cross-checked against direct graft enumeration.
    import random
    from oracle import random_deterministic
    rng = random.Random(71)
    for _ in range(12):
        aut = random_deterministic(rng, width=1, max_states=3)
        closed = zero_pad_closure(aut)
        memo = {}
        inhabited = {_strip_zero_frontier(u)
                     for u in iter_trees(8, 1)
                     if _memo_run(aut, u, memo, store=False) in aut.finals}
        for tree in iter_trees(3, 1):
            want = _strip_zero_frontier(tree) in inhabited
            assert closed.accepts(tree) == want, tree


def _memo_run(aut, tree, memo, store=True):
    # The enumeration caches and shares subtrees, so runs can be memoized on
    # object identity; streamed top-level nodes are transient (their ids get
    # recycled) and must not be stored.
    if tree is None:
        return aut.initial
    key = id(tree)
    if store and key in memo:
        return memo[key]
    from treelogic import guards as gp
    left = _memo_run(aut, tree.left, memo)
    right = _memo_run(aut, tree.right, memo)
    state = aut.sink
    if left is not None and right is not None:
        for guard, targets in aut.transitions.get((left, right), ()):
            if gp.matches(guard, tree.label):
                state = next(iter(targets))
                break
    if store:
        memo[key] = state
    return state


# ----------------------------------------------------------------------
# compiling the headline relations


def test_compile_c_command_matches_reference(ac_com_automaton):
    aut, table, _ = compiled(fixture_text("ac_com.mso"))
    assert table.names() == ("x", "y")
    assert len(aut.states) == 6
    assert zero_pad_closure(aut).equivalent(
        zero_pad_closure(ac_com_automaton.minimize()))


def test_compile_local_c_command_matches_reference(local_c_command_automaton):
    aut, table, _ = compiled(fixture_text("local_c_command.mso"))
    assert table.names() == ("P", "x", "y")
    assert len(aut.states) == 6
    assert zero_pad_closure(aut).equivalent(
        zero_pad_closure(local_c_command_automaton.minimize()))


def test_compile_quantified_c_command_is_satisfiable(ac_com_automaton):
    text = fixture_text("ac_com.mso").replace(
        "CCom(x, y) & ~CCom(y, x) & prec(x, y)",
        "ex1 x. ex1 y. CCom(x, y) & ~CCom(y, x) & prec(x, y)")
    aut, table, _ = compiled(text)
    assert table.width == 0
    assert not aut.is_empty()
    # The configuration can always be placed somewhere in the infinite tree,
    # so every finite stand-in (even the empty one) satisfies the formula;
    # the smallest tree whose own labels realize the relation has 4 nodes.
    assert aut.equivalent(TreeAutomaton.all_trees(0))
    assert node_count(ac_com_automaton.witness()) == 4


def test_compile_contradictions_are_empty():
    rng = random.Random(41)
    pool = ["prec(x, y)", "pdom(x, y)", "in(x, X)", "eq1(x, y)",
            "sing(X)", "rdom(y, x)"]
    for _ in range(8):
        base = rng.choice(pool)
        aut, _, _ = compiled(f"({base}) & ~({base})")
        assert aut.is_empty()
        assert len(aut.states) == 1 and not aut.finals


def test_compile_errors():
    formula, _ = parse_formula("prec(x, y)")
    with pytest.raises(CompileError):
        compile_formula(formula, CompilationContext(table=VarTable()))
    with pytest.raises(WidthOverflowError):
        compiled("prec(x, y) & in(z, Z)", max_width=2)


# ----------------------------------------------------------------------
# semantics against the oracle (a slice; the full suite is in acceptance)


ORACLE_CASES = [
    # (formula, margin, why the margin suffices)
    ("sing(X)", 2, "no quantifier; sets come from the labels"),
    ("ex1 y. pdom(x, y)", 2,
     "a dominated node exists among x's children, within one margin level"),
    ("ex1 y. idom(y, x)", 2, "x's parent is in the labeled tree unless x is the root"),
    ("all1 y. rdom(x, y)", 2,
     "a counterexample to total domination exists at the root or beside x"),
    ("ex1 y. ex1 z. prec(y, z)", 2,
     "two ordered nodes exist among the margin children of any node"),
]


@pytest.mark.parametrize("text,margin,why", ORACLE_CASES)
def test_compiled_membership_matches_oracle(text, margin, why):
    formula, _ = parse_formula(text)
    aut, table, _ = compiled(text)
    for tree in iter_trees(4, table.width):
        assert aut.accepts(tree) == evaluate(formula, tree, table, margin), \
            (text, tree, why)


def test_c_command_agrees_with_oracle_on_small_trees():
    # Margin 2 suffices: a counterexample to either universal clause is a
    # proper ancestor of x or y, hence a labeled node.
    formula, defs = parse_formula(fixture_text("ac_com.mso"))
    expanded = expand_macros(formula, defs)
    aut, table, _ = compiled(fixture_text("ac_com.mso"))
    for tree in iter_trees(4, table.width):
        assert aut.accepts(tree) == evaluate(expanded, tree, table), tree


def test_existential_reaches_outside_the_labeled_tree():
    # the quantified node may live beyond the tree's frontier
    aut, table, _ = compiled("ex1 y. pdom(x, y)")
    leaf_only = Node("1")
    assert aut.accepts(leaf_only)
    sing_only, _, _ = compiled("sing(X)")
    assert aut.equivalent(sing_only)


def test_closed_formula_accepts_empty_tree():
    aut, table, _ = compiled("ex1 x. eq1(x, x)")
    assert table.width == 0
    assert aut.accepts(None)
    assert aut.equivalent(TreeAutomaton.all_trees(0))


# ----------------------------------------------------------------------
# invariants


def test_universal_equals_negated_existential():
    for text_a, text_b in [
        ("all1 z. pdom(z, x) -> pdom(z, y)",
         "~(ex1 z. ~(pdom(z, x) -> pdom(z, y)))"),
        ("all2 Z. sub(Z, Z)", "~(ex2 Z. ~sub(Z, Z))"),
    ]:
        a, table, _ = compiled(text_a)
        b, _, _ = compiled(text_b)
        assert a.equivalent(b)


def test_equivalent_formulations_share_state_count():
    pairs = [
        ("pdom(x, y)", "rdom(x, y) & ~eq1(x, y)"),
        ("sub(X, Y)", "all1 z. in(z, X) -> in(z, Y)"),
    ]
    for text_a, text_b in pairs:
        a, ta, _ = compiled(text_a)
        b, tb, _ = compiled(text_b)
        assert ta.entries == tb.entries
        assert a.equivalent(b)
        assert len(a.states) == len(b.states)


def test_compiled_automata_are_padding_closed():
    rng = random.Random(59)
    for text in ["prec(x, y)", "in(x, Y) & sing(Y)",
                 "ex1 z. idom(z, x)", "sub(X, Y)"]:
        aut, table, _ = compiled(text)
        accepted = [t for t in iter_trees(3, table.width) if aut.accepts(t)]
        for tree in rng.sample(accepted, min(10, len(accepted))):
            grown = _grow_once(tree, table.width)
            assert aut.accepts(grown), (text, tree)
            assert aut.accepts(_strip_zero_frontier(tree)), (text, tree)


def _grow_once(tree, width):
    zero = "0" * width
    if tree is None:
        return Node(zero)
    return Node(tree.label, _grow_once(tree.left, width),
                _grow_once(tree.right, width))


def test_stats_record_every_step():
    aut, _, ctx = compiled(fixture_text("ac_com.mso"))
    assert ctx.stats, "compilation must leave a step trace"
    assert ctx.stats[-1].states_out == len(aut.states) == 6
    lines = stats_lines(ctx.stats)
    assert all(line.startswith(f"step={i} op=") for i, line in
               enumerate(lines, 1))
    assert all("states_in=" in line and "states_out=" in line for line in lines)


def test_minimization_policy_switch():
    aut_on, _, ctx_on = compiled("prec(x, y) & prec(y, z)")
    aut_off, _, ctx_off = compiled("prec(x, y) & prec(y, z)",
                                   minimize_steps=False)
    assert aut_on.equivalent(aut_off.determinize() if not aut_off.deterministic
                             else aut_off)
    assert len(aut_off.states) >= len(aut_on.states)


def test_satisfiability_detectors_agree(ac_com_automaton):
    assert is_satisfiable(ac_com_automaton)
    assert not is_satisfiable(TreeAutomaton.empty_language(2))
    aut, _, _ = compiled("prec(x, x)")
    assert not is_satisfiable(aut)

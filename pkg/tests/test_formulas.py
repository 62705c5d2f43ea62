import pytest
from hypothesis import given
from hypothesis import strategies as st

from treelogic.formulas import (And, Atom, Call, Exists1, Forall1, FormulaError,
                                Iff, Implies, MacroError, Not, Or, SortError,
                                VarTable, build_var_table, desugar,
                                expand_macros, format_formula, free_variables,
                                parse_formula, rename_bound_apart, substitute)

from conftest import fixture_text


def parse_one(text):
    formula, defs = parse_formula(text)
    return expand_macros(formula, defs)


# ----------------------------------------------------------------------
# parsing


def test_parse_simple_conjunction():
    formula, defs = parse_formula("prec(x,y) & ~rdom(x,y)")
    assert defs == []
    assert formula == And(Atom("prec", ("x", "y")),
                          Not(Atom("rdom", ("x", "y"))))


def test_parse_c_command_definition():
    formula, defs = parse_formula(fixture_text("ac_com.mso"))
    assert len(defs) == 1
    assert defs[0].name == "CCom"
    # three top-level conjuncts: CCom(x,y), ~CCom(y,x), prec(x,y)
    assert isinstance(formula, And)
    assert formula.right == Atom("prec", ("x", "y"))
    assert isinstance(formula.left, And)
    assert formula.left.left == Call("CCom", ("x", "y"))
    assert formula.left.right == Not(Call("CCom", ("y", "x")))
    # the macro body embeds a universal quantifier and a negation
    assert isinstance(defs[0].body, And)
    assert isinstance(defs[0].body.left, Forall1)
    assert isinstance(defs[0].body.right, Not)


def test_parse_precedence_and_associativity():
    f, _ = parse_formula("~in(x,X) & in(y,Y) | sing(Z) -> true <-> false")
    assert isinstance(f, Iff)
    assert isinstance(f.left, Implies)
    assert isinstance(f.left.left, Or)
    assert isinstance(f.left.left.left, And)
    assert isinstance(f.left.left.left.left, Not)
    g, _ = parse_formula("in(x,X) -> in(y,Y) -> in(z,Z)")
    assert isinstance(g, Implies)
    assert isinstance(g.right, Implies)  # right-associative


def test_parse_quantifier_scope_and_sugar():
    f, _ = parse_formula("ex1 x, y. prec(x, y) & eq1(x, x)")
    assert isinstance(f, Exists1) and f.var == "x"
    assert isinstance(f.body, Exists1) and f.body.var == "y"
    assert isinstance(f.body.body, And)  # scope runs to the end


def test_parse_variable_is_not_a_formula():
    with pytest.raises(SortError):
        parse_formula("ex1 x. X")


def test_parse_sort_violations():
    with pytest.raises(SortError):
        parse_formula("pdom(X, y)")
    with pytest.raises(SortError):
        parse_formula("in(X, Y)")
    with pytest.raises(SortError):
        parse_formula("sing(x)")
    with pytest.raises(SortError):
        parse_formula("ex1 X. sing(X)")


def test_parse_errors_carry_position():
    with pytest.raises(FormulaError) as err:
        parse_formula("prec(x,\n  %comment\n  )")
    assert err.value.line == 3


def test_parse_unknown_relation():
    with pytest.raises(MacroError):
        parse_formula("dominates(x, y)")


# ----------------------------------------------------------------------
# macros


def test_macro_expansion_inlines_body():
    text = """
    def Gap(a, b) := pdom(a, b) & ~idom(a, b);
    Gap(x, y) | Gap(y, x)
    """
    expanded = parse_one(text)
    assert expanded == Or(
        And(Atom("pdom", ("x", "y")), Not(Atom("idom", ("x", "y")))),
        And(Atom("pdom", ("y", "x")), Not(Atom("idom", ("y", "x")))))


def test_macro_expansion_identity_without_calls():
    f, _ = parse_formula("prec(x, y)")
    assert expand_macros(f, []) == f


def test_macro_recursion_rejected():
    with pytest.raises(MacroError):
        parse_formula("def A(x) := A(x); A(y)")


def test_macro_nonparameter_variable_rejected():
    with pytest.raises(MacroError):
        parse_formula("def Bad(x) := in(x, Hidden); Bad(y)")


def test_macro_arity_and_sort_checked_at_call():
    with pytest.raises(MacroError):
        parse_formula("def P(x) := eq1(x, x); P(x, y)")
    with pytest.raises(SortError):
        parse_formula("def P(x) := eq1(x, x); P(X)")


def test_macro_expansion_avoids_capture():
    text = """
    def Above(a) := ex1 z. pdom(z, a);
    Above(z)
    """
    expanded = parse_one(text)
    assert isinstance(expanded, Exists1)
    assert expanded.var != "z"
    assert expanded.body == Atom("pdom", (expanded.var, "z"))


def test_expansion_preserves_free_variables():
    formula, defs = parse_formula(fixture_text("ac_com.mso"))
    assert free_variables(expand_macros(formula, defs)) == \
        free_variables(formula)


# ----------------------------------------------------------------------
# variable tables


def test_var_table_from_c_command():
    table = build_var_table(parse_one(fixture_text("ac_com.mso")))
    assert table.entries == (("x", "first"), ("y", "first"))
    assert table.width == 2
    assert table.position("y") == 1


def test_var_table_closed_formula_keeps_ambient():
    ambient = VarTable((("x", "first"),))
    table = build_var_table(parse_one("ex1 z. eq1(z, z)"), ambient)
    assert table is ambient or table.entries == ambient.entries


def test_var_table_intervention_order():
    table = build_var_table(parse_one(fixture_text("local_c_command.mso")))
    assert table.names() == ("P", "x", "y")
    assert table.sort_of("P") == "second"


def test_var_table_sort_clash():
    table = VarTable((("x", "second"),))
    with pytest.raises(SortError):
        table.extended("x", "first")


# ----------------------------------------------------------------------
# transformations


def test_desugar_eliminates_derived_connectives():
    f = parse_one("(in(x,X) -> in(y,Y)) & (all1 z. eq1(z, z))")
    d = desugar(f)

    def scan(g):
        assert not isinstance(g, (Implies, Iff, Forall1))
        for attr in ("left", "right", "body"):
            if hasattr(g, attr):
                scan(getattr(g, attr))

    scan(d)


def test_rename_bound_apart():
    f = parse_one("(ex1 z. pdom(z, x)) & (ex1 z. pdom(z, y))")
    renamed = rename_bound_apart(f)
    assert renamed.left.var != renamed.right.var
    assert free_variables(renamed) == free_variables(f)


def test_substitute_capture_avoidance():
    f = parse_one("ex1 z. prec(z, other)")
    g = substitute(f, {"other": "z"})
    assert isinstance(g, Exists1)
    assert g.var != "z"
    assert g.body == Atom("prec", (g.var, "z"))


# ----------------------------------------------------------------------
# printing round-trip


def _formulas():
    first = st.sampled_from(["x", "y", "z"])
    second = st.sampled_from(["X", "Y"])
    atoms = st.one_of(
        st.builds(lambda a, b: Atom("prec", (a, b)), first, first),
        st.builds(lambda a, b: Atom("pdom", (a, b)), first, first),
        st.builds(lambda a, b: Atom("in", (a, b)), first, second),
        st.builds(lambda a: Atom("sing", (a,)), second),
    )

    def extend(children):
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
            st.builds(Iff, children, children),
            st.builds(Exists1, first, children),
            st.builds(Forall1, first, children),
        )

    return st.recursive(atoms, extend, max_leaves=8)


@given(_formulas())
def test_print_parse_roundtrip(f):
    text = format_formula(f)
    parsed, defs = parse_formula(text)
    assert defs == []
    assert parsed == f

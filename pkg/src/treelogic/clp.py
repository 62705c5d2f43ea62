"""Definite-clause programs whose bodies carry tree-logic constraints.

A clause has the shape::

    p(x, Y) <- { <formula> } & q(x) & r(Y).

The ``{...}`` constraint is optional and must come first; a clause with no
arrow is a fact.  Predicate names are lowercase; arguments are variables
(all structure lives in the constraints).  Queries look like
``?- { <formula> } & g1 & g2.``  Comments start with ``%`` or ``#``.

Variable scope: clause parameters bind to the caller's argument variables by
identification.  Other lowercase variables are clause-local and renamed
fresh for every application.  Uppercase variables name shared node sets in
one global table, so a set like a lexicon's ``Sees`` keeps its identity
across clauses and queries without being threaded through every head.

The interpreter is a standard left-to-right, depth-first resolution loop.
The constraint store is a minimized deterministic tree automaton over a
growing global variable table; each applied clause's constraint is compiled
on the fly and intersected with the store, and the branch dies as soon as
the store becomes empty.  Stores are immutable, so backtracking simply
returns to the previous value.

Recursion through second-order variables makes derivations only
semi-decidable; the loader flags such predicates with a warning and the
solver enforces a configurable depth bound per branch.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .automata import TreeAutomaton
from .compiler import CompilationContext, compile_formula
from .formulas import (FIRST, SECOND, Formula, FormulaError, Token, TrueF,
                       VarTable, free_variables, parse_formula_fragment,
                       sort_of_name, substitute, tokenize)
from .trees import Tree, assignment_from_tree


class ProgramError(ValueError):
    pass


class SolveError(ValueError):
    pass


@dataclass(frozen=True)
class GoalAtom:
    name: str
    args: tuple[str, ...]

    def __str__(self):
        return f"{self.name}({', '.join(self.args)})" if self.args else self.name


@dataclass(frozen=True)
class Clause:
    name: str
    params: tuple[str, ...]
    constraint: Formula
    body: tuple[GoalAtom, ...]


@dataclass(frozen=True)
class Query:
    constraint: Formula
    goals: tuple[GoalAtom, ...]


@dataclass
class Program:
    clauses: list[Clause] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def matching(self, name: str, arity: int) -> list[Clause]:
        return [c for c in self.clauses
                if c.name == name and len(c.params) == arity]

    def predicates(self) -> set[tuple[str, int]]:
        return {(c.name, len(c.params)) for c in self.clauses}


@dataclass
class ConstraintStore:
    """The solved form: a global variable table plus a minimized automaton
    over exactly that many bits.  Nonempty on every live branch."""

    table: VarTable
    automaton: TreeAutomaton


@dataclass
class Solution:
    store: ConstraintStore
    tree: Tree
    assignment: dict[str, tuple[str, ...]]


# ----------------------------------------------------------------------
# parsing


class _ProgramParser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ProgramError("unexpected end of program text")
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ProgramError(f"expected {text!r}, found {tok.text!r} "
                               f"(line {tok.line}, column {tok.column})")
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def parse_name(self, what: str) -> str:
        tok = self.next()
        if not tok.text[0].isalpha():
            raise ProgramError(f"expected {what}, found {tok.text!r} "
                               f"(line {tok.line}, column {tok.column})")
        return tok.text

    def parse_atom(self) -> GoalAtom:
        tok = self.next()
        name = tok.text
        if not name[0].islower():
            raise ProgramError(f"predicate names are lowercase, found {name!r} "
                               f"(line {tok.line}, column {tok.column})")
        args: list[str] = []
        if self.at("("):
            self.next()
            if not self.at(")"):
                args.append(self.parse_name("a variable"))
                while self.at(","):
                    self.next()
                    args.append(self.parse_name("a variable"))
            self.expect(")")
        return GoalAtom(name, tuple(args))

    def parse_constraint_block(self) -> Formula:
        self.expect("{")
        start = self.pos
        depth = 0
        while True:
            tok = self.peek()
            if tok is None:
                raise ProgramError("unterminated '{' constraint")
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                if depth == 0:
                    break
                depth -= 1
            self.pos += 1
        inner = self.tokens[start:self.pos]
        self.expect("}")
        try:
            return parse_formula_fragment(inner)
        except FormulaError as exc:
            raise ProgramError(f"in constraint: {exc}") from None

    def parse_body(self) -> tuple[Formula, tuple[GoalAtom, ...]]:
        constraint: Formula = TrueF()
        goals: list[GoalAtom] = []
        first = True
        while True:
            if self.at("{"):
                if not first:
                    raise ProgramError("the constraint must be the first body item")
                constraint = self.parse_constraint_block()
            else:
                goals.append(self.parse_atom())
            first = False
            if self.at("&"):
                self.next()
                continue
            break
        return constraint, tuple(goals)

    def parse_clause(self) -> Clause:
        head = self.parse_atom()
        if len(set(head.args)) != len(head.args):
            raise ProgramError(f"duplicate parameter in clause head {head}")
        if self.at("."):
            self.next()
            return Clause(head.name, head.args, TrueF(), ())
        self.expect("<-")
        constraint, goals = self.parse_body()
        self.expect(".")
        return Clause(head.name, head.args, constraint, goals)

    def parse_program(self) -> Program:
        program = Program()
        while self.peek() is not None:
            program.clauses.append(self.parse_clause())
        _check_recursion(program)
        return program

    def parse_query(self) -> Query:
        self.expect("?-")
        constraint, goals = self.parse_body()
        self.expect(".")
        if self.peek() is not None:
            tok = self.peek()
            raise ProgramError(f"trailing input {tok.text!r} after query")
        return Query(constraint, goals)


def _clause_variables(clause: Clause) -> set[str]:
    names = set(clause.params)
    names.update(name for name, _ in free_variables(clause.constraint))
    for goal in clause.body:
        names.update(goal.args)
    return names


def _check_recursion(program: Program) -> None:
    """Warn about second-order variables in (indirectly) recursive clauses;
    such programs may define relations beyond the decidable fragment."""
    calls: dict[tuple[str, int], set[tuple[str, int]]] = {}
    for clause in program.clauses:
        key = (clause.name, len(clause.params))
        calls.setdefault(key, set()).update(
            (g.name, len(g.args)) for g in clause.body)
    reach: dict[tuple[str, int], set[tuple[str, int]]] = {
        k: set(v) for k, v in calls.items()}
    changed = True
    while changed:
        changed = False
        for key, targets in reach.items():
            extra = set()
            for t in targets:
                extra |= reach.get(t, set())
            if not extra <= targets:
                targets |= extra
                changed = True
    recursive = {k for k, targets in reach.items() if k in targets}
    for i, clause in enumerate(program.clauses, 1):
        key = (clause.name, len(clause.params))
        if key not in recursive:
            continue
        second = sorted(v for v in _clause_variables(clause)
                        if sort_of_name(v) == SECOND)
        if second:
            program.warnings.append(
                f"clause {i} ({clause.name}/{len(clause.params)}): recursive "
                f"predicate uses second-order variable(s) {', '.join(second)}; "
                "derivations may not terminate")


def load_program(text: str) -> Program:
    return _ProgramParser(tokenize(text)).parse_program()


def parse_query(text: str) -> Query:
    return _ProgramParser(tokenize(text)).parse_query()


# ----------------------------------------------------------------------
# the interpreter


def initial_store() -> ConstraintStore:
    return ConstraintStore(VarTable(), TreeAutomaton.all_trees(0))


class Solver:
    """Depth-first, left-to-right resolution with automaton constraint solving.

    ``on_event`` (when given) receives (kind, detail) pairs for goal
    reductions, constraint-store updates and depth-bound truncations.
    ``truncated_branches`` counts branches cut by the depth bound.
    """

    def __init__(self, program: Program, depth: int = 64, max_width: int = 16,
                 on_event=None, iterative_deepening: bool = False):
        self.program = program
        self.depth_bound = depth
        self.max_width = max_width
        self.on_event = on_event
        self.iterative_deepening = iterative_deepening
        self.truncated_branches = 0
        self._fresh = itertools.count(1)

    def _event(self, kind: str, **detail) -> None:
        if self.on_event is not None:
            self.on_event(kind, detail)

    def solve(self, query: Query):
        store = self._constrain(initial_store(), query.constraint)
        if store is None:
            return
        if not self.iterative_deepening:
            for _, solution in self._derive(list(query.goals), store, 0,
                                            self.depth_bound, ()):
                yield solution
            return
        seen: set[tuple] = set()
        bound = 1
        while True:
            bound = min(bound, self.depth_bound)
            truncated_before = self.truncated_branches
            for path, solution in self._derive(list(query.goals), store, 0,
                                               bound, ()):
                if path not in seen:
                    seen.add(path)
                    yield solution
            if (self.truncated_branches == truncated_before
                    or bound >= self.depth_bound):
                return
            bound *= 2

    def _derive(self, goals, store, depth, bound, path):
        if not goals:
            yield path, self._solution(store)
            return
        if depth >= bound:
            self.truncated_branches += 1
            self._event("depth", depth=depth, goal=str(goals[0]))
            return
        goal = goals[0]
        clauses = self.program.matching(goal.name, len(goal.args))
        if not clauses:
            raise SolveError(f"unknown predicate {goal.name}/{len(goal.args)}")
        for i, clause in enumerate(clauses):
            if any(sort_of_name(p) != sort_of_name(a)
                   for p, a in zip(clause.params, goal.args)):
                continue
            mapping = dict(zip(clause.params, goal.args))
            # Lowercase non-parameters are clause-local and renamed fresh per
            # application; uppercase ones name shared sets in the global
            # table (a lexicon's word and category sets, for example) and
            # keep their names across clauses and queries.
            for local in sorted(_clause_variables(clause) - set(clause.params)):
                if sort_of_name(local) == FIRST:
                    mapping[local] = f"{local}#{next(self._fresh)}"
            constraint = substitute(clause.constraint, mapping)
            self._event("reduce", goal=str(goal), clause=i + 1,
                        predicate=clause.name)
            new_store = self._constrain(store, constraint)
            if new_store is None:
                self._event("constrain", goal=str(goal), satisfiable=False)
                continue
            self._event("constrain", goal=str(goal), satisfiable=True,
                        states=len(new_store.automaton.states),
                        width=new_store.table.width)
            body = [GoalAtom(g.name, tuple(mapping.get(a, a) for a in g.args))
                    for g in clause.body]
            yield from self._derive(body + goals[1:], new_store,
                                    depth + 1, bound, path + (i,))

    def _constrain(self, store: ConstraintStore, formula: Formula
                   ) -> ConstraintStore | None:
        table = store.table
        for name, sort in free_variables(formula):
            table = table.extended(name, sort)
        automaton = store.automaton
        for pos in range(store.table.width, table.width):
            automaton = automaton.cylindrify(pos)
        ctx = CompilationContext(table=table, max_width=self.max_width)
        compiled = compile_formula(formula, ctx)
        joint = automaton.intersect(compiled).minimize()
        if joint.is_empty():
            return None
        return ConstraintStore(table, joint)

    def _solution(self, store: ConstraintStore) -> Solution:
        # The store is never empty on a live branch, so a None witness is the
        # empty tree, not a missing one.
        tree = store.automaton.witness()
        sets = assignment_from_tree(tree, store.table.width)
        assignment = {
            name: tuple(sorted(sets[store.table.position(name)]))
            for name, _ in store.table.entries
        }
        return Solution(store, tree, assignment)


def solve(program: Program, query: Query, depth: int = 64,
          max_width: int = 16, on_event=None):
    """Stream solutions of the query against the program."""
    return Solver(program, depth=depth, max_width=max_width,
                  on_event=on_event).solve(query)


def entails(store: ConstraintStore, formula: Formula,
            max_width: int = 16) -> bool:
    """Does every labeling accepted by the store satisfy the formula?"""
    for name, _ in free_variables(formula):
        if not store.table.has(name):
            raise SolveError(f"unbound variable {name!r} in entailment check")
    ctx = CompilationContext(table=store.table, max_width=max_width)
    compiled = compile_formula(formula, ctx)
    return store.automaton.intersect(compiled.complement()).is_empty()

"""Decision procedures for a weak monadic second-order tree logic.

Formulas over node and node-set variables compile into deterministic
bottom-up tree automata whose languages are exactly the satisfying
assignment labelings; satisfiability is automaton nonemptiness, and a small
definite-clause layer uses the compiler as an online constraint solver.
"""

from .automata import AutomatonError, TreeAutomaton
from .clp import (Clause, ConstraintStore, GoalAtom, Program, ProgramError,
                  Query, Solution, SolveError, Solver, entails, load_program,
                  parse_query, solve)
from .compiler import (CompilationContext, CompileError, WidthOverflowError,
                       base_automaton, compile_formula, is_satisfiable,
                       stats_lines, zero_pad_closure)
from .formulas import (FIRST, SECOND, Atom, Call, FalseF, Formula,
                       FormulaError, Iff, Implies, MacroDef, MacroError, Not,
                       And, Or, Exists1, Exists2, Forall1, Forall2, SortError,
                       TrueF, VarTable, build_var_table, desugar,
                       expand_macros, format_formula, free_variables,
                       parse_formula, sort_of_name)
from .trees import (Node, Tree, assignment_from_tree, format_tree,
                    node_count, parse_tree, tree_sort_key)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Deterministic and nondeterministic bottom-up tree automata.

An automaton assigns states to finite binary trees leaf-to-root: the empty
tree gets the initial state, and a node's state is looked up from the pair of
child states and the node label.  A tree is accepted when its root state is
final.  Labels are fixed-width bit strings; transitions are guarded by
patterns over {0, 1, *} (see ``guards``).

Conventions:

* In deterministic mode the guards attached to one (left, right) state pair
  are pairwise disjoint.  Symbols not covered by any listed transition go to
  an implicit dead state, so deterministic automata are always total.  The
  ``sink`` attribute optionally names that dead state; a designated sink is
  never final and absorbs from both child positions.
* Automata are immutable after construction.  Every operation returns a
  fresh automaton, so values can be shared freely across threads.
* State identity is meaningless across automata: compare languages with
  ``equivalent``, never state sets.

Text format (one construct per line, ``#`` starts a comment)::

    width 2
    states 6
    initial a0
    finals a4
    trans a0 a0 00 -> a0
    ...

``states`` is the state count.  When it exceeds the number of state names
mentioned by exactly one, the extra state is the (unlisted) sink.  An
optional ``sink <id>`` line names the sink explicitly.  Width-0 guards (the
empty bit string) are written ``-``.
"""

from __future__ import annotations

from collections import deque
from typing import Iterator

from . import guards as gp
from .trees import Node, Tree, validate_tree

PairKey = tuple[str, str]
Entry = tuple[str, frozenset[str]]


class AutomatonError(ValueError):
    pass


def _normalize(transitions) -> dict[PairKey, tuple[Entry, ...]]:
    """Accepts {pair: {guard: target-or-targets}} or {pair: iterable of
    (guard, target-or-targets)}; returns the canonical sorted form."""
    norm: dict[PairKey, dict[str, set[str]]] = {}
    for pair, entries in transitions.items():
        items = entries.items() if isinstance(entries, dict) else entries
        bucket = norm.setdefault(pair, {})
        for guard, target in items:
            targets = {target} if isinstance(target, str) else set(target)
            bucket.setdefault(guard, set()).update(targets)
    return {
        pair: tuple((g, frozenset(ts)) for g, ts in sorted(bucket.items()))
        for pair, bucket in sorted(norm.items())
    }


class TreeAutomaton:
    __slots__ = ("width", "states", "initial", "finals", "transitions",
                 "deterministic", "sink")

    def __init__(self, width, states, initial, finals, transitions,
                 deterministic=True, sink=None, validate=True):
        self.width = int(width)
        self.states = frozenset(states)
        self.initial = initial
        self.finals = frozenset(finals)
        self.transitions = _normalize(transitions)
        self.deterministic = bool(deterministic)
        self.sink = sink
        if validate:
            self._validate()

    def _validate(self) -> None:
        if self.width < 0:
            raise AutomatonError("width must be non-negative")
        if self.initial not in self.states:
            raise AutomatonError(f"initial state {self.initial!r} not a state")
        if not self.finals <= self.states:
            raise AutomatonError("final states must be states")
        if self.sink is not None:
            if self.sink not in self.states:
                raise AutomatonError(f"sink {self.sink!r} not a state")
            if self.sink in self.finals:
                raise AutomatonError("sink cannot be final")
        for (left, right), entries in self.transitions.items():
            if left not in self.states or right not in self.states:
                raise AutomatonError(f"transition from unknown pair ({left}, {right})")
            for guard, targets in entries:
                gp.check_guard(guard, self.width)
                if not targets <= self.states:
                    raise AutomatonError(f"transition to unknown state(s) {set(targets)}")
                if self.deterministic and len(targets) != 1:
                    raise AutomatonError("deterministic automaton with multi-target entry")
            if self.deterministic:
                for i, (g1, _) in enumerate(entries):
                    for g2, _ in entries[i + 1:]:
                        if not gp.disjoint(g1, g2):
                            raise AutomatonError(
                                f"overlapping guards {g1!r}/{g2!r} on pair ({left}, {right})")
            if self.sink is not None:
                for guard, targets in entries:
                    if (left == self.sink or right == self.sink) and targets != {self.sink}:
                        raise AutomatonError("sink must absorb from both child positions")

    def __repr__(self):
        kind = "det" if self.deterministic else "nondet"
        return (f"<TreeAutomaton {kind} width={self.width} "
                f"states={len(self.states)} finals={len(self.finals)}>")

    # ------------------------------------------------------------------
    # construction helpers

    @staticmethod
    def all_trees(width: int) -> "TreeAutomaton":
        """Accepts every tree of the given width, including the empty tree."""
        return TreeAutomaton(
            width, {"q0"}, "q0", {"q0"},
            {("q0", "q0"): {gp.all_star(width): "q0"}})

    @staticmethod
    def empty_language(width: int) -> "TreeAutomaton":
        """The canonical automaton of the empty language."""
        return TreeAutomaton(width, {"q0"}, "q0", set(), {}, sink="q0")

    def entries(self) -> Iterator[tuple[str, str, str, frozenset[str]]]:
        for (left, right), pair_entries in self.transitions.items():
            for guard, targets in pair_entries:
                yield left, right, guard, targets

    # ------------------------------------------------------------------
    # runs and membership

    def run(self, tree: Tree) -> str | None:
        """State reached on the tree (deterministic mode); None = dead."""
        if not self.deterministic:
            raise AutomatonError("run() requires a deterministic automaton")
        self._check_tree(tree)
        return self._run(tree)

    def _run(self, tree: Tree) -> str | None:
        if tree is None:
            return self.initial
        left = self._run(tree.left)
        right = self._run(tree.right)
        if left is None or right is None:
            return self.sink
        for guard, targets in self.transitions.get((left, right), ()):
            if gp.matches(guard, tree.label):
                return next(iter(targets))
        return self.sink

    def run_set(self, tree: Tree) -> frozenset[str]:
        """All states reachable on the tree (nondeterministic reading)."""
        self._check_tree(tree)
        return self._run_set(tree)

    def _run_set(self, tree: Tree) -> frozenset[str]:
        if tree is None:
            return frozenset({self.initial})
        lefts = self._run_set(tree.left)
        rights = self._run_set(tree.right)
        out: set[str] = set()
        for left in lefts:
            for right in rights:
                for guard, targets in self.transitions.get((left, right), ()):
                    if gp.matches(guard, tree.label):
                        out.update(targets)
        return frozenset(out)

    def accepts(self, tree: Tree) -> bool:
        if self.deterministic:
            state = self.run(tree)
            return state is not None and state in self.finals
        return bool(self.run_set(tree) & self.finals)

    def _check_tree(self, tree: Tree) -> None:
        width = validate_tree(tree)
        if width is not None and width != self.width:
            raise AutomatonError(
                f"tree labels have width {width}, automaton has width {self.width}")

    # ------------------------------------------------------------------
    # reachability and emptiness

    def reachable_states(self) -> frozenset[str]:
        reached, _ = self.reachable_states_detailed()
        return reached

    def reachable_states_detailed(self, stop_on_final: bool = False
                                  ) -> tuple[frozenset[str], int]:
        """Least fixpoint of bottom-up reachability plus the pass count.

        Each pass sweeps the whole transition table once; the fixpoint is
        reached after at most ``len(states)`` passes.  A designated sink
        becomes reachable as soon as some reachable state pair leaves part
        of the symbol space uncovered.
        """
        reached = {self.initial}
        passes = 0
        sink_pending = self.sink is not None
        coverage: dict[PairKey, bool] = {}

        def covered(pair: PairKey) -> bool:
            if pair not in coverage:
                pats = [g for g, _ in self.transitions.get(pair, ())]
                coverage[pair] = gp.covers_all(pats, self.width)
            return coverage[pair]

        while True:
            passes += 1
            new: set[str] = set()
            for (left, right), pair_entries in self.transitions.items():
                if left in reached and right in reached:
                    for _, targets in pair_entries:
                        new.update(targets)
            if sink_pending:
                for left in reached:
                    for right in reached:
                        if not covered((left, right)):
                            new.add(self.sink)
                            sink_pending = False
                            break
                    if not sink_pending:
                        break
            if stop_on_final and (new | reached) & self.finals:
                return frozenset(reached | new), passes
            if new <= reached:
                return frozenset(reached), passes
            reached |= new

    def is_empty(self) -> bool:
        if self.initial in self.finals:
            return False
        reached, _ = self.reachable_states_detailed(stop_on_final=True)
        return not reached & self.finals

    # ------------------------------------------------------------------
    # totality

    def with_materialized_sink(self) -> "TreeAutomaton":
        """Make the implicit dead state explicit: every state pair covers the
        whole symbol space.  Deterministic automata only."""
        if not self.deterministic:
            raise AutomatonError("cannot materialize the sink of a nondeterministic automaton")
        sink = self.sink
        if sink is None:
            sink = "dead"
            n = 0
            while sink in self.states:
                n += 1
                sink = f"dead{n}"
        states = self.states | {sink}
        transitions: dict[PairKey, list[tuple[str, str]]] = {}
        for left in sorted(states):
            for right in sorted(states):
                pair = (left, right)
                listed = list(self.transitions.get(pair, ()))
                new = [(g, next(iter(ts))) for g, ts in listed]
                for cube in gp.uncovered([g for g, _ in listed], self.width):
                    new.append((cube, sink))
                transitions[pair] = new
        return TreeAutomaton(self.width, states, self.initial, self.finals,
                             {p: e for p, e in transitions.items()},
                             deterministic=True, sink=sink, validate=False)

    # ------------------------------------------------------------------
    # boolean operations

    def intersect(self, other: "TreeAutomaton") -> "TreeAutomaton":
        return self._product(other, mode="intersect")

    def union(self, other: "TreeAutomaton") -> "TreeAutomaton":
        return self._product(other, mode="union")

    def _product(self, other: "TreeAutomaton", mode: str) -> "TreeAutomaton":
        if self.width != other.width:
            raise AutomatonError(
                f"width mismatch: {self.width} vs {other.width}")
        a = self if self.deterministic else self.determinize()
        b = other if other.deterministic else other.determinize()
        if mode == "union":
            a = a.with_materialized_sink()
            b = b.with_materialized_sink()

        def name(p: str, q: str) -> str:
            return f"({p},{q})"

        root = (a.initial, b.initial)
        order: list[PairKey] = [root]
        index = {root: 0}
        queue: deque[tuple[PairKey, PairKey]] = deque([(root, root)])
        transitions: dict[PairKey, list[tuple[str, str]]] = {}

        def discover(pair: PairKey) -> None:
            if pair not in index:
                index[pair] = len(order)
                order.append(pair)
                for known in order:
                    queue.append((pair, known))
                    if known != pair:
                        queue.append((known, pair))

        while queue:
            (la, lb), (ra, rb) = queue.popleft()
            ea = a.transitions.get((la, ra))
            eb = b.transitions.get((lb, rb))
            if not ea or not eb:
                continue
            out = []
            for g1, t1 in ea:
                for g2, t2 in eb:
                    m = gp.meet(g1, g2)
                    if m is None:
                        continue
                    target = (next(iter(t1)), next(iter(t2)))
                    discover(target)
                    out.append((m, name(*target)))
            if out:
                transitions[(name(la, lb), name(ra, rb))] = out

        if mode == "intersect":
            finals = {name(p, q) for (p, q) in order
                      if p in a.finals and q in b.finals}
        else:
            finals = {name(p, q) for (p, q) in order
                      if p in a.finals or q in b.finals}
        states = {name(p, q) for (p, q) in order}
        return TreeAutomaton(self.width, states, name(*root), finals,
                             transitions, deterministic=True, validate=False)

    def complement(self) -> "TreeAutomaton":
        if not self.deterministic:
            raise AutomatonError("complement requires a deterministic automaton")
        total = self.with_materialized_sink()
        return TreeAutomaton(total.width, total.states, total.initial,
                             total.states - total.finals, total.transitions,
                             deterministic=True, sink=None, validate=False)

    # ------------------------------------------------------------------
    # determinization

    def determinize(self) -> "TreeAutomaton":
        """Subset construction restricted to reachable state sets.

        The output is deterministic and total (missing entries fall to the
        implicit dead state, which corresponds to the empty subset).
        """
        def name(subset: frozenset[str]) -> str:
            return "{" + ",".join(sorted(subset)) + "}"

        root = frozenset({self.initial})
        order: list[frozenset[str]] = [root]
        index = {root: 0}
        queue: deque[tuple[frozenset[str], frozenset[str]]] = deque([(root, root)])
        transitions: dict[PairKey, list[tuple[str, str]]] = {}

        def discover(subset: frozenset[str]) -> None:
            if subset not in index:
                index[subset] = len(order)
                order.append(subset)
                for known in order:
                    queue.append((subset, known))
                    if known != subset:
                        queue.append((known, subset))

        while queue:
            left, right = queue.popleft()
            collected: list[Entry] = []
            for p in left:
                for q in right:
                    collected.extend(self.transitions.get((p, q), ()))
            if not collected:
                continue
            positions = gp.constrained_positions(g for g, _ in collected)
            by_target: dict[frozenset[str], list[str]] = {}
            # Minterm cubes: concrete exactly at the constrained positions, so
            # every collected guard either subsumes a cube or misses it.
            for cube in _assignments(positions, self.width):
                targets: set[str] = set()
                for g, ts in collected:
                    if gp.matches(g, cube):
                        targets.update(ts)
                if targets:
                    by_target.setdefault(frozenset(targets), []).append(cube)
            out = []
            for subset in sorted(by_target, key=lambda s: sorted(s)):
                discover(subset)
                for pattern in gp.merge_patterns(by_target[subset]):
                    out.append((pattern, name(subset)))
            if out:
                transitions[(name(left), name(right))] = out

        finals = {name(s) for s in order if s & self.finals}
        states = {name(s) for s in order}
        return TreeAutomaton(self.width, states, name(root), finals,
                             transitions, deterministic=True, validate=False)

    # ------------------------------------------------------------------
    # projection and cylindrification

    def project(self, pos: int) -> "TreeAutomaton":
        """Erase one bit position from the alphabet; the result is marked
        nondeterministic since transitions differing only at ``pos`` merge."""
        if not 0 <= pos < self.width:
            raise AutomatonError(f"position {pos} out of range for width {self.width}")
        merged: dict[PairKey, dict[str, set[str]]] = {}
        for (left, right), pair_entries in self.transitions.items():
            bucket = merged.setdefault((left, right), {})
            for guard, targets in pair_entries:
                bucket.setdefault(gp.drop_position(guard, pos), set()).update(targets)
        return TreeAutomaton(self.width - 1, self.states, self.initial,
                             self.finals, merged,
                             deterministic=False, sink=None, validate=False)

    def cylindrify(self, pos: int) -> "TreeAutomaton":
        """Insert a don't-care bit position; inverse image of projection."""
        if not 0 <= pos <= self.width:
            raise AutomatonError(f"position {pos} out of range for width {self.width}")
        transitions = {
            pair: [(gp.insert_position(g, pos), ts) for g, ts in pair_entries]
            for pair, pair_entries in self.transitions.items()
        }
        return TreeAutomaton(self.width + 1, self.states, self.initial,
                             self.finals, transitions,
                             deterministic=self.deterministic,
                             sink=self.sink, validate=False)

    # ------------------------------------------------------------------
    # minimization

    def minimize(self) -> "TreeAutomaton":
        """Quotient by state equivalence after dropping unreachable states.

        The result is the minimal total deterministic automaton of the
        language, unique up to state renaming.  Transitions into the dead
        class are stripped and the class is designated as the sink, so empty
        languages come out as a single non-final initial state.
        """
        if not self.deterministic:
            raise AutomatonError("minimize requires a deterministic automaton")
        total = self.with_materialized_sink()
        reached = total.reachable_states()
        states = sorted(reached)
        transitions = {
            pair: entries for pair, entries in total.transitions.items()
            if pair[0] in reached and pair[1] in reached
        }

        # Moore refinement; signatures canonicalize the symbol->block map of
        # each (state, co-state) pair as a reduced binary decision tree.
        block: dict[str, int] = {s: (1 if s in total.finals else 0) for s in states}
        while True:
            interned: dict[object, int] = {}

            def tree_id(key: object) -> int:
                if key not in interned:
                    interned[key] = len(interned)
                return interned[key]

            def decision(entries: tuple[Entry, ...]) -> int:
                memo: dict[tuple[int, frozenset[int]], int] = {}
                items = [(g, block[next(iter(ts))]) for g, ts in entries]

                def build(pos: int, live: tuple[int, ...]) -> int:
                    if not live:
                        return tree_id(("dead",))
                    key = (pos, frozenset(live))
                    if key in memo:
                        return memo[key]
                    if pos == self.width:
                        node = tree_id(("leaf", items[live[0]][1]))
                    else:
                        zeros = tuple(i for i in live if items[i][0][pos] in "0*")
                        ones = tuple(i for i in live if items[i][0][pos] in "1*")
                        lo = build(pos + 1, zeros)
                        hi = build(pos + 1, ones)
                        node = lo if lo == hi else tree_id(("split", lo, hi))
                    memo[key] = node
                    return node

                return build(0, tuple(range(len(items))))

            pair_sig: dict[PairKey, int] = {}
            for pair, entries in transitions.items():
                pair_sig[pair] = decision(entries)
            dead_sig = tree_id(("dead",))

            signatures: dict[str, tuple] = {}
            for s in states:
                row = tuple(pair_sig.get((s, t), dead_sig) for t in states)
                col = tuple(pair_sig.get((t, s), dead_sig) for t in states)
                signatures[s] = (block[s], row, col)
            groups: dict[tuple, list[str]] = {}
            for s in states:
                groups.setdefault(signatures[s], []).append(s)
            new_block: dict[str, int] = {}
            for i, sig in enumerate(sorted(groups, key=lambda k: groups[k][0])):
                for s in groups[sig]:
                    new_block[s] = i
            if new_block == block:
                break
            block = new_block

        rep: dict[int, str] = {}
        for s in states:
            b = block[s]
            if b not in rep or s < rep[b]:
                rep[b] = s

        def bname(b: int) -> str:
            return f"m{b}"

        quotient: dict[PairKey, list[tuple[str, str]]] = {}
        for (bl, br), (sl, sr) in {(bl, br): (rep[bl], rep[br])
                                   for bl in rep for br in rep}.items():
            merged: dict[str, list[str]] = {}
            for guard, targets in transitions.get((sl, sr), ()):
                merged.setdefault(bname(block[next(iter(targets))]), []).append(guard)
            out = []
            for target, pats in sorted(merged.items()):
                for pattern in gp.merge_patterns(pats):
                    out.append((pattern, target))
            if out:
                quotient[(bname(bl), bname(br))] = out

        q_states = {bname(b) for b in rep}
        q_finals = {bname(block[s]) for s in states if s in total.finals}
        q_initial = bname(block[total.initial])

        # Re-detect the dead class and make it implicit again.
        sink = None
        for b in sorted(rep):
            cand = bname(b)
            if cand in q_finals:
                continue
            absorbing = all(
                target == cand
                for (left, right), pair_entries in quotient.items()
                if left == cand or right == cand
                for _, target in pair_entries)
            into_self = all(
                target == cand
                for _, target in quotient.get((cand, cand), ()))
            if absorbing and into_self:
                sink = cand
                break
        if sink is not None:
            quotient = {
                pair: [e for e in pair_entries if e[1] != sink]
                for pair, pair_entries in quotient.items()
                if pair[0] != sink and pair[1] != sink
            }
            quotient = {p: e for p, e in quotient.items() if e}

        return TreeAutomaton(self.width, q_states, q_initial, q_finals,
                             quotient, deterministic=True, sink=sink,
                             validate=False)

    # ------------------------------------------------------------------
    # language comparison and witnesses

    def equivalent(self, other: "TreeAutomaton") -> bool:
        if self.width != other.width:
            raise AutomatonError(
                f"width mismatch: {self.width} vs {other.width}")
        a = self if self.deterministic else self.determinize()
        b = other if other.deterministic else other.determinize()
        return (a.intersect(b.complement()).is_empty()
                and b.intersect(a.complement()).is_empty())

    def witness(self) -> Tree:
        """A size-minimal accepted tree, or None for the empty language.

        Ties are broken by preorder label sequence (don't-care bits resolve
        to 0) and finally by tree shape, so the result is reproducible.
        """
        reps: dict[str, tuple[int, tuple[str, ...], str, Tree]] = {
            self.initial: (0, (), "-", None)
        }
        changed = True
        while changed:
            changed = False
            for (left, right) in sorted(self.transitions):
                if left not in reps or right not in reps:
                    continue
                ls, ll, lsh, lt = reps[left]
                rs, rl, rsh, rt = reps[right]
                for guard, targets in self.transitions[(left, right)]:
                    sym = gp.least_symbol(guard)
                    cand = (1 + ls + rs, (sym,) + ll + rl, f"({lsh}{rsh})")
                    for target in sorted(targets):
                        cur = reps.get(target)
                        if cur is None or cand < cur[:3]:
                            reps[target] = cand + (Node(sym, lt, rt),)
                            changed = True
        best = None
        for final in sorted(self.finals):
            if final in reps:
                entry = reps[final]
                if best is None or entry[:3] < best[:3]:
                    best = entry
        return best[3] if best else None

    # ------------------------------------------------------------------
    # canonical renaming and the text format

    def renumbered(self, prefix: str = "q") -> "TreeAutomaton":
        """Rename states q0..qN in a canonical discovery order, independent
        of the current names (for reachable automata)."""
        order: list[str] = [self.initial]
        index = {self.initial: 0}
        queue: deque[PairKey] = deque([(self.initial, self.initial)])

        def discover(state: str) -> None:
            if state not in index:
                index[state] = len(order)
                order.append(state)
                for known in order:
                    queue.append((state, known))
                    if known != state:
                        queue.append((known, state))

        while queue:
            pair = queue.popleft()
            for guard, targets in sorted(self.transitions.get(pair, ())):
                for target in sorted(targets):
                    discover(target)
        for leftover in sorted(self.states - set(order)):
            if leftover != self.sink:
                order.append(leftover)
        if self.sink is not None and self.sink not in order:
            order.append(self.sink)
        names = {s: f"{prefix}{i}" for i, s in enumerate(order)}
        transitions = {
            (names[l], names[r]): [(g, {names[t] for t in ts}) for g, ts in entries]
            for (l, r), entries in self.transitions.items()
        }
        return TreeAutomaton(self.width, set(names.values()), names[self.initial],
                             {names[f] for f in self.finals}, transitions,
                             deterministic=self.deterministic,
                             sink=None if self.sink is None else names[self.sink],
                             validate=False)

    def to_text(self) -> str:
        def key(name: str) -> tuple[int, str]:
            return (len(name), name)

        lines = [f"width {self.width}", f"states {len(self.states)}",
                 f"initial {self.initial}"]
        lines.append(("finals " + " ".join(sorted(self.finals, key=key))).rstrip())
        if self.sink is not None:
            lines.append(f"sink {self.sink}")
        for (left, right) in sorted(self.transitions, key=lambda p: (key(p[0]), key(p[1]))):
            for guard, targets in self.transitions[(left, right)]:
                for target in sorted(targets, key=key):
                    lines.append(f"trans {left} {right} {guard or '-'} -> {target}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TreeAutomaton":
        width = None
        count = None
        initial = None
        finals: list[str] = []
        sink = None
        raw: list[tuple[str, str, str, str]] = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "width":
                    width = int(parts[1])
                elif parts[0] == "states":
                    count = int(parts[1])
                elif parts[0] == "initial":
                    initial = parts[1]
                elif parts[0] == "finals":
                    finals = parts[1:]
                elif parts[0] == "sink":
                    sink = parts[1]
                elif parts[0] == "trans":
                    if len(parts) != 6 or parts[4] != "->":
                        raise ValueError("malformed transition")
                    guard = "" if parts[3] == "-" else parts[3]
                    raw.append((parts[1], parts[2], guard, parts[5]))
                else:
                    raise ValueError(f"unknown directive {parts[0]!r}")
            except (IndexError, ValueError) as exc:
                raise AutomatonError(f"line {lineno}: {exc}") from None
        if width is None or initial is None:
            raise AutomatonError("missing width or initial line")
        mentioned = {initial, *finals, *(s for t in raw for s in (t[0], t[1], t[3]))}
        if sink is not None:
            mentioned.add(sink)
        if count is not None:
            if count == len(mentioned) + 1 and sink is None:
                sink = "sink"
                n = 0
                while sink in mentioned:
                    n += 1
                    sink = f"sink{n}"
                mentioned.add(sink)
            elif count != len(mentioned):
                raise AutomatonError(
                    f"states {count} does not match {len(mentioned)} mentioned states")
        transitions: dict[PairKey, list[tuple[str, str]]] = {}
        for left, right, guard, target in raw:
            transitions.setdefault((left, right), []).append((guard, target))
        deterministic = True
        for pair_entries in transitions.values():
            for i, (g1, _) in enumerate(pair_entries):
                for g2, _ in pair_entries[i + 1:]:
                    if not gp.disjoint(g1, g2):
                        deterministic = False
        if sink is not None and not deterministic:
            sink = None
        return cls(width, mentioned, initial, finals, transitions,
                   deterministic=deterministic, sink=sink)


def _assignments(positions: list[int], width: int) -> Iterator[str]:
    """All guards concrete exactly at the given positions (don't-care elsewhere)."""
    import itertools
    base = ["*"] * width
    for bits in itertools.product("01", repeat=len(positions)):
        for i, b in zip(positions, bits):
            base[i] = b
        yield "".join(base)

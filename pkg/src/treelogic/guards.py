"""Guard patterns: fixed-width strings over {0, 1, *} denoting sets of symbols.

Automata in this package read bit-string symbols, one bit per tracked
variable.  Enumerating all 2**n symbols explodes quickly, so transitions
carry *guards* instead: a guard matches every concrete symbol obtained by
filling its don't-care (``*``) positions.  A guard without ``*`` denotes a
single symbol.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator

GUARD_CHARS = frozenset("01*")


def check_guard(pattern: str, width: int) -> None:
    if len(pattern) != width:
        raise ValueError(f"guard {pattern!r} has length {len(pattern)}, expected {width}")
    bad = set(pattern) - GUARD_CHARS
    if bad:
        raise ValueError(f"guard {pattern!r} contains invalid characters {sorted(bad)}")


def all_star(width: int) -> str:
    return "*" * width


def zero_symbol(width: int) -> str:
    return "0" * width


def matches(pattern: str, symbol: str) -> bool:
    """Does the concrete symbol fall into the set the guard denotes?"""
    if len(pattern) != len(symbol):
        return False
    return all(p == "*" or p == s for p, s in zip(pattern, symbol))


def meet(a: str, b: str) -> str | None:
    """Intersection of two guards, or None when they conflict at some position."""
    out = []
    for x, y in zip(a, b):
        if x == "*":
            out.append(y)
        elif y == "*" or x == y:
            out.append(x)
        else:
            return None
    return "".join(out)


def disjoint(a: str, b: str) -> bool:
    return meet(a, b) is None


def subsumes(a: str, b: str) -> bool:
    """True when every symbol matching b also matches a."""
    return all(x == "*" or x == y for x, y in zip(a, b))


def drop_position(pattern: str, pos: int) -> str:
    return pattern[:pos] + pattern[pos + 1:]


def insert_position(pattern: str, pos: int, ch: str = "*") -> str:
    return pattern[:pos] + ch + pattern[pos:]


def least_symbol(pattern: str) -> str:
    """The lexicographically smallest concrete symbol matching the guard."""
    return pattern.replace("*", "0")


def concrete_symbols(pattern: str) -> Iterator[str]:
    stars = [i for i, c in enumerate(pattern) if c == "*"]
    chars = list(pattern)
    for bits in itertools.product("01", repeat=len(stars)):
        for i, b in zip(stars, bits):
            chars[i] = b
        yield "".join(chars)


def constrained_positions(patterns: Iterable[str]) -> list[int]:
    positions: set[int] = set()
    for p in patterns:
        positions.update(i for i, c in enumerate(p) if c != "*")
    return sorted(positions)


def subtract(cube: str, other: str) -> list[str]:
    """cube minus other, as a list of pairwise-disjoint guards."""
    if meet(cube, other) is None:
        return [cube]
    out = []
    cur = list(cube)
    for i, (c, o) in enumerate(zip(cube, other)):
        if o == "*" or c != "*":
            continue
        piece = cur.copy()
        piece[i] = "1" if o == "0" else "0"
        out.append("".join(piece))
        cur[i] = o
    return out


def uncovered(patterns: Iterable[str], width: int) -> list[str]:
    """Guards covering exactly the symbols matched by none of the patterns."""
    space = [all_star(width)]
    for p in patterns:
        space = [piece for cube in space for piece in subtract(cube, p)]
        if not space:
            break
    return sorted(space)


def covers_all(patterns: Iterable[str], width: int) -> bool:
    return not uncovered(patterns, width)


def _merge_two(a: str, b: str) -> str | None:
    """Merge two guards differing in exactly one concrete position."""
    diff = -1
    for i, (x, y) in enumerate(zip(a, b)):
        if x == y:
            continue
        if x == "*" or y == "*" or diff >= 0:
            return None
        diff = i
    if diff < 0:
        return a
    return a[:diff] + "*" + a[diff + 1:]


def merge_patterns(patterns: Iterable[str]) -> list[str]:
    """Compact a set of guards by cube merging; result order is deterministic.

    Greedy, not minimal, but never changes the denoted symbol set as long as
    the inputs are pairwise disjoint or nested.
    """
    pats = set(patterns)
    while True:
        found = None
        ordered = sorted(pats)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1:]:
                m = _merge_two(a, b)
                if m is not None:
                    found = (a, b, m)
                    break
            if found:
                break
        if found is None:
            break
        a, b, m = found
        pats.discard(a)
        pats.discard(b)
        pats.add(m)
    return [p for p in sorted(pats)
            if not any(q != p and subsumes(q, p) for q in pats)]

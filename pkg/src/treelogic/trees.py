"""Finite binary trees with bit-string node labels.

A tree is either the empty tree (represented as ``None``) or a ``Node`` with
a label and two subtrees.  Node addresses are strings over {0, 1}: the empty
string is the root, ``a + "0"`` the left child of ``a``, ``a + "1"`` the
right child.  A tree over n-bit labels encodes an assignment of node sets to
n variables: address a belongs to variable i's set iff bit i of the label at
a is 1.

Text format: ``()`` is the empty tree, ``(<bits> <left> <right>)`` a node.
Width-0 labels (no tracked variables) are written ``-``.
"""

from __future__ import annotations


class Node:
    """One labeled tree node; children default to the empty tree."""

    __slots__ = ("label", "left", "right")

    def __init__(self, label: str, left: "Node | None" = None, right: "Node | None" = None):
        self.label = label
        self.left = left
        self.right = right

    def __eq__(self, other):
        if not isinstance(other, Node):
            return NotImplemented
        return (self.label == other.label
                and self.left == other.left
                and self.right == other.right)

    def __hash__(self):
        return hash((self.label, self.left, self.right))

    def __repr__(self):
        return f"Node({self.label!r}, {self.left!r}, {self.right!r})"


Tree = Node | None


def node_count(tree: Tree) -> int:
    if tree is None:
        return 0
    return 1 + node_count(tree.left) + node_count(tree.right)


def tree_width(tree: Tree) -> int | None:
    """Label length at the root, or None for the empty tree."""
    return None if tree is None else len(tree.label)


def validate_tree(tree: Tree, width: int | None = None) -> int | None:
    """Check all labels share one length (== width when given); return it."""
    if tree is None:
        return width
    if width is None:
        width = len(tree.label)
    if len(tree.label) != width or set(tree.label) - {"0", "1"}:
        raise ValueError(f"bad label {tree.label!r}, expected {width} bits")
    validate_tree(tree.left, width)
    validate_tree(tree.right, width)
    return width


def addresses(tree: Tree, prefix: str = "") -> dict[str, str]:
    """Map from node address to label."""
    out: dict[str, str] = {}
    if tree is not None:
        out[prefix] = tree.label
        out.update(addresses(tree.left, prefix + "0"))
        out.update(addresses(tree.right, prefix + "1"))
    return out


def assignment_from_tree(tree: Tree, width: int) -> dict[int, frozenset[str]]:
    """Per bit position, the set of addresses where that bit is on."""
    sets: dict[int, set[str]] = {i: set() for i in range(width)}
    for addr, label in addresses(tree).items():
        for i, bit in enumerate(label):
            if bit == "1":
                sets[i].add(addr)
    return {i: frozenset(s) for i, s in sets.items()}


def preorder_labels(tree: Tree) -> tuple[str, ...]:
    if tree is None:
        return ()
    return (tree.label,) + preorder_labels(tree.left) + preorder_labels(tree.right)


def shape_string(tree: Tree) -> str:
    """Shape-only serialization; equal node counts give equal lengths."""
    if tree is None:
        return "-"
    return "(" + shape_string(tree.left) + shape_string(tree.right) + ")"


def tree_sort_key(tree: Tree) -> tuple[int, tuple[str, ...], str]:
    """Total order on trees: node count, then preorder labels, then shape."""
    return (node_count(tree), preorder_labels(tree), shape_string(tree))


def format_tree(tree: Tree) -> str:
    if tree is None:
        return "()"
    label = tree.label if tree.label else "-"
    return f"({label} {format_tree(tree.left)} {format_tree(tree.right)})"


def parse_tree(text: str) -> Tree:
    """Parse the textual tree format; raises ValueError on malformed input."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse() -> Tree:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != "(":
            raise ValueError(f"expected '(' at token {pos} in tree text")
        pos += 1
        if pos < len(tokens) and tokens[pos] == ")":
            pos += 1
            return None
        label = tokens[pos]
        pos += 1
        if label == "-":
            label = ""
        elif set(label) - {"0", "1"}:
            raise ValueError(f"bad tree label {label!r}")
        left = parse()
        right = parse()
        if pos >= len(tokens) or tokens[pos] != ")":
            raise ValueError("expected ')' closing tree node")
        pos += 1
        return Node(label, left, right)

    tree = parse()
    if pos != len(tokens):
        raise ValueError("trailing garbage after tree")
    validate_tree(tree)
    return tree

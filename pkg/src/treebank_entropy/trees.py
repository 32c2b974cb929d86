"""Ordered labeled trees, bracketed-treebank reading, and corpus statistics.

Trees are the common currency of the package: internal nodes carry
non-terminal labels, leaves carry terminal labels, and the left-to-right
sequence of leaves (the frontier) is the surface string.  All traversals are
iterative; parsed trees can be arbitrarily deep.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyInputError, ParseError, StructuralError

#: Pre-terminal labels whose subtrees are dropped on reading (trace/empty
#: elements carry no surface tokens and would corrupt MLU).
DEFAULT_DROP_LABELS = frozenset({"-NONE-"})


class Tree:
    """Ordered rooted tree; a node with no children is a leaf."""

    __slots__ = ("label", "children")

    def __init__(self, label: str, children=()):
        self.label = label
        self.children = tuple(children)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        # Iterative comparison; recursion would overflow on deep trees.
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a.label != b.label or len(a.children) != len(b.children):
                return False
            stack.extend(zip(a.children, b.children))
        return True

    def __hash__(self):
        return hash((self.label, len(self.children)))

    def __repr__(self):
        return f"Tree({write_bracketed(self)!r})"

    def iter_nodes(self):
        """Yield every node in pre-order."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def frontier(self) -> list[str]:
        """Leaf labels from left to right."""
        out = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node.label)
            else:
                stack.extend(reversed(node.children))
        return out

    def node_count(self) -> int:
        return sum(1 for _ in self.iter_nodes())

    def depth(self) -> int:
        """Number of edges on the longest root-to-leaf path."""
        best = 0
        stack = [(self, 0)]
        while stack:
            node, d = stack.pop()
            if node.is_leaf:
                best = max(best, d)
            else:
                stack.extend((c, d + 1) for c in node.children)
        return best


def parse_bracketed(text: str) -> list[Tree]:
    """Parse one or more parenthesized trees from `text`.

    Node labels are kept verbatim.  A top-level group that wraps exactly one
    subtree without a label of its own (the common treebank file convention
    ``( (S ...) )``) is unwrapped.  Raises :class:`ParseError` on unbalanced
    parentheses (reporting the 1-based byte offset) and
    :class:`StructuralError` on empty nodes.
    """
    trees = []
    pos = 0
    n = len(text)

    def skip_ws(i):
        while i < n and text[i].isspace():
            i += 1
        return i

    def read_atom(i):
        j = i
        while j < n and not text[j].isspace() and text[j] not in "()":
            j += 1
        return text[i:j], j

    while True:
        pos = skip_ws(pos)
        if pos >= n:
            break
        if text[pos] != "(":
            raise ParseError("expected '('", offset=pos + 1)
        # Stack of (label-or-None, children-list, open-paren-offset).
        stack = []
        tree = None
        while tree is None:
            pos = skip_ws(pos)
            if pos >= n:
                raise ParseError("unbalanced", offset=n + 1)
            ch = text[pos]
            if ch == "(":
                stack.append([None, [], pos])
                pos += 1
            elif ch == ")":
                if not stack:
                    raise ParseError("unbalanced", offset=pos + 1)
                label, children, opened = stack.pop()
                if label is None:
                    if len(children) == 1 and not stack:
                        node = children[0]  # unwrap unlabeled top-level group
                    else:
                        raise StructuralError(
                            f"node without a label at offset {opened + 1}"
                        )
                elif not children:
                    raise StructuralError(
                        f"node '{label}' has no children at offset {opened + 1}"
                    )
                else:
                    node = Tree(label, children)
                pos += 1
                if stack:
                    stack[-1][1].append(node)
                else:
                    tree = node
            else:
                atom, pos = read_atom(pos)
                if not stack:
                    raise ParseError("expected '('", offset=pos)
                if stack[-1][0] is None and not stack[-1][1]:
                    stack[-1][0] = atom
                else:
                    stack[-1][1].append(Tree(atom))
        trees.append(tree)
    return trees


def write_bracketed(tree: Tree) -> str:
    """Serialize a tree to the bracketed format read by :func:`parse_bracketed`.

    Labels containing whitespace or parentheses cannot round-trip and are
    rejected.
    """
    out = []
    # Emission stack holds trees and literal strings.
    stack = [tree]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        if not item.label or any(c in "() \t\n\r" for c in item.label):
            raise StructuralError(
                f"label {item.label!r} is not serializable in bracketed form"
            )
        if item.is_leaf:
            out.append(item.label)
            continue
        out.append(f"({item.label}")
        stack.append(")")
        for child in reversed(item.children):
            stack.append(child)
            stack.append(" ")
    return "".join(out)


def strip_subtrees(tree: Tree, drop_labels=DEFAULT_DROP_LABELS) -> Tree | None:
    """Remove subtrees rooted at pre-terminals with a label in `drop_labels`.

    Internal nodes left without children are removed as well.  Returns None
    when the whole tree is dropped.
    """
    if tree.is_leaf:
        return tree
    post = []
    stack = [tree]
    while stack:
        node = stack.pop()
        post.append(node)
        stack.extend(node.children)
    rebuilt: dict[int, Tree | None] = {}
    for node in reversed(post):
        if node.is_leaf:
            rebuilt[id(node)] = node
            continue
        if node.label in drop_labels and all(c.is_leaf for c in node.children):
            rebuilt[id(node)] = None
            continue
        kept = [rebuilt[id(c)] for c in node.children]
        kept = [c for c in kept if c is not None]
        rebuilt[id(node)] = Tree(node.label, kept) if kept else None
    return rebuilt[id(tree)]


def strip_function_tags(tree: Tree) -> Tree:
    """Strip `-`/`=` suffixes from internal labels (``NP-SBJ`` -> ``NP``).

    Labels that would become empty (pure punctuation-style labels such as
    ``-NONE-`` or ``-LRB-``) are kept verbatim.  Leaf labels are never touched.
    """

    def cut(label: str) -> str:
        base = label
        for sep in ("-", "="):
            idx = base.find(sep)
            if idx > 0:
                base = base[:idx]
        return base if base else label

    post = []
    stack = [tree]
    while stack:
        node = stack.pop()
        post.append(node)
        stack.extend(node.children)
    rebuilt: dict[int, Tree] = {}
    for node in reversed(post):
        if node.is_leaf:
            rebuilt[id(node)] = node
        else:
            rebuilt[id(node)] = Tree(
                cut(node.label), [rebuilt[id(c)] for c in node.children]
            )
    return rebuilt[id(tree)]


def preterminalize(tree: Tree) -> Tree:
    """Delete the word layer so pre-terminals (POS tags) become the leaves.

    Requires every leaf's parent to be a pre-terminal, i.e. an internal node
    whose children are all leaves; a node mixing leaf and internal children
    raises :class:`StructuralError` naming the offending label.  Every
    root-to-leaf path shortens by exactly one edge.  A bare single-leaf tree
    is returned unchanged.
    """
    if tree.is_leaf:
        return tree
    post = []
    stack = [tree]
    while stack:
        node = stack.pop()
        post.append(node)
        stack.extend(node.children)
    rebuilt: dict[int, Tree] = {}
    for node in reversed(post):
        if node.is_leaf:
            continue
        leaf_children = [c for c in node.children if c.is_leaf]
        if leaf_children and len(leaf_children) != len(node.children):
            raise StructuralError(
                f"node '{node.label}' mixes leaf and internal children"
            )
        if leaf_children:
            rebuilt[id(node)] = Tree(node.label)  # pre-terminal becomes a leaf
        else:
            rebuilt[id(node)] = Tree(
                node.label, [rebuilt[id(c)] for c in node.children]
            )
    return rebuilt[id(tree)]


@dataclass
class Corpus:
    """A list of parsed sentences plus provenance.

    `preterminalized` records whether the word layer has already been
    removed, making :func:`preterminalize_corpus` idempotent.
    """

    sentences: list[Tree]
    source_id: str = ""
    preterminalized: bool = field(default=False, compare=False)

    @property
    def sentence_count(self) -> int:
        return len(self.sentences)

    def __len__(self):
        return len(self.sentences)


def preterminalize_corpus(corpus: Corpus) -> Corpus:
    """Pre-terminalize every sentence; no-op on an already processed corpus."""
    if corpus.preterminalized:
        return corpus
    return Corpus(
        [preterminalize(t) for t in corpus.sentences],
        source_id=corpus.source_id,
        preterminalized=True,
    )


def corpus_mlu(corpus: Corpus) -> float:
    """Mean frontier length in tokens per sentence."""
    if not corpus.sentences:
        raise EmptyInputError("MLU is undefined for an empty corpus")
    total = sum(len(t.frontier()) for t in corpus.sentences)
    return total / len(corpus.sentences)


def read_bracketed(
    path,
    drop_labels=DEFAULT_DROP_LABELS,
    strip_tags: bool = False,
    source_id: str | None = None,
) -> Corpus:
    """Read a bracketed treebank file into a :class:`Corpus`.

    Subtrees under pre-terminals listed in `drop_labels` are removed; with
    `strip_tags`, function-tag suffixes on internal labels are cut.
    """
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    trees = parse_bracketed(text)
    kept = []
    for tree in trees:
        if drop_labels:
            tree = strip_subtrees(tree, drop_labels)
            if tree is None:
                continue
        if strip_tags:
            tree = strip_function_tags(tree)
        if not tree.frontier():
            continue
        kept.append(tree)
    return Corpus(kept, source_id=source_id if source_id is not None else str(path))

"""Convert dependency graphs to derivation trees and back.

Projective dependency structures embed losslessly into constituency trees:
each token becomes a node expanding into its left dependents, a starred
anchor leaf, and its right dependents, with relation labels as extra nodes.
The mapping is reversible, so treebank entropy machinery built for trees
applies to dependency corpora unchanged.
"""

from treebank_entropy import (
    ConversionConfig,
    dep_to_tree,
    is_projective,
    parse_conllu,
    tree_to_dep,
    write_bracketed,
)

SENTENCE = """\
1\tI\t_\tPRP\t_\t_\t2\tSBJ\t_\t_
2\tdo\t_\tVBP\t_\t_\t0\troot\t_\t_
3\tn't\t_\tRB\t_\t_\t2\tNEG\t_\t_
4\thave\t_\tVB\t_\t_\t2\tVC\t_\t_
5\tany\t_\tDT\t_\t_\t6\tNDET\t_\t_
6\tkids\t_\tNNS\t_\t_\t2\tOBJ\t_\t_
"""

(graph,) = parse_conllu(SENTENCE)
print("tokens:", " ".join(form for form, _ in graph.tokens))
print("projective:", is_projective(graph))

unlabeled = dep_to_tree(graph, ConversionConfig(labeled=False))
print("\nwithout relation labels:")
print(" ", write_bracketed(unlabeled))

labeled = dep_to_tree(graph, ConversionConfig(labeled=True))
print("\nwith relation labels:")
print(" ", write_bracketed(labeled))

back = tree_to_dep(labeled)
print("\nround trip recovers heads:", back.heads == graph.heads)
print("round trip recovers labels:", back.labels == graph.labels)
print(
    "round trip recovers POS:",
    [pos for _, pos in back.tokens] == [pos for _, pos in graph.tokens],
)

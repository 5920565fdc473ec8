"""Any digraph can be written as a goto program.

Each node becomes a labelled switch over a selector variable, each arc a
case that jumps to the target's label.  For acyclic digraphs the program
has exactly as many acyclic paths as the graph.  Cycles break this: every
node's dispatch is entered through one shared arc, which a path can use
only once.
"""

import random

from pathmetric import (Digraph, NoReachableExit, build_body_cfg, count_acyclic_paths,
                        embed_graph, random_digraph)
from pathmetric.parser import format_function

diamond = Digraph(4, frozenset({(0, 1), (0, 2), (1, 3), (2, 3)}), 0)
print(format_function(embed_graph(diamond, stacked_default=False)))


def compare(g):
    want = count_acyclic_paths(g.to_cfg())
    stacked = count_acyclic_paths(build_body_cfg(embed_graph(g), 0))
    plain = count_acyclic_paths(build_body_cfg(embed_graph(g, stacked_default=False), 0))
    return want, stacked, plain


print("diamond (graph, stacked labels, plain default):", compare(diamond))
loop = Digraph(3, frozenset({(0, 1), (1, 0), (0, 2)}), 0)
print("two-node cycle:", compare(loop))

# Random graphs whose arcs all point to higher-numbered nodes have no
# cycles, and the plain construction is exact on them; the rest include
# graphs with cycles, where it can fall short.
rng = random.Random(5)
tally = {"forward": [0, 0], "other": [0, 0]}
while sum(n for n, _ in tally.values()) < 100:
    g = random_digraph(rng, max_nodes=6, max_arcs=10)
    try:
        want, _, plain = compare(g)
    except NoReachableExit:
        continue
    kind = "other" if any(a >= b for a, b in g.arcs) else "forward"
    tally[kind][0] += 1
    tally[kind][1] += plain == want
for kind, (seen, exact) in tally.items():
    print(f"{kind:<8} graphs {seen:>3}, exact with plain default labels {exact:>3}")

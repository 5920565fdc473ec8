"""Reference control-flow graphs, Graphviz output and brute-force counting.

The graph builder numbers nodes backwards from the exit (node 0).  The
oracle walks every path that never reuses an arc; that number is what
ACPATH is meant to equal.
"""

from pathmetric import (build_body_cfg, count_acyclic_paths, enumerate_acyclic_paths,
                        parse_body, to_dot)

body = parse_body("while (a) if (b) break; else continue;")
g = build_body_cfg(body, 0)
print(to_dot(g, "loop"))

for path in enumerate_acyclic_paths(g):
    print(" -> ".join(map(str, path)))
print("paths:", count_acyclic_paths(g))

# Optimisation levels fold constant guards.  At level 0 `1` is an ordinary
# operand; level 1 folds literals, level 2 also folds constant expressions.
for text in ("if (1) a; else b;", "if (2 - 2) a; else b;"):
    b = parse_body(text)
    sizes = [len(build_body_cfg(b, i).reachable().nodes) for i in (0, 1, 2)]
    print(f"{text:<24} reachable nodes at levels 0/1/2: {sizes}")

"""ACPATH and NPATH side by side on a few small functions.

NPATH adds up alternatives syntactically; ACPATH follows the control flow
and counts acyclic execution paths exactly on controlled bodies.  The two
agree on simple code and drift apart once loops and short-circuit
operators appear.
"""

from pathmetric import SourceFile, acpath_body, npath_body, parse_translation_unit

SOURCE = """
int pick(int a, int b, int c, int d, int e) {
  if (a && b && c)
    return d ? 0 : 1;
  else
    return e ? 0 : 1;
}

void spin(int a, int b, int c, int d) {
  while (a || (b && c && d)) {
    ;
  }
}

void once(void) {
  do { ; } while (0);
}
"""

functions, errors = parse_translation_unit(SourceFile("demo.c", SOURCE))
assert not errors

print(f"{'function':<8} {'acpath':>7} {'npath':>6}")
for fb in functions:
    print(f"{fb.name:<8} {acpath_body(fb, 2):>7} {npath_body(fb):>6}")

# The loop guard in `spin` can be true in three ways and false in three,
# and the loop may run its body or not: six paths, where NPATH sees five.
# The do-while body always runs once, so there is only one path through
# `once`, while NPATH charges it two.

# Sequences multiply.  Twenty-six copies of the do-while stay at one path
# but push NPATH to 2**26.
many = "void w(void) {" + " do { ; } while (0);" * 26 + " }"
(w,), _ = parse_translation_unit(SourceFile("many.c", many))
print("26 do-while(0):", acpath_body(w, 2), npath_body(w))

"""C sources used as fixed inputs across the test suite.

Straight-line blocks with no branching are written as the empty statement
``;``.
"""

EXAMPLE_1 = """\
int f(int a, int b, int c, int d, int e) {
  if (a && b && c)
    return d ? 0 : 1;
  else
    return e ? 0 : 1;
}
"""

EXAMPLE_2 = """\
int f(int a, int b, int c, int d) {
  while (a || (b && c && d)) {
    ;
  }
}
"""

EXAMPLE_3 = """\
int f(int a, int b, int c) {
  switch (a) {
    case 1: b ? 0 : 1;
    default: return c ? 0 : 1;
  }
}
"""

EXAMPLE_4 = """\
void f(int a, int b, int c, int d, int e) {
  do {
    if (a)
      {jump};
    if (b)
      ;
    else
      ;
  } while (c);
}
"""

EXAMPLE_5 = """\
void f(void) {
  do { ; } while (0);
}
"""

GOTO_INTO_LOOP = """\
void f(int x) {
  goto l1;
  while (x) {
    break;
   l1: ;
  }
}
"""

SWITCH_INTO_LOOP = """\
void g(int x, int y) {
  switch (x) {
      do {
        return;
    case 0: ;
      } while (y);
  }
}
"""

# Reference bodies with their acyclic path counts on the level-0 graph.
FIGURES = {
    "cfg4": ("if (a && b && c) return d ? 0 : 1; else return e ? 0 : 1;", 8),
    "cfg15": ("while (a) if (b) break; else continue;", 3),
    "cfg18": ("while ((a || b) && (c || d)) ;", 7),
    "cfg28": ("do ; while ((a || b) && (c || d));", 3),
    "cfg29": ("switch (a) { case 1: { ; break; } case 2: if (b) ; else { ; break; } default: ; }", 4),
    "cfg27": ("switch (a) case 0: do { ; case 1: ; case 2: ; case 3: ; } while (b);", 5),
    "cfg24": ("if (a) goto l1; else l1: goto l2; while (b) ; l2: ;", 2),
}


def example_4(jump: str) -> str:
    return EXAMPLE_4.replace("{jump}", jump)


def do_while_zero(k: int) -> str:
    return "void w(void) {\n" + "  do { ; } while (0);\n" * k + "}\n"


def one_armed_ifs(k: int) -> str:
    return "void w(int x) {\n" + "  if (x) ;\n" * k + "}\n"

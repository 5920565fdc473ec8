"""Where the single-pass count is exact, and where it is not.

ACPATH is exact on controlled bodies: no goto jumps backwards, and nothing
jumps into a loop that can be left by break, return or goto.  The two
functions below break that rule and the count comes out low.
"""

from pathmetric import SourceFile, differential_check, is_controlled, parse_translation_unit

SOURCE = """
void into_loop(int x) {
  goto l1;
  while (x) {
    break;
   l1: ;
  }
}

void duff_like(int x, int y) {
  switch (x) {
      do {
        return;
    case 0: ;
      } while (y);
  }
}

void fine(int x) {
  goto l1;
  while (x) {
   l1: ;
  }
}
"""

functions, _ = parse_translation_unit(SourceFile("demo.c", SOURCE))
for fb in functions:
    report = is_controlled(fb)
    verdict = differential_check(fb, 2)
    kinds = ", ".join(v.kind for v in report.violations) or "-"
    print(f"{fb.name:<10} acpath={verdict.acpath} alpha={verdict.alpha} "
          f"controlled={report.controlled} violations={kinds}")

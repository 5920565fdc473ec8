"""Random controlled bodies checked against the oracle.

The generator only produces bodies the checker accepts.  Each one is
compared with the brute-force count at every optimisation level; the
disagreements are sorted by likely cause and the first one of each kind
is shrunk to a small reproducer.
"""

from collections import Counter

from pathmetric import GenConfig, differential_check, gen_controlled_body, shrink
from pathmetric.harness import classify_mismatch
from pathmetric.parser import format_stmt

causes = Counter()
reproducers = {}
for seed in range(200):
    b = gen_controlled_body(GenConfig(seed=seed))
    for level in (0, 1, 2):
        v = differential_check(b, level)
        if v.match:
            causes["match"] += 1
            continue
        cause = "quarantined" if v.quarantined else classify_mismatch(b, level)
        causes[cause] += 1
        if cause not in reproducers:
            small = shrink(b, lambda fb, i=level: differential_check(fb, i).match is False)
            reproducers[cause] = (level, small)

print(dict(causes))
for cause, (level, fb) in reproducers.items():
    v = differential_check(fb, level)
    print(f"\n{cause} at level {level}: acpath={v.acpath} alpha={v.alpha}")
    print(format_stmt(fb.body))

"""Corpus statistics over a synthetic code base.

Every function gets a report; the statistics compare the two metrics
after the transform ``log(1 + log x)``, which tames their heavy right tail.
The threshold matrix shows how often the metrics disagree about whether a
function crosses 80 or 200 paths.
"""

from pathmetric import GenConfig, corpus_stats, gen_controlled_body
from pathmetric.acpath import acpath_body
from pathmetric.npath import NpathConfig, npath_body

pairs = []
for seed in range(1000):
    b = gen_controlled_body(GenConfig(seed=seed, max_stmts=10))
    pairs.append((acpath_body(b, 2), npath_body(b, NpathConfig(clamp_expr_statements=True))))

s = corpus_stats(pairs)
print(f"functions {s.n}, left out {s.excluded} (a metric below 1)")
print(f"pearson r {s.pearson_r:.3f}, error mean {s.mean_error:.3f}, sd {s.stddev_error:.3f}")
print("skew raw", {k: round(v, 2) for k, v in s.skew_raw.items()})
print("skew transformed", {k: round(v, 2) for k, v in s.skew_transformed.items()})
for k, cells in s.thresholds.items():
    print(k, cells)

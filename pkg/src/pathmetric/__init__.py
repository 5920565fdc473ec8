"""Acyclic execution path counting for C functions.

ACPATH counts the acyclic paths through a function body in a single pass
over its syntax tree; NPATH is the classic syntactic estimate it is
compared against.  A brute-force counter on a reference control-flow graph
serves as ground truth.

>>> from pathmetric import parse_body, acpath_body, npath_body
>>> b = parse_body("while (a || (b && c && d)) ;")
>>> acpath_body(b, 2), npath_body(b)
(6, 5)
"""

from .acpath import (ApcResult, ControlledReport, ExprPairPaths, ExprPaths, Violation,
                     acpath_body, apc_label, apc_stmt, expr_pair_paths, expr_paths,
                     is_controlled)
from .ast import FunctionBody, SemanticError, collect_labels, make_body, validate_body
from .cfg import (Cfg, TriBool, build_body_cfg, build_expr_cfg, build_label_cfg,
                  build_stmt_cfg, eval_ice, mark_constants, to_dot, tv)
from .harness import (Digraph, GenConfig, NoReachableExit, Verdict, differential_check,
                      embed_graph, gen_controlled_body, oracle_expr_paths, random_digraph,
                      random_expr, shrink)
from .npath import NpathConfig, np_expr, np_stmt, npath_body
from .oracle import (BudgetExceeded, OracleBudget, count_acyclic_paths, count_path_pairs,
                     count_paths_to, enumerate_acyclic_paths)
from .parser import (ParseError, SourceFile, format_expr, format_function, format_stmt,
                     parse_body, parse_expression, parse_translation_unit)
from .report import CorpusStats, EmptyCorpus, FunctionReport, NonPositiveValue, corpus_stats

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

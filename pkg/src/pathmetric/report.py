"""Per-function reports, their serialisations, and corpus statistics."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

THRESHOLDS = (80, 200)

# Field order of a JSONL record; counts are decimal strings so that no
# reader loses precision on values beyond 2**53.
FIELDS = ("file", "function", "line", "acpath", "npath", "opt_level",
          "controlled", "verify", "thresholds")


@dataclass(frozen=True)
class FunctionReport:
    file: str
    function: str
    line: int
    acpath: Optional[int]
    npath: Optional[int]
    opt_level: int
    controlled: bool
    verify: Optional[dict] = None

    @property
    def thresholds(self) -> Optional[dict]:
        if self.acpath is None:
            return None
        return {f"over{k}": self.acpath > k for k in THRESHOLDS}

    def to_dict(self) -> dict:
        def dec(v):
            return None if v is None else str(v)

        verify = None
        if self.verify is not None:
            verify = dict(self.verify)
            verify["alpha"] = dec(verify.get("alpha"))
        values = {
            "file": self.file, "function": self.function, "line": self.line,
            "acpath": dec(self.acpath), "npath": dec(self.npath),
            "opt_level": self.opt_level, "controlled": self.controlled,
            "verify": verify, "thresholds": self.thresholds,
        }
        return {k: values[k] for k in FIELDS}

    @classmethod
    def from_dict(cls, d: dict) -> "FunctionReport":
        def num(v):
            return None if v is None else int(v)

        verify = d.get("verify")
        if verify is not None:
            verify = dict(verify, alpha=num(verify.get("alpha")))
        return cls(d["file"], d["function"], int(d["line"]), num(d["acpath"]),
                   num(d["npath"]), int(d["opt_level"]), bool(d["controlled"]), verify)


def to_jsonl(reports: Iterable[FunctionReport]) -> str:
    return "".join(json.dumps(r.to_dict()) + "\n" for r in reports)


def read_jsonl(text: str) -> list[FunctionReport]:
    return [FunctionReport.from_dict(json.loads(line))
            for line in text.splitlines() if line.strip()]


def to_csv(reports: Iterable[FunctionReport]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["file", "function", "line", "acpath", "npath", "opt_level",
                "controlled", "alpha", "match", "over80", "over200"])
    for r in reports:
        d = r.to_dict()
        v = d["verify"] or {}
        t = d["thresholds"] or {}
        w.writerow([d["file"], d["function"], d["line"], d["acpath"] or "",
                    d["npath"] or "", d["opt_level"], d["controlled"],
                    v.get("alpha") or "", v.get("match", ""),
                    t.get("over80", ""), t.get("over200", "")])
    return out.getvalue()


def to_text(reports: Iterable[FunctionReport]) -> str:
    lines = []
    for r in reports:
        parts = [f"{r.file}:{r.line}: {r.function}"]
        if r.acpath is not None:
            parts.append(f"acpath={r.acpath}")
        if r.npath is not None:
            parts.append(f"npath={r.npath}")
        if not r.controlled:
            parts.append("not-controlled")
        if r.verify is not None:
            alpha = r.verify.get("alpha")
            parts.append("alpha=" + ("?" if alpha is None else str(alpha)))
            if r.verify.get("note"):
                parts.append(f"({r.verify['note']})")
        if r.thresholds and r.thresholds["over200"]:
            parts.append("over200")
        elif r.thresholds and r.thresholds["over80"]:
            parts.append("over80")
        lines.append(" ".join(parts))
    return "".join(line + "\n" for line in lines)


# --------------------------------------------------------------------------
# Statistics


class EmptyCorpus(ValueError):
    pass


class NonPositiveValue(ValueError):
    def __init__(self, excluded: int):
        super().__init__(f"{excluded} record(s) have a metric below 1")
        self.excluded = excluded


def loglog(x) -> float:
    """The skew-reducing transform ``log(1 + log(x))``, defined for x >= 1."""
    return math.log1p(math.log(x))


def _scaled(xs) -> np.ndarray:
    # skewness ignores positive scaling; dividing by the largest value first
    # keeps counts beyond the float range usable (int / int is exact-rounded)
    top = max(xs)
    return np.array([x / top for x in xs])


def _skew(v: np.ndarray) -> float:
    sd = v.std()
    if sd == 0:
        return math.nan
    return float(np.mean((v - v.mean()) ** 3) / sd ** 3)


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    if np.array_equal(x, y) and x.std() > 0:
        return 1.0
    dx, dy = x - x.mean(), y - y.mean()
    den = math.sqrt(float(np.sum(dx * dx)) * float(np.sum(dy * dy)))
    if den == 0:
        return math.nan
    return float(np.clip(np.sum(dx * dy) / den, -1.0, 1.0))


@dataclass(frozen=True)
class CorpusStats:
    n: int
    excluded: int
    skew_raw: dict
    skew_transformed: dict
    pearson_r: float
    mean_error: float
    stddev_error: float
    # per threshold k: counts of the four (acpath > k, npath > k) combinations
    thresholds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "excluded": self.excluded,
            "skew_raw": self.skew_raw, "skew_transformed": self.skew_transformed,
            "pearson_r": self.pearson_r, "mean_error": self.mean_error,
            "stddev_error": self.stddev_error,
            "thresholds": {str(k): v for k, v in self.thresholds.items()},
        }


def corpus_stats(pairs: Sequence[tuple], strict: bool = False) -> CorpusStats:
    """Correlation and error statistics for ``(acpath, npath)`` pairs.

    Both metrics go through :func:`loglog`; the error of a function is
    ``loglog(npath) - loglog(acpath)``.  Standard deviations are population
    ones.  Pairs with a value below 1 are left out and counted, or raise
    :class:`NonPositiveValue` when ``strict`` is set.
    """
    good = [(a, b) for a, b in pairs if a >= 1 and b >= 1]
    excluded = len(pairs) - len(good)
    if excluded and strict:
        raise NonPositiveValue(excluded)
    if not good:
        raise EmptyCorpus("no usable records")
    ap_raw = _scaled([a for a, _ in good])
    np_raw = _scaled([b for _, b in good])
    ap = np.array([loglog(a) for a, _ in good])
    npv = np.array([loglog(b) for _, b in good])
    err = npv - ap
    table = {}
    for k in THRESHOLDS:
        over_a = np.array([a > k for a, _ in good])
        over_n = np.array([b > k for _, b in good])
        table[k] = {
            "acpath_over_npath_within": int(np.sum(over_a & ~over_n)),
            "acpath_within_npath_over": int(np.sum(~over_a & over_n)),
            "both_over": int(np.sum(over_a & over_n)),
            "both_within": int(np.sum(~over_a & ~over_n)),
        }
    return CorpusStats(
        n=len(good), excluded=excluded,
        skew_raw={"acpath": _skew(ap_raw), "npath": _skew(np_raw)},
        skew_transformed={"acpath": _skew(ap), "npath": _skew(npv)},
        pearson_r=_pearson(ap, npv),
        mean_error=float(err.mean()), stddev_error=float(err.std()),
        thresholds=table,
    )


def stats_from_reports(reports: Iterable[FunctionReport], strict: bool = False) -> CorpusStats:
    pairs = [(r.acpath, r.npath) for r in reports
             if r.acpath is not None and r.npath is not None]
    return corpus_stats(pairs, strict)

"""Result records shared by the primorial verifier and the range scanner."""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field, replace
from decimal import Decimal, localcontext
from fractions import Fraction

from .interval import DirectedValue, to_fraction


class VerificationError(RuntimeError):
    """A verification could not be completed soundly."""


class Verdict(enum.Enum):
    BELOW = "BELOW"
    ABOVE = "ABOVE"
    INDETERMINATE = "INDETERMINATE"


def classify(ratio: DirectedValue, threshold) -> Verdict:
    """BELOW iff ratio.hi <= threshold, ABOVE iff ratio.lo > threshold."""
    c = to_fraction(threshold)
    if Fraction(ratio.hi) <= c:
        return Verdict.BELOW
    if Fraction(ratio.lo) > c:
        return Verdict.ABOVE
    return Verdict.INDETERMINATE


@dataclass(frozen=True)
class RatioRecord:
    """One evaluated ratio for an integer n (or a primorial index k)."""

    subject: int
    ratio: DirectedValue
    exact: bool
    verdict: Verdict
    subject_kind: str = "n"
    approx: float | None = None  # fast-filter value, used only for ordering

    @classmethod
    def build(cls, subject: int, ratio: DirectedValue, threshold, exact: bool, **kw) -> RatioRecord:
        return cls(subject, ratio, exact, classify(ratio, threshold), **kw)

    @property
    def sort_key(self):
        # max() picks the larger ratio, ties go to the smaller subject
        val = self.approx if self.approx is not None else self.ratio.mid
        return (val, -self.subject)

    def to_dict(self) -> dict:
        return {
            self.subject_kind: str(self.subject),
            "ratio_lo": repr(self.ratio.lo),
            "ratio_hi": repr(self.ratio.hi),
            "exact": self.exact,
            "verdict": self.verdict.value,
        }


def _max_record(a: RatioRecord | None, b: RatioRecord | None) -> RatioRecord | None:
    if a is None:
        return b
    if b is None:
        return a
    return a if a.sort_key >= b.sort_key else b


@dataclass
class ScanReport:
    """Outcome of an exhaustive scan over [lo, hi) or a primorial index range."""

    kind: str
    lo: int
    hi: int
    threshold: Fraction | None
    exceptions: list[RatioRecord] = field(default_factory=list)
    max_ratio: RatioRecord | None = None
    total: int = 0
    satisfying: int = 0
    excluded: list[tuple[int, str]] = field(default_factory=list)
    unresolved: list[RatioRecord] = field(default_factory=list)
    audited: int = 0
    runtime_ms: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.exceptions and not self.unresolved

    @property
    def exception_subjects(self) -> list[int]:
        return [r.subject for r in self.exceptions]

    def merge(self, other: ScanReport) -> ScanReport:
        """Combine reports of two adjacent ranges (self first)."""
        if (self.kind, self.threshold) != (other.kind, other.threshold):
            raise ValueError("cannot merge reports of different scans")
        if self.hi != other.lo:
            raise ValueError(f"ranges [{self.lo},{self.hi}) and [{other.lo},{other.hi}) are not adjacent")
        extra = dict(self.extra)
        for key, val in other.extra.items():
            if key in extra and isinstance(val, (int, list)):
                extra[key] = extra[key] + val
            else:
                extra.setdefault(key, val)
        return replace(
            self,
            hi=other.hi,
            exceptions=self.exceptions + other.exceptions,
            max_ratio=_max_record(self.max_ratio, other.max_ratio),
            total=self.total + other.total,
            satisfying=self.satisfying + other.satisfying,
            excluded=self.excluded + other.excluded,
            unresolved=self.unresolved + other.unresolved,
            audited=self.audited + other.audited,
            runtime_ms=self.runtime_ms + other.runtime_ms,
            extra=extra,
        )

    # serialisation ------------------------------------------------------

    def to_dict(self, runtime: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "range": [str(self.lo), str(self.hi)],
            "threshold": None if self.threshold is None else _decimal_str(self.threshold),
            "exceptions": [r.to_dict() for r in self.exceptions],
            "max_ratio": None if self.max_ratio is None else self.max_ratio.to_dict(),
            "counts": {
                "total": str(self.total),
                "satisfying": str(self.satisfying),
                "audited": str(self.audited),
            },
            "excluded": [{"n": str(n), "reason": why} for n, why in self.excluded],
            "unresolved": [r.to_dict() for r in self.unresolved],
            "extra": {k: _jsonable(v) for k, v in sorted(self.extra.items())},
        }
        if runtime:
            out["runtime_ms"] = f"{self.runtime_ms:.1f}"
        return out

    def to_json(self, runtime: bool = True) -> str:
        return json.dumps(self.to_dict(runtime), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        key = self.exceptions[0].subject_kind if self.exceptions else "n"
        w.writerow([key, "ratio_lo", "ratio_hi", "exact", "verdict"])
        for r in self.exceptions + self.unresolved:
            w.writerow([r.subject, repr(r.ratio.lo), repr(r.ratio.hi), r.exact, r.verdict.value])
        return buf.getvalue()


def merge_reports(reports: list[ScanReport]) -> ScanReport:
    if not reports:
        raise ValueError("nothing to merge")
    out = reports[0]
    for r in reports[1:]:
        out = out.merge(r)
    return out


def _decimal_str(q: Fraction) -> str:
    den = q.denominator
    for f in (2, 5):
        while den % f == 0:
            den //= f
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    with localcontext() as ctx:
        ctx.prec = 100
        return format(Decimal(q.numerator) / Decimal(q.denominator), "f")


def _jsonable(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return _decimal_str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return str(v)

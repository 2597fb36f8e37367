"""Ingestion and classification of published squeezing records.

A record carries whatever a publication actually printed: extremal
variances in dB, a squeezed fraction read off a phase-sweep plot, or
both.  The pipeline reconciles the two F_T routes (arctangent formula
versus graphical), classifies each record against a set of bound curves
and the lossless-OPA limit, and fits the largest argument-scale factor
for which a curve family excludes nothing (the envelope fit).

Dataset format: CSV with header

    id,ref_label,x,omega_over_gamma,beta,s_minus_db,s_plus_db,s_err_db,ft_formula,ft_graphical,ft_err

UTF-8, ``#`` comment lines permitted, absent values are empty fields.
Reports serialize to JSON with all numbers quantized to 6 significant
digits at assembly time, so serialization round-trips losslessly; the
-inf squeezing sentinel is carried as the string "-inf".
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy import optimize

from .opa import ideal_bound
from .qi_bound import QiCurve, QuadratureConfig, curve_csv, curve_value
from .units import round_sig, to_db

# Applied when a source gives no uncertainty; always flagged in the report.
DEFAULT_S_ERR_DB = 0.5
DEFAULT_FT_ERR = 0.02

DATASET_COLUMNS = (
    "id", "ref_label", "x", "omega_over_gamma", "beta",
    "s_minus_db", "s_plus_db", "s_err_db",
    "ft_formula", "ft_graphical", "ft_err",
)

_CAVEATS = (
    "phase-noise corrections applied in some source fits are not modeled",
    "absent uncertainties default to 0.5 dB / 0.02 in F_T and are flagged per record",
)


class DatasetError(ValueError):
    """Malformed dataset row; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FitError(RuntimeError):
    """No feasible envelope scale exists (malformed data)."""


class FtMethod(enum.Enum):
    FORMULA = "formula"
    GRAPHICAL = "graphical"
    AVERAGE = "average"


class RecordFlag(enum.Enum):
    VIOLATES = "violates"
    CONSISTENT = "consistent"
    WITHIN_ERROR = "within-error"


@dataclass(frozen=True)
class SqueezingRecord:
    """One experimental data point, fields as printed in the source."""

    id: str
    ref_label: str = ""
    x: float | None = None
    w: float | None = None
    beta: float | None = None
    s_minus_db: float | None = None
    s_plus_db: float | None = None
    s_err_db: float | None = None
    ft_formula: float | None = None
    ft_graphical: float | None = None
    ft_err: float | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if self.s_minus_db is not None and self.s_plus_db is not None:
            if not (self.s_minus_db < 0.0 < self.s_plus_db):
                raise ValueError(
                    f"record {self.id}: need s_minus_db < 0 < s_plus_db, "
                    f"got ({self.s_minus_db}, {self.s_plus_db})"
                )
        if self.x is not None and not (0.0 < self.x < 1.0):
            raise ValueError(f"record {self.id}: x={self.x} outside (0, 1)")
        if self.beta is not None and not (0.0 < self.beta <= 1.0):
            raise ValueError(f"record {self.id}: beta={self.beta} outside (0, 1]")
        if self.w is not None and self.w < 0:
            raise ValueError(f"record {self.id}: omega_over_gamma must be >= 0")
        for name in ("ft_formula", "ft_graphical"):
            v = getattr(self, name)
            if v is not None and not (0.0 < v < 1.0):
                raise ValueError(f"record {self.id}: {name}={v} outside (0, 1)")
        for name in ("s_err_db", "ft_err"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"record {self.id}: {name} must be non-negative")

    @property
    def is_stub(self) -> bool:
        return (self.s_minus_db is None and self.s_plus_db is None
                and self.ft_formula is None and self.ft_graphical is None)


def _parse_field(raw: str, line: int, name: str) -> float | None:
    raw = raw.strip()
    if raw == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise DatasetError(f"field {name!r} is not a number: {raw!r}", line) from None


def load_records(source: str | Path) -> list[SqueezingRecord]:
    """Read a dataset CSV from a path or from literal CSV text."""
    if isinstance(source, Path) or "\n" not in str(source):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = str(source)
    records = []
    header_seen = False
    reader = csv.reader(io.StringIO(text))
    for line_no, row in enumerate(reader, start=1):
        if not row or (row[0].lstrip().startswith("#")):
            continue
        if not header_seen:
            got = tuple(c.strip() for c in row)
            if got != DATASET_COLUMNS:
                raise DatasetError(f"bad header {got!r}, expected {DATASET_COLUMNS!r}", line_no)
            header_seen = True
            continue
        if len(row) != len(DATASET_COLUMNS):
            raise DatasetError(f"expected {len(DATASET_COLUMNS)} fields, got {len(row)}", line_no)
        rid, ref = row[0].strip(), row[1].strip()
        vals = {name: _parse_field(row[i], line_no, name)
                for i, name in enumerate(DATASET_COLUMNS) if i >= 2}
        try:
            records.append(SqueezingRecord(
                id=rid, ref_label=ref,
                x=vals["x"], w=vals["omega_over_gamma"], beta=vals["beta"],
                s_minus_db=vals["s_minus_db"], s_plus_db=vals["s_plus_db"],
                s_err_db=vals["s_err_db"],
                ft_formula=vals["ft_formula"], ft_graphical=vals["ft_graphical"],
                ft_err=vals["ft_err"],
            ))
        except ValueError as exc:
            raise DatasetError(str(exc), line_no) from None
    if not header_seen:
        raise DatasetError("dataset has no header row")
    return records


def ft_from_extremes(s_minus_db: float, s_plus_db: float) -> float:
    """Squeezed fraction from extremal variances given in dB.

    Converts to linear ratios and applies
    F_T = 1 - (2/pi) * arctan sqrt((S+ - 1)/(1 - S-)).
    """
    if not (s_minus_db < 0.0 < s_plus_db):
        raise ValueError(f"need s_minus_db < 0 < s_plus_db, got ({s_minus_db}, {s_plus_db})")
    sm = 10.0 ** (s_minus_db / 10.0)
    sp = 10.0 ** (s_plus_db / 10.0)
    return 1.0 - (2.0 / math.pi) * math.atan(math.sqrt((sp - 1.0) / (1.0 - sm)))


@dataclass(frozen=True)
class Reconciled:
    ft: float
    method: FtMethod
    discrepancy: float | None  # |formula - graphical| / mean, when both exist


def reconcile_ft(record: SqueezingRecord) -> Reconciled | None:
    """Pick the F_T to use for one record; None when no route exists.

    The formula route is the explicit ft_formula field, or the arctangent
    conversion of the extremal variances when both are present.  When the
    formula and graphical routes are both available their arithmetic mean
    is used and the relative discrepancy is reported.
    """
    formula = record.ft_formula
    if formula is None and record.s_minus_db is not None and record.s_plus_db is not None:
        formula = ft_from_extremes(record.s_minus_db, record.s_plus_db)
    graphical = record.ft_graphical
    if formula is not None and graphical is not None:
        mean = 0.5 * (formula + graphical)
        return Reconciled(ft=mean, method=FtMethod.AVERAGE,
                          discrepancy=abs(formula - graphical) / mean)
    if formula is not None:
        return Reconciled(ft=formula, method=FtMethod.FORMULA, discrepancy=None)
    if graphical is not None:
        return Reconciled(ft=graphical, method=FtMethod.GRAPHICAL, discrepancy=None)
    return None


@dataclass
class RecordResult:
    record_id: str
    ft_used: float
    ft_method: str
    r_db_used: float
    s_err_db_used: float
    ft_err_used: float
    violations: dict[str, bool]
    flags: dict[str, str]
    ideal_opa_exceeded: bool | None
    ft_discrepancy: float | None
    assumed_error_fields: list[str]


@dataclass
class ScaleFit:
    curve_id: str
    envelope_k: float
    least_squares_k: float


@dataclass
class AnalysisReport:
    per_record: list[RecordResult] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    method_agreement_rms: float | None = None
    fitted_scales: dict[str, ScaleFit] = field(default_factory=dict)
    curve_samples: dict[str, str] = field(default_factory=dict)
    caveats: list[str] = field(default_factory=lambda: list(_CAVEATS))

    def to_json(self) -> str:
        return json.dumps(_encode(asdict(self)), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        raw = _decode(json.loads(text))
        report = cls(
            skipped=raw["skipped"],
            method_agreement_rms=raw["method_agreement_rms"],
            curve_samples=raw["curve_samples"],
            caveats=raw["caveats"],
        )
        report.per_record = [RecordResult(**r) for r in raw["per_record"]]
        report.fitted_scales = {k: ScaleFit(**v) for k, v in raw["fitted_scales"].items()}
        return report


def _encode(obj):
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_encode(v) for v in obj]
    if isinstance(obj, float):
        return "-inf" if obj == -math.inf else obj
    return obj


def _decode(obj):
    if isinstance(obj, dict):
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    if obj == "-inf":
        return -math.inf
    return obj


def _q(x: float | None) -> float | None:
    return None if x is None else round_sig(x, 6)


def _ideal_r_db(ft: float) -> float:
    # The lossless bound saturates at 0 dB for ft >= 1/2 (squeezing can
    # never occupy more than half the cycle).
    if ft >= 0.5:
        return 0.0
    return to_db(ideal_bound(ft))


def _flag(r: float, s_err: float, ft: float, ft_err: float, curve: QiCurve,
          cfg: QuadratureConfig | None) -> RecordFlag:
    # Bound curves increase with ft, so the error rectangle sits entirely
    # below the curve iff its top-left corner does (and the bound diverges
    # to -inf as ft -> 0, so a rectangle reaching ft <= 0 can never be
    # entirely below).
    lo_ft = ft - ft_err
    hi_ft = min(ft + ft_err, 1.0)
    r_at_lo = curve_value(curve, lo_ft, cfg) if lo_ft > 0 else -math.inf
    r_at_hi = curve_value(curve, hi_ft, cfg)
    if r + s_err < r_at_lo:
        return RecordFlag.VIOLATES
    if r - s_err >= r_at_hi:
        return RecordFlag.CONSISTENT
    return RecordFlag.WITHIN_ERROR


DEFAULT_FT_GRID = tuple(np.round(np.arange(0.01, 0.5001, 0.01), 6))


def classify(
    records: list[SqueezingRecord],
    curves: list[QiCurve],
    include_ideal: bool = True,
    fit_curves: list[QiCurve] | None = None,
    cfg: QuadratureConfig | None = None,
    ft_grid=DEFAULT_FT_GRID,
) -> AnalysisReport:
    """Classify every record against every curve; assemble the report.

    A record *violates* a curve when its measured squeezing is strictly
    more negative than the bound at its F_T; the three-state flag folds in
    the +-s_err_db / +-ft_err error rectangle.  Classification is per
    record and order-independent; the report is ordered by record id.
    """
    report = AnalysisReport()
    discrepancies = []
    for record in sorted(records, key=lambda r: r.id):
        rec = reconcile_ft(record)
        if rec is None:
            reason = "no measurements" if record.is_stub else "no F_T route available"
            report.skipped.append({"id": record.id, "reason": reason})
            continue
        if record.s_minus_db is None:
            report.skipped.append({"id": record.id, "reason": "no squeezing depth (s_minus_db)"})
            continue
        if rec.discrepancy is not None:
            discrepancies.append(rec.discrepancy)
        assumed = []
        s_err = record.s_err_db
        if s_err is None:
            s_err = DEFAULT_S_ERR_DB
            assumed.append("s_err_db")
        ft_err = record.ft_err
        if ft_err is None:
            ft_err = DEFAULT_FT_ERR
            assumed.append("ft_err")
        r = record.s_minus_db
        violations = {}
        flags = {}
        for curve in curves:
            bound = curve_value(curve, rec.ft, cfg)
            violations[curve.curve_id] = bool(r < bound)
            flags[curve.curve_id] = _flag(r, s_err, rec.ft, ft_err, curve, cfg).value
        exceeded = bool(r < _ideal_r_db(rec.ft)) if include_ideal else None
        report.per_record.append(RecordResult(
            record_id=record.id,
            ft_used=_q(rec.ft),
            ft_method=rec.method.value,
            r_db_used=_q(r),
            s_err_db_used=_q(s_err),
            ft_err_used=_q(ft_err),
            violations=violations,
            flags=flags,
            ideal_opa_exceeded=exceeded,
            ft_discrepancy=_q(rec.discrepancy),
            assumed_error_fields=assumed,
        ))
    if discrepancies:
        report.method_agreement_rms = _q(float(np.sqrt(np.mean(np.square(discrepancies)))))
    fts = list(ft_grid)
    for curve in curves:
        report.curve_samples[curve.curve_id] = curve_csv([curve], fts, cfg)
    if include_ideal:
        lines = ["ft,r_db,curve_id,window,variant,scale"]
        for ft in fts:
            lines.append(f"{float(ft):.6g},{_ideal_r_db(float(ft)):.4f},ideal-opa,ideal-opa,,1")
        report.curve_samples["ideal-opa"] = "\n".join(lines) + "\n"
    for curve in (fit_curves or []):
        fit = fit_scale(records, curve, cfg)
        report.fitted_scales[curve.curve_id] = ScaleFit(
            curve_id=fit.curve_id,
            envelope_k=_q(fit.envelope_k),
            least_squares_k=_q(fit.least_squares_k),
        )
    return report


def _classifiable_points(records: list[SqueezingRecord]) -> list[tuple[float, float]]:
    points = []
    for record in records:
        rec = reconcile_ft(record)
        if rec is None or record.s_minus_db is None:
            continue
        points.append((rec.ft, record.s_minus_db))
    return points


def _scaled(curve: QiCurve, k: float) -> QiCurve:
    return QiCurve(window=curve.window, variant=curve.variant, scale=k,
                   n=curve.n, evaluation=curve.evaluation,
                   allow_unstable=curve.allow_unstable)


def fit_scale(
    records: list[SqueezingRecord],
    curve: QiCurve,
    cfg: QuadratureConfig | None = None,
    tol: float = 1e-6,
) -> ScaleFit:
    """Fit the argument scale of a curve family to the data.

    The primary result is the envelope scale: the largest k in (0, 1]
    such that no record falls below the scaled curve, found by bisection
    to ``tol``.  (Shrinking k drags the curve toward -inf everywhere, so
    some feasible k always exists for finite data.)  A least-squares k
    minimizing the squared dB residuals is returned alongside as a
    diagnostic; it is not constrained to exclude nothing.
    """
    points = _classifiable_points(records)
    if not points:
        raise FitError("no classifiable records to fit")

    def violations(k: float) -> int:
        c = _scaled(curve, k)
        return sum(1 for ft, r in points if r < curve_value(c, ft, cfg))

    if violations(1.0) == 0:
        envelope = 1.0
    else:
        lo, hi = 1e-9, 1.0
        if violations(lo) > 0:
            raise FitError("no feasible envelope scale at k -> 0 (malformed data)")
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if violations(mid) == 0:
                lo = mid
            else:
                hi = mid
        envelope = lo

    def cost(k: float) -> float:
        c = _scaled(curve, k)
        return sum((r - max(curve_value(c, ft, cfg), -60.0)) ** 2 for ft, r in points)

    ls = optimize.minimize_scalar(cost, bounds=(1e-4, 2.0), method="bounded",
                                  options={"xatol": 1e-8})
    return ScaleFit(curve_id=curve.curve_id, envelope_k=envelope,
                    least_squares_k=float(ls.x))

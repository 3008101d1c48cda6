"""
Sweep reports: CSV table, JSON records and a static SVG plot.

CSV columns, one row per record, values taken at the deepest computed depth:

    parameter         p/q for rational records, repr of the float otherwise
    param_kind        rational | float
    sim_dim           similarity dimension
    delta_n           minimal positive cylinder gap (exact p/q on the rational lane)
    has_collision     exact collision flag (empty on the float lane)
    d_n               entropy ratio H_n / (n log L)
    depth             the depth n the row reports
    rho_n             delta_n ** (1/n)
    entropy_nats      H_n
    witness_count     number of overlap witnesses
    criterion_passed  singularity criterion report status
    phi               integral of the probe function
    budget_exceeded   computation budget or timeout hit
    errors            per-metric error messages joined by "; "
"""

import io
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from ..config.logging_config import get_logger, log_function_entry, log_function_exit  # noqa: E402
from ..ifs.errors import FamilyValidationError, ParseError  # noqa: E402
from ..ifs.rational import format_fraction  # noqa: E402
from ..storage.storage_manager import ResultStore, get_result_store  # noqa: E402
from .runner import SweepRecord  # noqa: E402

logger = get_logger(__name__)

CSV_COLUMNS = [
    "parameter", "param_kind", "sim_dim", "delta_n", "has_collision", "d_n", "depth",
    "rho_n", "entropy_nats", "witness_count", "criterion_passed", "phi",
    "budget_exceeded", "errors",
]
FORMATS = ("csv", "json", "svg")
MARKER_GROUP = "sweep-markers"
RECORDS_FORMAT = "ifsweep-records"


def _csv_row(record: SweepRecord) -> Dict[str, Any]:
    row: Dict[str, Any] = dict.fromkeys(CSV_COLUMNS)
    row["parameter"] = record.parameter_text()
    row["param_kind"] = record.param_kind
    row["sim_dim"] = record.similarity_dim
    if record.separation is not None and record.separation.depths:
        sep = record.separation
        delta = sep.delta_n[-1]
        row["delta_n"] = format_fraction(delta) if sep.exact else repr(float(delta))
        row["has_collision"] = str(sep.has_collision[-1]).lower() if sep.exact else None
        row["rho_n"] = sep.rho_n[-1]
        row["depth"] = sep.depths[-1]
    if record.dimension is not None and record.dimension.depths:
        row["d_n"] = record.dimension.ratio[-1]
        row["entropy_nats"] = record.dimension.entropy_nats[-1]
        row["depth"] = record.dimension.depths[-1]
    if record.witnesses is not None:
        row["witness_count"] = len(record.witnesses)
    if record.class_report is not None:
        row["criterion_passed"] = str(record.class_report.passed).lower()
    if record.phi_values:
        row["phi"] = record.phi_values[-1]
    row["budget_exceeded"] = str(record.budget_exceeded).lower()
    row["errors"] = "; ".join(record.errors)
    return row


def records_frame(records: Sequence[SweepRecord]) -> pd.DataFrame:
    frame = pd.DataFrame([_csv_row(r) for r in records], columns=CSV_COLUMNS)
    for column in ("depth", "witness_count"):
        frame[column] = frame[column].astype("Int64")
    return frame


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    return records_frame(records).to_csv(index=False, float_format="%.12g", lineterminator="\n")


def records_to_json(records: Sequence[SweepRecord]) -> str:
    payload = {"format": RECORDS_FORMAT, "records": [r.to_dict() for r in records]}
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def records_from_json(text: str) -> List[SweepRecord]:
    """Inverse of records_to_json."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid records JSON: {e}") from e
    if not isinstance(payload, dict) or payload.get("format") != RECORDS_FORMAT:
        raise ParseError("Not an ifsweep records document")
    return [SweepRecord.from_dict(item) for item in payload["records"]]


def records_to_svg(records: Sequence[SweepRecord], title: Optional[str] = None) -> str:
    """
    Scatter of d_{n_max} against the parameter, with the similarity dimension
    and the height-1 reference line. One marker per record carrying an
    entropy profile; the markers are grouped under the id `sweep-markers`.
    """
    plotted = [r for r in records if r.dimension is not None and r.dimension.ratio]
    xs = [float(r.parameter) for r in plotted]
    ys = [r.dimension.ratio[-1] for r in plotted]

    matplotlib.rcParams["svg.hashsalt"] = "ifsweep"
    fig, ax = plt.subplots(figsize=(8, 5))
    try:
        markers = ax.scatter(xs, ys, s=18, color="tab:blue", zorder=3)
        markers.set_gid(MARKER_GROUP)

        sim = sorted(((float(r.parameter), r.similarity_dim) for r in records
                      if r.similarity_dim is not None))
        if sim:
            ax.plot([p for p, _ in sim], [s for _, s in sim], color="tab:orange",
                    linewidth=1.2, gid="similarity-dimension")
        ax.axhline(1.0, color="grey", linestyle="--", linewidth=1.0, gid="height-one")

        depth = plotted[0].dimension.depths[-1] if plotted else None
        ax.set_xlabel("parameter u")
        ax.set_ylabel(f"d_{depth}" if depth else "d_n")
        ax.set_title(title or "Entropy dimension estimates")
        ax.grid(True, alpha=0.3)

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
        return buffer.getvalue()
    finally:
        plt.close(fig)


def emit_report(records: Sequence[SweepRecord], format: str,
                path: Union[str, Path], store: Optional[ResultStore] = None) -> Path:
    """
    Write the records as csv, json or svg.

    Args:
        records: Nonempty, already ordered records
        format: One of FORMATS
        path: Target file; relative paths land under the output directory
        store: Result store to write through (global store by default)

    Returns:
        The written path
    """
    if not records:
        raise FamilyValidationError("Nothing to report: no records")
    if format not in FORMATS:
        raise FamilyValidationError(f"Unknown report format {format!r}; choose from {FORMATS}")
    log_function_entry(logger, "emit_report", format=format, path=str(path), records=len(records))

    if format == "csv":
        text = records_to_csv(records)
    elif format == "json":
        text = records_to_json(records)
    else:
        text = records_to_svg(records)

    written = (store or get_result_store()).save_text(path, text)
    log_function_exit(logger, "emit_report", str(written))
    return written

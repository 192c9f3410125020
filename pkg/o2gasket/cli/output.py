"""
Serialization of reports to JSON or CSV.

Field order follows the report models and floats are written with 17
significant digits, so identical runs produce byte-identical output.
"""

import csv
import io
import json
import logging
import math
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from pydantic import BaseModel

from o2gasket.core.config import settings
from o2gasket.schemas.reports import LadderStatistics
from o2gasket.services.walks.ladders import histogram_rows

logger = logging.getLogger(__name__)


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


def format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{settings.FLOAT_DIGITS}g")


def _plain(obj: Any) -> Any:
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="python")
    return obj


def _json(obj: Any) -> str:
    obj = _plain(obj)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, Enum):
        return json.dumps(obj.value)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        # JSON has no non-finite numbers
        return format_float(obj) if math.isfinite(obj) else json.dumps(format_float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        keys = list(obj.keys())
        if keys and all(isinstance(k, int) for k in keys):
            keys.sort()
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(obj[k])}" for k in keys) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(item) for item in obj) + "]"
    return json.dumps(str(obj))


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (dict, list, tuple)):
        return _json(value)
    return str(value)


def report_rows(report: Any) -> List[Dict[str, Any]]:
    """Rows for CSV output: one per list item, histogram rows for ladder statistics, one row otherwise"""
    if isinstance(report, LadderStatistics):
        report = histogram_rows(report)
    if isinstance(report, (list, tuple)):
        return [_plain(item) for item in report]
    return [_plain(report)]


def _csv(report: Any) -> str:
    rows = report_rows(report)
    buffer = io.StringIO()
    if not rows:
        return ""
    writer = csv.writer(buffer, lineterminator="\n")
    header = list(rows[0].keys())
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(name)) for name in header])
    return buffer.getvalue()


def emit_report(report: Any, fmt: OutputFormat = OutputFormat.JSON) -> str:
    """Serialize a report model, or a list of row models, as JSON or CSV text"""
    if OutputFormat(fmt) == OutputFormat.CSV:
        return _csv(report)
    return _json(report) + "\n"


def write_output(text: str, out: Optional[Path] = None, stream: Optional[TextIO] = None) -> None:
    if out is None:
        (stream or sys.stdout).write(text)
        return
    out.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(text)} characters to {out}")


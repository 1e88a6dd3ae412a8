"""Machine-readable report serialization.

CSV output starts with the versioned comment line ``# odelay-lab v1`` so
golden files can detect format drift.  Floats are rendered with repr
(shortest round-trip form), which is deterministic for a given platform.
"""

from __future__ import annotations

import json
import math

__all__ = ["to_csv", "to_json", "CSV_VERSION_LINE"]

CSV_VERSION_LINE = "# odelay-lab v1"


def _cell(v) -> str:
    if v is None or v == "":
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def to_csv(columns: list[str], rows: list[dict]) -> str:
    lines = [CSV_VERSION_LINE, ",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(row.get(c, "")) for c in columns))
    return "\n".join(lines) + "\n"


def _json_value(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def to_json(columns: list[str], rows: list[dict]) -> str:
    ordered = [{c: _json_value(row.get(c, "")) for c in columns} for row in rows]
    return json.dumps(ordered, indent=2) + "\n"

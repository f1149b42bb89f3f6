"""
Output writers for reports, jets and funnel data.

JSON output is byte-deterministic: keys sorted, compact separators, floats
in shortest round-trip form with integral values written as integers.
CSV output uses 6 significant digits for plotting tools.
"""

import json
import math
from typing import Any, Dict, Iterable, List, Mapping, Sequence

CSV_DIGITS = 6


def jsonable(value: Any) -> Any:
    """Normalize nested data for deterministic JSON encoding."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return repr(value)
        if value.is_integer() and abs(value) < 2.0**53:
            return int(value)
        return value
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "to_dict"):
        return jsonable(value.to_dict())
    return float(value)


def to_json(data: Any) -> str:
    """Encode ``data`` as compact sorted JSON."""
    return json.dumps(jsonable(data), sort_keys=True, separators=(",", ":"))


def format_sig(value: Any, digits: int = CSV_DIGITS) -> str:
    """Format a number with ``digits`` significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return f"{value:.{digits}g}"
    return str(value)


def to_csv(rows: Sequence[Mapping[str, Any]], columns: Sequence[str]) -> str:
    """Render rows as CSV with a header line."""
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_sig(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def key_value_rows(data: Mapping[str, Any], prefix: str = "") -> List[Dict[str, Any]]:
    """Flatten a nested mapping into ``key,value`` rows for CSV output."""
    rows: List[Dict[str, Any]] = []
    for key in sorted(data):
        value = data[key]
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            rows.extend(key_value_rows(value, prefix=f"{name}."))
        elif isinstance(value, (list, tuple)):
            for i, item in enumerate(value):
                if isinstance(item, Mapping):
                    rows.extend(key_value_rows(item, prefix=f"{name}[{i}]."))
                else:
                    rows.append({"key": f"{name}[{i}]", "value": item})
        else:
            rows.append({"key": name, "value": value})
    return rows


def to_text(title: str, data: Mapping[str, Any]) -> str:
    """Render a mapping as a titled key/value block."""
    lines = ["=" * 60, title, "=" * 60]
    for row in key_value_rows(data):
        value = row["value"]
        shown = f"{value:.17g}" if isinstance(value, float) else str(value)
        lines.append(f"  {row['key']}: {shown}")
    lines.append("=" * 60)
    return "\n".join(lines) + "\n"


def table_text(title: str, columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
    """Render rows as a fixed-width pass/fail table."""
    rows = list(rows)
    cells = [[format_sig(r[c], 10) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(cell[i]) for cell in cells]) for i, c in enumerate(columns)]
    lines = ["=" * 60, title, "=" * 60]
    lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)))
    lines.append("-" * 60)
    for cell in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(cell, widths)))
    lines.append("=" * 60)
    return "\n".join(lines) + "\n"

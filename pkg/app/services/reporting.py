# app/services/reporting.py
"""
Самоописні таблиці результатів.

CSV: перший рядок `# meta: {...}` з повною конфігурацією запуску, далі заголовок
і записи. JSON: {"metadata": ..., "records": [...]}. Дійсні числа мають 9 значущих
цифр; часових міток немає, тож однаковий запуск дає побайтово однаковий вивід.
"""

import csv
import io
import json
import math
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Union

from pydantic import BaseModel

from app import __version__
from app.constants import FLOAT_DIGITS

Record = Union[Mapping[str, Any], BaseModel]


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, BaseModel):
        return _plain(value.model_dump(mode="python"))
    if isinstance(value, Mapping):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return float(f"{value:.{FLOAT_DIGITS}g}")
    return value


def _cell(value: Any) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return f"{value:.{FLOAT_DIGITS}g}"
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(_plain(value), separators=(",", ":"), sort_keys=True)
    if value is None:
        return ""
    return str(value)


def build_metadata(config: Union[BaseModel, Mapping[str, Any]], **extra: Any) -> Dict[str, Any]:
    meta = {"tool": "guesswork", "version": __version__, "config": _plain(config)}
    meta.update({k: _plain(v) for k, v in extra.items()})
    return meta


def _flat(record: Record) -> Dict[str, Any]:
    return record.model_dump(mode="python") if isinstance(record, BaseModel) else dict(record)


def to_csv(records: Iterable[Record], metadata: Mapping[str, Any], columns: Sequence[str] = ()) -> str:
    rows = [_flat(r) for r in records]
    header: List[str] = list(columns)
    for row in rows:
        header.extend(k for k in row if k not in header)

    buffer = io.StringIO()
    buffer.write("# meta: " + json.dumps(_plain(metadata), sort_keys=True, separators=(",", ":")) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(k)) for k in header])
    return buffer.getvalue()


def to_json(records: Iterable[Record], metadata: Mapping[str, Any]) -> str:
    document = {"metadata": _plain(metadata), "records": [_plain(_flat(r)) for r in records]}
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def render(records: Iterable[Record], metadata: Mapping[str, Any], output: str = "csv", columns: Sequence[str] = ()) -> str:
    records = list(records)
    if output == "json":
        return to_json(records, metadata)
    return to_csv(records, metadata, columns)


def read_csv_metadata(text: str) -> Dict[str, Any]:
    """Зворотне до to_csv для першого рядка; зручно в тестах і скриптах."""
    first = text.splitlines()[0]
    if not first.startswith("# meta: "):
        raise ValueError("CSV output has no metadata line")
    return json.loads(first[len("# meta: "):])

"""
Сериализация отчётов: JSON со schema_version и CSV в стиле RFC 4180.
Вывод детерминирован: ключи отсортированы, числа печатаются через repr.
"""
import csv
import io
import json
import math

import numpy as np

SCHEMA_VERSION = 1


def _plain(value):
    """Приводит numpy-типы и нечисловые float к тому, что понимает JSON."""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_plain(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def render_json(command, payload, seed=None):
    document = {'schema_version': SCHEMA_VERSION, 'command': command}
    if seed is not None:
        document['seed'] = seed
    document.update(payload)
    return json.dumps(_plain(document), sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ''
    return str(value)


def render_csv(header, rows, footer=None):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\r\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    if footer:
        writer.writerow([_cell(value) for value in footer])
    return buffer.getvalue()

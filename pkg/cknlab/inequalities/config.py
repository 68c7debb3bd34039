"""
Сборка данных RunConfig: значения по умолчанию из settings, файл --config
и флаги команды (в порядке возрастания приоритета).
"""
import logging
from pathlib import Path

from django.conf import settings

from .exceptions import ArgumentError

logger = logging.getLogger(__name__)


def normalize_key(key):
    return key.strip().lstrip('-').replace('-', '_')


def read_config_file(path):
    """
    Плоский формат key=value: пустые строки и строки с # пропускаются,
    ключи совпадают с именами флагов (дефисы или подчёркивания).
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise ArgumentError(f'Не удалось прочитать файл конфигурации {path}: {exc}') from exc

    values = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ArgumentError(f'{path}:{number}: ожидается строка вида key=value, получено {raw!r}')
        key, value = line.split('=', 1)
        key = normalize_key(key)
        if not key:
            raise ArgumentError(f'{path}:{number}: пустой ключ')
        values[key] = value.strip()
    logger.debug('Из %s прочитано ключей: %d', path, len(values))
    return values


def merge_config(flags, config_path=None, defaults=None):
    """
    Словарь данных для RunConfigForm. Флаги со значением None считаются
    не заданными и не перекрывают файл и значения по умолчанию.
    """
    merged = dict(settings.CKNLAB_DEFAULTS if defaults is None else defaults)
    if config_path:
        from_file = read_config_file(config_path)
        unknown = sorted(set(from_file) - set(merged))
        if unknown:
            raise ArgumentError(f'Неизвестные ключи в файле конфигурации: {", ".join(unknown)}')
        merged.update(from_file)
    for key, value in flags.items():
        if value is not None:
            merged[normalize_key(key)] = value
    return merged

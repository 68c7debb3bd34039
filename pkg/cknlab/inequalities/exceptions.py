"""
Иерархия ошибок лаборатории и коды завершения команд.
"""

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_NOT_CONVERGED = 2
EXIT_USAGE = 64


class CknError(Exception):
    """Базовая ошибка всех численных модулей."""


class DomainError(CknError, ValueError):
    """Точка вне области определения (например, x = 0 для дифференциала φ)."""


class ArgumentError(CknError, ValueError):
    """Недопустимые аргументы: число узлов, показатель веса, разрешение сетки."""


class UnsupportedParametersError(CknError, ValueError):
    """Параметры (n, p, s, t, α) вне области применимости неравенства."""


class DegenerateFieldError(CknError):
    """Нулевой знаменатель отношения: поле численно равно нулю на сетке."""


class FieldEvaluationError(CknError):
    """Поле вернуло нечисловое значение в узле квадратуры."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point

    def __str__(self):
        base = super().__str__()
        if self.point is None:
            return base
        coords = ', '.join(f'{c:.6g}' for c in self.point)
        return f'{base} (узел: ({coords}))'

"""Общие сетки и оракулы для тестов."""
import math

from ..quadrature import GridSettings

# Достаточно для f_k при k ≤ 32: трапеции точны при ang_theta > 2k,
# угловые подынтегральные функции при p = 2 являются многочленами по cos φ
SMALL_GRID = GridSettings(ang_theta=72, ang_phi=16)

ALPHAS = (-0.5, -0.1, 0.5, 1.0, 2.0)


def talenti_constant(n, p):
    """Точная константа Соболева ‖f‖_{np/(n−p)} ≤ C ‖∇f‖_p в R^n."""
    ratio = math.gamma(1 + n / 2) * math.gamma(n) / (math.gamma(n / p) * math.gamma(1 + n - n / p))
    return (math.pi ** -0.5 * n ** (-1 / p) * ((p - 1) / (n - p)) ** (1 - 1 / p)
            * ratio ** (1 / n))


def relative(a, b):
    return abs(a - b) / abs(b)

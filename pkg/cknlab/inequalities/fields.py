"""
Скалярные поля на R^n: значение и градиент, аналитический или
конечно-разностный.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import ArgumentError

logger = logging.getLogger(__name__)

SUPPORT_KIND_CHOICES = [
    ('compact', 'Компактный носитель в шаровом слое [r_lo, r_hi]'),
    ('decaying', 'Убывает; r_hi — радиус, где поле уже мало'),
]

FD_STEP = 1e-5


@dataclass(frozen=True)
class SupportHint:
    """
    Где поле отлично от нуля. radius_power: степень, в которую возводятся
    радиусы основной сетки, чтобы она покрывала поле (1/(1+α) для f∘φ).
    """
    kind: str = 'decaying'
    r_lo: float = 0.0
    r_hi: float = 5.0
    radius_power: float = 1.0

    def __post_init__(self):
        if self.kind not in dict(SUPPORT_KIND_CHOICES):
            raise ArgumentError(f'Неизвестный тип носителя: {self.kind!r}')
        if not 0.0 <= self.r_lo < self.r_hi:
            raise ArgumentError(f'Некорректный слой носителя [{self.r_lo}, {self.r_hi}]')
        if not 0.0 < self.radius_power < float('inf'):
            raise ArgumentError(f'Степень радиусов должна быть положительной, получено {self.radius_power!r}')

    @property
    def is_compact(self):
        return self.kind == 'compact'

    def window(self):
        """Окно (r_lo, r_hi) для квадратуры; None, если носитель не компактен."""
        return (self.r_lo, self.r_hi) if self.is_compact else None

    def pulled_back(self, alpha):
        """Носитель f∘φ: |φ(x)| = |x|^{1+α}, поэтому радиусы берутся в степени 1/(1+α)."""
        power = 1.0 / (1.0 + float(alpha))
        return SupportHint(self.kind, self.r_lo ** power, self.r_hi ** power, self.radius_power * power)

    def sample_range(self):
        if self.is_compact:
            return self.r_lo, self.r_hi
        return self.r_hi / 50.0, self.r_hi


class ScalarField:
    """
    Поле f: R^n → R. value и gradient принимают точки формы (m, n).
    Без аналитического градиента используются центральные разности
    с шагом h = 1e-5·max(1, |x|).
    """

    def __init__(self, value, gradient=None, *, dimension=None, support=None,
                 radial=False, name='field'):
        self._value = value
        self._gradient = gradient
        self.dimension = dimension
        self.support = support or SupportHint()
        self.radial = radial
        self.name = name

    def __repr__(self):
        return f'<ScalarField {self.name} ({self.gradient_kind})>'

    @classmethod
    def from_values(cls, value, **kwargs):
        return cls(value, None, **kwargs)

    @property
    def gradient_kind(self):
        return 'analytic' if self._gradient is not None else 'finite-difference'

    def value(self, points):
        return np.asarray(self._value(np.asarray(points, dtype=float)), dtype=float)

    def gradient(self, points):
        points = np.asarray(points, dtype=float)
        if self._gradient is not None:
            return np.asarray(self._gradient(points), dtype=float)
        return central_difference(self.value, points)

    def scaled(self, factor):
        """c·f с тем же носителем и типом градиента."""
        gradient = None
        if self._gradient is not None:
            gradient = lambda points: factor * self._gradient(points)  # noqa: E731
        return ScalarField(lambda points: factor * self._value(points), gradient,
                           dimension=self.dimension, support=self.support,
                           radial=self.radial, name=f'{factor:g}*{self.name}')


def central_difference(value, points, step=FD_STEP):
    points = np.atleast_2d(points)
    h = step * np.maximum(1.0, np.linalg.norm(points, axis=-1))
    gradient = np.empty_like(points)
    for axis in range(points.shape[-1]):
        shift = np.zeros_like(points)
        shift[:, axis] = h
        gradient[:, axis] = (value(points + shift) - value(points - shift)) / (2.0 * h)
    return gradient


@dataclass(frozen=True)
class GradientCheck:
    field: str
    samples: int
    max_error: float
    tolerance: float

    @property
    def passed(self):
        return self.max_error <= self.tolerance


def sample_points(field, n, count, seed):
    """Случайные точки внутри носителя: радиус равномерно, направление равномерно на сфере."""
    rng = np.random.default_rng(seed)
    lo, hi = field.support.sample_range()
    directions = rng.standard_normal((count, n))
    if n == 3 and not field.radial:
        # ось z особая для угловых полей: точки берутся вдали от неё
        polar = rng.uniform(0.1, np.pi - 0.1, count)
        azimuth = rng.uniform(0.0, 2.0 * np.pi, count)
        directions = np.column_stack([np.sin(polar) * np.cos(azimuth),
                                      np.sin(polar) * np.sin(azimuth), np.cos(polar)])
    directions /= np.linalg.norm(directions, axis=-1)[:, None]
    radii = rng.uniform(lo + 0.01 * (hi - lo), hi - 0.01 * (hi - lo), count)
    return radii[:, None] * directions


def validate_gradient(field, n=None, samples=50, seed=0, tolerance=1e-6):
    """
    Сверяет градиент поля с центральными разностями в случайных точках.
    Ошибка нормируется на наибольший |∇f| по выборке.
    """
    n = n or field.dimension or 3
    points = sample_points(field, n, samples, seed)
    analytic = field.gradient(points)
    numeric = central_difference(field.value, points)
    scale = float(np.max(np.linalg.norm(analytic, axis=-1)))
    if scale == 0.0:
        raise ArgumentError(f'Градиент поля {field.name} равен нулю во всех точках выборки')
    error = float(np.max(np.linalg.norm(analytic - numeric, axis=-1)) / scale)
    logger.debug('Проверка градиента %s: ошибка %.3e', field.name, error)
    return GradientCheck(field=field.name, samples=samples, max_error=error, tolerance=tolerance)

"""
Тензорные квадратуры в сферических координатах для интегралов вида
∫ g(x) |x|^β dx по R^n.

Радиальное правило: составное Гаусса–Лежандра (равные панели по r или
по ln r), угловое: трапеции по θ и Гаусс–Лежандр по cos φ (n = 3).
Для радиальных полей угловой интеграл берётся аналитически: площадь
сферы |S^{n−1}| при любом n ≥ 2.
"""
import logging
import math
from dataclasses import asdict, dataclass, replace

import numpy as np
from scipy.special import gamma

from .exceptions import ArgumentError, FieldEvaluationError

logger = logging.getLogger(__name__)

# Сколько точек вычисляется за один проход по узлам
CHUNK_POINTS = 1 << 18

# Концы степенных сеток обрезаются до [1e-120, 1e120]
LOG_RADIUS_LIMIT = math.log(1e120)

RADIAL_LAYOUT_CHOICES = [
    ('linear', 'Равные панели по r на [0, r_max]'),
    ('log', 'Равные панели по ln r на [r_min, r_max]'),
]


def sphere_area(n):
    """|S^{n−1}| = 2π^{n/2} / Γ(n/2)."""
    return float(2.0 * math.pi ** (n / 2.0) / gamma(n / 2.0))


@dataclass(frozen=True)
class RadialRule:
    nodes: np.ndarray
    weights: np.ndarray
    r_max: float
    r_min: float = 0.0
    layout: str = 'linear'

    def __len__(self):
        return self.nodes.size


@dataclass(frozen=True)
class AngularRule:
    """
    Узлы на S^{n−1}. angles: (θ,) при n = 2 и (φ, θ) при n = 3;
    directions: соответствующие единичные векторы. Множитель sin φ
    уже входит в веса.
    """
    dimension: int
    angles: np.ndarray
    directions: np.ndarray
    weights: np.ndarray
    theta_resolution: int

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True)
class ProductGrid:
    radial: RadialRule
    angular: AngularRule = None
    dimension: int = 3

    def __post_init__(self):
        if self.dimension < 2:
            raise ArgumentError('Размерность должна быть не меньше 2')
        if self.angular is not None and self.angular.dimension != self.dimension:
            raise ArgumentError(
                f'Угловое правило для n={self.angular.dimension} не подходит к сетке n={self.dimension}'
            )

    @property
    def surface_area(self):
        return sphere_area(self.dimension)

    @property
    def is_radial_only(self):
        return self.angular is None

    def radial_only(self):
        if self.angular is None:
            return self
        return replace(self, angular=None)

    def describe(self):
        summary = {
            'dimension': self.dimension,
            'radial_layout': self.radial.layout,
            'r_min': self.radial.r_min,
            'r_max': self.radial.r_max,
            'radial_nodes': len(self.radial),
            'angular_nodes': len(self.angular) if self.angular is not None else 0,
        }
        if self.angular is not None:
            summary['theta_resolution'] = self.angular.theta_resolution
        return summary


def _gauss_panels(a, b, panels, points):
    """Составное правило Гаусса–Лежандра на [a, b] с равными панелями."""
    x, w = np.polynomial.legendre.leggauss(points)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _check_counts(panels, points):
    if int(panels) != panels or panels < 1:
        raise ArgumentError(f'Число панелей должно быть целым ≥ 1, получено {panels!r}')
    if int(points) != points or points < 2:
        raise ArgumentError(f'Число точек на панели должно быть целым ≥ 2, получено {points!r}')


def make_radial_rule(r_max, panels, points_per_panel):
    """Составной Гаусс–Лежандр на [0, r_max]; концы отрезка узлами не бывают."""
    _check_counts(panels, points_per_panel)
    if not (math.isfinite(r_max) and r_max > 0):
        raise ArgumentError(f'r_max должен быть положительным, получено {r_max!r}')
    nodes, weights = _gauss_panels(0.0, float(r_max), int(panels), int(points_per_panel))
    return RadialRule(nodes=nodes, weights=weights, r_max=float(r_max))


def make_log_radial_rule(r_min, r_max, panels, points_per_panel):
    """
    Составной Гаусс–Лежандр по s = ln r на [ln r_min, ln r_max], веса
    умножены на r. Подходит для профилей со степенным убыванием.
    """
    _check_counts(panels, points_per_panel)
    if not (0 < r_min < r_max and math.isfinite(r_max)):
        raise ArgumentError(f'Нужно 0 < r_min < r_max, получено [{r_min!r}, {r_max!r}]')
    s, w = _gauss_panels(math.log(r_min), math.log(r_max), int(panels), int(points_per_panel))
    nodes = np.exp(s)
    return RadialRule(nodes=nodes, weights=w * nodes, r_max=float(r_max),
                      r_min=float(r_min), layout='log')


def make_angular_rule(dimension, resolution, polar_resolution=None):
    """
    n = 2: трапеции по θ ∈ [0, 2π), точны для cos kθ при resolution > k.
    n = 3: Гаусс–Лежандр по cos φ (polar_resolution узлов, по умолчанию
    resolution // 2) × трапеции по θ.
    """
    if int(resolution) != resolution or resolution < 4:
        raise ArgumentError(f'Угловое разрешение должно быть ≥ 4, получено {resolution!r}')
    resolution = int(resolution)
    theta = 2.0 * np.pi * np.arange(resolution) / resolution
    theta_weight = 2.0 * np.pi / resolution

    if dimension == 2:
        directions = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(resolution, theta_weight)
        return AngularRule(dimension=2, angles=theta[:, None], directions=directions,
                           weights=weights, theta_resolution=resolution)

    if dimension == 3:
        polar = int(polar_resolution or resolution // 2)
        if polar < 2:
            raise ArgumentError(f'Разрешение по φ должно быть ≥ 2, получено {polar_resolution!r}')
        u, wu = np.polynomial.legendre.leggauss(polar)
        # cos φ = u, φ от оси +z; узлы идут по возрастанию φ
        u, wu = u[::-1], wu[::-1]
        phi = np.arccos(u)
        sin_phi = np.sqrt(1.0 - u ** 2)
        phi_grid, theta_grid = np.meshgrid(phi, theta, indexing='ij')
        sin_grid, _ = np.meshgrid(sin_phi, theta, indexing='ij')
        cos_grid, _ = np.meshgrid(u, theta, indexing='ij')
        directions = np.column_stack([
            (sin_grid * np.cos(theta_grid)).ravel(),
            (sin_grid * np.sin(theta_grid)).ravel(),
            cos_grid.ravel(),
        ])
        weights = (wu[:, None] * theta_weight * np.ones(resolution)[None, :]).ravel()
        angles = np.column_stack([phi_grid.ravel(), theta_grid.ravel()])
        return AngularRule(dimension=3, angles=angles, directions=directions,
                           weights=weights, theta_resolution=resolution)

    raise ArgumentError(f'Угловые правила реализованы только для n = 2, 3, получено n={dimension}')


@dataclass(frozen=True)
class GridSettings:
    """Параметры сеток, как их задаёт конфигурация запуска."""
    r_max: float = 40.0
    radial_panels: int = 160
    radial_points: int = 8
    ang_theta: int = 128
    ang_phi: int = 64
    radial_layout: str = 'log'
    log_r_min: float = 1e-8
    log_r_max: float = 1e16
    shell_panels: int = 64

    def radial_rule(self, power=1.0):
        """
        При power ≠ 1 концы отрезка возводятся в степень power. Для f∘φ это
        1/(1+α): φ переводит узлы такой сетки в узлы исходной.
        """
        if self.radial_layout == 'log':
            return make_log_radial_rule(_powered(self.log_r_min, power), _powered(self.log_r_max, power),
                                        self.radial_panels, self.radial_points)
        if self.radial_layout == 'linear':
            return make_radial_rule(_powered(self.r_max, power), self.radial_panels, self.radial_points)
        raise ArgumentError(f'Неизвестная раскладка радиальных узлов: {self.radial_layout!r}')

    def angular_rule(self, n):
        return make_angular_rule(n, self.ang_theta, self.ang_phi if n == 3 else None)

    def build(self, n, angular=True, power=1.0):
        """Сетка для полей общего вида; при angular=False только радиальный путь."""
        ang = self.angular_rule(n) if angular and n in (2, 3) else None
        if angular and ang is None:
            logger.debug('n=%s: угловое правило не строится, только радиальный путь', n)
        return ProductGrid(radial=self.radial_rule(power), angular=ang, dimension=n)

    def shell(self, n, r_hi):
        """
        Сетка для поля с компактным носителем в шаре радиуса r_hi:
        равные панели на [0, r_hi + 1], shell_panels штук.
        """
        radial = make_radial_rule(float(r_hi) + 1.0, self.shell_panels, self.radial_points)
        ang = self.angular_rule(n) if n in (2, 3) else None
        return ProductGrid(radial=radial, angular=ang, dimension=n)

    def for_field(self, field):
        """
        Сетка под носитель поля: слой для компактного, основная раскладка для
        остальных, с радиусами в степени field.support.radius_power.
        """
        n = field.dimension or 3
        if field.support.is_compact:
            return self.shell(n, field.support.r_hi)
        return self.build(n, angular=not field.radial, power=field.support.radius_power)

    def refined(self, factor=2):
        return replace(self, radial_panels=self.radial_panels * factor,
                       shell_panels=self.shell_panels * factor,
                       ang_theta=self.ang_theta * factor, ang_phi=self.ang_phi * factor)

    def as_dict(self):
        return asdict(self)


def _powered(radius, power):
    if power == 1.0:
        return float(radius)
    exponent = power * math.log(radius)
    clipped = min(max(exponent, -LOG_RADIUS_LIMIT), LOG_RADIUS_LIMIT)
    if clipped != exponent:
        logger.debug('Радиус %g^%g обрезан до %g', radius, power, math.exp(clipped))
    return math.exp(clipped)


def _check_beta(beta, n):
    if not beta > -n:
        raise ArgumentError(f'Вес |x|^β неинтегрируем в нуле: нужно β > −n, получено β={beta}, n={n}')


def _radial_window(rule, support):
    if support is None:
        return np.arange(len(rule))
    lo, hi = support
    return np.nonzero((rule.nodes >= lo) & (rule.nodes <= hi))[0]


def _check_finite(values, points):
    finite = np.isfinite(values)
    if finite.all():
        return
    bad = np.argwhere(~finite)[0]
    point = points[bad[0]] if points.ndim == 2 else None
    raise FieldEvaluationError('Поле вернуло нечисловое значение', point=point)


def _weighted_sum(inner, weights, log_weights, radii, n):
    """Σ_i w_i·inner_i по радиальным узлам; при log_weights через логарифмы."""
    if log_weights is None:
        terms = weights[:, None] * inner
    else:
        with np.errstate(divide='ignore', over='ignore'):
            terms = np.sign(inner) * np.exp(np.log(np.abs(inner)) + log_weights[:, None])
    finite = np.isfinite(terms).all(axis=1)
    if not finite.all():
        bad = int(np.argmin(finite))
        raise FieldEvaluationError('Взвешенное подынтегральное выражение не конечно',
                                   point=radii[bad] * np.eye(1, n)[0])
    return terms.sum(axis=0)


def integrate_components(evaluator, beta, grid, support=None):
    """
    Интегрирует сразу несколько подынтегральных функций за один проход.

    evaluator получает точки (m, n) и возвращает массив (m, k);
    результат: массив из k интегралов ∫ g_j(x) |x|^β dx. support задаёт окно
    (r_lo, r_hi), вне которого все g_j равны нулю.
    """
    n = grid.dimension
    _check_beta(beta, n)
    rule = grid.radial
    index = _radial_window(rule, support)
    if index.size == 0:
        logger.debug('Окно носителя не содержит радиальных узлов')
        sample = np.asarray(evaluator(np.empty((0, n))), dtype=float)
        return np.zeros(sample.shape[1] if sample.ndim == 2 else 1)
    radii = rule.nodes[index]
    exponent = beta + n - 1.0
    with np.errstate(over='ignore'):
        radial_weights = rule.weights[index] * radii ** exponent
    log_weights = None
    if not np.isfinite(radial_weights).all():
        # вес вышел за пределы float там, где поле ничтожно: 0·inf дал бы NaN
        log_weights = np.log(rule.weights[index]) + exponent * np.log(radii)

    if grid.angular is None:
        points = radii[:, None] * np.eye(1, n)
        values = np.asarray(evaluator(points), dtype=float).reshape(len(radii), -1)
        _check_finite(values, points)
        return grid.surface_area * _weighted_sum(values, radial_weights, log_weights, radii, n)

    directions = grid.angular.directions
    angular_weights = grid.angular.weights
    per_chunk = max(1, CHUNK_POINTS // len(directions))
    total = None
    for start in range(0, len(radii), per_chunk):
        block = radii[start:start + per_chunk]
        points = (block[:, None, None] * directions[None, :, :]).reshape(-1, n)
        values = np.asarray(evaluator(points), dtype=float).reshape(len(block), len(directions), -1)
        _check_finite(values.reshape(len(points), -1), points)
        window = slice(start, start + per_chunk)
        part = _weighted_sum(np.einsum('ijk,j->ik', values, angular_weights), radial_weights[window],
                             None if log_weights is None else log_weights[window], block, n)
        total = part if total is None else total + part
    return total


def integrate(field_evaluator, beta, grid, support=None):
    """Квадратура ∫ field(x) |x|^β dx = Σ w_r w_σ field(rσ) r^{β+n−1}."""
    return float(integrate_components(
        lambda points: np.asarray(field_evaluator(points), dtype=float)[:, None],
        beta, grid, support=support,
    )[0])

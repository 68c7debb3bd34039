"""
Весовые нормы, отношение CKN Q_α(f), отношение анизотропии F(f)
и проверка интерполяционного неравенства.
"""
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .core_maps import Alpha, as_alpha, atilde_apply
from .exceptions import ArgumentError, DegenerateFieldError, UnsupportedParametersError
from .quadrature import integrate_components
from .testfns import compose_with_phi

logger = logging.getLogger(__name__)


def derive_r(n, p, s, t):
    """Единственное r с 1/r = (1−t)/s + t(n−p)/(np)."""
    _check_bounds(n, p, s, t)
    inverse = (1.0 - t) / s + t * (n - p) / (n * p)
    r = 1.0 / inverse
    if r < 1.0:
        raise UnsupportedParametersError(f'r = {r:g} < 1: неравенство вне области применимости')
    return r


def _check_bounds(n, p, s, t):
    if int(n) != n or n < 2:
        raise UnsupportedParametersError(f'Размерность n должна быть целой ≥ 2, получено {n!r}')
    if not 1.0 <= p < n:
        raise UnsupportedParametersError(f'Нужно 1 ≤ p < n, получено p={p}, n={n}')
    if not s >= 1.0:
        raise UnsupportedParametersError(f'Нужно s ≥ 1, получено s={s}')
    if not 0.0 <= t <= 1.0:
        raise UnsupportedParametersError(f'Нужно 0 ≤ t ≤ 1, получено t={t}')


@dataclass(frozen=True)
class CknParams:
    n: int
    p: float
    s: float
    t: float
    alpha: Alpha = Alpha(0.0)

    def __post_init__(self):
        object.__setattr__(self, 'alpha', as_alpha(self.alpha))
        object.__setattr__(self, 'n', int(self.n) if int(self.n) == self.n else self.n)
        derive_r(self.n, self.p, self.s, self.t)

    @property
    def r(self):
        return derive_r(self.n, self.p, self.s, self.t)

    @property
    def norm_weight(self):
        """Показатель веса |x|^{αn} в нормах ‖f‖_r и ‖f‖_s."""
        return self.alpha.value * self.n

    @property
    def gradient_weight(self):
        """Показатель веса |x|^{α(n−p)} в норме градиента."""
        return self.alpha.value * (self.n - self.p)

    @property
    def sobolev_exponent(self):
        return self.n * self.p / (self.n - self.p)

    def with_alpha(self, alpha):
        return replace(self, alpha=as_alpha(alpha))

    def as_dict(self):
        return {'n': self.n, 'p': self.p, 's': self.s, 't': self.t,
                'alpha': self.alpha.value, 'r': self.r}


@dataclass(frozen=True)
class QuotientReport:
    lhs_norm: float
    s_norm: float
    grad_norm: float
    quotient: float
    reference_constant: float = None
    field: str = ''

    @property
    def slack(self):
        if self.reference_constant is None:
            return None
        return self.reference_constant - self.quotient

    def as_dict(self):
        return {'field': self.field, 'lhs_norm': self.lhs_norm, 's_norm': self.s_norm,
                'grad_norm': self.grad_norm, 'quotient': self.quotient,
                'reference_constant': self.reference_constant, 'slack': self.slack}


@dataclass(frozen=True)
class InterpolationReport:
    lhs: float
    rhs: float
    holds: bool

    def as_dict(self):
        return {'lhs': self.lhs, 'rhs': self.rhs, 'holds': self.holds}


def _grid_for(field, grid):
    """Радиальные поля считаются одномерной квадратурой при любом n."""
    if field.dimension is not None and field.dimension != grid.dimension:
        raise ArgumentError(f'Поле {field.name} задано в R^{field.dimension}, сетка — в R^{grid.dimension}')
    if field.radial:
        return grid.radial_only()
    if grid.angular is None:
        raise ArgumentError(f'Поле {field.name} не радиально, а у сетки нет углового правила')
    return grid


def _value_norms(field, exponents, beta, grid):
    grid = _grid_for(field, grid)

    def evaluator(points):
        magnitude = np.abs(field.value(points))
        return np.stack([magnitude ** q for q in exponents], axis=-1)

    integrals = integrate_components(evaluator, beta, grid, support=field.support.window())
    return [float(v) ** (1.0 / q) for v, q in zip(integrals, exponents)]


def _warn_if_zero(value, field):
    if value == 0.0:
        logger.warning('Норма поля %s на сетке равна нулю', field.name)
    return value


def weighted_norm(field, q, beta, grid):
    """(∫ |f|^q |x|^β dx)^{1/q}."""
    if not q >= 1:
        raise ArgumentError(f'Показатель нормы должен быть ≥ 1, получено {q}')
    return _warn_if_zero(_value_norms(field, [q], beta, grid)[0], field)


def weighted_grad_norm(field, p, beta, grid):
    """(∫ |∇f|^p |x|^β dx)^{1/p}."""
    if not p >= 1:
        raise ArgumentError(f'Показатель нормы должен быть ≥ 1, получено {p}')
    window = field.support.window()
    grid = _grid_for(field, grid)

    def evaluator(points):
        return np.linalg.norm(field.gradient(points), axis=-1) ** p

    integral = integrate_components(lambda pts: evaluator(pts)[:, None], beta, grid, support=window)[0]
    return _warn_if_zero(float(integral) ** (1.0 / p), field)


def _power(base, exponent):
    """base^exponent с соглашением x^0 = 1 для вырожденных t = 0 и t = 1."""
    if exponent == 0:
        return 1.0
    return base ** exponent


def ckn_quotient(field, params, grid, reference_constant=None):
    """Q_α(f) = ‖f‖_{r,αn} / (‖f‖_{s,αn}^{1−t} ‖∇f‖_{p,α(n−p)}^t)."""
    lhs, s_norm = _value_norms(field, [params.r, params.s], params.norm_weight, grid)
    grad = weighted_grad_norm(field, params.p, params.gradient_weight, grid)
    denominator_s = _power(s_norm, 1.0 - params.t)
    denominator_grad = _power(grad, params.t)
    if denominator_s == 0.0 or denominator_grad == 0.0:
        raise DegenerateFieldError(f'Знаменатель отношения для поля {field.name} равен нулю')
    quotient = lhs / (denominator_s * denominator_grad)
    logger.debug('Q_α(%s) = %.12g при %s', field.name, quotient, params.as_dict())
    return QuotientReport(lhs_norm=lhs, s_norm=s_norm, grad_norm=grad, quotient=quotient,
                          reference_constant=reference_constant, field=field.name)


def ratio_F(field, params, grid):
    """
    F(f) = ∫|Ã∇f|^p |x|^{α(n−p)} / ∫|∇f|^p |x|^{α(n−p)}, без степени t/p.
    A_α = sup F^{t/p}; степень применяется только при сборке констант.
    """
    alpha, p = params.alpha, params.p
    window = field.support.window()
    grid = _grid_for(field, grid)

    def evaluator(points):
        gradient = field.gradient(points)
        squeezed = atilde_apply(gradient, points, alpha)
        return np.stack([np.linalg.norm(squeezed, axis=-1) ** p,
                         np.linalg.norm(gradient, axis=-1) ** p], axis=-1)

    numerator, denominator = integrate_components(evaluator, params.gradient_weight, grid, support=window)
    if denominator == 0.0:
        raise DegenerateFieldError(f'∫|∇f|^p для поля {field.name} равен нулю')
    return float(numerator / denominator)


def admissible_constant(field, params, grid, m_constant):
    """
    Константа (1+α)^{t/n} F(f)^{t/p} M, которую замена переменных даёт
    для одного поля до взятия супремума.
    """
    f_value = ratio_F(field, params, grid)
    return (params.alpha.stretch ** (params.t / params.n)
            * _power(f_value, params.t / params.p) * m_constant)


def pullback_quotient(field, params, grid):
    """Q_0(f∘φ^{-1}): отношение Гальярдо–Ниренберга для поля, перенесённого обратно."""
    pulled = compose_with_phi(field, params.alpha.inverse())
    return ckn_quotient(pulled, params.with_alpha(0.0), grid).quotient


def interpolation_check(field, params, grid, tolerance=1e-9):
    """
    ‖f‖_r ≤ ‖f‖_s^{1−t} ‖f‖_{np/(n−p)}^t в невзвешенной мере (неравенство Гёльдера).
    """
    lhs, s_norm, star_norm = _value_norms(field, [params.r, params.s, params.sobolev_exponent], 0.0, grid)
    rhs = _power(s_norm, 1.0 - params.t) * _power(star_norm, params.t)
    holds = lhs <= rhs * (1.0 + tolerance)
    if not holds:
        logger.warning('Интерполяционное неравенство нарушено для %s: %.12g > %.12g',
                       field.name, lhs, rhs)
    return InterpolationReport(lhs=lhs, rhs=rhs, holds=bool(holds))


def radial_ratio_expected(params):
    """Значение F на радиальных полях: (1+α)^{−p}."""
    return params.alpha.stretch ** (-params.p)


def is_close(a, b, rel):
    return math.isclose(a, b, rel_tol=rel, abs_tol=0.0)

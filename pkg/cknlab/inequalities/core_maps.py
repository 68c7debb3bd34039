"""
Квазиконформное отображение φ(x) = x|x|^α и его дифференциал.

Все функции чистые и векторизованы по ведущим осям: точка задаётся массивом формы
(n,), пачка точек массивом (m, n). Начало координат исключено из области
определения: при α ≠ 0 дифференциал в нуле вырожден.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ArgumentError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Alpha:
    """
    Показатель отображения φ. Проверяется один раз при создании (α > −1),
    дальше передаётся как проверенный тип.
    """
    value: float

    def __post_init__(self):
        value = float(self.value)
        if not math.isfinite(value) or value <= -1.0:
            raise ArgumentError(f'Показатель α должен быть больше −1, получено {self.value!r}')
        object.__setattr__(self, 'value', value)

    def __float__(self):
        return self.value

    @property
    def stretch(self):
        """Отношение собственных чисел Dφ: 1 + α."""
        return 1.0 + self.value

    def inverse(self):
        """Показатель α' = −α/(1+α), для которого φ_α' = φ_α^{-1}."""
        return Alpha(-self.value / (1.0 + self.value))


def as_alpha(alpha):
    return alpha if isinstance(alpha, Alpha) else Alpha(alpha)


@dataclass(frozen=True)
class EigenSummary:
    """Замкнутая форма спектра Dφ в точке."""
    lambda_radial: float
    lambda_tangential: float
    eigenvector_radial: np.ndarray
    jacobian_det: float
    dimension: int

    def eigenvalues(self):
        """Собственные числа по возрастанию (с учётом кратности n−1)."""
        values = [self.lambda_radial] + [self.lambda_tangential] * (self.dimension - 1)
        return np.sort(np.array(values))


def _norms(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] < 1:
        raise ArgumentError('Ожидается точка (n,) или пачка точек (m, n)')
    norm = np.linalg.norm(x, axis=-1)
    if np.any(norm == 0.0):
        raise DomainError('Отображение φ и его дифференциал не вычисляются в начале координат')
    return x, norm


def phi_map(x, alpha):
    """φ(x) = x|x|^α; норма результата равна |x|^{1+α}."""
    a = as_alpha(alpha)
    x, norm = _norms(x)
    return x * (norm ** a.value)[..., None]


def inverse_phi(y, alpha):
    """φ^{-1}(y) = y|y|^{−α/(1+α)}."""
    a = as_alpha(alpha)
    y, norm = _norms(y)
    return y * (norm ** a.inverse().value)[..., None]


def dphi_matrix(x, alpha):
    """
    Матрица Dφ(x) с элементами |x|^α δ_ij + α x_i x_j |x|^{α−2}.
    Симметрична точно: x_i x_j и x_j x_i совпадают побитово.
    """
    a = as_alpha(alpha)
    x, norm = _norms(x)
    n = x.shape[-1]
    scale = norm ** a.value
    outer = x[..., :, None] * x[..., None, :]
    return (scale[..., None, None] * np.eye(n)
            + (a.value * norm ** (a.value - 2.0))[..., None, None] * outer)


def dphi_apply(x, v, alpha):
    """Dφ(x)·v без построения матрицы: |x|^α (v + α⟨x,v⟩x/|x|²)."""
    a = as_alpha(alpha)
    x, norm = _norms(x)
    v = np.asarray(v, dtype=float)
    inner = np.sum(x * v, axis=-1)
    radial = (a.value * inner / norm ** 2)[..., None] * x
    return (norm ** a.value)[..., None] * (v + radial)


def analytic_eigen(x, alpha):
    a = as_alpha(alpha)
    x, norm = _norms(x)
    if x.ndim != 1:
        raise ArgumentError('analytic_eigen принимает одну точку формы (n,)')
    n = x.shape[0]
    tangential = float(norm ** a.value)
    return EigenSummary(
        lambda_radial=a.stretch * tangential,
        lambda_tangential=tangential,
        eigenvector_radial=x / norm,
        jacobian_det=float(a.stretch * norm ** (a.value * n)),
        dimension=n,
    )


def char_poly_residual(x, alpha, lam):
    """
    det(Dφ − λI) минус факторизованная форма
    |x|^{n(α−2)} (|x|² − λ|x|^{2−α})^{n−1} ((1+α)|x|² − λ|x|^{2−α}).
    """
    a = as_alpha(alpha)
    x, norm = _norms(x)
    if x.ndim != 1:
        raise ArgumentError('char_poly_residual принимает одну точку формы (n,)')
    n = x.shape[0]
    numeric = np.linalg.det(dphi_matrix(x, a) - lam * np.eye(n))
    shifted = lam * norm ** (2.0 - a.value)
    factored = (norm ** (n * (a.value - 2.0))
                * (norm ** 2 - shifted) ** (n - 1)
                * (a.stretch * norm ** 2 - shifted))
    return float(numeric - factored)


def char_poly_scale(x, alpha, lam):
    """Масштаб для относительного допуска char_poly_residual: max(1, |det(Dφ − λI)|)."""
    a = as_alpha(alpha)
    x, _ = _norms(x)
    if x.ndim != 1:
        raise ArgumentError('char_poly_scale принимает одну точку формы (n,)')
    return max(1.0, abs(float(np.linalg.det(dphi_matrix(x, a) - lam * np.eye(x.shape[0])))))


def atilde_apply(v, x, alpha):
    """
    Ã v = v + ((1+α)^{-1} − 1)⟨v,σ⟩σ, σ = x/|x|: радиальная компонента
    делится на 1+α, касательные не меняются.
    """
    a = as_alpha(alpha)
    x, norm = _norms(x)
    v = np.asarray(v, dtype=float)
    sigma = x / norm[..., None]
    along = np.sum(v * sigma, axis=-1)
    return v + ((1.0 / a.stretch - 1.0) * along)[..., None] * sigma


def spectrum_residuals(x, alpha, perturbation=0.0):
    """
    Сравнивает замкнутую форму спектра с численным симметричным решателем.

    Возвращает (относительная невязка собственных чисел, относительная
    невязка определителя). perturbation добавляется к элементу (0, 0)
    матрицы: контрольная порча для проверки самой проверки.
    """
    summary = analytic_eigen(x, alpha)
    matrix = dphi_matrix(x, alpha)
    if perturbation:
        logger.debug('Порча элемента (0, 0) на %.3e', perturbation)
        matrix = matrix.copy()
        matrix[0, 0] += perturbation
    numeric = np.linalg.eigvalsh(matrix)
    expected = summary.eigenvalues()
    eig_residual = float(np.max(np.abs(numeric - expected) / np.abs(expected)))
    det_residual = abs(float(np.linalg.det(matrix)) - summary.jacobian_det) / summary.jacobian_det
    return eig_residual, float(det_residual)

"""
Встроенные семейства функций: радиальные профили, «шапочка» h,
последовательность f_k (n = 3) и композиция с φ.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .core_maps import as_alpha, dphi_apply, phi_map
from .exceptions import ArgumentError
from .fields import ScalarField, SupportHint

logger = logging.getLogger(__name__)

PROFILE_KIND_CHOICES = [
    ('sobolev-extremal', 'Экстремаль Соболева (1 + (r/λ)^{p/(p−1)})^{−(n−p)/p}'),
    ('gns-power', 'Степенной профиль (1 + (r/λ)^{p/(p−1)})^{−γ}'),
    ('gaussian', 'Обобщённая гауссиана exp(−(r/λ)^γ)'),
]

BUMP_R_LO = 1.0
BUMP_R_HI = 4.0


@dataclass(frozen=True)
class RadialProfile:
    """Радиальный профиль f(x) = F(|x|) с аналитической производной F'."""
    kind: str
    gamma: float
    scale: float
    n: int
    p: float

    @property
    def inner_power(self):
        """Показатель p/(p−1) под скобкой степенных профилей."""
        return self.p / (self.p - 1.0)

    @property
    def decay_exponent(self):
        """d в асимптотике F(r) ~ r^{−d}; бесконечность для гауссианы."""
        if self.kind == 'gaussian':
            return math.inf
        return self.gamma * self.inner_power

    def admissible(self, exponents, gradient_exponent=None, alpha=0.0):
        """
        Конечны ли нормы ‖f‖_{q, αn} для всех q из exponents и ‖∇f‖_{p, α(n−p)}
        (gradient_exponent = p). При α > 0 веса требуют более быстрого
        убывания. Для f∘φ проверять нужно с α = 0: замена x → φ(x)
        сохраняет конечность.
        """
        d = self.decay_exponent
        if any(d * q <= self.n * (1.0 + alpha) for q in exponents):
            return False
        if (gradient_exponent is not None
                and gradient_exponent * (d + 1.0) <= self.n + alpha * (self.n - gradient_exponent)):
            return False
        return True

    def __call__(self, r):
        u = np.asarray(r, dtype=float) / self.scale
        if self.kind == 'gaussian':
            return np.exp(-u ** self.gamma)
        return (1.0 + u ** self.inner_power) ** (-self.gamma)

    def derivative(self, r):
        u = np.asarray(r, dtype=float) / self.scale
        if self.kind == 'gaussian':
            return -self.gamma * u ** (self.gamma - 1.0) * np.exp(-u ** self.gamma) / self.scale
        m = self.inner_power
        return (-self.gamma * m * u ** (m - 1.0)
                * (1.0 + u ** m) ** (-self.gamma - 1.0) / self.scale)

    def support_hint(self):
        reach = 3.0 if self.kind == 'gaussian' else 5.0
        return SupportHint('decaying', 0.0, reach * self.scale)


def make_profile(kind, n, p, gamma=None, scale=1.0):
    if kind not in dict(PROFILE_KIND_CHOICES):
        raise ArgumentError(f'Неизвестное семейство профилей: {kind!r}')
    if not (scale > 0 and math.isfinite(scale)):
        raise ArgumentError(f'Масштаб λ должен быть положительным, получено {scale!r}')
    if n < 2:
        raise ArgumentError(f'Размерность должна быть не меньше 2, получено {n}')

    if kind == 'gaussian':
        gamma = 2.0 if gamma is None else float(gamma)
        if not gamma > 1.0:
            raise ArgumentError(f'Для гауссианы нужен γ > 1 (гладкость в нуле), получено {gamma}')
        return RadialProfile(kind, gamma, float(scale), n, float(p))

    if not 1.0 < p < n:
        raise ArgumentError(f'Степенные профили требуют 1 < p < n, получено p={p}, n={n}')
    extremal = (n - p) / p
    if kind == 'sobolev-extremal':
        if gamma is not None and not math.isclose(gamma, extremal):
            raise ArgumentError(f'У экстремали Соболева γ фиксирован: (n−p)/p = {extremal:g}')
        gamma = extremal
    gamma = extremal if gamma is None else float(gamma)
    if not gamma > 0:
        raise ArgumentError(f'Показатель γ должен быть положительным, получено {gamma}')
    return RadialProfile(kind, gamma, float(scale), n, float(p))


def radial_field(profile, name=None):
    """Оборачивает профиль в ScalarField с радиальным градиентом F'(r)·x/|x|."""

    def value(points):
        return profile(np.linalg.norm(points, axis=-1))

    def gradient(points):
        r = np.linalg.norm(points, axis=-1)
        ratio = np.divide(profile.derivative(r), r, out=np.zeros_like(r), where=r > 0)
        return ratio[..., None] * points

    return ScalarField(value, gradient, dimension=profile.n, support=profile.support_hint(),
                       radial=True, name=name or profile.kind)


def make_radial(kind, n, p, gamma=None, scale=1.0):
    return radial_field(make_profile(kind, n, p, gamma=gamma, scale=scale))


@dataclass(frozen=True)
class BumpH:
    """h(r) = exp(−1/((r−1)(4−r))) на (1, 4) и ноль вне интервала."""
    r_lo: float = BUMP_R_LO
    r_hi: float = BUMP_R_HI

    def _inside(self, r):
        r = np.asarray(r, dtype=float)
        q = (r - self.r_lo) * (self.r_hi - r)
        inside = q > 0
        return r, np.where(inside, q, 1.0), inside

    def __call__(self, r):
        r, q, inside = self._inside(r)
        return np.where(inside, np.exp(-1.0 / q), 0.0)

    def derivative(self, r):
        r, q, inside = self._inside(r)
        dq = self.r_lo + self.r_hi - 2.0 * r
        return np.where(inside, np.exp(-1.0 / q) * dq / q ** 2, 0.0)


def make_bump():
    return BumpH()


@dataclass(frozen=True)
class FkField:
    """
    f_k(r, φ, θ) = h(r) sin φ cos kθ в R^3; φ отсчитывается от оси +z,
    θ = atan2(y, x).
    """
    k: int
    h: BumpH = BumpH()
    dimension: int = 3

    @staticmethod
    def spherical(points):
        x, y, z = points[..., 0], points[..., 1], points[..., 2]
        r = np.linalg.norm(points, axis=-1)
        phi = np.arctan2(np.hypot(x, y), z)
        theta = np.arctan2(y, x)
        return r, phi, theta

    def spherical_gradient(self, r, phi, theta):
        """Компоненты ∇f_k в базисе (u_r, u_φ, u_θ)."""
        r = np.asarray(r, dtype=float)
        h_over_r = np.divide(self.h(r), r, out=np.zeros_like(r), where=r > 0)
        wave_c = np.cos(self.k * theta)
        g_r = self.h.derivative(r) * np.sin(phi) * wave_c
        g_phi = h_over_r * np.cos(phi) * wave_c
        g_theta = -h_over_r * self.k * np.sin(self.k * theta)
        return g_r, g_phi, g_theta

    def value(self, points):
        r, phi, theta = self.spherical(points)
        return self.h(r) * np.sin(phi) * np.cos(self.k * theta)

    def gradient(self, points):
        r, phi, theta = self.spherical(points)
        g_r, g_phi, g_theta = self.spherical_gradient(r, phi, theta)
        sp, cp = np.sin(phi), np.cos(phi)
        st, ct = np.sin(theta), np.cos(theta)
        return np.stack([
            g_r * sp * ct + g_phi * cp * ct - g_theta * st,
            g_r * sp * st + g_phi * cp * st + g_theta * ct,
            g_r * cp - g_phi * sp,
        ], axis=-1)

    def as_field(self):
        return ScalarField(self.value, self.gradient, dimension=3,
                           support=SupportHint('compact', self.h.r_lo, self.h.r_hi),
                           name=f'f_{self.k}')


def make_fk(k):
    if int(k) != k or k < 1:
        raise ArgumentError(f'Номер k должен быть целым ≥ 1, получено {k!r}')
    return FkField(int(k)).as_field()


def compose_with_phi(field, alpha):
    """g = f∘φ, ∇g(x) = Dφ(x)·(∇f)(φ(x)) (Dφ симметрична)."""
    a = as_alpha(alpha)

    def value(points):
        return field.value(phi_map(points, a))

    def gradient(points):
        return dphi_apply(points, field.gradient(phi_map(points, a)), a)

    return ScalarField(value, gradient, dimension=field.dimension,
                       support=field.support.pulled_back(a.value),
                       radial=field.radial, name=f'{field.name}∘φ[α={a.value:g}]')


def bundled_profiles(n, p):
    """Профили, участвующие в проверках; степенные только при p > 1."""
    profiles = [make_profile('gaussian', n, p)]
    if 1.0 < p < n:
        extremal = (n - p) / p
        profiles.insert(0, make_profile('sobolev-extremal', n, p))
        profiles.insert(1, make_profile('gns-power', n, p, gamma=2.0 * extremal))
    return profiles


def bundled_fields(params, fk_modes=(1, 4, 16)):
    """
    Именованный набор полей для params: каждый допустимый профиль в композиции
    с φ и сам по себе, если его весовые нормы конечны, плюс f_k при n = 3.
    """
    used = [params.r, params.s] if params.t < 1 else [params.r]
    gradient_exponent = params.p if params.t > 0 else None
    fields = {}
    for profile in bundled_profiles(params.n, params.p):
        if not profile.admissible(used, gradient_exponent):
            logger.debug('Профиль %s пропущен: нормы бесконечны при %s', profile.kind, params)
            continue
        raw = radial_field(profile)
        if profile.admissible(used, gradient_exponent, alpha=params.alpha.value):
            fields[raw.name] = raw
        else:
            logger.debug('Профиль %s без композиции пропущен: весовые нормы бесконечны', profile.kind)
        composed = compose_with_phi(raw, params.alpha)
        fields[composed.name] = composed
    if params.n == 3:
        for k in fk_modes:
            fk = make_fk(k)
            fields[fk.name] = fk
    return fields

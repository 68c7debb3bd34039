"""
Оценка константы M(n, p, s, t), сборка точных констант CKN,
скан F(f_k) и сводная проверка теорем.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .core_maps import as_alpha
from .exceptions import ArgumentError, CknError, DegenerateFieldError
from .functionals import (CknParams, ckn_quotient, is_close, ratio_F,
                          radial_ratio_expected, weighted_norm)
from .quadrature import GridSettings, integrate
from .testfns import (BUMP_R_HI, PROFILE_KIND_CHOICES, bundled_fields,
                      compose_with_phi, make_fk, make_profile, radial_field)

logger = logging.getLogger(__name__)

MAXITER = 800
CONVERGENCE_RTOL = 1e-8
# Q_0 не зависит от λ: симплекс может не сжаться по ln λ, и тогда
# сходимость засчитывается по плато значений
PLATEAU_ITERATIONS = 40
PLATEAU_RTOL = 1e-12
DEFAULT_K_LIST = (1, 2, 4, 8, 16, 32)

RADIAL_IDENTITY_RTOL = 1e-4
UPPER_BOUND_ATOL = 1e-6
LIMIT_ATOL = 1e-3
F_BOUND_TOL = 1e-9

FUNCTION_CLASS_NOTE = (
    'Супремум берётся по гладким полям с компактным носителем или '
    'степенным/экспоненциальным убыванием, доступным на квадратурной сетке.'
)
ATTAINMENT_NOTE = (
    'При α > 0 экстремаль не утверждается: последовательность f_k даёт F → 1, '
    'но слабо сходится к нулю.'
)


def a_alpha(alpha, t):
    """Доказанное значение A_α: (1+α)^{−t} при α ≤ 0 и 1 при α > 0."""
    a = as_alpha(alpha)
    if a.value > 0:
        return 1.0
    return a.stretch ** (-t)


def sharp_constant(params, m_constant):
    return params.alpha.stretch ** (params.t / params.n) * a_alpha(params.alpha, params.t) * m_constant


def radial_sharp_constant(params, m_constant):
    return params.alpha.stretch ** (params.t / params.n - params.t) * m_constant


@dataclass
class ConstantEstimate:
    value: float
    optimizer_params: dict
    iterations: int
    converged: bool
    grid_settings: dict
    family: str = 'gns-power'
    trace: list = field(default_factory=list)

    def profile(self, n, p):
        """Профиль, на котором достигнут максимум."""
        return make_profile(self.family, n, p, gamma=self.optimizer_params['gamma'],
                            scale=self.optimizer_params['scale'])

    def as_dict(self, include_trace=False):
        data = {
            'value': self.value,
            'family': self.family,
            'optimizer_params': dict(self.optimizer_params),
            'iterations': self.iterations,
            'converged': self.converged,
            'grid_settings': dict(self.grid_settings),
        }
        if include_trace:
            data['trace'] = list(self.trace)
        return data


def _minimal_gamma(n, p, exponents, with_gradient):
    """Нижняя граница γ степенных профилей, при которой используемые нормы конечны."""
    inner = p / (p - 1.0)
    bound = max(n / (q * inner) for q in exponents)
    if with_gradient:
        bound = max(bound, (n / p - 1.0) / inner)
    return bound


class _ShapeSpace:
    """
    Координаты Нелдера–Мида для семейства профилей:
    gns-power: (ln γ, ln λ); sobolev-extremal: (ln λ,); gaussian: (ln(γ−1), ln λ).
    """

    def __init__(self, family, params):
        self.family = family
        self.params = params

    def start(self, gamma=None, scale=1.0):
        n, p = self.params.n, self.params.p
        if self.family == 'sobolev-extremal':
            return np.array([math.log(scale)])
        if self.family == 'gaussian':
            gamma = 2.0 if gamma is None else gamma
            if not gamma > 1.0:
                raise ArgumentError(f'Стартовый γ гауссианы должен быть > 1, получено {gamma}')
            return np.array([math.log(gamma - 1.0), math.log(scale)])
        if gamma is None:
            used = self.used_exponents()
            floor = 1.02 * _minimal_gamma(n, p, used, self.params.t > 0)
            gamma = max((n - p) / p, floor)
        return np.array([math.log(gamma), math.log(scale)])

    def used_exponents(self):
        return [self.params.r, self.params.s] if self.params.t < 1 else [self.params.r]

    def decode(self, x):
        if self.family == 'sobolev-extremal':
            return None, math.exp(x[0])
        if self.family == 'gaussian':
            return 1.0 + math.exp(x[0]), math.exp(x[1])
        return math.exp(x[0]), math.exp(x[1])

    def profile(self, x):
        gamma, scale = self.decode(x)
        return make_profile(self.family, self.params.n, self.params.p, gamma=gamma, scale=scale)


def estimate_M(params, family='gns-power', grid=None, start=None, maxiter=MAXITER):
    """
    M̂ = max Q_0 по параметрам формы радиального семейства (Нелдер–Мид).

    α в params игнорируется: M зависит только от n, p, s, t. При t = 0
    отношение равно ‖f‖_s/‖f‖_s, и возвращается ровно 1. start задаёт пару
    (γ, λ) для начального профиля; для sobolev-extremal γ не используется.
    Несходимость не исключение: оценка помечается converged=False.
    """
    if family not in dict(PROFILE_KIND_CHOICES):
        raise ArgumentError(f'Неизвестное семейство профилей: {family!r}')
    params = params.with_alpha(0.0)
    if family != 'gaussian' and not params.p > 1.0:
        raise ArgumentError(f'Семейство {family} требует p > 1, получено p={params.p}')
    if grid is None:
        grid = GridSettings().build(params.n, angular=False)
    grid = grid.radial_only()

    if params.t == 0:
        return ConstantEstimate(value=1.0, optimizer_params={'gamma': None, 'scale': 1.0},
                                iterations=0, converged=True, grid_settings=grid.describe(),
                                family=family)

    space = _ShapeSpace(family, params)
    gamma0, scale0 = start if start is not None else (None, 1.0)
    x0 = space.start(gamma0, scale0)
    used = space.used_exponents()
    values = {}

    def objective(x):
        key = tuple(float(v) for v in x)
        if key in values:
            return values[key]
        try:
            profile = space.profile(x)
            if not profile.admissible(used, params.p):
                result = 0.0
            else:
                result = -ckn_quotient(radial_field(profile), params, grid).quotient
        except (CknError, FloatingPointError, OverflowError):
            result = 0.0
        if not math.isfinite(result):
            result = 0.0
        values[key] = result
        return result

    with np.errstate(over='ignore', under='ignore', invalid='ignore', divide='ignore'):
        result = minimize(objective, x0, method='Nelder-Mead',
                          options=dict(maxiter=maxiter, xatol=1e-8, fatol=1e-12, return_all=True))
        trace = [-objective(x) for x in result.allvecs]

    plateau = (len(trace) > PLATEAU_ITERATIONS
               and is_close(trace[-1], trace[-1 - PLATEAU_ITERATIONS], PLATEAU_RTOL))
    converged = bool(result.success) or plateau
    if len(trace) >= 2 and not is_close(trace[-1], trace[-2], CONVERGENCE_RTOL):
        converged = False
    if not converged:
        logger.warning('Оценка M не сошлась за %d итераций: %s', result.nit, result.message)

    _, scale = space.decode(result.x)
    profile = space.profile(result.x)
    logger.debug('M̂ = %.12g, γ = %s, λ = %.6g, итераций %d', -result.fun, profile.gamma, scale, result.nit)
    return ConstantEstimate(
        value=float(-result.fun),
        optimizer_params={'gamma': profile.gamma, 'scale': scale},
        iterations=int(result.nit),
        converged=converged,
        grid_settings=grid.describe(),
        family=family,
        trace=trace,
    )


def richardson_limit(ks, values, levels=2):
    """
    Предел при k → ∞ в предположении поправки по степеням 1/k²:
    многочлен по ε = 1/k² через последние levels+1 точек, значение в ε = 0.
    """
    if len(ks) != len(values):
        raise ArgumentError('Списки k и значений должны быть одной длины')
    count = min(levels + 1, len(ks))
    if count < 1:
        raise ArgumentError('Для экстраполяции нужна хотя бы одна точка')
    eps = 1.0 / np.asarray(ks[-count:], dtype=float) ** 2
    mat = np.vander(eps, count, increasing=True)
    coeffs = np.linalg.solve(mat, np.asarray(values[-count:], dtype=float))
    return float(coeffs[0])


@dataclass
class SymmetryScan:
    alpha: float
    p: float
    rows: list
    extrapolated_limit: float
    rate_assumption: str = 'поправка O(1/k²)'

    @property
    def ks(self):
        return [k for k, _ in self.rows]

    @property
    def values(self):
        return [value for _, value in self.rows]

    @property
    def is_increasing(self):
        values = self.values
        return all(b > a for a, b in zip(values, values[1:]))

    def table(self):
        """Строки (k, F, 1−F, k²(1−F))."""
        return [(k, value, 1.0 - value, k * k * (1.0 - value)) for k, value in self.rows]

    def as_dict(self):
        return {
            'alpha': self.alpha,
            'p': self.p,
            'rows': [{'k': k, 'F': value, 'one_minus_F': gap, 'k2_gap': scaled}
                     for k, value, gap, scaled in self.table()],
            'extrapolated_limit': self.extrapolated_limit,
            'rate_assumption': self.rate_assumption,
        }


def _check_k_list(k_list):
    ks = list(k_list)
    if not ks:
        raise ArgumentError('Список k пуст')
    if any(int(k) != k or k < 1 for k in ks):
        raise ArgumentError(f'Номера k должны быть целыми ≥ 1: {ks}')
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ArgumentError(f'Номера k должны строго возрастать: {ks}')
    return [int(k) for k in ks]


def _check_scan_grid(grid, k_max):
    if grid.dimension != 3 or grid.angular is None:
        raise ArgumentError('Скан f_k требует трёхмерной сетки с угловым правилом')
    if not grid.angular.theta_resolution > 2 * k_max:
        raise ArgumentError(
            f'Разрешение по θ ({grid.angular.theta_resolution}) должно быть больше 2·k_max = {2 * k_max}'
        )


def scan_params(alpha, p):
    """Параметры для F(f_k): от s и t отношение не зависит."""
    return CknParams(n=3, p=p, s=max(p, 1.0), t=1.0, alpha=alpha)


def symmetry_scan(alpha, p, k_list, grid):
    ks = _check_k_list(k_list)
    _check_scan_grid(grid, ks[-1])
    params = scan_params(alpha, p)
    rows = []
    for k in ks:
        value = ratio_F(make_fk(k), params, grid)
        logger.debug('F(f_%d) = %.12g при α = %g', k, value, params.alpha.value)
        rows.append((k, value))
    limit = richardson_limit(ks, [value for _, value in rows])
    return SymmetryScan(alpha=params.alpha.value, p=float(p), rows=rows, extrapolated_limit=limit)


def nonattainment_evidence(alpha, k_list, grid, s):
    """
    Свидетельства слабой сходимости f_k к нулю: нормы ‖f_k‖_{s, αn}
    ограничены, а нормированные попарные скалярные произведения
    ∫ f_k f_m |x|^{αn} dx равны нулю с точностью квадратуры.
    """
    a = as_alpha(alpha)
    ks = _check_k_list(k_list)
    _check_scan_grid(grid, ks[-1])
    beta = a.value * 3
    fields = [make_fk(k) for k in ks]
    window = fields[0].support.window()
    s_norms = [weighted_norm(f, s, beta, grid) for f in fields]
    l2 = [weighted_norm(f, 2.0, beta, grid) for f in fields]
    overlap = 0.0
    for i, fi in enumerate(fields):
        for j in range(i + 1, len(fields)):
            fj = fields[j]
            inner = integrate(lambda pts, fi=fi, fj=fj: fi.value(pts) * fj.value(pts),
                              beta, grid, support=window)
            overlap = max(overlap, abs(inner) / (l2[i] * l2[j]))
    return {
        'k': ks,
        's': float(s),
        's_norms': s_norms,
        's_norm_max': max(s_norms),
        'max_normalized_overlap': overlap,
    }


@dataclass
class CheckItem:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    skipped: bool = False

    def as_dict(self):
        return {'name': self.name, 'passed': self.passed, 'skipped': self.skipped,
                'details': self.details}


@dataclass
class TheoremReport:
    params: dict
    grid_settings: dict
    estimate: ConstantEstimate
    constants: dict
    items: list
    note: str = FUNCTION_CLASS_NOTE

    @property
    def passed(self):
        return all(item.passed for item in self.items if not item.skipped)

    @property
    def failures(self):
        return [item.name for item in self.items if not item.skipped and not item.passed]

    def item(self, name):
        return next(item for item in self.items if item.name == name)

    def as_dict(self):
        return {
            'params': self.params,
            'grid_settings': self.grid_settings,
            'estimate': self.estimate.as_dict(),
            'constants': self.constants,
            'items': [item.as_dict() for item in self.items],
            'passed': self.passed,
            'failures': self.failures,
            'note': self.note,
        }


def _radial_identity(params, settings, estimate, radial_constant):
    optimizer = radial_field(estimate.profile(params.n, params.p), name='f*')
    composed = compose_with_phi(optimizer, params.alpha)
    report = ckn_quotient(composed, params, settings.for_field(composed),
                          reference_constant=radial_constant)
    relative = abs(report.quotient - radial_constant) / radial_constant
    return CheckItem('radial_identity', relative <= RADIAL_IDENTITY_RTOL, {
        'quotient': report.quotient,
        'radial_constant': radial_constant,
        'relative_error': relative,
        'tolerance': RADIAL_IDENTITY_RTOL,
    })


def _symmetry_breaking(params, settings, estimate, radial_constant, sharp, k_list):
    alpha = params.alpha
    if alpha.value == 0 or params.n != 3 or params.t == 0:
        return CheckItem('symmetry_breaking', True, {
            'reason': 'нужны n = 3, t > 0 и α ≠ 0',
        }, skipped=True)
    grid = settings.shell(3, BUMP_R_HI)
    scan = symmetry_scan(alpha, params.p, k_list, grid)
    details = {'scan': scan.as_dict()}
    if alpha.value > 0:
        witnesses = [alpha.stretch ** (params.t / params.n) * value ** (params.t / params.p) * estimate.value
                     for value in scan.values]
        bounded = all(value <= 1.0 + F_BOUND_TOL for value in scan.values)
        passed = (scan.is_increasing and bounded and max(witnesses) > radial_constant
                  and abs(scan.extrapolated_limit - 1.0) <= LIMIT_ATOL)
        details.update({
            'witness_constants': witnesses,
            'witness_max': max(witnesses),
            'radial_constant': radial_constant,
            'sharp_constant': sharp,
            'limit_tolerance': LIMIT_ATOL,
            'attainment_claimed': False,
            'attainment_note': ATTAINMENT_NOTE,
            'nonattainment': nonattainment_evidence(alpha, scan.ks, grid, params.s),
        })
    else:
        ceiling = radial_ratio_expected(params)
        passed = all(value <= ceiling * (1.0 + F_BOUND_TOL) for value in scan.values)
        passed = passed and max(scan.values) < ceiling
        details.update({
            'ceiling': ceiling,
            'optimizing': False,
            'note': 'F(f_k) → 1 < (1+α)^{−p}: f_k не оптимизирующая при α < 0',
        })
    return CheckItem('symmetry_breaking', bool(passed), details)


def _upper_bound(params, settings, sharp):
    quotients = {}
    offenders = []
    errors = {}
    for name, candidate in bundled_fields(params).items():
        try:
            quotient = ckn_quotient(candidate, params, settings.for_field(candidate)).quotient
        except DegenerateFieldError as exc:
            logger.warning('Поле %s пропущено: %s', name, exc)
            continue
        except CknError as exc:
            logger.warning('Поле %s не вычислено: %s', name, exc)
            errors[name] = str(exc)
            continue
        quotients[name] = quotient
        if quotient > sharp + UPPER_BOUND_ATOL:
            offenders.append(name)
    return CheckItem('upper_bound', not offenders and not errors and bool(quotients), {
        'sharp_constant': sharp,
        'tolerance': UPPER_BOUND_ATOL,
        'quotients': quotients,
        'offenders': offenders,
        'errors': errors,
    })


def _constant_assembly(params, m_value, sharp, radial_constant):
    alpha, t = params.alpha.value, params.t
    gap = sharp / radial_constant
    if alpha > 0:
        expected = params.alpha.stretch ** t
        passed = is_close(gap, expected, 1e-12)
    elif alpha < 0:
        expected = 1.0
        passed = is_close(sharp, radial_constant, 1e-12)
    else:
        expected = 1.0
        passed = sharp == radial_constant == m_value
    return CheckItem('constant_assembly', bool(passed), {
        'sharp_over_radial': gap,
        'expected': expected,
        'm_value': m_value,
    })


def _guarded(name, check, *args):
    """Ошибка вычисления внутри пункта делает его непройденным, отчёт строится дальше."""
    try:
        return check(*args)
    except CknError as exc:
        logger.warning('Проверка %s прервана: %s', name, exc)
        return CheckItem(name, False, {'error': str(exc), 'error_type': type(exc).__name__})


def verify_theorems(params, settings, family='gns-power', k_list=DEFAULT_K_LIST, estimate=None):
    """
    Сводный отчёт: (a) тождество для радиальной константы на f*∘φ,
    (b) скан f_k (нарушение симметрии при α > 0, неоптимальность при α < 0),
    (c) ни одно поле набора не превышает точную константу,
    (d) согласованность сборки констант.
    Провал пункта попадает в отчёт, исключения не бросаются.
    """
    if estimate is None:
        estimate = estimate_M(params, family, settings.build(params.n, angular=False))
    m_value = estimate.value
    sharp = sharp_constant(params, m_value)
    radial_constant = radial_sharp_constant(params, m_value)
    logger.info('α = %g: M̂ = %.10g, точная %.10g, радиальная %.10g',
                params.alpha.value, m_value, sharp, radial_constant)

    items = [
        _guarded('radial_identity', _radial_identity, params, settings, estimate, radial_constant),
        _guarded('symmetry_breaking', _symmetry_breaking,
                 params, settings, estimate, radial_constant, sharp, k_list),
        _guarded('upper_bound', _upper_bound, params, settings, sharp),
        _guarded('constant_assembly', _constant_assembly, params, m_value, sharp, radial_constant),
    ]
    for item in items:
        if not item.skipped and not item.passed:
            logger.warning('Проверка %s не пройдена', item.name)
    return TheoremReport(
        params=params.as_dict(),
        grid_settings=settings.as_dict(),
        estimate=estimate,
        constants={
            'm_hat': m_value,
            'a_alpha': a_alpha(params.alpha, params.t),
            'sharp_constant': sharp,
            'radial_constant': radial_constant,
        },
        items=items,
    )

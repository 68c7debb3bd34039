from django import forms

from .exceptions import CknError
from .functionals import CknParams
from .quadrature import RADIAL_LAYOUT_CHOICES, GridSettings
from .testfns import PROFILE_KIND_CHOICES


class RunConfigForm(forms.Form):
    """
    Параметры одного запуска команды. Данные собираются из значений
    по умолчанию, файла --config и флагов; здесь всё проверяется заново
    с понятными сообщениями.
    """

    FORMAT_CHOICES = [
        ('', 'По умолчанию для команды'),
        ('csv', 'CSV'),
        ('json', 'JSON'),
    ]

    # Параметры неравенства
    n = forms.IntegerField(label='Размерность n', min_value=2)
    p = forms.FloatField(label='Показатель p')
    s = forms.FloatField(label='Показатель s')
    t = forms.FloatField(label='Параметр интерполяции t')
    alpha = forms.FloatField(label='Показатель α')

    # Квадратура
    r_max = forms.FloatField(label='Радиус обрезки (линейная раскладка)', required=False,
                             help_text='Только при radial_layout=linear; по умолчанию 40')
    radial_panels = forms.IntegerField(label='Число радиальных панелей', min_value=1)
    radial_points = forms.IntegerField(label='Узлов Гаусса на панели', min_value=2)
    ang_theta = forms.IntegerField(label='Узлов по θ', min_value=4)
    ang_phi = forms.IntegerField(label='Узлов по φ', min_value=2)
    radial_layout = forms.ChoiceField(label='Раскладка радиальных узлов', choices=RADIAL_LAYOUT_CHOICES)
    log_r_min = forms.FloatField(label='Нижний радиус (логарифмическая раскладка)')
    log_r_max = forms.FloatField(label='Верхний радиус (логарифмическая раскладка)')

    # Команды
    k_max = forms.IntegerField(label='Наибольший номер k', min_value=1)
    family = forms.ChoiceField(label='Семейство профилей', choices=PROFILE_KIND_CHOICES)
    alphas = forms.CharField(label='Сетка значений α', help_text='Через запятую, например -0.5,0,1')
    samples = forms.IntegerField(label='Число случайных точек', min_value=1)
    seed = forms.IntegerField(label='Зерно генератора', min_value=0)
    format = forms.ChoiceField(label='Формат вывода', choices=FORMAT_CHOICES, required=False)
    out = forms.CharField(label='Файл вывода', required=False)

    def __init__(self, *args, **kwargs):
        # Команда передаёт своё имя: от неё зависят дополнительные проверки
        self.command = kwargs.pop('command', None)
        super().__init__(*args, **kwargs)

    def clean_p(self):
        p = self.cleaned_data['p']
        if p < 1:
            raise forms.ValidationError('Показатель p должен быть не меньше 1')
        return p

    def clean_s(self):
        s = self.cleaned_data['s']
        if s < 1:
            raise forms.ValidationError('Показатель s должен быть не меньше 1')
        return s

    def clean_t(self):
        t = self.cleaned_data['t']
        if not 0 <= t <= 1:
            raise forms.ValidationError('Параметр t должен лежать в отрезке [0, 1]')
        return t

    def clean_alpha(self):
        alpha = self.cleaned_data['alpha']
        if alpha <= -1:
            raise forms.ValidationError('Показатель α должен быть больше −1')
        return alpha

    def clean_r_max(self):
        r_max = self.cleaned_data['r_max']
        if r_max is not None and r_max <= 0:
            raise forms.ValidationError('Радиус обрезки должен быть положительным')
        return r_max

    def clean_alphas(self):
        raw = self.cleaned_data['alphas']
        values = []
        for item in raw.split(','):
            item = item.strip()
            if not item:
                continue
            try:
                value = float(item)
            except ValueError:
                raise forms.ValidationError(f'Не число в сетке α: "{item}"')
            if value <= -1:
                raise forms.ValidationError(f'Все значения α должны быть больше −1, получено {value:g}')
            values.append(value)
        if not values:
            raise forms.ValidationError('Сетка α пуста')
        return values

    def clean(self):
        """Проверки, затрагивающие несколько полей."""
        cleaned_data = super().clean()
        n = cleaned_data.get('n')
        p = cleaned_data.get('p')

        if n is not None and p is not None and p >= n:
            self.add_error('p', f'Нужно p < n, получено p={p:g}, n={n}')
        elif not self.errors:
            try:
                self.ckn_params()
            except CknError as exc:
                self.add_error(None, str(exc))

        if cleaned_data.get('radial_layout') == 'log' and cleaned_data.get('r_max') is not None:
            self.add_error('r_max', 'r_max задаёт обрезку только линейной раскладки; '
                                    'для log используйте log_r_min и log_r_max')

        low, high = cleaned_data.get('log_r_min'), cleaned_data.get('log_r_max')
        if low is not None and high is not None and not 0 < low < high:
            self.add_error('log_r_max', 'Нужно 0 < log_r_min < log_r_max')

        if self.command == 'symmetry_scan' and n is not None and n != 3:
            self.add_error('n', 'Скан f_k определён только при n = 3')
        if self.command in ('symmetry_scan', 'verify'):
            k_max = cleaned_data.get('k_max')
            ang_theta = cleaned_data.get('ang_theta')
            if k_max is not None and ang_theta is not None and ang_theta <= 2 * k_max:
                self.add_error('ang_theta', f'Нужно ang_theta > 2·k_max = {2 * k_max}')

        if self.command == 'estimate_m':
            family = cleaned_data.get('family')
            if family != 'gaussian' and p is not None and p <= 1:
                self.add_error('family', f'Семейство {family} требует p > 1')

        return cleaned_data

    def ckn_params(self, alpha=None):
        data = self.cleaned_data
        return CknParams(n=data['n'], p=data['p'], s=data['s'], t=data['t'],
                         alpha=data['alpha'] if alpha is None else alpha)

    def grid_settings(self):
        data = self.cleaned_data
        extra = {} if data['r_max'] is None else {'r_max': data['r_max']}
        return GridSettings(
            **extra,
            radial_panels=data['radial_panels'],
            radial_points=data['radial_points'],
            ang_theta=data['ang_theta'],
            ang_phi=data['ang_phi'],
            radial_layout=data['radial_layout'],
            log_r_min=data['log_r_min'],
            log_r_max=data['log_r_max'],
        )

    def k_list(self):
        """k = 1, 2, 4, … до k_max включительно."""
        ks, k = [], 1
        while k <= self.cleaned_data['k_max']:
            ks.append(k)
            k *= 2
        return ks

    def error_text(self):
        lines = []
        for name, errors in self.errors.items():
            prefix = '' if name == '__all__' else f'{name}: '
            lines.extend(prefix + str(error) for error in errors)
        return '; '.join(lines)

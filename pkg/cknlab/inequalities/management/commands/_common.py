import logging
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from ...config import merge_config
from ...exceptions import (EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION_FAILED,
                           ArgumentError, CknError, UnsupportedParametersError)
from ...forms import RunConfigForm
from ...quadrature import RADIAL_LAYOUT_CHOICES
from ...testfns import PROFILE_KIND_CHOICES

# Ключи RunConfig, которые можно задать флагами
FLAG_KEYS = (
    'n', 'p', 's', 't', 'alpha',
    'r_max', 'radial_panels', 'radial_points', 'ang_theta', 'ang_phi',
    'radial_layout', 'log_r_min', 'log_r_max',
    'k_max', 'family', 'alphas', 'samples', 'seed', 'format', 'out',
)


class LabCommand(BaseCommand):
    """
    Общая часть команд лаборатории: флаги параметров и сетки, сборка
    RunConfig (флаги > --config > settings.CKNLAB_DEFAULTS), вывод отчёта
    и коды выхода.
    """

    command_name = None
    formats = ('json',)
    epilog = 'Приоритет значений: флаги > файл --config > CKNLAB_DEFAULTS из settings.'

    def create_parser(self, prog_name, subcommand, **kwargs):
        kwargs.setdefault('epilog', self.epilog)
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        def usage_error(message):
            raise CommandError(f'Ошибка аргументов: {message}', returncode=EXIT_USAGE)

        parser.error = usage_error
        return parser

    def run_from_argv(self, argv):
        # ошибки разбора флагов возникают до блока обработки в BaseCommand
        try:
            super().run_from_argv(argv)
        except CommandError as exc:
            self.stderr.write(str(exc))
            sys.exit(exc.returncode)

    def add_arguments(self, parser):
        params = parser.add_argument_group('параметры неравенства')
        params.add_argument('--n', type=int, help='размерность n ≥ 2')
        params.add_argument('--p', type=float, help='показатель градиента, 1 ≤ p < n')
        params.add_argument('--s', type=float, help='показатель s ≥ 1')
        params.add_argument('--t', type=float, help='параметр интерполяции, 0 ≤ t ≤ 1')
        params.add_argument('--alpha', type=float, help='показатель отображения, α > −1')

        grid = parser.add_argument_group('квадратура')
        grid.add_argument('--r-max', type=float,
                          help='радиус обрезки, только с --radial-layout linear (по умолчанию 40); '
                               'при log ошибка, границы задают --log-r-min и --log-r-max. '
                               'Поля с компактным носителем считаются на сетке [0, r_hi + 1]')
        grid.add_argument('--radial-panels', type=int)
        grid.add_argument('--radial-points', type=int)
        grid.add_argument('--ang-theta', type=int, help='узлов по θ')
        grid.add_argument('--ang-phi', type=int, help='узлов по φ (n = 3)')
        grid.add_argument('--radial-layout', choices=[key for key, _ in RADIAL_LAYOUT_CHOICES])
        grid.add_argument('--log-r-min', type=float)
        grid.add_argument('--log-r-max', type=float)

        output = parser.add_argument_group('вывод')
        output.add_argument('--out', help='файл отчёта; по умолчанию stdout')
        output.add_argument('--format', choices=self.formats)
        output.add_argument('--seed', type=int, help='зерно генератора случайных точек')
        output.add_argument('--config', help='файл key=value с параметрами запуска')

        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    @staticmethod
    def add_family_argument(parser):
        parser.add_argument('--family', choices=[key for key, _ in PROFILE_KIND_CHOICES],
                            help='семейство радиальных профилей для оценки M')

    def configure_logging(self, verbosity):
        logger = logging.getLogger('inequalities')
        if verbosity >= 2:
            logger.setLevel(logging.DEBUG)
        elif verbosity == 0:
            logger.setLevel(logging.WARNING)

    def load_config(self, options):
        flags = {key: options.get(key) for key in FLAG_KEYS}
        try:
            data = merge_config(flags, options.get('config'))
        except ArgumentError as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE)
        form = RunConfigForm(data, command=self.command_name)
        if not form.is_valid():
            raise CommandError(f'Некорректная конфигурация: {form.error_text()}', returncode=EXIT_USAGE)
        output_format = form.cleaned_data['format'] or self.formats[0]
        if output_format not in self.formats:
            raise CommandError(
                f'Команда {self.command_name} не поддерживает формат {output_format}', returncode=EXIT_USAGE
            )
        form.cleaned_data['format'] = output_format
        return form

    def handle(self, *args, **options):
        self.configure_logging(options['verbosity'])
        form = self.load_config(options)
        try:
            code, text, message = self.run(form, options)
        except (ArgumentError, UnsupportedParametersError) as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE)
        except CknError as exc:
            raise CommandError(str(exc), returncode=EXIT_VERIFICATION_FAILED)
        self.emit(text, form.cleaned_data['out'])
        if code != EXIT_OK:
            raise CommandError(message, returncode=code)

    def run(self, form, options):
        """Возвращает (код выхода, текст отчёта, сообщение при неуспехе)."""
        raise NotImplementedError

    def emit(self, text, out):
        if out:
            Path(out).write_text(text, encoding='utf-8', newline='')
        else:
            self.stdout.write(text, ending='')

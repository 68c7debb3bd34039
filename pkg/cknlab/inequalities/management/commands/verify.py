from ...constants import verify_theorems
from ...exceptions import EXIT_NOT_CONVERGED, EXIT_OK, EXIT_VERIFICATION_FAILED
from ...reports import render_json
from ._common import LabCommand


class Command(LabCommand):
    help = 'Проверка теорем о точных константах: радиальное тождество, скан f_k, верхняя граница, сборка констант'
    command_name = 'verify'

    def add_command_arguments(self, parser):
        parser.add_argument('--k-max', type=int, help='наибольший k в скане f_k')
        self.add_family_argument(parser)

    def run(self, form, options):
        data = form.cleaned_data
        report = verify_theorems(form.ckn_params(), form.grid_settings(),
                                 family=data['family'], k_list=form.k_list())
        text = render_json(self.command_name, report.as_dict(), seed=data['seed'])
        if not report.passed:
            return EXIT_VERIFICATION_FAILED, text, f'Не пройдены проверки: {", ".join(report.failures)}'
        if not report.estimate.converged:
            return EXIT_NOT_CONVERGED, text, 'Оценка M̂ не сошлась'
        return EXIT_OK, text, None

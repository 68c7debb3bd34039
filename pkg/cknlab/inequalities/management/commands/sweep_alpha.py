import logging

from ...constants import a_alpha, estimate_M, radial_sharp_constant, sharp_constant
from ...exceptions import EXIT_NOT_CONVERGED, EXIT_OK
from ...reports import render_csv, render_json
from ._common import LabCommand

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = 'Радиальная и точная константы CKN на сетке значений α при общей оценке M̂'
    command_name = 'sweep_alpha'
    formats = ('csv', 'json')

    def add_command_arguments(self, parser):
        parser.add_argument('--alphas', help='значения α через запятую; отрицательные писать как --alphas=-0.5,1')
        self.add_family_argument(parser)

    def run(self, form, options):
        data = form.cleaned_data
        params = form.ckn_params(alpha=0.0)
        estimate = estimate_M(params, data['family'], form.grid_settings().build(params.n, angular=False))

        rows = []
        for alpha in data['alphas']:
            current = params.with_alpha(alpha)
            radial = radial_sharp_constant(current, estimate.value)
            sharp = sharp_constant(current, estimate.value)
            rows.append((alpha, radial, sharp, sharp / radial, a_alpha(current.alpha, current.t)))

        if data['format'] == 'json':
            text = render_json(self.command_name, {
                'params': params.as_dict(),
                'estimate': estimate.as_dict(),
                'rows': [dict(zip(('alpha', 'radial_constant', 'sharp_constant', 'gap_ratio', 'a_alpha'), row))
                         for row in rows],
            }, seed=data['seed'])
        else:
            text = render_csv(['alpha', 'radial_constant', 'sharp_constant', 'gap_ratio', 'a_alpha'], rows)

        if not estimate.converged:
            return EXIT_NOT_CONVERGED, text, f'Оценка M̂ не сошлась за {estimate.iterations} итераций'
        return EXIT_OK, text, None

from ...constants import estimate_M
from ...exceptions import EXIT_NOT_CONVERGED, EXIT_OK
from ...reports import render_json
from ._common import LabCommand


class Command(LabCommand):
    help = 'Оценка M(n, p, s, t) максимизацией отношения Гальярдо–Ниренберга по радиальному семейству'
    command_name = 'estimate_m'

    def add_command_arguments(self, parser):
        self.add_family_argument(parser)
        parser.add_argument('--trace', action='store_true', help='включить в отчёт значения по итерациям')

    def run(self, form, options):
        data = form.cleaned_data
        params = form.ckn_params(alpha=0.0)
        estimate = estimate_M(params, data['family'], form.grid_settings().build(params.n, angular=False))
        text = render_json(self.command_name, {
            'params': params.as_dict(),
            'estimate': estimate.as_dict(include_trace=options['trace']),
        }, seed=data['seed'])
        if not estimate.converged:
            return EXIT_NOT_CONVERGED, text, f'Оценка M̂ не сошлась за {estimate.iterations} итераций'
        return EXIT_OK, text, None

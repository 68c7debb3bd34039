from ...constants import symmetry_scan
from ...exceptions import EXIT_OK
from ...reports import render_csv, render_json
from ...testfns import BUMP_R_HI
from ._common import LabCommand


class Command(LabCommand):
    help = 'Скан F(f_k) для k = 1, 2, 4, … ≤ k_max в R^3 с экстраполяцией по 1/k²'
    command_name = 'symmetry_scan'
    formats = ('csv', 'json')

    def add_command_arguments(self, parser):
        parser.add_argument('--k-max', type=int, help='наибольший k; нужно ang_theta > 2·k_max')

    def run(self, form, options):
        data = form.cleaned_data
        grid = form.grid_settings().shell(3, BUMP_R_HI)
        scan = symmetry_scan(data['alpha'], data['p'], form.k_list(), grid)

        if data['format'] == 'json':
            return EXIT_OK, render_json(self.command_name, scan.as_dict(), seed=data['seed']), None

        limit = scan.extrapolated_limit
        text = render_csv(
            ['k', 'F', 'one_minus_F', 'k2_one_minus_F'],
            scan.table(),
            footer=['limit', limit, 1.0 - limit, ''],
        )
        return EXIT_OK, text, None

import logging

import numpy as np

from ...core_maps import (analytic_eigen, char_poly_residual, char_poly_scale,
                          spectrum_residuals)
from ...exceptions import EXIT_OK, EXIT_VERIFICATION_FAILED
from ...reports import render_json
from ._common import LabCommand

logger = logging.getLogger(__name__)

EIGEN_TOL = 1e-10
DET_TOL = 1e-10
CHAR_POLY_TOL = 1e-9
# Относительная порча элемента (0, 0) в режиме --inject-fault
FAULT_SIZE = 1e-6
ALPHA_RANGE = (-0.9, 3.0)


class Command(LabCommand):
    help = 'Сверяет замкнутую форму спектра Dφ с численным решателем в случайных точках'
    command_name = 'eig_check'

    def add_command_arguments(self, parser):
        parser.add_argument('--samples', type=int, help='число случайных точек (по умолчанию 200)')
        parser.add_argument('--fixed-alpha', action='store_true',
                            help='брать α из конфигурации вместо случайного из (−0.9, 3)')
        parser.add_argument('--inject-fault', action='store_true',
                            help='контрольная порча матрицы: проверка обязана упасть')

    def run(self, form, options):
        data = form.cleaned_data
        n, seed, samples = data['n'], data['seed'], data['samples']
        rng = np.random.default_rng(seed)
        worst = {'eigen': (0.0, None), 'det': (0.0, None), 'char_poly': (0.0, None)}

        for _ in range(samples):
            x = rng.standard_normal(n) * np.exp(rng.uniform(-2.0, 2.0))
            alpha = data['alpha'] if options['fixed_alpha'] else rng.uniform(*ALPHA_RANGE)
            summary = analytic_eigen(x, alpha)
            top = max(summary.lambda_radial, summary.lambda_tangential)
            lam = rng.uniform(0.0, 2.0 * top)
            perturbation = FAULT_SIZE * summary.lambda_tangential if options['inject_fault'] else 0.0

            eig_res, det_res = spectrum_residuals(x, alpha, perturbation=perturbation)
            poly_res = abs(char_poly_residual(x, alpha, lam)) / char_poly_scale(x, alpha, lam)
            where = {'x': x.tolist(), 'alpha': float(alpha)}
            for key, value in (('eigen', eig_res), ('det', det_res), ('char_poly', poly_res)):
                if value >= worst[key][0]:
                    worst[key] = (value, where)

        tolerances = {'eigen': EIGEN_TOL, 'det': DET_TOL, 'char_poly': CHAR_POLY_TOL}
        breaches = [key for key, (value, _) in worst.items() if not value < tolerances[key]]
        logger.info('eig_check: n=%d, точек %d, невязки %s', n, samples,
                    {key: value for key, (value, _) in worst.items()})

        payload = {
            'n': n,
            'samples': samples,
            'alpha_mode': 'fixed' if options['fixed_alpha'] else 'random',
            'inject_fault': bool(options['inject_fault']),
            'tolerances': tolerances,
            'max_residuals': {key: value for key, (value, _) in worst.items()},
            'worst_points': {key: where for key, (_, where) in worst.items()},
            'passed': not breaches,
            'breaches': breaches,
        }
        text = render_json(self.command_name, payload, seed=seed)
        if breaches:
            key = breaches[0]
            where = worst[key][1]
            message = (f'Невязка {key} = {worst[key][0]:.3e} превышает допуск '
                       f'в точке x={where["x"]}, α={where["alpha"]:g}')
            return EXIT_VERIFICATION_FAILED, text, message
        return EXIT_OK, text, None

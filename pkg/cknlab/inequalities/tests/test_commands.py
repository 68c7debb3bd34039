import csv
import io
import json
import tempfile
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from ..exceptions import EXIT_USAGE, EXIT_VERIFICATION_FAILED
from ..forms import RunConfigForm
from ..config import merge_config, read_config_file
from .base import relative, talenti_constant

SMALL = {'ang_theta': 72, 'ang_phi': 16}


def run(name, *args, **options):
    out = io.StringIO()
    call_command(name, *args, stdout=out, **options)
    return out.getvalue()


class EigCheckCommandTests(SimpleTestCase):

    def test_default_run_passes(self):
        report = json.loads(run('eig_check'))
        self.assertEqual(report['schema_version'], 1)
        self.assertEqual(report['samples'], 200)
        self.assertEqual(report['seed'], 0)
        self.assertTrue(report['passed'])
        self.assertLess(report['max_residuals']['eigen'], 1e-10)

    def test_zero_alpha_is_at_rounding_level(self):
        report = json.loads(run('eig_check', alpha=0.0, fixed_alpha=True, samples=20))
        self.assertEqual(report['alpha_mode'], 'fixed')
        self.assertLess(report['max_residuals']['eigen'], 1e-14)

    def test_injected_fault_fails(self):
        with self.assertRaises(CommandError) as ctx:
            run('eig_check', inject_fault=True, samples=10)
        self.assertEqual(ctx.exception.returncode, EXIT_VERIFICATION_FAILED)
        self.assertIn('x=', str(ctx.exception))

    def test_deterministic_output(self):
        self.assertEqual(run('eig_check', samples=30, seed=4), run('eig_check', samples=30, seed=4))


class UsageErrorTests(SimpleTestCase):

    def test_bad_flag_value(self):
        with self.assertRaises(CommandError) as ctx:
            run('eig_check', '--samples', 'many')
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)

    def test_invalid_parameters(self):
        for options in ({'alpha': -1.0}, {'p': 3.0}, {'t': 1.5}):
            with self.subTest(**options):
                with self.assertRaises(CommandError) as ctx:
                    run('estimate_m', **options)
                self.assertEqual(ctx.exception.returncode, EXIT_USAGE)

    def test_scan_resolution_is_checked_before_computing(self):
        with self.assertRaises(CommandError) as ctx:
            run('symmetry_scan', ang_theta=64, k_max=32)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)
        self.assertIn('ang_theta', str(ctx.exception))

    def test_r_max_rejected_with_log_layout(self):
        with self.assertRaises(CommandError) as ctx:
            run('estimate_m', r_max=40.0)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)
        self.assertIn('r_max', str(ctx.exception))

    def test_unsupported_format(self):
        with self.assertRaises(CommandError) as ctx:
            run('estimate_m', '--format', 'csv')
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)


class SymmetryScanCommandTests(SimpleTestCase):

    def test_csv_rows_and_footer(self):
        text = run('symmetry_scan', alpha=1.0, **SMALL)
        rows = list(csv.reader(io.StringIO(text)))
        self.assertEqual(rows[0], ['k', 'F', 'one_minus_F', 'k2_one_minus_F'])
        self.assertEqual([row[0] for row in rows[1:-1]], ['1', '2', '4', '8', '16', '32'])
        self.assertEqual(rows[-1][0], 'limit')
        values = [float(row[1]) for row in rows[1:-1]]
        self.assertEqual(values, sorted(values))
        self.assertLess(abs(float(rows[-1][1]) - 1.0), 1e-3)
        self.assertIn('\r\n', text)

    def test_zero_alpha_column(self):
        rows = list(csv.reader(io.StringIO(run('symmetry_scan', alpha=0.0, k_max=4, **SMALL))))
        for row in rows[1:-1]:
            self.assertAlmostEqual(float(row[1]), 1.0, places=12)

    def test_config_file_and_flag_precedence(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = Path(tmp) / 'run.cfg'
            config.write_text('# скан\nalpha = 1.0\nk-max=8\nang_theta=40\nang-phi = 8  # мало\n', encoding='utf-8')
            rows = list(csv.reader(io.StringIO(run('symmetry_scan', config=str(config)))))
            self.assertEqual([row[0] for row in rows[1:-1]], ['1', '2', '4', '8'])
            rows = list(csv.reader(io.StringIO(run('symmetry_scan', config=str(config), k_max=2))))
            self.assertEqual([row[0] for row in rows[1:-1]], ['1', '2'])

    def test_json_output_to_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'scan.json'
            self.assertEqual(run('symmetry_scan', alpha=-0.5, k_max=4, format='json', out=str(target), **SMALL), '')
            report = json.loads(target.read_text(encoding='utf-8'))
        self.assertEqual(report['command'], 'symmetry_scan')
        self.assertTrue(all(1.0 - 1e-9 <= row['F'] <= 4.0 for row in report['rows']))


class SweepAlphaCommandTests(SimpleTestCase):

    def test_rows_follow_theorems(self):
        text = run('sweep_alpha', '--alphas=-0.5,0,1,2')
        rows = list(csv.DictReader(io.StringIO(text)))
        self.assertEqual([float(row['alpha']) for row in rows], [-0.5, 0.0, 1.0, 2.0])
        for row in rows:
            alpha = float(row['alpha'])
            radial, sharp, gap = float(row['radial_constant']), float(row['sharp_constant']), float(row['gap_ratio'])
            if alpha < 0:
                self.assertLess(relative(radial, sharp), 1e-14)
            elif alpha == 0:
                self.assertEqual(gap, 1.0)
            else:
                self.assertLess(relative(gap, 1.0 + alpha), 1e-12)

    def test_deterministic_bytes(self):
        self.assertEqual(run('sweep_alpha', format='json'), run('sweep_alpha', format='json'))


class EstimateCommandTests(SimpleTestCase):

    def test_sobolev_case(self):
        report = json.loads(run('estimate_m', trace=True))
        estimate = report['estimate']
        self.assertTrue(estimate['converged'])
        self.assertLess(relative(estimate['value'], talenti_constant(3, 2.0)), 1e-4)
        self.assertAlmostEqual(estimate['trace'][-1], estimate['value'], places=10)
        self.assertEqual(report['params']['alpha'], 0.0)


class VerifyCommandTests(SimpleTestCase):

    def test_negative_alpha_passes(self):
        report = json.loads(run('verify', alpha=-0.5, **SMALL))
        self.assertTrue(report['passed'], report['failures'])
        self.assertEqual(len(report['items']), 4)


class RunConfigFormTests(SimpleTestCase):

    def form(self, command=None, **overrides):
        return RunConfigForm(merge_config(overrides), command=command)

    def test_defaults_are_valid(self):
        form = self.form()
        self.assertTrue(form.is_valid(), form.errors)
        self.assertAlmostEqual(form.ckn_params().r, 6.0, places=12)
        self.assertEqual(form.cleaned_data['alphas'], [-0.5, -0.1, 0.0, 0.5, 1.0, 2.0])
        self.assertEqual(form.k_list(), [1, 2, 4, 8, 16, 32])
        self.assertEqual(form.grid_settings().radial_layout, 'log')

    def test_messages(self):
        form = self.form(alpha=-1.0)
        self.assertFalse(form.is_valid())
        self.assertIn('больше −1', form.errors['alpha'][0])
        form = self.form(alphas='0,-2')
        self.assertFalse(form.is_valid())
        self.assertIn('alphas', form.errors)

    def test_r_max_only_for_linear_layout(self):
        form = self.form(r_max=40.0)
        self.assertFalse(form.is_valid())
        self.assertIn('log_r_max', form.errors['r_max'][0])
        form = self.form(radial_layout='linear', r_max=30.0)
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.grid_settings().r_max, 30.0)
        form = self.form(radial_layout='linear')
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.grid_settings().r_max, 40.0)

    def test_scan_needs_three_dimensions(self):
        form = self.form(command='symmetry_scan', n=4)
        self.assertFalse(form.is_valid())
        self.assertIn('n', form.errors)

    def test_config_reader(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'bad.cfg'
            path.write_text('alpha\n', encoding='utf-8')
            with self.assertRaises(ValueError):
                read_config_file(path)
            path.write_text('--log-r-max = 1e12\n', encoding='utf-8')
            self.assertEqual(read_config_file(path), {'log_r_max': '1e12'})

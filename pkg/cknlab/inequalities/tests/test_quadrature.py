import math

import numpy as np
from django.test import SimpleTestCase

from ..exceptions import ArgumentError, FieldEvaluationError
from ..fields import ScalarField, SupportHint
from ..quadrature import (GridSettings, ProductGrid, integrate, integrate_components,
                          make_angular_rule, make_log_radial_rule, make_radial_rule, sphere_area)
from .base import relative


class RadialRuleTests(SimpleTestCase):

    def test_linear_rule_weights_sum_to_length(self):
        rule = make_radial_rule(40.0, 64, 8)
        self.assertEqual(len(rule), 512)
        self.assertAlmostEqual(rule.weights.sum(), 40.0, places=12)
        self.assertTrue(np.all(rule.nodes > 0) and np.all(rule.nodes < 40.0))

    def test_log_rule_weights_sum_to_length(self):
        rule = make_log_radial_rule(1e-8, 1e16, 160, 8)
        self.assertEqual(rule.layout, 'log')
        self.assertLess(relative(rule.weights.sum(), 1e16 - 1e-8), 1e-12)

    def test_invalid_counts(self):
        with self.assertRaises(ArgumentError):
            make_radial_rule(10.0, 0, 8)
        with self.assertRaises(ArgumentError):
            make_radial_rule(10.0, 4, 1)
        with self.assertRaises(ArgumentError):
            make_log_radial_rule(0.0, 1.0, 4, 4)


class AngularRuleTests(SimpleTestCase):

    def test_weights_sum_to_sphere_area(self):
        self.assertAlmostEqual(make_angular_rule(2, 16).weights.sum(), 2 * math.pi, places=12)
        self.assertAlmostEqual(make_angular_rule(3, 16, 8).weights.sum(), 4 * math.pi, places=12)

    def test_trapezoid_exact_for_azimuthal_modes(self):
        rule = make_angular_rule(3, 72, 16)
        phi, theta = rule.angles[:, 0], rule.angles[:, 1]
        for k in (1, 4, 16, 32):
            values = np.sin(phi) ** 2 * np.cos(k * theta) ** 2
            self.assertAlmostEqual(np.dot(rule.weights, values), 4 * math.pi / 3, places=12)

    def test_directions_are_unit_and_match_angles(self):
        rule = make_angular_rule(3, 8, 4)
        np.testing.assert_allclose(np.linalg.norm(rule.directions, axis=-1), 1.0, rtol=1e-14)
        np.testing.assert_allclose(np.arccos(rule.directions[:, 2]), rule.angles[:, 0], atol=1e-12)

    def test_unsupported_dimension_and_resolution(self):
        with self.assertRaises(ArgumentError):
            make_angular_rule(4, 16)
        with self.assertRaises(ArgumentError):
            make_angular_rule(3, 2)


class IntegrateTests(SimpleTestCase):

    def setUp(self):
        self.settings = GridSettings(ang_theta=16, ang_phi=8)

    def gaussian(self, points):
        return np.exp(-np.sum(points ** 2, axis=-1))

    def test_sphere_area(self):
        self.assertAlmostEqual(sphere_area(2), 2 * math.pi)
        self.assertAlmostEqual(sphere_area(3), 4 * math.pi)
        self.assertAlmostEqual(sphere_area(4), 2 * math.pi ** 2)

    def test_gaussian_moments(self):
        for n in (2, 3, 4, 5):
            grid = self.settings.build(n, angular=False)
            exact = math.pi ** (n / 2)
            self.assertLess(relative(integrate(self.gaussian, 0.0, grid), exact), 1e-10)
        # ∫ e^{-|x|²} |x|^{-1} dx в R^3 = 2π
        grid = self.settings.build(3, angular=False)
        self.assertLess(relative(integrate(self.gaussian, -1.0, grid), 2 * math.pi), 1e-10)

    def test_product_path_matches_radial_path(self):
        full = self.settings.build(3)
        self.assertLess(relative(integrate(self.gaussian, 0.5, full),
                                 integrate(self.gaussian, 0.5, full.radial_only())), 1e-12)

    def test_weight_must_be_integrable(self):
        grid = self.settings.build(3, angular=False)
        with self.assertRaises(ArgumentError):
            integrate(self.gaussian, -3.0, grid)

    def test_non_finite_value_reports_node(self):
        grid = self.settings.build(3, angular=False)
        with self.assertRaises(FieldEvaluationError) as ctx:
            integrate(lambda points: np.full(len(points), np.nan), 0.0, grid)
        self.assertIsNotNone(ctx.exception.point)
        self.assertIn('узел', str(ctx.exception))

    def test_support_window_skips_zero_region(self):
        grid = self.settings.shell(3, 4.0)

        def shell(points):
            r = np.linalg.norm(points, axis=-1)
            return np.where((r > 1.0) & (r < 4.0), (r - 1.0) ** 2 * (4.0 - r) ** 2, 0.0)

        self.assertLess(relative(integrate(shell, 0.0, grid, support=(1.0, 4.0)),
                                 integrate(shell, 0.0, grid)), 1e-12)
        self.assertEqual(integrate(shell, 0.0, grid, support=(6.0, 7.0)), 0.0)

    def test_components_share_one_pass(self):
        grid = self.settings.build(3, angular=False)
        both = integrate_components(
            lambda points: np.stack([self.gaussian(points), 2.0 * self.gaussian(points)], axis=-1),
            0.0, grid,
        )
        self.assertAlmostEqual(both[1], 2.0 * both[0], places=12)

    def test_grid_dimension_mismatch(self):
        rule = make_radial_rule(1.0, 2, 2)
        with self.assertRaises(ArgumentError):
            ProductGrid(radial=rule, angular=make_angular_rule(2, 8), dimension=3)

    def test_for_field_picks_grid_by_support(self):
        compact = ScalarField(self.gaussian, dimension=3, support=SupportHint('compact', 1.0, 4.0))
        decaying = ScalarField(self.gaussian, dimension=3, radial=True)
        self.assertEqual(self.settings.for_field(compact).radial.r_max, 5.0)
        self.assertTrue(self.settings.for_field(decaying).is_radial_only)
        self.assertEqual(self.settings.for_field(decaying).radial.layout, 'log')

    def pulled_back(self, alpha):
        return ScalarField(self.gaussian, dimension=3, radial=True,
                           support=SupportHint().pulled_back(alpha))

    def test_for_field_pulls_grid_back_through_phi(self):
        settings = GridSettings()
        # при α = −0.9 радиусы берутся в степени 10: концы 1e-80 и 1e160 → 1e120
        wide = settings.for_field(self.pulled_back(-0.9)).radial
        self.assertLess(relative(wide.r_min, 1e-80), 1e-9)
        self.assertLess(relative(wide.r_max, 1e120), 1e-9)
        narrow = settings.for_field(self.pulled_back(7.0)).radial
        self.assertLess(relative(narrow.r_min, 0.1), 1e-12)
        self.assertLess(relative(narrow.r_max, 100.0), 1e-12)


class WeightedOverflowTests(SimpleTestCase):

    def radial_grid(self, rule):
        return ProductGrid(radial=rule, angular=None, dimension=3)

    def test_vanishing_field_under_huge_weight(self):
        # r^{β+2} переполняется на хвосте, где e^{-r} уже ноль
        def decay(points):
            return np.exp(-np.linalg.norm(points, axis=-1))

        wide = integrate(decay, 100.0, self.radial_grid(make_log_radial_rule(1.0, 1e200, 10000, 8)))
        self.assertTrue(math.isfinite(wide))
        near = integrate(decay, 100.0, self.radial_grid(make_log_radial_rule(1.0, 1e4, 200, 8)))
        self.assertLess(relative(wide, near), 1e-10)

    def test_overflowing_product_reports_node(self):
        grid = self.radial_grid(make_log_radial_rule(1.0, 1e100, 40, 8))
        with self.assertRaises(FieldEvaluationError) as ctx:
            integrate(lambda points: np.full(len(points), 1e300), 0.0, grid)
        self.assertIsNotNone(ctx.exception.point)
        self.assertEqual(ctx.exception.point.shape, (3,))

    def test_angular_path_uses_log_weights_too(self):
        def decay(points):
            return np.exp(-np.linalg.norm(points, axis=-1))

        rule = make_log_radial_rule(1.0, 1e200, 400, 8)
        full = ProductGrid(radial=rule, angular=make_angular_rule(3, 16, 8), dimension=3)
        self.assertLess(relative(integrate(decay, 60.0, full),
                                 integrate(decay, 60.0, self.radial_grid(rule))), 1e-10)

"""Smoke tests for the python module: hand instances with known values."""

import math
import unittest

import asqlab as a


class TestSpaces(unittest.TestCase):
    def test_norms_and_oracle(self):
        F = a.Fkn(2, 4, 8)
        self.assertEqual(F.norm([(1, 2.0)]), 1.0)
        f = [(1, 1.0), (2, -0.5), (5, 0.25)]
        self.assertAlmostEqual(F.norm(f), F.oracle_norm(f), places=12)

        X = a.Xn(2, 2, 16)
        self.assertEqual(X.norm([(4, 1.0), (5, 1.0)]), 1.0)  # block pair
        rep = X.monotone_check([(1, 1.0), (3, -2.0), (9, 0.5)])
        self.assertTrue(rep["nondecreasing"] and rep["attained"])

    def test_sum_norm_is_component_max(self):
        S = a.C0Sum(2, [2, 4], 16)
        x = [[(1, 2.0)], [(1, 1.0)]]
        self.assertEqual(S.norm(x), max(a.Xn(2, 2, 16).norm(x[0]), a.Xn(2, 4, 16).norm(x[1])))

    def test_bad_input_raises(self):
        X = a.Xn(2, 2, 16)
        with self.assertRaises(ValueError):
            X.norm([(99, 1.0)])  # beyond the truncation


class TestWitnesses(unittest.TestCase):
    def test_lemma22_hand_instance(self):
        rep = a.lemma22(a.Fkn(2, 4, 8), [(1, 2.0)])
        self.assertEqual(rep["verdict"], "pass")
        self.assertEqual(rep["h"], [[2, 2.0]])
        self.assertEqual(rep["per_input"], [[0, 1.0]])

    def test_lemma34_hand_instance(self):
        rep = a.lemma34(a.Xn(2, 2, 16), [[(4, 2.0)]])
        self.assertEqual(rep["verdict"], "pass")
        self.assertEqual(rep["h_norm"], 1.0)
        self.assertEqual(rep["per_input"][0][1], 1.5)

    def test_thm35_picks_wide_component(self):
        S = a.C0Sum(2, [2, 4, 6], 64)
        rep = a.thm35(S, [[[(1, 2.0)], [], []]], 0.25)
        self.assertEqual(rep["component_width"], 6)
        self.assertEqual(rep["bound"], 1 + 1 / 6)
        self.assertEqual(rep["verdict"], "pass")

    def test_transfer_identity(self):
        rep = a.transfer(a.Fkn(2, 4, 8), a.Xn(2, 2, 64), [[(1, 1.0)]], [[(4, 2.0)]])
        self.assertTrue(rep["max_identity"])
        self.assertEqual(rep["verdict"], "pass")
        self.assertLessEqual(rep["per_input"][0][1], rep["bound"])


class TestRefutation(unittest.TestCase):
    def test_certificate_clears_threshold(self):
        X = a.Xn(2, 2, 16)
        h = a.random_unit(X, seed=3)
        cert = a.refute_unit_h(X, h, 0.125)
        self.assertGreater(cert["achieved"], 1.125)
        self.assertGreater(cert["margin"], 0.0)

    def test_sweep_stays_above_floor(self):
        rep = a.refute_sweep(a.Xn(2, 2, 16), starts=10, seed=31)
        self.assertTrue(rep["search_ok"] and rep["refutations_ok"])
        self.assertGreaterEqual(rep["best_found"], 7 / 6)
        self.assertEqual(rep["verdict"], "pass")


class TestEllipsoid(unittest.TestCase):
    def test_square_ellipsoid_is_circle(self):
        E = a.mvee([[1, 1], [1, -1]])
        self.assertTrue(E["converged"])
        for i in range(2):
            for j in range(2):
                self.assertAlmostEqual(E["Q"][i][j], 0.5 if i == j else 0.0, places=5)

    def test_prop21_lower_bound(self):
        rep = a.prop21([[1, 1], [1, -1]], 2, samples=2000, seed=7, grid_res=1e-2)
        self.assertEqual(rep["violations"], 0)
        self.assertGreaterEqual(rep["worst_value"], math.sqrt(1.5) - 1e-9)
        self.assertEqual(rep["verdict"], "pass")


class TestModuli(unittest.TestCase):
    def test_block_pair_point_has_small_modulus(self):
        X = a.Xn(2, 2, 16)
        est = a.lasq_modulus(X, [(4, 1.0), (5, -1.0)], starts=10, seed=5)
        self.assertLessEqual(est["value_upper"], 1.0 + 1e-6)  # search step tolerance


if __name__ == "__main__":
    unittest.main()

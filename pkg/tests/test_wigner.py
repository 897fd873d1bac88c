import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from needlets.wigner import (
    TripleIndex,
    parity_even,
    triangle_ok,
    wigner3j_scaled_limit,
    wigner3j_zero_sq,
    wigner3j_zero_sq_batch,
    _w2_lgamma,
)
from oracles import racah_w2_exact


class TestTripleIndex:
    def test_selection_rules(self):
        t = TripleIndex(1, 1, 2)
        assert t.triangle_ok and t.parity_even
        assert not TripleIndex(1, 1, 5).triangle_ok
        assert not TripleIndex(1, 1, 1).parity_even

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            TripleIndex(-1, 0, 1)


class TestZeroMSquared:
    def test_odd_parity_vanishes(self):
        assert wigner3j_zero_sq(1, 1, 1) == 0.0

    def test_triangle_violation_vanishes(self):
        assert wigner3j_zero_sq(1, 1, 5) == 0.0

    def test_small_exact_values(self):
        assert wigner3j_zero_sq(1, 1, 2) == pytest.approx(2.0 / 15.0, rel=1e-12)
        assert wigner3j_zero_sq(2, 2, 2) == pytest.approx(2.0 / 35.0, rel=1e-12)

    def test_against_racah_sampled(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            l1, l2 = rng.integers(0, 61, 2)
            l3 = rng.integers(abs(l1 - l2), l1 + l2 + 1)
            want = float(racah_w2_exact(int(l1), int(l2), int(l3)))
            got = wigner3j_zero_sq(int(l1), int(l2), int(l3))
            if want == 0.0:
                assert got == 0.0
            else:
                assert got == pytest.approx(want, rel=1e-12)

    def test_lgamma_route_matches_racah(self):
        # the large-degree branch, exercised at small degrees for checkability
        rng = np.random.default_rng(5)
        for _ in range(300):
            l1, l2 = rng.integers(0, 61, 2)
            l3 = rng.integers(abs(l1 - l2), l1 + l2 + 1)
            if (l1 + l2 + l3) % 2 or not triangle_ok(l1, l2, l3):
                continue
            want = float(racah_w2_exact(int(l1), int(l2), int(l3)))
            assert _w2_lgamma(int(l1), int(l2), int(l3)) == pytest.approx(
                want, rel=1e-12)

    @given(st.integers(0, 40), st.integers(0, 40), st.integers(0, 40))
    @settings(max_examples=120, deadline=None)
    def test_permutation_symmetry(self, l1, l2, l3):
        base = wigner3j_zero_sq(l1, l2, l3)
        for perm in ((l1, l3, l2), (l2, l1, l3), (l2, l3, l1),
                     (l3, l1, l2), (l3, l2, l1)):
            assert wigner3j_zero_sq(*perm) == pytest.approx(base, rel=1e-12, abs=0.0)

    def test_sum_rule_sampled(self):
        for l1, l2 in ((4, 7), (30, 30), (60, 41)):
            total = math.fsum((2 * L + 1) * wigner3j_zero_sq(l1, l2, L)
                              for L in range(abs(l1 - l2), l1 + l2 + 1))
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_batch_matches_scalar(self):
        l1 = np.array([1, 2, 10, 40, 3])
        l2 = np.array([1, 2, 12, 40, 9])
        l3 = np.array([2, 2, 20, 40, 6])
        batch = wigner3j_zero_sq_batch(l1, l2, l3)
        for i in range(len(l1)):
            assert batch[i] == pytest.approx(
                wigner3j_zero_sq(int(l1[i]), int(l2[i]), int(l3[i])),
                rel=1e-11, abs=1e-300)

    def test_parity_helper(self):
        assert parity_even(2, 2, 2) and not parity_even(2, 2, 3)


class TestScaledLimit:
    def test_equilateral_value(self):
        assert wigner3j_scaled_limit(1.0, 1.0, 1.0) == pytest.approx(
            2.0 / (math.pi * math.sqrt(3.0)), rel=1e-14)

    def test_outside_triangle(self):
        assert wigner3j_scaled_limit(1.0, 1.0, 3.0) == 0.0
        assert wigner3j_scaled_limit(0.5, 0.5, 1.9) == 0.0

    def test_boundary_diverges(self):
        assert wigner3j_scaled_limit(1.0, 1.0, 2.0) == math.inf

    def test_positivity_required(self):
        with pytest.raises(ValueError):
            wigner3j_scaled_limit(0.0, 1.0, 1.0)

    def test_convergence_of_scaled_squares(self):
        # even-sum subsequence of l^2 (l, l, l; 0 0 0)^2
        limit = wigner3j_scaled_limit(1.0, 1.0, 1.0)
        errs = []
        for ell in (250, 500, 1000, 2000):
            val = ell ** 2 * wigner3j_zero_sq(ell, ell, ell)
            errs.append(abs(val / limit - 1.0))
        assert errs == sorted(errs, reverse=True)
        assert errs[-1] < 0.01

    def test_interior_point_convergence(self):
        x = (1.0, 0.8, 1.3)
        limit = wigner3j_scaled_limit(*x)
        ell = 2000
        degs = [math.floor(ell * xi) for xi in x]
        if sum(degs) % 2:
            degs[2] += 1
        val = ell ** 2 * wigner3j_zero_sq(*degs)
        assert val == pytest.approx(limit, rel=0.02)

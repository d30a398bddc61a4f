import math

import pytest

from scavhunt.bench.stats import betainc, ci95, paired_t, t_two_sided_p, welch_t

# Values produced once by scipy.stats (ttest_ind with equal_var=False, ttest_1samp)
# and frozen here.
WELCH_CASES = [
    ([1, 2, 3, 4, 5], [2, 3, 4, 5, 6], -1.0, 0.34659350708733416),
    ([2.1, 3.4, 1.9, 5.6, 4.4, 3.3], [6.2, 5.1, 7.7, 4.9, 6.6],
     -3.4534222310835507, 0.007235733250518093),
    ([10.0, 12.5, 9.8, 11.1], [10.2, 30.0, 5.5, 18.0, 9.9, 14.0, 21.0],
     -1.466993528089543, 0.1892790627819719),
]


def test_ci95_hand_values():
    s = ci95([1, 2, 3])
    assert s.mean == 2.0
    assert s.se == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    assert s.ci95 == pytest.approx(1.96 / math.sqrt(3), abs=1e-12)
    assert s.n == 3


def test_ci95_constant_and_scaling():
    assert ci95([4.0] * 7).ci95 == 0.0
    a, b = ci95([1.0, 4.0, 2.5, 9.0]), ci95([2.0, 8.0, 5.0, 18.0])
    assert b.mean == pytest.approx(2 * a.mean)
    assert b.ci95 == pytest.approx(2 * a.ci95)


def test_ci95_single_sample_and_empty():
    assert ci95([3.0]).ci95 == 0.0
    with pytest.raises(ValueError):
        ci95([])


@pytest.mark.parametrize("a,b,t_ref,p_ref", WELCH_CASES)
def test_welch_matches_frozen_reference(a, b, t_ref, p_ref):
    t, p = welch_t(a, b)
    assert t == pytest.approx(t_ref, abs=1e-10)
    assert p == pytest.approx(p_ref, abs=1e-10)


def test_welch_symmetry():
    a, b = WELCH_CASES[1][:2]
    t1, p1 = welch_t(a, b)
    t2, p2 = welch_t(b, a)
    assert t1 == -t2 and p1 == pytest.approx(p2, abs=1e-15)


def test_welch_identical_and_degenerate():
    assert welch_t([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == (0.0, 1.0)
    assert welch_t([2.0, 2.0], [2.0, 2.0]) == (0.0, 1.0)
    t, p = welch_t([1.0, 1.0], [3.0, 3.0])
    assert t == -math.inf and p == 0.0


def test_welch_needs_two_samples():
    with pytest.raises(ValueError):
        welch_t([1.0], [1.0, 2.0])


def test_paired_frozen_reference():
    t, p = paired_t([0.5, -0.2, 1.1, 0.8, 0.3, 0.9, -0.1])
    assert t == pytest.approx(2.499330694344802, abs=1e-10)
    assert p == pytest.approx(0.04657038357216925, abs=1e-10)


def test_incomplete_beta_edges_and_symmetry():
    assert betainc(2.0, 3.0, 0.0) == 0.0
    assert betainc(2.0, 3.0, 1.0) == 1.0
    # I_x(1, 1) = x
    assert betainc(1.0, 1.0, 0.37) == pytest.approx(0.37, abs=1e-14)
    assert betainc(2.5, 4.0, 0.3) == pytest.approx(1 - betainc(4.0, 2.5, 0.7), abs=1e-14)


def test_t_p_value_limits():
    assert t_two_sided_p(0.0, 5) == pytest.approx(1.0)
    # df=1 is Cauchy: p = 1 - 2/pi * atan(|t|)
    assert t_two_sided_p(1.0, 1) == pytest.approx(0.5, abs=1e-12)
    assert t_two_sided_p(3.0, 1) == pytest.approx(1 - 2 / math.pi * math.atan(3.0), abs=1e-12)

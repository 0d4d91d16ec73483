import math

import pytest

from peierls import (
    CapExceeded,
    ESCAPES_WINDOW,
    Window,
    bisect_threshold,
    cluster_at,
    estimate_crossing,
    estimate_origin_reach,
    estimate_threshold,
    exact_origin_reach_probability,
    sample_field,
    trial_seed,
)
from peierls.montecarlo import _crossing_count, _reach_count


def test_extreme_concentrations():
    assert estimate_origin_reach(8, 1.0, 50, 0).value == 1.0
    assert estimate_origin_reach(8, 0.0, 50, 0).value == 0.0
    assert estimate_crossing(8, 1.0, 50, 0).value == 1.0
    assert estimate_crossing(8, 0.0, 50, 0).value == 0.0


def test_estimates_are_deterministic():
    a = estimate_origin_reach(12, 0.65, 500, 9)
    b = estimate_origin_reach(12, 0.65, 500, 9)
    assert a == b


def test_parallel_equals_serial():
    a = estimate_crossing(16, 0.6, 1500, 4, workers=1)
    b = estimate_crossing(16, 0.6, 1500, 4, workers=3)
    assert a.value == b.value
    c = estimate_origin_reach(16, 0.62, 1500, 4, workers=1)
    d = estimate_origin_reach(16, 0.62, 1500, 4, workers=4)
    assert c.value == d.value


def test_trials_recomputable_independently():
    total = _reach_count(3, 10, 0.6, 0, 200)
    split = sum(_reach_count(3, 10, 0.6, a, a + 25) for a in range(0, 200, 25))
    assert total == split


def test_std_error_formula():
    est = estimate_crossing(8, 0.6, 400, 1)
    assert est.std_error == pytest.approx(math.sqrt(est.value * (1 - est.value) / 400))


def test_vectorized_reach_matches_cluster_walk():
    # dual route: per-trial indicator from the labeled grids vs a direct
    # breadth-first cluster extraction on the same coupled field
    L, c, seed = 6, 0.58, 21
    w = Window(L)
    for t in range(60):
        fast = _reach_count(seed, L, c, t, t + 1)
        field = sample_field(w, trial_seed(seed, t))
        slow = cluster_at(field, c, (0, 0)) is ESCAPES_WINDOW
        assert fast == int(slow)


def test_crossing_monotone_in_concentration_per_trial():
    L, seed = 10, 13
    for t in range(80):
        low = _crossing_count(seed, L, 0.45, t, t + 1)
        high = _crossing_count(seed, L, 0.70, t, t + 1)
        assert low <= high


def test_reach_monotone_in_window_radius_per_trial():
    # field values are window independent, so escaping a larger window
    # implies escaping a smaller one, configuration by configuration
    seed, c = 2, 0.62
    exceptions = 0
    for t in range(1000):
        big = _reach_count(seed, 12, c, t, t + 1)
        small = _reach_count(seed, 6, c, t, t + 1)
        exceptions += int(big > small)
    assert exceptions == 0


def test_crossing_higher_at_higher_concentration():
    lo = estimate_crossing(32, 0.45, 800, 5)
    hi = estimate_crossing(32, 0.70, 800, 5)
    assert lo.value < hi.value


def test_reach_respects_series_floor():
    # failure to reach needs either a vacant origin or an enclosing contour,
    # so the reach probability is at least 1 - (1-c) - series_bound(c)
    from peierls import tail_bound

    c = 0.9
    est = estimate_origin_reach(64, c, 4000, 10, workers=2)
    floor = 1.0 - (1.0 - c) - tail_bound(c, 4)
    assert est.value >= floor - 3 * est.std_error


def test_bisection_inside_proven_interval():
    res = bisect_threshold(24, 800, 0.01, 3)
    assert 1 / 3 < res.estimate < 4 / 5
    assert len(res.trace) == math.ceil(math.log2(1 / res.tol))
    assert res.estimate == estimate_threshold(24, 800, 0.01, 3)


def test_bisection_nesting_under_smaller_tolerance():
    coarse = bisect_threshold(16, 400, 0.02, 8)
    fine = bisect_threshold(16, 400, 0.004, 8)
    assert abs(fine.estimate - coarse.estimate) <= coarse.tol


def test_bisection_tolerance_validated():
    with pytest.raises(ValueError):
        bisect_threshold(8, 100, 1e-4, 0)


def brute_reach_probability(c):
    """Independent oracle for the 3x3 window: iterate occupancy patterns."""
    import itertools

    cells = [(x, y) for y in (-1, 0, 1) for x in (-1, 0, 1)]
    total = 0.0
    for pattern in itertools.product((0, 1), repeat=9):
        occ = {s for s, bit in zip(cells, pattern) if bit}
        if (0, 0) not in occ:
            continue
        seen = {(0, 0)}
        stack = [(0, 0)]
        reached = False
        while stack:
            x, y = stack.pop()
            if max(abs(x), abs(y)) == 1:
                reached = True
                break
            for nb in ((x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1)):
                if nb in occ and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if reached:
            total += c ** len(occ) * (1 - c) ** (9 - len(occ))
    return total


def test_exact_reach_probability_small_window():
    for c in (0.3, 0.5, 0.7):
        assert exact_origin_reach_probability(1, c) == pytest.approx(brute_reach_probability(c), abs=1e-14)


def test_exact_reach_probability_infeasible_window():
    with pytest.raises(CapExceeded):
        exact_origin_reach_probability(2, 0.5)


def test_monte_carlo_matches_exact_small_window():
    c = 0.5
    exact = exact_origin_reach_probability(1, c)
    est = estimate_origin_reach(1, c, 20_000, 6)
    assert abs(est.value - exact) <= 4 * est.std_error

import math

import pytest

from peierls import (
    EMPTY_CLUSTER,
    ESCAPES_WINDOW,
    Cluster,
    ContourError,
    EmptyClusterError,
    SiteOutsideWindow,
    Window,
    cluster_at,
    cluster_event_probability,
    event_exponents,
    outer_boundary,
    sample_field,
    site_boundary,
    winding_number,
)


def make_cluster(sites):
    s = frozenset(sites)
    return Cluster(s, site_boundary(s), next(iter(s)))


def cyclic_equal(a, b):
    if len(a) != len(b):
        return False
    doubled = list(a) + list(a)
    return any(doubled[i:i + len(b)] == list(b) for i in range(len(a)))


# ---------------------------------------------------------------------------
# cluster_at
# ---------------------------------------------------------------------------


def test_isolated_origin_cluster():
    # seed 0 leaves the origin occupied at c = 0.5 with all 4 neighbours vacant
    f = sample_field(Window(3), 0)
    cl = cluster_at(f, 0.5, (0, 0))
    assert isinstance(cl, Cluster)
    assert cl.sites == {(0, 0)}
    assert cl.boundary == {(1, 0), (0, 1), (-1, 0), (0, -1)}


def test_vacant_origin_is_empty_sentinel():
    f = sample_field(Window(3), 0)
    assert cluster_at(f, 0.0, (0, 0)) is EMPTY_CLUSTER
    assert EMPTY_CLUSTER is not ESCAPES_WINDOW


def test_full_window_escapes():
    f = sample_field(Window(3), 0)
    assert cluster_at(f, 1.0, (0, 0)) is ESCAPES_WINDOW


def test_site_outside_window_raises():
    f = sample_field(Window(2), 0)
    with pytest.raises(SiteOutsideWindow):
        cluster_at(f, 0.5, (3, 3))


def test_cluster_independent_of_traversal_order():
    # reference: depth-first traversal instead of the library's breadth-first
    f = sample_field(Window(8), 17)
    c = 0.55
    for site in [(0, 0), (1, 2), (-3, -3)]:
        got = cluster_at(f, c, site)
        if got in (EMPTY_CLUSTER, ESCAPES_WINDOW):
            continue
        seen = {site}
        stack = [site]
        while stack:
            x, y = stack.pop()
            for nb in ((x - 1, y), (x, y - 1), (x + 1, y), (x, y + 1)):
                if nb not in seen and f.window.contains(nb) and f.is_occupied(nb, c):
                    seen.add(nb)
                    stack.append(nb)
        assert got.sites == seen


def test_domino_boundary_has_six_sites():
    cl = make_cluster({(0, 0), (1, 0)})
    assert len(cl.boundary) == 6
    assert cl.boundary == {(-1, 0), (0, 1), (0, -1), (2, 0), (1, 1), (1, -1)}


def test_boundary_at_least_four():
    from peierls import enumerate_origin_clusters

    for cl in enumerate_origin_clusters(5):
        assert len(cl.boundary) >= 4


# ---------------------------------------------------------------------------
# outer_boundary
# ---------------------------------------------------------------------------


def test_single_site_contour_is_diamond():
    ct = outer_boundary(make_cluster({(0, 0)}))
    assert ct.sites == {(1, 0), (0, 1), (-1, 0), (0, -1)}
    assert ct.length == 4
    assert cyclic_equal(ct.cycle, ((1, 0), (0, 1), (-1, 0), (0, -1)))
    assert winding_number(ct.cycle, (0, 0)) == 1


def test_domino_contour_is_whole_boundary():
    cl = make_cluster({(0, 0), (1, 0)})
    ct = outer_boundary(cl)
    assert ct.sites == cl.boundary
    assert ct.length == 6


def test_ring_cluster_contour_excludes_hole():
    ring = {(x, y) for x in range(3) for y in range(3)} - {(1, 1)}
    cl = make_cluster(ring)
    ct = outer_boundary(cl)
    assert (1, 1) in cl.boundary
    assert (1, 1) not in ct.sites
    assert ct.length == 12
    assert ct.sites < cl.boundary


def test_pocket_cluster_contour_excludes_shielded_site():
    # U shape opening north; (1, 1) faces only the pocket, (1, 2) is the mouth
    u = {(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (2, 2)}
    cl = make_cluster(u)
    ct = outer_boundary(cl)
    assert len(cl.boundary) == 13
    assert ct.length == 12
    assert cl.boundary - ct.sites == {(1, 1)}
    assert (1, 2) in ct.sites


def test_contour_cycles_are_simple_king_cycles():
    from peierls import enumerate_origin_clusters

    for cl in enumerate_origin_clusters(5):
        ct = outer_boundary(cl)
        cyc = ct.cycle
        assert len(cyc) == len(set(cyc)) == ct.length
        for i, (x, y) in enumerate(cyc):
            nx, ny = cyc[(i + 1) % len(cyc)]
            assert max(abs(nx - x), abs(ny - y)) == 1
        assert winding_number(cyc, (0, 0)) == 1
        assert ct.sites <= cl.boundary


def test_empty_cluster_raises():
    with pytest.raises(EmptyClusterError):
        outer_boundary(Cluster(frozenset(), frozenset(), (0, 0)))


def test_contour_json_shape():
    d = outer_boundary(make_cluster({(0, 0)})).to_json_dict()
    assert d["length"] == 4
    assert sorted(map(tuple, d["cycle"])) == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_winding_number_point_on_cycle_raises():
    ct = outer_boundary(make_cluster({(0, 0)}))
    with pytest.raises(ContourError):
        winding_number(ct.cycle, (1, 0))


# ---------------------------------------------------------------------------
# event probabilities
# ---------------------------------------------------------------------------


def test_event_probability_single_site():
    cl = make_cluster({(0, 0)})
    assert cluster_event_probability(cl, 0.5) == pytest.approx(1 / 32, rel=1e-15)
    assert event_exponents(cl) == (1, 4)


def test_event_probability_full_concentration():
    cl = make_cluster({(0, 0), (1, 0)})
    assert cluster_event_probability(cl, 1.0) == 0.0


def exhaustive_window_oracle(c):
    """Exact origin-event probabilities over the 4x4 grid [-1, 2]^2.

    Returns (vacant_prob, {cluster sites: prob}, total) summed over all 2**16
    occupancy configurations.
    """
    cells = [(x, y) for y in range(-1, 3) for x in range(-1, 3)]
    index = {s: i for i, s in enumerate(cells)}
    vacant = 0.0
    by_cluster = {}
    total = 0.0
    for mask in range(1 << 16):
        occupied = mask.bit_count()
        weight = c**occupied * (1 - c) ** (16 - occupied)
        total += weight
        if not (mask >> index[(0, 0)]) & 1:
            vacant += weight
            continue
        seen = {(0, 0)}
        stack = [(0, 0)]
        while stack:
            x, y = stack.pop()
            for nb in ((x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1)):
                if nb in index and nb not in seen and (mask >> index[nb]) & 1:
                    seen.add(nb)
                    stack.append(nb)
        key = frozenset(seen)
        by_cluster[key] = by_cluster.get(key, 0.0) + weight
    return vacant, by_cluster, total


def test_event_probabilities_against_exhaustive_enumeration():
    c = 0.2
    vacant, by_cluster, total = exhaustive_window_oracle(c)
    assert total == pytest.approx(1.0, abs=1e-12)
    assert vacant == pytest.approx(1 - c, abs=1e-12)
    # every cluster of size <= 3 fitting inside [0, 1]^2 keeps its whole
    # boundary inside the grid, so the formula applies without truncation
    candidates = [
        {(0, 0)},
        {(0, 0), (1, 0)},
        {(0, 0), (0, 1)},
        {(0, 0), (1, 0), (0, 1)},
        {(0, 0), (1, 0), (1, 1)},
        {(0, 0), (0, 1), (1, 1)},
    ]
    for sites in candidates:
        cl = make_cluster(sites)
        assert by_cluster[frozenset(sites)] == pytest.approx(
            cluster_event_probability(cl, c), abs=1e-12
        )

"""Exact census of outer contours around the origin, and walk bounds.

The census counts, for each length k, the distinct outer contours of finite
occupied clusters containing the origin.  It enumerates free-anchored cluster
shapes once each (Redelmeier's algorithm), extracts every shape's outer
contour with bit-parallel flood fills, and then accounts for the translates
that place the origin inside the cluster; translates of one shape share one
contour shape, so the per-translate work is a set union instead of a fresh
traversal.  Distinct positions of the origin give distinct contours, exactly
as distinct clusters at different positions are distinct events.

Completeness of a size-capped enumeration rests on two facts.  A cluster
always lies strictly inside its own contour, and a closed king-move cycle
through k sites encloses at most ``(k*k - 4*k + 8) // 8`` lattice sites (the
diagonal square is extremal; Pick's theorem turns the area bound into a site
bound).  A cap at that capacity therefore sees every realizable contour of
length <= k.  The census additionally verifies that the counts have
stabilized over the last three cap values.

The module also bounds the census analytically: a contour of length k hits
the positive horizontal axis at some nearest site, continues with one of a
handful of first steps, and each later step has at most 5 continuations
(never turning by more than 90 degrees), giving the closed-form bound
4 * 5**(k-2) * (k-1).  The refined count enumerates those restricted walks
exactly, discarding self-intersections, which lowers the effective growth
rate below 5.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

from .clusters import (
    Cluster,
    Contour,
    _ccw_cycle,
    _exterior_of,
    _filled_silhouette,
    site_boundary,
    winding_number,
)
from .errors import CapExceeded, ContourError, IncompletenessError, NoRayIntersection
from .lattice import NEIGHBOR_OFFSETS_8, Site

__all__ = [
    "ClassKey",
    "CountTable",
    "SelfAvoidingCounts",
    "class_decomposition",
    "contour_event_table",
    "enumerate_origin_clusters",
    "exact_contour_counts",
    "full_count_table",
    "interior_capacity",
    "self_avoiding_circuit_count",
    "walk_bound",
]

#: Offsets a counter-clockwise contour can take after its nearest ray site:
#: E, NE, N, NW, plus the east dip SE.  The dip occurs when the nearest ray
#: site is a pocket mouth and the contour touches the axis from below (both
#: cycle neighbours have y = -1); it is classified together with the straight
#: east step, keeping four classes per ray distance.
FIRST_STEP_OFFSETS: tuple[Site, ...] = ((1, 0), (1, 1), (0, 1), (-1, 1), (1, -1))
_FIRST_STEP_INDEX = {(1, 0): 1, (1, 1): 2, (0, 1): 3, (-1, 1): 4, (1, -1): 1}


def walk_bound(k: int) -> int:
    """Closed-form contour-count bound 4 * 5**(k-2) * (k-1), exact integer."""
    if k < 2:
        raise ValueError(f"walk bound defined for k >= 2, got {k}")
    return 4 * 5 ** (k - 2) * (k - 1)


def interior_capacity(k: int) -> int:
    """Largest cluster size compatible with a contour of length k.

    A closed king cycle through k sites encloses at most k*k/8 area, hence at
    most ``(k*k - 4*k + 8) // 8`` interior lattice sites, and every realizing
    cluster lies inside its contour.
    """
    if k < 4:
        raise ValueError(f"contours have length >= 4, got {k}")
    return (k * k - 4 * k + 8) // 8


# ---------------------------------------------------------------------------
# Fixed-shape enumeration (Redelmeier).
#
# Cells are encoded as (y << 6) | (x + 32).  Admissible cells satisfy y > 0
# or (y == 0 and x >= 0), i.e. encoded >= _ORIGIN, which anchors every shape
# at its lexicographically smallest cell in (y, x) order.
# ---------------------------------------------------------------------------

_ORIGIN = 32
_STEPS = (1, -1, 64, -64)


def _decode(cell: int) -> Site:
    return (cell & 63) - 32, cell >> 6


def _iter_shapes(max_size: int) -> Iterator[list[int]]:
    """Every free-anchored 4-connected shape of size <= max_size, once each.

    Yields the internal mutable cell list; callers must consume it before
    advancing the iterator.
    """
    if max_size > 30:
        raise CapExceeded(f"shape size {max_size} exceeds the coordinate encoding range")
    shape: list[int] = []
    seen = {_ORIGIN}

    def rec(untried: list[int]) -> Iterator[list[int]]:
        while untried:
            c = untried.pop()
            shape.append(c)
            yield shape
            if len(shape) < max_size:
                new = []
                for d in _STEPS:
                    nb = c + d
                    if nb >= _ORIGIN and nb not in seen:
                        seen.add(nb)
                        new.append(nb)
                yield from rec(untried + new)
                for nb in new:
                    seen.discard(nb)
            shape.pop()

    yield from rec([_ORIGIN])


def enumerate_origin_clusters(max_cluster_size: int, *, limit: int = 20_000_000) -> Iterator[Cluster]:
    """All finite 4-connected clusters containing the origin, each exactly once.

    Shapes are enumerated once in a canonical frame; each of the |W| cells of
    a shape then serves as the origin of one translate.  No symmetry
    deduplication is performed, since clusters at distinct positions are
    distinct events.  Raises :class:`CapExceeded` if more than ``limit``
    clusters would be produced.
    """
    if max_cluster_size < 1:
        raise ValueError("max_cluster_size must be >= 1")
    produced = 0
    for shape in _iter_shapes(max_cluster_size):
        cells = [_decode(e) for e in shape]
        sites = frozenset(cells)
        bnd = site_boundary(sites)
        for cx, cy in cells:
            produced += 1
            if produced > limit:
                raise CapExceeded(f"more than {limit} origin clusters at size cap {max_cluster_size}")
            yield Cluster(
                sites=frozenset((x - cx, y - cy) for x, y in sites),
                boundary=frozenset((x - cx, y - cy) for x, y in bnd),
                origin=(0, 0),
            )


# ---------------------------------------------------------------------------
# Bit-parallel contour extraction.
#
# A shape is embedded in a small frame (padded by 2) as a bitboard; the site
# boundary, the exterior flood fill, and the exposed contour are then a few
# big-integer operations each.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _frame(w: int, h: int):
    universe = (1 << (w * h)) - 1
    left = 0
    for r in range(h):
        left |= 1 << (r * w)
    right = left << (w - 1)
    row0 = (1 << w) - 1
    rowtop = row0 << ((h - 1) * w)
    return (universe, universe ^ left, universe ^ right, left | right | row0 | rowtop, w)


def _nb4(bits: int, frame) -> int:
    universe, not_left, not_right, _, w = frame
    return (((bits & not_right) << 1) | ((bits & not_left) >> 1) | (bits << w) | (bits >> w)) & universe


def _shape_contour_bits(shape: list[int]):
    """Bitboards (wbits, boundary, gamma, interior, frame, xmin) for one shape."""
    xmin = xmax = shape[0] & 63
    ymax = 0
    for e in shape:
        cx = e & 63
        if cx < xmin:
            xmin = cx
        elif cx > xmax:
            xmax = cx
        cy = e >> 6
        if cy > ymax:
            ymax = cy
    w = xmax - xmin + 5
    h = ymax + 5
    frame = _frame(w, h)
    wbits = 0
    for e in shape:
        wbits |= 1 << (((e >> 6) + 2) * w + (e & 63) - xmin + 2)
    bnd = _nb4(wbits, frame) & ~wbits
    region = wbits | bnd
    free = frame[0] & ~region
    ext = frame[3] & free
    while True:
        grown = (ext | _nb4(ext, frame)) & free
        if grown == ext:
            break
        ext = grown
    gamma = bnd & _nb4(ext, frame)
    interior = frame[0] & ~ext & ~gamma
    return wbits, bnd, gamma, interior, w, xmin


def _bits_to_sites(bits: int, w: int) -> list[tuple[int, int]]:
    out = []
    while bits:
        low = bits & -bits
        idx = low.bit_length() - 1
        out.append((idx % w, idx // w))
        bits ^= low
    return out


_CANON_STRIDE = 32


def _canonical_contour(gamma: int, w: int):
    """Translate a contour bitboard so its bounding box starts at (0, 0).

    Returns ``(key, ox, oy)`` where key is the contour re-encoded with stride
    32 and (ox, oy) is the frame offset of the bounding-box corner.
    """
    cells = _bits_to_sites(gamma, w)
    ox = min(c[0] for c in cells)
    oy = min(c[1] for c in cells)
    key = 0
    for x, y in cells:
        key |= 1 << ((y - oy) * _CANON_STRIDE + (x - ox))
    return key, ox, oy


# ---------------------------------------------------------------------------
# Count table and class decomposition.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassKey:
    """Class labels of a contour around the origin.

    ``ray_distance`` is the distance from the origin to the nearest contour
    site on the positive horizontal axis; ``first_step`` in 1..4 indexes the
    family of the site that follows it in the counter-clockwise cycle
    (east-going, north-east, north, north-west).
    """

    ray_distance: int
    first_step: int


@dataclass
class CountTable:
    """Per-length contour counts with the analytic and refined walk bounds."""

    k_max: int
    exact: dict[int, int]
    sa_walk: dict[int, int]
    sa_sets: dict[int, int]
    walk_bound: dict[int, int]
    classes: dict[tuple[int, int, int], int]
    witnesses: dict[int, Contour] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)


def class_decomposition(contour: Contour) -> ClassKey:
    """Assign a contour around the origin to its (ray distance, first step) class.

    Finds the nearest intersection of the contour with the ray of sites
    (j, 0), j >= 1, then maps the successor of that site in the
    counter-clockwise cycle onto the fixed first-step set.  The two
    east-going steps (straight east, and the east dip through (l+1, -1)
    at a pocket mouth) share class 1, so ``first_step`` is always in 1..4
    and the classes partition the census.
    """
    hits = [x for (x, y) in contour.sites if y == 0 and x >= 1]
    if not hits:
        raise NoRayIntersection("contour never meets the positive horizontal ray")
    l = min(hits)
    anchor = (l, 0)
    idx = contour.cycle.index(anchor)
    sx, sy = contour.cycle[(idx + 1) % len(contour.cycle)]
    step = (sx - l, sy)
    i = _FIRST_STEP_INDEX.get(step)
    if i is None:
        raise ContourError(f"successor offset {step} of ray site {anchor} is not an admissible first step")
    return ClassKey(ray_distance=l, first_step=i)


def _rebuild_cycle(sites: list[Site]) -> tuple[Site, ...]:
    gamma = frozenset(sites)
    ext = _exterior_of(gamma)
    filled = _filled_silhouette(gamma, ext)
    return _ccw_cycle(filled, set(gamma))


def exact_contour_counts(
    k_max: int,
    *,
    cluster_cap: int | None = None,
    shape_limit: int = 50_000_000,
    progress: Callable[[int], None] | None = None,
) -> CountTable:
    """Exact number of distinct origin-enclosing contours for each length <= k_max.

    Parameters
    ----------
    k_max : largest contour length to count (>= 4).
    cluster_cap : optional override of the cluster-size cap.  The default is
        ``interior_capacity(k_max)``, which provably sees every contour.  A
        smaller cap is accepted only if the counts are verified stable over
        the top three sizes; otherwise :class:`IncompletenessError` is raised.
    shape_limit : safety limit on the number of enumerated shapes.

    Returns a :class:`CountTable` with the ``exact`` counts, the per-class
    breakdown, and the analytic ``walk_bound`` column filled in.
    """
    if k_max < 4:
        raise ValueError("k_max must be >= 4")
    needed = interior_capacity(k_max)
    cap = needed if cluster_cap is None else cluster_cap
    if cap < 1:
        raise ValueError("cluster cap must be >= 1")
    guaranteed = cap >= needed

    lengths: dict[int, int] = {}
    covers: dict[int, dict[int, int]] = {}
    shapes_seen = 0

    for shape in _iter_shapes(cap):
        shapes_seen += 1
        if shapes_seen > shape_limit:
            raise CapExceeded(f"shape enumeration exceeded the limit of {shape_limit}")
        if progress is not None and shapes_seen % 200_000 == 0:
            progress(shapes_seen)
        wbits, _, gamma, interior, w, xmin = _shape_contour_bits(shape)
        glen = gamma.bit_count()
        if glen > k_max:
            continue
        if glen < 4:
            raise ContourError(f"shape produced a contour of impossible length {glen}")
        if interior.bit_count() > interior_capacity(glen):
            raise IncompletenessError(
                "a contour encloses more sites than the capacity bound allows; "
                "the completeness cap is unsound for this input"
            )
        key, ox, oy = _canonical_contour(gamma, w)
        prev = lengths.get(key)
        if prev is None:
            lengths[key] = glen
        # origin positions in the canonical frame: shape cells shifted like gamma
        n = len(shape)
        pos = 0
        for e in shape:
            cx = (e & 63) - xmin + 2 - ox
            cy = (e >> 6) + 2 - oy
            pos |= 1 << (cy * _CANON_STRIDE + cx)
        by_size = covers.get(key)
        if by_size is None:
            covers[key] = {n: pos}
        else:
            by_size[n] = by_size.get(n, 0) | pos

    # Accumulate per-size trajectories: counts as a function of the size cap.
    trajectory: dict[int, dict[int, int]] = {s: {} for s in range(1, cap + 1)}
    final_cover: dict[int, int] = {}
    for key, by_size in covers.items():
        k = lengths[key]
        acc = 0
        for s in range(1, cap + 1):
            b = by_size.get(s)
            if b:
                acc |= b
            cnt = acc.bit_count()
            if cnt:
                traj_s = trajectory[s]
                traj_s[k] = traj_s.get(k, 0) + cnt
        final_cover[key] = acc

    exact = {k: trajectory[cap].get(k, 0) for k in range(4, k_max + 1)}
    stabilized = cap >= 3 and all(
        trajectory[cap].get(k, 0) == trajectory[cap - 1].get(k, 0) == trajectory[cap - 2].get(k, 0)
        for k in range(4, k_max + 1)
    )
    if not (guaranteed or stabilized):
        raise IncompletenessError(
            f"cluster cap {cap} is below the guaranteed capacity {needed} for k_max={k_max} "
            f"and the counts did not stabilize over sizes {cap - 2}..{cap}"
        )

    # Class decomposition of every positioned contour.
    classes: dict[tuple[int, int, int], int] = {}
    witnesses: dict[int, Contour] = {}
    for key in sorted(covers):
        k = lengths[key]
        canon = _bits_to_sites(key, _CANON_STRIDE)
        cycle = _rebuild_cycle(canon)
        index_of = {site: j for j, site in enumerate(cycle)}
        canon_set = set(canon)
        if final_cover[key] & key:
            raise ContourError("a cluster cell coincides with its own contour")
        if k not in witnesses:
            wx, wy = _bits_to_sites(final_cover[key], _CANON_STRIDE)[0]
            witnesses[k] = Contour(
                sites=frozenset((x - wx, y - wy) for x, y in canon),
                cycle=tuple((x - wx, y - wy) for x, y in cycle),
            )
        for ox, oy in _bits_to_sites(final_cover[key], _CANON_STRIDE):
            if winding_number(cycle, (ox, oy)) != 1:
                raise ContourError("an origin position is not enclosed by its contour")
            best = None
            for x, y in canon_set:
                if y == oy and x > ox and (best is None or x < best):
                    best = x
            if best is None:
                raise NoRayIntersection("positioned contour misses the positive ray")
            l = best - ox
            sx, sy = cycle[(index_of[(best, oy)] + 1) % k]
            step = (sx - best, sy - oy)
            i = _FIRST_STEP_INDEX.get(step)
            if i is None:
                raise ContourError(f"inadmissible first step {step} in class decomposition")
            ck = (k, l, i)
            classes[ck] = classes.get(ck, 0) + 1

    meta = {
        "cluster_cap": cap,
        "capacity_needed": needed,
        "guaranteed": guaranteed,
        "stabilized": stabilized,
        "shapes": shapes_seen,
        "distinct_contour_shapes": len(covers),
        "trajectory": {s: dict(sorted(d.items())) for s, d in trajectory.items()},
    }
    return CountTable(
        k_max=k_max,
        exact=exact,
        sa_walk={},
        sa_sets={},
        walk_bound={k: walk_bound(k) for k in range(4, k_max + 1)},
        classes=classes,
        witnesses=witnesses,
        meta=meta,
    )


def contour_event_table(max_len: int, *, cluster_cap: int | None = None) -> dict[tuple[int, int], int]:
    """Multiplicities of (|W|, |boundary|) over origin clusters with contour length <= max_len.

    Every cluster whose contour is that short has size at most
    ``interior_capacity(max_len)``, so the table is a complete, exact census
    of the events feeding the truncated polynomial.
    """
    if max_len < 4:
        raise ValueError("max_len must be >= 4")
    needed = interior_capacity(max_len)
    cap = needed if cluster_cap is None else cluster_cap
    if cap < needed:
        raise IncompletenessError(f"cap {cap} cannot cover clusters up to size {needed}")
    if cap > 15:
        raise CapExceeded(
            f"contours of length {max_len} require clusters up to size {cap}; "
            "beyond the feasible enumeration range"
        )
    events: dict[tuple[int, int], int] = {}
    for shape in _iter_shapes(cap):
        wbits, bnd, gamma, _, _, _ = _shape_contour_bits(shape)
        glen = gamma.bit_count()
        if glen > max_len:
            continue
        pair = (len(shape), bnd.bit_count())
        events[pair] = events.get(pair, 0) + len(shape)
    return events


# ---------------------------------------------------------------------------
# Self-avoiding restricted circuits.
# ---------------------------------------------------------------------------


@dataclass
class SelfAvoidingCounts:
    """Counts of restricted self-avoiding circuits enclosing the origin."""

    k_max: int
    rule: str
    walks: dict[int, int]
    distinct_sets: dict[int, int]
    nodes: int


@lru_cache(maxsize=None)
def _allowed_dirs(rule: str) -> tuple[tuple[int, ...], ...]:
    if rule == "five":
        return tuple(tuple((d + t) % 8 for t in (-2, -1, 0, 1, 2)) for d in range(8))
    if rule == "seven":
        return tuple(tuple(d2 for d2 in range(8) if d2 != (d + 4) % 8) for d in range(8))
    raise ValueError(f"unknown continuation rule {rule!r}; expected 'five' or 'seven'")


def _winding_nonzero(path: list[Site]) -> bool:
    wn = 0
    n = len(path)
    for idx in range(n):
        x0, y0 = path[idx]
        x1, y1 = path[(idx + 1) % n]
        if y0 <= 0:
            if y1 > 0 and x0 * y1 - x1 * y0 > 0:
                wn += 1
        elif y1 <= 0 and x0 * y1 - x1 * y0 < 0:
            wn -= 1
    return wn != 0


def self_avoiding_circuit_count(
    k_max: int,
    *,
    rule: str = "five",
    max_nodes: int = 200_000_000,
) -> SelfAvoidingCounts:
    """Count restricted self-avoiding circuits that enclose the origin.

    A circuit of length k starts at a site (l, 0), takes one of the
    admissible first steps (east, north-east, north, north-west, or the east
    dip to (l+1, -1)), continues with at most 5 king-move options per step
    under the ``five`` rule (turns of more than 90 degrees are excluded;
    ``seven`` relaxes this to everything except reversal), never revisits a
    site, avoids ray sites nearer the origin than its start, closes after k
    steps, and must wind around the origin.  Walks are counted individually
    and after deduplication by site set.
    """
    if k_max < 4:
        raise ValueError("k_max must be >= 4")
    allowed = _allowed_dirs(rule)
    offsets = NEIGHBOR_OFFSETS_8
    walks = {k: 0 for k in range(4, k_max + 1)}
    distinct: dict[int, set[int]] = {k: set() for k in range(4, k_max + 1)}
    nodes = 0

    def set_key(path: list[Site]) -> int:
        bits = 0
        for x, y in path:
            bits |= 1 << ((y + 32) * 64 + (x + 32))
        return bits

    for l in range(1, (k_max - 2) // 2 + 1):
        start = (l, 0)
        forbidden = {(j, 0) for j in range(l)}
        for first_dir in (0, 1, 2, 3, 7):
            dx, dy = offsets[first_dir]
            x1 = (l + dx, dy)
            path = [start, x1]
            visited = {start, x1}

            def extend(pos: Site, d: int, depth: int) -> None:
                nonlocal nodes
                px, py = pos
                if depth >= 4 and max(abs(px - l), abs(py)) == 1:
                    if _winding_nonzero(path):
                        walks[depth] += 1
                        distinct[depth].add(set_key(path))
                if depth == k_max:
                    return
                budget = k_max - depth
                for nd in allowed[d]:
                    ox, oy = offsets[nd]
                    nxt = (px + ox, py + oy)
                    if nxt in visited or nxt in forbidden:
                        continue
                    if max(abs(nxt[0] - l), abs(nxt[1])) > budget:
                        continue
                    nodes += 1
                    if nodes > max_nodes:
                        raise CapExceeded(f"circuit search exceeded {max_nodes} nodes; raise max_nodes")
                    visited.add(nxt)
                    path.append(nxt)
                    extend(nxt, nd, depth + 1)
                    path.pop()
                    visited.discard(nxt)

            extend(x1, first_dir, 2)

    return SelfAvoidingCounts(
        k_max=k_max,
        rule=rule,
        walks=walks,
        distinct_sets={k: len(s) for k, s in distinct.items()},
        nodes=nodes,
    )


def full_count_table(
    k_max: int,
    *,
    rule: str = "five",
    cluster_cap: int | None = None,
    max_nodes: int = 200_000_000,
    shape_limit: int = 50_000_000,
) -> CountTable:
    """Exact counts, restricted-circuit counts, and the analytic bound, merged."""
    table = exact_contour_counts(k_max, cluster_cap=cluster_cap, shape_limit=shape_limit)
    sa = self_avoiding_circuit_count(k_max, rule=rule, max_nodes=max_nodes)
    table.sa_walk = sa.walks
    table.sa_sets = sa.distinct_sets
    table.meta["rule"] = rule
    table.meta["sa_nodes"] = sa.nodes
    return table


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------


def count_table_csv(table: CountTable) -> str:
    lines = ["k,exact,sa_walk,walk_bound"]
    for k in range(4, table.k_max + 1):
        sa = table.sa_walk.get(k, "")
        lines.append(f"{k},{table.exact.get(k, '')},{sa},{table.walk_bound[k]}")
    return "\n".join(lines) + "\n"


def class_counts_csv(table: CountTable) -> str:
    lines = ["k,l,i,count"]
    for (k, l, i) in sorted(table.classes):
        lines.append(f"{k},{l},{i},{table.classes[(k, l, i)]}")
    return "\n".join(lines) + "\n"


def count_table_json_dict(table: CountTable) -> dict:
    meta = {k: v for k, v in table.meta.items() if k != "trajectory"}
    return {
        "meta": meta,
        "counts": [
            {
                "k": k,
                "exact": table.exact.get(k),
                "sa_walk": table.sa_walk.get(k),
                "sa_distinct": table.sa_sets.get(k),
                "walk_bound": table.walk_bound[k],
            }
            for k in range(4, table.k_max + 1)
        ],
        "classes": [
            {"k": k, "l": l, "i": i, "count": table.classes[(k, l, i)]}
            for (k, l, i) in sorted(table.classes)
        ],
        "witnesses": [
            {"k": k, **table.witnesses[k].to_json_dict()} for k in sorted(table.witnesses)
        ],
    }

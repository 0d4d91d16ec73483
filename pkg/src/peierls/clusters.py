"""Occupied clusters, their vacant boundaries, and outer contours.

A cluster is a maximal 4-connected set W of occupied sites.  Its site
boundary is the set of vacant sites with an axis neighbour in W.  The outer
contour keeps only the boundary sites that can be reached from infinity by an
axis path whose other sites avoid both the cluster and its boundary; these
sites always form a closed king-move cycle around the cluster, which this
module constructs explicitly with counter-clockwise orientation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import ContourError, EmptyClusterError, SiteOutsideWindow
from .lattice import CoupledField, Site, neighbors4

__all__ = [
    "Cluster",
    "Contour",
    "EMPTY_CLUSTER",
    "ESCAPES_WINDOW",
    "cluster_at",
    "cluster_event_probability",
    "event_exponents",
    "outer_boundary",
    "site_boundary",
    "winding_number",
]


class _Sentinel:
    __slots__ = ("_name",)

    def __init__(self, name: str) -> None:
        self._name = name

    def __repr__(self) -> str:
        return self._name


#: Returned by :func:`cluster_at` when the queried site is vacant.
EMPTY_CLUSTER = _Sentinel("EMPTY_CLUSTER")

#: Returned by :func:`cluster_at` when the cluster reaches the window border,
#: the finite stand-in for an unbounded cluster.
ESCAPES_WINDOW = _Sentinel("ESCAPES_WINDOW")


@dataclass(frozen=True)
class Cluster:
    """A finite 4-connected occupied set with its vacant site boundary."""

    sites: frozenset[Site]
    boundary: frozenset[Site]
    origin: Site


@dataclass(frozen=True)
class Contour:
    """Outer boundary of a finite cluster.

    ``cycle`` is a closed king-move path through every contour site exactly
    once, oriented counter-clockwise and starting at the lexicographically
    smallest site.  ``sites`` is the same data as a set.
    """

    sites: frozenset[Site]
    cycle: tuple[Site, ...]

    @property
    def length(self) -> int:
        return len(self.sites)

    def translate(self, dx: int, dy: int) -> "Contour":
        return Contour(
            sites=frozenset((x + dx, y + dy) for x, y in self.sites),
            cycle=tuple((x + dx, y + dy) for x, y in self.cycle),
        )

    def to_json_dict(self) -> dict:
        return {"length": self.length, "cycle": [[x, y] for x, y in self.cycle]}


def site_boundary(sites: frozenset[Site]) -> frozenset[Site]:
    """Vacant axis neighbours of a site set."""
    out = set()
    for s in sites:
        for nb in neighbors4(s):
            if nb not in sites:
                out.add(nb)
    return frozenset(out)


def cluster_at(field: CoupledField, c: float, site: Site):
    """Cluster of the occupied site, or a sentinel.

    Returns ``EMPTY_CLUSTER`` if ``site`` is vacant at concentration ``c`` and
    ``ESCAPES_WINDOW`` as soon as the growing cluster touches the window
    border (the cluster may then continue outside the window, so it cannot be
    reported as finite).  Otherwise returns the full :class:`Cluster`.  The
    resulting set does not depend on traversal order.
    """
    if not field.window.contains(site):
        raise SiteOutsideWindow(f"site {site} outside window of radius {field.window.radius}")
    if not field.is_occupied(site, c):
        return EMPTY_CLUSTER

    window = field.window
    seen = {site}
    queue = deque([site])
    while queue:
        cur = queue.popleft()
        if window.on_border(cur):
            return ESCAPES_WINDOW
        for nb in neighbors4(cur):
            if nb in seen or not window.contains(nb):
                continue
            if field.is_occupied(nb, c):
                seen.add(nb)
                queue.append(nb)
    sites = frozenset(seen)
    return Cluster(sites=sites, boundary=site_boundary(sites), origin=site)


def _exterior_of(region: frozenset[Site]) -> set[Site]:
    """Free sites of the bounding box (padded by 2) reachable from its border.

    Axis flood fill over the complement of ``region``; because axis steps
    cannot cross between diagonally adjacent region sites, the result is
    exactly the unbounded complement component, clipped to the box.
    """
    xs = [x for x, _ in region]
    ys = [y for _, y in region]
    x0, x1 = min(xs) - 2, max(xs) + 2
    y0, y1 = min(ys) - 2, max(ys) + 2
    start = (x0, y0)
    ext = {start}
    stack = [start]
    while stack:
        x, y = stack.pop()
        for nb in ((x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1)):
            nx, ny = nb
            if x0 <= nx <= x1 and y0 <= ny <= y1 and nb not in ext and nb not in region:
                ext.add(nb)
                stack.append(nb)
    return ext


def _filled_silhouette(region: frozenset[Site], exterior: set[Site]) -> set[Site]:
    xs = [x for x, _ in region]
    ys = [y for _, y in region]
    filled = set()
    for y in range(min(ys) - 2, max(ys) + 3):
        for x in range(min(xs) - 2, max(xs) + 3):
            if (x, y) not in exterior:
                filled.add((x, y))
    return filled


def _ccw_cycle(filled: set[Site], contour: set[Site]) -> tuple[Site, ...]:
    """Order the contour sites into a counter-clockwise king-move cycle.

    Walks the unit edges separating ``filled`` from its exterior with the
    region kept on the left, then reads off the cell each edge borders.  Cell
    (x, y) is treated as the unit square with corners (x, y)..(x+1, y+1).
    """
    edges: dict[tuple[int, int], tuple[tuple[int, int], Site]] = {}

    def add(start, end, cell):
        if start in edges:
            raise ContourError(f"pinched outer boundary at corner {start}")
        edges[start] = (end, cell)

    for cell in filled:
        x, y = cell
        if (x, y - 1) not in filled:
            add((x, y), (x + 1, y), cell)
        if (x + 1, y) not in filled:
            add((x + 1, y), (x + 1, y + 1), cell)
        if (x, y + 1) not in filled:
            add((x + 1, y + 1), (x, y + 1), cell)
        if (x - 1, y) not in filled:
            add((x, y + 1), (x, y), cell)

    start = min(edges)
    cells: list[Site] = []
    corner = start
    for _ in range(len(edges) + 1):
        nxt, cell = edges.pop(corner)
        if not cells or cells[-1] != cell:
            cells.append(cell)
        corner = nxt
        if corner == start:
            break
    if edges:
        raise ContourError("outer boundary is not a single closed curve")
    while len(cells) > 1 and cells[-1] == cells[0]:
        cells.pop()

    if set(cells) != contour:
        raise ContourError("perimeter walk does not match the exposed boundary set")
    if len(cells) != len(contour):
        raise ContourError("outer boundary revisits a site; no simple cycle exists")

    area2 = 0
    for i, (x, y) in enumerate(cells):
        nx, ny = cells[(i + 1) % len(cells)]
        area2 += x * ny - nx * y
    if area2 <= 0:
        raise ContourError("perimeter walk came out clockwise")

    k = cells.index(min(cells))
    return tuple(cells[k:] + cells[:k])


def outer_boundary(cluster: Cluster) -> Contour:
    """Outer contour of a finite nonempty cluster.

    Flood-fills the exterior of sites-plus-boundary inside a bounding box
    padded by 2, keeps the boundary sites with an axis neighbour in the
    unbounded exterior component (discarding sites that face only enclosed
    holes), and orders them into a counter-clockwise king-move cycle.
    """
    if not cluster.sites:
        raise EmptyClusterError("cannot take the outer boundary of an empty cluster")
    region = frozenset(cluster.sites | cluster.boundary)
    ext = _exterior_of(region)
    gamma = {
        u for u in cluster.boundary
        if any(nb in ext for nb in neighbors4(u))
    }
    filled = _filled_silhouette(region, ext)
    cycle = _ccw_cycle(filled, gamma)
    return Contour(sites=frozenset(gamma), cycle=cycle)


def winding_number(cycle: tuple[Site, ...], point: Site = (0, 0)) -> int:
    """Integer winding number of a closed lattice cycle around ``point``.

    Exact integer arithmetic; ``point`` must not lie on the cycle.  For the
    unit and diagonal steps used here a segment can only pass through a
    lattice point at its endpoints, so vertex avoidance is sufficient.
    """
    px, py = point
    if point in cycle:
        raise ContourError(f"winding number undefined: {point} lies on the cycle")
    wn = 0
    n = len(cycle)
    for i in range(n):
        x0, y0 = cycle[i]
        x1, y1 = cycle[(i + 1) % n]
        if y0 <= py:
            if y1 > py and (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0) > 0:
                wn += 1
        elif y1 <= py and (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0) < 0:
            wn -= 1
    return wn


def event_exponents(cluster: Cluster) -> tuple[int, int]:
    """The pair (|sites|, |boundary|) for exact-arithmetic callers."""
    return len(cluster.sites), len(cluster.boundary)


def cluster_event_probability(cluster: Cluster, c: float) -> float:
    """Probability that the cluster of its origin site is exactly this set.

    Every site of the cluster must be occupied and every boundary site
    vacant, so the probability is ``c**|W| * (1-c)**|boundary|``.
    """
    w, b = event_exponents(cluster)
    return float(c**w * (1.0 - c) ** b)

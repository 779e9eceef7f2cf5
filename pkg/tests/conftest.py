"""Shared fixtures and independent oracles used across the test suite.

The oracles here are deliberately written as naive, structure-free
reimplementations (pure-python double loops, union-find clustering) so
they stay independent of the library code paths they check.
"""

import math

import pytest

from hypaff.geometry import EPS_GEOM, Point, Segment


def brute_force_multiplicity(segments: list[Segment]) -> tuple[Point, int]:
    """O(n^2) arrangement-multiplicity oracle.

    All pairwise intersection points and endpoints are clustered by
    union-find at tolerance EPS_GEOM; for each cluster the number of
    distinct curve_ids whose segments pass within tolerance is counted.
    """
    pts: list[tuple[float, float]] = []
    for s in segments:
        pts.append((s.a.x, s.a.y))
        pts.append((s.b.x, s.b.y))
    n = len(segments)
    for i in range(n):
        for j in range(i + 1, n):
            p = _seg_intersection(segments[i], segments[j])
            if p is not None:
                pts.append(p)

    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]) <= EPS_GEOM:
                parent[find(i)] = find(j)

    reps = {}
    for i, p in enumerate(pts):
        r = find(i)
        if r not in reps or p < reps[r]:
            reps[r] = p

    best_pt, best_count = None, 0
    for p in reps.values():
        ids = set()
        for s in segments:
            if _point_on_segment(p, s):
                ids.add(s.curve_id)
        if len(ids) > best_count or (len(ids) == best_count and
                                     best_pt is not None and p < best_pt):
            best_pt, best_count = p, len(ids)
    return Point(*best_pt), best_count


def _point_on_segment(p, s: Segment) -> bool:
    ax, ay, bx, by = s.a.x, s.a.y, s.b.x, s.b.y
    px, py = p
    dx, dy = bx - ax, by - ay
    ll = dx * dx + dy * dy
    t = ((px - ax) * dx + (py - ay) * dy) / ll
    t = max(0.0, min(1.0, t))
    return math.hypot(ax + t * dx - px, ay + t * dy - py) <= EPS_GEOM


def _seg_intersection(s1: Segment, s2: Segment):
    """Proper or touching intersection point of two segments, or None.
    Collinear overlaps contribute their endpoint contacts only (the
    endpoints are already candidates)."""
    x1, y1, x2, y2 = s1.a.x, s1.a.y, s1.b.x, s1.b.y
    x3, y3, x4, y4 = s2.a.x, s2.a.y, s2.b.x, s2.b.y
    den = (x2 - x1) * (y4 - y3) - (y2 - y1) * (x4 - x3)
    if abs(den) < 1e-15:
        return None
    t = ((x3 - x1) * (y4 - y3) - (y3 - y1) * (x4 - x3)) / den
    u = ((x3 - x1) * (y2 - y1) - (y3 - y1) * (x2 - x1)) / den
    if -1e-9 <= t <= 1 + 1e-9 and -1e-9 <= u <= 1 + 1e-9:
        return (x1 + t * (x2 - x1), y1 + t * (y2 - y1))
    return None


@pytest.fixture(scope="session")
def belykh_half():
    from hypaff.map_core import preset_belykh

    return preset_belykh(0.5, 2.0, 0.0)


@pytest.fixture(scope="session")
def belykh_fat():
    from hypaff.map_core import preset_belykh

    return preset_belykh(0.55, 2.0, 0.0)


@pytest.fixture(scope="session")
def belykh_slanted():
    from hypaff.map_core import preset_belykh

    return preset_belykh(0.5, 1.5, 0.3)

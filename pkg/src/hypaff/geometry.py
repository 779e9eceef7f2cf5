"""Planar primitives with a fixed tolerance: points, segments, simple
polygons, diagonal affine images, polygon intersection and point
multiplicity in segment arrangements.

All coordinates are plain floats in domain units; ``EPS_GEOM`` is the
single tolerance used for point coincidence, degeneracy cutoffs and area
drops.  Polygon boolean operations are delegated to shapely (GEOS); every
contract here is still owned and checked by this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import shapely
import shapely.geometry as _sg

from .errors import DegeneracyError, ValidationError

#: Geometric tolerance in domain units (point coincidence, degeneracy,
#: area cutoffs).  Well below any feature size of the presets.
EPS_GEOM = 1e-9


@dataclass(frozen=True)
class Point:
    """A point of the domain.  Coordinates must be finite."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError(f"non-finite point ({self.x}, {self.y})")

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    def distance(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Segment:
    """A line segment with provenance: ``curve_id`` names the boundary
    curve this piece descends from."""

    a: Point
    b: Point
    curve_id: int = 0

    def __post_init__(self):
        if self.a.distance(self.b) <= EPS_GEOM:
            raise DegeneracyError(f"degenerate segment {self.a} -> {self.b}")

    @property
    def length(self) -> float:
        return self.a.distance(self.b)

    def slope_bounded_by(self, h: float) -> bool:
        """True when |dy/dx| < h.  Vertical segments fail for every h."""
        dx = abs(self.b.x - self.a.x)
        dy = abs(self.b.y - self.a.y)
        return dy < h * dx

    def distance_to(self, p: Point) -> float:
        ax, ay, bx, by = self.a.x, self.a.y, self.b.x, self.b.y
        dx, dy = bx - ax, by - ay
        t = ((p.x - ax) * dx + (p.y - ay) * dy) / (dx * dx + dy * dy)
        t = min(1.0, max(0.0, t))
        return math.hypot(ax + t * dx - p.x, ay + t * dy - p.y)

    def contains_point(self, p: Point, tol: float = EPS_GEOM) -> bool:
        """Point membership with endpoints included."""
        return self.distance_to(p) <= tol


@dataclass(frozen=True)
class Polygon:
    """A simple polygon, vertices counter-clockwise.

    Input vertices may be given in either orientation; clockwise rings are
    reversed.  Self-intersecting or near-degenerate rings are rejected.
    """

    vertices: tuple[Point, ...]
    piece_id: int = 0
    _shp: _sg.Polygon = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = list(self.vertices)
        if len(verts) >= 2 and verts[0].distance(verts[-1]) <= EPS_GEOM:
            verts = verts[:-1]
        if len(verts) < 3:
            raise ValidationError("polygon needs at least 3 distinct vertices")
        if _signed_area(verts) < 0:
            verts = verts[::-1]
        shp = _sg.Polygon([v.as_tuple() for v in verts])
        if not shp.is_valid:
            raise ValidationError(f"polygon is not simple: {shapely.is_valid_reason(shp)}")
        if shp.area <= EPS_GEOM**2:
            raise DegeneracyError(f"polygon area {shp.area:g} below tolerance")
        object.__setattr__(self, "vertices", tuple(verts))
        object.__setattr__(self, "_shp", shp)

    @property
    def area(self) -> float:
        return self._shp.area

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return self._shp.bounds

    def edges(self, curve_id: int = 0) -> list[Segment]:
        vs = self.vertices
        return [Segment(vs[i], vs[(i + 1) % len(vs)], curve_id) for i in range(len(vs))]

    def contains(self, p: Point, margin: float = 0.0) -> bool:
        """Interior membership; with ``margin`` > 0 the point must also be
        at least that far from the boundary."""
        pt = _sg.Point(p.x, p.y)
        if not self._shp.contains(pt):
            return False
        return margin <= 0.0 or self._shp.exterior.distance(pt) > margin

    def boundary_distance(self, p: Point) -> float:
        return self._shp.exterior.distance(_sg.Point(p.x, p.y))

    def canonical(self) -> "Polygon":
        """Rotate the vertex cycle so the lexicographically smallest vertex
        comes first.  Useful for order-insensitive comparisons."""
        vs = self.vertices
        k = min(range(len(vs)), key=lambda i: (vs[i].x, vs[i].y))
        return Polygon(vs[k:] + vs[:k], self.piece_id)

    def shapely(self) -> _sg.Polygon:
        return self._shp


def _signed_area(verts: list[Point]) -> float:
    s = 0.0
    for i, v in enumerate(verts):
        w = verts[(i + 1) % len(verts)]
        s += v.x * w.y - w.x * v.y
    return 0.5 * s


def from_shapely(shp: _sg.Polygon, piece_id: int = 0) -> Polygon:
    """Convert a shapely polygon (exterior ring only) to a Polygon."""
    coords = list(shp.exterior.coords)[:-1]
    return Polygon(tuple(Point(x, y) for x, y in coords), piece_id)


def affine_image(p: Polygon, lam: float, gam: float, u: float, v: float) -> Polygon:
    """Image of ``p`` under the diagonal affine map (x,y) -> (lam x + u, gam y + v).

    Requires lam, gam > 0 so orientation is preserved; the image area is
    exactly lam*gam*area(p).
    """
    if lam <= 0 or gam <= 0:
        raise ValidationError(f"affine coefficients must be positive, got ({lam}, {gam})")
    verts = tuple(Point(lam * q.x + u, gam * q.y + v) for q in p.vertices)
    try:
        return Polygon(verts, p.piece_id)
    except DegeneracyError as exc:
        raise DegeneracyError(f"affine image degenerate: {exc}") from exc


def intersect_polygons(p: Polygon, q: Polygon) -> list[Polygon]:
    """Connected components of interior(p) & interior(q) as simple polygons.

    Components with area below EPS_GEOM**2 are dropped.  Returns [] when
    the interiors are disjoint (touching boundaries do not count).
    """
    inter = p.shapely().intersection(q.shapely())
    out: list[Polygon] = []
    for g in getattr(inter, "geoms", [inter]):
        if g.geom_type != "Polygon" or g.is_empty:
            continue
        if g.area <= EPS_GEOM**2:
            continue
        out.append(from_shapely(g, p.piece_id))
    out.sort(key=lambda poly: (poly.bounds[0], poly.bounds[1]))
    return out


def arrangement_multiplicity(segments: list[Segment]) -> tuple[Point, int]:
    """Point of maximal curve multiplicity in a segment arrangement.

    Returns a point maximizing, and the maximum of, the number of distinct
    ``curve_id`` values whose segments contain that point (endpoints
    included).  Ties are broken by lexicographic (x, y) order.

    Candidates are segment endpoints plus all pairwise crossing points;
    any point seen by two or more curves is of this form, so the maximum
    is attained on the candidate set.
    """
    if not segments:
        raise ValidationError("arrangement_multiplicity needs at least one segment")

    a = np.array([[s.a.x, s.a.y] for s in segments])
    b = np.array([[s.b.x, s.b.y] for s in segments])
    ids = np.array([s.curve_id for s in segments])

    cands = [a, b]
    n = len(segments)
    if n > 1:
        ii, jj = np.triu_indices(n, k=1)
        r = b[ii] - a[ii]
        s = b[jj] - a[jj]
        qp = a[jj] - a[ii]
        den = r[:, 0] * s[:, 1] - r[:, 1] * s[:, 0]
        ok = np.abs(den) > 1e-15
        t = np.where(ok, (qp[:, 0] * s[:, 1] - qp[:, 1] * s[:, 0]) / np.where(ok, den, 1.0), -1.0)
        w = np.where(ok, (qp[:, 0] * r[:, 1] - qp[:, 1] * r[:, 0]) / np.where(ok, den, 1.0), -1.0)
        hit = ok & (t > -1e-9) & (t < 1 + 1e-9) & (w > -1e-9) & (w < 1 + 1e-9)
        if hit.any():
            cands.append(a[ii[hit]] + t[hit, None] * r[hit])
    pts = np.concatenate(cands, axis=0)

    # Snap-dedup candidates on an EPS_GEOM lattice.
    key = np.round(pts / EPS_GEOM).astype(np.int64)
    _, keep = np.unique(key, axis=0, return_index=True)
    pts = pts[np.sort(keep)]

    d = b - a
    lens2 = np.einsum("ij,ij->i", d, d)
    best_count = 0
    best_pt: Point | None = None
    for chunk in np.array_split(pts, max(1, len(pts) // 2048)):
        # distance of each candidate to each segment, vectorised
        ap = chunk[:, None, :] - a[None, :, :]
        t = np.clip(np.einsum("cij,ij->ci", ap, d) / lens2, 0.0, 1.0)
        closest = a[None, :, :] + t[:, :, None] * d[None, :, :]
        dist = np.linalg.norm(chunk[:, None, :] - closest, axis=2)
        on = dist <= EPS_GEOM
        for row, (x, y) in zip(on, chunk):
            c = len(set(ids[row]))
            if c > best_count or (
                c == best_count
                and best_pt is not None
                and (x, y) < (best_pt.x, best_pt.y)
            ):
                best_count = c
                best_pt = Point(float(x), float(y))
    assert best_pt is not None
    return best_pt, best_count

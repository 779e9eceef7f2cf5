"""Refined partitions of the domain into itinerary cells, their boundary
curve arrangements, the crossing multiplicity D_tau, and the expansion
versus multiplicity check.

The depth-k partition consists of the continuity domains of the first
k+1 iterates: the cell with word (w_0, ..., w_k) is the open set of
points whose l-th iterate lies in piece w_l for every l <= k.  Cells are
convex whenever the pieces are, have pairwise disjoint interiors, and
their closures cover the domain.  Each cell carries the diagonal affine
map that sends it onto its k-step forward image, which is how refinement
is computed: the image is clipped against the pieces and the new cell is
pulled back.

Boundary segments are grouped into curves geometrically: segments lying
on one line whose spans overlap or abut form a single curve and share a
``curve_id``.  This makes a curve subdivided by refinement count once,
and collapses coincident forward images into one curve, matching the
requirement that distinct boundary curves meet in finitely many points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ResourceError, ValidationError
from .geometry import (
    EPS_GEOM,
    Point,
    Polygon,
    Segment,
    arrangement_multiplicity,
    from_shapely,
)
from .map_core import MapSpec

#: Refinement stops with a ResourceError past this many cells.
DEFAULT_CELL_CAP = 10**6

#: Components smaller than this fraction of area(K) are dropped (and counted).
SLIVER_FRACTION = 1e-12

_IDENTITY = (1.0, 0.0, 1.0, 0.0)  # (L, U, G, V): (x,y) -> (Lx+U, Gy+V)


def _compose(outer: tuple, inner: tuple) -> tuple:
    lo, uo, go, vo = outer
    li, ui, gi, vi = inner
    return (lo * li, lo * ui + uo, go * gi, go * vi + vo)


def _apply_comp(comp: tuple, poly: Polygon) -> Polygon:
    l, u, g, v = comp
    return Polygon(tuple(Point(l * p.x + u, g * p.y + v) for p in poly.vertices),
                   poly.piece_id)


def _invert_comp(comp: tuple, poly: Polygon) -> Polygon:
    l, u, g, v = comp
    return Polygon(tuple(Point((p.x - u) / l, (p.y - v) / g) for p in poly.vertices),
                   poly.piece_id)


@dataclass(frozen=True)
class Cell:
    """One itinerary cell: its word, its polygon, and the composite affine
    map carrying it onto its forward image."""

    word: tuple[int, ...]
    polygon: Polygon
    forward: tuple = _IDENTITY

    def image(self) -> Polygon:
        """The len(word)-1 step forward image of the cell."""
        return _apply_comp(self.forward, self.polygon)


@dataclass(frozen=True)
class Partition:
    """A depth-k refined partition with its boundary curve set."""

    depth: int
    cells: tuple[Cell, ...]
    boundary: tuple[Segment, ...]
    dropped: int = 0

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    def total_area(self) -> float:
        return sum(c.polygon.area for c in self.cells)

    def words(self) -> list[tuple[int, ...]]:
        return [c.word for c in self.cells]

    def cell_containing(self, p: Point, margin: float = 0.0) -> Cell | None:
        for c in self.cells:
            if c.polygon.contains(p, margin):
                return c
        return None

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "cells": [
                {
                    "word": list(c.word),
                    "polygon": [[v.x, v.y] for v in c.polygon.vertices],
                }
                for c in self.cells
            ],
            "boundary": [
                {"a": [s.a.x, s.a.y], "b": [s.b.x, s.b.y], "curve_id": s.curve_id}
                for s in self.boundary
            ],
        }


@dataclass(frozen=True)
class A2Cert:
    """Witness that expansion beats boundary multiplicity at depth tau:
    gamma_min^tau > D_tau + 1."""

    tau: int
    d_tau: int
    gamma_min: float
    margin: float
    witness: Point

    @property
    def passed(self) -> bool:
        return self.margin > 0


@dataclass(frozen=True)
class A2Failure:
    """All depths up to tau_max failed; records the (tau, D_tau) pairs tried."""

    gamma_min: float
    tried: tuple[tuple[int, int], ...]

    @property
    def passed(self) -> bool:
        return False


def _cluster_sorted(values: list[float], items: list, tol: float) -> list[list]:
    """1D clustering: split the item list (pre-sorted by value) at gaps > tol."""
    groups: list[list] = []
    prev = None
    for v, it in zip(values, items):
        if prev is None or v - prev > tol:
            groups.append([])
        groups[-1].append(it)
        prev = v
    return groups


def _regroup_boundary(cells: tuple[Cell, ...]) -> tuple[Segment, ...]:
    """Group all cell edges into geometric curves and emit one maximal
    segment per curve, curve_ids assigned in a deterministic order.

    A curve is a maximal connected union of collinear edges, clustered
    hierarchically: by line direction, then line offset, then merged
    spans along the line.
    """
    tol = 1e-7
    entries = []  # (angle, nx, ny, off, t_lo, t_hi)
    for c in cells:
        vs = c.polygon.vertices
        for i in range(len(vs)):
            a, b = vs[i], vs[(i + 1) % len(vs)]
            dx, dy = b.x - a.x, b.y - a.y
            norm = math.hypot(dx, dy)
            if norm <= EPS_GEOM:
                continue
            nx, ny = -dy / norm, dx / norm
            if nx < -tol or (abs(nx) <= tol and ny < 0):
                nx, ny = -nx, -ny
            off = nx * a.x + ny * a.y
            t0 = -ny * a.x + nx * a.y
            t1 = -ny * b.x + nx * b.y
            entries.append((math.atan2(ny, nx), nx, ny, off, min(t0, t1), max(t0, t1)))
    entries.sort()
    segments: list[Segment] = []
    curve_id = 0
    for direction in _cluster_sorted([e[0] for e in entries], entries, tol):
        direction.sort(key=lambda e: e[3])
        for line in _cluster_sorted([e[3] for e in direction], direction, tol):
            nx = sum(e[1] for e in line) / len(line)
            ny = sum(e[2] for e in line) / len(line)
            off = sum(e[3] for e in line) / len(line)
            ivals = sorted((e[4], e[5]) for e in line)
            lo, hi = ivals[0]
            merged = []
            for s, t in ivals[1:]:
                if s <= hi + tol:
                    hi = max(hi, t)
                else:
                    merged.append((lo, hi))
                    lo, hi = s, t
            merged.append((lo, hi))
            for lo, hi in merged:
                a = Point(nx * off - ny * lo, ny * off + nx * lo)
                b = Point(nx * off - ny * hi, ny * off + nx * hi)
                segments.append(Segment(a, b, curve_id))
                curve_id += 1
    return tuple(segments)


def initial_partition(m: MapSpec) -> Partition:
    """The depth-0 partition: one cell per piece, words of length 1."""
    cells = tuple(
        Cell((i,), piece.region, _IDENTITY)
        for i, piece in enumerate(m.pieces, start=1)
    )
    return Partition(0, cells, _regroup_boundary(cells))


def refine_once(m: MapSpec, z: Partition, cell_cap: int = DEFAULT_CELL_CAP) -> Partition:
    """One refinement step: extend every itinerary word by one symbol.

    For each cell, the forward image is pushed through the branch of its
    current piece, clipped against every piece, and each resulting
    component is pulled back to a new cell.  Sub-tolerance components are
    dropped and counted.
    """
    a = m.n_pieces
    for c in z.cells:
        if not all(1 <= s <= a for s in c.word):
            raise ValidationError("partition is inconsistent with the map")
    sliver = SLIVER_FRACTION * m.domain_area()
    new_cells: list[Cell] = []
    dropped = z.dropped
    for cell in z.cells:
        branch = m.pieces[cell.word[-1] - 1]
        image = cell.image()
        pushed = _apply_comp((branch.lam, branch.u, branch.gam, branch.v), image)
        comp = _compose((branch.lam, branch.u, branch.gam, branch.v), cell.forward)
        for j, piece in enumerate(m.pieces, start=1):
            inter = pushed.shapely().intersection(piece.region.shapely())
            for g in getattr(inter, "geoms", [inter]):
                if g.geom_type != "Polygon" or g.is_empty:
                    continue
                if g.area <= max(sliver, EPS_GEOM**2):
                    dropped += 1
                    continue
                pulled = _invert_comp(comp, from_shapely(g, piece_id=cell.word[0]))
                new_cells.append(Cell(cell.word + (j,), pulled, comp))
    if len(new_cells) > cell_cap:
        raise ResourceError(
            f"refinement produced {len(new_cells)} cells, over the cap {cell_cap}"
        )
    new_cells.sort(key=lambda c: c.word)
    cells = tuple(new_cells)
    return Partition(z.depth + 1, cells, _regroup_boundary(cells), dropped)


def refine_to_depth(m: MapSpec, k: int, cell_cap: int = DEFAULT_CELL_CAP) -> Partition:
    """Iterate ``refine_once`` k times from the depth-0 partition."""
    if k < 0:
        raise ValidationError("depth must be >= 0")
    z = initial_partition(m)
    for _ in range(k):
        z = refine_once(m, z, cell_cap)
    return z


def compute_D_tau(m: MapSpec, tau: int,
                  cell_cap: int = DEFAULT_CELL_CAP) -> tuple[int, Point]:
    """Maximal number of distinct depth-tau boundary curves through one
    point, with a witness point."""
    if tau < 1:
        raise ValidationError("tau must be >= 1")
    z = refine_to_depth(m, tau, cell_cap)
    witness, count = arrangement_multiplicity(list(z.boundary))
    return count, witness


def check_A2(m: MapSpec, tau_max: int,
             cell_cap: int = DEFAULT_CELL_CAP) -> A2Cert | A2Failure:
    """Search for the smallest tau <= tau_max with gamma_min^tau > D_tau + 1.

    Returns an A2Cert on success, otherwise an A2Failure listing every
    (tau, D_tau) pair tried.  Failure is a value, not an exception.
    """
    if tau_max < 1:
        raise ValidationError("tau_max must be >= 1")
    gmin = m.gam_min
    tried: list[tuple[int, int]] = []
    z = initial_partition(m)
    for tau in range(1, tau_max + 1):
        z = refine_once(m, z, cell_cap)
        witness, d = arrangement_multiplicity(list(z.boundary))
        margin = gmin**tau - d - 1
        if margin > 0:
            return A2Cert(tau, d, gmin, margin, witness)
        tried.append((tau, d))
    return A2Failure(gmin, tuple(tried))

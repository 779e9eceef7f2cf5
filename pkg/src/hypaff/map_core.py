"""The piecewise affine hyperbolic map family, its presets and parameter
gates.

A map is a finite list of pieces (open polygons with pairwise disjoint
interiors covering a compact domain K); on piece i the map acts as
(x1, x2) -> (lam_i x1 + u_i, gam_i x2 + v_i) with 0 < lam_i < 1 < gam_i,
so x1 contracts and x2 expands.  The map is undefined on the union of the
piece boundaries.

Also here: the injective three-dimensional extension that separates
branch histories in a third coordinate, and the parameter gates that test
the sufficient conditions for an absolutely continuous invariant measure
(area expansion plus one of three contraction/translation conditions).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import shapely.geometry as _sg
import shapely.ops as _sops

from .errors import BoundaryError, ParameterError, ValidationError
from .geometry import EPS_GEOM, Point, Polygon, affine_image
from .transversality import Q_N, eval_f_n

#: Default nudge applied by the perturbing boundary policy, well below
#: every feature size but enough to move a point off an exact boundary hit.
EPS_PERTURB = 1e-12


@dataclass(frozen=True)
class PieceSpec:
    """One affine branch: the region it acts on and its four coefficients."""

    region: Polygon
    lam: float
    gam: float
    u: float
    v: float

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ParameterError(f"lam must be in (0,1), got {self.lam}")
        if self.gam <= 1.0:
            raise ParameterError(f"gam must exceed 1, got {self.gam}")

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return (self.lam * x + self.u, self.gam * y + self.v)


@dataclass(frozen=True)
class MapSpec:
    """A validated map: pieces, tangent-slope bound for the interior
    boundary curves, and a display name.

    Construction checks the structural hypotheses: at least two pieces
    with pairwise distinct u_i and pairwise disjoint interiors, each
    interior boundary segment flatter than ``slope_bound`` (the outer
    border of K is exempt: it may contain vertical walls), and the image
    of every piece contained in K.
    """

    pieces: tuple[PieceSpec, ...]
    slope_bound: float
    name: str = "custom"
    _domain: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.pieces) < 2:
            raise ValidationError("a map needs at least two pieces")
        us = [p.u for p in self.pieces]
        for i in range(len(us)):
            for j in range(i + 1, len(us)):
                if abs(us[i] - us[j]) <= EPS_GEOM:
                    raise ValidationError(f"u_{i+1} and u_{j+1} coincide: {us[i]}")
        shps = [p.region.shapely() for p in self.pieces]
        for i in range(len(shps)):
            for j in range(i + 1, len(shps)):
                if shps[i].intersection(shps[j]).area > EPS_GEOM:
                    raise ValidationError(f"pieces {i+1} and {j+1} overlap")
        domain = _sops.unary_union(shps)
        border = domain.boundary
        for idx, piece in enumerate(self.pieces, start=1):
            for seg in piece.region.edges():
                mid = _sg.Point(0.5 * (seg.a.x + seg.b.x), 0.5 * (seg.a.y + seg.b.y))
                on_border = border.distance(mid) <= EPS_GEOM
                if not on_border and not seg.slope_bounded_by(self.slope_bound):
                    raise ValidationError(
                        f"piece {idx} has an interior boundary segment steeper "
                        f"than the slope bound {self.slope_bound}"
                    )
            img = affine_image(piece.region, piece.lam, piece.gam, piece.u, piece.v)
            if img.shapely().difference(domain.buffer(EPS_GEOM)).area > EPS_GEOM:
                raise ValidationError(f"image of piece {idx} leaves the domain K")
        object.__setattr__(self, "_domain", domain)

    # -- basic queries -------------------------------------------------

    @property
    def n_pieces(self) -> int:
        return len(self.pieces)

    @property
    def lam_min(self) -> float:
        return min(p.lam for p in self.pieces)

    @property
    def lam_max(self) -> float:
        return max(p.lam for p in self.pieces)

    @property
    def gam_min(self) -> float:
        return min(p.gam for p in self.pieces)

    @property
    def gam_max(self) -> float:
        return max(p.gam for p in self.pieces)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return self._domain.bounds

    def domain_area(self) -> float:
        return self._domain.area

    def piece_of(self, p: Point, margin: float = EPS_GEOM) -> int | None:
        """1-based index of the piece owning ``p``, or None when the point
        is within ``margin`` of the discontinuity set or outside K.

        Ownership is by closure: a point on the outer border belongs to
        the unique piece whose closure contains it (the map extends
        continuously there), while a point within ``margin`` of two piece
        closures sits on the discontinuity set, where the map is
        undefined.
        """
        pt = _sg.Point(p.x, p.y)
        candidates = [
            i
            for i, piece in enumerate(self.pieces, start=1)
            if piece.region.shapely().distance(pt) <= margin
        ]
        if len(candidates) == 1:
            return candidates[0]
        return None

    def u_ratio(self) -> float:
        """max{|u_i - u_j|, |u_i|} / min{|u_i - u_j| : u_i != u_j}."""
        us = [p.u for p in self.pieces]
        diffs = [abs(a - b) for i, a in enumerate(us) for b in us[i + 1 :]]
        hi = max(max(diffs), max(abs(u) for u in us))
        lo = min(d for d in diffs if d > EPS_GEOM)
        return hi / lo


@dataclass(frozen=True)
class LiftedPoint:
    """A point of the extended phase space K x [0,1]."""

    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not 0.0 <= self.x3 <= 1.0:
            raise ParameterError(f"x3 must lie in [0,1], got {self.x3}")

    def project(self) -> Point:
        return Point(self.x1, self.x2)


@dataclass(frozen=True)
class GateCondition:
    """One of the three gate conditions, evaluated."""

    n: int
    threshold: float
    x: float
    bound: float
    c_ratio: float
    passed: bool

    @property
    def threshold_margin(self) -> float:
        return self.threshold - self.x

    @property
    def bound_margin(self) -> float:
        return self.bound - self.c_ratio


@dataclass(frozen=True)
class GateReport:
    """Result of a parameter gate: the area-expansion ratio, the
    translation ratio C, and the three per-condition checks."""

    area_expansion: float
    c_ratio: float
    passes: tuple[GateCondition, ...]
    overall: bool
    t_requirement: float | None = None
    t_requirement_met: bool | None = None

    def to_dict(self) -> dict:
        def _num(v: float) -> float | None:
            return None if math.isnan(v) else v

        d = {
            "area_expansion": self.area_expansion,
            "C_ratio": self.c_ratio,
            "conditions": [
                {
                    "n": c.n,
                    "threshold": c.threshold,
                    "x": c.x,
                    "bound": _num(c.bound),
                    "threshold_margin": c.threshold_margin,
                    "bound_margin": _num(c.bound_margin),
                    "pass": c.passed,
                }
                for c in self.passes
            ],
            "overall": self.overall,
        }
        if self.t_requirement is not None:
            d["t_requirement"] = self.t_requirement
            d["t_requirement_met"] = self.t_requirement_met
        return d


# -- dynamics ----------------------------------------------------------


def apply(m: MapSpec, p: Point) -> tuple[Point, int]:
    """One step of the map.  Returns (image, 1-based piece index).

    Raises BoundaryError when ``p`` is within EPS_GEOM of the
    discontinuity set (or outside K), where the map is undefined.
    """
    i = m.piece_of(p)
    if i is None:
        raise BoundaryError(
            f"point ({p.x}, {p.y}) is on the discontinuity set or outside K"
        )
    x, y = m.pieces[i - 1].apply(p.x, p.y)
    return Point(x, y), i


@dataclass(frozen=True)
class Orbit:
    """A finite orbit: the visited points with their piece indices, plus
    boundary diagnostics."""

    states: tuple[tuple[Point, int], ...]
    halted: bool = False
    halt_step: int | None = None
    perturbations: int = 0

    def points(self) -> list[Point]:
        return [p for p, _ in self.states]

    def symbols(self) -> list[int]:
        return [i for _, i in self.states]


def orbit(m: MapSpec, p: Point, steps: int, boundary_policy: str = "halt") -> Orbit:
    """Iterate ``apply`` for ``steps`` steps, recording each state.

    ``boundary_policy``: "halt" stops at the first boundary hit and
    returns the partial orbit with ``halted=True``; "perturb" nudges the
    point by EPS_PERTURB in the unstable direction and continues, counting
    the event.
    """
    if steps < 0:
        raise ValidationError("steps must be >= 0")
    if boundary_policy not in ("halt", "perturb"):
        raise ValidationError(f"unknown boundary policy {boundary_policy!r}")
    states: list[tuple[Point, int]] = []
    perturbations = 0
    cur = p
    for k in range(steps + 1):
        i = m.piece_of(cur)
        if i is None:
            if boundary_policy == "halt":
                return Orbit(tuple(states), halted=True, halt_step=k,
                             perturbations=perturbations)
            perturbations += 1
            for nudge in (EPS_PERTURB, -2 * EPS_PERTURB):
                cand = Point(cur.x, cur.y + nudge)
                i = m.piece_of(cand, margin=0.0)
                if i is not None:
                    cur = cand
                    break
            else:
                return Orbit(tuple(states), halted=True, halt_step=k,
                             perturbations=perturbations)
        states.append((cur, i))
        if k < steps:
            x, y = m.pieces[i - 1].apply(cur.x, cur.y)
            cur = Point(x, y)
    return Orbit(tuple(states), perturbations=perturbations)


def default_theta(m: MapSpec) -> float:
    """Midpoint of the admissible range (0, 1/(a+1)) for the extension
    parameter; maximizes the separation gap between branch slots."""
    return 1.0 / (2 * (m.n_pieces + 1))


def lift_apply(m: MapSpec, theta: float, q: LiftedPoint) -> LiftedPoint:
    """One step of the injective extension on K x [0,1].

    The planar part follows ``apply``; the third coordinate contracts by
    ``theta`` into the slot [i/(a+1), i/(a+1)+theta] of the branch taken,
    so distinct one-step histories land in disjoint slots.
    """
    a = m.n_pieces
    if not 0.0 < theta < 1.0 / (a + 1):
        raise ParameterError(f"theta must lie in (0, 1/{a+1}), got {theta}")
    img, i = apply(m, q.project())
    return LiftedPoint(img.x, img.y, theta * q.x3 + i / (a + 1))


# -- presets -----------------------------------------------------------


def preset_belykh(lam: float, gam: float, k: float, name: str | None = None) -> MapSpec:
    """The two-piece map on [-1,1]^2 split by the line x2 = k x1.

    Piece 1 is the region above the line and maps by
    (lam x1 + (1-lam), gam x2 - (gam-1)); piece 2 is the region below and
    maps by (lam x1 - (1-lam), gam x2 + (gam-1)).  Requires |k| < 1,
    0 < lam < 1 and 1 < gam <= 2/(1+|k|) so the images stay inside the
    square.
    """
    if not -1.0 < k < 1.0:
        raise ParameterError(f"|k| must be < 1, got {k}")
    if not 0.0 < lam < 1.0:
        raise ParameterError(f"lam must be in (0,1), got {lam}")
    if not 1.0 < gam <= 2.0 / (1.0 + abs(k)):
        raise ParameterError(
            f"gam must satisfy 1 < gam <= 2/(1+|k|) = {2.0/(1.0+abs(k)):g}, got {gam}"
        )
    upper = Polygon(
        (Point(-1, -k), Point(1, k), Point(1, 1), Point(-1, 1)), piece_id=1
    )
    lower = Polygon(
        (Point(-1, -1), Point(1, -1), Point(1, k), Point(-1, -k)), piece_id=2
    )
    pieces = (
        PieceSpec(upper, lam, gam, 1.0 - lam, -(gam - 1.0)),
        PieceSpec(lower, lam, gam, -(1.0 - lam), gam - 1.0),
    )
    return MapSpec(pieces, slope_bound=abs(k) + 1.0,
                   name=name or f"belykh(lam={lam:g},gam={gam:g},k={k:g})")


def preset_fat_baker(lam: float) -> MapSpec:
    """The fat baker's transformation: the k = 0, gam = 2 member of the
    family; "fat" refers to lam > 1/2."""
    return preset_belykh(lam, 2.0, 0.0, name=f"fat_baker(lam={lam:g})")


# -- parameter gates ---------------------------------------------------


def _gate(m: MapSpec, x: float, area_expansion: float,
          t_req: float | None = None, t_met: bool | None = None) -> GateReport:
    c = m.u_ratio()
    conds = []
    for n, thr in Q_N.items():
        bound = eval_f_n(n, x) if x < thr else float("nan")
        passed = x < thr and c < bound
        conds.append(GateCondition(n, thr, x, bound, c, passed))
    overall = area_expansion > 1.0 and any(cd.passed for cd in conds)
    return GateReport(area_expansion, c, tuple(conds), overall,
                      t_requirement=t_req, t_requirement_met=t_met)


def gate_corollary(m: MapSpec) -> GateReport:
    """Parameter gate in the t-free form: area expansion
    lam_min gam_min^2 / gam_max > 1 plus one of the three conditions on
    x = lam_max."""
    area = m.lam_min * m.gam_min**2 / m.gam_max
    return _gate(m, m.lam_max, area)


def gate_theorem(m: MapSpec, t0: float, t1: float) -> GateReport:
    """Parameter gate for the scaled family over the interval (t0, t1):
    area condition with t0, contraction conditions with x = t1 lam_max.

    Also reports the series-estimate requirement
    t1 lam_max < min(1/(2C), 0.68)."""
    if not 0.0 < t0 < t1:
        raise ParameterError(f"need 0 < t0 < t1, got ({t0}, {t1})")
    x = t1 * m.lam_max
    if x >= 1.0:
        raise ParameterError(f"t1*lam_max must be < 1, got {x}")
    area = t0 * m.lam_min * m.gam_min**2 / m.gam_max
    c = m.u_ratio()
    t_req = min(1.0 / (2.0 * c), 0.68)
    return _gate(m, x, area, t_req=t_req, t_met=x < t_req)


# -- serialization -----------------------------------------------------


def mapspec_to_dict(m: MapSpec) -> dict:
    return {
        "name": m.name,
        "slope_bound": m.slope_bound,
        "pieces": [
            {
                "polygon": [[p.x, p.y] for p in piece.region.vertices],
                "lambda": piece.lam,
                "gamma": piece.gam,
                "u": piece.u,
                "v": piece.v,
            }
            for piece in m.pieces
        ],
    }


def mapspec_from_dict(d: dict) -> MapSpec:
    try:
        pieces = tuple(
            PieceSpec(
                Polygon(tuple(Point(x, y) for x, y in entry["polygon"]), piece_id=i),
                entry["lambda"],
                entry["gamma"],
                entry["u"],
                entry["v"],
            )
            for i, entry in enumerate(d["pieces"], start=1)
        )
        return MapSpec(pieces, d["slope_bound"], d.get("name", "custom"))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed map spec: {exc}") from exc


def mapspec_to_json(m: MapSpec) -> str:
    return json.dumps(mapspec_to_dict(m), indent=2)


def mapspec_from_json(text: str) -> MapSpec:
    try:
        return mapspec_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc

"""Empirical physical measures: push uniform mass on an unstable curve
forward, average over time, and read off histograms, marginals, slab
conditionals, entropy and correlation decay.

Orbits are simulated in batches with numpy.  Every run is deterministic
under its seed.  Two numerical policies are built into the batch engine:

* boundary perturbation: a point within EPS_GEOM of the boundary set is
  nudged by EPS_PERTURB in the unstable direction and the event counted
  (boundary hits carry no mass, so rare events do not bias statistics;
  the counter verifies they are rare);

* unstable dither: after every step the expanding coordinate receives a
  seeded uniform offset of one-ulp scale (about 4.4e-16 on a unit-sized
  domain).  When the expansion factor is an exact power of two the update
  is an exact bit shift in IEEE arithmetic, so finite orbits exhaust
  their 52 random mantissa bits and collapse onto a periodic orbit within
  ~60 steps.  The dither feeds one fresh low-order bit per step, exactly
  the information a non-dyadic factor would gain from rounding, and is
  orders of magnitude below every tolerance and histogram resolution in
  use.  Pass dither=0 to disable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely

from .errors import (
    DegenerateFitError,
    EmptySlabError,
    ExcessiveBoundaryEventsError,
    ParameterError,
    UndersamplingError,
    ValidationError,
)
from .geometry import EPS_GEOM
from .map_core import EPS_PERTURB, MapSpec

#: Fraction of iterates allowed to trigger the boundary perturbation
#: before the run is declared invalid.
BOUNDARY_EVENT_BUDGET = 1e-3


# -- observables -------------------------------------------------------


@dataclass(frozen=True)
class Observable:
    """A built-in Hölder observable: a coordinate function or a smooth
    bump.  ``holder_const`` and ``holder_eta`` state a valid Hölder pair."""

    kind: str
    center: tuple[float, float] = (0.0, 0.0)
    width: float = 1.0

    def __post_init__(self):
        if self.kind not in ("x1", "x2", "bump", "const"):
            raise ParameterError(f"unknown observable kind {self.kind!r}")
        if self.kind == "bump" and self.width <= 0:
            raise ParameterError("bump width must be positive")

    @property
    def holder_eta(self) -> float:
        return 1.0

    @property
    def holder_const(self) -> float:
        if self.kind in ("x1", "x2"):
            return 1.0
        if self.kind == "const":
            return 0.0
        # max slope of exp(1 - 1/(1-r^2)) on (0,1), scaled by 1/width
        return 1.135 / self.width

    def __call__(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        if self.kind == "x1":
            return x1
        if self.kind == "x2":
            return x2
        if self.kind == "const":
            return np.ones_like(x1)
        r2 = ((x1 - self.center[0]) ** 2 + (x2 - self.center[1]) ** 2) / self.width**2
        out = np.zeros_like(x1)
        inside = r2 < 1.0
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
        return out

    def describe(self) -> str:
        if self.kind in ("x1", "x2", "const"):
            return self.kind
        return f"bump(center={self.center}, width={self.width:g})"


# -- unstable curves ---------------------------------------------------


@dataclass(frozen=True)
class UnstableCurve:
    """A vertical open segment {x1 = rho, sigma1 < x2 < sigma2}."""

    rho: float
    sigma1: float
    sigma2: float

    def __post_init__(self):
        if not self.sigma1 < self.sigma2:
            raise ValidationError("need sigma1 < sigma2")


def validate_curve(m: MapSpec, v: UnstableCurve) -> int:
    """Check the curve lies inside a single piece; return its index."""
    line = shapely.LineString([(v.rho, v.sigma1), (v.rho, v.sigma2)])
    for i, piece in enumerate(m.pieces, start=1):
        shp = piece.region.shapely()
        if shp.covers(line) and shp.exterior.distance(line) > EPS_GEOM:
            return i
    raise ValidationError(
        f"curve x1={v.rho:g}, x2 in ({v.sigma1:g}, {v.sigma2:g}) "
        "does not lie inside a single piece"
    )


def default_unstable_curve(m: MapSpec) -> UnstableCurve:
    """A deterministic unstable curve: the vertical chord through the
    representative point of the largest piece, shrunk by 10% per side."""
    piece = max(m.pieces, key=lambda p: p.region.area)
    shp = piece.region.shapely()
    rep = shp.representative_point()
    x0, y0, x1, y1 = shp.bounds
    chord = shp.intersection(shapely.LineString([(rep.x, y0 - 1), (rep.x, y1 + 1)]))
    if chord.geom_type == "MultiLineString":
        chord = max(chord.geoms, key=lambda g: g.length)
    ys = [c[1] for c in chord.coords]
    lo, hi = min(ys), max(ys)
    shrink = 0.1 * (hi - lo)
    return UnstableCurve(rep.x, lo + shrink, hi - shrink)


# -- batch orbit engine ------------------------------------------------


class OrbitEngine:
    """Vectorised iteration of a map over batches of points.

    Pieces must be convex (true for every preset); points are classified
    by signed distances to piece edges and mapped by their branch.
    """

    def __init__(self, m: MapSpec):
        self.map = m
        self.bounds = m.bounds
        self._normals = []  # per piece: (A (edges,2), b (edges,))
        for piece in m.pieces:
            vs = piece.region.vertices
            if not _is_convex(vs):
                raise ValidationError(
                    "the batch engine requires convex pieces; "
                    "use the scalar orbit for this map"
                )
            rows, offs = [], []
            for i in range(len(vs)):
                a, b = vs[i], vs[(i + 1) % len(vs)]
                dx, dy = b.x - a.x, b.y - a.y
                norm = math.hypot(dx, dy)
                rows.append((-dy / norm, dx / norm))
                offs.append((dy * a.x - dx * a.y) / norm)
            self._normals.append((np.array(rows), np.array(offs)))
        self.lam = np.array([p.lam for p in m.pieces])
        self.gam = np.array([p.gam for p in m.pieces])
        self.u = np.array([p.u for p in m.pieces])
        self.v = np.array([p.v for p in m.pieces])

    def margins(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        """Inward margin of each point with respect to each piece,
        shape (n_pieces, n_points)."""
        out = np.empty((len(self._normals), x1.size))
        for k, (rows, offs) in enumerate(self._normals):
            d = rows[:, 0, None] * x1[None, :] + rows[:, 1, None] * x2[None, :]
            out[k] = (d + offs[:, None]).min(axis=0)
        return out

    def classify(self, x1: np.ndarray, x2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(piece index array 0-based, boundary-proximity mask)."""
        mg = self.margins(x1, x2)
        idx = mg.argmax(axis=0)
        near = mg.max(axis=0) < EPS_GEOM
        return idx, near

    def step(self, x1: np.ndarray, x2: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
        """One map step with the perturbing boundary policy.

        Returns (new x1, new x2, 0-based symbols of the step, event count).
        """
        idx, near = self.classify(x1, x2)
        events = int(near.sum())
        if events:
            x2 = x2.copy()
            x2[near] += EPS_PERTURB
            idx2, _ = self.classify(x1[near], x2[near])
            idx[near] = idx2
        y1 = self.lam[idx] * x1 + self.u[idx]
        y2 = self.gam[idx] * x2 + self.v[idx]
        return y1, y2, idx, events

    def sample_domain(self, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Uniform rejection sample of n interior points of the domain."""
        x0, y0, x1b, y1b = self.bounds
        out1 = np.empty(0)
        out2 = np.empty(0)
        while out1.size < n:
            c1 = rng.uniform(x0, x1b, 2 * n)
            c2 = rng.uniform(y0, y1b, 2 * n)
            mg = self.margins(c1, c2).max(axis=0)
            keep = mg > EPS_GEOM
            out1 = np.concatenate([out1, c1[keep]])
            out2 = np.concatenate([out2, c2[keep]])
        return out1[:n], out2[:n]


def _is_convex(vs) -> bool:
    n = len(vs)
    for i in range(n):
        a, b, c = vs[i], vs[(i + 1) % n], vs[(i + 2) % n]
        cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x)
        if cross < -EPS_GEOM:
            return False
    return True


def _auto_dither(m: MapSpec) -> float:
    x0, y0, x1, y1 = m.bounds
    return (y1 - y0) * 2.0**-52


def _run(
    m: MapSpec,
    starts: tuple[np.ndarray, np.ndarray],
    n_steps: int,
    seed: int,
    hooks: list,
    dither: float | None = None,
) -> int:
    """Drive the batch engine; call each hook per step; return event count."""
    eng = OrbitEngine(m)
    rng = np.random.default_rng(np.random.Philox(key=[seed, 2]))
    amp = _auto_dither(m) if dither is None else dither
    x1, x2 = starts
    x1 = np.asarray(x1, dtype=float).copy()
    x2 = np.asarray(x2, dtype=float).copy()
    x0b, y0b, x1b, y1b = eng.bounds
    total_events = 0
    for hook in hooks:
        hook.begin(n_steps, x1.size)
    for k in range(n_steps):
        for hook in hooks:
            hook.observe(k, x1, x2)
        y1, y2, sym, events = eng.step(x1, x2)
        total_events += events
        for hook in hooks:
            hook.observe_symbol(k, sym)
        if amp:
            y2 += (rng.random(y2.size) - 0.5) * (2.0 * amp)
            np.clip(y2, y0b, y1b, out=y2)
        x1, x2 = y1, y2
    for hook in hooks:
        hook.observe(n_steps, x1, x2)
    return total_events


class _Hook:
    def begin(self, n_steps: int, n_points: int) -> None:  # pragma: no cover
        pass

    def observe(self, k: int, x1: np.ndarray, x2: np.ndarray) -> None:
        pass

    def observe_symbol(self, k: int, sym: np.ndarray) -> None:
        pass


@dataclass(eq=False)
class EmpiricalMeasure:
    """A normalised grid histogram of orbit mass over the domain box."""

    nx: int
    ny: int
    bbox: tuple[float, float, float, float]
    weights: np.ndarray
    sample_count: int
    burn_in: int
    seed: int
    perturbations: int = 0

    def __post_init__(self):
        s = float(self.weights.sum())
        if abs(s - 1.0) > 1e-12:
            raise ValidationError(f"weights sum to {s}, not 1")

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        x0, y0, x1, y1 = self.bbox
        cx = x0 + (np.arange(self.nx) + 0.5) * (x1 - x0) / self.nx
        cy = y0 + (np.arange(self.ny) + 0.5) * (y1 - y0) / self.ny
        return cx, cy


@dataclass(eq=False)
class Density1D:
    """A normalised one-dimensional histogram."""

    edges: np.ndarray
    weights: np.ndarray

    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


class _HistogramHook(_Hook):
    def __init__(self, bbox, nx, ny, burn_in):
        self.bbox = bbox
        self.nx, self.ny, self.burn_in = nx, ny, burn_in
        self.counts = np.zeros(nx * ny, dtype=np.int64)

    def observe(self, k, x1, x2):
        if k < self.burn_in:
            return
        x0, y0, xb, yb = self.bbox
        ix = np.clip(((x1 - x0) / (xb - x0) * self.nx).astype(np.int64), 0, self.nx - 1)
        iy = np.clip(((x2 - y0) / (yb - y0) * self.ny).astype(np.int64), 0, self.ny - 1)
        self.counts += np.bincount(ix * self.ny + iy, minlength=self.nx * self.ny)


def estimate_sbr(
    m: MapSpec,
    v: UnstableCurve | None = None,
    n_points: int = 10_000,
    n_steps: int = 10_000,
    burn_in: int = 1_000,
    grid: tuple[int, int] = (512, 512),
    seed: int = 0,
    dither: float | None = None,
) -> EmpiricalMeasure:
    """Time-averaged pushforward of uniform mass on an unstable curve.

    Samples ``n_points`` uniform points on ``v`` (default: a deterministic
    curve inside the largest piece), iterates each for ``n_steps`` with the
    perturbing boundary policy, and bins iterates k in [burn_in, n_steps)
    on the grid.  Raises ExcessiveBoundaryEventsError when perturbation
    events exceed 0.1% of all iterates.
    """
    if v is None:
        v = default_unstable_curve(m)
    validate_curve(m, v)
    if not 0 <= burn_in < n_steps:
        raise ValidationError("need 0 <= burn_in < n_steps")
    nx, ny = grid
    if nx < 1 or ny < 1:
        raise ParameterError("grid must be at least 1x1")
    rng = np.random.default_rng(np.random.Philox(key=[seed, 1]))
    x1 = np.full(n_points, float(v.rho))
    x2 = rng.uniform(v.sigma1, v.sigma2, n_points)
    bbox = m.bounds
    hook = _HistogramHook(bbox, nx, ny, burn_in)
    events = _run(m, (x1, x2), n_steps - 1, seed, [hook], dither)
    total = n_points * n_steps
    if events > BOUNDARY_EVENT_BUDGET * total:
        raise ExcessiveBoundaryEventsError(
            f"{events} boundary perturbations out of {total} iterates; "
            "the boundary has positive empirical mass for this run"
        )
    weights = hook.counts.astype(float).reshape(nx, ny)
    weights /= weights.sum()
    return EmpiricalMeasure(
        nx=nx,
        ny=ny,
        bbox=bbox,
        weights=weights,
        sample_count=n_points * (n_steps - burn_in),
        burn_in=burn_in,
        seed=seed,
        perturbations=events,
    )


def marginal(em: EmpiricalMeasure, axis: str) -> Density1D:
    """Projection of the histogram onto one coordinate; normalised."""
    x0, y0, x1, y1 = em.bbox
    if axis in ("x1", "x", "0", 0):
        w = em.weights.sum(axis=1)
        edges = np.linspace(x0, x1, em.nx + 1)
    elif axis in ("x2", "y", "1", 1):
        w = em.weights.sum(axis=0)
        edges = np.linspace(y0, y1, em.ny + 1)
    else:
        raise ParameterError(f"axis must name a coordinate, got {axis!r}")
    return Density1D(edges, w / w.sum())


def conditional_slab_density(
    em: EmpiricalMeasure, x2_center: float, half_width: float | None = None
) -> Density1D:
    """Empirical conditional density of x1 on the slab
    |x2 - x2_center| <= half_width (the stand-in for a stable-fiber
    conditional; slabs converge to fibers for absolutely continuous
    measures).  Default half width: 1/256 of the domain height."""
    if half_width is None:
        half_width = (em.bbox[3] - em.bbox[1]) / 256.0
    if half_width <= 0:
        raise ParameterError("half_width must be positive")
    _, cy = em.cell_centers()
    rows = np.abs(cy - x2_center) <= half_width
    if not rows.any():
        raise EmptySlabError("slab contains no grid rows")
    w = em.weights[:, rows].sum(axis=1)
    total = w.sum()
    if total <= 0:
        raise EmptySlabError("slab carries no mass")
    x0, _, x1, _ = em.bbox
    return Density1D(np.linspace(x0, x1, em.nx + 1), w / total)


# -- entropy -----------------------------------------------------------


class _WordHook(_Hook):
    def __init__(self, a, max_len, burn_in):
        self.a, self.max_len, self.burn_in = a, max_len, burn_in
        self.codes: list[np.ndarray | None] = [None] * (max_len + 1)
        self.counts = [np.zeros(a**L, dtype=np.int64) for L in range(max_len + 1)]
        self.seen = 0

    def observe_symbol(self, k, sym):
        s = sym.astype(np.int64)
        for L in range(self.max_len, 1, -1):
            prev = self.codes[L - 1]
            self.codes[L] = None if prev is None else prev * self.a + s
        self.codes[1] = s
        self.seen += 1
        if k < self.burn_in + self.max_len - 1 or self.seen < self.max_len:
            return
        for L in range(1, self.max_len + 1):
            code = self.codes[L]
            if code is not None:
                self.counts[L] += np.bincount(code, minlength=self.a**L)


@dataclass(frozen=True)
class EntropyEstimate:
    """Word-frequency entropy estimate: per-length mean information and
    the fitted linear growth rate."""

    rate: float
    lengths: tuple[int, ...]
    mean_information: tuple[float, ...]
    visits_per_word: float

    def table(self) -> list[tuple[int, float]]:
        return list(zip(self.lengths, self.mean_information))


def entropy_estimate(
    m: MapSpec,
    v: UnstableCurve | None = None,
    n_points: int = 10_000,
    n_steps: int = 10_000,
    burn_in: int = 1_000,
    max_len: int = 10,
    seed: int = 0,
    dither: float | None = None,
) -> EntropyEstimate:
    """Estimate the entropy rate from symbol-word visit frequencies.

    The orbit ensemble is the same construction as ``estimate_sbr`` (same
    curve, same seed gives the identical trajectories).  For each word
    length L <= max_len the mean of -log(frequency of the current length-L
    window) is recorded; the rate is the least-squares slope over L.
    Raises UndersamplingError when observed length-max_len words average
    fewer than 100 visits.
    """
    if v is None:
        v = default_unstable_curve(m)
    validate_curve(m, v)
    if max_len < 1:
        raise ParameterError("max_len must be >= 1")
    if not 0 <= burn_in < n_steps:
        raise ValidationError("need 0 <= burn_in < n_steps")
    rng = np.random.default_rng(np.random.Philox(key=[seed, 1]))
    x1 = np.full(n_points, float(v.rho))
    x2 = rng.uniform(v.sigma1, v.sigma2, n_points)
    hook = _WordHook(m.n_pieces, max_len, burn_in)
    _run(m, (x1, x2), n_steps - 1, seed, [hook], dither)
    top = hook.counts[max_len]
    observed = int((top > 0).sum())
    visits = float(top.sum()) / max(observed, 1)
    if observed == 0 or visits < 100:
        raise UndersamplingError(
            f"length-{max_len} words average {visits:.1f} visits; need >= 100"
        )
    ys = []
    for L in range(1, max_len + 1):
        c = hook.counts[L]
        p = c[c > 0] / c.sum()
        ys.append(float(-(p * np.log(p)).sum()))
    ls = np.arange(1, max_len + 1, dtype=float)
    if max_len == 1:
        rate = ys[0]
    else:
        rate = float(np.polyfit(ls, ys, 1)[0])
    return EntropyEstimate(rate, tuple(range(1, max_len + 1)), tuple(ys), visits)


# -- invariance diagnostic ----------------------------------------------


def invariance_gap(m: MapSpec, em: EmpiricalMeasure) -> float:
    """L1 distance between the histogram and its one-step pushforward.

    Each nonzero cell's mass is carried by the image of the cell center
    (with the perturbing boundary policy) and rebinned on the same grid.
    Always <= 2; near 0 for a measure invariant at grid resolution.
    """
    eng = OrbitEngine(m)
    cx, cy = em.cell_centers()
    ii, jj = np.nonzero(em.weights)
    if ii.size == 0:
        raise ValidationError("empty histogram")
    x1 = cx[ii]
    x2 = cy[jj]
    mass = em.weights[ii, jj]
    y1, y2, _, _ = eng.step(x1, x2)
    x0, y0b, xb, yb = em.bbox
    np.clip(y1, x0, xb, out=y1)
    np.clip(y2, y0b, yb, out=y2)
    ix = np.clip(((y1 - x0) / (xb - x0) * em.nx).astype(np.int64), 0, em.nx - 1)
    iy = np.clip(((y2 - y0b) / (yb - y0b) * em.ny).astype(np.int64), 0, em.ny - 1)
    pushed = np.zeros((em.nx, em.ny))
    np.add.at(pushed, (ix, iy), mass)
    return float(np.abs(pushed - em.weights).sum())


# -- correlation decay --------------------------------------------------


class _CorrelationHook(_Hook):
    def __init__(self, phi, psi, max_lag, burn_in):
        self.phi, self.psi = phi, psi
        self.max_lag, self.burn_in = max_lag, burn_in
        self.ring: np.ndarray | None = None
        self.cross = np.zeros(max_lag + 1)
        self.count = np.zeros(max_lag + 1, dtype=np.int64)
        self.sum_phi = 0.0
        self.sum_psi = 0.0
        self.n_obs = 0

    def observe(self, k, x1, x2):
        if k < self.burn_in:
            return
        t = k - self.burn_in
        nl = self.max_lag + 1
        if self.ring is None:
            self.ring = np.zeros((nl, x1.size))
        phi = self.phi(x1, x2)
        psi = self.psi(x1, x2)
        self.ring[t % nl] = psi
        self.sum_phi += float(phi.sum())
        self.sum_psi += float(psi.sum())
        self.n_obs += phi.size
        for n in range(min(t, self.max_lag) + 1):
            past = self.ring[(t - n) % nl]
            self.cross[n] += float(phi @ past)
            self.count[n] += phi.size

    def covariances(self) -> np.ndarray:
        mean_phi = self.sum_phi / self.n_obs
        mean_psi = self.sum_psi / self.n_obs
        return self.cross / self.count - mean_phi * mean_psi


@dataclass(frozen=True)
class CorrelationReport:
    """Fitted exponential decay of an empirical covariance sequence."""

    lags: tuple[int, ...]
    covariances: tuple[float, ...]
    theta_fit: float
    fit_quality: float
    observables: str
    noise_floor: float
    orbit_length: int
    ergodicity_assumed: bool = True

    def to_dict(self) -> dict:
        return {
            "lags": list(self.lags),
            "covariances": list(self.covariances),
            "theta_fit": self.theta_fit,
            "fit_quality": self.fit_quality,
            "observables": self.observables,
            "noise_floor": self.noise_floor,
            "orbit_length": self.orbit_length,
            "ergodicity_assumed": self.ergodicity_assumed,
        }


def correlation_covariances(
    m: MapSpec,
    phi: Observable,
    psi: Observable,
    orbit_length: int,
    max_lag: int,
    seed: int = 0,
    burn_in: int = 1_000,
    dither: float | None = None,
) -> np.ndarray:
    """Empirical centred covariances C(n) = <phi o f^n . psi> - <phi><psi>
    for n = 0..max_lag, pooled over an ensemble of long orbits whose
    lengths sum to ``orbit_length``."""
    if max_lag < 1:
        raise ParameterError("max_lag must be >= 1")
    if orbit_length < 100 * max_lag:
        raise ValidationError(
            f"orbit_length must be >= 100*max_lag = {100 * max_lag}"
        )
    n_orbits = max(1, min(2000, orbit_length // 5_000))
    steps = orbit_length // n_orbits + burn_in
    eng = OrbitEngine(m)
    rng = np.random.default_rng(np.random.Philox(key=[seed, 3]))
    x1, x2 = eng.sample_domain(n_orbits, rng)
    hook = _CorrelationHook(phi, psi, max_lag, burn_in)
    _run(m, (x1, x2), steps, seed, [hook], dither)
    return hook.covariances()


def correlation_decay(
    m: MapSpec,
    phi: Observable,
    psi: Observable,
    orbit_length: int,
    max_lag: int,
    seed: int = 0,
    burn_in: int = 1_000,
    dither: float | None = None,
) -> CorrelationReport:
    """Fit log|C(n)| over the lags whose covariance exceeds the noise
    floor 3/sqrt(orbit_length); report theta_fit = exp(slope).

    Raises DegenerateFitError when fewer than 5 lags are usable.  The
    ergodicity of the invariant measure is assumed, not verified; the
    report records that.
    """
    cov = correlation_covariances(
        m, phi, psi, orbit_length, max_lag, seed, burn_in, dither
    )
    floor = 3.0 / math.sqrt(orbit_length)
    lags = np.arange(1, max_lag + 1)
    usable = np.abs(cov[1:]) > floor
    if usable.sum() < 5:
        raise DegenerateFitError(
            f"only {int(usable.sum())} lags exceed the noise floor {floor:g}"
        )
    xs = lags[usable].astype(float)
    ys = np.log(np.abs(cov[1:][usable]))
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 0.0
    return CorrelationReport(
        lags=tuple(range(max_lag + 1)),
        covariances=tuple(float(c) for c in cov),
        theta_fit=float(np.exp(slope)),
        fit_quality=r2,
        observables=f"phi={phi.describe()}, psi={psi.describe()}",
        noise_floor=floor,
        orbit_length=orbit_length,
    )


# -- exports ------------------------------------------------------------


def histogram_csv(em: EmpiricalMeasure) -> str:
    """CSV dump (i, j, x_center, y_center, weight) of the nonzero cells."""
    cx, cy = em.cell_centers()
    lines = ["i,j,x_center,y_center,weight"]
    ii, jj = np.nonzero(em.weights)
    for i, j in zip(ii, jj):
        lines.append(
            f"{i},{j},{float(cx[i])!r},{float(cy[j])!r},{float(em.weights[i, j])!r}"
        )
    return "\n".join(lines) + "\n"


def density_csv(d: Density1D) -> str:
    lines = ["center,weight"]
    for c, w in zip(d.centers(), d.weights):
        lines.append(f"{float(c)!r},{float(w)!r}")
    return "\n".join(lines) + "\n"


def heatmap_pgm(em: EmpiricalMeasure) -> bytes:
    """Binary 8-bit PGM, row-major from the top row, max weight = 255."""
    w = em.weights
    peak = w.max()
    img = np.zeros((em.ny, em.nx), dtype=np.uint8)
    if peak > 0:
        img = np.round(w.T[::-1] / peak * 255).astype(np.uint8)
    header = f"P5\n{em.nx} {em.ny}\n255\n".encode()
    return header + img.tobytes()

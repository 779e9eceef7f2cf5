"""Numerical transversality certificates for admissible power series.

An admissible series is g(x) = 1 + sum b_k x^k with every |b_k| <= C.
For n in {2, 3, 4} the comparison function

    h_n(x) = 1 - C (x - 2 x^(n+1)) / (1 - x)

and the bound f_n(x) = (1 - x)/(x - 2 x^(n+1)) control the family: on the
region {0 < x < Q_n, C < f_n(x)} one certifies a constant delta > 0 with
h_n >= delta and h_n' <= -delta, which forces every admissible g with
g(x) <= delta to have g'(x) <= -delta.  From such a certificate, the set
of arguments where a unit-leading-coefficient series is r-small has
length at most 2 delta^-1 q0^-l r.

delta is certified on a lattice with a first-order safety margin rather
than by interval arithmetic; the margin uses an analytic bound on the
second derivative over the region.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CertificationError,
    EmptyRegionError,
    ParameterError,
    ValidationError,
)

#: Right endpoints Q_n of the certified intervals, by condition index.
Q_N = {2: 0.5, 3: 0.61, 4: 0.68}

#: Certificates with delta below this floor are unusable (double-precision noise).
DELTA_FLOOR = 1e-12


def _check_n(n: int) -> None:
    if n not in Q_N:
        raise ParameterError(f"n must be one of {sorted(Q_N)}, got {n}")


def eval_f_n(n: int, x: float) -> float:
    """The bound f_n(x) = (1-x)/(x - 2x^(n+1)) on (0, 2^(-1/n))."""
    _check_n(n)
    if not 0.0 < x < 1.0:
        raise ParameterError(f"x must lie in (0,1), got {x}")
    den = x - 2.0 * x ** (n + 1)
    if den <= 0.0:
        raise ParameterError(f"f_{n} undefined at x={x}: denominator {den:g} <= 0")
    return (1.0 - x) / den


def eval_h_n(n: int, C: float, x: float) -> tuple[float, float]:
    """Value and derivative of h_n(x) = 1 - C (x - 2x^(n+1))/(1-x)."""
    _check_n(n)
    if not 0.0 < x < 1.0:
        raise ParameterError(f"x must lie in (0,1), got {x}")
    num = x - 2.0 * x ** (n + 1)
    den = 1.0 - x
    value = 1.0 - C * num / den
    dnum = 1.0 - 2.0 * (n + 1) * x**n
    dphi = (dnum * den + num) / den**2
    return value, -C * dphi


def _h_second_derivative(n: int, C: float, x: np.ndarray) -> np.ndarray:
    # phi'' = (-2n(n+1) x^(n-1) (1-x)^2 + 2 psi) / (1-x)^3,
    # psi = 1 - 2(n+1)x^n + 2n x^(n+1)
    psi = 1.0 - 2.0 * (n + 1) * x**n + 2.0 * n * x ** (n + 1)
    phi2 = (-2.0 * n * (n + 1) * x ** (n - 1) * (1.0 - x) ** 2 + 2.0 * psi) / (
        1.0 - x
    ) ** 3
    return -C * phi2


@dataclass(frozen=True)
class SeriesSpec:
    """A finitely truncated admissible series: g(x) = 1 + sum b_k x^k."""

    coeffs: tuple[float, ...]
    C: float

    def __post_init__(self):
        if self.C < 1.0:
            raise ParameterError(f"C must be >= 1, got {self.C}")
        if not self.coeffs:
            raise ValidationError("series needs at least one coefficient")
        if max(abs(b) for b in self.coeffs) > self.C + 1e-15:
            raise ValidationError("coefficients exceed the bound C")

    @property
    def truncation(self) -> int:
        return len(self.coeffs)

    def evaluate(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """g(x) and g'(x) termwise at the truncation order."""
        x = np.asarray(x, dtype=float)
        k = np.arange(1, len(self.coeffs) + 1)
        b = np.asarray(self.coeffs)
        pk = x[..., None] ** (k - 1)
        g = 1.0 + (pk * x[..., None]) @ b
        dg = pk @ (k * b)
        return g, dg

    def tail_bound(self, x: np.ndarray) -> np.ndarray:
        """Bound on the truncation error of g and g': C x^(T+1) (T+1)/(1-x)^2."""
        x = np.asarray(x, dtype=float)
        t = self.truncation
        return self.C * x ** (t + 1) * (t + 1) / (1.0 - x) ** 2


def random_series(rng: np.random.Generator, degree: int, C: float) -> SeriesSpec:
    """An admissible series with i.i.d. uniform coefficients in [-C, C]."""
    return SeriesSpec(tuple(rng.uniform(-C, C, degree)), C)


@dataclass(frozen=True)
class TransversalityCert:
    """A certified transversality constant for one (n, C) pair.

    On every lattice point of the region {grid_step <= x <= Q_n - grid_step,
    C < f_n(x)}: h_n(x) >= delta and h_n'(x) <= -delta.
    """

    n: int
    C: float
    Q_n: float
    delta: float
    grid_step: float
    region: tuple[float, float]
    region_description: str = field(default="", compare=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "C": self.C,
            "Q_n": self.Q_n,
            "delta": self.delta,
            "grid_step": self.grid_step,
        }


def region_grid(n: int, C: float, grid_step: float) -> np.ndarray:
    """Lattice points x = j*grid_step inside [grid_step, Q_n - grid_step]
    with C < f_n(x)."""
    _check_n(n)
    q = Q_N[n]
    j = np.arange(1, int(np.floor((q - grid_step) / grid_step)) + 1)
    x = j * grid_step
    x = x[x <= q - grid_step * (1 - 1e-12)]
    den = x - 2.0 * x ** (n + 1)
    f = np.where(den > 0, (1.0 - x) / np.where(den > 0, den, 1.0), np.inf)
    return x[C < f]


def compute_delta(n: int, C: float, grid_step: float = 1e-4) -> TransversalityCert:
    """Certify delta = (1 - grid_step * L) * min over the region lattice of
    min(h_n, -h_n'), with L an analytic bound on |h_n''| over the region.

    Raises EmptyRegionError when no lattice point satisfies C < f_n, and
    CertificationError when the resulting delta falls below DELTA_FLOOR.
    """
    _check_n(n)
    if C < 1.0:
        raise ParameterError(f"C must be >= 1, got {C}")
    if not 0.0 < grid_step <= 1e-4:
        raise ParameterError(f"grid_step must lie in (0, 1e-4], got {grid_step}")
    x = region_grid(n, C, grid_step)
    if x.size == 0:
        raise EmptyRegionError(
            f"no lattice point of (0, {Q_N[n]}) satisfies C < f_{n} for C={C:g}"
        )
    h, dh = eval_h_n_vec(n, C, x)
    raw = float(np.minimum(h, -dh).min())
    L = float(np.abs(_h_second_derivative(n, C, x)).max())
    safety = grid_step * L
    delta = (1.0 - safety) * raw
    if not delta > DELTA_FLOOR:
        raise CertificationError(
            f"delta {delta:g} below the usability floor {DELTA_FLOOR:g} "
            f"for (n={n}, C={C:g})"
        )
    return TransversalityCert(
        n=n,
        C=C,
        Q_n=Q_N[n],
        delta=delta,
        grid_step=grid_step,
        region=(float(x[0]), float(x[-1])),
        region_description=f"{{x in (0, {Q_N[n]}) : {C:g} < f_{n}(x)}}",
    )


def eval_h_n_vec(n: int, C: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised value and derivative of h_n."""
    _check_n(n)
    x = np.asarray(x, dtype=float)
    num = x - 2.0 * x ** (n + 1)
    den = 1.0 - x
    value = 1.0 - C * num / den
    dnum = 1.0 - 2.0 * (n + 1) * x**n
    dphi = (dnum * den + num) / den**2
    return value, -C * dphi


@dataclass(frozen=True)
class ImplicationReport:
    """Outcome of checking one admissible series against a certificate."""

    checked_points: int
    counterexamples: tuple[tuple[float, float, float], ...]  # (x, g, g')

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def verify_implication(
    cert: TransversalityCert,
    s: SeriesSpec,
    samples: int = 64,
    tol: float = 1e-9,
) -> ImplicationReport:
    """Check 'g(x) <= delta implies g'(x) <= -delta' on sample points of the
    certified region.

    A counterexample is an x with g(x) <= delta - tol_eff and
    g'(x) > -delta + tol_eff, where tol_eff adds the series truncation
    tail bound to ``tol``.  For series with s.C <= cert.C none is expected.
    """
    if s.C > cert.C + 1e-15:
        raise ValidationError(f"series bound C={s.C:g} exceeds certificate C={cert.C:g}")
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    lo, hi = cert.region
    x = np.linspace(lo, hi, samples)
    g, dg = s.evaluate(x)
    tol_eff = tol + s.tail_bound(x)
    bad = (g <= cert.delta - tol_eff) & (dg > -cert.delta + tol_eff)
    ces = tuple(
        (float(x[i]), float(g[i]), float(dg[i])) for i in np.nonzero(bad)[0]
    )
    return ImplicationReport(checked_points=samples, counterexamples=ces)


def corollary_interval_bound(
    cert: TransversalityCert, q0: float, l: int, r: float
) -> float:
    """Length bound 2 delta^-1 q0^-l r for the sublevel parameter set of a
    unit-leading-coefficient series."""
    if not 0.0 < q0 < cert.Q_n:
        raise ParameterError(f"q0 must lie in (0, {cert.Q_n}), got {q0}")
    if l < 1:
        raise ParameterError(f"l must be >= 1, got {l}")
    if r <= 0.0:
        raise ParameterError(f"r must be positive, got {r}")
    return 2.0 / cert.delta * q0 ** (-l) * r

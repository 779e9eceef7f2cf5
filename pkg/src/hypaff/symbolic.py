"""Itinerary coding, finite-word census with growth rate, and the power
series recovering the contracting coordinate from a backward itinerary.

A point's itinerary records the piece index of each iterate.  The
realized words of length L are exactly the nonempty depth-(L-1) cells of
the refined partition.  A point of the attractor with backward itinerary
(i_{-1}, i_{-2}, ...) has contracting coordinate

    x1 = sum_{n>=1} (prod_{m=1}^{n-1} t lam_{i_{-m}}) u_{i_{-n}},

a geometric-tailed series; all evaluations here are finite truncations
with explicit analytic tail bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundaryError,
    InsufficientPastError,
    ParameterError,
    ValidationError,
)
from .geometry import Point
from .map_core import MapSpec
from .partition import DEFAULT_CELL_CAP, initial_partition, refine_once


@dataclass(frozen=True)
class Word:
    """A finite symbol word <i_l ... i_m>; ``offset`` is the position l of
    the first symbol (0 for forward itineraries, negative for pasts)."""

    symbols: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        if not self.symbols:
            raise ValidationError("a word needs at least one symbol")
        if any(s < 1 for s in self.symbols):
            raise ValidationError("symbols are 1-based piece indices")

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class WordCensus:
    """Number of realized words at one length, with the empirical
    exponential growth rate fitted over shorter lengths."""

    length: int
    count: int
    fitted_rate: float
    counts_by_length: tuple[int, ...]


def itinerary_of(m: MapSpec, p: Point, length: int) -> Word:
    """Forward itinerary of ``p``: the piece index of each of the first
    ``length`` iterates.

    Raises BoundaryError (carrying the failing step) when an iterate is
    within the geometric tolerance of the boundary set.
    """
    if length < 1:
        raise ParameterError("length must be >= 1")
    syms = []
    cur = p
    for k in range(length):
        i = m.piece_of(cur)
        if i is None:
            raise BoundaryError(
                f"iterate {k} of ({p.x:g}, {p.y:g}) hits the boundary set", step=k
            )
        syms.append(i)
        if k + 1 < length:
            x, y = m.pieces[i - 1].apply(cur.x, cur.y)
            cur = Point(x, y)
    return Word(tuple(syms), offset=0)


def enumerate_words(
    m: MapSpec, length: int, cell_cap: int = DEFAULT_CELL_CAP
) -> tuple[WordCensus, list[Word]]:
    """All realized itinerary words of the given length, via the refined
    partition, plus the census with the fitted growth rate.

    The rate is the least-squares slope of log(count) against length,
    restricted to lengths >= 3 when enough lengths are available.
    """
    if length < 1:
        raise ParameterError("length must be >= 1")
    z = initial_partition(m)
    counts = [z.n_cells]
    for _ in range(length - 1):
        z = refine_once(m, z, cell_cap)
        counts.append(z.n_cells)
    lengths = np.arange(1, length + 1, dtype=float)
    logc = np.log(counts)
    if length >= 4:
        fit_from = 2  # lengths 3..length
    else:
        fit_from = 0
    if length - fit_from >= 2:
        rate = float(np.polyfit(lengths[fit_from:], logc[fit_from:], 1)[0])
    else:
        rate = float("nan")
    words = [Word(c.word) for c in z.cells]
    return WordCensus(length, z.n_cells, rate, tuple(counts)), words


def map_series_params(m: MapSpec) -> tuple[list[float], list[float]]:
    """(lambdas_by_symbol, us_by_symbol) in 1-based symbol order."""
    return [p.lam for p in m.pieces], [p.u for p in m.pieces]


def stable_coordinate(
    lambdas_by_symbol: list[float],
    us_by_symbol: list[float],
    t: float,
    past: Word,
    truncation: int,
) -> tuple[float, float]:
    """Truncated series for the contracting coordinate of the point with
    the given backward itinerary (most recent symbol first).

    Returns (partial sum over the first ``truncation`` terms, tail bound
    max|u| (t lam_max)^truncation / (1 - t lam_max)).
    """
    lams = np.asarray(lambdas_by_symbol, dtype=float)
    us = np.asarray(us_by_symbol, dtype=float)
    if truncation < 1:
        raise ParameterError("truncation must be >= 1")
    tl_max = t * float(lams.max())
    if not 0.0 <= tl_max < 1.0:
        raise ParameterError(f"need 0 <= t*max(lam) < 1, got {tl_max:g}")
    if len(past) < truncation:
        raise InsufficientPastError(
            f"past supplies {len(past)} symbols, truncation needs {truncation}"
        )
    sym = np.asarray(past.symbols[:truncation], dtype=int) - 1
    if sym.min() < 0 or sym.max() >= lams.size:
        raise ValidationError("past contains symbols outside 1..a")
    lam_seq = t * lams[sym]
    prefix = np.concatenate([[1.0], np.cumprod(lam_seq[:-1])])
    x1 = float(prefix @ us[sym])
    u_max = float(np.abs(us).max())
    bound = u_max * tl_max**truncation / (1.0 - tl_max)
    return x1, bound


def separation_series(
    past_a: Word,
    past_b: Word,
    lambdas_by_symbol: list[float],
    us_by_symbol: list[float],
    t: float,
    truncation: int,
) -> tuple[float, float]:
    """|x1(past_a) - x1(past_b)| with a combined truncation tail bound.

    The pasts must have equal length and either coincide (separation 0)
    or share a common prefix and then branch; the branching depth is
    where the series terms start to differ.
    """
    if len(past_a) != len(past_b):
        raise ValidationError("pasts must have equal length")
    a, bound_a = stable_coordinate(lambdas_by_symbol, us_by_symbol, t, past_a, truncation)
    b, bound_b = stable_coordinate(lambdas_by_symbol, us_by_symbol, t, past_b, truncation)
    return abs(a - b), bound_a + bound_b


def branching_depth(past_a: Word, past_b: Word) -> int:
    """Length of the shared prefix of two pasts (the L with branching at
    position L+1).  Raises when the pasts never branch."""
    if len(past_a) != len(past_b):
        raise ValidationError("pasts must have equal length")
    for i, (s, r) in enumerate(zip(past_a.symbols, past_b.symbols)):
        if s != r:
            return i
    raise ValidationError("pasts coincide; no branching position")


def words_to_json(words: list[Word]) -> list[list[int]]:
    return [list(w.symbols) for w in words]


def census_csv(census: WordCensus) -> str:
    lines = ["length,count"]
    for length, count in enumerate(census.counts_by_length, start=1):
        lines.append(f"{length},{count}")
    return "\n".join(lines) + "\n"

"""Closed-form signal recovery from structured intensity measurements.

Real signals: fix the first nonzero entry at the positive square root of its
intensity, then each remaining entry follows from one difference measurement.

Complex signals, two stages: first place two anchor entries from four scalars
(their two intensities plus the sum and i-weighted measurements on the pair),
which pins the global phase and kills the reflection ambiguity; then every
other support entry solves an independent 2x2 linear system built from its
squared distances to the origin and to both anchors.

The `measure` argument everywhere is an oracle: a callable mapping one
structured MeasurementVector to its (possibly noisy) intensity. Oracles built
from a signal answer adaptively; oracles built from a MeasurementSet answer
from the prefilled table and raise MissingMeasurement on anything else.
Per-sensor solves are pure and independent; processing order does not affect
the result, so they can be fanned out to parallel workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import (
    Coord,
    Dense,
    Diff,
    DiffImag,
    MeasurementSet,
    MeasurementVector,
    Sum,
    intensity_value,
)
from .errors import (
    CollinearAnchors,
    MissingMeasurement,
    NonpositiveMagnitude,
    SingularSystem,
    UnstructuredVector,
)


@dataclass(frozen=True)
class RecoveryOptions:
    zero_tol: float = 0.0        # support threshold on coordinate intensities
    collinear_tol: float = 1e-8  # relative determinant threshold for anchor solves
    clamp_negatives: bool = True
    retry_anchor_pairs: bool = False  # on collinear anchors, try later support
                                      # indices as the second anchor

    def __post_init__(self):
        if self.zero_tol < 0:
            raise ValueError("zero_tol must be >= 0")
        if self.collinear_tol <= 0:
            raise ValueError("collinear_tol must be > 0")


@dataclass(frozen=True)
class Anchors:
    """The two placed anchor entries; x1 is a positive real by construction."""

    j1: int
    j2: int
    x1: complex
    x2: complex


def detect_support(coord_vals, zero_tol: float = 0.0):
    """1-based indices whose coordinate intensity exceeds zero_tol, ascending."""
    return [j + 1 for j, w in enumerate(coord_vals) if w > zero_tol]


def recover_real(coord_vals, diff_vals, opts: RecoveryOptions | None = None) -> np.ndarray:
    """Recover a real signal from coordinate intensities and anchor differences.

    diff_vals maps each support index k (except the first) to the intensity
    of the difference against the first support index. The output matches the
    true signal up to a global sign; entries off support are zero.
    """
    opts = opts or RecoveryOptions()
    coord_vals = np.asarray(coord_vals, dtype=np.float64)
    n = coord_vals.size
    support = detect_support(coord_vals, opts.zero_tol)
    x = np.zeros(n, dtype=np.complex128)
    if not support:
        return x
    j1 = support[0]
    w1 = coord_vals[j1 - 1]
    if opts.clamp_negatives:
        w1 = max(w1, 0.0)
    a1 = math.sqrt(w1)
    x[j1 - 1] = a1
    for jk in support[1:]:
        if jk not in diff_vals:
            raise MissingMeasurement(f"difference against index {jk} not supplied")
        x[jk - 1] = (w1 + coord_vals[jk - 1] - diff_vals[jk]) / (2.0 * a1)
    return x


def recover_anchors(w1: float, w2: float, z_plus: float, z_cross: float,
                    opts: RecoveryOptions | None = None, *,
                    j1: int = 1, j2: int = 2) -> Anchors:
    """Place the first two entries from four intensities, up to global phase.

    w1, w2 are the entries' own intensities; z_plus and z_cross are the sum
    and i-weighted pair measurements. The first entry is fixed at sqrt(w1)
    (positive real), which pins the phase; z_cross then resolves the sign of
    the second entry's imaginary part, removing the reflection ambiguity.
    """
    opts = opts or RecoveryOptions()
    if opts.clamp_negatives:
        w1 = max(w1, 0.0)
    if w1 <= 0.0:
        raise NonpositiveMagnitude(f"first anchor intensity must be positive, got {w1}")
    a1 = math.sqrt(w1)
    a2 = (z_plus - w1 - w2) / (2.0 * a1)
    b2 = (w1 + w2 - z_cross) / (2.0 * a1)
    scale = math.sqrt(a1 * a1 + a2 * a2 + b2 * b2)
    if abs(b2) <= opts.collinear_tol * scale:
        raise CollinearAnchors(
            f"anchor pair is collinear with the origin (|b2|={abs(b2):.3e}, scale={scale:.3e})"
        )
    return Anchors(j1=j1, j2=j2, x1=complex(a1), x2=complex(a2, b2))


def recover_sensor(anchors: Anchors, d_self: float, d_first: float, d_second: float,
                   collinear_tol: float = 1e-8) -> complex:
    """Locate one entry from its squared distances to the origin and both anchors.

    Solves the 2x2 linear system in the entry's real and imaginary parts by
    direct elimination; with the first anchor real, the real part comes from
    the first equation alone. The determinant check mirrors the anchor
    construction, so anchors that passed it never trip SingularSystem here.
    """
    a1 = anchors.x1.real
    a2, b2 = anchors.x2.real, anchors.x2.imag
    scale = math.sqrt(a1 * a1 + a2 * a2 + b2 * b2)
    if a1 <= 0.0 or abs(b2) <= collinear_tol * scale:
        raise SingularSystem("anchor determinant too small for the 2x2 solve")
    w1 = a1 * a1
    w2 = a2 * a2 + b2 * b2
    aj = (w1 + d_self - d_first) / (2.0 * a1)
    bj = ((w2 + d_self - d_second) / 2.0 - a2 * aj) / b2
    return complex(aj, bj)


def recover_complex(measure, n: int, opts: RecoveryOptions | None = None) -> np.ndarray:
    """Full two-stage recovery through a measurement oracle.

    Queries the n coordinate intensities, detects the support of size s, and
    (for s >= 2) makes exactly 2s - 2 further queries: the anchor pair's sum
    and i-weighted measurements, then two differences per remaining support
    index. Raises CollinearAnchors if the anchor pair is collinear with the
    origin, unless opts.retry_anchor_pairs allows trying later indices as the
    second anchor (extra queries).
    """
    opts = opts or RecoveryOptions()
    coord_vals = [float(measure(Coord(j))) for j in range(1, n + 1)]
    support = detect_support(coord_vals, opts.zero_tol)
    x = np.zeros(n, dtype=np.complex128)
    s = len(support)
    if s == 0:
        return x
    j1 = support[0]
    w1 = coord_vals[j1 - 1]
    if s == 1:
        x[j1 - 1] = math.sqrt(max(w1, 0.0) if opts.clamp_negatives else w1)
        return x

    anchors = None
    second_candidates = support[1:] if opts.retry_anchor_pairs else support[1:2]
    for jm in second_candidates:
        try:
            anchors = recover_anchors(
                w1,
                coord_vals[jm - 1],
                float(measure(Sum(j1, jm))),
                float(measure(DiffImag(j1, jm))),
                opts,
                j1=j1,
                j2=jm,
            )
        except CollinearAnchors:
            if jm == second_candidates[-1]:
                raise
            continue
        break

    x[anchors.j1 - 1] = anchors.x1
    x[anchors.j2 - 1] = anchors.x2
    for jk in support:
        if jk == anchors.j1 or jk == anchors.j2:
            continue
        d_first = float(measure(Diff(min(anchors.j1, jk), max(anchors.j1, jk))))
        d_second = float(measure(Diff(min(anchors.j2, jk), max(anchors.j2, jk))))
        x[jk - 1] = recover_sensor(anchors, coord_vals[jk - 1], d_first, d_second,
                                   opts.collinear_tol)
    return x


def recover_real_adaptive(measure, n: int, opts: RecoveryOptions | None = None) -> np.ndarray:
    """Real-signal recovery through the oracle: n + s - 1 queries for s >= 1."""
    opts = opts or RecoveryOptions()
    coord_vals = np.array([float(measure(Coord(j))) for j in range(1, n + 1)])
    support = detect_support(coord_vals, opts.zero_tol)
    if not support:
        return np.zeros(n, dtype=np.complex128)
    j1 = support[0]
    diff_vals = {jk: float(measure(Diff(j1, jk))) for jk in support[1:]}
    return recover_real(coord_vals, diff_vals, opts)


# --- measurement oracles ------------------------------------------------------

def oracle_from_signal(x: np.ndarray):
    """Adaptive oracle evaluating any structured (or dense) vector on x exactly."""
    x = np.asarray(x, dtype=np.complex128)

    def measure(vec: MeasurementVector) -> float:
        return intensity_value(vec, x)

    return measure


def noisy_oracle_from_signal(x: np.ndarray, sigma: float, seed: int):
    """Adaptive oracle adding one N(0, sigma^2) draw per distinct vector.

    Repeated queries of the same vector return the same value. Noise draws
    follow query order, so the oracle is deterministic for a fixed query
    sequence and seed.
    """
    x = np.asarray(x, dtype=np.complex128)
    rng = np.random.default_rng(seed)
    seen: dict = {}

    def measure(vec: MeasurementVector) -> float:
        if isinstance(vec, Dense):
            raise UnstructuredVector("noisy oracle serves structured vectors only")
        if vec not in seen:
            seen[vec] = intensity_value(vec, x) + sigma * rng.standard_normal()
        return seen[vec]

    return measure


def oracle_from_measurement_set(mset: MeasurementSet):
    """Table-backed oracle over the prefilled values of a measurement set."""
    table = {}
    for vec, val in zip(mset.ensemble.vectors, mset.values):
        if not isinstance(vec, Dense):
            table[vec] = float(val)

    def measure(vec: MeasurementVector) -> float:
        try:
            return table[vec]
        except (KeyError, TypeError):
            raise MissingMeasurement(f"{vec!r} is not in the measurement set") from None

    return measure


def counting_oracle(measure):
    """Wrap an oracle so every query is counted; returns (oracle, counter)."""
    counter = {"queries": 0}

    def counted(vec: MeasurementVector) -> float:
        counter["queries"] += 1
        return measure(vec)

    return counted, counter

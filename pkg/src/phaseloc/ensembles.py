"""Measurement vectors, deterministic ensemble constructions, and forward maps.

A measurement vector is either structured (coordinate, pairwise difference,
pairwise sum, or difference with an i-weighted second index) or a dense
complex vector. Structured vectors are evaluated by index arithmetic in O(1)
per measurement and are never materialized densely on the recovery path.

Inner-product convention: <phi, x> = sum_j conj(phi_j) x_j, conjugation on
the measurement vector. Fixed so that DiffImag(j, k) measures |x_j + i x_k|^2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadSupport,
    DimensionMismatch,
    DimensionTooSmall,
    UnstructuredVector,
)

KIND_REAL_FULL = "real_full"
KIND_REAL_SPARSE = "real_sparse"
KIND_COMPLEX_FULL = "complex_full"
KIND_COMPLEX_SPARSE_STAGE = "complex_sparse_stage"
KIND_GAUSSIAN = "gaussian"
KIND_CUSTOM = "custom"


@dataclass(frozen=True, slots=True)
class Coord:
    """e_k: intensity is |x_k|^2. Indices are 1-based."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise DimensionMismatch(f"coord index must be >= 1, got {self.k}")


@dataclass(frozen=True, slots=True)
class Diff:
    """e_j - e_k: intensity is |x_j - x_k|^2. Stored with j < k."""

    j: int
    k: int

    def __post_init__(self):
        if self.j == self.k or self.j < 1 or self.k < 1:
            raise DimensionMismatch(f"bad diff indices ({self.j}, {self.k})")
        if self.j > self.k:
            # symmetric in (j, k); canonical order keeps equality simple
            j, k = self.k, self.j
            object.__setattr__(self, "j", j)
            object.__setattr__(self, "k", k)


@dataclass(frozen=True, slots=True)
class Sum:
    """e_j + e_k: intensity is |x_j + x_k|^2."""

    j: int
    k: int

    def __post_init__(self):
        if self.j == self.k or self.j < 1 or self.k < 1:
            raise DimensionMismatch(f"bad sum indices ({self.j}, {self.k})")


@dataclass(frozen=True, slots=True)
class DiffImag:
    """e_j - i e_k: intensity is |x_j + i x_k|^2. Order of (j, k) matters."""

    j: int
    k: int

    def __post_init__(self):
        if self.j == self.k or self.j < 1 or self.k < 1:
            raise DimensionMismatch(f"bad indices ({self.j}, {self.k})")


@dataclass(frozen=True, eq=False)
class Dense:
    """Arbitrary complex measurement vector of the ambient dimension."""

    vec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vec", np.asarray(self.vec, dtype=np.complex128))


MeasurementVector = Coord | Diff | Sum | DiffImag | Dense

STRUCTURED = (Coord, Diff, Sum, DiffImag)


def max_index(vec: MeasurementVector) -> int:
    if isinstance(vec, Coord):
        return vec.k
    if isinstance(vec, (Diff, Sum, DiffImag)):
        return max(vec.j, vec.k)
    return vec.vec.size


def inner_product(vec: MeasurementVector, x: np.ndarray) -> complex:
    """<phi, x> for one measurement vector (conjugation on phi)."""
    if isinstance(vec, Coord):
        return complex(x[vec.k - 1])
    if isinstance(vec, Diff):
        return complex(x[vec.j - 1] - x[vec.k - 1])
    if isinstance(vec, Sum):
        return complex(x[vec.j - 1] + x[vec.k - 1])
    if isinstance(vec, DiffImag):
        return complex(x[vec.j - 1] + 1j * x[vec.k - 1])
    return complex(np.vdot(vec.vec, x))


def intensity_value(vec: MeasurementVector, x: np.ndarray) -> float:
    """|<phi, x>|^2 for one measurement vector."""
    v = inner_product(vec, x)
    return v.real * v.real + v.imag * v.imag


def to_dense(vec: MeasurementVector, n: int) -> np.ndarray:
    """Materialize a measurement vector as a dense length-n array."""
    if isinstance(vec, Dense):
        if vec.vec.size != n:
            raise DimensionMismatch(f"dense vector has length {vec.vec.size}, expected {n}")
        return vec.vec.copy()
    out = np.zeros(n, dtype=np.complex128)
    if isinstance(vec, Coord):
        out[vec.k - 1] = 1.0
    elif isinstance(vec, Diff):
        out[vec.j - 1] = 1.0
        out[vec.k - 1] = -1.0
    elif isinstance(vec, Sum):
        out[vec.j - 1] = 1.0
        out[vec.k - 1] = 1.0
    else:
        out[vec.j - 1] = 1.0
        out[vec.k - 1] = -1j
    return out


@dataclass(frozen=True)
class Ensemble:
    """Ordered collection of measurement vectors over an ambient dimension."""

    vectors: tuple
    kind: str
    n: int

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        if len(self.vectors) == 0:
            raise DimensionMismatch("ensemble must contain at least one vector")
        for vec in self.vectors:
            if max_index(vec) > self.n or (isinstance(vec, Dense) and vec.vec.size != self.n):
                raise DimensionMismatch(f"vector {vec!r} inconsistent with n={self.n}")

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class MeasurementSet:
    """Intensity values aligned with an ensemble, plus the noise level used."""

    ensemble: Ensemble
    values: np.ndarray
    sigma: float = 0.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.size != len(self.ensemble):
            raise DimensionMismatch(
                f"{vals.size} values for an ensemble of size {len(self.ensemble)}"
            )

    @property
    def has_negative_values(self) -> bool:
        return bool(np.any(self.values < 0.0))

    def clamped(self) -> np.ndarray:
        """Values with negatives (noise artifacts) clamped to zero."""
        return np.maximum(self.values, 0.0)


def build_real_full(n: int) -> Ensemble:
    """Coordinate vectors plus all differences against index 1; size 2n - 1."""
    if n < 1:
        raise DimensionTooSmall(f"n must be >= 1, got {n}")
    vectors = [Coord(k) for k in range(1, n + 1)]
    vectors += [Diff(1, j) for j in range(2, n + 1)]
    return Ensemble(tuple(vectors), KIND_REAL_FULL, n)


def build_real_stage2(n: int, support) -> Ensemble:
    """Differences of support entries against the first support index; size s - 1."""
    support = _checked_support(n, support, minimum=2)
    j1 = support[0]
    vectors = [Diff(j1, jk) for jk in support[1:]]
    return Ensemble(tuple(vectors), KIND_REAL_SPARSE, n)


def build_complex_full(n: int) -> Ensemble:
    """Coordinates, the (1,2) sum/imag pair, and differences to 1 and 2; size 3n - 2."""
    if n < 2:
        raise DimensionTooSmall(f"complex construction needs n >= 2, got {n}")
    vectors = [Coord(k) for k in range(1, n + 1)]
    vectors += [Sum(1, 2), DiffImag(1, 2)]
    vectors += [Diff(1, k) for k in range(3, n + 1)]
    vectors += [Diff(2, k) for k in range(3, n + 1)]
    return Ensemble(tuple(vectors), KIND_COMPLEX_FULL, n)


def build_complex_stage2(n: int, support) -> Ensemble:
    """Second-round vectors for a known support; size 2s - 2.

    Combined with the n first-round coordinate vectors this gives n + 2s - 2
    measurements in total.
    """
    support = _checked_support(n, support, minimum=2)
    j1, j2 = support[0], support[1]
    vectors = [Sum(j1, j2), DiffImag(j1, j2)]
    for jk in support[2:]:
        vectors.append(Diff(min(j1, jk), max(j1, jk)))
        vectors.append(Diff(min(j2, jk), max(j2, jk)))
    return Ensemble(tuple(vectors), KIND_COMPLEX_SPARSE_STAGE, n)


def build_gaussian(n: int, m: int, seed: int) -> Ensemble:
    """m dense vectors with i.i.d. complex standard Gaussian entries.

    Real and imaginary parts are each N(0, 1/2), so E||phi||^2 = n.
    """
    if n < 1 or m < 1:
        raise DimensionTooSmall(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    mat = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    mat *= math.sqrt(0.5)
    return Ensemble(tuple(Dense(row) for row in mat), KIND_GAUSSIAN, n)


def _checked_support(n: int, support, minimum: int):
    support = [int(j) for j in support]
    if len(support) < minimum:
        raise BadSupport(f"support needs at least {minimum} indices, got {len(support)}")
    if len(set(support)) != len(support):
        raise BadSupport(f"support indices must be distinct: {support}")
    if any(j < 1 or j > n for j in support):
        raise BadSupport(f"support indices must lie in [1, {n}]: {support}")
    return support


def apply_intensity(ensemble: Ensemble, x: np.ndarray) -> MeasurementSet:
    """Noiseless intensity measurements |<phi_m, x>|^2 for every vector."""
    x = np.asarray(x, dtype=np.complex128)
    if x.size != ensemble.n:
        raise DimensionMismatch(f"signal length {x.size} vs ensemble dimension {ensemble.n}")
    values = np.fromiter(
        (intensity_value(vec, x) for vec in ensemble.vectors), dtype=np.float64,
        count=len(ensemble),
    )
    return MeasurementSet(ensemble, values, sigma=0.0)


def apply_complex_map(ensemble: Ensemble, x: np.ndarray) -> np.ndarray:
    """Squared (unconjugated) measurements <phi_m, x>^2, one complex per vector."""
    x = np.asarray(x, dtype=np.complex128)
    if x.size != ensemble.n:
        raise DimensionMismatch(f"signal length {x.size} vs ensemble dimension {ensemble.n}")
    return np.array([inner_product(vec, x) ** 2 for vec in ensemble.vectors])


def add_noise(mset: MeasurementSet, sigma: float, seed: int) -> MeasurementSet:
    """Perturb each intensity with independent real N(0, sigma^2) noise.

    Negative outcomes are stored as-is; consumers clamp before square roots.
    """
    if sigma < 0:
        raise DimensionMismatch(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return mset
    rng = np.random.default_rng(seed)
    noisy = mset.values + sigma * rng.standard_normal(mset.values.size)
    return MeasurementSet(mset.ensemble, noisy, sigma=float(sigma))


def measurement_matrix(ensemble: Ensemble) -> np.ndarray:
    """Dense M x n matrix A with A @ x = (<phi_m, x>)_m."""
    rows = [np.conj(to_dense(vec, ensemble.n)) for vec in ensemble.vectors]
    return np.vstack(rows)


# --- JSON encoding -----------------------------------------------------------

def vector_to_json(vec: MeasurementVector) -> dict:
    if isinstance(vec, Coord):
        return {"t": "coord", "k": vec.k}
    if isinstance(vec, Diff):
        return {"t": "diff", "j": vec.j, "k": vec.k}
    if isinstance(vec, Sum):
        return {"t": "sum", "j": vec.j, "k": vec.k}
    if isinstance(vec, DiffImag):
        return {"t": "diffimag", "j": vec.j, "k": vec.k}
    return {"t": "dense", "re": vec.vec.real.tolist(), "im": vec.vec.imag.tolist()}


def vector_from_json(obj: dict) -> MeasurementVector:
    t = obj["t"]
    if t == "coord":
        return Coord(obj["k"])
    if t == "diff":
        return Diff(obj["j"], obj["k"])
    if t == "sum":
        return Sum(obj["j"], obj["k"])
    if t == "diffimag":
        return DiffImag(obj["j"], obj["k"])
    if t == "dense":
        return Dense(np.asarray(obj["re"]) + 1j * np.asarray(obj["im"]))
    raise UnstructuredVector(f"unknown measurement vector tag {t!r}")


def ensemble_to_json(ensemble: Ensemble) -> dict:
    return {
        "kind": ensemble.kind,
        "n": ensemble.n,
        "vectors": [vector_to_json(v) for v in ensemble.vectors],
    }


def ensemble_from_json(obj: dict) -> Ensemble:
    vectors = tuple(vector_from_json(v) for v in obj["vectors"])
    return Ensemble(vectors, obj.get("kind", KIND_CUSTOM), int(obj["n"]))


def measurement_set_to_json(mset: MeasurementSet) -> dict:
    return {
        "ensemble": ensemble_to_json(mset.ensemble),
        "values": mset.values.tolist(),
        "sigma": mset.sigma,
    }


def measurement_set_from_json(obj: dict) -> MeasurementSet:
    return MeasurementSet(
        ensemble_from_json(obj["ensemble"]),
        np.asarray(obj["values"], dtype=np.float64),
        sigma=float(obj.get("sigma", 0.0)),
    )


def save_measurement_set(path, mset: MeasurementSet) -> None:
    with open(path, "w") as fh:
        json.dump(measurement_set_to_json(mset), fh)


def load_measurement_set(path) -> MeasurementSet:
    with open(path) as fh:
        return measurement_set_from_json(json.load(fh))


def save_ensemble(path, ensemble: Ensemble) -> None:
    with open(path, "w") as fh:
        json.dump(ensemble_to_json(ensemble), fh)


def load_ensemble(path) -> Ensemble:
    with open(path) as fh:
        return ensemble_from_json(json.load(fh))

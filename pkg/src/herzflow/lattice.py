"""Truncated frequency lattice, spectral vector fields, time grids, and initial data.

The discrete frequency domain is the cube of wave vectors h*(i, j, l) with
(i, j, l) in [-K, K]^3 and the zero mode removed.  Excluding the zero mode
makes every |xi|^{-1}-weighted sum finite and forces all fields to be
mean-free.  Modes are enumerated lexicographically in (i, j, l), so the mode
at row r and the mode at row n_modes-1-r are negatives of each other; every
reduction walks this fixed order, which keeps results run-to-run
deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "ParameterError",
    "LatticeMismatchError",
    "FrequencyLattice",
    "SpectralField",
    "TimeGrid",
    "Trajectory",
    "InitialDataSpec",
    "make_lattice",
    "generate_initial_data",
    "field_axpy",
    "zero_field",
    "divergence_residual",
    "hermitian_residual",
    "load_mode_list",
]

MAX_HALF_WIDTH = 64

PRESETS = ("shear", "taylor_green", "random_bandlimited", "mode_list")


class ParameterError(ValueError):
    """An argument violates a documented precondition."""


class LatticeMismatchError(ValueError):
    """Operands live on different lattices or time grids."""


@dataclass(frozen=True)
class FrequencyLattice:
    """Cubic grid of wave vectors h*(i, j, l), (i, j, l) in [-K, K]^3 \\ {0}."""

    h: float
    K: int
    index_vectors: np.ndarray = field(init=False, repr=False, compare=False)
    xi: np.ndarray = field(init=False, repr=False, compare=False)
    xi_norm: np.ndarray = field(init=False, repr=False, compare=False)
    cube_slots: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        h = float(self.h)
        if not np.isfinite(h) or h <= 0.0:
            raise ParameterError(f"frequency spacing must be positive, got {self.h}")
        K = self.K
        if not isinstance(K, (int, np.integer)) or isinstance(K, bool):
            raise ParameterError(f"half-width must be an integer, got {self.K!r}")
        if not 1 <= K <= MAX_HALF_WIDTH:
            raise ParameterError(
                f"half-width must satisfy 1 <= K <= {MAX_HALF_WIDTH}, got {K}"
            )
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "K", int(K))

        side = 2 * self.K + 1
        axis = np.arange(-self.K, self.K + 1)
        grid = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1)
        grid = grid.reshape(-1, 3)
        center = (side**3 - 1) // 2
        slots = np.delete(np.arange(side**3), center)

        index_vectors = np.ascontiguousarray(grid[slots])
        xi = np.ascontiguousarray(index_vectors * h, dtype=np.float64)
        xi_norm = np.sqrt((xi * xi).sum(axis=1))
        for name, arr in (
            ("index_vectors", index_vectors),
            ("xi", xi),
            ("xi_norm", xi_norm),
            ("cube_slots", slots),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_modes(self) -> int:
        return self.index_vectors.shape[0]

    @property
    def side(self) -> int:
        return 2 * self.K + 1

    def mode_index(self, ivec) -> int:
        """Row of integer mode (i, j, l) in the lexicographic enumeration."""
        i, j, l = (int(c) for c in ivec)
        if (i, j, l) == (0, 0, 0):
            raise ParameterError("the zero mode is not part of the lattice")
        K = self.K
        if max(abs(i), abs(j), abs(l)) > K:
            raise ParameterError(f"mode {(i, j, l)} outside lattice of half-width {K}")
        side = self.side
        pos = ((i + K) * side + (j + K)) * side + (l + K)
        center = (side**3 - 1) // 2
        return pos if pos < center else pos - 1


def make_lattice(h: float, K: int) -> FrequencyLattice:
    """Build the truncated frequency lattice with spacing h and half-width K."""
    return FrequencyLattice(h, K)


@dataclass(frozen=True)
class SpectralField:
    """Complex 3-vector amplitudes on a frequency lattice.

    When ``real_field`` is set the amplitudes are Hermitian-symmetric,
    u_hat(-xi) = conj(u_hat(xi)), i.e. the field is the transform of a real
    vector field.
    """

    lattice: FrequencyLattice
    amplitudes: np.ndarray
    real_field: bool = True

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True, order="C")
        if amps.shape != (self.lattice.n_modes, 3):
            raise ParameterError(
                f"amplitudes must have shape {(self.lattice.n_modes, 3)}, "
                f"got {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def modulus(self) -> np.ndarray:
        """Per-mode Euclidean modulus of the 3-component amplitude vector."""
        return np.sqrt((np.abs(self.amplitudes) ** 2).sum(axis=1))


def zero_field(lattice: FrequencyLattice, real_field: bool = True) -> SpectralField:
    return SpectralField(lattice, np.zeros((lattice.n_modes, 3), dtype=np.complex128),
                         real_field)


def hermitian_residual(u: SpectralField) -> float:
    """max_xi |u_hat(-xi) - conj(u_hat(xi))|; 0 for a genuinely real field."""
    amps = u.amplitudes
    return float(np.abs(amps[::-1] - np.conj(amps)).max(initial=0.0))


def divergence_residual(u: SpectralField) -> float:
    """max_xi |xi . u_hat(xi)| relative to the largest amplitude modulus."""
    dot = np.abs(np.einsum("xc,xc->x", u.lattice.xi, u.amplitudes))
    scale = float(np.abs(u.amplitudes).max(initial=0.0))
    if scale == 0.0:
        return 0.0
    return float(dot.max()) / scale


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_k = k * (T/M) for k = 0..M."""

    T: float
    M: int

    def __post_init__(self):
        T = float(self.T)
        if not np.isfinite(T) or T <= 0.0:
            raise ParameterError(f"horizon must be positive, got {self.T}")
        if not isinstance(self.M, (int, np.integer)) or self.M < 1:
            raise ParameterError(f"step count must be an integer >= 1, got {self.M}")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "M", int(self.M))

    @property
    def dt(self) -> float:
        return self.T / self.M

    def times(self) -> np.ndarray:
        return np.arange(self.M + 1) * self.dt


@dataclass(frozen=True)
class Trajectory:
    """A spectral field at each node of a uniform time grid."""

    lattice: FrequencyLattice
    times: np.ndarray
    states: np.ndarray
    real_field: bool = True

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64, copy=True)
        states = np.array(self.states, dtype=np.complex128, copy=True, order="C")
        if times.ndim != 1 or times.shape[0] < 2:
            raise ParameterError("a trajectory needs at least two time nodes")
        if states.shape != (times.shape[0], self.lattice.n_modes, 3):
            raise ParameterError(
                f"states must have shape {(times.shape[0], self.lattice.n_modes, 3)}, "
                f"got {states.shape}"
            )
        diffs = np.diff(times)
        if times[0] != 0.0 or diffs[0] <= 0.0 or not np.allclose(
            diffs, diffs[0], rtol=1e-9, atol=0.0
        ):
            raise ParameterError("time nodes must be uniform and start at 0")
        times.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def n_nodes(self) -> int:
        return self.times.shape[0]

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def field(self, k: int) -> SpectralField:
        return SpectralField(self.lattice, self.states[k], self.real_field)


@dataclass(frozen=True)
class InitialDataSpec:
    """Recipe for a canonical initial field.

    ``amplitude`` is the velocity amplitude for the shear and Taylor-Green
    presets, the target chi(-1) norm for the random preset, and a global
    scale for explicit mode lists.  ``band`` bounds |xi| of the random
    support.  ``divergence_free`` requests a Leray projection where the
    construction is not divergence-free by design.
    """

    preset: str
    amplitude: float = 1.0
    seed: int = 0
    band: float | None = None
    modes: tuple | None = None
    divergence_free: bool = True

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ParameterError(
                f"unknown preset {self.preset!r}; expected one of {PRESETS}"
            )
        if not np.isfinite(self.amplitude):
            raise ParameterError("amplitude must be finite")
        if self.preset == "random_bandlimited":
            if self.band is None or not np.isfinite(self.band) or self.band <= 0:
                raise ParameterError("random_bandlimited requires a positive band")
            if self.amplitude <= 0:
                raise ParameterError("random_bandlimited requires a positive "
                                     "target chi(-1) norm")
        if self.preset == "mode_list" and not self.modes:
            raise ParameterError("mode_list preset requires a non-empty mode list")


def _leray_amplitudes(lattice: FrequencyLattice, amps: np.ndarray) -> np.ndarray:
    dot = np.einsum("xc,xc->x", lattice.xi, amps)
    return amps - lattice.xi * (dot / lattice.xi_norm**2)[:, None]


def _canonical_band_rows(lattice: FrequencyLattice, band: float) -> np.ndarray:
    """Lex-positive rows with |xi| <= band.

    The row subset and its order depend only on the integer triples, so two
    lattices with the same spacing enumerate identical band data regardless
    of their half-width.
    """
    half = lattice.n_modes // 2
    rows = np.arange(half, lattice.n_modes)
    keep = lattice.xi_norm[rows] <= band * (1.0 + 1e-12)
    return rows[keep]


def _random_bandlimited_amplitudes(
    lattice: FrequencyLattice, band: float, rng: np.random.Generator
) -> np.ndarray:
    """Hermitian complex Gaussian amplitudes supported in |xi| <= band."""
    rows = _canonical_band_rows(lattice, band)
    if rows.size == 0:
        raise ParameterError(f"no lattice modes inside band {band}")
    amps = np.zeros((lattice.n_modes, 3), dtype=np.complex128)
    draws = rng.standard_normal((rows.size, 3, 2))
    values = draws[:, :, 0] + 1j * draws[:, :, 1]
    amps[rows] = values
    amps[lattice.n_modes - 1 - rows] = np.conj(values)
    return amps


def _shear_amplitudes(lattice, amplitude):
    # u(x) = amplitude * (sin(h*y), 0, 0): two modes at xi = (0, +-h, 0).
    amps = np.zeros((lattice.n_modes, 3), dtype=np.complex128)
    amps[lattice.mode_index((0, 1, 0)), 0] = -0.5j * amplitude
    amps[lattice.mode_index((0, -1, 0)), 0] = 0.5j * amplitude
    return amps


def _taylor_green_amplitudes(lattice, amplitude):
    # u(x) = amplitude * (sin(h*x)cos(h*y), -cos(h*x)sin(h*y), 0).
    amps = np.zeros((lattice.n_modes, 3), dtype=np.complex128)
    for s1 in (1, -1):
        for s2 in (1, -1):
            row = lattice.mode_index((s1, s2, 0))
            amps[row, 0] = -0.25j * s1 * amplitude
            amps[row, 1] = 0.25j * s2 * amplitude
    return amps


def _mode_list_amplitudes(lattice, spec):
    entries: dict[tuple[int, int, int], np.ndarray] = {}
    for ivec, value in spec.modes:
        key = tuple(int(c) for c in ivec)
        if key == (0, 0, 0):
            raise ParameterError("mode list may not contain the zero mode")
        vec = np.asarray(value, dtype=np.complex128)
        if vec.shape != (3,):
            raise ParameterError(f"mode {key} must carry a complex 3-vector")
        if key in entries:
            if not np.array_equal(entries[key], vec):
                raise ParameterError(f"conflicting duplicate entry for mode {key}")
            continue
        entries[key] = vec
    # Hermitian completion: a missing -xi partner is filled with the conjugate.
    for key in list(entries):
        partner = tuple(-c for c in key)
        if partner not in entries:
            entries[partner] = np.conj(entries[key])
        elif not np.allclose(entries[partner], np.conj(entries[key]),
                             rtol=0.0, atol=0.0):
            raise ParameterError(
                f"modes {key} and {partner} are not Hermitian partners"
            )
    amps = np.zeros((lattice.n_modes, 3), dtype=np.complex128)
    for key, vec in entries.items():
        amps[lattice.mode_index(key)] = spec.amplitude * vec
    return amps


def generate_initial_data(spec: InitialDataSpec,
                          lattice: FrequencyLattice) -> SpectralField:
    """Build the canonical initial field described by ``spec`` on ``lattice``."""
    if spec.preset == "shear":
        amps = _shear_amplitudes(lattice, spec.amplitude)
    elif spec.preset == "taylor_green":
        amps = _taylor_green_amplitudes(lattice, spec.amplitude)
    elif spec.preset == "random_bandlimited":
        rng = np.random.default_rng(spec.seed)
        amps = _random_bandlimited_amplitudes(lattice, spec.band, rng)
        if spec.divergence_free:
            amps = _leray_amplitudes(lattice, amps)
        from .norms import chi_norm  # deferred: norms imports this module

        current = chi_norm(SpectralField(lattice, amps), -1)
        if current == 0.0:
            raise ParameterError("random field vanished after projection")
        amps = amps * (spec.amplitude / current)
    else:  # mode_list
        amps = _mode_list_amplitudes(lattice, spec)
        if spec.divergence_free:
            amps = _leray_amplitudes(lattice, amps)
    return SpectralField(lattice, amps, real_field=True)


def field_axpy(alpha: complex, x: SpectralField, y: SpectralField) -> SpectralField:
    """Pointwise alpha * x + y on a shared lattice."""
    if x.lattice != y.lattice:
        raise LatticeMismatchError("field_axpy operands live on different lattices")
    alpha = complex(alpha)
    amps = alpha * x.amplitudes + y.amplitudes
    real = x.real_field and y.real_field and alpha.imag == 0.0
    return SpectralField(x.lattice, amps, real_field=real)


def load_mode_list(path) -> tuple[float, int, tuple]:
    """Read a mode-list JSON document; returns (h, K, modes).

    Schema: {"h": number, "K": integer, "modes": [{"k": [i, j, l],
    "re": [r1, r2, r3], "im": [s1, s2, s3]}]}.  Hermitian completion and the
    zero-mode rejection happen when the field is generated.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read mode list {path}: {exc}") from exc
    if not isinstance(doc, dict) or "h" not in doc or "K" not in doc:
        raise ParameterError("mode list document must carry 'h' and 'K'")
    raw_modes = doc.get("modes")
    if not isinstance(raw_modes, list) or not raw_modes:
        raise ParameterError("mode list document must carry a non-empty 'modes'")
    modes = []
    for entry in raw_modes:
        try:
            k = tuple(int(c) for c in entry["k"])
            re = [float(c) for c in entry["re"]]
            im = [float(c) for c in entry["im"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed mode entry {entry!r}") from exc
        if len(k) != 3 or len(re) != 3 or len(im) != 3:
            raise ParameterError(f"mode entry {entry!r} must carry 3-vectors")
        if k == (0, 0, 0):
            raise ParameterError("mode list may not contain the zero mode")
        modes.append((k, tuple(complex(r, s) for r, s in zip(re, im))))
    K = doc["K"]
    if not isinstance(K, int) or isinstance(K, bool):
        raise ParameterError("'K' must be an integer")
    return float(doc["h"]), K, tuple(modes)

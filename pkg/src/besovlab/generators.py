"""Random measure-sample generators: Brownian, weighted-martingale, fBm.

All generators are pure functions of (grid, parameters, seed): equal seeds
give bit-identical output regardless of scheduling.  Seeds may be ints or
sequences of ints and are fed to numpy's PCG64 via default_rng.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, ParameterError
from .paths import Grid, StochasticMeasureSample

WEIGHT_KINDS = ("constant", "affine", "sine", "indicator")


@dataclass(frozen=True)
class WeightFn:
    """Serializable bounded weight function on [a, b].

    kinds:
      constant:  (c,)                 -> c
      affine:    (c0, c1)             -> c0 + c1 x
      sine:      (amp, freq, phase)   -> amp sin(2 pi freq x + phase)
      indicator: (lo, hi)             -> 1 on [lo, hi], 0 elsewhere
    """

    kind: str
    params: tuple[float, ...]

    _ARITY = {"constant": 1, "affine": 2, "sine": 3, "indicator": 2}

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ConfigurationError(f"unknown weight kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.params) != self._ARITY[self.kind]:
            raise ConfigurationError(
                f"{self.kind} weight takes {self._ARITY[self.kind]} parameters"
            )
        if not all(math.isfinite(p) for p in self.params):
            raise ConfigurationError("weight parameters must be finite")
        if self.kind == "indicator" and self.params[0] > self.params[1]:
            raise ConfigurationError("indicator needs lo <= hi")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.kind == "constant":
            return np.full_like(x, p[0])
        if self.kind == "affine":
            return p[0] + p[1] * x
        if self.kind == "sine":
            return p[0] * np.sin(2.0 * np.pi * p[1] * x + p[2])
        return np.where((x >= p[0]) & (x <= p[1]), 1.0, 0.0)

    @classmethod
    def one(cls) -> "WeightFn":
        return cls("constant", (1.0,))

    def descriptor(self) -> str:
        return self.kind + ":" + ",".join(repr(p) for p in self.params)

    @classmethod
    def from_descriptor(cls, text: str) -> "WeightFn":
        kind, _, rest = text.partition(":")
        try:
            params = tuple(float(tok) for tok in rest.split(",")) if rest else ()
        except ValueError as exc:
            raise ConfigurationError(f"bad weight descriptor {text!r}") from exc
        return cls(kind, params)


def generate_bm(grid: Grid, seed) -> StochasticMeasureSample:
    """Brownian measure: independent N(0, dx) increments over finest cells."""
    rng = np.random.default_rng(seed)
    inc = rng.standard_normal(grid.n_cells) * math.sqrt(grid.dx)
    return StochasticMeasureSample(grid, inc)


def generate_martingale(grid: Grid, g: WeightFn, seed) -> StochasticMeasureSample:
    """Ito-integral martingale measure with deterministic integrand g.

    Midpoint discretization: increment over cell k is g(midpoint_k) dW_k.
    With g == 1 the output is bit-identical to generate_bm at equal seeds.
    """
    bm = generate_bm(grid, seed)
    inc = g(grid.midpoints()) * bm.increments
    return StochasticMeasureSample(grid, inc)


def _fgn_autocov(H: float, n_lags: int) -> np.ndarray:
    m = np.arange(n_lags, dtype=float)
    return 0.5 * (
        np.abs(m + 1) ** (2 * H) - 2 * np.abs(m) ** (2 * H) + np.abs(m - 1) ** (2 * H)
    )


def _fgn_circulant(N: int, H: float, rng: np.random.Generator) -> Optional[np.ndarray]:
    """Davies-Harte synthesis of unit-step fGn; None if embedding fails."""
    c = _fgn_autocov(H, N + 1)
    row = np.concatenate([c, c[-2:0:-1]])
    eig = np.fft.fft(row).real
    if eig.min() < -1e-10 * eig.max():
        return None
    eig = np.clip(eig, 0.0, None)
    Z = np.zeros(2 * N, dtype=complex)
    Z[0] = rng.standard_normal()
    Z[N] = rng.standard_normal()
    V = rng.standard_normal((N - 1, 2))
    Z[1:N] = (V[:, 0] + 1j * V[:, 1]) / math.sqrt(2.0)
    Z[N + 1:] = np.conj(Z[1:N][::-1])
    out = np.sqrt(2 * N) * np.fft.ifft(np.sqrt(eig) * Z).real[:N]
    return out


def _fgn_hosking(N: int, H: float, rng: np.random.Generator) -> np.ndarray:
    """Durbin-Levinson sequential synthesis; exact covariance, O(N^2)."""
    gamma = _fgn_autocov(H, N)
    z = rng.standard_normal(N)
    out = np.empty(N)
    out[0] = math.sqrt(gamma[0]) * z[0]
    phi = np.empty(N)  # phi[:n] = prediction coefficients after step n
    v = gamma[0]
    for n in range(1, N):
        if n == 1:
            kappa = gamma[1] / gamma[0]
            phi[0] = kappa
        else:
            kappa = (gamma[n] - np.dot(phi[: n - 1], gamma[n - 1 : 0 : -1])) / v
            phi[: n - 1] -= kappa * phi[n - 2 :: -1].copy()
            phi[n - 1] = kappa
        v *= 1.0 - kappa * kappa
        mean = np.dot(phi[:n], out[n - 1 :: -1])
        out[n] = mean + math.sqrt(v) * z[n]
    return out


def generate_fgn(grid: Grid, H: float, seed, method: str = "auto") -> np.ndarray:
    """Fractional Gaussian noise over the finest cells, scaled by dx^H.

    Circulant (FFT) embedding by default, falling back to the sequential
    recursion when the embedding eigenvalues go negative.
    """
    if not (0.0 < H < 1.0):
        raise ParameterError(f"Hurst index must be in (0, 1), got {H}")
    if method not in ("auto", "circulant", "hosking"):
        raise ParameterError(f"unknown fgn method {method!r}")
    rng = np.random.default_rng(seed)
    N = grid.n_cells
    out = None
    if method in ("auto", "circulant"):
        out = _fgn_circulant(N, H, rng)
        if out is None and method == "circulant":
            raise ParameterError("circulant embedding failed (negative eigenvalues)")
    if out is None:
        out = _fgn_hosking(N, H, rng)
    return out * grid.dx**H


def generate_weighted_fbm_measure(
    grid: Grid, f: WeightFn, H: float, seed
) -> StochasticMeasureSample:
    """Weighted fBm measure, H > 1/2: increment k is f(midpoint_k) dW^H_k."""
    if not H > 0.5:
        raise ParameterError(f"weighted fBm measure requires H > 1/2, got {H}")
    fgn = generate_fgn(grid, H, seed)
    inc = f(grid.midpoints()) * fgn
    return StochasticMeasureSample(grid, inc)


def generate_linear(grid: Grid, slope: float = 1.0) -> StochasticMeasureSample:
    """Deterministic ramp measure (test stub): equal increments slope*dx."""
    return StochasticMeasureSample(grid, np.full(grid.n_cells, slope * grid.dx))


@dataclass(frozen=True)
class GeneratorSpec:
    """Serializable recipe for one measure-sample generator."""

    kind: str  # bm | martingale | fbm | wfbm | linear
    grid: Grid
    seed: int = 0
    H: Optional[float] = None
    weight: Optional[WeightFn] = None

    KINDS = ("bm", "martingale", "fbm", "wfbm", "linear")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigurationError(f"unknown generator kind {self.kind!r}")
        if self.kind in ("fbm", "wfbm") and self.H is None:
            raise ConfigurationError(f"{self.kind} generator needs a Hurst index")
        if self.kind == "wfbm" and self.H is not None and not self.H > 0.5:
            raise ParameterError(f"wfbm requires H > 1/2, got {self.H}")
        if self.kind == "fbm" and self.H is not None and not (0.0 < self.H < 1.0):
            raise ParameterError(f"fbm requires H in (0, 1), got {self.H}")

    def sample(self, seed=None) -> StochasticMeasureSample:
        """Draw one realization; seed overrides the spec's own seed."""
        s = self.seed if seed is None else seed
        if self.kind == "bm":
            return generate_bm(self.grid, s)
        if self.kind == "martingale":
            return generate_martingale(self.grid, self.weight or WeightFn.one(), s)
        if self.kind == "fbm":
            return StochasticMeasureSample(self.grid, generate_fgn(self.grid, self.H, s))
        if self.kind == "wfbm":
            return generate_weighted_fbm_measure(
                self.grid, self.weight or WeightFn.one(), self.H, s
            )
        return generate_linear(self.grid)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "a": self.grid.a,
            "b": self.grid.b,
            "J": self.grid.J,
            "seed": int(self.seed),
        }
        if self.H is not None:
            d["H"] = self.H
        if self.weight is not None:
            d["weight"] = self.weight.descriptor()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        try:
            grid = Grid(float(d["a"]), float(d["b"]), int(d["J"]))
            weight = (
                WeightFn.from_descriptor(d["weight"]) if "weight" in d else None
            )
            return cls(
                kind=d["kind"],
                grid=grid,
                seed=int(d.get("seed", 0)),
                H=float(d["H"]) if "H" in d else None,
                weight=weight,
            )
        except KeyError as exc:
            raise ConfigurationError(f"generator spec missing field {exc}") from exc

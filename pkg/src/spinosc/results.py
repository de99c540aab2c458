"""Shared result containers: energy spectra and population time series."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["Spectrum", "TimeSeries", "assemble_levels"]


@dataclass(frozen=True)
class Spectrum:
    """Lowest-k energy levels produced by one method, sorted ascending."""

    levels: np.ndarray   # shape (k,), ascending
    method: str          # "exact", "trwa", or "rwa"
    n_max: int | None = None   # Fock truncation, exact method only
    converged: bool = True     # exact: stable under a truncation probe

    def __post_init__(self) -> None:
        levels = np.asarray(self.levels, dtype=float)
        if levels.ndim != 1 or levels.size == 0:
            raise ValueError("levels must be a non-empty 1-d array")
        if np.any(np.diff(levels) < 0.0):
            raise ValueError("levels must be sorted ascending")
        object.__setattr__(self, "levels", levels)


@dataclass
class TimeSeries:
    """Population signal P(t) for one or more methods on a shared time grid.

    ``values`` maps method name to the sampled signal; ``metrics`` holds
    scalar deviation summaries keyed ``"<method>.<metric>"``.
    """

    times: np.ndarray
    values: dict[str, np.ndarray]
    metrics: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("times must be a non-empty 1-d array")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        self.times = times
        for name, vals in self.values.items():
            vals = np.asarray(vals, dtype=float)
            if vals.shape != times.shape:
                raise ValueError(
                    f"values[{name!r}] has shape {vals.shape}, expected {times.shape}"
                )
            self.values[name] = vals

    def merged_with(self, other: "TimeSeries") -> "TimeSeries":
        """Combine two series sampled on the identical grid."""
        if self.times.shape != other.times.shape or not np.array_equal(self.times, other.times):
            raise ValueError("cannot merge series on different time grids")
        values = dict(self.values)
        values.update(other.values)
        metrics = dict(self.metrics)
        metrics.update(other.metrics)
        return TimeSeries(times=self.times.copy(), values=values, metrics=metrics)

    def compute_metrics(self, reference: str = "exact") -> dict[str, float]:
        """Deviation summaries of every non-reference signal against ``reference``.

        For each other method m the result holds
        ``"m.max_abs_dev"``  = max_t |P_m(t) - P_ref(t)| and
        ``"m.time_avg_dev"`` = mean_t |P_m(t) - P_ref(t)| over the sample grid.
        """
        if reference not in self.values:
            raise ValueError(f"reference signal {reference!r} not present")
        ref = self.values[reference]
        out: dict[str, float] = {}
        for name, vals in self.values.items():
            if name == reference:
                continue
            dev = np.abs(vals - ref)
            out[f"{name}.max_abs_dev"] = float(np.max(dev))
            out[f"{name}.time_avg_dev"] = float(np.mean(dev))
        return out


def assemble_levels(
    ground: float,
    pair_at: Callable[[int], tuple[float, float]],
    k: int,
) -> np.ndarray:
    """Collect the lowest ``k`` levels of a {ground} + paired-doublet spectrum.

    ``pair_at(n)`` returns the two levels of the n-th excited doublet.  Doublet
    members can cross between doublets, so pairs are accumulated until the
    lower member of the latest pair both exceeds the current k-th smallest
    level and has entered its monotonically increasing regime (the lower
    branch is convex in n, so once it increases it never dips back).
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    levels = [ground]
    prev_lower = -np.inf
    n = 0
    while True:
        lo, hi = pair_at(n)
        lower = min(lo, hi)
        levels.append(lo)
        levels.append(hi)
        if len(levels) >= k:
            kth = np.partition(np.asarray(levels), k - 1)[k - 1]
            if lower > kth and lower >= prev_lower:
                break
        prev_lower = lower
        n += 1
        if n > 10 * k + 100:  # safety net; never reached for physical spectra
            break
    return np.sort(np.asarray(levels))[:k]

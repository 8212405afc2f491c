"""Synthetic piecewise-stationary series for benchmarking distribution changes.

Segments draw i.i.d. from one of ten classical normal-mixture test densities
(the Marron-Wand family, densities 1-10), each affinely standardized to mean
0 and variance 1 using its exact mixture moments. Since all ten then share
their first two moments, consecutive segments differ only in higher-order
moments: detectors keyed to mean or variance shifts see nothing, while a
characteristic-kernel detector can separate them.

Sampling uses numpy's PCG64 generator; the algorithm name is recorded in
serialized scenarios so runs can be reproduced at the seed level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_breakpoints
from .dynprog import Segmentation

RNG_ALGORITHM = "numpy-pcg64"

#: Mixture components (weight, mean, sd) of the ten benchmark densities,
#: keyed 1..10, as defined in the classical normal-mixture test suite.
MW_COMPONENTS: dict[int, tuple[tuple[float, float, float], ...]] = {
    1: ((1.0, 0.0, 1.0),),
    2: ((1 / 5, 0.0, 1.0), (1 / 5, 1 / 2, 2 / 3), (3 / 5, 13 / 12, 5 / 9)),
    3: (
        (1 / 8, 0.0, 1.0),
        (1 / 8, -1.0, 2 / 3),
        (1 / 8, -5 / 3, 4 / 9),
        (1 / 8, -19 / 9, 8 / 27),
        (1 / 8, -65 / 27, 16 / 81),
        (1 / 8, -211 / 81, 32 / 243),
        (1 / 8, -665 / 243, 64 / 729),
        (1 / 8, -2059 / 729, 128 / 2187),
    ),
    4: ((2 / 3, 0.0, 1.0), (1 / 3, 0.0, 1 / 10)),
    5: ((1 / 10, 0.0, 1.0), (9 / 10, 0.0, 1 / 10)),
    6: ((1 / 2, -1.0, 2 / 3), (1 / 2, 1.0, 2 / 3)),
    7: ((1 / 2, -3 / 2, 1 / 2), (1 / 2, 3 / 2, 1 / 2)),
    8: ((3 / 4, 0.0, 1.0), (1 / 4, 3 / 2, 1 / 3)),
    9: ((9 / 20, -6 / 5, 3 / 5), (9 / 20, 6 / 5, 3 / 5), (1 / 10, 0.0, 1 / 4)),
    10: (
        (1 / 2, 0.0, 1.0),
        (1 / 10, -1.0, 1 / 10),
        (1 / 10, -1 / 2, 1 / 10),
        (1 / 10, 0.0, 1 / 10),
        (1 / 10, 1 / 2, 1 / 10),
        (1 / 10, 1.0, 1 / 10),
    ),
}

MW_NAMES = {
    1: "gaussian",
    2: "skewed unimodal",
    3: "strongly skewed",
    4: "kurtotic unimodal",
    5: "outlier",
    6: "bimodal",
    7: "separated bimodal",
    8: "skewed bimodal",
    9: "trimodal",
    10: "claw",
}

#: Default breakpoint fractions for the ten-segment benchmark scenario;
#: chosen so segment lengths vary (shortest 7%, longest 15%).
DEFAULT_BREAK_FRACTIONS = (0.08, 0.20, 0.27, 0.35, 0.50, 0.58, 0.70, 0.82, 0.90)


def _components(dist_id: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if dist_id not in MW_COMPONENTS:
        raise ValueError(f"unknown mixture id {dist_id}, expected 1..10")
    w, mu, sd = map(np.array, zip(*MW_COMPONENTS[dist_id]))
    return w, mu, sd


def mixture_moments(dist_id: int) -> tuple[float, float]:
    """Exact (mean, variance) of the raw mixture, before standardization."""
    w, mu, sd = _components(dist_id)
    mean = float(w @ mu)
    second = float(w @ (sd**2 + mu**2))
    return mean, second - mean**2


def sample_mw(dist_id: int, count: int, seed) -> np.ndarray:
    """Standardized i.i.d. draws from mixture ``dist_id``, shape (count,).

    ``seed`` may be an int or a numpy Generator; with an int the output is a
    deterministic function of (dist_id, count, seed).
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    w, mu, sd = _components(dist_id)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    comp = rng.choice(len(w), size=count, p=w)
    x = rng.normal(mu[comp], sd[comp])
    mean, var = mixture_moments(dist_id)
    return (x - mean) / np.sqrt(var)


@dataclass(frozen=True)
class Scenario:
    """Ground truth of one synthetic series: where it changes and into what.

    ``segment_ids`` holds one mixture id (1..10) per segment; there is one
    more segment than there are breakpoints.
    """

    n: int
    breakpoints: tuple[int, ...]
    segment_ids: tuple[int, ...]
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "breakpoints", check_breakpoints(self.breakpoints, self.n))
        ids = tuple(int(i) for i in self.segment_ids)
        object.__setattr__(self, "segment_ids", ids)
        if len(ids) != len(self.breakpoints) + 1:
            raise ValueError(
                f"{len(self.breakpoints)} breakpoints require {len(self.breakpoints) + 1} "
                f"segment ids, got {len(ids)}"
            )
        for i in ids:
            if i not in MW_COMPONENTS:
                raise ValueError(f"unknown mixture id {i}, expected 1..10")

    @classmethod
    def default(cls, n: int = 1000, seed: int = 0) -> "Scenario":
        """Ten segments of varied lengths, mixture ids cycling 1..10."""
        bps = tuple(int(round(f * n)) for f in DEFAULT_BREAK_FRACTIONS)
        return cls(n=n, breakpoints=bps, segment_ids=tuple(range(1, 11)), seed=seed)

    @classmethod
    def single(cls, dist_id: int, n: int, seed: int = 0) -> "Scenario":
        """A change-point-free series: one segment, one distribution."""
        return cls(n=n, breakpoints=(), segment_ids=(dist_id,), seed=seed)

    def segmentation(self) -> Segmentation:
        return Segmentation(self.n, self.breakpoints)

    def fractions(self) -> np.ndarray:
        return self.segmentation().fractions()

    def ids_per_index(self) -> np.ndarray:
        """Mixture id generating each time index, shape (n,)."""
        out = np.empty(self.n, dtype=int)
        for (s, e), q in zip(self.segmentation().segments(), self.segment_ids):
            out[s:e] = q
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "breakpoints": list(self.breakpoints),
            "fractions": [b / self.n for b in self.breakpoints],
            "segment_ids": list(self.segment_ids),
            "seed": self.seed,
            "rng": RNG_ALGORITHM,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Scenario":
        return cls(
            n=int(doc["n"]),
            breakpoints=tuple(doc["breakpoints"]),
            segment_ids=tuple(doc["segment_ids"]),
            seed=int(doc.get("seed", 0)),
        )


def generate(scenario: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """Draw the series of a scenario.

    Returns the (n, 1) series and the true breakpoint fractions. Identical
    scenarios (same seed included) produce identical series.
    """
    rng = np.random.default_rng(scenario.seed)
    parts = [
        sample_mw(q, e - s, rng)
        for (s, e), q in zip(scenario.segmentation().segments(), scenario.segment_ids)
    ]
    return np.concatenate(parts)[:, None], scenario.fractions()

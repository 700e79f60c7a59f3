"""Named generator and sweep configurations at desk and full scale."""

from __future__ import annotations

import numpy as np

from .evaluation import SweepSpec
from .netgen import BARABASI_ALBERT, ERDOS_RENYI, GeneratorSpec, GroupParams, sample_sizes

INTER_P_GRID = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4]
SIZE_MODE_GRID = ["q0", "q0.1", "q0.25", "q0.5", "random"]
SIMULATED_DENSITY_GRID = [0.01, 0.02, 0.04, 0.08, 0.16]
INFUSION_DENSITY_GRID = [0.05, 0.1, 0.2, 0.4, 0.8]

# Full-scale normal sizes: uniform on [50, 990], mean 520.
FULL_SIZE_RANGE = (50, 990)


def _sizes(n: int, lo: int, hi: int, seed: int) -> list[int]:
    return np.random.default_rng(np.random.SeedSequence([seed, 11])).integers(lo, hi + 1, size=n).tolist()


def generator_preset(name: str, seed: int) -> GeneratorSpec:
    if name == "simulated-small":
        normal = _sizes(20, 30, 100, seed)
        anomalous = sample_sizes(normal, "q0", 3, np.random.default_rng(seed))
        return GeneratorSpec(
            GroupParams(BARABASI_ALBERT, normal, 1, 0.075),
            GroupParams(ERDOS_RENYI, anomalous, 0.05, 0.4),
            seed,
        )
    if name == "simulated-full":
        normal = _sizes(110, *FULL_SIZE_RANGE, seed)
        anomalous = sample_sizes(normal, "q0.1", 10, np.random.default_rng(seed))
        return GeneratorSpec(
            GroupParams(BARABASI_ALBERT, normal, 1, 0.075),
            GroupParams(ERDOS_RENYI, anomalous, 0.04, 0.2),
            seed,
        )
    raise KeyError(f"unknown generator preset {name!r}; expected one of {GENERATOR_PRESETS}")


GENERATOR_PRESETS = ("simulated-small", "simulated-full")


def infusion_preset(name: str, base_sizes: list[int], seed: int) -> GroupParams:
    if name == "infusion-small":
        sizes = sample_sizes(base_sizes, "q0.25", 3, np.random.default_rng(seed))
        return GroupParams(ERDOS_RENYI, sizes, 0.1, 0.2)
    if name == "infusion-full":
        sizes = sample_sizes(base_sizes, "q0.25", 10, np.random.default_rng(seed))
        return GroupParams(ERDOS_RENYI, sizes, 0.1, 0.2)
    raise KeyError(f"unknown infusion preset {name!r}; expected one of {INFUSION_PRESETS}")


INFUSION_PRESETS = ("infusion-small", "infusion-full")


def sweep_preset(name: str) -> SweepSpec:
    if name == "desk":
        return SweepSpec(
            args_anom=[0.05, 0.8],
            inter_p_anom=[0.05, 0.2, 0.4],
            size_modes=["q0", "random"],
            seeds=list(range(25)),
        )
    if name == "desk-overlap-control":
        # 30 test communities, 3 anomalous: random-ranking AP is about 0.10
        return SweepSpec(
            args_anom=[0.05],
            inter_p_anom=[0.0],
            size_modes=["random"],
            seeds=list(range(25)),
            n_normal=33,
        )
    if name == "full-simulated":
        return SweepSpec(
            args_anom=SIMULATED_DENSITY_GRID,
            inter_p_anom=INTER_P_GRID,
            size_modes=SIZE_MODE_GRID,
            seeds=list(range(5)),
            n_normal=110,
            normal_size_range=FULL_SIZE_RANGE,
            n_anomalous=10,
            n_train=20,
        )
    if name == "full-infusion":
        return SweepSpec(
            args_anom=INFUSION_DENSITY_GRID,
            inter_p_anom=INTER_P_GRID,
            size_modes=SIZE_MODE_GRID,
            seeds=list(range(5)),
            mode="infusion",
            n_anomalous=10,
            n_train=20,
        )
    raise KeyError(f"unknown sweep preset {name!r}; expected one of {SWEEP_PRESETS}")


SWEEP_PRESETS = ("desk", "desk-overlap-control", "full-simulated", "full-infusion")

"""The 300 seeded quad instances shared by the oracle runs (n 4..10, all profiles)."""
from terraquad.instance_gen import PROFILES, GenConfig, generate


def acceptance_configs(count: int = 300, seed0: int = 0):
    return [GenConfig(n=4 + k % 7, seed=seed0 + k, profile=PROFILES[k % len(PROFILES)])
            for k in range(count)]


def acceptance_terrains(count: int = 300, seed0: int = 0):
    return [(c, generate(c)) for c in acceptance_configs(count, seed0)]

"""Seeded terrain generator.

PRNG: numpy PCG64 seeded through SeedSequence(seed). Jitter rounds draw from
a child stream spawned off the same SeedSequence, so output is a pure
function of the config.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict
from enum import Enum

import numpy as np

from .geometry_kernel import EPS
from .terrain_model import Terrain, collinear_triples, validate


class Profile(str, Enum):
    RANDOM_WALK = "RANDOM_WALK"
    PEAKS = "PEAKS"
    SAWTOOTH = "SAWTOOTH"
    PLATEAU = "PLATEAU"


PROFILES = tuple(p.value for p in Profile)


@dataclass(frozen=True)
class GenConfig:
    n: int = 10
    seed: int = 0
    x_span: float = 100.0
    height_range: tuple = (1.0, 50.0)
    profile: str = "RANDOM_WALK"
    min_feature: float = 0.0  # 0 means 0.1 / n
    perturbation: float = 1e-6  # relative to height range
    max_retries: int = 100

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if self.min_feature * self.n > 1:
            raise ValueError("min_feature * n must not exceed 1")
        lo, hi = self.height_range
        if not 0 < lo <= hi:
            raise ValueError("height_range must satisfy 0 < min <= max")
        Profile(self.profile)

    def to_dict(self) -> dict:
        return asdict(self)


def _xs(c: GenConfig, rng) -> np.ndarray:
    gaps = c.n - 1
    mf = c.min_feature if c.min_feature > 0 else 0.1 / c.n
    w = rng.dirichlet(np.ones(gaps))
    steps = mf + (1.0 - mf * gaps) * w
    xs = np.concatenate([[0.0], np.cumsum(steps)]) * c.x_span
    xs[-1] = c.x_span
    return xs


def _interior_ys(c: GenConfig, rng, xs) -> np.ndarray:
    lo, hi = c.height_range
    m = c.n - 2
    u = xs[1:-1] / c.x_span
    if c.profile == Profile.RANDOM_WALK:
        steps = rng.normal(0.0, 0.25 * (hi - lo), m)
        y = np.empty(m)
        cur = rng.uniform(lo, hi)
        for i in range(m):
            cur = cur + steps[i]
            if cur < lo:
                cur = 2 * lo - cur
            if cur > hi:
                cur = 2 * hi - cur
            cur = min(max(cur, lo), hi)
            y[i] = cur
        return y
    if c.profile == Profile.PEAKS:
        k = max(3, m // 12)
        centers = rng.uniform(0.05, 0.95, k)
        widths = rng.uniform(0.02, 0.12, k)
        amps = rng.uniform(0.3, 1.0, k)
        f = np.zeros(m)
        for cc, ww, aa in zip(centers, widths, amps):
            f += aa * np.exp(-0.5 * ((u - cc) / ww) ** 2)
        f = f + 0.08 * f.max() * rng.uniform(0.0, 1.0, m)
        return lo + (hi - lo) * f / max(f.max(), 1e-300)
    if c.profile == Profile.SAWTOOTH:
        hiv = rng.uniform(0.6, 1.0, m)
        lov = rng.uniform(0.0, 0.35, m)
        f = np.where(np.arange(m) % 2 == 0, hiv, lov)
        return lo + (hi - lo) * f
    # PLATEAU: rising flank, nearly flat top, falling flank
    top = rng.uniform(0.75, 1.0)
    a, b = np.sort(rng.uniform(0.1, 0.9, 2))
    if m <= 2:
        a, b = u[0] - 1e-9, u[-1] + 1e-9
    f = np.where(u < a, top * (0.3 + 0.7 * u / max(a, 1e-9)),
                 np.where(u > b, top * (0.3 + 0.7 * (1 - u) / max(1 - b, 1e-9)), top))
    f = f + rng.uniform(-0.02, 0.02, m)
    f = f - min(f.min(), 0.0)
    return lo + (hi - lo) * f / max(f.max(), 1.0)


def generate(c: GenConfig) -> Terrain:
    ss = np.random.SeedSequence(c.seed)
    main, jit = ss.spawn(2)
    rng = np.random.Generator(np.random.PCG64(main))
    jrng = np.random.Generator(np.random.PCG64(jit))
    xs = _xs(c, rng)
    ys = np.concatenate([[0.0], _interior_ys(c, rng, xs), [0.0]])
    lo, hi = c.height_range
    amp = c.perturbation * (hi - lo if hi > lo else hi)
    for _ in range(c.max_retries):
        bad = collinear_triples(xs, ys, 10 * EPS)
        if not bad:
            return validate(list(zip(xs, ys)), EPS)
        movable = sorted({j for t in bad for j in t if 0 < j < c.n - 1})
        for j in movable:
            ys[j] = max(ys[j] + jrng.uniform(-amp, amp), 0.5 * lo)
    raise RuntimeError(f"could not reach general position for {c}")

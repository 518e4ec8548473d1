"""Privacy parameters, one-sided exponential and Laplace noise, random rounding.

All samplers draw exactly one uniform per variate through the inverse CDF,
so a seeded stream reproduces bit-for-bit.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import ParameterError

SEED_ENV = "PRIVDIST_SEED"

ArrayOrFloat = Union[float, np.ndarray]


class ScaleRule(enum.Enum):
    """How smooth sensitivity is converted into a noise scale.

    ``EPSILON`` uses ``sensitivity / epsilon`` (rate ``epsilon / sensitivity``);
    ``ALPHA`` uses ``sensitivity / alpha`` with ``alpha = epsilon / 2``, which
    doubles the noise.
    """

    EPSILON = "epsilon"
    ALPHA = "alpha"


@dataclass(frozen=True)
class PrivacyParams:
    epsilon: float
    delta: float
    alpha: float
    beta: float
    scale_rule: ScaleRule = ScaleRule.EPSILON

    def noise_scale(self, sensitivity: float) -> float:
        divisor = self.epsilon if self.scale_rule is ScaleRule.EPSILON else self.alpha
        return sensitivity / divisor


def derive_params(epsilon: float, delta: float, scale_rule: ScaleRule = ScaleRule.EPSILON) -> PrivacyParams:
    """``alpha = eps/2`` and ``beta = eps / (2 ln(2/delta))``."""
    if not (epsilon > 0 and math.isfinite(epsilon)):
        raise ParameterError(f"epsilon must be positive and finite, got {epsilon}")
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    return PrivacyParams(
        epsilon=epsilon,
        delta=delta,
        alpha=epsilon / 2,
        beta=epsilon / (2 * math.log(2 / delta)),
        scale_rule=ScaleRule(scale_rule),
    )


def default_delta(n: int) -> float:
    return 1.0 / (10 * n)


class Sign(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    TWO_SIDED = "+-"


@dataclass(frozen=True)
class NoiseSample:
    value: ArrayOrFloat
    scale: float
    sign: Sign


# -- RNG streams ---------------------------------------------------------------

def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for ``(seed, *stream)``; distinct streams never overlap."""
    return np.random.default_rng(np.random.SeedSequence([seed, *stream]))


def derive_seed(seed: int, *stream: int) -> int:
    """A single 63-bit integer seed identifying the ``(seed, *stream)`` stream."""
    return int(np.random.SeedSequence([seed, *stream]).generate_state(1, np.uint64)[0] >> np.uint64(1))


def resolve_seed(flag: Optional[int]) -> tuple[int, str]:
    """Seed from the CLI flag, else the environment, else fresh OS entropy."""
    if flag is not None:
        return flag, "flag"
    env = os.environ.get(SEED_ENV)
    if env not in (None, ""):
        try:
            return int(env), "env"
        except ValueError:
            raise ParameterError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return int(np.random.SeedSequence().entropy % (2**63)), "generated"


# -- samplers ------------------------------------------------------------------

def _as_value(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_scale(scale: float) -> None:
    if not scale > 0:
        raise ParameterError(f"noise scale must be positive, got {scale}")


def standard_exponential(rng: np.random.Generator, size=None) -> ArrayOrFloat:
    u = rng.random(size)
    return -np.log1p(-u)


def sample_exp_plus(rng: np.random.Generator, scale: float, size=None) -> NoiseSample:
    _check_scale(scale)
    return NoiseSample(_as_value(scale * standard_exponential(rng, size)), scale, Sign.POSITIVE)


def sample_exp_minus(rng: np.random.Generator, scale: float, size=None) -> NoiseSample:
    _check_scale(scale)
    return NoiseSample(_as_value(-scale * standard_exponential(rng, size)), scale, Sign.NEGATIVE)


def standard_laplace(rng: np.random.Generator, size=None) -> ArrayOrFloat:
    # u < 1/2 selects the negative half; 2u mod 1 stays in [0, 1) so the
    # magnitude is a finite standard exponential
    u = rng.random(size)
    w = np.where(u < 0.5, 2 * u, 2 * u - 1)
    magnitude = -np.log1p(-w)
    return np.where(u < 0.5, -magnitude, magnitude)


def sample_laplace(rng: np.random.Generator, scale: float, size=None) -> NoiseSample:
    _check_scale(scale)
    return NoiseSample(_as_value(scale * standard_laplace(rng, size)), scale, Sign.TWO_SIDED)


def random_round(rng: np.random.Generator, z: ArrayOrFloat) -> ArrayOrFloat:
    """Round up with probability equal to the fractional part ``z - floor(z)``."""
    a = np.floor(z)
    up = rng.random(np.shape(z) or None) < (z - a)
    out = a + up
    if np.ndim(out) == 0:
        return int(out)
    return out.astype(np.int64)

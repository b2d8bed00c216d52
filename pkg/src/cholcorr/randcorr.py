"""Random positive-definite correlation matrices from ordered uniforms.

The generator writes down a Cholesky factor directly, choosing the
determinant ladder of every row instead of the entries themselves:

1. Diagonals. Draw n-1 uniforms on (0, 1], sort them decreasingly as
   targets for the leading-minor sequence D_2 >= ... >= D_n, and set
   l_11 = 1, l_22 = sqrt(D_2), l_jj = sqrt(D_j / D_{j-1}).
2. Rows. For each row j, take the ladder 1 = U_(1) >= U_(2) >= ... >=
   U_(j) = l_jj^2, where the j-2 interior values are uniforms drawn on
   (l_jj^2, 1] and sorted decreasingly, and set
   l_ji = sqrt(U_(i) - U_(i+1)). The row telescopes to unit norm.
3. Signs. Flip each strictly-lower entry negative with probability
   1 - sign_bias, independently.
4. Return L and R = L L^T.

Because the ladders are non-increasing and positive by construction, the
result is always positive-definite, and the determinant of R equals the
smallest uniform drawn in step 1.

Determinism contract
--------------------
Streams are numpy PCG64 generators keyed by ``SeedSequence``. The draw
order is fixed: step 1 draws ``n-1`` uniforms in one call, step 2 draws
``j-2`` uniforms per row for j = 3..n in increasing j, step 3 draws
``n(n-1)/2`` uniforms in one call (row-major over strictly-lower
positions). Uniforms on (a, b] are realized as ``b - (b - a) * u`` with
``u = rng.random()`` on [0, 1). Batch element k uses the substream
``SeedSequence(seed, spawn_key=(k,))``, so it does not depend on the
batch size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix_core import CholeskyFactor, CorrelationMatrix

RngState = np.random.Generator


@dataclass(frozen=True)
class GeneratorConfig:
    """Dimension, seed and sign bias for the generator.

    ``sign_bias`` is the probability that an off-diagonal factor entry
    keeps a positive sign; 0.5 reproduces the symmetric coin flip.
    """

    n: int
    seed: int
    sign_bias: float = 0.5

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        if not 0.0 <= self.sign_bias <= 1.0:
            raise ValueError("sign_bias must lie in [0, 1]")


def stream(seed: int, index: int | None = None) -> RngState:
    """Deterministic PCG64 stream for ``seed``; with ``index`` given, the
    per-element substream ``SeedSequence(seed, spawn_key=(index,))``."""
    if index is None:
        ss = np.random.SeedSequence(seed)
    else:
        ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


def _uniforms_open_closed(rng: RngState, count: int, low: float = 0.0) -> np.ndarray:
    """``count`` uniforms on (low, 1], via 1 - (1 - low) * u with u on [0, 1)."""
    return 1.0 - (1.0 - low) * rng.random(count)


def generate(cfg: GeneratorConfig, rng: RngState | None = None):
    """One random factor and its correlation matrix.

    Returns ``(l, r)`` with ``l`` the generated lower factor (method tag
    ``detratio``, unit row norms up to rounding) and ``r`` the assembled
    correlation matrix, which always passes positive-definite
    construction.
    """
    n = cfg.n
    if rng is None:
        rng = stream(cfg.seed)
    entries = np.zeros((n, n))
    entries[0, 0] = 1.0
    if n > 1:
        draws = np.sort(_uniforms_open_closed(rng, n - 1))[::-1]
        targets = np.concatenate(([1.0], draws))  # D_1 = 1, D_j = U_(j)
        for j in range(2, n + 1):
            ljj_sq = targets[j - 1] / targets[j - 2]
            inner = np.sort(_uniforms_open_closed(rng, j - 2, low=ljj_sq))[::-1]
            ladder = np.concatenate(([1.0], inner, [ljj_sq]))
            entries[j - 1, : j - 1] = np.sqrt(ladder[:-1] - ladder[1:])
            entries[j - 1, j - 1] = np.sqrt(ljj_sq)
        flips = rng.random(n * (n - 1) // 2)
        signs = np.where(flips < cfg.sign_bias, 1.0, -1.0)
        entries[np.tril_indices(n, -1)] *= signs
    factor = CholeskyFactor(entries, "detratio")
    return factor, CorrelationMatrix(factor.reconstruct())


def generate_batch(cfg: GeneratorConfig, count: int) -> list[CorrelationMatrix]:
    """``count`` matrices on per-index substreams of ``cfg.seed``.

    Element k is what ``generate`` produces on substream k, so a longer
    batch with the same seed extends a shorter one elementwise.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    return [generate(cfg, rng=stream(cfg.seed, k))[1] for k in range(count)]

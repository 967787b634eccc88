"""Haar-random unitaries with reproducible seeding, and the swap twirl.

Sampling uses the Ginibre construction: a matrix of i.i.d. standard complex
Gaussians is QR-factorized and each column of ``Q`` is multiplied by the phase
of the matching diagonal entry of ``R``.  Without that phase correction the
result is not Haar distributed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ModelError
from .tensor import UnitaryMatrix

STREAM_STRIDE = 2**32
_SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class SeededStream:
    """Identifies one reproducible random stream.

    A stream yields a sequence of draws; constructing the generator again
    replays the same sequence bit for bit.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ModelError("master_seed must be a 64-bit unsigned integer")
        if self.stream_index < 0:
            raise ModelError("stream_index must be non-negative")

    @classmethod
    def for_task(cls, master_seed: int, run: int, shard: int = 0) -> "SeededStream":
        return cls(master_seed, run * STREAM_STRIDE + shard)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([self.master_seed, self.stream_index]))
        )


def ginibre(rng: np.random.Generator, rows: int, cols: int, batch: int) -> np.ndarray:
    """Stack of ``batch`` rows x cols standard complex Gaussian matrices.

    Entries are drawn column by column, so the first ``m`` columns of a draw
    are the same numbers whatever ``cols`` is (for the first matrix of a
    sequence).
    """
    z = rng.standard_normal((batch, cols, rows, 2))
    g = (z[..., 0] + 1j * z[..., 1]) * _SQRT_HALF
    return np.swapaxes(g, 1, 2)


def _phase_fixed_qr(g: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    mag = np.abs(d)
    phase = np.where(mag > 0, d / np.where(mag > 0, mag, 1.0), 1.0)
    return q * phase[..., None, :]


def haar_isometries(
    dim: int, cols: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """``count`` Haar isometries (first ``cols`` columns of Haar unitaries),
    shape ``(count, dim, cols)``."""
    if not 1 <= cols <= dim:
        raise ModelError(f"need 1 <= cols <= dim, got cols={cols}, dim={dim}")
    return _phase_fixed_qr(ginibre(rng, dim, cols, count))


def sample_haar(dim: int, stream: SeededStream) -> UnitaryMatrix:
    """First Haar unitary of ``stream``."""
    if dim < 1:
        raise ModelError("Haar unitaries need dim >= 1")
    return UnitaryMatrix(haar_isometries(dim, dim, 1, stream.generator())[0])


def haar_sequence(dim: int, stream: SeededStream, count: int) -> Iterator[UnitaryMatrix]:
    """Successive unitaries of one stream; the first equals ``sample_haar``."""
    if dim < 1:
        raise ModelError("Haar unitaries need dim >= 1")
    rng = stream.generator()
    for _ in range(count):
        yield UnitaryMatrix(haar_isometries(dim, dim, 1, rng)[0])


def sample_haar_isometry(dim: int, cols: int, stream: SeededStream) -> np.ndarray:
    """The first ``cols`` columns of ``sample_haar(dim, stream)``.

    Equal to it up to rounding, because column ``c`` of the QR factor depends
    only on the first ``c + 1`` Gaussian columns.
    """
    return haar_isometries(dim, cols, 1, stream.generator())[0]


# -- swap twirl --------------------------------------------------------------


@dataclass(frozen=True)
class TwirlCoefficients:
    """Haar average of the conjugated partial swap, ``alpha * I + beta * S``."""

    alpha: float
    beta: float
    a1: int
    a2: int

    def operator(self) -> np.ndarray:
        a = self.a1 * self.a2
        return self.alpha * np.eye(a * a) + self.beta * swap_operator(a)


def twirl_swap_coefficients(a1: int, a2: int) -> TwirlCoefficients:
    if a1 < 1 or a2 < 1:
        raise ModelError("factor dimensions must be positive")
    a = a1 * a2
    if a <= 1:
        raise ModelError("twirl needs a1 * a2 >= 2 (A^2 - 1 vanishes)")
    denom = a * a - 1
    return TwirlCoefficients(
        alpha=a2 * (a1 * a1 - 1) / denom,
        beta=a1 * (a2 * a2 - 1) / denom,
        a1=a1,
        a2=a2,
    )


def swap_operator(a: int) -> np.ndarray:
    """Swap of two copies of an ``a``-dimensional space."""
    return np.eye(a * a).reshape(a, a, a, a).transpose(1, 0, 2, 3).reshape(a * a, a * a)


def partial_swap_operator(a1: int, a2: int) -> np.ndarray:
    """Swap of the ``a2`` factors only, on ``(a1 a2) (x) (a1' a2')``.

    Basis ordering is ``|x1 x2 y1 y2>``; the operator maps it to
    ``|x1 y2 y1 x2>``.
    """
    a = a1 * a2
    eye = np.eye(a * a).reshape(a1, a2, a1, a2, a1, a2, a1, a2)
    return eye.transpose(0, 3, 2, 1, 4, 5, 6, 7).reshape(a * a, a * a)


def twirled_swap_mc(
    a1: int, a2: int, samples: int, stream: SeededStream, chunk: int = 1024
) -> np.ndarray:
    """Empirical mean of ``(U^dag (x) U^dag) S_{A2} (U (x) U)`` over Haar ``U``."""
    if samples < 1:
        raise ModelError("samples must be >= 1")
    a = a1 * a2
    s2 = partial_swap_operator(a1, a2)
    rng = stream.generator()
    acc = np.zeros((a * a, a * a), dtype=complex)
    left = samples
    while left:
        m = min(chunk, left)
        u = haar_isometries(a, a, m, rng)
        uu = np.einsum("sac,sbd->sabcd", u, u).reshape(m, a * a, a * a)
        flat = uu.reshape(m * a * a, a * a)
        acc += flat.conj().T @ (s2 @ uu).reshape(m * a * a, a * a)
        left -= m
    return acc / samples

"""Dense linear algebra over labeled multipartite Hilbert spaces.

A :class:`SpaceLayout` is an ordered list of ``(label, dim)`` factors.  Flat
indices are big-endian in factor order, so for a layout ``[(a, A), (b, B)]``
the basis state ``|i>_a |j>_b`` sits at flat index ``i * B + j``.

All value types are frozen and their arrays are read-only; every operation
returns a new object.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    CapacityError,
    DimensionMismatchError,
    LabelCollisionError,
    ModelError,
    UnknownLabelError,
)

STATE_ATOL = 1e-10
EIG_FLOOR = 1e-12
NEG_EIG_TOL = 1e-10
MAX_TOTAL_DIM = 2**31


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpaceLayout:
    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        factors = tuple((str(lab), int(d)) for lab, d in self.factors)
        object.__setattr__(self, "factors", factors)
        labels = [lab for lab, _ in factors]
        if len(set(labels)) != len(labels):
            raise LabelCollisionError(f"duplicate labels in layout {labels}")
        for lab, d in factors:
            if d < 1:
                raise ModelError(f"factor {lab!r} has dimension {d} < 1")
        if prod(d for _, d in factors) > MAX_TOTAL_DIM:
            raise ModelError("total dimension exceeds the addressable range")

    @classmethod
    def of(cls, *factors: tuple[str, int]) -> "SpaceLayout":
        return cls(tuple(factors))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.factors)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabelError(f"label {label!r} not in layout {self.labels}") from None

    def dims_of(self, labels: Iterable[str]) -> int:
        return prod(self.dim(lab) for lab in labels)

    def __len__(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class PureState:
    layout: SpaceLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.shape != (self.layout.total_dim,):
            raise DimensionMismatchError(
                f"{amps.size} amplitudes for layout of dimension {self.layout.total_dim}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > STATE_ATOL:
            raise ModelError(f"state norm {norm!r} deviates from 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, layout: SpaceLayout, index: int | Sequence[int]) -> "PureState":
        """Computational basis state; ``index`` is flat or one entry per factor."""
        if not isinstance(index, int):
            index = int(np.ravel_multi_index(tuple(index), layout.dims))
        amps = np.zeros(layout.total_dim, dtype=complex)
        amps[index] = 1.0
        return cls(layout, amps)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped with one axis per factor."""
        return self.amplitudes.reshape(self.layout.dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class DensityOp:
    """Density operator over a layout.

    Hermiticity and unit trace are checked on construction.  Positivity is
    enforced where the spectrum is computed anyway (entropy, fidelity, trace
    distance), since a full eigendecomposition per reduction would dominate
    the cost of exact simulation.
    """

    layout: SpaceLayout
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        d = self.layout.total_dim
        if m.shape != (d, d):
            raise DimensionMismatchError(f"matrix shape {m.shape} for dimension {d}")
        if not np.allclose(m, m.conj().T, rtol=0, atol=STATE_ATOL):
            raise ModelError("density operator is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > STATE_ATOL:
            raise ModelError(f"density operator has trace {tr!r}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_state(cls, state: PureState) -> "DensityOp":
        a = state.amplitudes
        return cls(state.layout, np.outer(a, a.conj()))

    @classmethod
    def maximally_mixed(cls, layout: SpaceLayout) -> "DensityOp":
        d = layout.total_dim
        return cls(layout, np.eye(d) / d)

    def eigenvalues(self) -> np.ndarray:
        return _clamped_eigvals(self.matrix)


@dataclass(frozen=True)
class UnitaryMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DimensionMismatchError(f"unitary must be square, got {m.shape}")
        err = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        if err > STATE_ATOL:
            raise ModelError(f"matrix is not unitary (max deviation {err:.3g})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "UnitaryMatrix":
        return cls(np.eye(dim))


State = Union[PureState, DensityOp]


def _clamped_eigvals(m: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(m)
    if w.size and w.min() < -NEG_EIG_TOL:
        raise ModelError(f"operator has negative eigenvalue {w.min():.3g}")
    return np.clip(w, 0.0, None)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    if w.min() < -NEG_EIG_TOL:
        raise ModelError(f"operator has negative eigenvalue {w.min():.3g}")
    w = np.where(w > EIG_FLOOR, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


# -- structural operations ---------------------------------------------------


def tensor_product(a: PureState, b: PureState) -> PureState:
    clash = set(a.layout.labels) & set(b.layout.labels)
    if clash:
        raise LabelCollisionError(f"labels {sorted(clash)} appear in both operands")
    layout = SpaceLayout(a.layout.factors + b.layout.factors)
    return PureState(layout, np.kron(a.amplitudes, b.amplitudes))


def _gather(state: PureState, labels: Sequence[str]) -> tuple[np.ndarray, int]:
    """Move ``labels`` (in the given order) to a contiguous block.

    Returns the permuted tensor and the axis where the block starts, which is
    the position of the first listed label once the others are removed.
    """
    layout = state.layout
    idx = [layout.index(lab) for lab in labels]
    if len(set(idx)) != len(idx):
        raise LabelCollisionError(f"repeated labels in {list(labels)}")
    rest = [i for i in range(len(layout)) if i not in idx]
    start = sum(1 for i in rest if i < idx[0])
    order = rest[:start] + idx + rest[start:]
    return np.transpose(state.tensor(), order), start


def embed_zero_pad(
    state: PureState, source_labels: Sequence[str], target_label: str, target_dim: int
) -> PureState:
    """Merge ``source_labels`` into one factor of dimension ``target_dim``.

    The merged index is big-endian in the listed order (for a pair of dims
    ``(K, N)`` the basis state ``(i, j)`` maps to ``i * N + j``) and every
    index at or beyond the product of the source dims carries zero amplitude.
    """
    source_labels = list(source_labels)
    if not source_labels:
        raise ModelError("no source labels given")
    layout = state.layout
    merged = layout.dims_of(source_labels)
    if merged > target_dim:
        raise CapacityError(
            f"source factors of total dimension {merged} do not fit into {target_dim}"
        )
    if target_label in layout.labels and target_label not in source_labels:
        raise LabelCollisionError(f"label {target_label!r} already present")
    t, start = _gather(state, source_labels)
    keep = [f for f in layout.factors if f[0] not in source_labels]
    shape = tuple(d for _, d in keep[:start]) + (merged,) + tuple(d for _, d in keep[start:])
    t = t.reshape(shape)
    if target_dim > merged:
        pad = [(0, 0)] * t.ndim
        pad[start] = (0, target_dim - merged)
        t = np.pad(t, pad)
    new_layout = SpaceLayout(tuple(keep[:start]) + ((target_label, target_dim),) + tuple(keep[start:]))
    return PureState(new_layout, t.ravel())


def merge_factors(state: PureState, labels: Sequence[str], new_label: str) -> PureState:
    """Inverse of :func:`split_factor`: fuse factors without padding."""
    return embed_zero_pad(state, labels, new_label, state.layout.dims_of(labels))


def split_factor(state: PureState, label: str, into: Sequence[tuple[str, int]]) -> PureState:
    """Refine one factor; the first listed new factor is the most significant."""
    layout = state.layout
    pos = layout.index(label)
    into = tuple((str(lab), int(d)) for lab, d in into)
    if prod(d for _, d in into) != layout.dims[pos]:
        raise DimensionMismatchError(
            f"cannot split {label!r} of dim {layout.dims[pos]} into {[d for _, d in into]}"
        )
    factors = layout.factors[:pos] + into + layout.factors[pos + 1 :]
    return PureState(SpaceLayout(factors), state.amplitudes)


def relabel(state: PureState, mapping: dict[str, str]) -> PureState:
    factors = tuple((mapping.get(lab, lab), d) for lab, d in state.layout.factors)
    return PureState(SpaceLayout(factors), state.amplitudes)


def apply_unitary(
    state: PureState, labels: Sequence[str], u: UnitaryMatrix | np.ndarray
) -> PureState:
    """Apply ``u`` to the listed factors (big-endian in listed order)."""
    m = u.matrix if isinstance(u, UnitaryMatrix) else np.asarray(u)
    labels = list(labels)
    layout = state.layout
    d = layout.dims_of(labels)
    if m.shape != (d, d):
        raise DimensionMismatchError(f"unitary of shape {m.shape} on factors of dim {d}")
    idx = [layout.index(lab) for lab in labels]
    rest = [i for i in range(len(layout)) if i not in idx]
    t = np.transpose(state.tensor(), idx + rest).reshape(d, -1)
    t = (m @ t).reshape([layout.dims[i] for i in idx + rest])
    t = np.transpose(t, np.argsort(idx + rest))
    return PureState(layout, t.ravel())


# -- reductions ----------------------------------------------------------------


def _bipartition(state: PureState, labels: Sequence[str]) -> np.ndarray:
    """Amplitude matrix with rows indexed by ``labels`` (layout order) and
    columns by the complement."""
    layout = state.layout
    idx = sorted({layout.index(lab) for lab in labels})
    rest = [i for i in range(len(layout)) if i not in idx]
    dk = prod(layout.dims[i] for i in idx)
    return np.transpose(state.tensor(), idx + rest).reshape(dk, -1)


def partial_trace(state: State, keep_labels: Iterable[str]) -> DensityOp:
    """Reduced density operator on ``keep_labels``, kept in layout order."""
    layout = state.layout
    keep = set(keep_labels)
    for lab in keep:
        layout.index(lab)
    kept_layout = SpaceLayout(tuple(f for f in layout.factors if f[0] in keep))
    if isinstance(state, PureState):
        m = _bipartition(state, [lab for lab in layout.labels if lab in keep])
        return DensityOp(kept_layout, m @ m.conj().T)
    n = len(layout)
    t = state.matrix.reshape(layout.dims + layout.dims)
    for i in reversed(range(n)):
        if layout.labels[i] not in keep:
            t = np.trace(t, axis1=i, axis2=i + t.ndim // 2)
    d = kept_layout.total_dim
    return DensityOp(kept_layout, t.reshape(d, d))


def _small_gram(state: PureState, labels: Sequence[str]) -> np.ndarray:
    # Nonzero spectrum of a reduced state equals that of its complement;
    # use whichever Gram matrix is smaller.
    m = _bipartition(state, labels)
    if m.shape[0] <= m.shape[1]:
        return m @ m.conj().T
    return m.T @ m.conj()


def reduced_purity(state: PureState, labels: Iterable[str]) -> float:
    labels = list(labels)
    for lab in labels:
        state.layout.index(lab)
    g = _small_gram(state, labels)
    return float(np.sum(np.abs(g) ** 2))


def reduced_spectrum(state: PureState, labels: Iterable[str]) -> np.ndarray:
    labels = list(labels)
    for lab in labels:
        state.layout.index(lab)
    return _clamped_eigvals(_small_gram(state, labels))


def reduced_entropy(state: PureState, labels: Iterable[str], base: float = 2) -> float:
    return _entropy_from_eigs(reduced_spectrum(state, labels), base)


# -- scalar functionals ----------------------------------------------------------


def purity(rho: DensityOp) -> float:
    # tr(rho^2) equals the squared Frobenius norm for Hermitian rho.
    return float(np.sum(np.abs(rho.matrix) ** 2))


def _entropy_from_eigs(w: np.ndarray, base: float) -> float:
    w = w[w > EIG_FLOOR]
    if base == 2:
        logs = np.log2(w)
    elif base == np.e:
        logs = np.log(w)
    else:
        raise ModelError(f"entropy base must be 2 or e, got {base!r}")
    return float(max(-np.sum(w * logs), 0.0))


def von_neumann_entropy(rho: DensityOp, base: float = 2) -> float:
    return _entropy_from_eigs(rho.eigenvalues(), base)


def _check_same(rho: DensityOp, sigma: DensityOp) -> None:
    if rho.matrix.shape != sigma.matrix.shape:
        raise DimensionMismatchError(
            f"operators of dimension {rho.matrix.shape[0]} and {sigma.matrix.shape[0]}"
        )


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(m))))


def trace_distance(rho: DensityOp, sigma: DensityOp) -> float:
    """Unnormalized trace distance ``||rho - sigma||_1`` (orthogonal states give 2)."""
    _check_same(rho, sigma)
    return trace_norm(rho.matrix - sigma.matrix)


def fidelity(rho: DensityOp, sigma: DensityOp) -> float:
    """Root fidelity ``||sqrt(rho) sqrt(sigma)||_1``."""
    _check_same(rho, sigma)
    prod_ = _psd_sqrt(rho.matrix) @ _psd_sqrt(sigma.matrix)
    return float(np.sum(np.linalg.svd(prod_, compute_uv=False)))

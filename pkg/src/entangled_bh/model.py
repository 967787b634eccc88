"""Exact small-scale simulation of an evaporating, exterior-entangled interior.

The joint state lives on ``ref (K) x int (2**n) x ext (N)``::

    K**-1/2  sum_i |i>_ref  sum_j sqrt(p_j) (|i>|j> (+) 0)_int  |j>_ext

with the interior index of ``(i, j)`` equal to ``i * N + j`` and all
remaining interior levels empty.  Evaporation applies a Haar unitary to the
interior and splits it into radiation ``R`` and remaining interior ``B``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import analytics
from .errors import BudgetError, CapacityError, DimensionMismatchError, InconsistentParametersError, ModelError
from .haar import SeededStream, haar_isometries, sample_haar
from .tensor import (
    DensityOp,
    PureState,
    SpaceLayout,
    UnitaryMatrix,
    apply_unitary,
    embed_zero_pad,
    fidelity,
    merge_factors,
    partial_trace,
    reduced_entropy,
    split_factor,
    tensor_product,
)

DEFAULT_MAX_DIM = 2**14


@dataclass(frozen=True)
class Uniform:
    nu: int

    def __post_init__(self):
        if self.nu < 0:
            raise ModelError("nu must be >= 0")

    @property
    def dim(self) -> int:
        return 2**self.nu

    @property
    def probs(self) -> np.ndarray:
        n = 2**self.nu
        return np.full(n, 1.0 / n)

    @property
    def log2_purity(self) -> float:
        return float(-self.nu)


@dataclass(frozen=True)
class Explicit:
    p: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(v) for v in self.p)
        object.__setattr__(self, "p", p)
        if not p:
            raise ModelError("explicit spectrum is empty")
        if min(p) < 0 or abs(sum(p) - 1.0) > 1e-9:
            raise ModelError("explicit spectrum must be non-negative and sum to 1")

    @property
    def dim(self) -> int:
        return len(self.p)

    @property
    def probs(self) -> np.ndarray:
        return np.array(self.p)

    @property
    def log2_purity(self) -> float:
        return math.log2(sum(v * v for v in self.p))


ExtSpectrum = Union[Uniform, Explicit]


@dataclass(frozen=True)
class ModelParams:
    k: int
    n: int
    ext_spectrum: ExtSpectrum = field(default_factory=lambda: Uniform(0))
    r: int = 0
    c: float = 2.0

    def __post_init__(self):
        if self.k < 0 or self.n < 1:
            raise ModelError(f"need k >= 0 and n >= 1, got k={self.k}, n={self.n}")
        if not 0 <= self.r <= self.n:
            raise ModelError(f"radiated count r={self.r} outside [0, {self.n}]")
        if self.c < 0:
            raise ModelError("c must be >= 0")
        if self.K * self.N > 2**self.n:
            raise CapacityError(
                f"K*N = {self.K * self.N} does not fit an interior of dimension {2**self.n}"
            )
        analytics.excess_qubits(self.k, self.n, self.log2_ext_purity)

    @classmethod
    def uniform(cls, k: int, n: int, nu: int, r: int = 0, c: float = 2.0) -> "ModelParams":
        return cls(k, n, Uniform(nu), r, c)

    @property
    def K(self) -> int:
        return 2**self.k

    @property
    def N(self) -> int:
        return self.ext_spectrum.dim

    @property
    def nu(self) -> int | None:
        return self.ext_spectrum.nu if isinstance(self.ext_spectrum, Uniform) else None

    @property
    def log2_ext_purity(self) -> float:
        return self.ext_spectrum.log2_purity

    @property
    def x(self) -> float:
        return analytics.excess_qubits(self.k, self.n, self.log2_ext_purity)

    @property
    def total_dim(self) -> int:
        return self.K * 2**self.n * self.N


def check_budget(dim: int, max_dim: int = DEFAULT_MAX_DIM) -> None:
    if dim > max_dim:
        raise BudgetError(f"dimension {dim} exceeds the dense budget {max_dim}")


def _max_entangled(a: str, b: str, d: int) -> PureState:
    amps = np.eye(d).ravel() / np.sqrt(d)
    return PureState(SpaceLayout.of((a, d), (b, d)), amps)


def build_initial_state(params: ModelParams, max_dim: int = DEFAULT_MAX_DIM) -> PureState:
    """Layout ``(ref, int, ext)``; trivial factors are kept with dimension 1."""
    check_budget(params.total_dim, max_dim)
    K, N = params.K, params.N
    refpair = _max_entangled("ref", "_int_ref", K)
    sq = np.sqrt(params.ext_spectrum.probs)
    extpair = PureState(
        SpaceLayout.of(("_int_ext", N), ("ext", N)), (np.diag(sq)).ravel()
    )
    joint = tensor_product(refpair, extpair)
    return embed_zero_pad(joint, ["_int_ref", "_int_ext"], "int", 2**params.n)


def radiate(state: PureState, r_target: int, u: UnitaryMatrix) -> PureState:
    """Apply ``u`` to the interior and split it into ``R`` (2**r) and ``B``."""
    d = state.layout.dim("int")
    n = int(round(math.log2(d)))
    if 2**n != d:
        raise DimensionMismatchError(f"interior dimension {d} is not a power of two")
    if not 0 <= r_target <= n:
        raise DimensionMismatchError(f"cannot radiate {r_target} of {n} qubits")
    state = apply_unitary(state, ["int"], u)
    return split_factor(state, "int", [("R", 2**r_target), ("B", 2 ** (n - r_target))])


def evaporate(state: PureState, r_target: int, stream: SeededStream) -> PureState:
    u = sample_haar(state.layout.dim("int"), stream)
    return radiate(state, r_target, u)


def _interior(state: PureState) -> PureState:
    labels = state.layout.labels
    if "int" in labels:
        return state
    return merge_factors(state, ["R", "B"], "int")


def decoder_unitary(u: UnitaryMatrix, K: int, N: int) -> np.ndarray:
    """``W U^dag`` where ``W`` sends interior level ``i*N + j`` to
    ``(out=i, junk=j)``, i.e. to index ``i*J + j`` with ``J = dim / K``."""
    d = u.dim
    if d % K or K * N > d:
        raise DimensionMismatchError(f"cannot decode K={K}, N={N} from dimension {d}")
    J = d // K
    src = [i * N + j for i in range(K) for j in range(N)]
    dst = [i * J + j for i in range(K) for j in range(N)]
    src += sorted(set(range(d)) - set(src))
    dst += sorted(set(range(d)) - set(dst))
    perm = np.zeros((d, d))
    perm[dst, src] = 1.0
    return perm @ u.matrix.conj().T


def build_decoder_and_fidelity(state: PureState, u: UnitaryMatrix) -> float:
    """Entanglement fidelity of ref with the decoded output of ``(R, B)``.

    The decoder is built from the known unitary ``u``; it maps the encoded
    levels back to ``|i>_out |j>_junk``.
    """
    state = _interior(state)
    K, N = state.layout.dim("ref"), state.layout.dim("ext")
    v = decoder_unitary(u, K, N)
    state = apply_unitary(state, ["int"], v)
    state = split_factor(state, "int", [("out", K), ("junk", u.dim // K)])
    rho = partial_trace(state, ["ref", "out"])
    phi = np.eye(K).ravel() / np.sqrt(K)
    return float(np.real(phi.conj() @ rho.matrix @ phi))


def encode_isometry(params: ModelParams, q: np.ndarray, r_target: int) -> PureState:
    """The radiated state for a unitary whose first ``K*N`` columns are ``q``.

    Only those columns act on the zero-padded initial state, so this equals
    ``radiate(build_initial_state(params), r_target, u)`` for any completion
    ``u`` of ``q``.  Layout ``(ref, R, B, ext)``.
    """
    K, N, d = params.K, params.N, 2**params.n
    if q.shape != (d, K * N):
        raise DimensionMismatchError(f"isometry shape {q.shape} != {(d, K * N)}")
    if not 0 <= r_target <= params.n:
        raise DimensionMismatchError(f"cannot radiate {r_target} of {params.n} qubits")
    sq = np.sqrt(params.ext_spectrum.probs)
    amps = q.reshape(d, K, N).transpose(1, 0, 2) * sq / np.sqrt(K)
    layout = SpaceLayout.of(("ref", K), ("R", 2**r_target), ("B", d // 2**r_target), ("ext", N))
    return PureState(layout, amps.ravel())


def isometric_decoder_fidelity(state: PureState, q: np.ndarray) -> float:
    """Entanglement fidelity after decoding ``(R, B)`` with ``q^dag``.

    ``q^dag`` followed by ``i*N + j -> |i>_out |j>_junk`` inverts the encoding
    on the range of ``q``, which holds the whole state.
    """
    state = _interior(state)
    if state.layout.labels != ("ref", "int", "ext"):
        raise DimensionMismatchError(f"expected (ref, R, B, ext), got {state.layout.labels}")
    K, d, N = state.layout.dims
    if q.shape[0] != d or q.shape[1] % K:
        raise DimensionMismatchError(f"isometry shape {q.shape} does not act on dimension {d}")
    y = np.einsum("xc,axe->ace", q.conj(), state.tensor())
    y = y.reshape(K, K, q.shape[1] // K, N)
    overlap = np.einsum("aaje->je", y) / np.sqrt(K)
    return float(np.sum(np.abs(overlap) ** 2))


def decoupling_fidelity(state: PureState, a2_label: str) -> float:
    """Uhlmann fidelity ``F(sigma_{ref,A2}, sigma_ref (x) sigma_A2)``.

    This is the best achievable recovery fidelity of the ref entanglement
    from the complement of ``A2`` (that is, from ``A1`` and ``ext``).
    """
    joint = partial_trace(state, ["ref", a2_label])
    rho_ref = partial_trace(state, ["ref"])
    rho_a2 = partial_trace(state, [a2_label])
    prod_ = DensityOp(joint.layout, _ordered_kron(joint.layout, rho_ref, rho_a2))
    return fidelity(joint, prod_)


def _ordered_kron(layout: SpaceLayout, a: DensityOp, b: DensityOp) -> np.ndarray:
    if layout.labels[0] == a.layout.labels[0]:
        return np.kron(a.matrix, b.matrix)
    return np.kron(b.matrix, a.matrix)


# -- cascaded evolution ----------------------------------------------------------

SUBSYSTEMS = ("R", "R,ext", "B", "B,ext")


@dataclass(frozen=True)
class StepRecord:
    """Exact entropies (bits) and correlations after ``r`` radiated qubits."""

    r: int
    draw: int | None
    entropies: dict[str, float]
    correlations: dict[str, float]


@dataclass(frozen=True)
class EvaporationRecord:
    stream_index: int
    infall_step: int | None
    infall_qubits: int
    steps: tuple[StepRecord, ...]

    def series(self, key: str) -> np.ndarray:
        return np.array([s.correlations[key] for s in self.steps])

    def monogamy_residuals(self) -> np.ndarray:
        """``C(ref:B) + C(ref:rest) - S(ref)`` and the R counterpart, where
        ``rest`` is the full complement of ``(ref, B)`` (resp. ``(ref, R)``)."""
        out = []
        for s in self.steps:
            e, c = s.entropies, s.correlations
            out.append(c["ref:B"] + c["ref:~B"] - e["ref"])
            out.append(c["ref:R"] + c["ref:~R"] - e["ref"])
        return np.array(out)


def _groups(x: str) -> list[str]:
    return x.split(",")


def _step_record(state: PureState, r: int, draw: int | None) -> StepRecord:
    labels = state.layout.labels
    has_ref2 = "ref2" in labels
    cache: dict[frozenset, float] = {}

    def S(group: Sequence[str]) -> float:
        key = frozenset(group)
        if key not in cache:
            cache[key] = reduced_entropy(state, sorted(key, key=labels.index))
        return cache[key]

    ent = {"ref": S(["ref"]), "ref2": S(["ref2"]) if has_ref2 else 0.0}
    corr = {}
    for x in SUBSYSTEMS:
        xs = _groups(x)
        ent[x] = S(xs)
        for tag in ("ref", "ref2"):
            if tag == "ref2" and not has_ref2:
                corr[f"ref2:{x}"] = 0.0
                continue
            corr[f"{tag}:{x}"] = 0.5 * (ent[tag] + S(xs) - S([tag, *xs]))
    for x in ("B", "R"):
        rest = [lab for lab in labels if lab not in ("ref", x)]
        corr[f"ref:~{x}"] = 0.5 * (ent["ref"] + S(rest) - S(["ref", *rest]))
    return StepRecord(r, draw, ent, corr)


def _radiate_one(state: PureState, u: np.ndarray) -> PureState:
    state = apply_unitary(state, ["B"], u)
    dB = state.layout.dim("B")
    state = split_factor(state, "B", [("_q", 2), ("B", dB // 2)])
    return merge_factors(state, ["R", "_q"], "R")


def _infall(state: PureState, k2: int) -> PureState:
    pair = _max_entangled("ref2", "_fresh", 2**k2)
    state = tensor_product(state, pair)
    return merge_factors(state, ["B", "_fresh"], "B")


def cascaded_infall(
    params: ModelParams,
    k2: int,
    r0: int | None,
    stream: SeededStream,
    max_dim: int = DEFAULT_MAX_DIM,
) -> EvaporationRecord:
    """Radiate one qubit at a time, with a fresh Haar unitary on the current
    interior before each one.

    If ``r0`` is given, after ``r0`` qubits have radiated a reference
    ``ref2`` of ``k2`` qubits is appended, maximally entangled with ``k2``
    new interior qubits.  Step ``r`` of the record is taken after the r-th
    radiated qubit and before any infall scheduled at ``r``.
    """
    if k2 < 0:
        raise ModelError("k2 must be >= 0")
    if r0 is not None and not 0 <= r0 <= params.n:
        raise ModelError(f"infall step {r0} outside [0, {params.n}]")
    active = r0 if k2 > 0 else None
    grow = 2**k2 if active is not None else 1
    check_budget(params.total_dim * grow * grow, max_dim)

    state = build_initial_state(params, max_dim)
    state = split_factor(state, "int", [("R", 1), ("B", 2**params.n)])
    rng = stream.generator()
    total = params.n + (k2 if active is not None else 0)
    steps = [_step_record(state, 0, None)]
    for r in range(total):
        if active is not None and r == active:
            state = _infall(state, k2)
        dB = state.layout.dim("B")
        u = haar_isometries(dB, dB, 1, rng)[0]
        state = _radiate_one(state, u)
        steps.append(_step_record(state, r + 1, r))
    return EvaporationRecord(stream.stream_index, r0, k2, tuple(steps))


def evaporation_record(params: ModelParams, stream: SeededStream, max_dim: int = DEFAULT_MAX_DIM) -> EvaporationRecord:
    """Cascaded evolution without any later infall."""
    return cascaded_infall(params, 0, None, stream, max_dim)


def infall_onset(
    params: ModelParams, k2: int, r0: int, runs: int, master_seed: int, window: int | None = None
) -> dict:
    """Mean ``C(ref2 : R, ext)`` over ``runs`` cascaded runs, and whether it
    reaches ``0.9 * k2`` bits within ``window`` (default ``k2 + 2``) further
    radiated qubits."""
    window = k2 + 2 if window is None else window
    curves = np.array([
        cascaded_infall(params, k2, r0, SeededStream.for_task(master_seed, j)).series("ref2:R,ext")
        for j in range(runs)
    ])
    mean = curves.mean(axis=0)
    lo, hi = r0 + 1, min(r0 + window, len(mean) - 1)
    best = float(mean[lo : hi + 1].max())
    return {
        "mean_c_ref2_R_ext": [float(v) for v in mean],
        "window": [lo, hi],
        "best_in_window": best,
        "threshold": 0.9 * k2,
        "pass": bool(best >= 0.9 * k2),
    }

"""Monte Carlo checks of the analytic results against exact sampled states.

Samples are drawn in shards.  Shard ``s`` of task ``j`` draws from stream
``j * 2**32 + s``; the task index is derived from the grid point itself so a
point gives the same numbers whatever grid it is part of.  Shard statistics
are merged through (count, sum, sum of squares) accumulators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from . import analytics
from .analytics import GROUPS, PurityTable
from .errors import BudgetError, ModelError
from .model import ModelParams, encode_isometry, isometric_decoder_fidelity
from .haar import SeededStream, haar_isometries, twirl_swap_coefficients, twirled_swap_mc

SHARD = 1024
N_SE = 4.0
ABS_SLACK = 1e-10
GRID_MAX_QUBITS = 12
# Per-sample flop allowance (d**3 units) for vacuous decoupling points.
VACUOUS_BUDGET = 2**22

_AXES = {"ref": 1, "R": 2, "B": 3, "ext": 4}


@dataclass
class RunningStats:
    count: int = 0
    total: np.ndarray | float = 0.0
    total_sq: np.ndarray | float = 0.0

    def add(self, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=float)
        self.count += values.shape[0]
        self.total = self.total + values.sum(axis=0)
        self.total_sq = self.total_sq + (values**2).sum(axis=0)

    def merge(self, other: "RunningStats") -> "RunningStats":
        return RunningStats(
            self.count + other.count, self.total + other.total, self.total_sq + other.total_sq
        )

    @property
    def mean(self):
        if self.count == 0:
            return np.full(np.shape(self.total), np.nan)
        return self.total / self.count

    @property
    def se(self):
        if self.count < 2:
            return np.full(np.shape(self.total), np.nan)
        var = (self.total_sq - self.count * self.mean**2) / (self.count - 1)
        return np.sqrt(np.maximum(var, 0.0) / self.count)


def desk_grid(max_qubits: int = GRID_MAX_QUBITS) -> list[tuple[int, int, int, int]]:
    """All ``(k, nu, r, b)`` with ``k + nu <= r + b``, ``r + b >= 1`` and total
    dimension ``2**(k + nu + r + b) <= 2**max_qubits``."""
    m = max_qubits
    return [
        (k, nu, r, b)
        for k in range(m + 1)
        for nu in range(m + 1 - k)
        for r in range(m + 1 - k - nu)
        for b in range(m + 1 - k - nu - r)
        if r + b >= 1 and k + nu <= r + b
    ]


def _task_index(tag: int, *parts: int) -> int:
    j = tag
    for p in parts:
        j = j * 64 + p
    return j


def _shards(samples: int, master_seed: int, task: int) -> Iterator[tuple[int, np.random.Generator]]:
    s = 0
    left = samples
    while left:
        m = min(SHARD, left)
        yield m, SeededStream.for_task(master_seed, task, s).generator()
        left -= m
        s += 1


def sample_states(k: int, nu: int, r: int, b: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` post-evaporation states with uniform ext, as arrays of shape
    ``(count, K, R, B, N)``.

    Only the ``K*N`` occupied interior levels matter, so the first ``K*N``
    columns of each Haar unitary are drawn.
    """
    K, N, R, B = 2**k, 2**nu, 2**r, 2**b
    q = haar_isometries(R * B, K * N, count, rng)
    psi = q.reshape(count, R * B, K, N).transpose(0, 2, 1, 3) / np.sqrt(K * N)
    return psi.reshape(count, K, R, B, N)


def _matrix(psi: np.ndarray, axes: list[int]) -> np.ndarray:
    rest = [a for a in (1, 2, 3, 4) if a not in axes]
    t = np.transpose(psi, [0, *axes, *rest])
    dx = int(np.prod([psi.shape[a] for a in axes]))
    return t.reshape(psi.shape[0], dx, -1)


def _gram(m: np.ndarray) -> np.ndarray:
    if m.shape[1] <= m.shape[2]:
        return m @ np.conj(np.swapaxes(m, 1, 2))
    return np.swapaxes(m, 1, 2) @ np.conj(m)


def group_purities(psi: np.ndarray) -> np.ndarray:
    """Purities of every group in ``GROUPS``, shape ``(count, 9)``."""
    out = np.empty((psi.shape[0], len(GROUPS)))
    for g, name in enumerate(GROUPS):
        gr = _gram(_matrix(psi, [_AXES[lab] for lab in name.split(",")]))
        out[:, g] = np.sum(np.abs(gr) ** 2, axis=(1, 2))
    return out


def group_entropies(psi: np.ndarray) -> np.ndarray:
    out = np.empty((psi.shape[0], len(GROUPS)))
    for g, name in enumerate(GROUPS):
        w = np.linalg.eigvalsh(_gram(_matrix(psi, [_AXES[lab] for lab in name.split(",")])))
        w = np.where(w > 1e-12, w, 1.0)
        out[:, g] = -np.sum(w * np.log2(w), axis=1)
    return out


def purity_complement_gap(psi: np.ndarray) -> float:
    """Largest sample-wise gap between a group purity computed directly and
    from its complement in the pure global state."""
    gap = 0.0
    for name in GROUPS:
        axes = [_AXES[lab] for lab in name.split(",")]
        rest = [a for a in (1, 2, 3, 4) if a not in axes]
        p = []
        for ax in (axes, rest):
            m = _matrix(psi, ax)
            p.append(np.sum(np.abs(m @ np.conj(np.swapaxes(m, 1, 2))) ** 2, axis=(1, 2)))
        gap = max(gap, float(np.abs(p[0] - p[1]).max()))
    return gap


# -- purity verification -------------------------------------------------------


@dataclass
class PurityCheck:
    point: tuple[int, int, int, int]
    group: str
    analytic: float
    mc_mean: float
    se: float
    passed: bool
    entropy_mean: float | None = None
    entropy_se: float | None = None

    def as_dict(self) -> dict:
        d = {
            "k": self.point[0],
            "nu": self.point[1],
            "r": self.point[2],
            "b": self.point[3],
            "group": self.group,
            "analytic": self.analytic,
            "mc_mean": self.mc_mean,
            "se": self.se,
            "pass": self.passed,
        }
        if self.entropy_mean is not None:
            d["entropy_mean_bits"] = self.entropy_mean
            d["entropy_se"] = self.entropy_se
        return d


@dataclass
class Report:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {"pass": self.passed, "checks": [c.as_dict() for c in self.checks]}


def _within(mean: float, target: float, se: float) -> bool:
    slack = N_SE * (0.0 if np.isnan(se) else se) + ABS_SLACK
    return bool(abs(mean - target) <= slack)


def _purity(g: np.ndarray) -> np.ndarray:
    return np.einsum("sij,sij->s", g.real, g.real) + np.einsum("sij,sij->s", g.imag, g.imag)


def _halving_gram(pair: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Purity of the Gram of ``pair`` (shape ``(count, 2, rows, cols)``, the
    leading 2 being one row qubit) and the Gram with that qubit traced out.
    The off-diagonal block is only needed through its norm."""
    # reshapes of size-1 factors can leave a strided view that misses BLAS
    pair = np.ascontiguousarray(pair)
    m0, m1 = pair[:, 0], pair[:, 1]
    conj = np.conj(pair)
    c0, c1 = np.swapaxes(conj[:, 0], 1, 2), np.swapaxes(conj[:, 1], 1, 2)
    g00, g11, g01 = m0 @ c0, m1 @ c1, m0 @ c1
    return _purity(g00) + _purity(g11) + 2.0 * _purity(g01), g00 + g11


def _radiation_table(t: np.ndarray, n: int, m: int, kmax: int) -> np.ndarray:
    """``P[k, r] = tr rho_{ref_k, R_r}^2`` for all ``k <= kmax`` and ``r <= n``.

    ``t`` has shape ``(count, 2**n, 2**m)``: rows are interior levels, whose
    top ``r`` qubits form ``R_r``, and columns are ``(ref, ext)`` levels, whose
    top ``k`` qubits form ``ref_k``.  For each ``k`` one explicit matrix is
    built on whichever of ``(ref_k, R_r)`` or its complement ``(B_r, ext_k)``
    is smaller at the crossover, and the other values of ``r`` follow by
    tracing one interior qubit at a time.
    """
    count = t.shape[0]
    h = (n + m) // 2
    P = np.empty((m + 1, n + 1, count))
    for k in range(kmax + 1):
        K, N = 2**k, 2 ** (m - k)
        if k <= h:
            # rows (ref_k, R_rf); the lowest row bit is the lowest R qubit
            rf = min(h - k, n)
            R = 2**rf
            if rf == 0:
                mat = t.reshape(count, -1, K, N).transpose(0, 2, 1, 3).reshape(count, K, -1)
                P[k, 0] = _purity(_gram(mat))
            else:
                pair = t.reshape(count, R // 2, 2, -1, K, N).transpose(0, 2, 4, 1, 3, 5)
                P[k, rf], rho = _halving_gram(pair.reshape(count, 2, K * R // 2, -1))
                for r in range(rf - 1, -1, -1):
                    P[k, r] = _purity(rho)
                    if r:
                        rho = rho[:, 0::2, 0::2] + rho[:, 1::2, 1::2]
        r0 = max(h + 1 - k, 0)
        if r0 <= n:
            # rows (B_r0, ext_k); the top row bit is the top B qubit
            B = 2 ** (n - r0)
            mat = t.reshape(count, -1, B, K, N).transpose(0, 2, 4, 1, 3).reshape(count, B * N, -1)
            if r0 == n:
                P[k, n] = _purity(_gram(mat))
            else:
                P[k, r0], rho = _halving_gram(mat.reshape(count, 2, B * N // 2, -1))
                for r in range(r0 + 1, n + 1):
                    P[k, r] = _purity(rho)
                    if r < n:
                        hh = rho.shape[1] // 2
                        rho = rho[:, :hh, :hh] + rho[:, hh:, hh:]
    return P


def _bit_reversal(n: int) -> np.ndarray:
    """Permutation of ``2**n`` levels that reverses the qubit order."""
    idx = np.arange(2**n)
    out = np.zeros_like(idx)
    for bit in range(n):
        out |= ((idx >> bit) & 1) << (n - 1 - bit)
    return out


def batch_purities(q: np.ndarray, splits: Iterable[tuple[int, int, int, int]]) -> dict:
    """Group purities for every ``(k, nu, r, b)`` split of one batch of isometries.

    ``q`` has shape ``(count, 2**(r+b), 2**(k+nu))``; the state for a split is
    ``q`` with rows read as ``(R, B)`` and columns as ``(ref, ext)``, divided
    by the square root of the column count.  Groups split off by the pure
    global state (``R,ext`` and ``B,ext``) reuse their complements, and
    ``(ref, B)`` is the ``(ref, R)`` table of the bit-reversed interior.
    With all of ``ref`` and no ``ext``, ``(ref, R)`` is the complement of
    ``B``, so the last column of each table is the first of the other.
    """
    count, D, M = q.shape
    n, m = D.bit_length() - 1, M.bit_length() - 1
    splits = list(splits)
    for k, nu, r, b in splits:
        if k + nu != m or r + b != n:
            raise ModelError(f"split {(k, nu, r, b)} does not match batch shape {q.shape}")
    t = q / np.sqrt(M)
    p_ref_r = _radiation_table(t, n, m, m - 1 if m else 0)
    if m:
        p_ref_b = _radiation_table(t[:, _bit_reversal(n), :], n, m, m - 1)
        p_ref_r[m] = p_ref_b[0, ::-1]
    else:
        p_ref_b = p_ref_r[:, ::-1].copy()
    p_ref_b[m] = p_ref_r[0, ::-1]
    col_gram = np.conj(np.swapaxes(q, 1, 2)) @ q / M
    by_knu: dict[tuple[int, int], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
    out = {}
    for k, nu, r, b in splits:
        K, N = 2**k, 2**nu
        if (k, nu) not in by_knu:
            g4 = col_gram.reshape(count, K, N, K, N)
            by_knu[(k, nu)] = (
                _purity(np.einsum("sajbj->sab", g4)),
                _purity(np.einsum("siaib->sab", g4)),
                _purity(col_gram),
            )
        p_ref, p_ext, p_ref_ext = by_knu[(k, nu)]
        vals = {
            "ref": p_ref,
            "ext": p_ext,
            "R": p_ref_r[0, r],
            "B": p_ref_b[0, b],
            "ref,ext": p_ref_ext,
            "ref,R": p_ref_r[k, r],
            "ref,B": p_ref_b[k, b],
            "R,ext": p_ref_b[k, b],
            "B,ext": p_ref_r[k, r],
        }
        out[(k, nu, r, b)] = np.stack([vals[g] for g in GROUPS], axis=1)
    return out


def verify_purities(
    points: Iterable[tuple[int, int, int, int]],
    samples: int,
    master_seed: int,
    analytic: Callable[[int, int, int, int], PurityTable] = analytics.purity_table,
    entropies: bool = False,
    max_qubits: int = GRID_MAX_QUBITS,
) -> Report:
    """Compare Monte Carlo mean purities with ``analytic`` at each point.

    Points with equal interior size and equal ``k + nu`` share one batch of
    Haar isometries (their states are reshapes of the same array), keyed by
    ``(r + b, k + nu)``.  ``analytic`` defaults to the closed form; tests
    pass a corrupted table to confirm failures are reported.
    """
    points = check_points(points)
    for p in points:
        if sum(p) > max_qubits:
            raise BudgetError(f"grid point {p} exceeds 2**{max_qubits}")
    families: dict[tuple[int, int], list] = {}
    for p in points:
        families.setdefault((p[2] + p[3], p[0] + p[1]), []).append(p)

    stats = {p: RunningStats() for p in points}
    ent = {p: RunningStats() for p in points}
    for (n, m), members in families.items():
        for count, rng in _shards(samples, master_seed, _task_index(1, n, m)):
            q = haar_isometries(2**n, 2**m, count, rng)
            for p, vals in batch_purities(q, members).items():
                stats[p].add(vals)
            if entropies:
                for k, nu, r, b in members:
                    psi = q.reshape(count, 2**r, 2**b, 2**k, 2**nu).transpose(0, 3, 1, 2, 4)
                    ent[(k, nu, r, b)].add(group_entropies(psi / np.sqrt(2**m)))

    report = Report()
    for p in points:
        table = analytic(*p)
        mean, se = stats[p].mean, stats[p].se
        for g, name in enumerate(GROUPS):
            target = 2.0 ** table.log2(name)
            report.checks.append(
                PurityCheck(
                    point=p,
                    group=name,
                    analytic=target,
                    mc_mean=float(mean[g]),
                    se=float(se[g]),
                    passed=_within(float(mean[g]), target, float(se[g])),
                    entropy_mean=float(ent[p].mean[g]) if entropies else None,
                    entropy_se=float(ent[p].se[g]) if entropies else None,
                )
            )
    return report


# -- decoupling ------------------------------------------------------------------


def decoupling_distances(psi: np.ndarray, a2_axis: int) -> np.ndarray:
    """``|| sigma_{ref,A2} - sigma_ref (x) sigma_A2 ||_1`` per sample.

    ``sigma_ref`` is exactly ``I/K`` because the unitary never touches ref.
    When ``A2`` exceeds the rank of ``sigma_A2`` the difference is evaluated
    on ``I_K (x) range(sigma_A2)``, which contains its support.
    """
    count, K = psi.shape[0], psi.shape[1]
    a1_axis = 3 if a2_axis == 2 else 2
    A2 = psi.shape[a2_axis]
    # rows (ref, A2), columns (A1, ext)
    m = np.transpose(psi, [0, 1, a2_axis, a1_axis, 4]).reshape(count, K, A2, -1)
    cols = m.shape[-1]
    if A2 > K * cols:
        # coordinates of the columns of w in an orthonormal basis of their span
        w = np.transpose(m, [0, 2, 1, 3]).reshape(count, A2, K * cols)
        coords = np.linalg.qr(w, mode="r")
        m = np.transpose(coords.reshape(count, -1, K, cols), [0, 2, 1, 3])
    d2 = m.shape[2]
    # contiguous operands keep the batched products on BLAS
    flat = np.ascontiguousarray(m.reshape(count, K * d2, cols))
    diff = flat @ np.conj(np.swapaxes(flat, 1, 2))
    blocks = diff.reshape(count, K, d2, K, d2)
    # sigma_A2 is the ref partial trace of sigma_{ref,A2}
    sigma_a2 = np.einsum("sijik->sjk", blocks) / K
    for i in range(K):
        blocks[:, i, :, i, :] -= sigma_a2
    return np.abs(np.linalg.eigvalsh(diff)).sum(axis=1)


@dataclass
class DecouplingCheck:
    point: tuple[int, int, int, int]
    a1: str
    rhs: float
    samples: int
    mean_distance: float
    se: float
    vacuous: bool
    passed: bool

    @property
    def squared_mean(self) -> float:
        return self.mean_distance**2

    def as_dict(self) -> dict:
        return {
            "K": 2 ** self.point[0],
            "N": 2 ** self.point[1],
            "R": 2 ** self.point[2],
            "B": 2 ** self.point[3],
            "a1": self.a1,
            "rhs": self.rhs,
            "samples": self.samples,
            "mean_distance": self.mean_distance,
            "squared_mean": self.squared_mean,
            "se": None if np.isnan(self.se) else self.se,
            "vacuous": self.vacuous,
            "pass": self.passed,
        }


def verify_decoupling(
    points: Iterable[tuple[int, int, int, int]],
    samples: int,
    master_seed: int,
    max_qubits: int = GRID_MAX_QUBITS,
) -> Report:
    """Check ``(E ||sigma_{ref,A2} - sigma_ref (x) sigma_A2||_1)**2 <= rhs`` for
    both assignments of ``(R, B)`` to ``(A1, A2)``.

    The mean minus 4 standard errors must satisfy the bound.  Where
    ``rhs >= 4`` the bound holds for every state (the distance never exceeds
    2), so those roles are flagged vacuous and get a sample count capped by
    ``VACUOUS_BUDGET``, possibly zero.  Points share isometry batches by
    ``(r + b, k + nu)`` as in ``verify_purities``.
    """
    points = list(points)
    roles: dict[tuple[int, int, int, int], list] = {}
    families: dict[tuple[int, int], list] = {}
    for point in points:
        k, nu, r, b = point
        if k + nu + r + b > max_qubits:
            raise BudgetError(f"grid point {point} exceeds 2**{max_qubits}")
        K, N = 2**k, 2**nu
        roles[point] = []
        for a1q, a2q, a2_axis in ((r, b, 3), (b, r, 2)):
            rhs = analytics.decoupling_rhs(k, nu, a1q, a2q)
            vacuous = rhs >= 4.0
            d = K * min(2**a2q, K * 2**a1q * N)
            n_samp = samples if not vacuous else min(samples, VACUOUS_BUDGET // d**3)
            roles[point].append((rhs, vacuous, n_samp, a2_axis, RunningStats()))
        families.setdefault((r + b, k + nu), []).append(point)

    for (n, m), members in families.items():
        total = max(x[2] for p in members for x in roles[p])
        done = 0
        for count, rng in _shards(total, master_seed, _task_index(2, n, m)):
            t = haar_isometries(2**n, 2**m, count, rng) / np.sqrt(2**m)
            for k, nu, r, b in members:
                psi = None
                for _, _, n_samp, a2_axis, stats in roles[(k, nu, r, b)]:
                    take = min(count, n_samp - done)
                    if take <= 0:
                        continue
                    if psi is None:
                        psi = t.reshape(count, 2**r, 2**b, 2**k, 2**nu).transpose(0, 3, 1, 2, 4)
                    stats.add(decoupling_distances(psi[:take], a2_axis))
            done += count

    report = Report()
    for point in points:
        for role, (rhs, vacuous, n_samp, _, stats) in enumerate(roles[point]):
            mean, se = float(stats.mean), float(stats.se)
            lower = max(mean - N_SE * (0.0 if np.isnan(se) else se), 0.0)
            report.checks.append(
                DecouplingCheck(
                    point=point,
                    a1="R" if role == 0 else "B",
                    rhs=rhs,
                    samples=n_samp,
                    mean_distance=mean,
                    se=se,
                    vacuous=vacuous,
                    passed=vacuous or lower**2 <= rhs + ABS_SLACK,
                )
            )
    return report


# -- twirl -----------------------------------------------------------------------

TWIRL_TOL = 0.05
DEFAULT_TWIRL_PAIRS = ((1, 4), (2, 2), (4, 1), (2, 4))


@dataclass
class TwirlCheck:
    a1: int
    a2: int
    alpha: float
    beta: float
    frobenius: float
    trace_mc: float
    trace_exact: float
    tol: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "a1": self.a1,
            "a2": self.a2,
            "alpha": self.alpha,
            "beta": self.beta,
            "frobenius_distance": self.frobenius,
            "trace_mc": self.trace_mc,
            "trace_exact": self.trace_exact,
            "tol": self.tol,
            "pass": self.passed,
        }


def verify_twirl(
    pairs: Iterable[tuple[int, int]], samples: int, master_seed: int, tol: float = TWIRL_TOL
) -> Report:
    report = Report()
    for a1, a2 in pairs:
        if a1 * a2 > 64:
            raise BudgetError("twirl check limited to a1 * a2 <= 64")
        coeffs = twirl_swap_coefficients(a1, a2)
        mc = twirled_swap_mc(a1, a2, samples, SeededStream.for_task(master_seed, _task_index(4, a1, a2)))
        a = a1 * a2
        exact_op = coeffs.operator()
        dist = float(np.linalg.norm(mc - exact_op))
        report.checks.append(
            TwirlCheck(
                a1=a1,
                a2=a2,
                alpha=coeffs.alpha,
                beta=coeffs.beta,
                frobenius=dist,
                trace_mc=float(np.trace(mc).real),
                trace_exact=float(coeffs.alpha * a * a + coeffs.beta * a),
                tol=tol,
                passed=dist < tol,
            )
        )
    return report


# -- decoder -------------------------------------------------------------------

DECODER_TOL = 1e-10


@dataclass
class DecoderCheck:
    k: int
    nu: int
    n: int
    r: int
    samples: int
    min_fidelity: float
    max_error: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "nu": self.nu,
            "n": self.n,
            "r": self.r,
            "samples": self.samples,
            "min_fidelity": self.min_fidelity,
            "max_error": self.max_error,
            "pass": self.passed,
        }


def decoder_grid(max_qubits: int = GRID_MAX_QUBITS) -> list[tuple[int, int, int]]:
    """All ``(k, nu, n)`` with ``k + nu <= n`` and ``k + nu + n <= max_qubits``."""
    return [
        (k, nu, n)
        for n in range(1, max_qubits + 1)
        for k in range(n + 1)
        for nu in range(n + 1 - k)
        if k + nu + n <= max_qubits
    ]


def verify_decoder(
    triples: Iterable[tuple[int, int, int]], samples: int, master_seed: int, tol: float = DECODER_TOL
) -> Report:
    """Decode ``(R, B)`` with the inverse of the sampled unitary at every
    radiated count and require unit entanglement fidelity for every draw."""
    report = Report()
    for k, nu, n in triples:
        params = ModelParams.uniform(k, n, nu)
        d, cols = 2**n, params.K * params.N
        fids = np.empty((n + 1, samples))
        for start, (m, rng) in zip(range(0, samples, SHARD), _shards(samples, master_seed, _task_index(5, k, nu, n))):
            qs = haar_isometries(d, cols, m, rng)
            for s, q in enumerate(qs):
                for r in range(n + 1):
                    fids[r, start + s] = isometric_decoder_fidelity(encode_isometry(params, q, r), q)
        for r in range(n + 1):
            err = float(np.abs(fids[r] - 1.0).max())
            report.checks.append(
                DecoderCheck(k, nu, n, r, samples, float(fids[r].min()), err, err <= tol)
            )
    return report


def check_points(points: Iterable[tuple[int, int, int, int]]) -> list[tuple[int, int, int, int]]:
    pts = []
    for p in points:
        if len(p) != 4 or min(p) < 0 or p[0] + p[1] > p[2] + p[3] or p[2] + p[3] < 1:
            raise ModelError(f"invalid grid point {p}")
        pts.append(tuple(int(v) for v in p))
    return pts

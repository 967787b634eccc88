"""Closed-form Haar-averaged purities, correlations, and fidelity bounds.

Everything is evaluated from qubit counts in the log2 domain so that a
100-qubit interior (dimensions near 2**100, squared near 2**200) never
overflows.  Subsystem purities assume a uniform external spectrum of
``2**nu`` levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .errors import InconsistentParametersError, ModelError

_LN2 = math.log(2.0)
TOL = 1e-9

GROUPS = ("ref", "ext", "R", "B", "ref,ext", "ref,R", "ref,B", "R,ext", "B,ext")
CORRELATION_GROUPS = ("B", "R,ext", "B,ext", "R")


def log2_add(a: float, b: float) -> float:
    """``log2(2**a + 2**b)``; symmetric in its arguments bit for bit."""
    hi, lo = (a, b) if a >= b else (b, a)
    if lo == -math.inf:
        return hi
    return hi + math.log1p(2.0 ** (lo - hi)) / _LN2


def log2_sq_minus_one(q: float) -> float:
    """``log2(d**2 - 1)`` for ``d = 2**q``, as ``2q + log2(1 - 2**(-2q))``."""
    if q == 0:
        return -math.inf
    return 2.0 * q + math.log1p(-(2.0 ** (-2.0 * q))) / _LN2


def _mixed_term(q_keep: float, q_other: float, w_keep: float, w_other: float) -> float:
    """log2 of ``[X (Y**2-1) 2**w_keep + Y (X**2-1) 2**w_other] / ((XY)**2 - 1)``
    with ``X = 2**q_keep`` and ``Y = 2**q_other``."""
    num = log2_add(
        q_keep + log2_sq_minus_one(q_other) + w_keep,
        q_other + log2_sq_minus_one(q_keep) + w_other,
    )
    return num - log2_sq_minus_one(q_keep + q_other)


@dataclass(frozen=True)
class PurityTable:
    """log2 of the Haar-averaged purity of each subsystem group."""

    k: int
    nu: int
    r: int
    b: int
    ref: float
    ext: float
    R: float
    B: float
    ref_ext: float
    ref_R: float
    ref_B: float
    R_ext: float
    B_ext: float

    def log2(self, group: str) -> float:
        attr = group.replace(",", "_")
        if group not in GROUPS:
            raise ModelError(f"unknown group {group!r}")
        return getattr(self, attr)

    def linear(self) -> dict[str, float]:
        return {g: 2.0 ** self.log2(g) for g in GROUPS}

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def purity_table(k: int, nu: int, r: int, b: int) -> PurityTable:
    if min(k, nu, r, b) < 0:
        raise ModelError("qubit counts must be non-negative")
    n = r + b
    if k + nu > n:
        raise ModelError(f"capacity violated: k + nu = {k + nu} > r + b = {n}")
    if n == 0:
        # everything one-dimensional
        return PurityTable(k, nu, r, b, *([0.0] * 9))

    # p(R) = [R(B^2-1) + B(R^2-1)/(KN)] / ((RB)^2-1)
    # p(R,ext) = [R(B^2-1)/N + B(R^2-1)/K] / ((RB)^2-1)
    # R<->B gives p(B), p(B,ext); K<->N gives p(ref,R), p(ref,B).
    return PurityTable(
        k=k,
        nu=nu,
        r=r,
        b=b,
        ref=float(-k),
        ext=float(-nu),
        ref_ext=float(-k - nu),
        R=_mixed_term(r, b, 0.0, -k - nu),
        B=_mixed_term(b, r, 0.0, -k - nu),
        R_ext=_mixed_term(r, b, -nu, -k),
        B_ext=_mixed_term(b, r, -nu, -k),
        ref_R=_mixed_term(r, b, -k, -nu),
        ref_B=_mixed_term(b, r, -k, -nu),
    )


def entropy_bits(log2_purity: float) -> float:
    """Collision-entropy estimate of the von Neumann entropy, in bits."""
    if log2_purity > 0:
        raise ModelError(f"log2 purity must be <= 0, got {log2_purity}")
    return -log2_purity


def correlation(k: int, nu: int, r: int, b: int, group: str, table: PurityTable | None = None) -> float:
    """Half the mutual information between ref and ``group``, in bits.

    Joint entropies that include ext on the X side are taken from the
    complementary interior factor (the global state is pure).
    """
    t = table if table is not None else purity_table(k, nu, r, b)
    s_ref = entropy_bits(t.ref)
    if group == "R":
        s_x, s_joint = entropy_bits(t.R), entropy_bits(t.ref_R)
    elif group == "B":
        s_x, s_joint = entropy_bits(t.B), entropy_bits(t.ref_B)
    elif group == "R,ext":
        s_x, s_joint = entropy_bits(t.R_ext), entropy_bits(t.B)
    elif group == "B,ext":
        s_x, s_joint = entropy_bits(t.B_ext), entropy_bits(t.R)
    else:
        raise ModelError(f"unknown correlation group {group!r}")
    return 0.5 * (s_ref + s_x - s_joint)


@dataclass(frozen=True)
class CurveRow:
    r: int
    c_ref_B: float
    c_ref_R_ext: float
    c_ref_B_ext: float
    c_ref_R: float


def curve(k: int, n: int, nu: int) -> list[CurveRow]:
    """Correlation of each subsystem with ref for every radiated count 0..n."""
    rows = []
    for r in range(n + 1):
        t = purity_table(k, nu, r, n - r)
        c = {g: correlation(k, nu, r, n - r, g, table=t) for g in CORRELATION_GROUPS}
        rows.append(CurveRow(r, c["B"], c["R,ext"], c["B,ext"], c["R"]))
    return rows


def ext_qubits_for_x(k: int, n: int, x: float) -> int:
    """Uniform-spectrum ext size realizing excess ``x``: ``nu = n - k - x``."""
    nu = n - k - x
    if nu < 0 or nu != int(nu):
        raise InconsistentParametersError(
            f"x = {x} needs an integer ext qubit count in [0, n - k], got {nu}"
        )
    return int(nu)


def excess_qubits(k: int, n: int, log2_tr_ext_purity: float) -> float:
    if log2_tr_ext_purity > 0:
        raise ModelError("log2 tr(rho_ext^2) must be <= 0")
    x = (n - k) + log2_tr_ext_purity
    if x < -TOL or x > n - k + TOL:
        raise InconsistentParametersError(f"x = {x} lies outside [0, n - k = {n - k}]")
    return x


def fidelity_floor(a1_qubits: float, a2_qubits: float, k: float, log2_tr_ext_purity: float) -> float:
    """``1 - sqrt(A2 K tr(rho_ext^2) / A1)``; negative means no guarantee."""
    return 1.0 - 2.0 ** (0.5 * (a2_qubits + k - a1_qubits + log2_tr_ext_purity))


@dataclass(frozen=True)
class Thresholds:
    r_early: float
    r_late: float

    @property
    def has_pad_phase(self) -> bool:
        return self.r_early <= self.r_late


def thresholds(k: float, n: float, x: float, c: float) -> Thresholds:
    """Radiated counts after which ref is recoverable from (R, ext), and up to
    which it stays recoverable from (B, ext), each with fidelity >= 1 - 2**-c."""
    if x < -TOL or x > n - k + TOL:
        raise InconsistentParametersError(f"x = {x} lies outside [0, n - k]")
    if c < 0:
        raise ModelError("c must be >= 0")
    w = k + 0.5 * x + c
    return Thresholds(r_early=w, r_late=n - w)


def floor_radiation_side(k: float, n: float, x: float, r: float) -> float:
    """Fidelity floor for recovery from (R, ext) after ``r`` radiated qubits."""
    return fidelity_floor(r, n - r, k, x - (n - k))


def floor_interior_side(k: float, n: float, x: float, r: float) -> float:
    """Fidelity floor for recovery from (B, ext) after ``r`` radiated qubits."""
    return fidelity_floor(n - r, r, k, x - (n - k))


def pure_model_bound(k: float, n: float, r: float) -> float:
    """Radiation-side floor with a pure exterior (``tr rho_ext^2 = 1``)."""
    return fidelity_floor(r, n - r, k, 0.0)


def decoupling_rhs(k: int, nu: int, a1_qubits: int, a2_qubits: int) -> float:
    """``(A2 K / A1)(tr rho_{ref,A}^2 + tr rho_ref^2 tr rho_A^2)`` for the
    initial state with uniform ext (pre-unitary purities 1/N, 1/K, 1/(KN))."""
    log_pref = a2_qubits + k - a1_qubits
    return 2.0 ** (log_pref - nu) + 2.0 ** (log_pref - nu - 2 * k)

"""Lower bounds on the dissipated heat -Q(t) for a finite bath.

Five bound families, named by the literature convention used in the output
tables: landauer1961, clausius1865 (the finite-bath entropy-difference form),
reebwolf2014 (dimension-dependent correction), goold2015 (Kraus-operator
bound, exactly zero for a maximally mixed system), timpanaro2020 (energy
change at the inverse temperature matching the system entropy change).

Every series is evaluated on the trajectory's own time grid; points where a
bound does not exist are flagged, never filled with sentinel numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .qdyn import (
    CompositeSpace,
    DensityMatrix,
    SpectralDecomposition,
    _freeze,
    _max_abs,
)
from .thermo import (
    BETA_CAP_EXPONENT,
    BathSpectrum,
    ThermoTrajectory,
    canonical_energy,
    canonical_entropy,
)

BOUND_KINDS = (
    "landauer1961",
    "clausius1865",
    "reebwolf2014",
    "goold2015",
    "timpanaro2020",
)

KRAUS_COMPLETENESS_ATOL = 1e-10
TIMPANARO_RANGE_ATOL = 1e-12

TIMPANARO_BRANCH_NOTE = (
    "timpanaro2020 branch choice: the canonical entropy gap is inverted on the "
    "heating branch (beta <= beta0) when Q(t) <= 0 and on the cooling branch "
    "(beta >= beta0) otherwise, restricted to the side of beta = 0 reachable "
    "before the entropy maximum; of two candidate inversions the one with the "
    "smaller energy gap is taken, and targets outside the branch image are "
    "reported as undefined"
)


@dataclass(frozen=True)
class BoundSeries:
    """Per-time bound values with definedness flags."""

    kind: str
    times: np.ndarray
    values: np.ndarray
    defined: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in BOUND_KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")
        t = np.array(self.times, dtype=float)
        v = np.array(self.values, dtype=float)
        d = np.array(self.defined, dtype=bool)
        if not (t.shape == v.shape == d.shape):
            raise ValueError("times, values and defined must have equal shapes")
        if np.any(~np.isfinite(v[d])):
            raise ValueError("defined bound values must be finite")
        object.__setattr__(self, "times", _freeze(t))
        object.__setattr__(self, "values", _freeze(v))
        object.__setattr__(self, "defined", _freeze(d))


def _require_positive_beta0(traj: ThermoTrajectory, kind: str) -> float:
    beta0 = float(traj.beta[0])
    if beta0 <= 0.0:
        raise ValueError(
            f"{kind} bound requires a positive initial temperature, "
            f"got beta0 = {beta0}"
        )
    return beta0


def bound_landauer_1961(traj: ThermoTrajectory) -> BoundSeries:
    """-T(0) * dS_S(t): negative system entropy change priced at T(0)."""
    beta0 = _require_positive_beta0(traj, "landauer1961")
    values = -(traj.S_S - traj.S_S[0]) / beta0
    return BoundSeries(
        kind="landauer1961",
        times=traj.times,
        values=values,
        defined=np.ones_like(values, dtype=bool),
    )


def bound_clausius_1865(traj: ThermoTrajectory, spec: BathSpectrum) -> BoundSeries:
    """T(0) * [S_B(beta_t) - S_B(beta_0)]: the finite-bath heat integral at T(0)."""
    beta0 = _require_positive_beta0(traj, "clausius1865")
    s_b = np.array([canonical_entropy(spec, float(b)) for b in traj.beta])
    values = (s_b - s_b[0]) / beta0
    return BoundSeries(
        kind="clausius1865",
        times=traj.times,
        values=values,
        defined=np.ones_like(values, dtype=bool),
    )


def bound_reebwolf_2014(traj: ThermoTrajectory, bath_dim: int) -> BoundSeries:
    """-T(0) dS_S + 2 T(0) dS_S^2 / (ln^2(d-1) + 4) with d the bath dimension."""
    if bath_dim < 2:
        raise ValueError("bath dimension must be >= 2")
    beta0 = _require_positive_beta0(traj, "reebwolf2014")
    t0 = 1.0 / beta0
    dss = traj.S_S - traj.S_S[0]
    denom = np.log(bath_dim - 1) ** 2 + 4.0
    values = -t0 * dss + 2.0 * t0 * dss**2 / denom
    return BoundSeries(
        kind="reebwolf2014",
        times=traj.times,
        values=values,
        defined=np.ones_like(values, dtype=bool),
    )


@dataclass(frozen=True)
class KrausSet:
    """Bath-space Kraus operators induced by the joint unitary.

    A_(j,k)(t) = sqrt(lambda_j) <s_k| U(t) |s_j>, contracted over the system,
    for the eigendecomposition rho_S(0) = sum_j lambda_j |s_j><s_j|.
    """

    operators: tuple[np.ndarray, ...]
    source_eigenvalues: np.ndarray
    source_eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        ops = tuple(np.array(a, dtype=complex) for a in self.operators)
        if not ops:
            raise ValueError("need at least one Kraus operator")
        d_b = ops[0].shape[0]
        total = np.zeros((d_b, d_b), dtype=complex)
        for a in ops:
            if a.shape != (d_b, d_b):
                raise ValueError("Kraus operators must share one bath dimension")
            total += a.conj().T @ a
        if _max_abs(total - np.eye(d_b)) > KRAUS_COMPLETENESS_ATOL:
            raise ValueError("Kraus completeness sum A^dag A = 1 violated")
        object.__setattr__(self, "operators", tuple(_freeze(a) for a in ops))
        object.__setattr__(
            self, "source_eigenvalues", _freeze(np.array(self.source_eigenvalues, float))
        )
        object.__setattr__(
            self,
            "source_eigenvectors",
            _freeze(np.array(self.source_eigenvectors, complex)),
        )

    def channel_sum(self) -> np.ndarray:
        """sum_alpha A_alpha A_alpha^dag (identity iff rho_S(0) maximally mixed)."""
        d_b = self.operators[0].shape[0]
        total = np.zeros((d_b, d_b), dtype=complex)
        for a in self.operators:
            total += a @ a.conj().T
        return total


def build_kraus(
    u_t: np.ndarray, rho_s0: DensityMatrix, space: CompositeSpace
) -> KrausSet:
    """Kraus operators of the reduced bath dynamics at one time point.

    ``space`` is the joint space; the system factors of ``rho_s0`` must be its
    leading factors.
    """
    d = space.total_dim
    u = np.asarray(u_t, dtype=complex)
    if u.shape != (d, d):
        raise ValueError(f"propagator shape {u.shape} does not match dimension {d}")
    n_sys = len(rho_s0.space.factors)
    if space.factors[:n_sys] != rho_s0.space.factors:
        raise ValueError("system factors must be the leading factors of the joint space")
    d_s = rho_s0.space.total_dim
    d_b = d // d_s

    w, v = np.linalg.eigh(rho_s0.matrix)
    w = np.clip(w, 0.0, None)
    u4 = u.reshape(d_s, d_b, d_s, d_b)
    ops = []
    for j in range(d_s):
        amp = np.sqrt(w[j])
        for k in range(d_s):
            a = amp * np.einsum("s,sbtc,t->bc", v[:, k].conj(), u4, v[:, j])
            ops.append(a)
    return KrausSet(
        operators=tuple(ops), source_eigenvalues=w, source_eigenvectors=v
    )


def bound_goold_2015(kraus: KrausSet, rho_b0: DensityMatrix, beta0: float) -> float:
    """-T(0) ln Tr{ [sum_a A_a A_a^dag] rho_B(0) } at one time point."""
    if beta0 <= 0.0:
        raise ValueError("goold2015 bound requires a positive initial temperature")
    overlap = float(
        np.einsum("ij,ji->", kraus.channel_sum(), rho_b0.matrix).real
    )
    if overlap <= 0.0:
        raise ArithmeticError(f"channel overlap {overlap} must be positive")
    return -np.log(overlap) / beta0


def bound_goold_series(
    sd_total: SpectralDecomposition,
    rho_s0: DensityMatrix,
    rho_b0: DensityMatrix,
    beta0: float,
    times: np.ndarray,
    space: CompositeSpace,
) -> BoundSeries:
    """goold2015 evaluated along a time grid from one spectral decomposition."""
    ts = np.array(times, dtype=float)
    values = np.empty_like(ts)
    for i, t in enumerate(ts):
        kraus = build_kraus(sd_total.propagator(float(t)), rho_s0, space)
        values[i] = bound_goold_2015(kraus, rho_b0, beta0)
    return BoundSeries(
        kind="goold2015",
        times=ts,
        values=values,
        defined=np.ones_like(values, dtype=bool),
    )


def _bracket_outward(
    spec: BathSpectrum, beta0: float, direction: float, s0: float, target: float
) -> float | None:
    """March away from beta0 until the entropy gap crosses the target.

    Returns a far bracket end, or None when the gap saturates above the target
    (the target lies below the branch infimum).
    """
    step = BETA_CAP_EXPONENT / spec.span
    prev = None
    for _ in range(64):
        b = beta0 + direction * step
        g_b = canonical_entropy(spec, b) - s0
        if g_b <= target:
            return b
        if prev is not None and abs(g_b - prev) < 1e-15:
            return None
        prev = g_b
        step *= 2.0
    return None


def _timpanaro_point(
    spec: BathSpectrum,
    beta0: float,
    s0: float,
    e0: float,
    target: float,
    heating: bool,
) -> float | None:
    """Invert the entropy gap on the selected branch; None when out of range."""
    atol = TIMPANARO_RANGE_ATOL

    def gap(b: float) -> float:
        return canonical_entropy(spec, b) - s0 - target

    toward_zero = (heating and beta0 > 0.0) or (not heating and beta0 < 0.0)
    if toward_zero:
        g_cap = canonical_entropy(spec, 0.0) - s0
        if target < -atol or target > g_cap + atol:
            return None
        target = min(max(target, 0.0), g_cap)
        lo, hi = (0.0, beta0) if heating else (beta0, 0.0)
    else:
        if target > atol:
            return None
        target = min(target, 0.0)
        direction = -1.0 if heating else 1.0
        far = _bracket_outward(spec, beta0, direction, s0, target)
        if far is None:
            return None
        lo, hi = (far, beta0) if heating else (beta0, far)

    beta_star = float(brentq(gap, lo, hi, maxiter=200))
    return canonical_energy(spec, beta_star) - e0


def bound_timpanaro_2020(traj: ThermoTrajectory, spec: BathSpectrum) -> BoundSeries:
    """Canonical energy change at the beta whose entropy gap is -dS_S(t).

    The inversion branch follows the sign of the heat (see
    TIMPANARO_BRANCH_NOTE); targets outside the branch image leave the point
    undefined rather than extrapolated.
    """
    beta0 = float(traj.beta[0])
    s0 = canonical_entropy(spec, beta0)
    e0 = canonical_energy(spec, beta0)
    values = np.full(traj.times.shape, np.nan)
    defined = np.zeros(traj.times.shape, dtype=bool)
    for i in range(traj.times.size):
        target = -(float(traj.S_S[i]) - float(traj.S_S[0]))
        heating = float(traj.Q[i]) <= 0.0
        val = _timpanaro_point(spec, beta0, s0, e0, target, heating)
        if val is not None:
            values[i] = val
            defined[i] = True
    return BoundSeries(
        kind="timpanaro2020", times=traj.times, values=values, defined=defined
    )

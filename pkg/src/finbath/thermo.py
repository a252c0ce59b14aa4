"""Canonical ensembles on a bath spectrum and finite-bath entropy bookkeeping.

The module works in the inverse temperature beta throughout: beta passes
continuously through 0 into population-inverted (negative-beta) states, while
the temperature T = 1/beta jumps between +inf and -inf there. T is derived
output only.

Entropy productions computed here:

  sigma        = dS_S + S_B(beta_tau) - S_B(beta_0)       (evolving bath temperature)
  sigma_prime  = dS_S - beta_0 * Q(tau)                   (fixed bath temperature)
  sigma_tilde  = dS_S + S_obs(tau) - S_B(beta_tau)
                 + [S_B(beta_tau) - S_B(beta_0)]          (coarse-grained refinement)

with the exact identity sigma_prime - sigma = D(pi(beta_tau) || pi(beta_0)) and
the maximum work extractable by re-equilibration against an ideal reference
bath at beta_0, w_ext_max = (sigma_prime - sigma) / beta_0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .qdyn import (
    CompositeSpace,
    DensityMatrix,
    HermitianOperator,
    _freeze,
    extract_local,
    partial_trace,
    von_neumann_entropy,
)

BETA_RESIDUAL_RTOL = 1e-12
# exp-overflow guard: |beta| * spectral span <= ~700 keeps exp in range even
# before the max-shift; brackets expand geometrically beyond when needed.
BETA_CAP_EXPONENT = 700.0
LEDGER_ATOL = 1e-10
COARSE_PROB_FLOOR = 1e-15


class UnreachableEnergyError(ValueError):
    """Target energy lies outside the open interval (e_min, e_max)."""


class InfiniteBetaError(ValueError):
    """Target energy sits at a spectral extreme; |beta| would be infinite."""


@dataclass(frozen=True)
class BathSpectrum:
    """Eigenvalues and eigenbasis of a bath Hamiltonian."""

    space: CompositeSpace
    energies: np.ndarray
    basis: np.ndarray

    def __post_init__(self) -> None:
        e = np.array(self.energies, dtype=float)
        b = np.array(self.basis, dtype=complex)
        d = self.space.total_dim
        if e.shape != (d,) or b.shape != (d, d):
            raise ValueError("energies/basis shapes do not match the space dimension")
        if np.any(np.diff(e) < 0):
            raise ValueError("energies must be ascending")
        if e[-1] == e[0]:
            raise ValueError(
                "need at least two distinct energies; a fully degenerate bath "
                "has zero energy variance at every beta"
            )
        if np.max(np.abs(b.conj().T @ b - np.eye(d))) > 1e-12:
            raise ValueError("basis is not unitary within tolerance")
        object.__setattr__(self, "energies", _freeze(e))
        object.__setattr__(self, "basis", _freeze(b))

    @classmethod
    def from_operator(cls, op: HermitianOperator) -> "BathSpectrum":
        w, v = np.linalg.eigh(op.matrix)
        return cls(op.space, w, v)

    @classmethod
    def from_embedded(
        cls, op: HermitianOperator, bath_labels: Iterable[str]
    ) -> "BathSpectrum":
        """Spectrum of an operator embedded as identity outside the bath factors."""
        return cls.from_operator(extract_local(op, bath_labels))

    @property
    def dim(self) -> int:
        return self.energies.size

    @property
    def e_min(self) -> float:
        return float(self.energies[0])

    @property
    def e_max(self) -> float:
        return float(self.energies[-1])

    @property
    def span(self) -> float:
        return self.e_max - self.e_min

    @property
    def mean_at_beta0(self) -> float:
        """Infinite-temperature mean energy."""
        return float(np.mean(self.energies))

    def hamiltonian_matrix(self) -> np.ndarray:
        return (self.basis * self.energies) @ self.basis.conj().T


@dataclass(frozen=True)
class EffectiveBeta:
    """Inverse temperature matching a target mean bath energy."""

    beta: float
    residual: float
    bracket: tuple[float, float]


def _populations(energies: np.ndarray, beta: float) -> np.ndarray:
    x = -beta * energies
    x = x - np.max(x)
    p = np.exp(x)
    return p / np.sum(p)


def gibbs_state(spec: BathSpectrum, beta: float) -> DensityMatrix:
    """Canonical state exp(-beta H_B)/Z in the bath eigenbasis (beta may be < 0)."""
    if not np.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta}")
    p = _populations(spec.energies, beta)
    m = (spec.basis * p) @ spec.basis.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(spec.space, m, eigenvalues=np.sort(p))


def canonical_energy(spec: BathSpectrum, beta: float) -> float:
    """Mean energy Tr{H_B pi_B(beta)}."""
    p = _populations(spec.energies, beta)
    return float(p @ spec.energies)


def canonical_entropy(spec: BathSpectrum, beta: float) -> float:
    """Entropy of the canonical state: beta <E> + ln Z, log-sum-exp stabilized."""
    x = -beta * spec.energies
    shift = np.max(x)
    log_z = shift + np.log(np.sum(np.exp(x - shift)))
    return float(beta * canonical_energy(spec, beta) + log_z)


def canonical_variance(spec: BathSpectrum, beta: float) -> float:
    """Energy variance of the canonical state (the heat-capacity kernel)."""
    p = _populations(spec.energies, beta)
    mean = float(p @ spec.energies)
    return float(p @ (spec.energies - mean) ** 2)


def canonical_relative_entropy(spec: BathSpectrum, beta1: float, beta0: float) -> float:
    """D(pi(beta1) || pi(beta0)) within the canonical family.

    Scalar route: beta0 * (E(beta1) - E(beta0)) - (S(beta1) - S(beta0)); serves
    as the independent oracle for the matrix-level relative entropy.
    """
    de = canonical_energy(spec, beta1) - canonical_energy(spec, beta0)
    ds = canonical_entropy(spec, beta1) - canonical_entropy(spec, beta0)
    return beta0 * de - ds


def solve_beta(spec: BathSpectrum, target_energy: float) -> EffectiveBeta:
    """Invert the canonical mean energy: find beta with E(beta) = target.

    E(beta) is strictly decreasing (dE/dbeta = -Var < 0), so a sign-change
    bracket always pins the unique root; a Newton polish with the variance
    pushes the residual to BETA_RESIDUAL_RTOL.
    """
    target = float(target_energy)
    if target <= spec.e_min or target >= spec.e_max:
        if target == spec.e_min or target == spec.e_max:
            raise InfiniteBetaError(
                f"target energy {target} sits at a spectral extreme; |beta| infinite"
            )
        raise UnreachableEnergyError(
            f"unreachable energy {target}: outside ({spec.e_min}, {spec.e_max})"
        )

    cap = BETA_CAP_EXPONENT / spec.span
    lo, hi = -cap, cap
    # E(lo) ~ e_max, E(hi) ~ e_min; expand if the target hugs an extreme.
    for _ in range(64):
        if canonical_energy(spec, lo) > target:
            break
        lo *= 2.0
    else:
        raise InfiniteBetaError(f"target energy {target} too close to e_max")
    for _ in range(64):
        if canonical_energy(spec, hi) < target:
            break
        hi *= 2.0
    else:
        raise InfiniteBetaError(f"target energy {target} too close to e_min")

    beta = float(
        brentq(lambda b: canonical_energy(spec, b) - target, lo, hi, maxiter=200)
    )
    tol = BETA_RESIDUAL_RTOL * max(1.0, abs(target))
    # Newton polish down to the floating-point floor (dE/dbeta = -Var), not just
    # to the contract tolerance: the round trip through solve_beta is then as
    # tight as double precision allows.
    residual = canonical_energy(spec, beta) - target
    for _ in range(60):
        if residual == 0.0:
            break
        var = canonical_variance(spec, beta)
        if var <= 0.0:
            break
        candidate = beta + residual / var
        if not np.isfinite(candidate):
            break
        cand_residual = canonical_energy(spec, candidate) - target
        if abs(cand_residual) >= abs(residual):
            break
        beta, residual = candidate, cand_residual
    if abs(residual) > tol:
        raise ArithmeticError(
            f"beta solver stalled at residual {residual:.3e} (tolerance {tol:.3e})"
        )
    return EffectiveBeta(beta=beta, residual=float(residual), bracket=(lo, hi))


@dataclass(frozen=True)
class ThermoTrajectory:
    """Per-time bath energy, effective beta, heat, and entropies.

    Q(t) = E_B(0) - E_B(t): positive when energy has flowed into the system.
    Each beta[i] satisfies the solver residual bound against E_B[i] by
    construction in build_trajectory.
    """

    times: np.ndarray
    E_B: np.ndarray
    beta: np.ndarray
    Q: np.ndarray
    S_S: np.ndarray
    S_B_eff: np.ndarray

    def __post_init__(self) -> None:
        arrays = {}
        n = None
        for name in ("times", "E_B", "beta", "Q", "S_S", "S_B_eff"):
            a = np.array(getattr(self, name), dtype=float)
            if n is None:
                n = a.size
            if a.shape != (n,):
                raise ValueError(f"{name} must be a length-{n} vector")
            arrays[name] = a
        if n == 0:
            raise ValueError("trajectory must have at least one point")
        if arrays["Q"][0] != 0.0:
            raise ValueError("Q[0] must be exactly 0")
        if np.max(np.abs(arrays["Q"] - (arrays["E_B"][0] - arrays["E_B"]))) != 0.0:
            raise ValueError("Q must equal E_B[0] - E_B exactly")
        for name, a in arrays.items():
            object.__setattr__(self, name, _freeze(a))

    @property
    def n_points(self) -> int:
        return self.times.size


def build_trajectory(
    states: Sequence[DensityMatrix],
    times: Sequence[float],
    spec: BathSpectrum,
    keep_system: Sequence[str],
) -> ThermoTrajectory:
    """Reduce a list of joint states to the thermodynamic time series."""
    ts = np.array(times, dtype=float)
    if len(states) != ts.size:
        raise ValueError("states and times must have equal length")
    bath_labels = spec.space.labels
    h_bath = spec.hamiltonian_matrix()

    e_b = np.empty(ts.size)
    s_s = np.empty(ts.size)
    beta = np.empty(ts.size)
    s_b = np.empty(ts.size)
    for i, state in enumerate(states):
        rho_b = partial_trace(state, bath_labels)
        rho_s = partial_trace(state, keep_system)
        e_b[i] = np.einsum("ij,ji->", h_bath, rho_b.matrix).real
        s_s[i] = von_neumann_entropy(rho_s)
        beta[i] = solve_beta(spec, e_b[i]).beta
        s_b[i] = canonical_entropy(spec, beta[i])
    q = e_b[0] - e_b
    return ThermoTrajectory(times=ts, E_B=e_b, beta=beta, Q=q, S_S=s_s, S_B_eff=s_b)


@dataclass(frozen=True)
class EntropyLedger:
    """End-of-run entropy productions and the information they bound.

    w_ext_max is None when beta0 == 0 (no reference temperature to reset to);
    sigma_tilde is None unless a coarse-grained refinement was evaluated.
    """

    sigma: float
    sigma_prime: float
    divergence: float
    w_ext_max: float | None
    sigma_tilde: float | None = None

    def __post_init__(self) -> None:
        if self.sigma < -LEDGER_ATOL or self.sigma_prime < -LEDGER_ATOL:
            raise ValueError(
                f"entropy productions must be nonnegative: "
                f"sigma={self.sigma:.3e}, sigma_prime={self.sigma_prime:.3e}"
            )
        gap = self.sigma_prime - self.sigma - self.divergence
        if abs(gap) > LEDGER_ATOL:
            raise ValueError(
                f"identity sigma_prime - sigma = divergence violated by {gap:.3e}"
            )


def entropy_ledger(traj: ThermoTrajectory, spec: BathSpectrum) -> EntropyLedger:
    """Evaluate both entropy productions over the trajectory's full window.

    sigma uses the exact entropy-difference form of the heat integral (no
    quadrature). Both divergence arguments are canonical states of the same
    spectrum, so the divergence is evaluated on the canonical-family scalar
    path, which stays exact even where Gibbs populations underflow the
    support cutoff of the generic matrix-level relative entropy.
    """
    if traj.n_points < 2:
        raise ValueError("trajectory needs at least two points")
    beta0 = float(traj.beta[0])
    beta_tau = float(traj.beta[-1])
    d_ss = float(traj.S_S[-1] - traj.S_S[0])
    sigma = d_ss + float(traj.S_B_eff[-1] - traj.S_B_eff[0])
    sigma_prime = d_ss - beta0 * float(traj.Q[-1])
    divergence = canonical_relative_entropy(spec, beta_tau, beta0)
    w_ext_max = None if beta0 == 0.0 else (sigma_prime - sigma) / beta0
    return EntropyLedger(
        sigma=sigma,
        sigma_prime=sigma_prime,
        divergence=divergence,
        w_ext_max=w_ext_max,
    )


def quadrature_cross_check(traj: ThermoTrajectory, spec: BathSpectrum) -> float:
    """|trapezoidal integral of beta dE_B  -  exact canonical entropy change|.

    Converges to 0 at second order in the step for trajectories where beta(t)
    is smooth; stays finite when beta(t) jumps (documents why the production
    path uses the entropy-difference form instead of quadrature).
    """
    if traj.n_points < 3:
        raise ValueError("cross-check needs at least three points")
    integral = float(np.trapezoid(traj.beta, traj.E_B))
    exact = canonical_entropy(spec, float(traj.beta[-1])) - canonical_entropy(
        spec, float(traj.beta[0])
    )
    return abs(integral - exact)


@dataclass(frozen=True)
class EnergyCoarseGraining:
    """Partition of the bath eigenstates into energy cells.

    ``bin_edges`` is the full window grid when the cells come from energy
    windows (empty windows carry no cell) and None for graining schemes that
    are not window-based, e.g. the finest per-eigenstate partition.
    """

    member_indices: tuple[tuple[int, ...], ...]
    volumes: tuple[int, ...]
    representative_energies: tuple[float, ...]
    bin_edges: np.ndarray | None = None

    def __post_init__(self) -> None:
        members = tuple(tuple(int(i) for i in cell) for cell in self.member_indices)
        object.__setattr__(self, "member_indices", members)
        vols = tuple(int(v) for v in self.volumes)
        object.__setattr__(self, "volumes", vols)
        reps = tuple(float(e) for e in self.representative_energies)
        object.__setattr__(self, "representative_energies", reps)
        if not (len(members) == len(vols) == len(reps)):
            raise ValueError("per-cell fields must have equal lengths")
        for cell, v in zip(members, vols):
            if len(cell) != v or v < 1:
                raise ValueError("volumes must equal member counts and be >= 1")
        flat = [i for cell in members for i in cell]
        if len(flat) != len(set(flat)):
            raise ValueError("cells must be disjoint")
        if self.bin_edges is not None:
            edges = np.array(self.bin_edges, dtype=float)
            if np.any(np.diff(edges) <= 0):
                raise ValueError("bin edges must be strictly ascending")
            object.__setattr__(self, "bin_edges", _freeze(edges))

    @property
    def n_cells(self) -> int:
        return len(self.member_indices)

    def covers(self, dim: int) -> bool:
        """True when every eigenstate index 0..dim-1 sits in exactly one cell."""
        flat = sorted(i for cell in self.member_indices for i in cell)
        return flat == list(range(dim))


def energy_coarse_graining(spec: BathSpectrum, n_bins: int) -> EnergyCoarseGraining:
    """Contiguous equal-width energy windows over [e_min, e_max].

    Empty windows are dropped so every retained cell has volume >= 1; the full
    window grid is kept in ``bin_edges``.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    edges = np.linspace(spec.e_min, spec.e_max, n_bins + 1)
    idx = np.minimum(
        ((spec.energies - spec.e_min) / spec.span * n_bins).astype(int), n_bins - 1
    )
    members: list[tuple[int, ...]] = []
    for b in range(n_bins):
        cell = tuple(int(i) for i in np.nonzero(idx == b)[0])
        if cell:
            members.append(cell)
    vols = tuple(len(cell) for cell in members)
    reps = tuple(float(np.mean(spec.energies[list(cell)])) for cell in members)
    return EnergyCoarseGraining(
        member_indices=tuple(members),
        volumes=vols,
        representative_energies=reps,
        bin_edges=edges,
    )


def finest_coarse_graining(spec: BathSpectrum) -> EnergyCoarseGraining:
    """One cell per bath eigenstate (volume 1 each, degeneracies split)."""
    members = tuple((i,) for i in range(spec.dim))
    return EnergyCoarseGraining(
        member_indices=members,
        volumes=tuple(1 for _ in members),
        representative_energies=tuple(float(e) for e in spec.energies),
        bin_edges=None,
    )


def observational_entropy(
    rho_B: DensityMatrix, cg: EnergyCoarseGraining, spec: BathSpectrum
) -> float:
    """sum_e p(e) [ -ln p(e) + ln V(e) ] for the binned energy measurement.

    p(e) collects the energy-eigenbasis diagonal weights of rho_B over the
    cell's eigenstates; cells with p below COARSE_PROB_FLOOR contribute 0.
    """
    if rho_B.space != spec.space:
        raise ValueError("state and spectrum live on different spaces")
    if not cg.covers(spec.dim):
        raise ValueError("coarse graining does not partition this spectrum")
    rotated = rho_B.matrix @ spec.basis
    diag = np.einsum("ji,ji->i", spec.basis.conj(), rotated).real
    diag = np.clip(diag, 0.0, None)
    total = 0.0
    for cell, vol in zip(cg.member_indices, cg.volumes):
        p = float(np.sum(diag[list(cell)]))
        if p < COARSE_PROB_FLOOR:
            continue
        total += p * (np.log(vol) - np.log(p))
    return float(total)


def sigma_tilde(
    traj: ThermoTrajectory,
    rho_B_final: DensityMatrix,
    cg: EnergyCoarseGraining,
    spec: BathSpectrum,
) -> float:
    """Refined entropy production using the coarse-grained bath-energy distribution.

    dS_S + S_obs(tau) - S_B(beta_tau) - integral dQ/T, with the heat integral in
    its exact entropy-difference form S_B(beta_tau) - S_B(beta_0).
    """
    if traj.n_points < 2:
        raise ValueError("trajectory needs at least two points")
    h_bath = spec.hamiltonian_matrix()
    e_final = float(np.einsum("ij,ji->", h_bath, rho_B_final.matrix).real)
    scale = max(1.0, abs(traj.E_B[-1]))
    if abs(e_final - traj.E_B[-1]) > 1e-8 * scale:
        raise ValueError(
            f"final bath state energy {e_final} does not match trajectory "
            f"endpoint {traj.E_B[-1]}"
        )
    d_ss = float(traj.S_S[-1] - traj.S_S[0])
    s_obs = observational_entropy(rho_B_final, cg, spec)
    heat_integral = float(traj.S_B_eff[-1] - traj.S_B_eff[0])
    return d_ss + s_obs - float(traj.S_B_eff[-1]) + heat_integral

"""Exact-dynamics scenario builders: XY spin chain and two-band random-matrix bath.

Both builders return joint-space operators (H_system, H_bath, V_coupling,
space) so the total Hamiltonian is a plain sum; the bath factor labels are
"B1".."BN" for the chain and "B" for the random-matrix bath.

Randomness is drawn from numpy's seeded PCG64 generator (``default_rng``), in
a fixed order (band-0 energies, band-1 energies, real then imaginary coupling
entries), so builds are bit-reproducible for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qdyn import CompositeSpace, DensityMatrix, HermitianOperator, extract_local, pauli
from .thermo import BathSpectrum, gibbs_state

DEFAULT_DIM_CAP = 4096

# The coupling-variance default is not pinned by the physics; the overall
# interaction scale is carried by ``coupling``. Echoed in CLI metadata.
COUPLING_VARIANCE_NOTE = (
    "random-matrix coupling entries are complex, mean 0, total variance "
    "coupling_variance (default 1.0) with independent real/imaginary parts; "
    "the overall interaction scale is carried by the coupling prefactor"
)

SYSTEM_LABEL = "S"


@dataclass(frozen=True)
class SpinChainModel:
    """Qubit coupled to an open XY chain of n_bath_spins qubits."""

    n_bath_spins: int
    field_system: float = 1.0
    field_bath: float = 1.0
    coupling_chain: float = 1.0
    coupling_sb: float = 1.0

    def __post_init__(self) -> None:
        if self.n_bath_spins < 1:
            raise ValueError("n_bath_spins must be >= 1")


@dataclass(frozen=True)
class RandomMatrixModel:
    """Qubit coupled to a two-band random bath.

    Band i holds v_i levels drawn uniformly from [eps_i - width/2,
    eps_i + width/2); the coupling matrix connects the bands only.
    """

    eps0: float = 0.0
    eps1: float = 1.0
    width: float = 1.0
    v0: int = 10
    v1: int = 100
    coupling: float = 0.3
    coupling_variance: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.eps1 - self.eps0 < self.width:
            raise ValueError(
                f"bands overlap: eps1 - eps0 = {self.eps1 - self.eps0} < "
                f"width = {self.width}"
            )
        if self.v0 < 1 or self.v1 < 1:
            raise ValueError("band level counts must be >= 1")
        if self.width <= 0:
            raise ValueError("band width must be > 0")
        if self.coupling_variance <= 0:
            raise ValueError("coupling_variance must be > 0")


@dataclass(frozen=True)
class InitialCondition:
    """System preparation plus the initial bath inverse temperature."""

    system_state: str | np.ndarray
    bath_beta0: float

    _KINDS = ("maximally_mixed", "excited", "ground")

    def __post_init__(self) -> None:
        if isinstance(self.system_state, str) and self.system_state not in self._KINDS:
            raise ValueError(
                f"unknown system_state {self.system_state!r}; "
                f"expected one of {self._KINDS} or a density matrix"
            )


def spin_chain_space(n_bath_spins: int) -> CompositeSpace:
    factors = [(SYSTEM_LABEL, 2)] + [(f"B{j}", 2) for j in range(1, n_bath_spins + 1)]
    return CompositeSpace(tuple(factors))


def spin_chain_bath_labels(n_bath_spins: int) -> tuple[str, ...]:
    return tuple(f"B{j}" for j in range(1, n_bath_spins + 1))


def build_spin_chain(
    m: SpinChainModel, dim_cap: int = DEFAULT_DIM_CAP
) -> tuple[HermitianOperator, HermitianOperator, HermitianOperator, CompositeSpace]:
    """Assemble (H_system, H_bath, V_coupling, space) for the XY chain.

    H_system = B0 sz_S
    H_bath   = B sum_j sz_j + J sum_{j<N} (sx_j sx_{j+1} + sy_j sy_{j+1})
    V        = J0 (sx_S sx_1 + sy_S sy_1)

    Open boundary; the XY term conserves total bath magnetization.
    """
    n = m.n_bath_spins
    if 2 ** (n + 1) > dim_cap:
        raise ValueError(f"total dimension 2^{n + 1} exceeds cap {dim_cap}")
    space = spin_chain_space(n)

    def sig(kind: str, site: str) -> np.ndarray:
        return pauli(kind, site, space).matrix

    h_system = m.field_system * sig("z", SYSTEM_LABEL)

    h_bath = np.zeros((space.total_dim, space.total_dim), dtype=complex)
    for j in range(1, n + 1):
        h_bath += m.field_bath * sig("z", f"B{j}")
    for j in range(1, n):
        h_bath += m.coupling_chain * (
            sig("x", f"B{j}") @ sig("x", f"B{j + 1}")
            + sig("y", f"B{j}") @ sig("y", f"B{j + 1}")
        )

    v = m.coupling_sb * (
        sig("x", SYSTEM_LABEL) @ sig("x", "B1") + sig("y", SYSTEM_LABEL) @ sig("y", "B1")
    )

    return (
        HermitianOperator(space, h_system),
        HermitianOperator(space, h_bath),
        HermitianOperator(space, v),
        space,
    )


def build_random_matrix(
    m: RandomMatrixModel,
) -> tuple[HermitianOperator, HermitianOperator, HermitianOperator, CompositeSpace]:
    """Assemble (H_system, H_bath, V_coupling, space) for the two-band bath.

    H_system = eps0 |0><0| + eps1 |1><1| on the system qubit; H_bath is
    diagonal with sorted band energies; V = coupling * sigma_x (x) C with C
    carrying i.i.d. complex entries between the bands and zero within them.
    Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(m.seed)
    band0 = np.sort(rng.uniform(m.eps0 - m.width / 2, m.eps0 + m.width / 2, m.v0))
    band1 = np.sort(rng.uniform(m.eps1 - m.width / 2, m.eps1 + m.width / 2, m.v1))
    energies = np.concatenate([band0, band1])
    d_bath = m.v0 + m.v1

    scale = math.sqrt(m.coupling_variance / 2.0)
    re = rng.standard_normal((m.v0, m.v1))
    im = rng.standard_normal((m.v0, m.v1))
    block = scale * (re + 1j * im)
    coupling_bath = np.zeros((d_bath, d_bath), dtype=complex)
    coupling_bath[: m.v0, m.v0 :] = block
    coupling_bath[m.v0 :, : m.v0] = block.conj().T

    space = CompositeSpace(((SYSTEM_LABEL, 2), ("B", d_bath)))
    h_system = np.kron(np.diag([m.eps0, m.eps1]).astype(complex), np.eye(d_bath))
    h_bath = np.kron(np.eye(2), np.diag(energies).astype(complex))
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    v = m.coupling * np.kron(sigma_x, coupling_bath)

    return (
        HermitianOperator(space, h_system),
        HermitianOperator(space, h_bath),
        HermitianOperator(space, v),
        space,
    )


def random_matrix_bath_labels() -> tuple[str, ...]:
    return ("B",)


def _system_state(
    ic: InitialCondition, h_system_local: np.ndarray, space: CompositeSpace
) -> DensityMatrix:
    """Validated system density matrix for the requested preparation."""
    dim = space.total_dim
    if isinstance(ic.system_state, str):
        if ic.system_state == "maximally_mixed":
            m = np.eye(dim, dtype=complex) / dim
        else:
            _, v = np.linalg.eigh(h_system_local)
            col = v[:, -1] if ic.system_state == "excited" else v[:, 0]
            m = np.outer(col, col.conj())
        return DensityMatrix(space, m)
    m = np.array(ic.system_state, dtype=complex)
    if m.shape != (dim, dim):
        raise ValueError(
            f"custom system state has shape {m.shape}, expected ({dim}, {dim})"
        )
    return DensityMatrix(space, m)


def prepare_initial(
    ic: InitialCondition, h_system: HermitianOperator, spec: BathSpectrum
) -> DensityMatrix:
    """Product state rho_S(0) (x) pi_B(beta0) on the joint space.

    "excited"/"ground" pick the highest/lowest-energy eigenstate of the
    system-local Hamiltonian block of ``h_system``.
    """
    joint = h_system.space
    bath_labels = set(spec.space.labels)
    system_labels = [lab for lab in joint.labels if lab not in bath_labels]
    if not system_labels or set(joint.labels) != bath_labels | set(system_labels):
        raise ValueError("joint space does not contain the bath factors plus a system")
    if joint.labels[: len(system_labels)] != tuple(system_labels):
        raise ValueError("system factors must precede the bath factors")

    h_local = extract_local(h_system, system_labels).matrix
    rho_s = _system_state(ic, h_local, joint.subspace(system_labels))
    rho_b = gibbs_state(spec, ic.bath_beta0)
    joint_matrix = np.kron(rho_s.matrix, rho_b.matrix)
    joint_eigs = np.outer(
        np.clip(rho_s.eigenvalues, 0.0, None), rho_b.eigenvalues
    ).ravel()
    return DensityMatrix(joint, joint_matrix, eigenvalues=np.sort(joint_eigs))

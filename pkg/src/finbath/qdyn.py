"""Dense Hermitian linear algebra on labeled tensor-product spaces.

Operators and density matrices are immutable carriers of validated dense
complex matrices. Unitary propagation goes through a single eigendecomposition
of the (static) Hamiltonian, which keeps trace, Hermiticity and the full
eigenvalue multiset of the state to machine precision. Units: hbar = k_B = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

HERMITICITY_RTOL = 1e-12
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
RECONSTRUCTION_RTOL = 1e-10
UNITARITY_ATOL = 1e-12

# Support convention for relative entropy: sigma eigenvalues below SUPPORT_EPS
# count as outside sigma's support; rho weight above SUPPORT_WEIGHT there makes
# the divergence infinite.
SUPPORT_EPS = 1e-14
SUPPORT_WEIGHT = 1e-12

_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


class DimensionMismatchError(ValueError):
    """Operands live on different or incompatible spaces."""


class SupportViolationError(ValueError):
    """Relative entropy is infinite: rho has weight outside sigma's support."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True)
class CompositeSpace:
    """Ordered tensor product of labeled factors, e.g. (("S", 2), ("B", 110))."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        factors = tuple((str(lab), int(dim)) for lab, dim in self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors:
            raise ValueError("a composite space needs at least one factor")
        labels = [lab for lab, _ in factors]
        if len(set(labels)) != len(labels):
            raise ValueError(f"factor labels must be unique, got {labels}")
        for lab, dim in factors:
            if dim < 2:
                raise ValueError(f"factor {lab!r} must have dimension >= 2, got {dim}")

    @classmethod
    def of(cls, *factors: tuple[str, int]) -> "CompositeSpace":
        return cls(tuple(factors))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.factors)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def index(self, label: str) -> int:
        for i, (lab, _) in enumerate(self.factors):
            if lab == label:
                return i
        raise ValueError(f"unknown factor label {label!r} (have {self.labels})")

    def subspace(self, keep: Iterable[str]) -> "CompositeSpace":
        """Space of the kept factors, in their original order."""
        keep_set = set(keep)
        unknown = keep_set - set(self.labels)
        if unknown:
            raise ValueError(f"unknown factor labels {sorted(unknown)}")
        kept = tuple(f for f in self.factors if f[0] in keep_set)
        return CompositeSpace(kept)


@dataclass(frozen=True)
class HermitianOperator:
    space: CompositeSpace
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match space dimension {d}"
            )
        scale = _max_abs(m)
        if scale > 0.0 and _max_abs(m - m.conj().T) > HERMITICITY_RTOL * scale:
            raise ValueError("matrix is not Hermitian within tolerance")
        object.__setattr__(self, "matrix", _freeze(m))

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        if self.space != other.space:
            raise DimensionMismatchError("cannot add operators on different spaces")
        return HermitianOperator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        if self.space != other.space:
            raise DimensionMismatchError("cannot subtract operators on different spaces")
        return HermitianOperator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar: float) -> "HermitianOperator":
        return HermitianOperator(self.space, self.matrix * float(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of a Hermitian operator; enables exp(-iHt) and exp(-beta H)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.eigenvalues, dtype=float)
        v = np.array(self.eigenvectors, dtype=complex)
        if np.any(np.diff(w) < 0):
            raise ValueError("eigenvalues must be ascending")
        if _max_abs(v.conj().T @ v - np.eye(len(w))) > UNITARITY_ATOL:
            raise ValueError("eigenvector matrix is not unitary within tolerance")
        object.__setattr__(self, "eigenvalues", _freeze(w))
        object.__setattr__(self, "eigenvectors", _freeze(v))

    @classmethod
    def from_operator(cls, op: HermitianOperator) -> "SpectralDecomposition":
        w, v = np.linalg.eigh(op.matrix)
        sd = cls(w, v)
        recon = (v * w) @ v.conj().T
        scale = max(_max_abs(op.matrix), 1e-300)
        if _max_abs(recon - op.matrix) > RECONSTRUCTION_RTOL * scale:
            raise ArithmeticError("eigendecomposition failed reconstruction check")
        return sd

    def propagator(self, t: float) -> np.ndarray:
        """Unitary exp(-i H t) assembled from the eigenpairs."""
        phase = np.exp(-1j * self.eigenvalues * float(t))
        return (self.eigenvectors * phase) @ self.eigenvectors.conj().T


@dataclass(frozen=True)
class DensityMatrix:
    """Positive-semidefinite unit-trace state on a composite space.

    ``eigenvalues`` may be supplied by callers that know the spectrum exactly
    (e.g. unitary propagation preserves it); otherwise it is computed once at
    construction and cached for entropy evaluation.
    """

    space: CompositeSpace
    matrix: np.ndarray
    eigenvalues: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match space dimension {d}"
            )
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"trace must be 1 within {TRACE_ATOL}, got {tr}")
        scale = _max_abs(m)
        if _max_abs(m - m.conj().T) > HERMITICITY_RTOL * max(scale, 1e-300):
            raise ValueError("density matrix is not Hermitian within tolerance")
        if self.eigenvalues is None:
            w = np.linalg.eigvalsh(m)
        else:
            w = np.sort(np.array(self.eigenvalues, dtype=float))
            if w.shape != (d,):
                raise ValueError("eigenvalue vector has wrong length")
        if w[0] < EIGENVALUE_FLOOR:
            raise ValueError(
                f"smallest eigenvalue {w[0]:.3e} below tolerated negativity "
                f"{EIGENVALUE_FLOOR:.0e}"
            )
        object.__setattr__(self, "matrix", _freeze(m))
        object.__setattr__(self, "eigenvalues", _freeze(w))


def identity_operator(space: CompositeSpace) -> HermitianOperator:
    return HermitianOperator(space, np.eye(space.total_dim, dtype=complex))


def pauli(kind: str, site: str, space: CompositeSpace) -> HermitianOperator:
    """Pauli sigma_kind acting on the labeled qubit factor, identity elsewhere."""
    if kind not in _PAULI:
        raise ValueError(f"unknown Pauli kind {kind!r}, expected one of x, y, z")
    i = space.index(site)
    if space.dims[i] != 2:
        raise ValueError(f"factor {site!r} has dimension {space.dims[i]}, not a qubit")
    d_left = math.prod(space.dims[:i]) if i > 0 else 1
    d_right = math.prod(space.dims[i + 1 :]) if i + 1 < len(space.dims) else 1
    m = np.kron(np.kron(np.eye(d_left), _PAULI[kind]), np.eye(d_right))
    return HermitianOperator(space, m)


def evolve(
    rho0: DensityMatrix, H: HermitianOperator, times: Sequence[float]
) -> list[DensityMatrix]:
    """Propagate rho(t) = U(t) rho(0) U(t)^dag with U(t) = exp(-i H t).

    One eigendecomposition of H serves every requested time; the state is
    rotated to the eigenbasis once and dressed with phases per time point.
    """
    if H.space != rho0.space:
        raise DimensionMismatchError("state and Hamiltonian live on different spaces")
    ts = np.array(times, dtype=float)
    if ts.ndim != 1 or ts.size == 0:
        raise ValueError("times must be a non-empty 1-D grid")
    if np.any(np.diff(ts) < 0):
        raise ValueError("times must be ascending")
    if ts[0] < 0:
        raise ValueError("times must start at t >= 0")

    sd = SpectralDecomposition.from_operator(H)
    v = sd.eigenvectors
    w = sd.eigenvalues
    rho_eig = v.conj().T @ rho0.matrix @ v
    spectrum = rho0.eigenvalues

    out: list[DensityMatrix] = []
    for t in ts:
        if t == 0.0:
            out.append(DensityMatrix(rho0.space, rho0.matrix, eigenvalues=spectrum))
            continue
        phase = np.exp(-1j * w * t)
        m = v @ (np.outer(phase, phase.conj()) * rho_eig) @ v.conj().T
        m = 0.5 * (m + m.conj().T)
        out.append(DensityMatrix(rho0.space, m, eigenvalues=spectrum))
    return out


def partial_trace(rho: DensityMatrix, keep: Iterable[str]) -> DensityMatrix:
    """Reduced state on the kept factors (original order preserved)."""
    keep_set = set(keep)
    labels = rho.space.labels
    if not keep_set:
        raise ValueError("keep set must be non-empty")
    unknown = keep_set - set(labels)
    if unknown:
        raise ValueError(f"unknown factor labels {sorted(unknown)}")
    if keep_set == set(labels):
        return rho

    dims = rho.space.dims
    n = len(dims)
    kept = [i for i in range(n) if labels[i] in keep_set]
    dropped = [i for i in range(n) if labels[i] not in keep_set]
    perm = kept + dropped
    arr = rho.matrix.reshape(dims + dims).transpose(perm + [p + n for p in perm])
    dk = math.prod(dims[i] for i in kept)
    dd = math.prod(dims[i] for i in dropped)
    red = np.einsum("ajbj->ab", arr.reshape(dk, dd, dk, dd))
    red = 0.5 * (red + red.conj().T)
    return DensityMatrix(rho.space.subspace(keep_set), red)


def extract_local(op: HermitianOperator, keep: Iterable[str]) -> HermitianOperator:
    """Local block of an operator that acts as identity outside ``keep``.

    Raises if the operator actually couples the kept factors to the rest.
    """
    keep_set = set(keep)
    labels = op.space.labels
    unknown = keep_set - set(labels)
    if unknown:
        raise ValueError(f"unknown factor labels {sorted(unknown)}")
    if keep_set == set(labels):
        return op

    dims = op.space.dims
    n = len(dims)
    kept = [i for i in range(n) if labels[i] in keep_set]
    dropped = [i for i in range(n) if labels[i] not in keep_set]
    perm = kept + dropped
    arr = op.matrix.reshape(dims + dims).transpose(perm + [p + n for p in perm])
    dk = math.prod(dims[i] for i in kept)
    dd = math.prod(dims[i] for i in dropped)
    arr = arr.reshape(dk, dd, dk, dd)
    local = arr[:, 0, :, 0]
    recon = np.einsum("ab,rs->arbs", local, np.eye(dd))
    scale = max(_max_abs(op.matrix), 1e-300)
    if _max_abs(arr - recon) > 1e-10 * scale:
        raise ValueError("operator does not act as identity outside the kept factors")
    return HermitianOperator(op.space.subspace(keep_set), local)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-Tr rho ln rho in nats, with 0 ln 0 = 0 and eigenvalues clamped to [0, 1]."""
    w = np.clip(rho.eigenvalues, 0.0, 1.0)
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w)))


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Quantum relative entropy D(rho || sigma) = Tr rho (ln rho - ln sigma).

    Raises SupportViolationError (infinite divergence) when rho carries weight
    above ``SUPPORT_WEIGHT`` on sigma eigenvectors with eigenvalue below
    ``SUPPORT_EPS``.
    """
    if rho.space != sigma.space:
        raise DimensionMismatchError("states live on different spaces")
    w_r = np.clip(rho.eigenvalues, 0.0, 1.0)
    pos = w_r > 0.0
    term_rho = float(np.sum(w_r[pos] * np.log(w_r[pos])))

    w_s, v_s = np.linalg.eigh(sigma.matrix)
    weights = np.einsum("ji,jk,ki->i", v_s.conj(), rho.matrix, v_s).real
    weights = np.clip(weights, 0.0, None)
    outside = w_s < SUPPORT_EPS
    if np.any(weights[outside] > SUPPORT_WEIGHT):
        raise SupportViolationError(
            "infinite divergence: rho has weight outside the support of sigma"
        )
    inside = ~outside
    term_sigma = float(np.sum(weights[inside] * np.log(w_s[inside])))
    return term_rho - term_sigma

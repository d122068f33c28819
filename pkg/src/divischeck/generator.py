"""Time-local generators in Kossakowski form and their numerical propagation.

A generator is specified by an optional Hamiltonian callback, a callback
for the Hermitian coefficient matrix C(t) over an orthonormal traceless
operator basis {F_i}, and that basis itself:

    L_t[rho] = -i [H_t, rho]
               + sum_ij C_ij(t) (F_i rho F_j† - (1/2){F_j† F_i, rho})

Propagation integrates d/dt M_t = L_t M_t from the identity with classical
fixed-step RK4.  Divisibility criteria at the generator level:

* C(t) >= 0 on a grid is sufficient for the intermediate maps between grid
  times to be completely positive (CP-divisibility, decided at grid
  resolution only);
* for qubit generators with diagonal C(t) = diag(g1, g2, g3), pairwise sums
  g_i + g_j >= 0 (i != j) characterize positivity of the intermediate maps
  (P-divisibility of the family).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import pauli_family
from .linalg import check_hermitian, kron
from .superop import Superoperator

__all__ = [
    "GeneratorCheckReport",
    "GeneratorSpec",
    "PropagatedFamily",
    "apply_generator",
    "cp_divisibility_check",
    "gell_mann_basis",
    "liouvillian",
    "model_generator",
    "p_divisibility_check_pauli",
    "propagate",
    "qubit_rate_generator",
]

BASIS_TOL = 1e-12


def gell_mann_basis(d: int) -> list[np.ndarray]:
    """Orthonormal traceless Hermitian basis with Tr(F_i F_j) = delta_ij.

    Generalized Gell-Mann construction: for each index pair j < k a
    symmetric and an antisymmetric matrix, then the diagonal ladder.  For
    d = 2 this is exactly (sigma_1, sigma_2, sigma_3)/sqrt(2).
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    mats: list[np.ndarray] = []
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = inv_sqrt2
            asym = np.zeros((d, d), dtype=complex)
            asym[j, k] = -1j * inv_sqrt2
            asym[k, j] = 1j * inv_sqrt2
            mats.append(sym)
            mats.append(asym)
    for m in range(1, d):
        diag = np.zeros((d, d), dtype=complex)
        diag[np.diag_indices(m)] = 1.0
        diag[m, m] = -float(m)
        mats.append(diag / math.sqrt(m * (m + 1)))
    return mats


@dataclass
class GeneratorSpec:
    """Kossakowski-form time-local generator.

    ``kossakowski`` maps t to the Hermitian (d^2-1) x (d^2-1) coefficient
    matrix; ``basis`` holds the d^2-1 orthonormal traceless operators it
    refers to.  Basis orthonormality and tracelessness are validated on
    construction; C(t) Hermiticity is validated on every evaluation.
    """

    dim: int
    kossakowski: Callable[[float], np.ndarray]
    basis: Sequence[np.ndarray]
    hamiltonian: Callable[[float], np.ndarray] | None = None
    _terms: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        n = self.dim * self.dim - 1
        if len(self.basis) != n:
            raise ValueError(f"need {n} basis operators for dimension {self.dim}, got {len(self.basis)}")
        self.basis = [np.asarray(f, dtype=complex) for f in self.basis]
        for i, fi in enumerate(self.basis):
            if fi.shape != (self.dim, self.dim):
                raise ValueError(f"basis operator {i} has shape {fi.shape}")
            if abs(np.trace(fi)) > BASIS_TOL:
                raise ValueError(f"basis operator {i} is not traceless: |trace| = {abs(np.trace(fi)):.3e}")
            for j, fj in enumerate(self.basis):
                overlap = np.trace(fi.conj().T @ fj)
                expected = 1.0 if i == j else 0.0
                if abs(overlap - expected) > BASIS_TOL:
                    raise ValueError(
                        f"basis is not orthonormal: Tr(F_{i}^dag F_{j}) = {overlap:.3e}"
                    )

    def coefficient_matrix(self, t: float) -> np.ndarray:
        """Validated Hermitian C(t)."""
        c = check_hermitian(self.kossakowski(t))
        n = self.dim * self.dim - 1
        if c.shape != (n, n):
            raise ValueError(f"coefficient matrix at t={t} has shape {c.shape}, expected {(n, n)}")
        return c


def qubit_rate_generator(rates) -> GeneratorSpec:
    """Qubit generator with diagonal coefficient matrix diag(rates(t)).

    ``rates`` is either a fixed triple or a callable t -> triple.  With the
    basis sigma_k/sqrt(2), a coefficient c_k produces the dissipator
    (c_k/2)(sigma_k rho sigma_k - rho).
    """
    fn = rates if callable(rates) else (lambda t: rates)

    def koss(t: float) -> np.ndarray:
        return np.diag(np.asarray(fn(t), dtype=float)).astype(complex)

    return GeneratorSpec(2, koss, gell_mann_basis(2))


def model_generator(alpha: float) -> GeneratorSpec:
    """The tanh-rate family: C(t) = diag(a, a, -a tanh t) over sigma_k/sqrt(2).

    C(0) is positive semidefinite; for every t > 0 the third coefficient is
    negative, so the generated family is never CP-divisible, yet the
    pairwise rate sums stay nonnegative (P-divisible).
    """
    return qubit_rate_generator(lambda t: pauli_family.rates(t, alpha))


def apply_generator(g: GeneratorSpec, t: float, rho) -> np.ndarray:
    """Evaluate L_t[rho] directly from the defining form."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (g.dim, g.dim):
        raise ValueError(f"state shape {rho.shape} does not match dimension {g.dim}")
    out = np.zeros_like(rho)
    if g.hamiltonian is not None:
        h = check_hermitian(g.hamiltonian(t))
        out += -1j * (h @ rho - rho @ h)
    c = g.coefficient_matrix(t)
    for i, fi in enumerate(g.basis):
        for j, fj in enumerate(g.basis):
            cij = c[i, j]
            if cij == 0:
                continue
            a = fj.conj().T @ fi
            out += cij * (fi @ rho @ fj.conj().T - 0.5 * (a @ rho + rho @ a))
    return out


def _dissipator_terms(g: GeneratorSpec) -> np.ndarray:
    """Precomputed t-independent structure of the dissipator in matrix form.

    terms[i, j] is the superoperator matrix of
    X -> F_i X F_j† - (1/2){F_j† F_i, X} under column stacking.
    """
    if g._terms is None:
        d = g.dim
        n = d * d - 1
        eye = np.eye(d, dtype=complex)
        terms = np.empty((n, n, d * d, d * d), dtype=complex)
        for i, fi in enumerate(g.basis):
            for j, fj in enumerate(g.basis):
                a = fj.conj().T @ fi
                terms[i, j] = (
                    kron(fj.conj(), fi)
                    - 0.5 * (kron(eye, a) + kron(a.T, eye))
                )
        g._terms = terms
    return g._terms


def liouvillian(g: GeneratorSpec) -> Callable[[float], np.ndarray]:
    """Matrix form of the generator, as a cheap-to-evaluate closure.

    The basis-dependent structure is assembled once; each call then only
    contracts it with C(t) and adds the Hamiltonian part.
    """
    terms = _dissipator_terms(g)
    d = g.dim
    eye = np.eye(d, dtype=complex)

    def at(t: float) -> np.ndarray:
        mat = np.einsum("ij,ijkl->kl", g.coefficient_matrix(t), terms)
        if g.hamiltonian is not None:
            h = check_hermitian(g.hamiltonian(t))
            mat = mat + (-1j) * (kron(eye, h) - kron(h.T, eye))
        return mat

    return at


@dataclass
class PropagatedFamily:
    """Maps recorded on an ascending time grid starting at 0 (identity first)."""

    grid: np.ndarray
    maps: list[Superoperator]

    @property
    def dim(self) -> int:
        return self.maps[0].dim


def propagate(g: GeneratorSpec, grid, step: float) -> PropagatedFamily:
    """Integrate d/dt M_t = L_t M_t with fixed-step classical RK4.

    Each grid segment is covered by an integer number of substeps of size
    at most ``step``, so grid points are hit exactly.  Deterministic.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 1:
        raise ValueError("grid must be a nonempty 1-d array of times")
    if abs(grid[0]) > 1e-12:
        raise ValueError(f"grid must start at 0, got {grid[0]}")
    if len(grid) > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly ascending")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if len(grid) > 1 and step > np.min(np.diff(grid)) + 1e-12:
        raise ValueError("step must not exceed the grid spacing")

    lmat = liouvillian(g)
    d2 = g.dim * g.dim
    m = np.eye(d2, dtype=complex)
    maps = [Superoperator(g.dim, m.copy(), trace_preserving=True)]
    l_left = lmat(float(grid[0]))
    for t0, t1 in zip(grid[:-1], grid[1:]):
        span = float(t1 - t0)
        nsub = max(1, math.ceil(span / step - 1e-12))
        h = span / nsub
        for k in range(nsub):
            t = float(t0) + k * h
            l_mid = lmat(t + 0.5 * h)
            l_right = lmat(t + h)
            k1 = l_left @ m
            k2 = l_mid @ (m + 0.5 * h * k1)
            k3 = l_mid @ (m + 0.5 * h * k2)
            k4 = l_right @ (m + h * k3)
            m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            l_left = l_right
        maps.append(Superoperator(g.dim, m.copy(), trace_preserving=True))
    return PropagatedFamily(grid, maps)


@dataclass
class GeneratorCheckReport:
    """Outcome of a generator-level divisibility criterion on a grid.

    The verdict is only as fine as the grid: ``note`` records the spacing
    so downstream consumers can qualify it.
    """

    criterion: str
    satisfied: bool
    worst_time: float
    worst_value: float
    worst_pair: tuple[int, int] | None
    grid_points: int
    grid_spacing: float
    note: str


def cp_divisibility_check(g: GeneratorSpec, grid, tol: float = 1e-9) -> GeneratorCheckReport:
    """CP-divisibility criterion: min eigenvalue of C(t) >= -tol on the grid.

    Nonnegative C on the whole grid is sufficient for the propagated
    intermediate maps to be completely positive; a negative eigenvalue
    pinpoints where and by how much the criterion fails.
    """
    grid = np.asarray(grid, dtype=float)
    worst_value = np.inf
    worst_time = float(grid[0])
    for t in grid:
        w = np.linalg.eigvalsh(g.coefficient_matrix(float(t)))
        if w[0] < worst_value:
            worst_value = float(w[0])
            worst_time = float(t)
    spacing = float(np.min(np.diff(grid))) if len(grid) > 1 else 0.0
    return GeneratorCheckReport(
        criterion="kossakowski-positive",
        satisfied=worst_value >= -tol,
        worst_time=worst_time,
        worst_value=worst_value,
        worst_pair=None,
        grid_points=len(grid),
        grid_spacing=spacing,
        note=f"verdict holds at grid resolution {spacing:g} only",
    )


def p_divisibility_check_pauli(g: GeneratorSpec, grid, tol: float = 1e-9) -> GeneratorCheckReport:
    """P-divisibility criterion for qubit generators with diagonal C(t).

    Checks g_i(t) + g_j(t) >= -tol for all i != j over the grid; rejects
    generators whose coefficient matrix is not diagonal, because the
    pairwise-sum criterion only applies to that class.
    """
    if g.dim != 2:
        raise ValueError("the pairwise rate-sum criterion is specific to qubit generators")
    grid = np.asarray(grid, dtype=float)
    worst_value = np.inf
    worst_time = float(grid[0])
    worst_pair = (0, 1)
    for t in grid:
        c = g.coefficient_matrix(float(t))
        off = c - np.diag(np.diag(c))
        if np.max(np.abs(off)) > 1e-12 * max(1.0, float(np.max(np.abs(c)))):
            raise ValueError(
                f"coefficient matrix at t={t} is not diagonal; the criterion does not apply"
            )
        gam = np.real(np.diag(c))
        for i in range(3):
            for j in range(i + 1, 3):
                val = float(gam[i] + gam[j])
                if val < worst_value:
                    worst_value = val
                    worst_time = float(t)
                    worst_pair = (i, j)
    spacing = float(np.min(np.diff(grid))) if len(grid) > 1 else 0.0
    return GeneratorCheckReport(
        criterion="pairwise-rate-sums",
        satisfied=worst_value >= -tol,
        worst_time=worst_time,
        worst_value=worst_value,
        worst_pair=worst_pair,
        grid_points=len(grid),
        grid_spacing=spacing,
        note=f"verdict holds at grid resolution {spacing:g} only",
    )

"""Sparse Hamiltonians of the three-atom facilitated Rydberg triangle.

Units are hbar = 1, energies in angular frequency. Every operator built here is
real symmetric in the product basis of :mod:`rydjt.basis`, so all matrices are
kept as real ``scipy.sparse`` CSR matrices.

The phonon factor of the product space is assembled with Kronecker products in
the codec order ``kron(b3, b2, b1, a3, a2, a1)`` (``a1`` fastest).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .basis import (
    FULL_LABELS,
    N_MODES,
    RESONANT_LABELS,
    BasisError,
    ElectronicKind,
    FockTruncation,
    ProductBasis,
)

SQRT3_2 = math.sqrt(3.0) / 2.0
ZERO_TOL = 1e-15

# Coefficients of the state-dependent displacement operators d_j^{a/b}:
# row = resonant state |1>..|6>, column = mode (a1, a2, a3, b1, b2, b3).
#   d1a = P1 + P5/2        d1b = -(sqrt3/2) P5
#   d2a = -(P1 + P3/2)     d2b = -(sqrt3/2) P3
#   d3a = (P3 - P5)/2      d3b = (sqrt3/2)(P3 + P5)
D_COEFFS = np.zeros((6, N_MODES))
D_COEFFS[0, 0] = 1.0
D_COEFFS[4, 0] = 0.5
D_COEFFS[0, 1] = -1.0
D_COEFFS[2, 1] = -0.5
D_COEFFS[2, 2] = 0.5
D_COEFFS[4, 2] = -0.5
D_COEFFS[4, 3] = -SQRT3_2
D_COEFFS[2, 4] = -SQRT3_2
D_COEFFS[2, 5] = SQRT3_2
D_COEFFS[4, 5] = SQRT3_2

# Linear change of each pair distance per unit displacement, in units of the
# potential gradient V'(d); atoms are numbered from 1.
PAIR_COEFFS = {
    (1, 2): np.array([1.0, -1.0, 0.0, 0.0, 0.0, 0.0]),
    (2, 3): np.array([0.0, -0.5, 0.5, 0.0, -SQRT3_2, SQRT3_2]),
    (3, 1): np.array([0.5, 0.0, -0.5, -SQRT3_2, 0.0, SQRT3_2]),
}
PAIRS = tuple(PAIR_COEFFS)


def expand_pair_potential(pair) -> np.ndarray:
    """Gradient coefficients of one pair potential w.r.t. (dx1, dx2, dx3, dy1, dy2, dy3).

    ``V(r_j, r_k) ~ V(d) + V'(d) * coeffs @ dR``. Pairs may be given in either
    order.
    """
    pair = tuple(int(p) for p in pair)
    if pair in PAIR_COEFFS:
        return PAIR_COEFFS[pair].copy()
    if pair[::-1] in PAIR_COEFFS:
        return PAIR_COEFFS[pair[::-1]].copy()
    raise BasisError(f"unknown atom pair {pair}")


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless couplings of the model plus the Fock truncation.

    ``detuning`` and ``pair_energy`` only enter the full eight-state
    Hamiltonian.
    """

    rabi: float
    trap: float = 1.0
    coupling: float = 0.0
    n_max: int = 3
    detuning: float | None = None
    pair_energy: float | None = None

    def __post_init__(self):
        if not self.trap > 0:
            raise ValueError(f"trap frequency must be positive, got {self.trap}")
        if self.n_max < 0:
            raise ValueError(f"n_max must be non-negative, got {self.n_max}")

    @classmethod
    def facilitated(cls, detuning: float, **kw) -> "ModelParams":
        """Parameters obeying the facilitation condition detuning + V(d) = 0."""
        return cls(detuning=detuning, pair_energy=-detuning, **kw)

    @property
    def truncation(self) -> FockTruncation:
        return FockTruncation(self.n_max)

    def with_(self, **changes) -> "ModelParams":
        from dataclasses import replace

        return replace(self, **changes)


class SparseOperator:
    """Immutable real symmetric operator on a product basis.

    The full symmetric CSR matrix is kept for fast products; the upper
    triangle is what gets serialized.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix):
        m = sp.csr_matrix(matrix, dtype=float)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got {m.shape}")
        m.sum_duplicates()
        m.data[np.abs(m.data) < ZERO_TOL] = 0.0
        m.eliminate_zeros()
        self._m = m

    @classmethod
    def zeros(cls, dim: int) -> "SparseOperator":
        return cls(sp.csr_matrix((dim, dim)))

    @property
    def matrix(self) -> sp.csr_matrix:
        return self._m

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    @property
    def nnz(self) -> int:
        return self._m.nnz

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        return SparseOperator(self._m + other._m)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return SparseOperator(self._m - other._m)

    def __mul__(self, scalar: float) -> "SparseOperator":
        return SparseOperator(self._m * float(scalar))

    __rmul__ = __mul__

    def __matmul__(self, vec):
        return self._m @ vec

    def toarray(self) -> np.ndarray:
        return self._m.toarray()

    def asymmetry(self) -> float:
        """max |A - A^T| over stored entries."""
        d = self._m - self._m.T
        return float(abs(d).max()) if d.nnz else 0.0

    def upper_triplets(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        up = sp.triu(self._m).tocoo()
        order = np.lexsort((up.col, up.row))
        return up.row[order], up.col[order], up.data[order]

    def dump(self, path) -> None:
        rows, cols, vals = self.upper_triplets()
        with open(path, "w") as fh:
            fh.write(f"# dim={self.dim} herm=upper\n")
            for r, c, v in zip(rows, cols, vals):
                fh.write(f"{r} {c} {float(v)!r}\n")

    @classmethod
    def load(cls, path) -> "SparseOperator":
        text = Path(path).read_text().splitlines()
        header = dict(tok.split("=") for tok in text[0].lstrip("#").split())
        if header.get("herm") != "upper":
            raise ValueError("only herm=upper dumps are supported")
        dim = int(header["dim"])
        body = np.loadtxt(text[1:], ndmin=2) if len(text) > 1 else np.zeros((0, 3))
        r, c, v = body[:, 0].astype(int), body[:, 1].astype(int), body[:, 2]
        up = sp.coo_matrix((v, (r, c)), shape=(dim, dim))
        diag = sp.diags(up.diagonal())
        return cls(up + up.T - diag)


# -- single-mode pieces -----------------------------------------------------


def _position_ladder(n_max: int) -> sp.csr_matrix:
    """Hard-truncated a + a^dagger on one mode."""
    off = np.sqrt(np.arange(1, n_max + 1, dtype=float))
    return sp.diags([off, off], [-1, 1], shape=(n_max + 1, n_max + 1), format="csr")


def _mode_operator(single: sp.spmatrix, mode: int, n_max: int) -> sp.csr_matrix:
    """Embed a single-mode operator into the six-mode phonon space."""
    D = n_max + 1
    # kron order is (b3, b2, b1, a3, a2, a1): mode m sits at slot 5 - m
    left = D ** (N_MODES - 1 - mode)
    right = D**mode
    out = sp.kron(sp.identity(left, format="csr"), single, format="csr")
    return sp.kron(out, sp.identity(right, format="csr"), format="csr")


def phonon_position(mode: int, n_max: int) -> sp.csr_matrix:
    return _mode_operator(_position_ladder(n_max), mode, n_max)


def _phonon_number_total(n_max: int) -> np.ndarray:
    D = n_max + 1
    idx = np.arange(D**N_MODES)
    return sum((idx // D**m) % D for m in range(N_MODES)).astype(float)


def ring_matrix(rabi: float = 1.0) -> np.ndarray:
    """Six-site periodic tight-binding matrix rabi * sum_k (|k+1><k| + h.c.)."""
    r = np.zeros((6, 6))
    for k in range(6):
        r[(k + 1) % 6, k] = r[k, (k + 1) % 6] = rabi
    return r


# -- resonant-manifold builders ---------------------------------------------


def build_ring_hopping(basis: ProductBasis, rabi: float) -> SparseOperator:
    basis.require(ElectronicKind.RESONANT6)
    ident = sp.identity(basis.phonon_dim, format="csr")
    return SparseOperator(sp.kron(sp.csr_matrix(ring_matrix(rabi)), ident, format="csr"))


def build_phonon_energy(basis: ProductBasis, trap: float) -> SparseOperator:
    counts = _phonon_number_total(basis.n_max)
    diag = np.tile(trap * counts, basis.n_elec)
    return SparseOperator(sp.diags(diag, format="csr"))


def _coupling_from_table(
    basis: ProductBasis, table: np.ndarray, scale: float
) -> sp.csr_matrix:
    """sum_m kron(diag(table[:, m]), x_m) times ``scale``."""
    out = sp.csr_matrix((basis.dim, basis.dim))
    if scale == 0.0:
        return out
    for m in range(N_MODES):
        col = table[:, m]
        if not np.any(col):
            continue
        x = phonon_position(m, basis.n_max)
        out = out + sp.kron(sp.diags(scale * col), x, format="csr")
    return out


def build_coupling(basis: ProductBasis, kappa: float) -> SparseOperator:
    basis.require(ElectronicKind.RESONANT6)
    return SparseOperator(_coupling_from_table(basis, D_COEFFS, kappa))


def build_h_res(params: ModelParams) -> SparseOperator:
    """Vibronic Hamiltonian on the six-state facilitation manifold.

    The constant manifold energy (the detuning) is left out.
    """
    basis = ProductBasis.resonant(params.n_max)
    m = build_phonon_energy(basis, params.trap).matrix
    m = m + build_ring_hopping(basis, params.rabi).matrix
    m = m + _coupling_from_table(basis, D_COEFFS, params.coupling)
    return SparseOperator(m)


# -- full eight-state Hamiltonian -------------------------------------------


def _spin_flip(atom: int) -> np.ndarray:
    index = {lab: i for i, lab in enumerate(FULL_LABELS)}
    sx = np.zeros((8, 8))
    for i, lab in enumerate(FULL_LABELS):
        flipped = list(lab)
        flipped[atom] ^= 1
        sx[index[tuple(flipped)], i] = 1.0
    return sx


def full_electronic_hamiltonian(rabi: float, detuning: float, pair_energy: float) -> np.ndarray:
    """8x8 spin part: rabi * sum sigma^x + detuning * sum n + V(d) * sum n_j n_k."""
    occ = np.array(FULL_LABELS, dtype=float)
    h = rabi * sum(_spin_flip(j) for j in range(3))
    h += np.diag(detuning * occ.sum(axis=1))
    for j, k in PAIRS:
        h += np.diag(pair_energy * occ[:, j - 1] * occ[:, k - 1])
    return h


def full_coupling_table() -> np.ndarray:
    """(8, 6) coupling coefficients sum_pairs n_j n_k * pair_coeffs."""
    occ = np.array(FULL_LABELS, dtype=float)
    table = np.zeros((len(FULL_LABELS), N_MODES))
    for (j, k), coeffs in PAIR_COEFFS.items():
        table += np.outer(occ[:, j - 1] * occ[:, k - 1], coeffs)
    return table


def build_h_full_linearized(params: ModelParams) -> SparseOperator:
    """Full three-spin Hamiltonian with the pair potentials expanded to first order.

    Each ladder combination (a + a^dagger) of a pair expansion enters with
    strength ``coupling`` times the pair coefficient, matching
    :func:`build_h_res` on the resonant block up to the constant detuning.
    """
    if params.detuning is None or params.pair_energy is None:
        raise ValueError("the full Hamiltonian needs both detuning and pair_energy")
    basis = ProductBasis.full(params.n_max)
    elec = full_electronic_hamiltonian(params.rabi, params.detuning, params.pair_energy)
    m = sp.kron(sp.csr_matrix(elec), sp.identity(basis.phonon_dim), format="csr")
    m = m + build_phonon_energy(basis, params.trap).matrix
    m = m + _coupling_from_table(basis, full_coupling_table(), params.coupling)
    return SparseOperator(m)


# -- symmetry ---------------------------------------------------------------

# Mirror x -> -x through atom 3 swaps atoms 1 and 2; ring labels map
# 1->1, 2->6, 3->5, 4->4, 5->3, 6->2.
_MIRROR_ELEC = (0, 5, 4, 3, 2, 1)
_MIRROR_MODES = (1, 0, 2, 4, 3, 5)  # new mode m takes old mode _MIRROR_MODES[m]
_MIRROR_SIGN_MODES = (0, 1, 2)  # x quadratures change sign


def build_mirror(basis: ProductBasis) -> SparseOperator:
    """Orthogonal involution implementing the reflection x -> -x (atoms 1 <-> 2)."""
    basis.require(ElectronicKind.RESONANT6)
    occ = basis.phonon_occupations()
    D = basis.fock.local_dim
    new_occ = occ[:, _MIRROR_MODES]
    new_idx = (new_occ * D ** np.arange(N_MODES)).sum(axis=1)
    sign = (-1.0) ** occ[:, list(_MIRROR_SIGN_MODES)].sum(axis=1)
    P = basis.phonon_dim
    rows, cols, vals = [], [], []
    for e, e_new in enumerate(_MIRROR_ELEC):
        rows.append(e_new * P + new_idx)
        cols.append(e * P + np.arange(P))
        vals.append(sign)
    m = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(basis.dim, basis.dim),
    )
    return SparseOperator(m)


def build_mode_parity(basis: ProductBasis) -> SparseOperator:
    """(-1)^N over all six modes; maps coupling -> -coupling."""
    counts = _phonon_number_total(basis.n_max)
    return SparseOperator(sp.diags(np.tile((-1.0) ** counts, basis.n_elec), format="csr"))


__all__ = [
    "D_COEFFS",
    "PAIR_COEFFS",
    "ModelParams",
    "SparseOperator",
    "RESONANT_LABELS",
    "build_coupling",
    "build_h_full_linearized",
    "build_h_res",
    "build_mirror",
    "build_mode_parity",
    "build_phonon_energy",
    "build_ring_hopping",
    "expand_pair_potential",
    "full_coupling_table",
    "full_electronic_hamiltonian",
    "phonon_position",
    "ring_matrix",
]

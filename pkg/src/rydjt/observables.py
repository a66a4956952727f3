"""Measurements on product-basis states and the Jahn-Teller ansatz.

Two state representations are supported:

* :class:`StateVector` - dense amplitudes on a :class:`~rydjt.basis.ProductBasis`.
* :class:`BranchState` - a superposition of electronic labels times product
  coherent states, kept factorized per mode. It gives exact spin reduced
  density matrices at truncations far beyond what a dense vector allows.

Entropies are in nats.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .basis import N_MODES, RESONANT_LABELS, ProductBasis

SQRT3_2 = math.sqrt(3.0) / 2.0
TRUNCATION_WARN = 1e-8
TRUNCATION_FAIL = 1e-3
EIG_FLOOR = 1e-14


class TruncationError(ValueError):
    """Coherent-state weight lost to the Fock cutoff is too large."""


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CoherentBranch:
    elec: int  # ring label 1..6
    alphas: np.ndarray  # (a1, a2, a3, b1, b2, b3)

    @property
    def elec_index(self) -> int:
        return self.elec - 1


def jt_branches(kappa: float, trap: float) -> list[CoherentBranch]:
    """The three displaced configurations |1>, |3>, |5> and their coherent amplitudes."""
    if trap <= 0:
        raise ValueError("trap must be positive")
    k = kappa / trap
    h, s = k / 2.0, SQRT3_2 * k
    return [
        CoherentBranch(1, np.array([-k, k, 0.0, 0.0, 0.0, 0.0])),
        CoherentBranch(3, np.array([0.0, h, -h, 0.0, s, -s])),
        CoherentBranch(5, np.array([-h, 0.0, h, s, 0.0, -s])),
    ]


def coherent_vector(alpha: float, n_max: int) -> tuple[np.ndarray, float]:
    """Truncated coherent state, renormalized; also returns the dropped weight."""
    c = np.empty(n_max + 1)
    c[0] = math.exp(-0.5 * alpha * alpha)
    for n in range(1, n_max + 1):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    kept = float(c @ c)
    return c / math.sqrt(kept), max(0.0, 1.0 - kept)


# -- state containers -------------------------------------------------------


@dataclass
class StateVector:
    basis: ProductBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        if self.amplitudes.shape != (self.basis.dim,):
            raise ValueError(
                f"amplitude length {self.amplitudes.shape} does not match dim {self.basis.dim}"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        return StateVector(self.basis, self.amplitudes / self.norm)

    def blocks(self) -> np.ndarray:
        """Amplitudes as (n_elec, phonon_dim)."""
        return self.amplitudes.reshape(self.basis.n_elec, self.basis.phonon_dim)

    @classmethod
    def product(cls, basis: ProductBasis, elec, occupations=(0,) * N_MODES) -> "StateVector":
        """Electronic vector (or single label index) times one Fock state."""
        amps = np.zeros(basis.dim)
        e = np.zeros(basis.n_elec)
        if np.isscalar(elec):
            e[int(elec)] = 1.0
        else:
            e[:] = elec
        phonon = basis.index_of(0, occupations)
        amps[np.arange(basis.n_elec) * basis.phonon_dim + phonon] = e
        return cls(basis, amps / np.linalg.norm(e))


@dataclass
class BranchState:
    """sum_b coeffs[b] |elec[b]> (x) prod_m |factors[b][m]>, with real factors."""

    n_elec: int
    coeffs: np.ndarray
    elec: list[int]  # 0-based electronic index per branch
    factors: list[list[np.ndarray]]  # [branch][mode] -> Fock vector
    dropped_weight: float = 0.0

    def gram(self) -> np.ndarray:
        nb = len(self.coeffs)
        g = np.ones((nb, nb))
        for i in range(nb):
            for j in range(nb):
                for m in range(N_MODES):
                    g[i, j] *= self.factors[i][m] @ self.factors[j][m]
        return g

    def to_state_vector(self, basis: ProductBasis) -> StateVector:
        amps = np.zeros((basis.n_elec, basis.phonon_dim))
        for c, e, fac in zip(self.coeffs, self.elec, self.factors):
            # codec order kron(b3, b2, b1, a3, a2, a1)
            amps[e] += c * reduce(np.kron, fac[::-1])
        return StateVector(basis, amps.ravel())


def _jt_branch_state(kappa: float, trap: float, n_max: int) -> BranchState:
    factors, dropped = [], 0.0
    branches = jt_branches(kappa, trap)
    for br in branches:
        vecs, kept = [], 1.0
        for a in br.alphas:
            v, lost = coherent_vector(float(a), n_max)
            vecs.append(v)
            kept *= 1.0 - lost
        factors.append(vecs)
        dropped = max(dropped, 1.0 - kept)
    if dropped > TRUNCATION_FAIL:
        raise TruncationError(
            f"coherent weight {dropped:.3g} lost at n_max={n_max}; increase n_max"
        )
    if dropped > TRUNCATION_WARN:
        warnings.warn(
            f"coherent weight {dropped:.3g} lost at n_max={n_max}", TruncationWarning, stacklevel=3
        )
    coeffs = np.full(3, 1.0 / math.sqrt(3.0))
    return BranchState(6, coeffs, [b.elec_index for b in branches], factors, dropped)


def jt_branch_state(kappa: float, trap: float, n_max: int) -> BranchState:
    """Factorized equal-weight superposition of the three displaced branches."""
    return _jt_branch_state(kappa, trap, n_max)


def build_jt_ansatz(kappa: float, trap: float, n_max: int) -> StateVector:
    """Dense Jahn-Teller ansatz on the resonant product basis with cutoff ``n_max``."""
    bs = _jt_branch_state(kappa, trap, n_max)
    return bs.to_state_vector(ProductBasis.resonant(n_max))


# -- measurements -----------------------------------------------------------


def spin_reduced_density(state) -> np.ndarray:
    """Electronic density matrix after tracing out all six modes."""
    if isinstance(state, BranchState):
        g = state.gram()
        rho = np.zeros((state.n_elec, state.n_elec))
        cc = np.outer(state.coeffs, state.coeffs) * g
        for i, ei in enumerate(state.elec):
            for j, ej in enumerate(state.elec):
                rho[ei, ej] += cc[i, j]
        return rho
    m = state.blocks()
    return m @ m.T


def von_neumann_entropy(rho: np.ndarray) -> float:
    p = np.linalg.eigvalsh(rho)
    p = p[p > EIG_FLOOR]
    return float(-(p * np.log(p)).sum())


def entanglement_entropy(state) -> float:
    """Spin-phonon entanglement entropy in nats."""
    return von_neumann_entropy(spin_reduced_density(state))


def electronic_weights(state) -> np.ndarray:
    if isinstance(state, BranchState):
        return np.diag(spin_reduced_density(state)).copy()
    m = state.blocks()
    return np.einsum("ij,ij->i", m, m)


def rydberg_density(state) -> np.ndarray:
    """<n_j> for the three atoms."""
    if isinstance(state, BranchState):
        occ = np.array(RESONANT_LABELS, dtype=float)
    else:
        occ = state.basis.electronic.occupations()
    return electronic_weights(state) @ occ


def _lowering_overlaps(state: StateVector) -> np.ndarray:
    """(n_elec, 6) array of <psi_e| a_m |psi_e> per electronic block."""
    basis = state.basis
    t = basis.as_tensor(state.amplitudes)
    D = basis.fock.local_dim
    sq = np.sqrt(np.arange(1, D, dtype=float))
    out = np.zeros((basis.n_elec, N_MODES))
    for m in range(N_MODES):
        ax = basis.mode_axis(m)
        lo = np.take(t, np.arange(D - 1), axis=ax)
        hi = np.take(t, np.arange(1, D), axis=ax)
        shape = [1] * t.ndim
        shape[ax] = D - 1
        prod = lo * hi * sq.reshape(shape)
        out[:, m] = prod.reshape(basis.n_elec, -1).sum(axis=1)
    return out


def mode_displacements(state: StateVector) -> np.ndarray:
    """<(a + a^dagger)/sqrt 2> per mode, i.e. displacement in units of x_ho."""
    return math.sqrt(2.0) * _lowering_overlaps(state).sum(axis=0)


def conditional_displacements(state: StateVector) -> np.ndarray:
    """(n_elec, 6) displacements conditioned on each electronic outcome (0 if unoccupied)."""
    w = electronic_weights(state)
    low = _lowering_overlaps(state)
    out = np.zeros_like(low)
    occupied = w > 1e-14
    out[occupied] = math.sqrt(2.0) * low[occupied] / w[occupied, None]
    return out


def overlap(a, b) -> float:
    """|<a|b>| between the normalized states (StateVector or raw arrays)."""
    va = a.amplitudes if isinstance(a, StateVector) else np.asarray(a)
    vb = b.amplitudes if isinstance(b, StateVector) else np.asarray(b)
    return float(abs(va @ vb) / math.sqrt((va @ va) * (vb @ vb)))


def fidelity(a, b) -> float:
    """|<a|b>|^2, the squared overlap."""
    return overlap(a, b) ** 2


def sample_branch(state: StateVector, seed: int | None = None, size: int | None = None,
                  physical=None):
    """Projective Rydberg-density measurement.

    Returns ``(label, displacement)`` with ``label`` in 1..n_elec and the six
    displacements conditioned on that outcome, in units of x_ho or in metres
    when ``physical`` (a :class:`~rydjt.physical.PhysicalParams`) is given.
    With ``size`` set, arrays of ``size`` draws are returned.
    """
    rng = np.random.default_rng(seed)
    w = electronic_weights(state)
    w = w / w.sum()
    disp = conditional_displacements(state)
    if physical is not None:
        disp = disp * physical.x_ho
    idx = rng.choice(len(w), size=size, p=w)
    if size is None:
        return int(idx) + 1, disp[idx]
    return idx + 1, disp[idx]

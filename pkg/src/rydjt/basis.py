"""Electronic and phonon state spaces and the product-basis index codec.

Layout of a product-basis index (fixed, so that saved vectors stay portable)::

    index = elec * D**6 + sum_m n_m * D**m,   D = n_max + 1

with modes ordered ``(a1, a2, a3, b1, b2, b3)`` (``a`` = x, ``b`` = y motion
of atoms 1..3). Mode ``a1`` is the fastest-running digit, the electronic
label is the slowest.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

N_MODES = 6
MODE_NAMES = ("a1", "a2", "a3", "b1", "b2", "b3")

# Ring order of the facilitation-resonant manifold; 1 = Rydberg (up).
RESONANT_LABELS: tuple[tuple[int, int, int], ...] = (
    (1, 1, 0),
    (0, 1, 0),
    (0, 1, 1),
    (0, 0, 1),
    (1, 0, 1),
    (1, 0, 0),
)
# Full space keeps the resonant ring first so that its block is the leading
# 6 * D**6 sub-block; the two off-resonant configurations follow.
FULL_LABELS = RESONANT_LABELS + ((0, 0, 0), (1, 1, 1))


class BasisError(ValueError):
    """Raised for out-of-range indices, truncation overflow or basis mismatch."""


class ElectronicKind(enum.Enum):
    RESONANT6 = "resonant6"
    FULL8 = "full8"


def enumerate_resonant() -> list[tuple[int, int, int]]:
    """The six near-resonant spin configurations in ring order |1>..|6>."""
    return list(RESONANT_LABELS)


def spin_string(label) -> str:
    return "".join("↑" if s else "↓" for s in label)


@dataclass(frozen=True)
class ElectronicBasis:
    kind: ElectronicKind
    labels: tuple[tuple[int, int, int], ...] = field(init=False)

    def __post_init__(self):
        labels = RESONANT_LABELS if self.kind is ElectronicKind.RESONANT6 else FULL_LABELS
        object.__setattr__(self, "labels", labels)

    @classmethod
    def resonant(cls) -> "ElectronicBasis":
        return cls(ElectronicKind.RESONANT6)

    @classmethod
    def full(cls) -> "ElectronicBasis":
        return cls(ElectronicKind.FULL8)

    def __len__(self) -> int:
        return len(self.labels)

    def occupations(self) -> np.ndarray:
        """(n_elec, 3) array of Rydberg occupations per atom."""
        return np.array(self.labels, dtype=float)


@dataclass(frozen=True)
class FockTruncation:
    n_max: int
    n_modes: int = N_MODES

    def __post_init__(self):
        if self.n_max < 0:
            raise BasisError(f"n_max must be non-negative, got {self.n_max}")
        if self.n_modes != N_MODES:
            raise BasisError("the model has exactly six oscillator modes")

    @property
    def local_dim(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return self.local_dim**self.n_modes


@dataclass(frozen=True)
class ProductBasis:
    electronic: ElectronicBasis
    fock: FockTruncation

    @classmethod
    def resonant(cls, n_max: int) -> "ProductBasis":
        return cls(ElectronicBasis.resonant(), FockTruncation(n_max))

    @classmethod
    def full(cls, n_max: int) -> "ProductBasis":
        return cls(ElectronicBasis.full(), FockTruncation(n_max))

    @property
    def kind(self) -> ElectronicKind:
        return self.electronic.kind

    @property
    def n_max(self) -> int:
        return self.fock.n_max

    @property
    def n_elec(self) -> int:
        return len(self.electronic)

    @property
    def phonon_dim(self) -> int:
        return self.fock.dim

    @property
    def dim(self) -> int:
        return self.n_elec * self.fock.dim

    def require(self, kind: ElectronicKind) -> None:
        if self.kind is not kind:
            raise BasisError(f"operation needs a {kind.value} basis, got {self.kind.value}")

    def index_of(self, elec: int, occupations) -> int:
        occ = [int(n) for n in occupations]
        if not 0 <= elec < self.n_elec:
            raise BasisError(f"electronic index {elec} outside [0, {self.n_elec})")
        if len(occ) != N_MODES:
            raise BasisError(f"expected {N_MODES} occupations, got {len(occ)}")
        D = self.fock.local_dim
        idx = 0
        for n in reversed(occ):
            if not 0 <= n <= self.n_max:
                raise BasisError(f"occupation {n} outside truncation n_max={self.n_max}")
            idx = idx * D + n
        return elec * self.phonon_dim + idx

    def state_of(self, index: int) -> tuple[int, list[int]]:
        if not 0 <= index < self.dim:
            raise BasisError(f"index {index} outside [0, {self.dim})")
        elec, rest = divmod(int(index), self.phonon_dim)
        D = self.fock.local_dim
        occ = []
        for _ in range(N_MODES):
            rest, n = divmod(rest, D)
            occ.append(n)
        return elec, occ

    def phonon_occupations(self) -> np.ndarray:
        """(phonon_dim, 6) occupations of every phonon index, in codec order."""
        D = self.fock.local_dim
        idx = np.arange(self.phonon_dim)
        return np.stack([(idx // D**m) % D for m in range(N_MODES)], axis=1)

    def mode_axis(self, mode: int) -> int:
        """Axis of ``mode`` in :meth:`as_tensor` (axis 0 is electronic)."""
        return N_MODES - mode

    def as_tensor(self, vec: np.ndarray) -> np.ndarray:
        """View a state vector with shape (n_elec, D[b3], ..., D[a1])."""
        D = self.fock.local_dim
        return np.asarray(vec).reshape((self.n_elec,) + (D,) * N_MODES)

"""Classical-nuclei (Born-Oppenheimer) surfaces of the Rydberg triangle.

Normal coordinates ``q`` are in units of x_ho. Only q1 (breathing) and the
degenerate pair (q2, q3) couple to the electrons; q4..q6 only add
(trap/2) q^2.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .operators import ring_matrix

S2 = math.sqrt(2.0)
S3 = math.sqrt(3.0)

# Rows are v(1)..v(6) over (dx1, dx2, dx3, dy1, dy2, dy3).
_MODES = np.array(
    [
        [0.5, -0.5, 0.0, -1 / (2 * S3), -1 / (2 * S3), 1 / S3],
        [-0.5, 0.5, 0.0, -1 / (2 * S3), -1 / (2 * S3), 1 / S3],
        [1 / (2 * S3), 1 / (2 * S3), -1 / S3, -0.5, 0.5, 0.0],
        [0.0, 0.0, 0.0, 1 / S3, 1 / S3, 1 / S3],
        [1 / S3, 1 / S3, 1 / S3, 0.0, 0.0, 0.0],
        [-1 / (2 * S3), -1 / (2 * S3), 1 / S3, -0.5, 0.5, 0.0],
    ]
)

# Diagonal electronic coupling per unit kappa for q1, q2, q3 (ring states 1..6).
_P135 = np.array([1.0, 0, 1.0, 0, 1.0, 0])
_Q_COUPLING = np.array(
    [
        S2 * _P135,
        -(1 / S2) * np.array([2.0, 0, -1.0, 0, -1.0, 0]),
        -math.sqrt(1.5) * np.array([0.0, 0, 1.0, 0, -1.0, 0]),
    ]
)

GRAD_TOL = 1e-8
DEDUP_TOL = 1e-6
DEGENERATE_TOL = 1e-9


@dataclass(frozen=True)
class NormalModeFrame:
    vectors: np.ndarray

    def __post_init__(self):
        err = np.abs(self.vectors @ self.vectors.T - np.eye(6)).max()
        if err > 1e-12:
            raise ValueError(f"normal modes are not orthonormal (error {err:.2e})")

    @staticmethod
    def equilibrium(spacing: float = 1.0) -> np.ndarray:
        """Trap centres (x1, x2, x3, y1, y2, y3) for side length ``spacing``."""
        return spacing * np.array([0.5, -0.5, 0.0, 0.0, 0.0, S3 / 2])

    def to_normal(self, dR) -> np.ndarray:
        return self.vectors @ np.asarray(dR, dtype=float)

    def from_normal(self, q) -> np.ndarray:
        return self.vectors.T @ np.asarray(q, dtype=float)


def normal_mode_frame() -> NormalModeFrame:
    return NormalModeFrame(_MODES.copy())


def to_normal_coords(dR) -> np.ndarray:
    return _MODES @ np.asarray(dR, dtype=float)


def from_normal_coords(q) -> np.ndarray:
    return _MODES.T @ np.asarray(q, dtype=float)


def _split(q) -> tuple[np.ndarray, float]:
    q = np.asarray(q, dtype=float)
    if q.shape not in ((3,), (6,)):
        raise ValueError(f"q must have 3 or 6 components, got shape {q.shape}")
    return q[:3], float(q @ q)


def bo_matrix(q, kappa: float, trap: float, rabi: float) -> np.ndarray:
    """6x6 electronic Hamiltonian at frozen normal coordinates ``q``."""
    if trap <= 0:
        raise ValueError("trap must be positive")
    qc, q2sum = _split(q)
    h = rabi * ring_matrix()
    h += np.diag(0.5 * trap * q2sum + kappa * (qc @ _Q_COUPLING))
    return h


@dataclass(frozen=True)
class BOSurfacePoint:
    q: np.ndarray
    energy: float
    vector: np.ndarray
    gap: float


def bo_ground(q, kappa: float, trap: float, rabi: float) -> BOSurfacePoint:
    vals, vecs = np.linalg.eigh(bo_matrix(q, kappa, trap, rabi))
    return BOSurfacePoint(np.asarray(q, float), float(vals[0]), vecs[:, 0], float(vals[1] - vals[0]))


def bo_ground_energy(q, kappa: float, trap: float, rabi: float) -> float:
    return float(np.linalg.eigvalsh(bo_matrix(q, kappa, trap, rabi))[0])


def hellmann_feynman_gradient(q, kappa: float, trap: float, rabi: float) -> np.ndarray:
    """dE0/dq from <psi0| dH/dq |psi0>; meaningless where the ground state is degenerate."""
    pt = bo_ground(q, kappa, trap, rabi)
    w = pt.vector**2
    q = np.asarray(q, dtype=float)
    grad = trap * q.copy()
    grad[:3] += kappa * (_Q_COUPLING @ w)
    return grad


def bo_surface_grid(q1: float, kappa: float, trap: float, rabi: float,
                    q2_values, q3_values) -> np.ndarray:
    """Rows ``(q2, q3, E0)`` on the product grid at fixed q1 (q3 runs fastest)."""
    q2g, q3g = np.meshgrid(np.asarray(q2_values, float), np.asarray(q3_values, float), indexing="ij")
    q2f, q3f = q2g.ravel(), q3g.ravel()
    q = np.stack([np.full_like(q2f, q1), q2f, q3f], axis=1)
    diag = 0.5 * trap * (q * q).sum(axis=1)[:, None] + kappa * (q @ _Q_COUPLING)
    mats = np.broadcast_to(rabi * ring_matrix(), (len(q), 6, 6)).copy()
    idx = np.arange(6)
    mats[:, idx, idx] += diag
    e0 = np.linalg.eigvalsh(mats)[:, 0]
    return np.column_stack([q2f, q3f, e0])


# -- minima -----------------------------------------------------------------


@dataclass
class MinimaReport:
    rabi: float
    minima: list[tuple[np.ndarray, float]]
    local_minima: list[tuple[np.ndarray, float]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def multiplicity(self) -> int:
        return len(self.minima)

    @property
    def energy(self) -> float:
        return self.minima[0][1]

    @property
    def q_min_norm(self) -> float:
        return float(np.linalg.norm(self.minima[0][0]))


def analytic_seeds(kappa: float, trap: float) -> list[np.ndarray]:
    """Zero-driving branch minima, the origin, and the strong-driving minimum."""
    k = kappa / trap
    return [
        np.array([-S2 * k, S2 * k, 0.0]),
        np.array([-S2 * k, -k / S2, math.sqrt(1.5) * k]),
        np.array([-S2 * k, -k / S2, -math.sqrt(1.5) * k]),
        np.zeros(3),
        np.array([-k / S2, 0.0, 0.0]),
    ]


def numerical_hessian(q, kappa: float, trap: float, rabi: float, h: float = 1e-5) -> np.ndarray:
    q = np.asarray(q, float)
    n = len(q)
    hess = np.zeros((n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        hess[:, i] = (
            hellmann_feynman_gradient(q + e, kappa, trap, rabi)
            - hellmann_feynman_gradient(q - e, kappa, trap, rabi)
        ) / (2 * h)
    return 0.5 * (hess + hess.T)


def _descend(q0, kappa, trap, rabi):
    f = lambda q: bo_ground_energy(q, kappa, trap, rabi)
    g = lambda q: hellmann_feynman_gradient(q, kappa, trap, rabi)
    res = optimize.minimize(f, q0, jac=g, method="BFGS", options={"gtol": 1e-11, "maxiter": 2000})
    q = res.x
    # Newton polish: BFGS stalls a few digits short of the gradient target
    for _ in range(20):
        grad = g(q)
        if np.linalg.norm(grad) < 1e-12:
            break
        hess = numerical_hessian(q, kappa, trap, rabi)
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            break
        if np.linalg.norm(step) > 0.1 * (1 + np.linalg.norm(q)):
            break
        q = q - step
    return q


def find_minima(kappa: float, trap: float, rabi: float, *, seeds=None) -> MinimaReport:
    """Multi-start local descent on the lowest surface E0(q1, q2, q3).

    Stationary points that are not minima are kicked along their most
    negative curvature direction and descended again.
    """
    if trap <= 0:
        raise ValueError("trap must be positive")
    report = MinimaReport(rabi, [])
    scale = max(abs(kappa) / trap, 1e-3)
    queue = [np.asarray(s, float) for s in (seeds or analytic_seeds(kappa, trap))]
    found: list[tuple[np.ndarray, float]] = []
    budget = 4 * len(queue) + 8
    while queue and budget:
        budget -= 1
        q0 = queue.pop(0)
        q = _descend(q0, kappa, trap, rabi)
        grad = np.linalg.norm(hellmann_feynman_gradient(q, kappa, trap, rabi))
        if grad >= GRAD_TOL:
            report.notes.append(f"seed {np.round(q0, 6).tolist()}: gradient {grad:.2e} left")
            continue
        curv, dirs = np.linalg.eigh(numerical_hessian(q, kappa, trap, rabi))
        if curv[0] <= 1e-8 * trap:
            report.notes.append(f"seed {np.round(q0, 6).tolist()}: stationary point is not a minimum")
            kick = 1e-2 * scale * dirs[:, 0]
            queue.extend([q + kick, q - kick])
            continue
        if any(np.linalg.norm(q - p) < DEDUP_TOL for p, _ in found):
            continue
        found.append((q, bo_ground_energy(q, kappa, trap, rabi)))

    if not found:
        raise RuntimeError(f"no minimum found at rabi={rabi}: {report.notes}")
    found.sort(key=lambda m: m[1])
    e_best = found[0][1]
    report.local_minima = found
    report.minima = [m for m in found if m[1] - e_best <= DEGENERATE_TOL * max(1.0, abs(e_best))]
    return report


@dataclass
class TransitionRow:
    rabi: float
    e_min: float
    q_min_norm: float
    multiplicity: int
    q_min: np.ndarray


def transition_sweep(kappa: float, trap: float, rabi_grid, *, threads: int = 1) -> list[TransitionRow]:
    grid = np.asarray(rabi_grid, float)
    if np.any(np.diff(grid) <= 0):
        raise ValueError("rabi grid must be strictly increasing")

    def one(r):
        rep = find_minima(kappa, trap, float(r))
        return TransitionRow(float(r), rep.energy, rep.q_min_norm, rep.multiplicity, rep.minima[0][0])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, grid))
    return [one(r) for r in grid]


def collapse_threshold(kappa: float, trap: float, rabi_grid, *, refine: bool = False,
                       rtol: float = 1e-4) -> float | None:
    """First grid value with a single minimum; optionally bisected to ``rtol``."""
    rows = transition_sweep(kappa, trap, rabi_grid)
    for prev, row in zip([None] + rows[:-1], rows):
        if row.multiplicity == 1:
            if not refine or prev is None:
                return row.rabi
            lo, hi = prev.rabi, row.rabi
            while hi - lo > rtol * hi:
                mid = 0.5 * (lo + hi)
                if find_minima(kappa, trap, mid).multiplicity == 1:
                    hi = mid
                else:
                    lo = mid
            return hi
    return None

"""Closed-form perturbative ground-state energies in both coupling regimes.

Weak vibronic coupling (|kappa| << rabi, trap) expands around the electronic
ring ground state; weak driving (rabi << trap, |kappa|) expands around the
three degenerate displaced configurations |1>, |3>, |5>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate


class DomainError(ValueError):
    pass


def e_gs2(kappa: float, trap: float, rabi: float) -> float:
    """Second-order shift of the ring ground state from the vibronic coupling."""
    if trap <= 0 or rabi <= 0:
        raise DomainError("e_gs2 needs trap > 0 and rabi > 0")
    w, r = trap, rabi
    return -(kappa**2 / 4.0) * (1 / w + 1 / (w + r) + 1 / (w + 3 * r) + 1 / (w + 4 * r))


def jt_unperturbed_energy(kappa: float, trap: float) -> float:
    """Energy -2 kappa^2 / trap of each displaced two-excitation configuration."""
    if trap <= 0:
        raise DomainError("trap must be positive")
    return -2.0 * kappa**2 / trap


def gamma_sum(a: float, b: float) -> float:
    r"""sum_{n>=0} b^n / (n! (n + a)), evaluated as \int_0^1 u^{a-1} e^{b u} du.

    For a < 1 the endpoint singularity is removed with u = t^{1/a}, which turns
    the integrand into e^{b t^{1/a}} / a.
    """
    if not a > 0:
        raise DomainError(f"gamma_sum needs a > 0, got {a}")
    if b < 0:
        raise DomainError(f"gamma_sum needs b >= 0, got {b}")
    if b == 0:
        return 1.0 / a
    if a < 1:
        f = lambda t: math.exp(b * t ** (1.0 / a)) / a
    else:
        f = lambda u: u ** (a - 1.0) * math.exp(b * u)
    val, _ = integrate.quad(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def _eta(kappa: float, trap: float) -> float:
    if trap <= 0:
        raise DomainError("trap must be positive")
    if kappa == 0:
        raise DomainError(
            "the weak-driving expansion is undefined at kappa = 0; use e_gs2 instead"
        )
    return 2.0 * kappa**2 / trap**2


def e_jt2_gamma(kappa: float, trap: float, rabi: float) -> float:
    """Second-order shift (in rabi) of the Jahn-Teller ground state, integral form."""
    eta = _eta(kappa, trap)
    pref = -2.0 * rabi**2 / trap * math.exp(-eta)
    return pref * (gamma_sum(eta, eta) + gamma_sum(eta, eta / 4.0))


def _series(a: float, b: float, rel: float = 1e-14, sign: float = 1.0) -> float:
    """Direct sum of (sign*b)^n / (n! (n + a)); stops once past the Poisson peak."""
    total = 0.0
    term = 1.0  # (sign*b)^n / n!
    n = 0
    while True:
        contrib = term / (n + a)
        total += contrib
        if n > b and abs(contrib) <= rel * abs(total):
            return total
        n += 1
        term *= sign * b / n
        if n > 10_000:
            raise RuntimeError("series did not converge")


@dataclass(frozen=True)
class JTSecondOrder:
    eta: float
    m_diag: float
    m_off: float
    m_cb: float

    @property
    def lambda1(self) -> float:
        return self.m_diag + 2.0 * self.m_off

    @property
    def lambda23(self) -> float:
        return self.m_diag - self.m_off

    def matrix(self) -> np.ndarray:
        """3x3 second-order matrix on {|A>, |B>, |C>}."""
        m = np.full((3, 3), self.m_off)
        np.fill_diagonal(m, self.m_diag)
        m[1, 2] = m[2, 1] = self.m_cb
        return m


def jt_second_order(kappa: float, trap: float, rabi: float) -> JTSecondOrder:
    """Matrix elements of the degenerate second-order problem by direct summation.

    ``m_cb`` is summed from its own two-mode double series (one alternating
    factor), independently of ``m_off``.
    """
    eta = _eta(kappa, trap)
    x = rabi**2 / trap * math.exp(-eta)
    m_diag = -2.0 * x * _series(eta, eta)
    m_off = -x * _series(eta, eta / 4.0)
    # C-B overlap runs through one mode with alternating sign (-eta/8) and one
    # with eta/8 * 3; the double sum collapses onto total occupation N.
    m_cb = -x * _double_series(eta, -eta / 8.0, 3.0 * eta / 8.0)
    return JTSecondOrder(eta, m_diag, m_off, m_cb)


def _double_series(a: float, b1: float, b2: float, rel: float = 1e-14) -> float:
    """sum_{n1,n2} b1^n1 b2^n2 / (n1! n2! (n1 + n2 + a)) by explicit double loop."""
    nmax = 20
    while True:
        n = np.arange(nmax)
        lf = np.array([math.lgamma(k + 1) for k in n])
        t1 = np.sign(b1) ** n * np.exp(n * math.log(abs(b1)) - lf) if b1 else (n == 0).astype(float)
        t2 = np.sign(b2) ** n * np.exp(n * math.log(abs(b2)) - lf) if b2 else (n == 0).astype(float)
        grid = np.outer(t1, t2) / (n[:, None] + n[None, :] + a)
        total = grid.sum()
        edge = np.abs(grid[-1, :]).sum() + np.abs(grid[:, -1]).sum()
        if nmax > 2 * (abs(b1) + abs(b2)) and edge <= rel * abs(total):
            return float(total)
        nmax *= 2
        if nmax > 4096:
            raise RuntimeError("double series did not converge")


def e_jt2_series(kappa: float, trap: float, rabi: float) -> float:
    """Series oracle for :func:`e_jt2_gamma`: lowest eigenvalue m_AA + 2 m_BA."""
    return jt_second_order(kappa, trap, rabi).lambda1

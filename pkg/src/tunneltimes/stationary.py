"""Stationary scattering states of the rectangular barrier, sub-barrier branch.

For 0 < eps < u0 the state incident from the left with unit amplitude is

    x < 0:        exp(ikx) + R exp(-ikx)
    0 <= x <= l:  C exp(chi x) + D exp(-chi x)
    x > l:        T exp(ikx)

with k = sqrt(eps), chi = sqrt(u0 - eps).  Matching value and slope at both
interfaces gives, with g = (k^2 - chi^2)/(2 k chi) and q = exp(-2 chi l),

    denom = (1 - i g) + q (1 + i g)
    T = 2 exp(-ikl) exp(-chi l) / denom
    C = q (1 + ik/chi) / denom,   D = (1 - ik/chi) / denom,   R = C + D - 1.

This scaled form never exponentiates +chi*l, so opaque barriers (chi*l large)
evaluate without overflow.  States are normalized to a delta function in
energy via N = (4 pi k)^(-1/2), i.e. plane-wave delta(k - k') normalization
divided by d(eps)/dk = 2k.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import BarrierSpec, Energy


def _require_sub_barrier(barrier: BarrierSpec, eps: float) -> None:
    if not eps > 0.0:
        raise ValueError("energy must be positive")
    if not eps < barrier.u0:
        raise ValueError(
            f"eps = {eps} is not below u0 = {barrier.u0}; "
            "above-barrier scattering is not supported"
        )


def amplitudes(u0: float, l: float, eps):
    """Transmission/reflection/interior amplitudes (T, R, C, D) for eps < u0.

    Vectorized over eps; uses the overflow-safe scaled form above.
    """
    eps = np.asarray(eps, dtype=float)
    if np.any(eps <= 0.0) or np.any(eps >= u0):
        raise ValueError("amplitudes require 0 < eps < u0 everywhere")
    k = np.sqrt(eps)
    chi = np.sqrt(u0 - eps)
    g = (k * k - chi * chi) / (2.0 * k * chi)
    q = np.exp(-2.0 * chi * l)
    denom = (1.0 - 1j * g) + q * (1.0 + 1j * g)
    T = 2.0 * np.exp(-1j * k * l) * np.exp(-chi * l) / denom
    C = q * (1.0 + 1j * k / chi) / denom
    D = (1.0 - 1j * k / chi) / denom
    R = C + D - 1.0
    return T, R, C, D


def normalization(eps) -> np.ndarray:
    """Energy-delta normalization constant N = (4 pi sqrt(eps))^(-1/2)."""
    return 1.0 / np.sqrt(4.0 * np.pi * np.sqrt(np.asarray(eps, dtype=float)))


@dataclass(frozen=True)
class ScatteringSolution:
    """One stationary sub-barrier scattering state."""

    barrier: BarrierSpec
    energy: Energy
    R: complex
    T: complex
    C: complex
    D: complex
    N: float

    @property
    def k(self) -> float:
        return self.energy.k

    @property
    def chi(self) -> float:
        return self.energy.chi(self.barrier)


def solve(barrier: BarrierSpec, energy: Energy | float) -> ScatteringSolution:
    """Solve the matching problem for one sub-barrier energy."""
    if not isinstance(energy, Energy):
        energy = Energy(float(energy))
    _require_sub_barrier(barrier, energy.eps)
    T, R, C, D = amplitudes(barrier.u0, barrier.l, energy.eps)
    return ScatteringSolution(
        barrier=barrier,
        energy=energy,
        R=complex(R),
        T=complex(T),
        C=complex(C),
        D=complex(D),
        N=float(normalization(energy.eps)),
    )


def phase_shift(barrier: BarrierSpec, eps: float) -> float:
    """Branch-continuous transmission phase.

    alpha = -k l + atan(g tanh(chi l)) with g = (k^2 - chi^2)/(2 k chi); this
    equals arg T modulo 2 pi, is continuous in both l and eps, and vanishes
    at l = 0.
    """
    _require_sub_barrier(barrier, eps)
    k = math.sqrt(eps)
    chi = math.sqrt(barrier.u0 - eps)
    g = (k * k - chi * chi) / (2.0 * k * chi)
    return -k * barrier.l + math.atan(g * math.tanh(chi * barrier.l))


def _interior(sol: ScatteringSolution, x):
    """C e^{chi x} + D e^{-chi x} evaluated without forming e^{+chi l}."""
    chi, k, l = sol.chi, sol.k, sol.barrier.l
    denom = (1.0 - 1j * k / chi) / sol.D  # recover the matching denominator
    c_scaled = (1.0 + 1j * k / chi) / denom  # = C e^{2 chi l}
    # exponents chi(x - 2l) and -chi x are both <= 0 on the barrier region
    return c_scaled * np.exp(chi * (np.asarray(x) - 2.0 * l)) + sol.D * np.exp(
        -chi * np.asarray(x)
    )


def wavefunction_at(sol: ScatteringSolution, x):
    """Normalized stationary wave function N * psi_eps(x); vectorized over x."""
    x = np.asarray(x, dtype=float)
    k = sol.k
    left = np.exp(1j * k * x) + sol.R * np.exp(-1j * k * x)
    right = sol.T * np.exp(1j * k * x)
    mid = _interior(sol, x)
    psi = np.where(x < 0.0, left, np.where(x <= sol.barrier.l, mid, right))
    psi = sol.N * psi
    return psi if psi.ndim else complex(psi)


def _derivative_at(sol: ScatteringSolution, x):
    x = np.asarray(x, dtype=float)
    k, chi, l = sol.k, sol.chi, sol.barrier.l
    left = 1j * k * (np.exp(1j * k * x) - sol.R * np.exp(-1j * k * x))
    right = 1j * k * sol.T * np.exp(1j * k * x)
    denom = (1.0 - 1j * k / chi) / sol.D
    c_scaled = (1.0 + 1j * k / chi) / denom
    mid = chi * (
        c_scaled * np.exp(chi * (x - 2.0 * l)) - sol.D * np.exp(-chi * x)
    )
    return sol.N * np.where(x < 0.0, left, np.where(x <= l, mid, right))


def current(sol: ScatteringSolution, x) -> float:
    """Probability current j = 2 Im(psi* dpsi/dx) of the full solution.

    The convention makes a unit plane wave e^{ikx} carry j = 2k, matching the
    dimensionless group velocity 2*sqrt(eps).  For a stationary solution j is
    x-independent and equals 2 k N^2 |T|^2.
    """
    psi = wavefunction_at(sol, x)
    dpsi = _derivative_at(sol, x)
    j = 2.0 * np.imag(np.conj(psi) * dpsi)
    return float(j) if np.ndim(j) == 0 else j


def incident_current(sol: ScatteringSolution) -> float:
    """Current of the incident part alone, j_in = 2 k N^2."""
    return 2.0 * sol.k * sol.N**2


def transmitted_current(sol: ScatteringSolution) -> float:
    """Current of the transmitted part, equal to the full current 2 k N^2 |T|^2."""
    return 2.0 * sol.k * sol.N**2 * abs(sol.T) ** 2


def barrier_probability(sol: ScatteringSolution) -> float:
    """Integral of |N psi_eps|^2 over the barrier region [0, l], in closed form.

    The interior density integrates to
        (|C e^{chi l}|^2 - |C|^2)/(2 chi) + (|D|^2 - |D e^{-chi l}|^2)/(2 chi)
        + 2 Re(C D*) l,
    with every exponential kept in its decaying form.
    """
    chi, l = sol.chi, sol.barrier.l
    if l == 0.0:
        return 0.0
    k = sol.k
    denom = (1.0 - 1j * k / chi) / sol.D
    e = math.exp(-chi * l)
    cl = e * (1.0 + 1j * k / chi) / denom      # C e^{chi l}
    c0 = e * cl                                 # C
    d0 = sol.D
    dl = e * d0                                 # D e^{-chi l}
    grow = (abs(cl) ** 2 - abs(c0) ** 2) / (2.0 * chi)
    decay = (abs(d0) ** 2 - abs(dl) ** 2) / (2.0 * chi)
    cross = 2.0 * (c0 * d0.conjugate()).real * l
    return sol.N**2 * (grow + decay + cross)

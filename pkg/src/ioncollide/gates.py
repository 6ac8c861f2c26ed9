"""Two-qubit gate produced by holding two ions together for a gate time.

Basis order is (|dd>, |du>, |ud>, |uu>), i.e. (00, 01, 10, 11) with
down = 0. Phases follow the exp(+i E t / hbar) convention used for the
collision gate throughout this package.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import StructureError, ZeroCouplingError
from .units import CONSTANTS

TWO_PI = 2.0 * math.pi

SQRT_SWAP = np.array([
    [1, 0, 0, 0],
    [0, (1 + 1j) / 2, (1 - 1j) / 2, 0],
    [0, (1 - 1j) / 2, (1 + 1j) / 2, 0],
    [0, 0, 0, 1],
], dtype=complex)

SWAP = np.array([
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
], dtype=complex)


def _wrap(phase):
    return math.remainder(phase, TWO_PI)


def phase_gate(theta: float) -> np.ndarray:
    """Single-qubit phase gate diag(1, exp(i theta))."""
    return np.diag([1.0, np.exp(1j * theta)])


@dataclass(frozen=True)
class GateSpec:
    t_g: float
    theta: float
    theta_printed: float
    global_phase: float
    n_collisions: float
    matrix: np.ndarray

    def unitarity_residual(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(4))))


def gate_time(J_ex: float) -> float:
    """Hold time 3 pi hbar / (4 J) after which the pair has undergone sqrt(SWAP)."""
    if not J_ex > 0:
        raise ZeroCouplingError(f"exchange coupling must be positive, got {J_ex!r}")
    return 3.0 * math.pi * CONSTANTS.hbar / (4.0 * J_ex)


def collision_gate_matrix(E0: float, U: float, J_ex: float, t: float) -> np.ndarray:
    """Evolution of the four spin states over a hold of length ``t``.

    |dd> and |uu> pick up the triplet phase; the |du>, |ud> block mixes
    through the singlet-triplet splitting 2J.
    """
    hb = CONSTANTS.hbar
    ph_plus = _wrap((E0 + U + J_ex) * t / hb)
    ph_minus = _wrap((E0 + U - J_ex) * t / hb)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = np.exp(1j * _wrap((U + J_ex) * t / hb))
    m[3, 3] = np.exp(1j * _wrap((2 * E0 + U + J_ex) * t / hb))
    ep, em = np.exp(1j * ph_plus), np.exp(1j * ph_minus)
    m[1, 1] = m[2, 2] = 0.5 * (ep + em)
    m[1, 2] = m[2, 1] = 0.5 * (ep - em)
    return m


def synthesize_gate(E0: float, U: float, J_ex: float, omega_z: float | None = None) -> GateSpec:
    """Build the collision gate for one gate time.

    Parameters
    ----------
    E0 : float
        Qubit splitting (J).
    U, J_ex : float
        Direct shift and exchange coupling (J).
    omega_z : float, optional
        Axial trap frequency, used only for the collision count.
    """
    t_g = gate_time(J_ex)
    hb = CONSTANTS.hbar
    overall = _wrap((E0 + U + J_ex) * t_g / hb)
    e0_phase = _wrap(E0 * t_g / hb)
    block = np.array([[(1 + 1j) / 2, (1 - 1j) / 2], [(1 - 1j) / 2, (1 + 1j) / 2]])
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = np.exp(-1j * e0_phase)
    m[1:3, 1:3] = block
    m[3, 3] = np.exp(1j * e0_phase)
    m *= np.exp(1j * overall)
    n_g = collision_count(J_ex, omega_z).value if omega_z else float("nan")
    return GateSpec(
        t_g=t_g,
        theta=e0_phase % TWO_PI,
        theta_printed=(t_g * (2 * E0 + U + J_ex) / (2 * hb)) % TWO_PI,
        global_phase=_wrap((U + J_ex) * t_g / hb) % TWO_PI,
        n_collisions=n_g,
        matrix=m,
    )


def compose_sqrt_swap(global_phase: float, theta: float) -> np.ndarray:
    """exp(i g) sqrt(SWAP) (R_theta x R_theta)."""
    r = phase_gate(theta)
    return np.exp(1j * global_phase) * SQRT_SWAP @ np.kron(r, r)


def decompose_sqrt_swap(gate, tol: float = 1e-6) -> tuple[float, float, float]:
    """Split a collision gate into a global phase, sqrt(SWAP) and phase gates.

    Returns ``(global_phase, theta, residual)`` where ``residual`` is the
    max-norm distance between ``gate`` and the rebuilt product. Raises
    :class:`StructureError` if the residual exceeds ``tol``.
    """
    m = np.asarray(getattr(gate, "matrix", gate), dtype=complex)
    if m.shape != (4, 4):
        raise StructureError(f"expected a 4x4 matrix, got shape {m.shape}")
    # (R x R) is exp(i theta) on the |du>,|ud> block, so the block carries exp(i(g + theta))
    block_phase = np.angle(m[1, 1] / SQRT_SWAP[1, 1] + m[2, 2] / SQRT_SWAP[2, 2]
                           + m[1, 2] / SQRT_SWAP[1, 2] + m[2, 1] / SQRT_SWAP[2, 1])
    g = float(np.angle(m[0, 0]))
    theta = (block_phase - g) % TWO_PI
    residual = float(np.max(np.abs(m - compose_sqrt_swap(g, theta))))
    if residual > tol:
        raise StructureError(
            f"matrix is not a sqrt(SWAP) collision gate (residual {residual:.3g})")
    return g % TWO_PI, float(theta), residual


@dataclass(frozen=True)
class CollisionCount:
    value: float
    nearest: int
    mistuning: float


def collision_count(J_ex: float, omega: float, driven: bool = False) -> CollisionCount:
    """Number of collisions during one gate time.

    Undriven, ``omega`` is the axial frequency and N = 3 hbar omega / (4 J).
    Driven, ``omega`` is the drive frequency (2 omega_z on resonance) and
    N = 3 hbar omega / (8 J). ``mistuning`` is the signed distance to the
    nearest integer.
    """
    if not J_ex > 0:
        raise ZeroCouplingError(f"exchange coupling must be positive, got {J_ex!r}")
    denom = 8.0 if driven else 4.0
    n = 3.0 * CONSTANTS.hbar * omega / (denom * J_ex)
    nearest = int(round(n))
    return CollisionCount(n, nearest, n - nearest)


def central_block_squared_is_swap(matrix, tol: float = 1e-12) -> bool:
    block = np.asarray(matrix)[1:3, 1:3]
    sq = block @ block
    phase = sq[0, 1]
    if abs(abs(phase) - 1) > tol:
        return False
    return bool(np.max(np.abs(sq / phase - np.array([[0, 1], [1, 0]]))) < tol)


def gate_to_json(gate: GateSpec, indent: int | None = 2) -> str:
    """Serialise a gate with the matrix as nested [re, im] pairs."""
    return json.dumps({
        "t_g": gate.t_g,
        "theta": gate.theta,
        "theta_printed": gate.theta_printed,
        "global_phase": gate.global_phase,
        "n_collisions": None if math.isnan(gate.n_collisions) else gate.n_collisions,
        "basis": ["dd", "du", "ud", "uu"],
        "matrix": matrix_to_pairs(gate.matrix),
    }, indent=indent)


def matrix_to_pairs(matrix) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


def matrix_from_pairs(pairs) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in pairs])

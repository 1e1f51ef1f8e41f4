"""2x2 Hermitian operator algebra in scalar + Bloch-vector form.

Every 2x2 Hermitian operator decomposes uniquely as

    H = scalar * 1 + bloch . sigma

with a real scalar and a real 3-vector over the Pauli directions.  In this
form eigenvalues are scalar +- |bloch|, determinants and positivity checks
are closed-form, and operator products reduce to dot and cross products.
Products of Hermitian operators are generally not Hermitian; those live in
``GeneralOp2`` (complex scalar + complex 3-vector).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ValidationError

# Tolerance tiers: structural equalities / representation error,
# PSD and feasibility slack (certification), iterative-solver agreement.
TOL_STRUCT = 1e-12
TOL_CERT = 1e-9
TOL_ORACLE = 1e-6

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (PAULI_X, PAULI_Y, PAULI_Z)


def _as_vec3(v, dtype=float) -> np.ndarray:
    a = np.asarray(v, dtype=dtype)
    if a.shape != (3,):
        raise ValidationError(f"expected a 3-vector, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class HermitianOp2:
    """Hermitian 2x2 operator ``scalar * 1 + bloch . sigma``."""

    scalar: float
    bloch: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scalar", float(self.scalar))
        object.__setattr__(self, "bloch", _as_vec3(self.bloch))

    @classmethod
    def identity(cls) -> "HermitianOp2":
        return cls(1.0, np.zeros(3))

    @classmethod
    def zero(cls) -> "HermitianOp2":
        return cls(0.0, np.zeros(3))

    @classmethod
    def from_matrix(cls, m, tol: float = TOL_STRUCT) -> "HermitianOp2":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValidationError(f"expected a 2x2 matrix, got shape {m.shape}")
        if np.abs(m - m.conj().T).max() > tol:
            raise ValidationError("matrix is not Hermitian within tolerance")
        scalar = 0.5 * np.trace(m).real
        bloch = np.array([0.5 * np.trace(m @ s).real for s in PAULI])
        return cls(scalar, bloch)

    def to_matrix(self) -> np.ndarray:
        m = self.scalar * np.eye(2, dtype=complex)
        for c, s in zip(self.bloch, PAULI):
            m += c * s
        return m

    @property
    def trace(self) -> float:
        return 2.0 * self.scalar

    @property
    def bloch_norm(self) -> float:
        return float(np.linalg.norm(self.bloch))

    def det(self) -> float:
        return self.scalar**2 - float(self.bloch @ self.bloch)

    def eigenvalues(self) -> tuple[float, float]:
        """Eigenvalues in descending order: scalar +- |bloch|."""
        r = self.bloch_norm
        return (self.scalar + r, self.scalar - r)

    def min_eigenvalue(self) -> float:
        return self.scalar - self.bloch_norm

    def op_norm(self) -> float:
        """Spectral norm max(|eigenvalues|)."""
        return abs(self.scalar) + self.bloch_norm

    def __add__(self, other: "HermitianOp2") -> "HermitianOp2":
        return HermitianOp2(self.scalar + other.scalar, self.bloch + other.bloch)

    def __sub__(self, other: "HermitianOp2") -> "HermitianOp2":
        return HermitianOp2(self.scalar - other.scalar, self.bloch - other.bloch)

    def __neg__(self) -> "HermitianOp2":
        return HermitianOp2(-self.scalar, -self.bloch)

    def __mul__(self, a: float) -> "HermitianOp2":
        return HermitianOp2(a * self.scalar, a * self.bloch)

    __rmul__ = __mul__

    def approx_eq(self, other: "HermitianOp2", tol: float = TOL_STRUCT) -> bool:
        return (
            abs(self.scalar - other.scalar) <= tol
            and np.abs(self.bloch - other.bloch).max() <= tol
        )

    def __repr__(self):
        b = ", ".join(repr(float(x)) for x in self.bloch)
        return f"HermitianOp2({self.scalar!r}, [{b}])"


@dataclass(frozen=True, eq=False)
class GeneralOp2:
    """General 2x2 operator with complex scalar and complex Bloch 3-vector."""

    scalar: complex
    bloch: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scalar", complex(self.scalar))
        object.__setattr__(self, "bloch", _as_vec3(self.bloch, dtype=complex))

    def to_matrix(self) -> np.ndarray:
        m = self.scalar * np.eye(2, dtype=complex)
        for c, s in zip(self.bloch, PAULI):
            m += c * s
        return m

    @property
    def trace(self) -> complex:
        return 2.0 * self.scalar

    def adjoint(self) -> "GeneralOp2":
        return GeneralOp2(np.conj(self.scalar), np.conj(self.bloch))

    def hermitian_part(self) -> HermitianOp2:
        return HermitianOp2(self.scalar.real, self.bloch.real)

    def antihermitian_norm(self) -> float:
        """Spectral norm of (G - G^+)/2, i.e. i*(Im scalar + Im bloch . sigma)."""
        return abs(self.scalar.imag) + float(np.linalg.norm(self.bloch.imag))

    def op_norm(self) -> float:
        """Largest singular value, from the closed form of G^+ G."""
        g0, g = self.scalar, self.bloch
        s0 = abs(g0) ** 2 + float(np.real(np.conj(g) @ g))
        svec = 2.0 * np.real(np.conj(g0) * g) + np.real(1j * np.cross(np.conj(g), g))
        r = float(np.linalg.norm(svec))
        return math.sqrt(max(s0 + r, 0.0))


def op_mul(a, b) -> GeneralOp2:
    """Product of two operators in scalar/Bloch form.

    Uses sigma_i sigma_j = delta_ij + i eps_ijk sigma_k, so
    (a0 + a.s)(b0 + b.s) = (a0 b0 + a.b) + (a0 b + b0 a + i a x b).s.
    """
    a0, av = _coeffs(a)
    b0, bv = _coeffs(b)
    scalar = a0 * b0 + np.dot(av, bv)
    bloch = a0 * bv + b0 * av + 1j * np.cross(av, bv)
    return GeneralOp2(scalar, bloch)


def _coeffs(op) -> tuple[complex, np.ndarray]:
    if isinstance(op, HermitianOp2):
        return complex(op.scalar), op.bloch.astype(complex)
    if isinstance(op, GeneralOp2):
        return op.scalar, op.bloch
    raise TypeError(f"not an operator: {type(op)!r}")


def trace_product(a: HermitianOp2, b: HermitianOp2) -> float:
    """tr(ab) = 2(a0 b0 + a . b); real for Hermitian inputs."""
    return 2.0 * (a.scalar * b.scalar + float(a.bloch @ b.bloch))


def min_eigenvalue(h: HermitianOp2) -> float:
    """Smaller eigenvalue scalar - |bloch|."""
    return h.min_eigenvalue()


class EigenSystem(NamedTuple):
    values: tuple[float, float]            # descending
    projectors: tuple[HermitianOp2, HermitianOp2]
    degenerate: bool


def eigen_decompose(h: HermitianOp2, tol: float = TOL_STRUCT) -> EigenSystem:
    """Closed-form spectral decomposition.

    For |bloch| below ``tol`` the operator is (numerically) proportional to
    the identity; the computational-basis pair is returned with the
    degenerate flag set, so callers know the eigenbasis is not unique.
    """
    r = h.bloch_norm
    if r < tol:
        up = HermitianOp2(0.5, np.array([0.0, 0.0, 0.5]))
        dn = HermitianOp2(0.5, np.array([0.0, 0.0, -0.5]))
        return EigenSystem((h.scalar, h.scalar), (up, dn), True)
    n = h.bloch / r
    plus = HermitianOp2(0.5, 0.5 * n)
    minus = HermitianOp2(0.5, -0.5 * n)
    return EigenSystem((h.scalar + r, h.scalar - r), (plus, minus), False)


def hermitian_function(h: HermitianOp2, f: Callable[[float], float]) -> HermitianOp2:
    """Apply a scalar function to a Hermitian operator via its spectrum."""
    vals, (p, q), degenerate = eigen_decompose(h)
    if degenerate:
        return HermitianOp2(f(h.scalar), np.zeros(3))
    return f(vals[0]) * p + f(vals[1]) * q


@dataclass(frozen=True, eq=False)
class BlochDirection:
    """Unit vector on the Bloch sphere."""

    vector: np.ndarray

    def __post_init__(self):
        v = _as_vec3(self.vector)
        n = np.linalg.norm(v)
        if abs(n - 1.0) > TOL_STRUCT:
            raise ValidationError(f"direction is not a unit vector: |v| = {n}")
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_vector(cls, v) -> "BlochDirection":
        v = _as_vec3(v)
        n = np.linalg.norm(v)
        if n < 1e-12:
            raise ValidationError("cannot normalize a (near-)zero vector")
        return cls(v / n)

    @classmethod
    def from_angles(cls, theta: float, phi: float, axis=None, ref=None) -> "BlochDirection":
        """Latitude angle theta from ``axis`` and longitude phi from ``ref``."""
        n = np.array([0.0, 0.0, 1.0]) if axis is None else _as_vec3(axis)
        e1 = np.array([1.0, 0.0, 0.0]) if ref is None else _as_vec3(ref)
        e2 = np.cross(n, e1)
        v = math.cos(theta) * n + math.sin(theta) * (math.cos(phi) * e1 + math.sin(phi) * e2)
        return cls.from_vector(v)

    def angles(self, axis=None, ref=None) -> tuple[float, float]:
        """(theta, phi) with theta in [0, pi], phi in [0, 2 pi)."""
        n = np.array([0.0, 0.0, 1.0]) if axis is None else _as_vec3(axis)
        e1 = np.array([1.0, 0.0, 0.0]) if ref is None else _as_vec3(ref)
        e2 = np.cross(n, e1)
        v = self.vector
        theta = math.acos(min(1.0, max(-1.0, float(v @ n))))
        phi = math.atan2(float(v @ e2), float(v @ e1)) % (2.0 * math.pi)
        return theta, phi

    def __neg__(self) -> "BlochDirection":
        return BlochDirection(-self.vector)

    def __repr__(self):
        v = ", ".join(repr(float(x)) for x in self.vector)
        return f"BlochDirection([{v}])"


def orthonormal_frame(axis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic pair (e1, e2) completing ``axis`` to a right-handed frame."""
    axis = _as_vec3(axis)
    seed = np.array([1.0, 0.0, 0.0])
    if abs(axis @ seed) > 0.9:
        seed = np.array([0.0, 1.0, 0.0])
    e1 = seed - (seed @ axis) * axis
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    return e1, e2


def projector_from_direction(d: BlochDirection | np.ndarray) -> HermitianOp2:
    """Rank-1 projector (1 + d . sigma)/2 onto the +d eigenstate."""
    if not isinstance(d, BlochDirection):
        d = BlochDirection(_as_vec3(d))
    return HermitianOp2(0.5, 0.5 * d.vector)


# --- density operators and effects (validation helpers) -------------------

def density_from_bloch(b, tol: float = TOL_CERT) -> HermitianOp2:
    """Density operator (1 + b . sigma)/2 from a Bloch vector with |b| <= 1."""
    b = _as_vec3(b)
    n = np.linalg.norm(b)
    if n > 1.0 + tol:
        raise ValidationError(f"Bloch vector has norm {n} > 1", code="bloch-norm")
    return HermitianOp2(0.5, 0.5 * b)


def bloch_vector(rho: HermitianOp2) -> np.ndarray:
    """Bloch vector b of a density operator (b = 2 * bloch)."""
    return 2.0 * rho.bloch


def is_density(h: HermitianOp2, tol: float = TOL_CERT) -> bool:
    return abs(h.scalar - 0.5) <= TOL_STRUCT and h.bloch_norm <= 0.5 + tol


def is_pure(rho: HermitianOp2, tol: float = TOL_CERT) -> bool:
    return abs(2.0 * rho.bloch_norm - 1.0) <= tol


def is_effect(h: HermitianOp2, tol: float = TOL_STRUCT) -> bool:
    """0 <= h <= 1 with both eigenvalues in [-tol, 1 + tol]."""
    hi, lo = h.eigenvalues()
    return lo >= -tol and hi <= 1.0 + tol

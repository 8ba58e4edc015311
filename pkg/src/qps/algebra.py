"""Root-of-unity arithmetic, clock and shift operators and the monomial basis.

Phases are kept as integer exponents of ``w = exp(i*pi/N)``, the primitive
``2N``-th root of unity, so that half-integer powers of ``exp(2*pi*i/N)``
stay exact.  Floating point enters only when a matrix is assembled.

Conventions: ``Q|q> = exp(2*pi*i*q/N)|q>`` and ``P|q> = |q-1>``, hence
``P Q = exp(2*pi*i/N) Q P``.  A monomial ``P^m Q^n`` maps ``|q>`` to
``exp(2*pi*i*n*q/N)|q-m>``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DimensionMismatchError, InvalidDimensionError

DEFAULT_TOL = 1e-10


def check_dim(N) -> int:
    """Return ``N`` as an int, raising InvalidDimensionError unless ``N >= 1``."""
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise InvalidDimensionError(f"dimension must be a positive integer, got {N!r}")
    return int(N)


@dataclass(frozen=True)
class PhaseExponent:
    """The phase ``exp(i*pi*k/N)``, stored as ``k mod 2N``."""

    k: int
    dim: int

    def __post_init__(self):
        check_dim(self.dim)
        object.__setattr__(self, "k", int(self.k) % (2 * self.dim))

    @property
    def modulus(self) -> int:
        return 2 * self.dim

    def _same_dim(self, other):
        if other.dim != self.dim:
            raise DimensionMismatchError(f"phases for N={self.dim} and N={other.dim}")

    def __add__(self, other: PhaseExponent) -> PhaseExponent:
        self._same_dim(other)
        return PhaseExponent(self.k + other.k, self.dim)

    def __sub__(self, other: PhaseExponent) -> PhaseExponent:
        self._same_dim(other)
        return PhaseExponent(self.k - other.k, self.dim)

    def __neg__(self) -> PhaseExponent:
        return PhaseExponent(-self.k, self.dim)

    def __mul__(self, n: int) -> PhaseExponent:
        return PhaseExponent(self.k * int(n), self.dim)

    __rmul__ = __mul__

    def to_complex(self) -> complex:
        return complex(omega_table(self.dim)[self.k])


def omega_pow(k: int, N: int) -> PhaseExponent:
    """``exp(i*pi*k/N)`` as an exact exponent of the ``2N``-th root of unity."""
    return PhaseExponent(k, check_dim(N))


@lru_cache(maxsize=None)
def _omega_table(N: int) -> np.ndarray:
    k = np.arange(2 * N)
    table = np.exp(1j * np.pi * k / N)
    # pin the values that are exactly representable
    table[0] = 1.0
    table[N] = -1.0
    if N % 2 == 0:
        table[N // 2] = 1j
        table[3 * N // 2] = -1j
    table.flags.writeable = False
    return table


def omega_table(N: int) -> np.ndarray:
    """Read-only array ``t`` with ``t[k] = exp(i*pi*k/N)`` for ``0 <= k < 2N``."""
    return _omega_table(check_dim(N))


def phase(k, N: int):
    """Vectorized ``exp(i*pi*k/N)`` for integer (arrays of) exponents."""
    return omega_table(N)[np.mod(k, 2 * N)]


@dataclass(frozen=True)
class WeylMonomial:
    """Exact operator ``exp(i*pi*phase/N) * P^m Q^n``.

    Products use ``Q^a P^b = w^(-2ab) P^b Q^a`` at the exponent level, so
    identities such as ``Q^N = 1`` are checked without any rounding.
    """

    m: int
    n: int
    dim: int
    phase: int = 0

    def __post_init__(self):
        N = check_dim(self.dim)
        object.__setattr__(self, "m", int(self.m) % N)
        object.__setattr__(self, "n", int(self.n) % N)
        object.__setattr__(self, "phase", int(self.phase) % (2 * N))

    @classmethod
    def identity(cls, N: int) -> WeylMonomial:
        return cls(0, 0, N)

    def __mul__(self, other: WeylMonomial) -> WeylMonomial:
        if other.dim != self.dim:
            raise DimensionMismatchError(f"N={self.dim} times N={other.dim}")
        return WeylMonomial(
            self.m + other.m,
            self.n + other.n,
            self.dim,
            self.phase + other.phase - 2 * self.n * other.m,
        )

    def __pow__(self, k: int) -> WeylMonomial:
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        result = WeylMonomial.identity(self.dim)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> WeylMonomial:
        # (P^m Q^n)^-1 = Q^-n P^-m = w^(-2mn) P^-m Q^-n
        return WeylMonomial(-self.m, -self.n, self.dim, -self.phase - 2 * self.m * self.n)

    def scaled(self, k: int) -> WeylMonomial:
        """Multiply by the phase ``exp(i*pi*k/N)``."""
        return WeylMonomial(self.m, self.n, self.dim, self.phase + k)

    def is_identity(self) -> bool:
        return self.m == 0 and self.n == 0 and self.phase == 0

    def to_matrix(self) -> np.ndarray:
        return phase(self.phase, self.dim) * monomial(self.m, self.n, self.dim)


def build_clock_shift(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Return the clock ``Q`` (diagonal) and shift ``P`` (cyclic) matrices."""
    N = check_dim(N)
    return monomial(0, 1, N), monomial(1, 0, N)


@lru_cache(maxsize=4096)
def _monomial(m: int, n: int, N: int) -> np.ndarray:
    q = np.arange(N)
    out = np.zeros((N, N), dtype=complex)
    out[(q - m) % N, q] = phase(2 * n * q, N)
    out.flags.writeable = False
    return out


def monomial(m: int, n: int, N: int) -> np.ndarray:
    """The matrix ``P^m Q^n``; ``m`` and ``n`` are reduced mod ``N``.

    The returned array is read-only and shared; copy before mutating.
    """
    N = check_dim(N)
    return _monomial(int(m) % N, int(n) % N, N)


@lru_cache(maxsize=64)
def _basis(N: int) -> np.ndarray:
    basis = np.empty((N, N, N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            basis[m, n] = _monomial(m, n, N)
    basis.flags.writeable = False
    return basis


def monomial_basis(N: int) -> np.ndarray:
    """Array ``B`` of shape ``(N, N, N, N)`` with ``B[m, n] = P^m Q^n``."""
    return _basis(check_dim(N))


@dataclass(frozen=True)
class MonomialCoefficients:
    """Expansion ``X = sum_{m,n} coeffs[m, n] P^m Q^n``."""

    dim: int
    coeffs: np.ndarray

    def __getitem__(self, key):
        m, n = key
        return self.coeffs[m % self.dim, n % self.dim]

    def reconstruct(self) -> np.ndarray:
        return reconstruct(self)


def as_operator(X, N: int | None = None) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {X.shape}")
    if N is not None and X.shape[0] != N:
        raise DimensionMismatchError(f"expected a {N}x{N} matrix, got {X.shape}")
    return X


def decompose(X, N: int | None = None) -> MonomialCoefficients:
    """Expand ``X`` in the trace-orthogonal basis ``P^m Q^n``.

    ``c[m, n] = Tr[X (P^m Q^n)^dagger] / N``, computed as a discrete Fourier
    sum along the ``m``-th cyclic diagonal of ``X``.
    """
    X = as_operator(X, N)
    N = X.shape[0]
    q = np.arange(N)
    # diagonals[m, q] = X[q - m, q]
    diagonals = X[(q[None, :] - q[:, None]) % N, q[None, :]]
    kernel = phase(-2 * np.outer(q, q), N)  # kernel[q, n] = w^(-2nq)
    return MonomialCoefficients(N, diagonals @ kernel / N)


def reconstruct(coefficients: MonomialCoefficients) -> np.ndarray:
    return np.einsum("mn,mnij->ij", coefficients.coeffs, monomial_basis(coefficients.dim))


def max_deviation(A, B) -> float:
    """Largest absolute entrywise difference."""
    return float(np.max(np.abs(np.asarray(A) - np.asarray(B)), initial=0.0))


def dagger(A: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(A, -1, -2))

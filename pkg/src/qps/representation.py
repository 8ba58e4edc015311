"""Projective unitary representation of SL(2, Z) on the N-dimensional state space.

``U_h`` is fixed (up to a global phase) by its conjugation action::

    U Q U^dagger = a_Q(h) P^lam Q^kappa
    U P U^dagger = a_P(h) P^nu  Q^mu

with ``a_Q = w_N^(kappa*lam*(N-1)/2 - kappa*n_plus + (lam-1)*n_minus)`` and
``a_P = w_N^(nu*mu*(N-1)/2 - (mu-1)*n_plus + nu*n_minus)``.  The operator is
found numerically as the one-dimensional null space of the linear
intertwining system.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import (
    PhaseExponent,
    WeylMonomial,
    build_clock_shift,
    check_dim,
    dagger,
    max_deviation,
)
from .exceptions import (
    DimensionMismatchError,
    InvalidDimensionError,
    NumericalError,
    ProjectivityError,
    RepresentationError,
)
from .sl2z import Sp2ZElement, validate_sl2

SINGULAR_GAP = 1e6
UNITARITY_TOL = 1e-8
PROJECTIVE_TOL = 1e-9


class Family(str, enum.Enum):
    NEW = "new"
    LEONHARDT = "leonhardt"
    INADMISSIBLE = "inadmissible"


@dataclass(frozen=True)
class PhaseChoice:
    """The integers ``n_plus``, ``n_minus`` selecting the representation."""

    n_plus: int
    n_minus: int
    dim: int

    def __post_init__(self):
        check_dim(self.dim)
        object.__setattr__(self, "n_plus", int(self.n_plus))
        object.__setattr__(self, "n_minus", int(self.n_minus))

    @classmethod
    def for_family(cls, family, N: int) -> PhaseChoice:
        family = Family(family)
        if family is Family.NEW:
            return cls(0, 0, N)
        if family is Family.LEONHARDT:
            if N % 2:
                raise InvalidDimensionError(f"the Leonhardt family needs even N, got {N}")
            return cls(N // 2, N // 2, N)
        raise ValueError("no canonical phase choice for an inadmissible family")

    @property
    def family(self) -> Family:
        return classify_phase_choice(self)

    def key(self) -> tuple[int, int, int]:
        return (self.n_plus % self.dim, self.n_minus % self.dim, self.dim)


def classify_phase_choice(pc: PhaseChoice) -> Family:
    N = pc.dim
    plus, minus = pc.n_plus % N, pc.n_minus % N
    if plus == minus == 0:
        return Family.NEW
    if N % 2 == 0 and plus == minus == N // 2:
        return Family.LEONHARDT
    return Family.INADMISSIBLE


def coefficients(h: Sp2ZElement, pc: PhaseChoice) -> tuple[PhaseExponent, PhaseExponent]:
    """Exact phases ``(a_Q, a_P)`` as exponents of ``exp(i*pi/N)``."""
    h = validate_sl2(h)
    N = pc.dim
    k, mu, lam, nu = h.kappa, h.mu, h.lam, h.nu
    a_q = k * lam * (N - 1) + 2 * (-k * pc.n_plus + (lam - 1) * pc.n_minus)
    a_p = nu * mu * (N - 1) + 2 * (-(mu - 1) * pc.n_plus + nu * pc.n_minus)
    return PhaseExponent(a_q, N), PhaseExponent(a_p, N)


def transformed_generators(h: Sp2ZElement, pc: PhaseChoice) -> tuple[WeylMonomial, WeylMonomial]:
    """Exact images of ``Q`` and ``P`` under conjugation by ``U_h``."""
    h = validate_sl2(h)
    a_q, a_p = coefficients(h, pc)
    N = pc.dim
    return (
        WeylMonomial(h.lam, h.kappa, N, a_q.k),
        WeylMonomial(h.nu, h.mu, N, a_p.k),
    )


def conjugate_monomial(h: Sp2ZElement, pc: PhaseChoice, x: WeylMonomial) -> WeylMonomial:
    """Exact ``U_h x U_h^dagger`` for a monomial ``x``, using the transformation rule."""
    q_img, p_img = transformed_generators(h, pc)
    return (p_img ** x.m * q_img ** x.n).scaled(x.phase)


@dataclass(frozen=True)
class RepUnitary:
    h: Sp2ZElement
    U: np.ndarray
    phase_choice: PhaseChoice

    @property
    def dim(self) -> int:
        return self.phase_choice.dim

    def conjugate(self, X: np.ndarray) -> np.ndarray:
        """``U X U^dagger``; ``X`` may carry leading batch axes."""
        return self.U @ X @ dagger(self.U)

    def residuals(self) -> dict[str, float]:
        N = self.dim
        Q, P = build_clock_shift(N)
        q_img, p_img = transformed_generators(self.h, self.phase_choice)
        return {
            "unitarity": max_deviation(self.U @ dagger(self.U), np.eye(N)),
            "q_conjugation": max_deviation(self.conjugate(Q), q_img.to_matrix()),
            "p_conjugation": max_deviation(self.conjugate(P), p_img.to_matrix()),
        }


def _row_major_vec(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # vec(A X B) = kron(A, B^T) vec(X) for row-major vectorization
    return np.kron(A, B.T)


@lru_cache(maxsize=8192)
def _solve_unitary(h_rows, n_plus: int, n_minus: int, N: int) -> np.ndarray:
    h = Sp2ZElement(*h_rows[0], *h_rows[1])
    pc = PhaseChoice(n_plus, n_minus, N)
    Q, P = build_clock_shift(N)
    q_img, p_img = transformed_generators(h, pc)
    eye = np.eye(N)
    system = np.vstack([
        _row_major_vec(q_img.to_matrix(), eye) - _row_major_vec(eye, Q),
        _row_major_vec(p_img.to_matrix(), eye) - _row_major_vec(eye, P),
    ])
    _, sing, vh = np.linalg.svd(system)
    smallest, runner_up = sing[-1], sing[-2]
    if runner_up < SINGULAR_GAP * max(smallest, np.finfo(float).tiny):
        raise RepresentationError(
            f"intertwiner for h={h.as_rows()} not unique: singular values "
            f"{runner_up:.3e}, {smallest:.3e}"
        )
    U = vh[-1].conj().reshape(N, N) * np.sqrt(N)
    residual = max_deviation(U @ dagger(U), eye)
    if residual > UNITARITY_TOL:
        raise NumericalError(f"unitarization residual {residual:.3e} for h={h.as_rows()}")
    # global phase: first entry with magnitude above 1/(2 sqrt N) made real positive
    flat = U.ravel()
    anchor = flat[np.argmax(np.abs(flat) > 1 / (2 * np.sqrt(N)))]
    U = U * (abs(anchor) / anchor)
    U.flags.writeable = False
    return U


def build_unitary(h, pc: PhaseChoice) -> RepUnitary:
    """Construct ``U_h`` for the phase choice ``pc``.

    Raises RepresentationError if the intertwiner is not unique and
    NumericalError if the normalized solution is not unitary.
    """
    h = validate_sl2(h)
    N = pc.dim
    if N < 2:
        raise InvalidDimensionError("the representation is built for N >= 2")
    plus, minus, _ = pc.key()
    return RepUnitary(h, _solve_unitary(h.as_rows(), plus, minus, N), pc)


def compose_phase(U1: RepUnitary, U2: RepUnitary, tol: float = PROJECTIVE_TOL) -> float:
    """Phase ``phi`` with ``U_h' U_h = exp(i phi) U_h'h`` (``U1`` for ``h'``, ``U2`` for ``h``).

    The value depends on the global-phase convention of :func:`build_unitary`;
    only proportionality to the identity is convention free.
    """
    if U1.phase_choice.key() != U2.phase_choice.key():
        raise DimensionMismatchError("operands built from different phase choices")
    product = build_unitary(U1.h @ U2.h, U1.phase_choice)
    M = U1.U @ U2.U @ dagger(product.U)
    mean = np.mean(np.diag(M))
    residual = max_deviation(M, mean * np.eye(U1.dim))
    if residual >= tol:
        raise ProjectivityError(
            f"U_h'U_h U_h'h^dagger is not a multiple of 1 (residual {residual:.3e}) "
            f"for h'={U1.h.as_rows()}, h={U2.h.as_rows()}, "
            f"n+={U1.phase_choice.n_plus}, n-={U1.phase_choice.n_minus}"
        )
    return float(np.angle(mean))


def projective_residual(h1: Sp2ZElement, h2: Sp2ZElement, pc: PhaseChoice) -> float:
    """Distance of ``U_h1 U_h2 U_(h1 h2)^dagger`` from a multiple of the identity."""
    M = build_unitary(h1, pc).U @ build_unitary(h2, pc).U @ dagger(build_unitary(h1 @ h2, pc).U)
    return max_deviation(M, np.mean(np.diag(M)) * np.eye(pc.dim))


def projective_law_holds_exactly(h1: Sp2ZElement, h2: Sp2ZElement, pc: PhaseChoice) -> bool:
    """Exact check that conjugation by ``U_h1 U_h2`` and ``U_(h1 h2)`` agree on Q and P."""
    N = pc.dim
    Q, P = WeylMonomial(0, 1, N), WeylMonomial(1, 0, N)
    for x in (Q, P):
        two_step = conjugate_monomial(h1, pc, conjugate_monomial(h2, pc, x))
        if two_step != conjugate_monomial(h1 @ h2, pc, x):
            return False
    return True

"""Fano operators on the doubled phase-space grid.

Coordinates are doubled integers ``dq = 2q`` and ``dp = 2p`` in ``[0, 2N)``;
even values are the integer points, odd values the half-integer ones.
``Delta_F(q_f, p_f)`` is the Fourier transform of the Fano grid with kernel
``w^(dq*dp_f - dp*dq_f)``, ``w = exp(i*pi/N)``, normalized by ``1/2N``.

Two families of Fourier-space operators satisfy marginality and
covariance::

    leonhardt:  Delta_F = (1/2N) w^(dq_f*dp_f)          P^(-dq_f) Q^(dp_f)
    new:        Delta_F = (1/2N) w^(-(N-1)*dq_f*dp_f)   P^(-dq_f) Q^(dp_f)

The Leonhardt family exists for even ``N`` only.  For odd ``N`` the new
family vanishes on every half-integer point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    WeylMonomial,
    check_dim,
    dagger,
    max_deviation,
    monomial,
    phase,
)
from .exceptions import (
    AdmissibilityError,
    DimensionMismatchError,
    InvalidDimensionError,
    PointOutOfRangeError,
)
from .representation import (
    Family,
    PhaseChoice,
    build_unitary,
    classify_phase_choice,
)
from .sl2z import Sp2ZElement, complete_to_sl2, reduce_point, validate_sl2

LAZY_THRESHOLD = 16


class HalfPoint(NamedTuple):
    """A grid point in doubled coordinates ``(2q, 2p)``."""

    dq: int
    dp: int

    @property
    def q(self) -> float:
        return self.dq / 2

    @property
    def p(self) -> float:
        return self.dp / 2

    @property
    def is_integer(self) -> bool:
        return self.dq % 2 == 0 and self.dp % 2 == 0


def _point(point, N: int) -> HalfPoint:
    dq, dp = (int(v) for v in point)
    if not (0 <= dq < 2 * N and 0 <= dp < 2 * N):
        raise PointOutOfRangeError(f"({dq}, {dp}) outside [0, {2 * N})^2")
    return HalfPoint(dq, dp)


def _family(family, N: int) -> Family:
    family = Family(family)
    if family is Family.INADMISSIBLE:
        raise AdmissibilityError("no closed form exists for an inadmissible phase class")
    if family is Family.LEONHARDT and N % 2:
        raise InvalidDimensionError(f"the Leonhardt family needs even N, got {N}")
    return family


@dataclass(frozen=True)
class FourierFano:
    """``op = (1/2N) * monomial`` at the Fourier-space point ``point``."""

    point: HalfPoint
    monomial: WeylMonomial

    @property
    def dim(self) -> int:
        return self.monomial.dim

    @property
    def op(self) -> np.ndarray:
        return self.monomial.to_matrix() / (2 * self.dim)


def closed_form_monomial(point, family, N: int) -> WeylMonomial:
    """Exact ``2N * Delta_F`` for the closed form of ``family``."""
    N = check_dim(N)
    family = _family(family, N)
    dqf, dpf = _point(point, N)
    if family is Family.LEONHARDT:
        k = dqf * dpf
    else:
        k = -(N - 1) * dqf * dpf
    return WeylMonomial(-dqf, dpf, N, k)


def fano_fourier_closed(point, family, N: int) -> FourierFano:
    return FourierFano(_point(point, N), closed_form_monomial(point, family, N))


def fano_fourier_via_group(
    point, pc: PhaseChoice, N: int | None = None, *, shift: int = 0, strict: bool = True
) -> np.ndarray:
    """``Delta_F`` at ``point`` obtained by transporting ``(1/2N) Q^xi`` along a group orbit.

    The point is written as ``xi * (lam, kappa)`` with coprime
    ``(kappa, lam)``; ``h = [[kappa, -mu], [-lam, nu]]`` maps ``(0, xi/2)``
    onto it.  ``shift`` selects a different Bezout completion ``(mu, nu)``;
    for an admissible ``pc`` the result does not depend on it.  With
    ``strict=False`` inadmissible phase choices are accepted, which is only
    useful for demonstrating that they break marginality.
    """
    N = pc.dim if N is None else check_dim(N)
    if N != pc.dim:
        raise DimensionMismatchError(f"phase choice for N={pc.dim}, point for N={N}")
    if strict and classify_phase_choice(pc) is Family.INADMISSIBLE:
        raise AdmissibilityError(
            f"n+={pc.n_plus}, n-={pc.n_minus} is inadmissible for N={N}"
        )
    dqf, dpf = _point(point, N)
    red = reduce_point(dqf, dpf, N)
    if red.degenerate:
        return np.eye(N, dtype=complex) / (2 * N)
    col = complete_to_sl2(red.kappa, red.lam, shift=shift)
    h = Sp2ZElement(red.kappa, -col.mu, -red.lam, col.nu)
    seed = monomial(0, red.xi, N) / (2 * N)
    return build_unitary(h, pc).conjugate(seed)


def fourier_closed_array(family, N: int) -> np.ndarray:
    """All closed-form ``Delta_F`` as an array of shape ``(2N, 2N, N, N)``."""
    N = check_dim(N)
    out = np.empty((2 * N, 2 * N, N, N), dtype=complex)
    for dqf in range(2 * N):
        for dpf in range(2 * N):
            out[dqf, dpf] = fano_fourier_closed((dqf, dpf), family, N).op
    return out


def _kernels(N: int):
    d = np.arange(2 * N)
    return phase(-np.outer(d, d), N), phase(np.outer(d, d), N)


def grid_from_fourier(fourier: np.ndarray) -> np.ndarray:
    """Inverse transform: ``Delta(dq, dp) = (1/2N) sum w^(-dq*dp_f + dp*dq_f) Delta_F``."""
    N = fourier.shape[-1]
    minus, plus = _kernels(N)
    # minus[dq, dpf], plus[dp, dqf]
    return np.einsum("xv,yu,uvij->xyij", minus, plus, fourier) / (2 * N)


def fourier_from_grid(cells: np.ndarray) -> np.ndarray:
    """Forward transform: ``Delta_F(dq_f, dp_f) = (1/2N) sum w^(dq*dp_f - dp*dq_f) Delta``."""
    N = cells.shape[-1]
    minus, plus = _kernels(N)
    return np.einsum("xv,yu,xyij->uvij", plus, minus, cells) / (2 * N)


@dataclass
class FanoGrid:
    """``Delta(q, p)`` for every point of the doubled grid.

    ``cells[dq, dp]`` is an ``N x N`` matrix.  Grids above
    ``LAZY_THRESHOLD`` are evaluated one cell at a time on request.
    """

    dim: int
    family: Family
    _cells: np.ndarray | None = field(default=None, repr=False)
    _fourier: np.ndarray | None = field(default=None, repr=False)

    @property
    def lazy(self) -> bool:
        return self._cells is None

    @property
    def cells(self) -> np.ndarray:
        if self._cells is None:
            self._cells = grid_from_fourier(self.fourier)
        return self._cells

    @property
    def fourier(self) -> np.ndarray:
        if self._fourier is None:
            self._fourier = fourier_from_grid(self._cells)
        return self._fourier

    def cell(self, dq: int, dp: int) -> np.ndarray:
        dq, dp = _point((dq, dp), self.dim)
        if self._cells is not None:
            return self._cells[dq, dp]
        N = self.dim
        d = np.arange(2 * N)
        weights = phase(np.add.outer(dp * d, -dq * d), N)  # [dq_f, dp_f]
        return np.einsum("uv,uvij->ij", weights, self.fourier) / (2 * N)

    def points(self):
        for dq in range(2 * self.dim):
            for dp in range(2 * self.dim):
                yield HalfPoint(dq, dp)


def build_fano_grid(family, N: int, *, lazy: bool | None = None) -> FanoGrid:
    """Assemble the Fano grid of ``family`` from its closed Fourier form."""
    N = check_dim(N)
    family = _family(family, N)
    fourier = fourier_closed_array(family, N)
    if lazy is None:
        lazy = N > LAZY_THRESHOLD
    grid = FanoGrid(N, family, None, fourier)
    if not lazy:
        grid._cells = grid_from_fourier(fourier)
    return grid


def fano_grid_via_group(pc: PhaseChoice, *, strict: bool = True) -> FanoGrid:
    """Fano grid whose Fourier cells all come from the group-orbit construction."""
    N = pc.dim
    fourier = np.empty((2 * N, 2 * N, N, N), dtype=complex)
    for dqf in range(2 * N):
        for dpf in range(2 * N):
            fourier[dqf, dpf] = fano_fourier_via_group((dqf, dpf), pc, strict=strict)
    return FanoGrid(N, classify_phase_choice(pc), grid_from_fourier(fourier), fourier)


def new_family_reference(dq: int, dp: int, N: int) -> np.ndarray:
    """Direct double sum over ``P^-m Q^n`` for the new family.

    Each monomial collects four Fourier terms, giving the weight
    ``(1 + (-1)^(dq + (N-1)m)) (1 + (-1)^(dp + (N-1)n)) w^(-(N-1)nm - dq*n + dp*m) / (2N)^2``.
    """
    N = check_dim(N)
    dq, dp = _point((dq, dp), N)
    out = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            fold = (1 + (-1) ** (dq + (N - 1) * m)) * (1 + (-1) ** (dp + (N - 1) * n))
            if fold:
                out += fold * phase(-(N - 1) * n * m - dq * n + dp * m, N) * monomial(-m, n, N)
    return out / (2 * N) ** 2


def leonhardt_reference(dq: int, dp: int, N: int) -> np.ndarray:
    """Leonhardt's expansion evaluated term by term over all ``(q_f, p_f)``."""
    N = check_dim(N)
    if N % 2:
        raise InvalidDimensionError(f"the Leonhardt expansion needs even N, got {N}")
    dq, dp = _point((dq, dp), N)
    out = np.zeros((N, N), dtype=complex)
    for dpf in range(2 * N):
        for dqf in range(2 * N):
            k = dpf * dqf - dpf * dq + dqf * dp
            out += phase(k, N) * monomial(-dqf, dpf, N)
    return out / (2 * N) ** 2


def odd_reduction_reference(q: int, p: int, N: int) -> np.ndarray:
    """Integer-grid Fano operator for odd ``N``:
    ``(1/N^2) sum_{m,n} w_N^(-(N-1)nm/2 - qn + pm) P^-m Q^n``."""
    N = check_dim(N)
    if N % 2 == 0:
        raise InvalidDimensionError(f"the odd-N reduction needs odd N, got {N}")
    half = (N - 1) // 2
    out = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            out += phase(2 * (-half * n * m - q * n + p * m), N) * monomial(-m, n, N)
    return out / N**2


@dataclass(frozen=True)
class MarginalityReport:
    position: np.ndarray  # deviation of sum_p Delta(q, p) per dq
    momentum: np.ndarray  # deviation of sum_q Delta(q, p) per dp
    tol: float

    @property
    def max_deviation(self) -> float:
        return float(max(self.position.max(), self.momentum.max()))

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol


def position_projector(dq: int, N: int) -> np.ndarray:
    """``|q><q|`` for integer ``q = dq/2``, zero for half-integers."""
    out = np.zeros((N, N), dtype=complex)
    if dq % 2 == 0:
        out[dq // 2 % N, dq // 2 % N] = 1
    return out


def momentum_projector(dp: int, N: int) -> np.ndarray:
    """``|p><p|`` with ``|p> = N^-1/2 sum_q w_N^(pq)|q>``, zero for half-integers."""
    if dp % 2:
        return np.zeros((N, N), dtype=complex)
    ket = phase(dp * np.arange(N), N) / np.sqrt(N)
    return np.outer(ket, ket.conj())


def check_marginality(grid: FanoGrid, tol: float = DEFAULT_TOL) -> MarginalityReport:
    N = grid.dim
    cells = grid.cells
    over_p = cells.sum(axis=1)
    over_q = cells.sum(axis=0)
    position = np.array([max_deviation(over_p[d], position_projector(d, N)) for d in range(2 * N)])
    momentum = np.array([max_deviation(over_q[d], momentum_projector(d, N)) for d in range(2 * N)])
    return MarginalityReport(position, momentum, tol)


@dataclass(frozen=True)
class CovarianceReport:
    h: Sp2ZElement
    max_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol


def check_covariance(grid: FanoGrid, h, pc: PhaseChoice, tol: float = 1e-9) -> CovarianceReport:
    """Compare ``U_h Delta(q, p) U_h^dagger`` with ``Delta(nu q - lam p, -mu q + kappa p)``."""
    h = validate_sl2(h)
    if pc.dim != grid.dim:
        raise DimensionMismatchError(f"grid N={grid.dim}, phase choice N={pc.dim}")
    if classify_phase_choice(pc) is not grid.family:
        raise AdmissibilityError(
            f"phase choice class {classify_phase_choice(pc).value} does not match "
            f"grid family {grid.family.value}"
        )
    N = grid.dim
    U = build_unitary(h, pc)
    cells = grid.cells
    d = np.arange(2 * N)
    dq, dp = np.meshgrid(d, d, indexing="ij")
    tq, tp = h.relabel(dq, dp, N)
    deviation = max_deviation(U.conjugate(cells), cells[tq, tp])
    return CovarianceReport(h, deviation, tol)


def hermiticity_deviation(grid: FanoGrid) -> float:
    return max_deviation(grid.cells, dagger(grid.cells))

"""Wigner grids ``W(q, p) = Tr[Delta(q, p) rho]`` and their inverse."""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    MonomialCoefficients,
    check_dim,
    max_deviation,
    monomial,
    phase,
    reconstruct,
)
from .exceptions import AdmissibilityError, DimensionMismatchError, StateError, StateFormatError
from .fano import FanoGrid
from .representation import Family

STATE_TOL = 1e-9


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix (Hermitian, unit trace, positive semidefinite)."""

    matrix: np.ndarray

    def __post_init__(self):
        rho = np.array(self.matrix, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
            raise StateError(f"density matrix must be square, got shape {rho.shape}")
        asym = max_deviation(rho, rho.conj().T)
        if asym > STATE_TOL:
            raise StateError(f"density matrix not Hermitian (asymmetry {asym:.3e})")
        trace_error = abs(np.trace(rho) - 1)
        if trace_error > STATE_TOL:
            raise StateError(f"density matrix trace differs from 1 by {trace_error:.3e}")
        lowest = np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()
        if lowest < -STATE_TOL:
            raise StateError(f"density matrix has negative eigenvalue {lowest:.3e}")
        rho.flags.writeable = False
        object.__setattr__(self, "matrix", rho)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_vector(cls, psi) -> DensityMatrix:
        psi = np.asarray(psi, dtype=complex).ravel()
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise StateError("zero state vector")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))


def _pairs(data, count: int, what: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"{what}: entries must be [re, im] number pairs") from exc
    if arr.shape != (count, 2):
        raise StateFormatError(f"{what}: expected {count} [re, im] pairs, got shape {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


def load_state(document) -> DensityMatrix:
    """Parse a state document (mapping, JSON text or path to a JSON file).

    Schema: ``{"dim": N, "kind": "pure" | "density", "data": [[re, im], ...]}``
    with ``N`` pairs for a pure state and ``N*N`` row-major pairs for a
    density matrix.
    """
    if isinstance(document, (str, os.PathLike)):
        text = str(document)
        if not text.lstrip().startswith("{"):
            with open(document, encoding="utf-8") as fh:
                text = fh.read()
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StateFormatError(f"state document is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise StateFormatError("state document must be a JSON object")
    missing = {"dim", "kind", "data"} - set(document)
    if missing:
        raise StateFormatError(f"state document lacks field(s) {sorted(missing)}")
    try:
        N = check_dim(document["dim"])
    except ValueError as exc:
        raise StateFormatError(str(exc)) from exc
    kind = document["kind"]
    if kind == "pure":
        return DensityMatrix.from_vector(_pairs(document["data"], N, "pure state"))
    if kind == "density":
        return DensityMatrix(_pairs(document["data"], N * N, "density matrix").reshape(N, N))
    raise StateFormatError(f"unknown state kind {kind!r}; expected 'pure' or 'density'")


def state_document(rho: DensityMatrix) -> dict:
    flat = rho.matrix.ravel()
    return {
        "dim": rho.dim,
        "kind": "density",
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


@dataclass(frozen=True)
class WignerGrid:
    """Real values ``values[dq, dp] = W(dq/2, dp/2)``.

    ``imag_residue`` is the largest imaginary part discarded when taking
    the trace.
    """

    dim: int
    family: Family
    values: np.ndarray
    imag_residue: float = 0.0

    @property
    def total(self) -> float:
        return float(self.values.sum())


def wigner_transform(rho, grid: FanoGrid, tol: float = DEFAULT_TOL) -> WignerGrid:
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    if rho.dim != grid.dim:
        raise DimensionMismatchError(f"state N={rho.dim}, grid N={grid.dim}")
    raw = np.einsum("abij,ji->ab", grid.cells, rho.matrix)
    residue = float(np.abs(raw.imag).max())
    if residue >= tol:
        raise StateError(f"Tr[Delta rho] has imaginary part {residue:.3e}")
    return WignerGrid(grid.dim, grid.family, raw.real.copy(), residue)


class Marginals(NamedTuple):
    position: np.ndarray  # sum over p, indexed by dq
    momentum: np.ndarray  # sum over q, indexed by dp

    def half_integer_residue(self) -> float:
        return float(max(np.abs(self.position[1::2]).max(), np.abs(self.momentum[1::2]).max()))


def marginals(W: WignerGrid) -> Marginals:
    """Axis sums; entries at even indices are the position/momentum distributions."""
    return Marginals(W.values.sum(axis=1), W.values.sum(axis=0))


def moment_phase(family, a: int, b: int, N: int) -> int:
    """Exponent ``k`` (of ``exp(i*pi/N)``) with ``sum w_N^(aq+bp) Delta = w^k P^b Q^a``."""
    family = Family(family)
    if family is Family.NEW:
        return (N - 1) * a * b
    if family is Family.LEONHARDT:
        return -a * b
    raise AdmissibilityError("moment identity is defined for the admissible families only")


class MomentResult(NamedTuple):
    lhs: np.ndarray
    rhs: np.ndarray
    deviation: float


def moment_operator(grid: FanoGrid, a: int, b: int) -> np.ndarray:
    """``sum_{q,p} w_N^(a q + b p) Delta(q, p)`` over the doubled grid."""
    N = grid.dim
    d = np.arange(2 * N)
    weights = phase(np.add.outer(a * d, b * d), N)
    return np.einsum("xy,xyij->ij", weights, grid.cells)


def moment_identity(grid: FanoGrid, a: int, b: int) -> MomentResult:
    N = grid.dim
    if not (0 <= a < N and 0 <= b < N):
        raise ValueError(f"need 0 <= a, b < {N}, got a={a}, b={b}")
    lhs = moment_operator(grid, a, b)
    rhs = phase(moment_phase(grid.family, a, b, N), N) * monomial(b, a, N)
    return MomentResult(lhs, rhs, max_deviation(lhs, rhs))


def reconstruct_density(W: WignerGrid, grid: FanoGrid | None = None) -> DensityMatrix:
    """Recover ``rho`` from its Wigner grid via the monomial moments.

    ``Tr[P^b Q^a rho] = w^(-k_ab) sum w_N^(aq + bp) W(q, p)`` and
    ``rho = (1/N) sum_{m,n} Tr[rho (P^m Q^n)^dagger] P^m Q^n``.
    """
    N = W.dim
    if grid is not None and (grid.dim != N or grid.family is not W.family):
        raise DimensionMismatchError(
            f"Wigner grid (N={N}, {W.family.value}) and Fano grid "
            f"(N={grid.dim}, {grid.family.value}) disagree"
        )
    d = np.arange(2 * N)
    idx = np.arange(N)
    # raw[a, b] = sum_{dq, dp} w^(a dq + b dp) W
    raw = phase(np.outer(idx, d), N) @ W.values @ phase(np.outer(d, idx), N)
    k = np.array([[moment_phase(W.family, a, b, N) for b in idx] for a in idx])
    moments = phase(-k, N) * raw  # moments[a, b] = Tr[P^b Q^a rho]
    # Tr[rho (P^m Q^n)^dagger] = w_N^(-mn) Tr[P^-m Q^-n rho]
    m, n = np.meshgrid(idx, idx, indexing="ij")
    coeffs = phase(-2 * m * n, N) * moments[(-n) % N, (-m) % N] / N
    return DensityMatrix(reconstruct(MonomialCoefficients(N, coeffs)))


def write_wigner_csv(W: WignerGrid, stream=None) -> str:
    """CSV with header ``dq,dp,q,p,w``; returns the text (also written to ``stream``)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["dq", "dp", "q", "p", "w"])
    for dq in range(2 * W.dim):
        for dp in range(2 * W.dim):
            writer.writerow([dq, dp, f"{dq / 2:.1f}", f"{dp / 2:.1f}", f"{W.values[dq, dp]:.17g}"])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def read_wigner_csv(text: str, family="new") -> WignerGrid:
    rows = list(csv.DictReader(io.StringIO(text)))
    size = int(round(np.sqrt(len(rows))))
    values = np.zeros((size, size))
    for row in rows:
        values[int(row["dq"]), int(row["dp"])] = float(row["w"])
    return WignerGrid(size // 2, Family(family), values)


def wigner_document(W: WignerGrid) -> dict:
    return {
        "dim": W.dim,
        "family": W.family.value,
        "values": [float(v) for v in W.values.ravel()],
    }


def wigner_from_document(document: dict) -> WignerGrid:
    N = check_dim(document["dim"])
    values = np.asarray(document["values"], dtype=float)
    if values.size != 4 * N * N:
        raise StateFormatError(f"expected {4 * N * N} values, got {values.size}")
    return WignerGrid(N, Family(document["family"]), values.reshape(2 * N, 2 * N))

"""Named verification suites run by ``qps verify``.

Each suite returns a list of :class:`CheckResult`; a check records the
largest deviation observed and whether it stayed below (or, for negative
witnesses, above) its threshold.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sl2z
from .algebra import (
    WeylMonomial,
    build_clock_shift,
    decompose,
    max_deviation,
    monomial_basis,
    phase,
)
from .exceptions import QPSError
from .fano import (
    build_fano_grid,
    check_covariance,
    check_marginality,
    fano_fourier_closed,
    fano_fourier_via_group,
    fano_grid_via_group,
    fourier_from_grid,
    hermiticity_deviation,
    leonhardt_reference,
    new_family_reference,
    odd_reduction_reference,
)
from .representation import Family, PhaseChoice, classify_phase_choice, projective_residual
from .wigner import moment_identity, reconstruct_density, wigner_transform

INADMISSIBLE_MARGIN = 1e-2


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    deviation: float
    threshold: float
    above: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.above:
            return self.deviation > self.threshold
        return self.deviation < self.threshold

    def row(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        rel = ">" if self.above else "<"
        line = f"{self.suite:<13}{self.name:<48}{self.deviation:10.3e}  {rel} {self.threshold:.1e}  {status}"
        return f"{line}  {self.note}" if self.note else line


def families(N: int) -> list[Family]:
    return [Family.NEW, Family.LEONHARDT] if N % 2 == 0 else [Family.NEW]


def random_density(N: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    rho = A @ A.conj().T
    return rho / np.trace(rho).real


def sample_group(count: int, seed: int, bound: int = 7) -> list[sl2z.Sp2ZElement]:
    return list(sl2z.GENERATORS) + [sl2z.random_sl2(bound, seed + i) for i in range(count)]


def inadmissible_partner(N: int) -> PhaseChoice | None:
    """An inadmissible class with ``n+ + n- = 0 (mod N)``, or None if none exists."""
    pc = PhaseChoice(1, N - 1, N)
    return pc if classify_phase_choice(pc) is Family.INADMISSIBLE else None


def suite_algebra(N: int, tol: float, seed: int = 0) -> list[CheckResult]:
    Q, P = WeylMonomial(0, 1, N), WeylMonomial(1, 0, N)
    exact = (Q ** N).is_identity() and (P ** N).is_identity() and P * Q == (Q * P).scaled(2)
    Qm, Pm = build_clock_shift(N)
    omega = phase(2, N)
    float_dev = max(
        max_deviation(np.linalg.matrix_power(Qm, N), np.eye(N)),
        max_deviation(np.linalg.matrix_power(Pm, N), np.eye(N)),
        max_deviation(Pm @ Qm, omega * Qm @ Pm),
    )
    flat = monomial_basis(N).reshape(N * N, N * N)
    gram_dev = max_deviation(flat @ flat.conj().T, N * np.eye(N * N))
    rng = np.random.default_rng(seed)
    expand_dev = 0.0
    for _ in range(10):
        X = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
        expand_dev = max(expand_dev, max_deviation(decompose(X).reconstruct(), X))
    return [
        CheckResult("algebra", "Q^N = P^N = 1, PQ = w QP (exact)", 0.0 if exact else 1.0, 0.5),
        CheckResult("algebra", "same relations on matrices", float_dev, tol),
        CheckResult("algebra", "trace orthogonality of P^m Q^n", gram_dev, tol),
        CheckResult("algebra", "decompose/reconstruct round trip", expand_dev, tol),
    ]


def suite_marginality(N: int, tol: float, seed: int = 0) -> list[CheckResult]:
    return [
        CheckResult("marginality", f"{fam.value}: row and column sums",
                    check_marginality(build_fano_grid(fam, N)).max_deviation, tol)
        for fam in families(N)
    ]


def suite_structure(N: int, tol: float, seed: int = 0) -> list[CheckResult]:
    out = []
    for fam in families(N):
        grid = build_fano_grid(fam, N)
        traces = np.trace(grid.cells, axis1=2, axis2=3)
        d = np.arange(2 * N)
        expected = np.where((d[:, None] % 2 == 0) & (d[None, :] % 2 == 0), 1 / N, 0)
        fourier_dev = max_deviation(
            fourier_from_grid(grid.cells),
            np.array([[fano_fourier_closed((u, v), fam, N).op for v in d] for u in d]),
        )
        out += [
            CheckResult("structure", f"{fam.value}: Hermitian cells", hermiticity_deviation(grid), tol),
            CheckResult("structure", f"{fam.value}: sum of all cells = 1",
                        max_deviation(grid.cells.sum(axis=(0, 1)), np.eye(N)), tol),
            CheckResult("structure", f"{fam.value}: Tr Delta = 1/N on integer points",
                        max_deviation(traces, expected), tol),
            CheckResult("structure", f"{fam.value}: forward transform = closed form",
                        fourier_dev, tol),
        ]
    new = build_fano_grid(Family.NEW, N)
    direct = max(max_deviation(new.cells[a, b], new_family_reference(a, b, N))
                 for a in range(2 * N) for b in range(2 * N))
    out.append(CheckResult("structure", "new: four-fold folded double sum", direct, tol))
    return out


def suite_covariance(N: int, tol: float, seed: int = 0, count: int = 25) -> list[CheckResult]:
    out = []
    for fam in families(N):
        grid = build_fano_grid(fam, N)
        pc = PhaseChoice.for_family(fam, N)
        worst = max(check_covariance(grid, h, pc).max_deviation for h in sample_group(count, seed))
        out.append(CheckResult("covariance", f"{fam.value}: generators + {count} random h", worst, tol))
    return out


def suite_projective(N: int, tol: float, seed: int = 0, count: int = 50) -> list[CheckResult]:
    classes = [PhaseChoice.for_family(fam, N) for fam in families(N)]
    partner = inadmissible_partner(N)
    if partner is not None:
        classes.append(partner)
    out = []
    for pc in classes:
        worst = 0.0
        for i in range(count):
            h1 = sl2z.random_sl2(7, seed + 2 * i)
            h2 = sl2z.random_sl2(7, seed + 2 * i + 1)
            worst = max(worst, projective_residual(h1, h2, pc))
        label = f"n+={pc.n_plus}, n-={pc.n_minus} ({pc.family.value})"
        out.append(CheckResult("projective", f"{label}: {count} pairs", worst, tol))
    return out


def suite_leonhardt(N: int, tol: float, seed: int = 0) -> list[CheckResult]:
    if N % 2:
        return []
    grid = build_fano_grid(Family.LEONHARDT, N)
    dev = max(max_deviation(grid.cells[a, b], leonhardt_reference(a, b, N))
              for a in range(2 * N) for b in range(2 * N))
    return [CheckResult("leonhardt", "grid = term-by-term expansion", dev, tol)]


def suite_odd(N: int, tol: float, seed: int = 0) -> list[CheckResult]:
    if N % 2 == 0:
        return []
    cells = build_fano_grid(Family.NEW, N).cells
    half = max(np.linalg.norm(cells[a, b], 2)
               for a in range(2 * N) for b in range(2 * N) if a % 2 or b % 2)
    integer = max(max_deviation(cells[2 * q, 2 * p], odd_reduction_reference(q, p, N))
                  for q in range(N) for p in range(N))
    return [
        CheckResult("odd", "half-integer cells vanish", half, tol),
        CheckResult("odd", "integer cells = reduced formula", integer, tol),
    ]


def suite_moments(N: int, tol: float, seed: int = 0) -> list[CheckResult]:
    out = []
    for fam in families(N):
        grid = build_fano_grid(fam, N)
        worst = max(moment_identity(grid, a, b).deviation for a in range(N) for b in range(N))
        out.append(CheckResult("moments", f"{fam.value}: all (a, b)", worst, tol))
    return out


def suite_orbit(N: int, tol: float, seed: int = 0) -> list[CheckResult]:
    out = []
    for fam in families(N):
        pc = PhaseChoice.for_family(fam, N)
        worst = 0.0
        for dqf in range(2 * N):
            for dpf in range(2 * N):
                closed = fano_fourier_closed((dqf, dpf), fam, N).op
                for shift in (0, 1):
                    worst = max(worst, max_deviation(
                        fano_fourier_via_group((dqf, dpf), pc, shift=shift), closed))
        out.append(CheckResult("orbit", f"{fam.value}: orbit = closed form, 2 completions", worst, tol))
    return out


def suite_wigner(N: int, tol: float, seed: int = 0, count: int = 20) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []
    for fam in families(N):
        grid = build_fano_grid(fam, N)
        imag = total = trip = 0.0
        for _ in range(count):
            rho = random_density(N, rng)
            W = wigner_transform(rho, grid)
            imag = max(imag, W.imag_residue)
            total = max(total, abs(W.total - 1))
            trip = max(trip, max_deviation(reconstruct_density(W, grid).matrix, rho))
        out += [
            CheckResult("wigner", f"{fam.value}: imaginary residue", imag, tol),
            CheckResult("wigner", f"{fam.value}: sum W = 1", total, max(tol, 1e-9)),
            CheckResult("wigner", f"{fam.value}: reconstruction round trip", trip, tol),
        ]
    return out


def suite_inadmissible(N: int, tol: float, seed: int = 0) -> list[CheckResult]:
    pc = PhaseChoice(1, 0, N)
    if N < 2 or classify_phase_choice(pc) is not Family.INADMISSIBLE:
        return []
    grid = fano_grid_via_group(pc, strict=False)
    return [CheckResult("inadmissible", "n+=1, n-=0 orbit grid breaks marginality",
                        check_marginality(grid).max_deviation, INADMISSIBLE_MARGIN, above=True)]


SUITES = {
    "algebra": suite_algebra,
    "marginality": suite_marginality,
    "structure": suite_structure,
    "covariance": suite_covariance,
    "projective": suite_projective,
    "leonhardt": suite_leonhardt,
    "odd": suite_odd,
    "moments": suite_moments,
    "orbit": suite_orbit,
    "wigner": suite_wigner,
    "inadmissible": suite_inadmissible,
}


def run_suites(names, N: int, tol: float, seed: int = 0) -> list[CheckResult]:
    if "all" in names:
        names = list(SUITES)
    results = []
    for name in names:
        try:
            results += SUITES[name](N, tol, seed)
        except QPSError as exc:
            results.append(CheckResult(name, exc.identity, float("inf"), tol, note=str(exc)))
    return results

import cmath

import numpy as np
import pytest

from qps.algebra import build_clock_shift, max_deviation, monomial
from qps.exceptions import AdmissibilityError, InvalidDimensionError
from qps.fano import (
    FanoGrid,
    HalfPoint,
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
from qps.representation import Family, PhaseChoice
from qps.sl2z import GENERATORS, LOWER, complete_to_sl2, random_sl2


def slow_grid(family, N):
    """Inverse transform of the closed forms written out with np.exp and matrix powers."""
    Q, P = build_clock_shift(N)
    Pinv = np.linalg.inv(P)
    cells = np.zeros((2 * N, 2 * N, N, N), dtype=complex)
    for dqf in range(2 * N):
        for dpf in range(2 * N):
            if family == "leonhardt":
                c = cmath.exp(1j * cmath.pi * dqf * dpf / N)
            else:
                c = cmath.exp(-1j * cmath.pi * (N - 1) * dqf * dpf / N)
            term = c * np.linalg.matrix_power(Pinv, dqf) @ np.linalg.matrix_power(Q, dpf) / (2 * N)
            for dq in range(2 * N):
                for dp in range(2 * N):
                    cells[dq, dp] += cmath.exp(1j * cmath.pi * (-dq * dpf + dp * dqf) / N) * term
    return cells / (2 * N)


def both(N):
    return ["new", "leonhardt"] if N % 2 == 0 else ["new"]


class TestHalfPoint:
    def test_integer_and_half(self):
        assert HalfPoint(2, 4).is_integer
        assert not HalfPoint(1, 4).is_integer
        assert HalfPoint(3, 1).q == 1.5


class TestClosedForm:
    @pytest.mark.parametrize("family", ["new", "leonhardt"])
    @pytest.mark.parametrize("N", [2, 4])
    def test_marginal_axes(self, family, N):
        Q, P = build_clock_shift(N)
        for d in range(2 * N):
            on_p = fano_fourier_closed((0, d), family, N).op
            on_q = fano_fourier_closed((d, 0), family, N).op
            assert max_deviation(on_p, np.linalg.matrix_power(Q, d) / (2 * N)) < 1e-14
            assert max_deviation(on_q, np.linalg.matrix_power(np.linalg.inv(P), d) / (2 * N)) < 1e-14

    def test_half_half_two_dim(self):
        Q, P = build_clock_shift(2)
        base = np.linalg.inv(P) @ Q / 4
        assert max_deviation(fano_fourier_closed((1, 1), "new", 2).op, -1j * base) < 1e-15
        assert max_deviation(fano_fourier_closed((1, 1), "leonhardt", 2).op, 1j * base) < 1e-15

    def test_single_monomial(self):
        from qps.algebra import decompose

        for point in [(1, 2), (3, 5), (0, 7)]:
            c = decompose(fano_fourier_closed(point, "new", 4).op).coeffs
            assert np.count_nonzero(np.abs(c) > 1e-12) == 1
            assert np.abs(c).max() == pytest.approx(1 / 8)

    def test_leonhardt_needs_even(self):
        with pytest.raises(InvalidDimensionError):
            fano_fourier_closed((0, 0), "leonhardt", 3)


class TestViaGroup:
    def test_origin(self):
        out = fano_fourier_via_group((0, 0), PhaseChoice(0, 0, 3))
        assert max_deviation(out, np.eye(3) / 6) < 1e-15

    def test_two_dim_point(self):
        pc = PhaseChoice(0, 0, 2)
        assert max_deviation(fano_fourier_via_group((1, 3), pc), fano_fourier_closed((1, 3), "new", 2).op) < 1e-12

    def test_completion_independent(self):
        pc = PhaseChoice(0, 0, 4)
        assert complete_to_sl2(1, 1) != complete_to_sl2(1, 1, shift=2)
        a = fano_fourier_via_group((1, 1), pc)
        b = fano_fourier_via_group((1, 1), pc, shift=2)
        assert max_deviation(a, b) < 1e-12

    @pytest.mark.parametrize("N", [2, 3, 4, 6])
    def test_agrees_with_closed_form_everywhere(self, N):
        for family in both(N):
            pc = PhaseChoice.for_family(family, N)
            for dqf in range(2 * N):
                for dpf in range(2 * N):
                    closed = fano_fourier_closed((dqf, dpf), family, N).op
                    assert max_deviation(fano_fourier_via_group((dqf, dpf), pc), closed) < 1e-10

    def test_inadmissible_rejected(self):
        with pytest.raises(AdmissibilityError):
            fano_fourier_via_group((1, 1), PhaseChoice(1, 0, 4))


class TestGrid:
    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_against_slow_oracle(self, N):
        for family in both(N):
            assert max_deviation(build_fano_grid(family, N).cells, slow_grid(family, N)) < 1e-12

    @pytest.mark.parametrize("N", range(1, 9))
    def test_complete(self, N):
        for family in both(N):
            cells = build_fano_grid(family, N).cells
            assert max_deviation(cells.sum(axis=(0, 1)), np.eye(N)) < 1e-10

    def test_traces_two_dim(self):
        cells = build_fano_grid("new", 2).cells
        # brute force: only m = n = 0 survives the trace in the folded sum
        for dq in range(4):
            for dp in range(4):
                expected = 0.5 if dq % 2 == 0 and dp % 2 == 0 else 0.0
                assert abs(np.trace(cells[dq, dp]) - expected) < 1e-12

    def test_odd_half_points_vanish(self):
        cells = build_fano_grid("new", 3).cells
        for dq in range(6):
            for dp in range(6):
                if dq % 2 or dp % 2:
                    assert np.abs(cells[dq, dp]).max() < 1e-12

    @pytest.mark.parametrize("N", [2, 4, 6])
    def test_hermitian(self, N):
        for family in both(N):
            assert hermiticity_deviation(build_fano_grid(family, N)) < 1e-10

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_new_family_folded_sum(self, N):
        cells = build_fano_grid("new", N).cells
        for dq in range(2 * N):
            for dp in range(2 * N):
                assert max_deviation(cells[dq, dp], new_family_reference(dq, dp, N)) < 1e-12

    @pytest.mark.parametrize("N", [2, 4, 6])
    def test_forward_transform_recovers_closed_forms(self, N):
        for family in both(N):
            fourier = fourier_from_grid(build_fano_grid(family, N).cells)
            for dqf in range(2 * N):
                for dpf in range(2 * N):
                    closed = fano_fourier_closed((dqf, dpf), family, N).op
                    assert max_deviation(fourier[dqf, dpf], closed) < 1e-10

    def test_lazy_matches_eager(self):
        eager = build_fano_grid("leonhardt", 4)
        lazy = build_fano_grid("leonhardt", 4, lazy=True)
        assert lazy.lazy
        for point in [(0, 0), (3, 5), (7, 2)]:
            assert max_deviation(lazy.cell(*point), eager.cell(*point)) < 1e-12

    def test_large_grid_is_lazy(self):
        grid = build_fano_grid("new", 17)
        assert grid.lazy
        assert abs(np.trace(grid.cell(2, 4)) - 1 / 17) < 1e-10


class TestMarginality:
    def test_leonhardt_two_dim(self):
        assert check_marginality(build_fano_grid("leonhardt", 2)).max_deviation < 1e-12

    @pytest.mark.parametrize("N", [2, 4, 6])
    def test_new_even(self, N):
        report = check_marginality(build_fano_grid("new", N))
        assert report.passed and report.max_deviation < 1e-12
        assert report.position.shape == (2 * N,)

    def test_perturbed_cell_fails(self):
        grid = build_fano_grid("new", 2)
        cells = grid.cells.copy()
        cells[1, 2, 0, 0] += 1e-3
        report = check_marginality(FanoGrid(2, Family.NEW, cells))
        assert not report.passed
        assert report.max_deviation == pytest.approx(1e-3, rel=1e-6)

    def test_inadmissible_orbit_grid_fails(self):
        grid = fano_grid_via_group(PhaseChoice(1, 0, 4), strict=False)
        assert grid.family is Family.INADMISSIBLE
        assert check_marginality(grid).max_deviation > 1e-2


class TestCovariance:
    def test_identity(self):
        grid = build_fano_grid("new", 3)
        from qps.sl2z import Sp2ZElement

        assert check_covariance(grid, Sp2ZElement.identity(), PhaseChoice(0, 0, 3)).max_deviation < 1e-14

    @pytest.mark.parametrize("family", ["new", "leonhardt"])
    def test_lower_generator_two_dim(self, family):
        grid = build_fano_grid(family, 2)
        report = check_covariance(grid, LOWER, PhaseChoice.for_family(family, 2))
        assert report.passed and report.max_deviation < 1e-9

    def test_random_elements(self):
        grid = build_fano_grid("new", 4)
        pc = PhaseChoice(0, 0, 4)
        for seed in range(25):
            assert check_covariance(grid, random_sl2(7, seed), pc).max_deviation < 1e-9

    @pytest.mark.parametrize("N", [3, 5])
    def test_odd(self, N):
        grid = build_fano_grid("new", N)
        for h in GENERATORS:
            assert check_covariance(grid, h, PhaseChoice(0, 0, N)).passed

    def test_wrong_representation_breaks_covariance(self):
        # the Leonhardt grid is not covariant under the new-family unitaries
        grid = build_fano_grid("leonhardt", 4)
        relabelled = FanoGrid(4, Family.NEW, grid.cells)
        worst = max(check_covariance(relabelled, h, PhaseChoice(0, 0, 4)).max_deviation for h in GENERATORS)
        assert worst > 1e-2

    def test_family_mismatch_rejected(self):
        with pytest.raises(AdmissibilityError):
            check_covariance(build_fano_grid("new", 2), LOWER, PhaseChoice(1, 1, 2))


class TestReferences:
    @pytest.mark.parametrize("N", [2, 4])
    def test_leonhardt_equals_grid(self, N):
        cells = build_fano_grid("leonhardt", N).cells
        for dq in range(2 * N):
            for dp in range(2 * N):
                assert max_deviation(leonhardt_reference(dq, dp, N), cells[dq, dp]) < 1e-12

    def test_leonhardt_position_sums(self):
        N = 2
        for dq in range(2 * N):
            total = sum(leonhardt_reference(dq, dp, N) for dp in range(2 * N))
            expected = np.zeros((N, N))
            if dq % 2 == 0:
                expected[dq // 2, dq // 2] = 1
            assert max_deviation(total, expected) < 1e-12

    def test_leonhardt_hermitian(self):
        for dq in range(4):
            for dp in range(4):
                D = leonhardt_reference(dq, dp, 2)
                assert max_deviation(D, D.conj().T) < 1e-14

    def test_leonhardt_rejects_odd(self):
        with pytest.raises(InvalidDimensionError):
            leonhardt_reference(0, 0, 3)

    def test_odd_reduction_equals_grid(self):
        cells = build_fano_grid("new", 3).cells
        for q in range(3):
            for p in range(3):
                assert max_deviation(odd_reduction_reference(q, p, 3), cells[2 * q, 2 * p]) < 1e-12

    def test_odd_reduction_complete(self):
        total = sum(odd_reduction_reference(q, p, 5) for q in range(5) for p in range(5))
        assert max_deviation(total, np.eye(5)) < 1e-12

    def test_odd_reduction_origin(self):
        Q, P = build_clock_shift(3)
        expected = sum(
            cmath.exp(-2j * cmath.pi * n * m / 3) * np.linalg.matrix_power(np.linalg.inv(P), m) @ np.linalg.matrix_power(Q, n)
            for m in range(3) for n in range(3)
        ) / 9
        assert max_deviation(odd_reduction_reference(0, 0, 3), expected) < 1e-14

    def test_odd_reduction_rejects_even(self):
        with pytest.raises(InvalidDimensionError):
            odd_reduction_reference(0, 0, 4)

import math

import pytest

from anharmonic import solver
from anharmonic.exceptions import InsufficientRootsError, LostBracketError
from anharmonic.models import EigenvalueResult, EnergyScanConfig, Family, Precision, TruncationConfig
from anharmonic.potential import QuarticPotential, SexticPotential
from anharmonic.solver import (
    deepen,
    default_window,
    eigenvalues,
    is_qes_exact,
    lowest_levels,
    merge_sectors,
    refine_root,
    scan_brackets,
    scan_grid,
)
from anharmonic.wronskian import make_evaluator

NU_QES = 0.5 * (1.0 + math.sqrt(3.0))
QES_TWO = 2.0 + 2.0 * math.sqrt(3.0)


def test_scan_grid():
    grid = scan_grid(EnergyScanConfig(e_min=0.0, e_max=1.0, step=0.25))
    assert grid.tolist() == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
    assert scan_grid(EnergyScanConfig(e_min=2.0, e_max=2.0)).tolist() == [2.0]


def test_scan_grid_covers_the_window():
    grid = scan_grid(EnergyScanConfig(e_min=0.0, e_max=1.0, step=0.3))
    assert grid[0] == 0.0 and grid[-1] == 1.0
    assert max(grid[1:] - grid[:-1]) <= 0.3


def test_scan_brackets(pure_quartic, scan_config):
    report = scan_brackets(Family.QUARTIC, pure_quartic, 0.0, scan_config(0.0, 9.0, step=0.1))
    assert len(report.brackets) == 2
    (lo0, hi0), (lo1, hi1) = report.brackets
    assert lo0 <= 1.06036209 <= hi0
    assert lo1 <= 7.45569794 <= hi1
    assert hi0 - lo0 <= 0.05 + 1e-12
    assert report.samples


def test_even_levels_of_the_pure_quartic(pure_quartic, scan_config):
    levels = eigenvalues(Family.QUARTIC, pure_quartic, 0.0, 2, scan_config(0.0, 9.0, step=0.1))
    assert [r.energy for r in levels] == pytest.approx([1.06036209, 7.45569794], abs=1e-7)
    assert [r.index_in_sector for r in levels] == [0, 1]
    for r in levels:
        assert r.converged
        assert r.sector_nu == 0.0
        assert r.estimated_error < 1e-7
        assert not r.qes_exact


def test_odd_levels_of_the_double_well(double_well, scan_config):
    levels = eigenvalues(Family.QUARTIC, double_well, 1.0, 2, scan_config(0.0, 11.0, step=0.1))
    assert [r.energy for r in levels] == pytest.approx([2.83453620, 10.03864612], abs=1e-7)


def test_quartic_scaling(scan_config):
    """E(lambda r^4) = lambda^(1/3) E(r^4)."""
    soft = eigenvalues(Family.QUARTIC, QuarticPotential(a4=1.0), 1.0, 1, scan_config(0.0, 5.0, step=0.1))
    stiff = eigenvalues(Family.QUARTIC, QuarticPotential(a4=8.0), 1.0, 1, scan_config(0.0, 10.0, step=0.1))
    assert stiff[0].energy == pytest.approx(2.0 * soft[0].energy, rel=1e-9)


def test_exact_qes_levels(qes, scan_config):
    levels = eigenvalues(Family.SEXTIC, qes(2.0), NU_QES, 2, scan_config(-8.0, 8.0, step=0.1))
    assert [r.energy for r in levels] == pytest.approx([-QES_TWO, QES_TWO], abs=1e-8)
    assert all(r.qes_exact for r in levels)


def test_qes_ground_state_at_zero(qes, scan_config):
    levels = eigenvalues(Family.SEXTIC, qes(1.0), NU_QES, 2, scan_config(-1.03, 12.0, step=0.1))
    assert levels[0].energy == pytest.approx(0.0, abs=1e-8)
    assert levels[0].qes_exact
    assert levels[1].energy == pytest.approx(10.46738163, abs=1e-7)
    assert not levels[1].qes_exact


def test_is_qes_exact(qes):
    assert is_qes_exact(qes(1.0), 0.0, 100, 1e-10)
    assert not is_qes_exact(qes(1.0), 0.5, 100, 1e-10)
    assert not is_qes_exact(QuarticPotential(a4=1.0), 0.0, 100, 1e-10)


def test_insufficient_roots(pure_quartic, scan_config):
    with pytest.raises(InsufficientRootsError) as exc:
        eigenvalues(Family.QUARTIC, pure_quartic, 0.0, 3, scan_config(0.0, 2.0, step=0.1))
    assert exc.value.requested == 3
    assert exc.value.found == 1


def test_count_must_be_positive(pure_quartic, scan_config):
    with pytest.raises(ValueError):
        eigenvalues(Family.QUARTIC, pure_quartic, 0.0, 0, scan_config(0.0, 2.0))


def test_lost_bracket(pure_quartic, scan_config):
    config = scan_config(0.0, 0.5)
    W = make_evaluator(Family.QUARTIC, pure_quartic, 0.0, config.truncation)
    with pytest.raises(LostBracketError):
        refine_root(W, (0.0, 0.5), config)


def test_lowest_levels_widens_the_window(pure_quartic, scan_config):
    levels = lowest_levels(Family.QUARTIC, pure_quartic, 1.0, 2, scan_config(0.0, 2.0, step=0.1))
    assert [r.energy for r in levels] == pytest.approx([3.79967303, 11.64474551], abs=1e-7)


def test_lowest_levels_without_extension(pure_quartic, scan_config):
    with pytest.raises(InsufficientRootsError):
        lowest_levels(Family.QUARTIC, pure_quartic, 1.0, 2, scan_config(0.0, 2.0, step=0.1), auto_extend=False)


def _result(energy, nu, index):
    return EigenvalueResult(
        energy=energy,
        sector_nu=nu,
        bracket=(energy - 0.1, energy + 0.1),
        estimated_error=1e-12,
        index_in_sector=index,
    )


def test_merge_sectors():
    even = [_result(1.0, 0.0, 0), _result(7.4, 0.0, 1)]
    odd = [_result(3.8, 1.0, 0), _result(11.6, 1.0, 1)]
    merged = merge_sectors(even, odd)
    assert [r.energy for r in merged] == [1.0, 3.8, 7.4, 11.6]
    assert [r.index_in_sector for r in merged] == [0, 1, 2, 3]
    assert [r.sector_nu for r in merged] == [0.0, 1.0, 0.0, 1.0]


def test_default_window(pure_quartic):
    assert default_window(pure_quartic) == (-0.5, 9.5)
    assert default_window(QuarticPotential(a4=1.0, a2=-10.0)) == pytest.approx((-25.5, 0.0), abs=1e-9)
    assert default_window(pure_quartic, e_min=2.0) == (2.0, 12.0)
    assert default_window(pure_quartic, e_max=4.0) == (-0.5, 4.0)


def test_default_window_needs_a_floor():
    with pytest.raises(ValueError):
        default_window(SexticPotential(a6=1.0, am2=-0.2))


def test_unconverged_samples_still_bracket(pure_quartic):
    strict = TruncationConfig(spread_tol=1e-30)
    config = EnergyScanConfig(e_min=0.0, e_max=2.0, step=0.1, truncation=strict)
    report = scan_brackets(Family.QUARTIC, pure_quartic, 0.0, config)
    assert len(report.samples) == len(scan_grid(config))
    assert not any(s.converged for s in report.samples)
    assert any("not converged" in w for w in report.warnings)
    (lo, hi), = report.brackets
    assert lo <= 1.06036209 <= hi

    (level,) = eigenvalues(Family.QUARTIC, pure_quartic, 0.0, 1, config)
    assert level.energy == pytest.approx(1.06036209, abs=1e-7)
    assert not level.converged


def test_odd_levels_of_the_deep_double_well(scan_config):
    pot = QuarticPotential(a4=1.0, a2=-5.0)
    e_min, e_max = default_window(pot)
    levels = lowest_levels(Family.QUARTIC, pot, 1.0, 2, scan_config(e_min, e_max))
    assert [r.energy for r in levels] == pytest.approx([-3.25067536, 2.58121627], abs=1e-7)
    assert all(r.converged for r in levels)


def test_lowest_levels_scans_only_new_segments(pure_quartic, scan_config, monkeypatch):
    seen = []
    original = solver.scan_brackets

    def spy(family, pot, nu, config, evaluator=None):
        seen.append((config.e_min, config.e_max, config.step))
        return original(family, pot, nu, config, evaluator=evaluator)

    monkeypatch.setattr(solver, "scan_brackets", spy)
    lowest_levels(Family.QUARTIC, pure_quartic, 1.0, 2, scan_config(0.0, 2.0, step=0.1))
    assert seen == [(0.0, 2.0, 0.1), (2.0, 4.0, 0.2), (4.0, 8.0, 0.4), (8.0, 16.0, 0.8)]


def test_segment_step_is_capped(pure_quartic, scan_config, monkeypatch):
    monkeypatch.setattr(solver.settings, "MAX_SEGMENT_POINTS", 10)
    seen = []
    original = solver.scan_brackets

    def spy(family, pot, nu, config, evaluator=None):
        seen.append(config.step)
        return original(family, pot, nu, config, evaluator=evaluator)

    monkeypatch.setattr(solver, "scan_brackets", spy)
    levels = lowest_levels(Family.QUARTIC, pure_quartic, 1.0, 1, scan_config(0.0, 2.0, step=0.01))
    assert seen == pytest.approx([0.01, 0.2])
    assert levels[0].energy == pytest.approx(3.79967303, abs=1e-7)


def test_polishing_reports_the_last_move(pure_quartic, scan_config):
    (level,) = eigenvalues(Family.QUARTIC, pure_quartic, 1.0, 1, scan_config(3.0, 4.5, step=0.1))
    assert level.truncation_drift <= 1e-10
    assert level.estimated_error >= level.truncation_drift
    assert level.bracket[0] <= level.energy <= level.bracket[1]

    (plain,) = eigenvalues(
        Family.QUARTIC, pure_quartic, 1.0, 1, scan_config(3.0, 4.5, step=0.1, estimate_drift=False)
    )
    assert plain.truncation_drift == 0.0
    assert plain.energy == pytest.approx(level.energy, abs=1e-7)


def test_deepen():
    base = TruncationConfig(h_order=200, reference_n=10, n_set=(10, 11, 12), extended_bits=128)
    deeper = deepen(base, 2)
    assert deeper.h_order == 600
    assert deeper.reference_n == 10 + 2 * solver.settings.POLISH_N_INCREMENT
    assert deeper.n_set == tuple(n + 2 * solver.settings.POLISH_N_INCREMENT for n in (10, 11, 12))
    assert deeper.precision == Precision.EXTENDED
    assert deeper.extended_bits == 128 + 2 * solver.settings.POLISH_BITS_INCREMENT
    assert deeper.b_order == 0


@pytest.mark.parametrize("J, pairs", [(2.0, [(0, 1)]), (4.0, [(0, 3), (1, 2)])])
def test_computed_qes_levels_are_symmetric(qes, scan_config, J, pairs):
    pot = qes(J)
    e_min, e_max = default_window(pot)
    levels = lowest_levels(Family.SEXTIC, pot, NU_QES, 2 * len(pairs), scan_config(e_min, e_max))
    for i, j in pairs:
        assert levels[i].energy + levels[j].energy == pytest.approx(0.0, abs=2e-7)
    assert all(r.qes_exact for r in levels)


def _double_well_spectrum(a2, scan_config, count=2):
    pot = QuarticPotential(a4=1.0, a2=a2)
    e_min, e_max = default_window(pot)
    config = scan_config(e_min, e_max)
    even = lowest_levels(Family.QUARTIC, pot, 0.0, count, config)
    odd = lowest_levels(Family.QUARTIC, pot, 1.0, count, config)
    return merge_sectors(even, odd)


@pytest.mark.slow
@pytest.mark.parametrize("a2", [0.0, -3.0, -6.0, -10.0])
def test_parity_sectors_interlace(a2, scan_config):
    merged = _double_well_spectrum(a2, scan_config)
    assert [r.sector_nu for r in merged] == [0.0, 1.0, 0.0, 1.0]
    energies = [r.energy for r in merged]
    assert all(lower < upper for lower, upper in zip(energies, energies[1:]))


@pytest.mark.slow
def test_levels_increase_with_a2(scan_config):
    spectra = [[r.energy for r in _double_well_spectrum(a2, scan_config)] for a2 in (-5.0, -4.5, -4.0)]
    for lower, upper in zip(spectra, spectra[1:]):
        assert all(a < b for a, b in zip(lower, upper))

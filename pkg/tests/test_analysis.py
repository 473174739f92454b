"""
Tests for the verification checks, the substitution rule, covers and
the increment-sum probes.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from omegapy import (
    CoverFamily, DomainError, ModulusTable, PreconditionError, TableSource, VerificationReport,
    ac_profile, build_f, build_g, check_cantor_symmetry, check_lemma_bounds, check_monotone,
    check_table_invariants, from_breakpoints, increment_sum, lipschitz_check, modulus_grid,
    omega_g_table, run_suite, singular_cover, singular_profile, substitute_pair,
    verify_ac_profile, verify_boundary_below_critical, verify_closed_form_candidates,
    verify_closed_form_continuity, verify_concave_majorant, verify_delta_star, verify_lipschitz,
    verify_monotone_shortcut, verify_self_modulus, verify_singular_covers, verify_substitution,
)

from problems import get_piecewise_linear_specs


class TestVerificationReport:
    """Test cases for VerificationReport."""

    def test_passed_is_derived(self):
        """Test passed is max_violation <= tolerance."""
        assert VerificationReport("a", 1, 0.0, 0.0).passed
        assert VerificationReport("a", 1, 1e-12, 1e-12).passed
        assert not VerificationReport("a", 1, 2e-12, 1e-12).passed

    def test_summary_line(self):
        """Test the CSV line format."""
        line = VerificationReport("cantor_holder", 3, 0.0, 1e-12).summary_line()
        assert line == "cantor_holder,3,0,1e-12,true"
        line = VerificationReport("x", 5, 0.25, 0.125).summary_line()
        assert line == "x,5,0.25,0.125,false"

    def test_nan_never_passes(self):
        """Test NaN violations fail."""
        assert not VerificationReport("nan", 1, math.nan, 1.0).passed


class TestPointwiseChecks:
    """Test cases for the sampled pointwise checks."""

    def test_lemma_bounds(self):
        """Test every pointwise bound holds."""
        reports = check_lemma_bounds(samples=4000, seed=7)
        names = [r.check_name for r in reports]
        assert names == ["endpoints", "cantor_below_power", "cantor_holder",
                         "identity_below_power", "identity_holder",
                         "convex_below_cantor", "convex_below_identity"]
        assert all(r.passed for r in reports), [r for r in reports if not r.passed]

    def test_lemma_bounds_bad_samples(self):
        """Test samples must be positive."""
        with pytest.raises(PreconditionError):
            check_lemma_bounds(samples=0)

    def test_cantor_symmetry(self):
        """Test f1(x) + f1(1 - x) = 1."""
        report = check_cantor_symmetry(samples=4000)
        assert report.passed and report.samples == 4000

    def test_monotone(self, f_fn, g_fn, sawtooth):
        """Test f and g are nondecreasing and the tent is not."""
        assert check_monotone(f_fn, 5000).passed
        assert check_monotone(g_fn, 5000).passed
        report = check_monotone(sawtooth, 5000)
        assert not report.passed
        assert report.max_violation > 0.0

    def test_table_invariants(self, h_fn):
        """Test grid tables satisfy the modulus axioms."""
        assert check_table_invariants(modulus_grid(h_fn, 1001)).passed
        assert check_table_invariants(omega_g_table(1001), name="g_closed").passed

    def test_table_invariants_detect_superadditivity(self):
        """Test a superadditive table fails."""
        table = ModulusTable([0.0, 1.0, 2.0], [0.0, 0.0, 1.0], 3, TableSource.GRID_ORACLE)
        report = check_table_invariants(table, name="bad")
        assert report.check_name == "table_bad"
        assert not report.passed


class TestSubstitution:
    """Test cases for substitute_pair."""

    @pytest.mark.parametrize("pair,expected", [
        ((2.5, 0.5), (5.5, 3.5)),
        ((2.5, 2.5), (1.0, 1.0)),
        ((2.2, 4.7), (3.2, 5.7)),
        ((2.0, 1.0), (5.0, 4.0)),
        ((3.0, 7.0), (1.0, 5.0)),
    ])
    def test_examples(self, pair, expected):
        """Test documented pairs."""
        assert substitute_pair(*pair) == pytest.approx(expected)

    def test_vectorised(self, rng):
        """Test arrays map elementwise and keep the distance."""
        x = rng.uniform(2.0, 3.0, 100)
        y = rng.uniform(0.0, 7.0, 100)
        x1, y1 = substitute_pair(x, y)
        np.testing.assert_allclose(np.abs(x1 - y1), np.abs(x - y), atol=1e-12)
        for t in (x1, y1):
            assert not ((t > 2.0) & (t < 3.0)).any()

    def test_increments_not_lost(self, f_fn, g_fn, rng):
        """Test neither |f| nor |g| increments shrink."""
        x = rng.uniform(2.0, 3.0, 500)
        y = rng.uniform(0.0, 7.0, 500)
        x1, y1 = substitute_pair(x, y)
        for fn in (f_fn, g_fn):
            assert (np.abs(fn(x1) - fn(y1)) >= np.abs(fn(x) - fn(y)) - 1e-12).all()

    def test_preconditions(self):
        """Test x outside [2, 3] or y outside [0, 7] is rejected."""
        with pytest.raises(PreconditionError):
            substitute_pair(1.5, 0.5)
        with pytest.raises(PreconditionError):
            substitute_pair(2.5, 7.5)

    def test_verify(self):
        """Test the sampled substitution check passes."""
        assert verify_substitution(samples=5000).passed


class TestExactChecks:
    """Test cases for the checks of the closed-form analysis."""

    def test_delta_star(self):
        assert verify_delta_star().passed

    def test_continuity(self):
        assert verify_closed_form_continuity().passed

    def test_boundary_below_critical(self):
        report = verify_boundary_below_critical(200)
        assert report.passed and report.samples == 200

    def test_candidates(self):
        assert verify_closed_form_candidates(200).passed

    def test_self_modulus(self):
        """Test the f1 grid table reproduces f1 at ternary deltas."""
        assert verify_self_modulus().passed

    def test_concave_majorant(self):
        assert verify_concave_majorant().passed

    def test_monotone_shortcut(self, f_fn, g_fn):
        """Test the one-sided oracle on f and g."""
        assert verify_monotone_shortcut(f_fn, 2001).passed
        assert verify_monotone_shortcut(g_fn, 2001).passed

    def test_monotone_shortcut_needs_flag(self, sawtooth):
        with pytest.raises(PreconditionError):
            verify_monotone_shortcut(sawtooth)


class TestCovers:
    """Test cases for Cantor covers and increment sums."""

    def test_level_zero(self):
        """Test level 0 is the whole block."""
        cover = singular_cover(0)
        assert len(cover) == 1
        assert cover.intervals[0].lo == 2.0 and cover.intervals[0].hi == 3.0

    def test_level_one(self):
        """Test level 1 removes the middle third."""
        cover = singular_cover(1)
        np.testing.assert_allclose(cover.lo, [2.0, 2.0 + 2.0 / 3.0])
        np.testing.assert_allclose(cover.hi, [2.0 + 1.0 / 3.0, 3.0])

    @pytest.mark.parametrize("level", [0, 1, 5, 12])
    def test_sizes(self, level):
        """Test 2**level intervals of total length (2/3)**level."""
        cover = singular_cover(level)
        assert len(cover) == 2 ** level
        assert cover.total_length == pytest.approx((2.0 / 3.0) ** level, rel=1e-12)

    def test_level_range(self):
        with pytest.raises(PreconditionError):
            singular_cover(21)
        with pytest.raises(PreconditionError):
            singular_cover(-1)

    def test_increments(self, f_fn, g_fn):
        """Test f gains exactly 1 and g exactly the total length on every cover."""
        for level in (0, 3, 8, 12):
            cover = singular_cover(level)
            assert increment_sum(f_fn, cover) == 1.0
            assert increment_sum(g_fn, cover) == cover.total_length

    def test_exact_endpoints(self):
        """Test a cover keeps its ternary numerators and rounds each endpoint once."""
        cover = singular_cover(3)
        assert cover.level == 3
        np.testing.assert_array_equal(cover.numerators, [0, 2, 6, 8, 18, 20, 24, 26])
        lo, hi = cover.exact_bounds
        assert lo[1] == 2 + Fraction(2, 27) and hi[-1] == 3
        assert cover.lo.tolist() == [float(v) for v in lo]
        assert cover.hi.tolist() == [float(v) for v in hi]

    def test_float_bounds_lose_the_increment(self, f_fn):
        """Test f read at the rounded endpoints misses 1, the exact endpoints do not."""
        cover = singular_cover(12)
        rounded = CoverFamily(cover.lo, cover.hi)
        assert rounded.exact_bounds is None
        assert abs(increment_sum(f_fn, rounded) - 1.0) > 1e-9
        assert increment_sum(f_fn, cover) == 1.0

    def test_ternary_fields_checked(self):
        """Test level and numerators come together and match the bounds."""
        with pytest.raises(PreconditionError):
            CoverFamily([2.0], [3.0], level=0)
        with pytest.raises(PreconditionError):
            CoverFamily([2.0], [3.0], level=1, numerators=[0, 2], origin=2.0)

    def test_increment_outside_domain(self, cantor):
        """Test a cover outside the domain is rejected."""
        with pytest.raises(DomainError):
            increment_sum(cantor, singular_cover(2))

    def test_empty_family(self, f_fn):
        empty = CoverFamily(np.zeros(0), np.zeros(0))
        assert increment_sum(f_fn, empty) == 0.0
        assert empty.total_length == 0.0

    def test_overlap_rejected(self):
        """Test overlapping or reversed intervals are rejected."""
        with pytest.raises(PreconditionError):
            CoverFamily([0.0, 0.5], [0.6, 1.0])
        with pytest.raises(PreconditionError):
            CoverFamily([0.5], [0.2])

    def test_profile(self, g_fn):
        """Test the g profile pairs each length with itself."""
        for length, total in singular_profile(g_fn, range(6)):
            assert total == pytest.approx(length, abs=1e-12)

    def test_verify(self):
        reports = verify_singular_covers(8)
        assert [r.check_name for r in reports] == ["singular_cover_f", "singular_cover_g"]
        assert all(r.passed for r in reports)


class TestAbsoluteContinuityProfile:
    """Test cases for ac_profile."""

    def test_identity(self, identity):
        """Test every increment sum of the identity equals its total length."""
        profile = ac_profile(identity, lengths=(0.5, 0.1, 0.01), trials=10)
        for length, sup in profile:
            assert sup == pytest.approx(length, abs=1e-12)

    def test_workers_do_not_change_result(self, g_fn):
        """Test threads draw the same families."""
        one = ac_profile(g_fn, trials=12, seed=3)
        many = ac_profile(g_fn, trials=12, seed=3, workers=4)
        assert one == many

    def test_seed_matters(self, h_fn):
        assert ac_profile(h_fn, trials=5, seed=1) != ac_profile(h_fn, trials=5, seed=2)

    def test_table_target(self):
        """Test a closed-form table is probed through its interpolant."""
        profile = ac_profile(omega_g_table(2001), trials=20)
        sups = [s for _, s in profile]
        assert len(sups) == 4
        assert sups[-1] < 0.05

    def test_preconditions(self, identity):
        with pytest.raises(PreconditionError):
            ac_profile(identity, lengths=(0.01, 0.1))
        with pytest.raises(PreconditionError):
            ac_profile(identity, lengths=(2.0, 0.1))
        with pytest.raises(PreconditionError):
            ac_profile(identity, trials=0)

    def test_verify(self):
        assert verify_ac_profile(grid_n=2001, trials=20).passed

    def test_verify_rejects_a_flat_profile(self, monkeypatch):
        """Test equal suprema at two lengths fail the strict decrease."""
        monkeypatch.setattr("omegapy.analysis.ac_profile",
                            lambda *args, **kwargs: [(0.1, 0.01), (0.01, 0.01)])
        report = verify_ac_profile(grid_n=2001, trials=20)
        assert not report.passed
        assert report.max_violation > 0.0

    def test_verify_rejects_the_cap(self, monkeypatch):
        """Test a last supremum equal to the cap fails."""
        monkeypatch.setattr("omegapy.analysis.ac_profile",
                            lambda *args, **kwargs: [(0.1, 0.2), (0.01, 0.05)])
        assert not verify_ac_profile(grid_n=2001, trials=20).passed


class TestLipschitz:
    """Test cases for the Lipschitz agreement check."""

    @pytest.mark.parametrize("spec", get_piecewise_linear_specs(), ids=lambda s: s['name'])
    def test_catalogue(self, spec):
        """Test the grid constants of fn and its modulus agree."""
        fn = from_breakpoints(spec['xs'], spec['ys'], name=spec['name'])
        report = lipschitz_check(fn, grid_n=1001)
        assert report.check_name == f"lipschitz_{spec['name']}"
        assert report.passed

    def test_cantor_rejected(self, cantor):
        """Test non-Lipschitz pieces raise."""
        with pytest.raises(PreconditionError):
            lipschitz_check(cantor)

    def test_random(self):
        assert verify_lipschitz(count=4, grid_n=1001).passed


@pytest.mark.slow
def test_run_suite_names(small_config):
    """Test the suite returns uniquely named reports in a fixed order."""
    reports = run_suite(grid_n=small_config.grid_n, samples=small_config.samples,
                        h_grid_n=small_config.h_grid_n,
                        lipschitz_grid_n=small_config.lipschitz_grid_n,
                        ac_trials=small_config.ac_trials)
    names = [r.check_name for r in reports]
    assert len(names) == len(set(names))
    assert names[0] == "endpoints"
    assert "same_modulus" in names and "closed_form" in names and "h_modulus" in names


def test_build_functions_are_shared():
    """Test the builders hand out one object per function."""
    assert build_f() is build_f()
    assert build_g() is build_g()

import numpy as np
import pytest

from stab23 import cohomology as coh
from stab23 import invariants as inv
from stab23 import witt


@pytest.fixture(scope="module")
def sf():
    return coh.C3Table("SF", 4)


@pytest.fixture(scope="module")
def loc():
    return coh.C3Table("SrhoLoc", 4)


def test_h1_c3_sf_vanishes(sf):
    for t in range(0, -25, -2):
        assert sf.h_dim(1, t) == 0, t
        assert sf.h_dim(3, t) == 0, t


def test_sf_transfer_cokernel_is_f9_b_d(sf):
    # F9[b, d] pattern: rank 2 over F3 at (2k, -6j)
    for s in (0, 2, 4):
        for t in range(0, -25, -2):
            got = coh.transfer_cokernel_dim(sf, t) if s == 0 else sf.h_dim(s, t)
            assert got == coh.pattern_dim_unlocalized("SF", max(s, 2), t), (s, t)


def test_h0_c3_sf_degree_zero(sf):
    # constants: W is free of rank 2 over Z3
    assert sf.h_dim(0, 0) == 2


def test_localized_c3_matches_pattern(loc):
    for s in range(1, 5):
        for t in range(-26, 27, 2):
            assert loc.h_dim(s, t) == coh.pattern_dim("C3", s, t), (s, t)


def test_localized_transfer_cokernel(loc):
    # s = 0 line of the pattern: the F9 delta-power lines
    for t in range(-26, 27, 2):
        assert coh.transfer_cokernel_dim(loc, t) == coh.pattern_dim("C3", 0, t), t


def test_specific_bidegrees(loc):
    assert loc.h_dim(1, -2) == 2      # the class a
    assert loc.h_dim(1, -8) == 2      # a*d
    assert loc.h_dim(1, 0) == 0
    assert loc.h_dim(1, 4) == 2       # alpha line over F9
    assert loc.h_dim(2, 12) == 2      # beta line over F9


def test_truncation_stability(loc):
    for (s, t) in [(1, 4), (2, 12), (1, -2), (2, 0)]:
        assert loc.h_dim_truncation_stable(s, t)


def test_cells_are_elementary(loc):
    for t in (-6, 0, 4, 12):
        deg = loc.degree(t)
        assert deg.odd.elementary and deg.even.elementary


@pytest.mark.parametrize("group", ["C6", "C12", "G12", "G24"])
def test_variant_tables_match_patterns(group):
    vt = coh.VariantTable(group, "SrhoLoc", 4)
    for s in range(1, 5):
        for t in range(-14, 29, 2):
            assert vt.h_dim(s, t) == coh.pattern_dim(group, s, t), (group, s, t)


def test_g24_alpha_beta_cells():
    vt = coh.VariantTable("G24", "SrhoLoc", 4)
    assert vt.h_dim(1, 4) == 1        # alpha
    assert vt.h_dim(2, 12) == 1       # beta
    assert vt.h_dim(1, 28) == 1       # Delta*alpha
    assert vt.h_dim(5, 4) == 1        # period-4 reduction


def test_fixed_rank_two_routes_agree():
    for group in ("C3", "C6", "G24"):
        vt = coh.VariantTable(group, "SrhoLoc", 4)
        for t in (-6, 0, 8, 12, 24):
            vt.fixed_rank(t, cross_check=True)


def test_transfer_after_restriction_is_multiplication_by_3(loc):
    for t in (0, -6, 12):
        assert coh.transfer_times_restriction_is_3(loc, t)


def test_c4_c6_kill_alpha_and_beta(loc):
    om = witt.omega(4)
    half = witt.from_int(2, 4).inv()
    c4_num = inv.sigma(2, 4, nvars=2).scale(-(om**2))
    c6_num = inv.epsilon(4, nvars=2).scale(om**3 * half)
    for (s, t) in [(1, 4), (2, 12)]:  # alpha and beta lines
        assert coh.multiplication_kills(loc, s, t, c4_num, 2, 8), (s, t, "c4")
        assert coh.multiplication_kills(loc, s, t, c6_num, 3, 12), (s, t, "c6")


def test_delta_multiplication_is_iso_on_positive_filtration(loc):
    # d-periodicity: multiplication by sigma3 shifts (s, t) -> (s, t - 6)
    one2 = inv.sigma(3, 4, nvars=2)
    # sigma3 * (class at (1, 4)) must NOT die: dims match at (1, -2)
    assert not coh.multiplication_kills(loc, 1, 4, one2, 0, -6)


def test_restriction_chain_dims_are_compatible():
    # invariants of larger groups embed: dims shrink along C3 < C6 < C12
    base = coh.C3Table("SrhoLoc", 4)
    c6 = coh.VariantTable("C6", "SrhoLoc", 4)
    c12 = coh.VariantTable("C12", "SrhoLoc", 4)
    for s in (1, 2):
        for t in range(-8, 17, 2):
            d3 = base.h_dim(s, t)
            d6 = c6.h_dim(s, t)
            d12 = c12.h_dim(s, t)
            assert d12 <= d6 <= d3, (s, t)


def test_c3_action_commutes_with_sigma_multiplication():
    from stab23.invariants import apply_gen, sigma
    from stab23.polys import WPoly

    f = WPoly(2, 4, {(2, 1): witt.omega(4), (0, 1): witt.from_int(7, 4)})
    for i in (2, 3):
        si = sigma(i, 4, nvars=2)
        assert apply_gen("s", si * f) == si * apply_gen("s", f)


def test_precision_unstable_is_detected():
    # a fabricated module would be needed to trip this; instead check the
    # saturation slack guard directly
    from stab23.errors import PrecisionUnstable

    A = np.array([[27]], dtype=np.int64)  # divisor 3^3 exceeds slack 2
    with pytest.raises(PrecisionUnstable):
        coh.saturated_kernel_reduced(A, 4, 2)

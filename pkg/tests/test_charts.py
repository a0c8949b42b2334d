import pytest

from stab23 import charts
from stab23.charts import PosClass


@pytest.fixture(scope="module")
def g24_inf():
    return charts.e_infinity("G24", (-2, 118), s_max=20)


def test_bidegrees_of_named_classes():
    alpha = PosClass(1, 0, 0)
    beta = PosClass(0, 1, 0)
    assert (alpha.s, alpha.t, alpha.stem) == (1, 4, 3)
    assert (beta.s, beta.t, beta.stem) == (2, 12, 10)
    delta4 = PosClass(0, 0, 4)
    assert delta4.t == 24  # Delta


def test_e2_chart_has_expected_cells():
    ch = charts.e2_chart("G24", (-2, 45), s_max=12)
    cells = ch.cells()
    assert ("a", 1) in cells[(1, 4)]
    assert ("b", 1) in cells[(2, 12)]
    assert ch.zero_line[24] >= 1  # Delta on the 0-line
    assert ch.zero_line[2] == 0


def test_e2_chart_empty_window():
    ch = charts.e2_chart("G24", (5, 5), s_max=8)
    assert ch.classes == {} or all(c.stem == 5 for c in ch.classes)


def test_names_follow_convention(g24_inf):
    names = {c.name("G24") for c in g24_inf.classes if 0 <= c.k <= 16}
    assert "a" in names and "D*a" in names
    assert any(n.startswith("b^") for n in names)


def test_einfinity_generator_list(g24_inf):
    assert charts.verify_einf_generator_list(g24_inf)


def test_beta5_dies(g24_inf):
    assert PosClass(0, 5, 0) not in g24_inf.classes
    assert PosClass(0, 5, 12) not in g24_inf.classes
    assert PosClass(0, 4, 0) in g24_inf.classes


def test_unit_choice_invariance():
    e2 = charts.e2_chart("G24", (-2, 40), s_max=12)
    base = charts.run_differentials(e2, (1, 1)).cells()
    for signs in ((1, -1), (-1, 1), (-1, -1)):
        assert charts.run_differentials(e2, signs).cells() == base


def test_total_rank_never_increases():
    e2 = charts.e2_chart("C3", (-2, 40), s_max=12)
    einf = charts.run_differentials(e2)
    assert einf.total_rank() <= e2.total_rank()
    assert charts.d5_d9_are_the_only_pages(einf)


def test_homotopy_vanishing_stems(g24_inf):
    tab = charts.homotopy_table(g24_inf, [25, 26, 27, 1])
    assert tab[25].vanishes
    assert tab[26].vanishes
    assert not tab[27].vanishes
    assert tab[27].classes == [(1, "D*a", 1)]
    assert tab[1].vanishes  # no odd-stem classes here


def test_pi25_vanishes_for_all_groups():
    for g in ("C3", "C6", "C12", "G12", "G24"):
        ch = charts.e_infinity(g, (20, 30), s_max=16)
        assert charts.homotopy_table(ch, [25])[25].vanishes, g
    for g in ("SD16", "Q8"):
        ch = charts.e_infinity(g, (20, 30))
        assert charts.homotopy_table(ch, [25])[25].vanishes, g


def test_pi1_vanishes_for_tame_groups():
    for g in ("SD16", "Q8"):
        ch = charts.e_infinity(g, (0, 4))
        assert charts.homotopy_table(ch, [1])[1].vanishes, g


def test_pi26_vanishes_when_minus_one_present():
    for g in ("C6", "C12", "G12", "G24", "SD16", "Q8"):
        ch = charts.e_infinity(g, (22, 30), s_max=16)
        assert charts.homotopy_table(ch, [26])[26].vanishes, g
    # negative control: C3 does not contain -1 and has pi26 nonzero
    ch = charts.e_infinity("C3", (22, 30), s_max=16)
    assert not charts.homotopy_table(ch, [26])[26].vanishes


def test_pi0_matches_invariant_ring_rank():
    for g in ("C3", "C6", "C12", "G12", "G24", "SD16", "Q8"):
        ch = charts.e_infinity(g, (-1, 5), s_max=8)
        tab = charts.homotopy_table(ch, [0])
        assert tab[0].zero_line_rank == charts.zero_line_rank(g, 0)
        assert tab[0].zero_line_rank >= 1


@pytest.mark.parametrize(
    "group,period",
    [("C3", 18), ("C6", 36), ("C12", 36), ("G12", 72), ("G24", 72), ("SD16", 16), ("Q8", 8)],
)
def test_periodicities(group, period):
    rep = charts.periodicity_check(group)
    assert rep["ok"] and rep["period"] == period


def test_sd16_chart_concentrated_in_filtration_zero():
    ch = charts.e_infinity("SD16", (-1, 33))
    assert ch.classes == {}
    assert ch.zero_line[16] == 1 and ch.zero_line[4] == 1
    assert ch.zero_line[2] == 0


def test_tower_chart_layers_and_vanishing():
    tc = charts.tower_chart((-4, 30))
    assert tc.layers == charts.RESOLUTION_LAYERS
    assert tc.fibers[0] == [("G24", 44)]
    assert tc.reduced_fibers == [[("G24", 45)], [("SD16", 38)], [("SD16", 7)]]
    assert tc.vanishing_inputs["pi25_shifted_48"] == 0
    assert tc.vanishing_inputs["pi26_shifted_48"] == 0
    assert tc.vanishing_inputs["pi27_shifted_48"] == 0  # -21 = 51 mod 72: empty
    assert tc.vanishing_inputs["pi27_G24_is_one_class"] == [(1, "D*a", 1)]


def test_chart_json_round_trip(g24_inf):
    js = g24_inf.to_json()
    assert js["schema"] == charts.SCHEMA_VERSION
    assert any(cell["s"] == 1 and cell["t"] == 4 for cell in js["cells"])


def test_annotations_present(g24_inf):
    assert any("permanent cycle" in a for a in g24_inf.annotations)
    assert any("b^3" in a for a in g24_inf.annotations)


def test_periodicity_rejects_small_window():
    with pytest.raises(ValueError):
        charts.periodicity_check("G24", (0, 30))

from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planemono.exceptions import (
    MissingAmple,
    NonIntegralColumn,
    NotSeparated,
    SearchBoundExceeded,
)
from planemono.germs import corpus, cusp, smooth, xk_yk
from planemono.graph import Decoration, decorate, separate, suggest_ample
from planemono.invariants import lefschetz_numbers
from planemono.page import (
    COHOMOLOGICAL,
    HOMOLOGICAL,
    SpectralPage,
    Contribution,
    action_order,
    assemble_page,
    candidate_differentials,
    cz_index,
    degeneration_feasibility,
    euler_characteristic,
    forbidden_arrows,
)

CORPUS = corpus()


def cusp_with(r1, r2, r3):
    """Cusp decoration with ample datum given by 6 * b_i / m_i."""
    g = cusp()
    dec = decorate(g)
    b = {v: Fraction(r, 6) * dec.mult[v] for v, r in zip(("D1", "D2", "D3"), (r1, r2, r3))}
    return g, dec.with_ample(b)


def separated_page(g, m):
    g, dec = separate(g, decorate(g), m)
    return g, dec, assemble_page(g, dec.with_ample(suggest_ample(g)), m)


def test_cz_examples():
    _, dec = cusp_with(-13, -13, -12)
    assert [cz_index(dec, v, 6) for v in ("D1", "D2", "D3")] == [0, 0, -2]
    assert cz_index(Decoration({"E": 5}, {"E": 4}), "E", 5) == 0   # m = m_i, a_i = m_i - 1
    assert cz_index(decorate(smooth()), "D1", 1) == 2
    dec4 = decorate(xk_yk(4))
    assert cz_index(dec4, "D1", 4) == 2 * 2 - 8
    with pytest.raises(ValueError):
        cz_index(dec, "D3", 4)


def test_first_choice_page():
    g, dec = cusp_with(-13, -13, -12)
    page = assemble_page(g, dec, 6)
    assert page.ranks() == {(-13, 14): 5, (-12, 14): 7, (-12, 15): 1}
    assert {c.vertex: c.rank for c in page.entries[(-13, 14)]} == {"D1": 2, "D2": 3}
    assert page.cz == {"D1": 0, "D2": 0, "D3": -2, "arrow0": 0}


def test_second_choice_columns():
    g, dec = cusp_with(-13, -14, -12)
    page = assemble_page(g, dec, 6)
    assert page.ranks() == {(-14, 15): 3, (-13, 14): 2, (-12, 14): 7, (-12, 15): 1}
    assert [c.vertex for c in page.entries[(-14, 15)]] == ["D2"]
    assert [c.vertex for c in page.entries[(-13, 14)]] == ["D1"]


def test_cusp_m1_page_is_empty():
    g, dec, page = separated_page(cusp(), 1)
    assert page.is_empty()
    # only the strict transform takes part, with zero contribution
    assert set(page.cz) == {"arrow0"}


def test_errors():
    g = cusp()
    dec = decorate(g)
    with pytest.raises(MissingAmple):
        assemble_page(g, dec, 6)
    g2, dec2 = cusp_with(-13, -13, -12)
    with pytest.raises(NotSeparated):
        assemble_page(g2, dec2, 8)
    _, bad = cusp_with(-13, -13, Fraction(-25, 2))
    with pytest.raises(NonIntegralColumn):
        assemble_page(g2, bad, 6)


def test_literal_arrows_do_not_change_the_euler_characteristic():
    g, dec = cusp_with(-13, -13, -12)
    plain = assemble_page(g, dec, 6)
    literal = assemble_page(g, dec, 6, literal_arrows=True)
    assert euler_characteristic(plain) == euler_characteristic(literal)
    assert literal.rank(0, 0) + literal.rank(0, 1) == 2


@pytest.mark.parametrize("label,g", CORPUS)
def test_euler_identity_with_dimension_sign(label, g):
    """The alternating sum of E^1 is (-1)^(n-1) times the Lefschetz number."""
    lam = lefschetz_numbers(g, decorate(g), 12)
    for m in range(1, 13):
        _, _, page = separated_page(g, m)
        assert euler_characteristic(page) == (-1) ** (page.n - 1) * lam[m], m


@pytest.mark.parametrize("label,g", CORPUS)
def test_page_vanishes_below_multiplicity(label, g):
    nu = min(decorate(g).mult.values())
    for m in range(1, nu):
        assert separated_page(g, m)[2].is_empty()
    assert not separated_page(g, nu)[2].is_empty()


@pytest.mark.parametrize("label,g", CORPUS)
@pytest.mark.parametrize("m", [2, 6, 10])
def test_reassembly_on_separated_graph_is_stable(label, g, m):
    g1, dec1 = separate(g, decorate(g), m)
    dec1 = dec1.with_ample(suggest_ample(g1))
    g2, dec2 = separate(g1, dec1, m)
    assert assemble_page(g2, dec2, m) == assemble_page(g1, dec1, m)


@pytest.mark.parametrize("label,g", CORPUS)
def test_grading_is_an_affine_shift(label, g):
    _, _, page = separated_page(g, 12)
    shift = defaultdict(set)
    for (p, q), contribs in page.entries.items():
        for c in contribs:
            shift[c.vertex].add(c.bm_degree - (p + q))
            assert c.bm_degree == page.n - 1 + p + q + page.cz[c.vertex]
    assert all(len(s) == 1 for s in shift.values())


def test_bm_override_for_higher_dimension():
    g, dec = cusp_with(-13, -13, -12)
    override = {"D1": [0, 0, 0, 2], "D2": [0, 0, 0, 3], "D3": [0, 0, 7, 1]}
    page = assemble_page(g, dec, 6, n=3, bm_override=override)
    for (p, q), contribs in page.entries.items():
        for c in contribs:
            assert c.bm_degree == 2 + p + q + page.cz[c.vertex]
    with pytest.raises(ValueError):
        assemble_page(g, dec, 6, n=3)


# -- action and forbidden arrows --------------------------------------------------

def test_action_order_examples():
    _, dec = cusp_with(-13, -14, -12)
    assert action_order(dec, 6) == [["D2"], ["D1"], ["D3"]]
    # first choice: equal columns, the infinitesimal term m/m_i breaks the tie
    _, dec = cusp_with(-13, -13, -12)
    assert action_order(dec, 6) == [["D2"], ["D1"], ["D3"]]
    g = xk_yk(3)
    dec = decorate(g).with_ample({"D1": -1})
    assert action_order(dec, 3) == [["D1"]]


def test_equal_actions_forbid_nothing():
    page = SpectralPage(m=2, entries={(0, 0): [Contribution("A", 2, 1)],
                                      (-1, 0): [Contribution("B", 2, 1)]},
                        action_key={"A": (Fraction(-1), Fraction(1)),
                                    "B": (Fraction(-1), Fraction(1))},
                        columns={"A": 0, "B": -1})
    assert forbidden_arrows(page) == []


def test_first_choice_forbidden():
    g, dec = cusp_with(-13, -13, -12)
    page = assemble_page(g, dec, 6)
    forbidden = forbidden_arrows(page, action_order(dec, 6))
    assert forbidden == [(-13, -12)]
    assert (-12, -13) not in forbidden


def allowed(page, forbidden, max_r=3):
    return {(d.r, d.source[0], d.target[0])
            for r in range(1, max_r + 1)
            for d in candidate_differentials(page, forbidden, r=r)}


def test_second_choice_leaves_the_named_differentials():
    g, dec = cusp_with(-13, -14, -12)
    page = assemble_page(g, dec, 6)
    forbidden = forbidden_arrows(page, action_order(dec, 6))
    assert set(forbidden) == {(-14, -13), (-14, -12), (-13, -12)}
    assert allowed(page, forbidden) == {(1, -12, -13), (2, -12, -14)}
    pattern = degeneration_feasibility(page, {2: 2, 3: 1}, forbidden)
    assert [(d.r, d.source, d.target, d.rank) for d in pattern] == [
        (1, (-12, 14), (-13, 14), 2), (2, (-12, 14), (-14, 15), 3)]


def test_third_choice_swaps_the_tips():
    g, dec = cusp_with(-14, -13, -12)
    page = assemble_page(g, dec, 6)
    assert [c.vertex for c in page.entries[(-14, 15)]] == ["D1"]
    assert [c.vertex for c in page.entries[(-13, 14)]] == ["D2"]
    forbidden = forbidden_arrows(page, action_order(dec, 6))
    assert allowed(page, forbidden) == {(1, -12, -13), (2, -12, -14)}


def test_fourth_choice_degenerates_late():
    g, dec = cusp_with(-15, -13, -12)
    page = assemble_page(g, dec, 6)
    forbidden = forbidden_arrows(page, action_order(dec, 6))
    pattern = degeneration_feasibility(page, {2: 2, 3: 1}, forbidden)
    assert max(d.r for d in pattern) == 3


# -- feasibility ------------------------------------------------------------------

def test_feasibility_examples():
    g, dec = cusp_with(-13, -13, -12)
    page = assemble_page(g, dec, 6)
    forbidden = forbidden_arrows(page, action_order(dec, 6))
    pattern = degeneration_feasibility(page, {2: 2, 3: 1}, forbidden)
    assert [(d.r, d.source, d.target, d.rank) for d in pattern] == [(1, (-12, 14), (-13, 14), 5)]
    assert degeneration_feasibility(page, {0: 1}, forbidden) is None
    assert degeneration_feasibility(SpectralPage(m=1), {}) == []


def test_search_bound():
    entries = {(p, 0): [Contribution(f"V{p}", 2, 1)] for p in range(5)}
    with pytest.raises(SearchBoundExceeded):
        degeneration_feasibility(SpectralPage(m=1, entries=entries), {})
    entries = {(0, 0): [Contribution("V", 2, 65)]}
    with pytest.raises(SearchBoundExceeded):
        degeneration_feasibility(SpectralPage(m=1, entries=entries), {})


def replay(ranks, pattern, bidegree):
    """Apply a differential pattern page by page and return the limit by total degree."""
    cur = dict(ranks)
    for r in sorted({d.r for d in pattern}):
        used = defaultdict(int)
        for d in (d for d in pattern if d.r == r):
            dp, dq, shift = bidegree
            assert d.target == (d.source[0] + dp * r, d.source[1] + dq * r + shift)
            used[d.source] += d.rank
            used[d.target] += d.rank
        for pq, k in used.items():
            assert k <= cur.get(pq, 0)
        for pq, k in used.items():
            cur[pq] -= k
    out = defaultdict(int)
    for (p, q), x in cur.items():
        if x:
            out[p + q] += x
    return dict(out)


pages = st.dictionaries(st.tuples(st.integers(-3, 0), st.integers(0, 3)), st.integers(1, 3),
                        min_size=1, max_size=6)


@settings(max_examples=150, deadline=None)
@given(pages, st.sampled_from([HOMOLOGICAL, COHOMOLOGICAL]), st.randoms(use_true_random=False))
def test_feasibility_finds_a_consistent_pattern(ranks, bidegree, rnd):
    page = SpectralPage(m=1, entries={pq: [Contribution("V", 0, x)] for pq, x in ranks.items()})
    # build a reachable target by applying random differentials by hand
    cur = dict(ranks)
    for r in range(1, 4):
        for (p, q) in sorted(cur):
            dp, dq, shift = bidegree
            tgt = (p + dp * r, q + dq * r + shift)
            if cur[(p, q)] and cur.get(tgt):
                k = rnd.randint(0, min(cur[(p, q)], cur[tgt]))
                cur[(p, q)] -= k
                cur[tgt] -= k
    target = defaultdict(int)
    for (p, q), x in cur.items():
        if x:
            target[p + q] += x
    pattern = degeneration_feasibility(page, dict(target), bidegree=bidegree)
    assert pattern is not None
    assert replay(ranks, pattern, bidegree) == dict(target)
    # a target with the wrong Euler characteristic is never reachable
    bad = dict(target)
    bad[0] = bad.get(0, 0) + 1
    assert degeneration_feasibility(page, bad, bidegree=bidegree) is None

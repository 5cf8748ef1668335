"""Tests for the cobar/Cotor engine on small windows.

The Cotor-dimension oracle below enumerates the additive monomial basis of
F2[h10,h11,y74,y128]/(h10h11, h11^3, h11y74, y74^2+h10^2y128) directly by
exponent search with rewriting, independently of the package's
ring_chart_names enumeration.  The big-window chart and the heavy cone
computations live in the acceptance suite.
"""

import pytest

from f2alg.cobar import (
    CotorClass,
    WindowError,
    build_cobar,
    build_cone,
    chart_rows,
    chart_tsv,
    induced_map,
    ring_chart_names,
)
from f2alg.hopf import build_a1_star, build_cgl_to_a1_map, build_delta_cgl


@pytest.fixture(scope="module")
def a1():
    return build_a1_star()


@pytest.fixture(scope="module")
def cx(a1):
    return build_cobar(a1)


@pytest.fixture(scope="module")
def cone(cx):
    return build_cone(cx, cx.unique_class(1, 0, "h10"))


# ---------------------------------------------------------------- oracle

def oracle_cotor_dim(g, d):
    """Count reduced monomials h10^a h11^b y74^c y128^k at (g, d):
    b <= 2, c <= 1, a*b = 0, b*c = 0 after rewriting y74^2 -> h10^2 y128."""
    count = 0
    for k in range(0, d // 8 + 1):
        for c in (0, 1):
            for b in (0, 1, 2):
                if b and c:
                    continue
                rest_g = g - 12 * k - 7 * c - 2 * b
                rest_d = d - 8 * k - 4 * c - b
                a = rest_g
                if a < 0 or rest_d != 0:
                    continue
                if a and b:
                    continue
                count += 1
    return count


# ---------------------------------------------------------------- chains

def test_word_basis_3_1(cx):
    assert sorted(cx.word_label(w) for w in cx.words(3, 1)) == ["[x1^3]", "[x2]"]


def test_word_basis_0_0(cx):
    assert cx.words(0, 0) == [()]
    assert cx.boundary_bits(0, 0, 0) == 0


def test_differential_of_x2(cx, a1):
    lid = cx._letter_index[(3, a1.index(3, "x2"))]
    i = cx.word_index(3, 1)[(lid,)]
    img = cx.boundary_bits(3, 1, i)
    assert [cx.word_label(w) for w in cx.chain_words(3, 2, img)] == ["[x1^2|x1]"]


def test_primitive_letter_closed(cx, a1):
    lid = cx._letter_index[(1, 0)]
    i = cx.word_index(1, 1)[(lid,)]
    assert cx.boundary_bits(1, 1, i) == 0


def test_d_squared_zero_window(cx):
    for g in range(0, 9):
        for s in range(0, g + 1):
            for i in range(cx.chain_dim(g, s)):
                v = cx.boundary_bits(g, s, i)
                assert cx.apply_boundary(g, s + 1, v) == 0


def test_window_errors(cx):
    with pytest.raises(WindowError):
        cx.boundary_matrix(27, 3)
    with pytest.raises(WindowError):
        build_cobar(build_delta_cgl(), g_max=6)


# ---------------------------------------------------------------- cotor dims

def test_cotor_dim_examples(cx):
    assert cx.homology_dim(0, 0) == 1
    assert cx.homology_dim(7, 4) == 1
    assert cx.homology_dim(3, 1) == 0
    assert cx.homology_dim(5, 2) == 0


def test_cotor_chart_small_window_matches_oracle(cx):
    for g in range(0, 11):
        for d in range(0, 9):
            assert cx.homology_dim(g, d) == oracle_cotor_dim(g, d), (g, d)


def test_ring_chart_names_counts_match_oracle():
    names = ring_chart_names(17, 10)
    for g in range(0, 18):
        for d in range(0, 11):
            assert len(names.get((g, d), [])) == oracle_cotor_dim(g, d), (g, d)


def test_representatives_are_cycles_off_boundaries(cx):
    for g in range(0, 9):
        for d in range(0, 7):
            for c in cx.cotor_basis(g, d):
                assert cx.class_nonzero(g, d, c.chain)
                assert cx.coords(g, d, c.chain) == 1 << c.index


# ---------------------------------------------------------------- products

@pytest.fixture(scope="module")
def named(cx):
    return {
        "h10": cx.unique_class(1, 0, "h10"),
        "h11": cx.unique_class(2, 1, "h11"),
        "y74": cx.unique_class(7, 4, "y74"),
        "y128": cx.unique_class(12, 8, "y128"),
    }


def test_relation_h10_h11(cx, named):
    assert cx.cotor_product(named["h10"], named["h11"]).chain == 0


def test_relation_h11_cubed(cx, named):
    h11sq = cx.cotor_product(named["h11"], named["h11"])
    assert h11sq.chain != 0
    assert cx.cotor_product(h11sq, named["h11"]).chain == 0


def test_relation_h11_y74(cx, named):
    assert cx.cotor_product(named["h11"], named["y74"]).chain == 0


def test_relation_y74_squared(cx, named):
    lhs = cx.product_chain(named["y74"], named["y74"])
    h10sq = cx.cotor_product(named["h10"], named["h10"])
    rhs = cx.product_chain(h10sq, named["y128"])
    assert cx.classes_agree(14, 8, lhs, rhs)
    assert not cx.is_boundary(14, 8, lhs)


def test_product_with_unit(cx, named):
    one = cx.unique_class(0, 0)
    p = cx.cotor_product(one, named["y74"])
    assert cx.classes_agree(7, 4, p.chain, named["y74"].chain)


def test_periodicity_small_gradings(cx, named):
    for g in range(0, 3):
        for d in range(0, 5):
            src = cx.cotor_basis(g, d)
            assert len(src) == cx.homology_dim(g + 12, d + 8)
            if src:
                chains = [cx.product_chain(b, named["y128"]) for b in src]
                assert cx.map_rank_mod_boundaries(g + 12, d + 8, chains) == len(src)


# ---------------------------------------------------------------- cone

def test_cone_requires_1_0_cycle(cx, named):
    with pytest.raises(ValueError):
        build_cone(cx, named["h11"])
    with pytest.raises(ValueError):
        build_cone(cx, CotorClass(1, 0, 0))


def test_flash_dims(cone):
    expected = {(0, 0), (2, 1), (3, 2), (4, 2), (5, 3), (7, 4)}
    for g in range(0, 8):
        for d in range(0, 5):
            assert cone.homology_dim(g, d) == (1 if (g, d) in expected else 0), (g, d)


def test_cone_dim_zero_at_1_0(cone):
    assert cone.homology_dim(1, 0) == 0


def test_cone_d_squared_zero_window(cone):
    for g in range(0, 8):
        for s in range(0, g + 1):
            for i in range(cone.chain_dim(g, s)):
                assert cone.apply_boundary(g, s + 1, cone.boundary_bits(g, s, i)) == 0


def test_hidden_extension(cx, cone, named):
    z00 = cone.unique_class(0, 0, "z00")
    z32 = cone.unique_class(3, 2, "z32")
    g1, d1, c1 = cone.module_action(named["h10"], 3, 2, z32.chain)
    h11sq = cx.cotor_product(named["h11"], named["h11"])
    g2, d2, c2 = cone.module_action(h11sq, 0, 0, z00.chain)
    assert (g1, d1) == (g2, d2) == (4, 2)
    assert cone.class_nonzero(4, 2, c1)
    assert cone.classes_agree(4, 2, c1, c2)


def test_flash_height_three(cx, cone, named):
    z00 = cone.unique_class(0, 0)
    h11sq = cx.cotor_product(named["h11"], named["h11"])
    h11cu_chain = cx.product_chain(h11sq, named["h11"])
    cube = CotorClass(6, 3, h11cu_chain)
    g, d, c = cone.module_action(cube, 0, 0, z00.chain)
    assert cone.is_cycle(g, d, c) and cone.is_boundary(g, d, c)


def test_unit_acts_as_identity(cx, cone):
    z00 = cone.unique_class(0, 0)
    g, d, c = cone.module_action(cx.unique_class(0, 0), 0, 0, z00.chain)
    assert (g, d) == (0, 0) and cone.classes_agree(0, 0, c, z00.chain)


def test_long_exact_sequence_dimension_count(cx, cone, named):
    """dim Hcone(g,d) = dim H(g,d) - rank(z mult from (g-1,d))
    + dim ker(z mult from (g-1,d-1))."""
    z = named["h10"]

    def z_rank(g, d):
        src = cx.cotor_basis(g, d)
        if not src:
            return 0
        chains = [cx.product_chain(b, z) for b in src]
        return cx.map_rank_mod_boundaries(g + 1, d, chains)

    for g in range(0, 7):
        for d in range(0, 5):
            lhs = cone.homology_dim(g, d)
            rk_in = z_rank(g - 1, d) if g >= 1 else 0
            ker_below = (
                cx.homology_dim(g - 1, d - 1) - z_rank(g - 1, d - 1)
                if g >= 1 and d >= 1
                else 0
            )
            assert lhs == cx.homology_dim(g, d) - rk_in + ker_below, (g, d)


# ---------------------------------------------------------------- induced maps

def test_identity_induces_identity(cx, a1):
    from f2alg.hopf import CoalgebraMap

    images = {
        (g, i): 1 << i for g in range(a1.max_grading + 1) for i in range(a1.dim(g))
    }
    f = CoalgebraMap(a1, a1, images)
    m = induced_map(f, cx, cx)
    for g in range(0, 6):
        for d in range(0, 4):
            mat = m.on_cotor(g, d)
            assert mat.data == [1 << i for i in range(mat.rows)]


def test_comparison_map_hits_h10_and_h11(cx, a1):
    cgl = build_delta_cgl()
    src = build_cobar(cgl, g_max=5)
    f = build_cgl_to_a1_map(cgl, a1)
    m = induced_map(f, src, cx)
    gen = src.unique_class(1, 0)
    img = m.map_chain(1, 1, gen.chain)
    assert cx.classes_agree(1, 0, img, cx.unique_class(1, 0).chain)
    assert cx.class_nonzero(1, 0, img)
    (c21,) = src.cotor_basis(2, 1)
    img2 = m.map_chain(2, 1, c21.chain)
    assert cx.classes_agree(2, 1, img2, cx.unique_class(2, 1).chain)
    assert cx.class_nonzero(2, 1, img2)


# ---------------------------------------------------------------- emitters

def test_chart_tsv_shape(cx):
    rows = chart_rows(cx, 3, 2, names=ring_chart_names(3, 2))
    text = chart_tsv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "g\td\tdim\tclass_names"
    assert f"1\t0\t1\th10" in lines
    assert len(lines) == 1 + 4 * 3

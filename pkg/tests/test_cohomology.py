"""Tests for the cohomology tables, spectral pages, and natural-map ranks.

Oracle strategy: the helpers at the top recompute every dimension through
classical rank formulas (dim ker = cols - rank, quotient dim = z - b,
intersections/sums via stacked and concatenated matrices).  They share only
the low-level rank routine with the implementation, which instead works
through canonical subspaces, representative completion, and containment
checks - agreement is a genuine cross-check.

Hand-derived frozen values used below:

* Vertical two-dot string (arrow (0,0)->(0,1)): the vertical map is an
  isomorphism, so Dolbeault and de Rham vanish; the horizontal theory sees
  both dots; Aeppli keeps the bottom dot, Bott-Chern the top one.
* Three-dot staircase (0,1) ->del (1,1) <-delbar (1,0): degree-1 space is
  2-dim, degree-2 is 1-dim, total differential has rank 1, so de Rham is
  1 in degree 1 and 0 in degree 2.
* Six-dim comparison pair: complex A = two lone dots at (1,2), (2,1);
  complex B = a V-shape with sink (2,2) stacked with a wedge with source
  (1,1).  Row reduction by hand gives identical Dolbeault/de Rham tables
  (1 at (1,2), 1 at (2,1); Betti 2 in degree 3) but different Bott-Chern
  tables: B has an extra class at (2,2) where A has none, and Aeppli
  mirrors this at (1,1).
* Iwasawa model: the only non-closed generator satisfies d w3 = -w1^w2,
  so at (1,0) the horizontal kernel is spanned by w1, w2 and nothing is
  divided out: Bott-Chern is 2 there, and by conjugation 2 at (0,1).
"""

import math

import pytest

from bicomplex_lab.bicomplex import Bicomplex, totalize
from bicomplex_lab.cohomology import (
    BIGRADED_THEORIES,
    aeppli,
    all_tables,
    bott_chern,
    conj_dolbeault,
    de_rham,
    dolbeault,
    frolicher_pages,
    natural_maps,
)
from bicomplex_lab.exactla import (
    Matrix,
    image_basis,
    rank,
    scalar,
    subspace_intersect,
)
from bicomplex_lab.models import iwasawa, kodaira_surface, torus


# --------------------------------------------------------------------------
# Rank-formula oracles (written before the implementation under test).
# --------------------------------------------------------------------------

def oracle_betti(k):
    t = totalize(k)
    return {deg: t.dims[deg] - rank(t.differential(deg))
            - rank(t.differential(deg - 1))
            for deg in t.degrees()}


def oracle_dolbeault(k):
    return {(p, q): k.dimension(p, q) - rank(k.delbar_map(p, q))
            - rank(k.delbar_map(p, q - 1))
            for (p, q) in k.support()}


def oracle_conj_dolbeault(k):
    return {(p, q): k.dimension(p, q) - rank(k.del_map(p, q))
            - rank(k.del_map(p - 1, q))
            for (p, q) in k.support()}


def _stacked(a, b):
    return Matrix.from_rows(a.to_rows() + b.to_rows(),
                            rows=a.rows + b.rows, cols=a.cols)


def oracle_bott_chern(k):
    out = {}
    for (p, q) in k.support():
        closed = k.dimension(p, q) - rank(_stacked(k.del_map(p, q),
                                                   k.delbar_map(p, q)))
        exact = rank(k.del_map(p - 1, q) @ k.delbar_map(p - 1, q - 1))
        out[(p, q)] = closed - exact
    return out


def oracle_aeppli(k):
    out = {}
    for (p, q) in k.support():
        closed = k.dimension(p, q) - rank(k.del_map(p, q + 1)
                                          @ k.delbar_map(p, q))
        exact = rank(k.del_map(p - 1, q).hstack(k.delbar_map(p, q - 1)))
        out[(p, q)] = closed - exact
    return out


ORACLES = {
    "dolbeault": oracle_dolbeault,
    "conj_dolbeault": oracle_conj_dolbeault,
    "bott_chern": oracle_bott_chern,
    "aeppli": oracle_aeppli,
}
TABLES = {
    "dolbeault": dolbeault,
    "conj_dolbeault": conj_dolbeault,
    "bott_chern": bott_chern,
    "aeppli": aeppli,
}


# --------------------------------------------------------------------------
# Hand-built complexes.
# --------------------------------------------------------------------------

def build(spaces, del_entries=None, delbar_entries=None, **kw):
    def blocks(entries, dp, dq):
        out = {}
        for (p, q), rows in (entries or {}).items():
            out[(p, q)] = Matrix.from_rows(
                [[scalar(x) for x in row] for row in rows],
                rows=spaces.get((p + dp, q + dq), 0), cols=spaces[(p, q)])
        return out
    return Bicomplex(spaces, blocks(del_entries, 1, 0),
                     blocks(delbar_entries, 0, 1), **kw)


def dot(p, q):
    return build({(p, q): 1})


def vertical_two_dots():
    return build({(0, 0): 1, (0, 1): 1}, delbar_entries={(0, 0): [[1]]})


def horizontal_two_dots():
    return build({(0, 0): 1, (1, 0): 1}, del_entries={(0, 0): [[1]]})


def staircase_three_dots():
    return build({(0, 1): 1, (1, 1): 1, (1, 0): 1},
                 del_entries={(0, 1): [[1]]},
                 delbar_entries={(1, 0): [[1]]})


def square_complex():
    return build({(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1},
                 del_entries={(0, 0): [[1]], (0, 1): [[-1]]},
                 delbar_entries={(0, 0): [[1]], (1, 0): [[1]]})


def diagram_a():
    return build({(1, 2): 1, (2, 1): 1})


def diagram_b():
    # Basis order per bidegree: V-shape copy first, wedge copy second.
    return build({(1, 1): 1, (1, 2): 2, (2, 1): 2, (2, 2): 1},
                 del_entries={(1, 2): [[1, 0]], (1, 1): [[0], [1]]},
                 delbar_entries={(2, 1): [[1, 0]], (1, 1): [[0], [1]]})


def nonzero(dims):
    return {key: d for key, d in dims.items() if d}


EXAMPLES = [dot(1, 2), vertical_two_dots(), horizontal_two_dots(),
            staircase_three_dots(), square_complex(), diagram_a(),
            diagram_b(), torus(2), iwasawa(), kodaira_surface()]


# --------------------------------------------------------------------------
# Implementation vs oracle, on everything.
# --------------------------------------------------------------------------

class TestAgainstOracles:
    @pytest.mark.parametrize("theory", sorted(ORACLES))
    def test_bigraded_dims_match_rank_formulas(self, theory):
        for k in EXAMPLES:
            assert TABLES[theory](k).dims == ORACLES[theory](k), k.label

    def test_de_rham_dims_match_rank_formulas(self):
        for k in EXAMPLES:
            assert de_rham(k).dims == oracle_betti(k), k.label

    def test_euler_characteristic(self):
        for k in EXAMPLES:
            total = sum((-1) ** (p + q) * k.dimension(p, q)
                        for (p, q) in k.support())
            betti = de_rham(k).dims
            assert sum((-1) ** deg * d for deg, d in betti.items()) == total


class TestRepresentatives:
    @pytest.mark.parametrize("theory", sorted(ORACLES))
    def test_representatives_are_cocycles_spanning_the_quotient(self, theory):
        for k in EXAMPLES:
            table = TABLES[theory](k)
            for (p, q), reps in table.representatives.items():
                assert reps.dim == table.dims[(p, q)]
                mat = reps.basis
                if theory == "dolbeault":
                    assert (k.delbar_map(p, q) @ mat).is_zero()
                elif theory == "conj_dolbeault":
                    assert (k.del_map(p, q) @ mat).is_zero()
                elif theory == "bott_chern":
                    assert (k.del_map(p, q) @ mat).is_zero()
                    assert (k.delbar_map(p, q) @ mat).is_zero()
                else:
                    composite = k.del_map(p, q + 1) @ k.delbar_map(p, q)
                    assert (composite @ mat).is_zero()

    def test_de_rham_representatives_are_closed(self):
        for k in EXAMPLES:
            t = totalize(k)
            table = de_rham(k)
            for deg, reps in table.representatives.items():
                assert reps.dim == table.dims[deg]
                assert (t.differential(deg) @ reps.basis).is_zero()

    def test_representatives_meet_boundaries_trivially(self):
        k = iwasawa()
        table = bott_chern(k)
        for (p, q), reps in table.representatives.items():
            exact = image_basis(k.del_map(p - 1, q)
                                @ k.delbar_map(p - 1, q - 1))
            assert subspace_intersect(reps, exact).dim == 0


# --------------------------------------------------------------------------
# Frozen values.
# --------------------------------------------------------------------------

class TestSmallComplexes:
    def test_dot_has_one_class_everywhere(self):
        k = dot(1, 2)
        for theory in BIGRADED_THEORIES:
            assert TABLES[theory](k).dims == {(1, 2): 1}
        assert de_rham(k).dims == {3: 1}

    def test_vertical_two_dots(self):
        k = vertical_two_dots()
        assert nonzero(dolbeault(k).dims) == {}
        assert conj_dolbeault(k).dims == {(0, 0): 1, (0, 1): 1}
        assert aeppli(k).dims == {(0, 0): 1, (0, 1): 0}
        assert bott_chern(k).dims == {(0, 0): 0, (0, 1): 1}
        assert nonzero(de_rham(k).dims) == {}

    def test_staircase_de_rham_sits_in_lower_degree(self):
        assert de_rham(staircase_three_dots()).dims == {1: 1, 2: 0}

    def test_square_has_no_cohomology_at_all(self):
        k = square_complex()
        for theory in BIGRADED_THEORIES:
            assert nonzero(TABLES[theory](k).dims) == {}
        assert nonzero(de_rham(k).dims) == {}

    def test_comparison_pair_agrees_except_bott_chern_aeppli(self):
        a, b = diagram_a(), diagram_b()
        assert nonzero(dolbeault(a).dims) == nonzero(dolbeault(b).dims) \
            == {(1, 2): 1, (2, 1): 1}
        assert nonzero(conj_dolbeault(a).dims) \
            == nonzero(conj_dolbeault(b).dims)
        assert nonzero(de_rham(a).dims) == nonzero(de_rham(b).dims) \
            == {3: 2}
        assert bott_chern(b).dims[(2, 2)] == 1
        assert bott_chern(a).dims.get((2, 2), 0) == 0
        assert nonzero(bott_chern(b).dims) \
            == {(1, 2): 1, (2, 1): 1, (2, 2): 1}
        assert nonzero(aeppli(b).dims) == {(1, 1): 1, (1, 2): 1, (2, 1): 1}


class TestStructureModels:
    def test_torus_tables_are_binomial(self):
        n = 2
        k = torus(n)
        expected = {(p, q): math.comb(n, p) * math.comb(n, q)
                    for p in range(n + 1) for q in range(n + 1)}
        for theory in BIGRADED_THEORIES:
            assert TABLES[theory](k).dims == expected
        assert de_rham(k).dims == {deg: math.comb(2 * n, deg)
                                   for deg in range(2 * n + 1)}

    def test_iwasawa_dolbeault_corner_values(self):
        dims = dolbeault(iwasawa()).dims
        assert dims[(1, 0)] == 3
        assert dims[(0, 1)] == 2
        assert dims[(1, 0)] + dims[(0, 1)] == 5

    def test_iwasawa_bott_chern_degree_one(self):
        dims = bott_chern(iwasawa()).dims
        assert dims[(1, 0)] == 2 and dims[(0, 1)] == 2

    def test_iwasawa_aeppli_degree_one(self):
        dims = aeppli(iwasawa()).dims
        assert dims[(1, 0)] == 3 and dims[(0, 1)] == 3

    def test_iwasawa_betti_vector(self):
        betti = de_rham(iwasawa()).dims
        assert [betti[deg] for deg in range(7)] == [1, 4, 8, 10, 8, 4, 1]

    def test_kodaira_betti_vector(self):
        betti = de_rham(kodaira_surface()).dims
        assert [betti[deg] for deg in range(5)] == [1, 3, 4, 3, 1]

    @pytest.mark.parametrize("preset", [iwasawa, kodaira_surface])
    def test_serre_type_symmetry(self, preset):
        k = preset()
        n = k.n
        dims = dolbeault(k).dims
        assert all(dims[(p, q)] == dims[(n - p, n - q)] for (p, q) in dims)
        betti = de_rham(k).dims
        assert all(betti[deg] == betti[2 * n - deg] for deg in betti)

    @pytest.mark.parametrize("preset", [torus(2), iwasawa(),
                                        kodaira_surface()])
    def test_conjugation_symmetry(self, preset):
        dol = dolbeault(preset).dims
        conj = conj_dolbeault(preset).dims
        assert all(dol[(p, q)] == conj[(q, p)] for (p, q) in dol)
        for theory in ("bott_chern", "aeppli"):
            dims = TABLES[theory](preset).dims
            assert all(dims[(p, q)] == dims[(q, p)] for (p, q) in dims)


class TestFrolicherPages:
    def test_torus_stabilizes_immediately(self):
        pages = frolicher_pages(torus(2))
        assert pages.r_stab == 1
        assert pages.pages == {1: dolbeault(torus(2)).dims}
        assert pages.e_infinity == dolbeault(torus(2)).dims

    def test_vertical_two_dots_vanishes_on_page_one(self):
        pages = frolicher_pages(vertical_two_dots())
        assert pages.r_stab == 1
        assert nonzero(pages.e_infinity) == {}

    def test_horizontal_two_dots_needs_page_two(self):
        pages = frolicher_pages(horizontal_two_dots())
        assert pages.pages[1] == {(0, 0): 1, (1, 0): 1}
        assert pages.r_stab == 2
        assert nonzero(pages.pages[2]) == {}
        assert nonzero(pages.e_infinity) == {}

    def test_page_one_is_dolbeault_everywhere(self):
        for k in EXAMPLES:
            assert frolicher_pages(k).pages[1] == dolbeault(k).dims, k.label

    def test_pages_weakly_decrease(self):
        for k in EXAMPLES:
            pages = frolicher_pages(k)
            for r in range(2, pages.r_stab + 1):
                for bid, d in pages.pages[r].items():
                    assert d <= pages.pages[r - 1][bid]

    def test_limit_refines_de_rham(self):
        for k in EXAMPLES:
            limit = frolicher_pages(k).e_infinity
            betti = de_rham(k).dims
            totals = {}
            for (p, q), d in limit.items():
                totals[p + q] = totals.get(p + q, 0) + d
            assert nonzero(totals) == nonzero(betti), k.label

    def test_iwasawa_does_not_degenerate_on_page_one(self):
        pages = frolicher_pages(iwasawa())
        assert pages.r_stab > 1
        page1 = pages.pages[1]
        assert page1[(1, 0)] + page1[(0, 1)] == 5
        limit = pages.e_infinity
        assert sum(d for (p, q), d in limit.items() if p + q == 1) == 4

    def test_r_max_caps_reported_pages_only(self):
        k = iwasawa()
        capped = frolicher_pages(k, r_max=1)
        full = frolicher_pages(k)
        assert set(capped.pages) == {1}
        assert capped.r_stab == full.r_stab
        assert capped.e_infinity == full.e_infinity
        with pytest.raises(ValueError):
            frolicher_pages(k, r_max=0)


class TestNaturalMaps:
    def test_torus_maps_are_bijective(self):
        k = torus(2)
        ranks = natural_maps(k)
        dims = dolbeault(k).dims
        betti = de_rham(k).dims
        assert ranks.bott_chern_to_dolbeault == dims
        assert ranks.bott_chern_to_conj_dolbeault == dims
        assert ranks.bott_chern_to_aeppli == dims
        assert ranks.dolbeault_to_aeppli == dims
        assert ranks.conj_dolbeault_to_aeppli == dims
        assert ranks.bott_chern_to_de_rham == betti
        assert ranks.de_rham_to_aeppli == betti

    def test_square_maps_are_zero(self):
        ranks = natural_maps(square_complex())
        for field in (ranks.bott_chern_to_dolbeault,
                      ranks.bott_chern_to_aeppli,
                      ranks.bott_chern_to_de_rham,
                      ranks.de_rham_to_aeppli):
            assert nonzero(field) == {}

    def test_dot_maps_have_rank_one(self):
        ranks = natural_maps(dot(1, 2))
        assert ranks.bott_chern_to_dolbeault == {(1, 2): 1}
        assert ranks.bott_chern_to_aeppli == {(1, 2): 1}
        assert ranks.bott_chern_to_de_rham == {3: 1}
        assert ranks.de_rham_to_aeppli == {3: 1}

    def test_comparison_complex_loses_injectivity_at_top(self):
        ranks = natural_maps(diagram_b())
        assert ranks.bott_chern_to_aeppli[(2, 2)] == 0
        assert bott_chern(diagram_b()).dims[(2, 2)] == 1

    def test_iwasawa_fails_injectivity_somewhere(self):
        k = iwasawa()
        ranks = natural_maps(k)
        dims = bott_chern(k).dims
        assert any(ranks.bott_chern_to_aeppli[bid] < dims[bid]
                   for bid in dims)

    def test_ranks_are_bounded_by_both_sides(self):
        for k in EXAMPLES:
            ranks = natural_maps(k)
            bc = bott_chern(k).dims
            dol = dolbeault(k).dims
            aep = aeppli(k).dims
            for bid in bc:
                assert ranks.bott_chern_to_dolbeault[bid] \
                    <= min(bc[bid], dol[bid])
                assert ranks.bott_chern_to_aeppli[bid] \
                    <= min(bc[bid], aep[bid])
                assert ranks.dolbeault_to_aeppli[bid] \
                    <= min(dol[bid], aep[bid])


class TestAllTables:
    def test_bundle_matches_individual_calls(self):
        k = kodaira_surface()
        bundle = all_tables(k)
        assert bundle.dolbeault.dims == dolbeault(k).dims
        assert bundle.conj_dolbeault.dims == conj_dolbeault(k).dims
        assert bundle.bott_chern.dims == bott_chern(k).dims
        assert bundle.aeppli.dims == aeppli(k).dims
        assert bundle.de_rham.dims == de_rham(k).dims
        assert bundle.frolicher.e_infinity \
            == frolicher_pages(k).e_infinity
        assert bundle.natural_ranks == natural_maps(k)

    def test_totals_helper(self):
        k = kodaira_surface()
        table = dolbeault(k)
        totals = table.totals()
        assert totals[1] == table.dims[(1, 0)] + table.dims[(0, 1)]
        assert de_rham(k).totals() == de_rham(k).dims

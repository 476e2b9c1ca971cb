import itertools

import pytest

from openpoint.enumeration import canonical_form
from openpoint.game import solve_game
from openpoint.invariants import pi_weight
from openpoint.products import (
    FanStatus,
    SufficientConditionResult,
    fan_tightness_check,
    minimal_open_boxes,
    minimal_opens_via_preorder,
    product,
    sufficient_condition_check,
)
from openpoint.space import TooLarge, minimal_opens

from .conftest import make_discrete, make_indiscrete, make_sierpinski


class TestProduct:
    def test_sierpinski_square(self):
        s = make_sierpinski()
        prod = product([s, s])
        assert prod.space.n == 4
        assert pi_weight(prod.space) == 1
        assert solve_game(prod.space).gd == 1

    def test_discrete_times_sierpinski(self):
        prod = product([make_discrete(2), make_sierpinski()])
        assert pi_weight(prod.space) == 2
        assert minimal_opens(prod.space) == minimal_open_boxes(prod)

    def test_times_point_is_homeomorphic(self):
        for make in (make_sierpinski, lambda: make_discrete(3), lambda: make_indiscrete(2)):
            space = make()
            prod = product([space, make_discrete(1)])
            assert canonical_form(prod.space) == canonical_form(space)

    def test_point_count_is_the_product(self):
        prod = product([make_discrete(3), make_indiscrete(2), make_sierpinski()])
        assert prod.space.n == 12

    def test_too_many_points(self):
        factors = [make_indiscrete(16)] * 4  # 65536 points
        with pytest.raises(TooLarge):
            product(factors)

    def test_too_many_opens(self):
        factors = [make_discrete(5)] * 4  # 625 points, 2^625 up-sets
        with pytest.raises(TooLarge):
            product(factors)

    def test_projection_masks(self):
        s = make_sierpinski()
        prod = product([make_discrete(2), s])
        box = prod.box_mask([0b01, 0b10])
        assert prod.proj_mask(box, 0) == 0b01
        assert prod.proj_mask(box, 1) == 0b10

    def test_opens_are_all_box_unions(self):
        s = make_sierpinski()
        prod = product([s, s])
        boxes = [
            prod.box_mask([u, v])
            for u in s.opens if u
            for v in s.opens if v
        ]
        unions = {0}
        frontier = [0]
        while frontier:
            cur = frontier.pop()
            for b in boxes:
                new = cur | b
                if new not in unions:
                    unions.add(new)
                    frontier.append(new)
        assert sorted(unions) == list(prod.space.opens)


class TestPiMultiplicativity:
    def test_all_pairs_of_small_representatives(self, small_spaces):
        for x, y in itertools.product(small_spaces, repeat=2):
            prod = product([x, y])
            mins = minimal_opens(prod.space)
            assert mins == minimal_open_boxes(prod)
            assert mins == minimal_opens_via_preorder([x, y])
            assert len(mins) == pi_weight(x) * pi_weight(y)

    def test_all_triples_via_preorder_route(self, small_spaces):
        # too many opens to materialize for every triple; the preorder route
        # needs only the minimal neighborhoods
        for triple in itertools.product(small_spaces, repeat=3):
            mins = minimal_opens_via_preorder(triple)
            expect = 1
            for f in triple:
                expect *= pi_weight(f)
            assert len(mins) == expect

    def test_triple_boxes_agree_with_preorder_route(self, small_spaces):
        checked = 0
        for triple in itertools.product(small_spaces[:6], repeat=3):
            if triple[0].n * triple[1].n * triple[2].n > 12:
                continue
            try:
                prod = product(list(triple))
            except TooLarge:
                continue
            assert minimal_opens(prod.space) == minimal_opens_via_preorder(triple)
            checked += 1
        assert checked >= 50


class TestGdMultiplicativity:
    def test_pairs_of_small_representatives(self, small_spaces):
        for x, y in itertools.product(small_spaces, repeat=2):
            prod = product([x, y])
            assert solve_game(prod.space).gd == solve_game(x).gd * solve_game(y).gd

    def test_triples_where_solvable(self, small_spaces):
        checked = 0
        for triple in itertools.product(small_spaces, repeat=3):
            if triple[0].n * triple[1].n * triple[2].n > 12:
                continue
            try:
                prod = product(list(triple))
            except TooLarge:
                continue
            expect = 1
            for f in triple:
                expect *= solve_game(f).gd
            assert solve_game(prod.space).gd == expect
            checked += 1
        assert checked >= 200


class TestSufficientCondition:
    def test_sierpinski_pair(self):
        s = make_sierpinski()
        res = sufficient_condition_check([s, s], 2)
        assert res and res.designated == ()

    def test_discrete3_designated(self):
        res = sufficient_condition_check([make_discrete(3), make_sierpinski()], 2)
        assert res and res.designated == (0,)

    def test_single_point(self):
        res = sufficient_condition_check([make_discrete(1)], 1)
        assert bool(res) is True

    def test_too_many_factors_fail(self):
        s = make_sierpinski()
        res = sufficient_condition_check([s, s, s], 2)
        assert not res and not res.sigma_ok

    def test_result_is_boolean_like(self):
        assert isinstance(sufficient_condition_check([make_sierpinski()], 1),
                          SufficientConditionResult)


class TestFanTightness:
    def test_sierpinski_pair_holds(self):
        s = make_sierpinski()
        verdict = fan_tightness_check([s, s], 2, "boxes")
        assert verdict.status is FanStatus.HOLDS
        # a witness for every (index set, non-empty open) cell
        assert len(verdict.witness) == 2 + 2 + 5

    def test_indiscrete_singleton_holds(self):
        verdict = fan_tightness_check([make_indiscrete(2)], 1)
        assert verdict.status is FanStatus.HOLDS

    def test_discrete_pair_holds_with_kappa_four(self):
        d = make_discrete(2)
        verdict = fan_tightness_check([d, d], 4, "boxes")
        assert verdict.status is FanStatus.HOLDS

    def test_all_opens_pool_agrees_on_small_pairs(self, small_spaces):
        for x in small_spaces[:5]:
            for y in small_spaces[:5]:
                boxes = fan_tightness_check([x, y], 3, "boxes")
                allo = fan_tightness_check([x, y], 3, "all")
                assert boxes.holds and allo.holds

    def test_union_reading_holds_on_corpus_sample(self, small_spaces):
        for x in small_spaces[:6]:
            for y in small_spaces[:6]:
                a = fan_tightness_check([x, y], 3, "boxes", reading="a")
                union = fan_tightness_check([x, y], 3, "boxes", reading="union")
                assert a.holds and union.holds

    def test_large_subproduct_falls_back_to_sufficient_condition(self):
        d4 = make_discrete(4)
        verdict = fan_tightness_check([d4, d4], 4, "boxes")
        assert verdict.status is FanStatus.HOLDS_VIA_SUFFICIENT_CONDITION
        assert verdict.unknown_cells

    def test_unknown_when_nothing_applies(self):
        d4 = make_discrete(4)
        verdict = fan_tightness_check([d4, d4], 1, "boxes")
        assert verdict.status is FanStatus.UNKNOWN

    def test_kappa_must_be_positive(self):
        with pytest.raises(ValueError):
            fan_tightness_check([make_sierpinski()], 0)

    def test_points_cap_enforced(self):
        factors = [make_indiscrete(16)] * 3  # 4096 points, over the all-opens cap
        with pytest.raises(TooLarge):
            fan_tightness_check(factors, 2, "all")

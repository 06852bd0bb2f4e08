"""Tests for colex subsets, row placement and the divisibility preflight."""

from itertools import combinations

import pytest

from src.errors import DivisibilityError, InfeasibleRatesError, InvalidParamsError
from src.scheme.params import RatePair, SystemParams
from src.scheme.placement import (
    Block,
    PlacementMap,
    SubsetIndex,
    divisibility_check,
    partition_rows,
    reconstructible,
    redundancy_census,
    server_rows,
)
from src.scheme.rates import check_feasible, enumerate_feasible, load_breakdown
from src.utils.combinatorics import colex_rank, colex_subsets, colex_subsets_of, colex_unrank


def scaled_to_fit(p, pair):
    """Scale m and N by the suggested multipliers."""
    verdict = divisibility_check(p, pair)
    return p.scaled(verdict.m_multiplier, verdict.n_multiplier)


class TestColex:
    def test_order_of_three_subsets(self):
        assert colex_subsets(4, 3) == [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]

    def test_rank_unrank(self):
        for rank, members in enumerate(colex_subsets(7, 3)):
            assert colex_rank(members) == rank
            assert colex_unrank(rank, 3) == members

    def test_arbitrary_ids(self):
        assert colex_subsets_of([5, 2, 9], 2) == [(2, 5), (2, 9), (5, 9)]


class TestPartition:
    def test_example_layout(self, example_params, proposed):
        pm = partition_rows(example_params, proposed)
        assert pm.block_size == 1
        assert len(pm.blocks) == 20
        assert pm.block((1, 2, 3)).rows == range(0, 1)
        assert pm.block((1, 3, 4)).row_start == 2
        assert pm.rows_per_server == 10
        assert all(len(server_rows(pm, k)) == 10 for k in range(1, 7))

    def test_baseline_layout(self, example_params, baseline):
        pm = partition_rows(example_params, baseline)
        assert pm.coded_rows == 30
        assert pm.block_size == 2
        assert pm.rows_per_server == 10

    def test_blocks_partition_rows(self, small_grid):
        for p in small_grid:
            for pair in enumerate_feasible(p):
                pm = partition_rows(scaled_to_fit(p, pair), pair)
                rows = [row for block in pm.blocks for row in block.rows]
                assert rows == list(range(int(pair.r1 * pm.params.m)))
                for k in range(1, p.K + 1):
                    assert len(server_rows(pm, k)) == pm.rows_per_server <= pm.params.storage_rows

    def test_infeasible_rejected(self, example_params):
        with pytest.raises(InfeasibleRatesError):
            partition_rows(example_params, RatePair(l=6, r2=3, q=4))

    def test_server_out_of_range(self, example_params, proposed):
        pm = partition_rows(example_params, proposed)
        with pytest.raises(InvalidParamsError):
            server_rows(pm, 7)

    def test_to_dict(self, example_params, proposed):
        data = partition_rows(example_params, proposed).to_dict()
        assert data['block_size'] == 1
        assert data['blocks'][0] == {'subset': [1, 2, 3], 'row_start': 0, 'row_end': 1}
        assert data['rates'] == {'l': 4, 'r2': 3, 'r1': '1/1'}


class TestDivisibility:
    def test_example_is_clean(self, example_params, proposed, baseline):
        assert divisibility_check(example_params, proposed).ok
        assert divisibility_check(example_params, baseline).ok

    def test_m_multiplier(self, proposed):
        p = SystemParams(K=6, q=4, mu="1/2", m=10, N=12)
        verdict = divisibility_check(p, proposed)
        assert not verdict.ok
        assert verdict.m_multiplier == 2
        assert verdict.n_multiplier == 1
        with pytest.raises(DivisibilityError) as excinfo:
            partition_rows(p, proposed)
        assert "scale m by 2" in str(excinfo.value)

    def test_n_multiplier(self, proposed):
        p = SystemParams(K=6, q=4, mu="1/2", m=20, N=10)
        verdict = divisibility_check(p, proposed)
        assert any(failure.startswith("(iii)") for failure in verdict.failures)
        assert verdict.n_multiplier == 2

    def test_multiplier_clears_every_failure(self, small_grid):
        for p in small_grid:
            for pair in enumerate_feasible(p):
                assert divisibility_check(scaled_to_fit(p, pair), pair).ok, (p, pair)


class TestReconstruction:
    def test_feasible_pairs_survive_any_stragglers(self, small_grid):
        for p in small_grid:
            if p.K > 6:
                continue
            for pair in enumerate_feasible(p):
                pm = partition_rows(scaled_to_fit(p, pair), pair)
                for servers in combinations(range(1, p.K + 1), p.q):
                    assert reconstructible(pm, servers), (p, pair, servers)

    def test_reconstruction_condition_is_tight(self, small_grid):
        # Pairs failing only the reconstruction condition lose A for some straggler set
        for p in small_grid:
            if p.K > 6:
                continue
            for l in range(p.q, p.K + 1):
                for r2 in range(1, p.K + 1):
                    pair = RatePair(l=l, r2=r2, q=p.q)
                    if check_feasible(p, pair).violations != ('12c',):
                        continue
                    subsets = colex_subsets(p.K, r2)
                    blocks = tuple(
                        Block(SubsetIndex(members, rank), rank * l, (rank + 1) * l)
                        for rank, members in enumerate(subsets)
                    )
                    params = p.scaled(p.q * len(subsets), 1)
                    pm = PlacementMap(params, pair, l, blocks)
                    assert not all(
                        reconstructible(pm, servers)
                        for servers in combinations(range(1, p.K + 1), p.q)
                    ), (p, pair)

    def test_wrong_set_size(self, example_params, proposed):
        pm = partition_rows(example_params, proposed)
        with pytest.raises(InvalidParamsError):
            reconstructible(pm, (1, 2, 3))


class TestRedundancyCensus:
    def test_example_census(self, example_params, proposed, example_q):
        pm = partition_rows(example_params, proposed)
        assert redundancy_census(pm, example_q, 1) == {1: 3, 2: 6, 3: 1}

    def test_census_matches_closed_form(self, small_grid):
        for p in small_grid:
            for pair in enumerate_feasible(p):
                scaled = scaled_to_fit(p, pair)
                pm = partition_rows(scaled, pair)
                b = load_breakdown(scaled, pair).b
                servers = tuple(range(p.K - p.q + 1, p.K + 1))
                for k in (servers[0], servers[-1]):
                    census = redundancy_census(pm, servers, k)
                    for j in range(1, pair.r2 + 1):
                        assert census.get(j, 0) == b.get(j, 0) * scaled.m, (p, pair, k, j)

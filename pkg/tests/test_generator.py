"""
生成器与算例测试
"""
import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

import time

import pytest

from solvers import ConfigError, FlowInstance, SolveStatus, max_feasible_flow, run_heuristic, solve_exact
from tools.fixtures import extra_fixtures, fixture, published_fixtures
from tools.generator import GenConfig, SupplyMode, generate
from tools.instance_io import write_matrix


# ============== 生成器 ==============
def test_generate_fully_determined_config():
    config = GenConfig(
        node_count=2,
        density=1.0,
        capacity_range=(5, 5),
        cost_range=(1, 1),
        seed=0,
        supply_mode=SupplyMode.FIXED,
        supply=5,
    )
    assert generate(config) == FlowInstance(2, [(1, 2, 5, 1)], 5)


def test_generate_is_deterministic():
    config = GenConfig(node_count=30, seed=7)
    assert write_matrix(generate(config)) == write_matrix(generate(config))
    assert generate(config) != generate(GenConfig(node_count=30, seed=8))


def test_generate_respects_ranges_and_chain():
    config = GenConfig(node_count=40, density=0.5, capacity_range=(2, 4), cost_range=(3, 9), seed=3)
    instance = generate(config)
    pairs = set(instance.arc_map())
    assert all((i, i + 1) in pairs for i in range(1, 40))
    assert all(2 <= arc.capacity <= 4 for arc in instance.arcs)
    assert all(3 <= arc.cost <= 9 for arc in instance.arcs)
    assert instance.supply == max_feasible_flow(instance)


def test_generate_full_density_is_complete():
    instance = generate(GenConfig(node_count=8, density=1.0, seed=1))
    assert len(instance.arcs) == 8 * 7 // 2


def test_generate_connectivity_over_seeds():
    for seed in range(50):
        instance = generate(GenConfig(node_count=12, density=0.05, seed=seed))
        assert max_feasible_flow(instance) >= 1


def test_generate_n50_seed42_reaches_terminal_state():
    """n=50 的运行只要求终止并保持守恒；滞留与否取决于实例"""
    instance = generate(GenConfig(node_count=50, density=0.3, seed=42))
    sol = run_heuristic(instance)
    assert sol.status in (SolveStatus.COMPLETED, SolveStatus.STRANDED)
    assert sol.shipped <= instance.supply


@pytest.mark.parametrize(
    "kwargs",
    [
        {"node_count": 1},
        {"node_count": 5, "density": 0.0},
        {"node_count": 5, "density": 1.5},
        {"node_count": 5, "capacity_range": (0, 3)},
        {"node_count": 5, "cost_range": (4, 3)},
        {"node_count": 5, "seed": -1},
        {"node_count": 5, "supply_mode": SupplyMode.FIXED},
        {"node_count": 5, "supply": 3},
    ],
)
def test_gen_config_rejects_invalid(kwargs):
    with pytest.raises(ConfigError):
        GenConfig(**kwargs)


def test_gen_config_describe():
    text = GenConfig(node_count=50, seed=1).describe()
    assert text == "node_count=50 density=0.3 capacity_range=1:15 cost_range=1:15 seed=1 supply_mode=maxflow"
    fixed = GenConfig(node_count=4, supply_mode=SupplyMode.FIXED, supply=9).describe()
    assert fixed.endswith("supply_mode=fixed supply=9")


@pytest.mark.slow
def test_generate_and_solve_n1000_quickly():
    """默认配置（供给量取最大流量）下生成 n=1000 的实例与启发式求解都要快"""
    started = time.perf_counter()
    instance = generate(GenConfig(node_count=1000, seed=0))
    assert time.perf_counter() - started < 1.0
    assert instance.supply == max_feasible_flow(instance)

    started = time.perf_counter()
    sol = run_heuristic(instance)
    assert time.perf_counter() - started < 5.0
    assert sol.status in (SolveStatus.COMPLETED, SolveStatus.STRANDED)


@pytest.mark.slow
def test_generate_n1000_fixed_supply_quickly():
    config = GenConfig(node_count=1000, seed=0, supply_mode=SupplyMode.FIXED, supply=100)
    started = time.perf_counter()
    instance = generate(config)
    assert time.perf_counter() - started < 1.0
    assert instance.supply == 100


# ============== 算例 ==============
def test_published_fixture_names_and_costs():
    fixtures = published_fixtures()
    assert [f.name for f in fixtures] == [f"example{k}" for k in range(1, 10)]
    assert [f.published_cost for f in fixtures] == [103, 14, 120, 172, 187, 224, 493, 518, 655]
    assert [f.instance.node_count for f in fixtures] == [5, 4, 5, 5, 8, 10, 15, 20, 25]


def test_fixture_lookup():
    assert fixture("example1").published_cost == 103
    assert fixture("example1").instance.supply == 12
    assert fixture("example9").instance.node_count == 25
    assert fixture("adversarial").published_cost is None
    with pytest.raises(KeyError):
        fixture("example10")


def test_table_fixture_supplies_are_max_flow():
    supplies = {f.name: f.instance.supply for f in published_fixtures()[3:]}
    assert supplies == {
        "example4": 38,
        "example5": 54,
        "example6": 54,
        "example7": 100,
        "example8": 135,
        "example9": 145,
    }


def test_example4_completes_at_max_flow():
    sol = run_heuristic(fixture("example4").instance)
    assert sol.status is SolveStatus.COMPLETED
    assert sol.total_cost == 313
    assert solve_exact(fixture("example4").instance).total_cost == 310


def test_extra_fixtures():
    names = [f.name for f in extra_fixtures()]
    assert names == ["adversarial", "stranded"]
    assert len(published_fixtures()) == 9

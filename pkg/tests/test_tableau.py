"""
汇总表测试 - 建表、不变式检查与展示
"""
import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

import itertools

import numpy as np

from solvers import NO_ARC, FlowInstance, build_tableau, check_tableau, format_tableau, replay_trace, run_heuristic
from tools.fixtures import fixture


def example(name):
    return fixture(name).instance


def test_build_example1():
    """第一行容量 (-, 7, 0, 5, 0)，第一列费用 (3, ∞, 6, ∞)，RHS (+12, 0, 0, 0, 0)"""
    tab = build_tableau(example("example1"))
    assert tab.n == 5
    assert tab.cap[0].tolist() == [0, 7, 0, 5, 0]
    column = [tab.unit_cost(1, head) for head in range(2, 6)]
    assert column[0] == 3 and column[2] == 6
    assert column[1] is NO_ARC and column[3] is NO_ARC
    assert tab.rhs.tolist() == [12, 0, 0, 0, 0]
    assert tab.supply == 12
    assert check_tableau(tab, 12) == []


def test_build_single_arc():
    tab = build_tableau(FlowInstance(2, [(1, 2, 5, 1)], 5))
    assert tab.cap.shape == (2, 2)
    assert tab.residual(1, 2) == 5
    assert tab.unit_cost(1, 2) == 1
    assert tab.rhs.tolist() == [5, 0]


def test_build_example2():
    tab = build_tableau(example("example2"))
    assert tab.cap.shape == (4, 4)
    assert tab.rhs.tolist() == [4, 0, 0, 0]
    assert tab.unit_cost(1, 4) is NO_ARC
    assert tab.unit_cost(3, 4) == 1


def test_build_without_arcs():
    tab = build_tableau(FlowInstance(3, [], 1))
    assert not tab.cap.any()
    assert tab.unit_cost(1, 3) is NO_ARC
    assert tab.unit_cost(2, 2) == 0
    assert check_tableau(tab, 1) == []


def test_zero_capacity_arc_is_absent():
    tab = build_tableau(FlowInstance(3, [(1, 2, 0, 4), (2, 3, 1, 1)], 1))
    assert tab.unit_cost(1, 2) is NO_ARC
    assert tab.residual(1, 2) == 0
    assert check_tableau(tab, 1) == []


def test_sign_violation_reported():
    tab = build_tableau(example("example1"))
    tab.rhs[:] = [12, 1, 0, 0, 0]
    violations = check_tableau(tab, 12)
    assert any("sign violation at node 2" in v for v in violations)


def test_conservation_and_capacity_violations():
    tab = build_tableau(example("example1"))
    tab.rhs[0] = 11
    tab.cap[0, 1] = -1
    tab.cap[0, 3] = 9
    violations = check_tableau(tab, 12)
    assert any(v.startswith("conservation violation") for v in violations)
    assert sum(v.startswith("capacity violation") for v in violations) == 2


def test_diagonal_and_marker_violations():
    tab = build_tableau(example("example1"))
    tab.cap[2, 2] = 1
    tab.cost[1, 0] = np.ma.masked
    violations = check_tableau(tab, 12)
    assert any("diagonal violation" in v for v in violations)
    assert any("arc marker violation: pair 1->2" in v for v in violations)


def test_invariants_after_three_dispatches():
    instance = example("example1")
    sol = run_heuristic(instance)
    tab = next(itertools.islice(replay_trace(instance, sol.trace), 2, None))
    assert check_tableau(tab, 12) == []
    assert int(np.abs(tab.rhs).sum()) == 12
    assert tab.rhs.tolist() == [0, -4, 0, -5, -3]


def test_format_tableau_step_table():
    """带发送节点时追加 Cost 与 Sum of costs 行"""
    tab = build_tableau(example("example1"))
    text = format_tableau(tab, sender=1)
    lines = text.splitlines()
    assert "Flow" in lines[0]
    assert "∞" in text
    assert "+12" in text
    cost_row = next(line.strip() for line in lines if line.strip().startswith("Cost"))
    sum_row = next(line.strip() for line in lines if line.strip().startswith("Sum of costs"))
    assert cost_row.split()[1:] == ["3", "∞", "6", "∞"]
    assert sum_row.split()[3:] == ["7", "∞", "10", "∞"]


def test_format_tableau_plain():
    text = format_tableau(build_tableau(example("example2")))
    assert "Sum of costs" not in text
    assert "+4" in text

"""
实例读写测试 - 矩阵格式、DIMACS 格式、发送记录 CSV 与文件读取
"""
import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

import pytest

from solvers import Arc, FlowInstance, FlowSolution, InstanceFormatError, SolveStatus, run_heuristic
from tools.fixtures import EXAMPLE4_MATRIX, fixture, published_fixtures
from tools.instance_io import (
    TRACE_COLUMNS,
    detect_format,
    load_instance,
    parse_dimacs,
    parse_matrix,
    trace_frame,
    write_dimacs,
    write_matrix,
    write_trace,
)


def example(name):
    return fixture(name).instance


# ============== 矩阵格式 ==============
def test_parse_example4_matrix():
    instance = parse_matrix(EXAMPLE4_MATRIX)
    assert instance.node_count == 5
    assert instance.arc_map()[(1, 2)] == Arc(1, 2, 3, 5)
    assert instance.arc_map()[(4, 5)] == Arc(4, 5, 15, 5)
    assert len(instance.arcs) == 10
    # 未给出供给量时取最大流量
    assert instance.supply == 38


def test_parse_trivial_matrix_with_supply():
    instance = parse_matrix("2  0 5  1 0  s 5")
    assert instance == FlowInstance(2, [(1, 2, 5, 1)], 5)


def test_parse_matrix_ignores_layout():
    assert parse_matrix("2\n0\n5\n1\n0\ns\n5\n") == parse_matrix("2 0 5 1 0 s 5")


def test_write_matrix_example1():
    text = write_matrix(example("example1"))
    lines = text.splitlines()
    assert lines[0] == "5"
    assert lines[1] == "0 7 0 5 0"
    assert [row.split()[0] for row in lines[2:6]] == ["3", "inf", "6", "inf"]
    assert lines[-1] == "s 12"
    assert text.endswith("\n")


def test_write_matrix_without_arcs():
    text = write_matrix(FlowInstance(2, [], 1))
    assert text.split() == ["2", "0", "0", "inf", "0", "s", "1"]


def test_matrix_round_trip_on_all_fixtures():
    for item in published_fixtures():
        text = write_matrix(item.instance)
        assert parse_matrix(text) == item.instance
        assert write_matrix(parse_matrix(text)) == text


def test_table_fixtures_have_every_pair():
    for item in published_fixtures()[3:]:
        n = item.instance.node_count
        assert len(item.instance.arcs) == n * (n - 1) // 2


def test_write_matrix_drops_zero_capacity_arc():
    instance = FlowInstance(3, [(1, 2, 0, 4), (2, 3, 1, 1)], 1)
    assert parse_matrix(write_matrix(instance)) == FlowInstance(3, [(2, 3, 1, 1)], 1)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "empty"),
        ("2 0 5 1", "dimension mismatch"),
        ("2 0 5 1 0 0", "dimension mismatch"),
        ("2 0 -5 1 0 s 1", "negative entry"),
        ("2 1 5 1 0 s 1", "nonzero diagonal"),
        ("2 0 5 inf 0 s 1", "no cost"),
        ("2 0 inf 1 0 s 1", "only allowed below the diagonal"),
        ("2 0 x 1 0 s 1", "must be an integer"),
        ("2 0 5 1 0 s", "supply line"),
        ("2 0 5 1 0 s 0", "supply"),
        ("2 0 0 inf 0", "carries no flow"),
        ("1 0", "at least 2"),
    ],
)
def test_parse_matrix_errors(text, fragment):
    with pytest.raises(InstanceFormatError) as info:
        parse_matrix(text)
    assert fragment in str(info.value)


def test_parse_matrix_error_names_line_and_token():
    with pytest.raises(InstanceFormatError) as info:
        parse_matrix("3\n0 1 1\n1 0 1\n1 -2 0\ns 1\n")
    assert info.value.line == 4
    assert info.value.token == "-2"


# ============== DIMACS 格式 ==============
EXAMPLE2_DIMACS = """c Example 2
p min 4 5
n 1 4
n 4 -4
a 1 2 0 4 2
a 1 3 0 2 2
a 2 3 0 2 1
a 2 4 0 3 3
a 3 4 0 5 1
"""


def test_parse_dimacs_example2():
    assert parse_dimacs(EXAMPLE2_DIMACS) == example("example2")


def test_write_dimacs_example2():
    text = write_dimacs(example("example2"))
    assert "p min 4 5" in text.splitlines()
    assert "a 3 4 0 5 1" in text.splitlines()
    assert "n 1 4" in text.splitlines()
    assert "n 4 -4" in text.splitlines()


def test_write_dimacs_without_arcs():
    assert "p min 2 0" in write_dimacs(FlowInstance(2, [], 1)).splitlines()


def test_dimacs_round_trip_on_all_fixtures():
    for item in published_fixtures():
        assert parse_dimacs(write_dimacs(item.instance)) == item.instance


def test_dimacs_keeps_zero_capacity_arc():
    instance = FlowInstance(3, [(1, 2, 0, 4), (2, 3, 1, 1)], 1)
    assert parse_dimacs(write_dimacs(instance)) == instance


def test_parse_dimacs_relabels_topologically():
    """链 1 -> 3 -> 2，源点 1，汇点 2: 重新编号后汇点为 3"""
    text = "p min 3 2\nn 1 5\nn 2 -5\na 1 3 0 5 1\na 3 2 0 5 1\n"
    instance = parse_dimacs(text)
    assert instance == FlowInstance(3, [(1, 2, 5, 1), (2, 3, 5, 1)], 5)


def test_parse_dimacs_relabel_is_stable():
    """源点不是 1、汇点不是 n 时按 (源点, 其余按原编号, 汇点) 的拓扑序编号"""
    text = "p min 4 3\nn 3 2\nn 1 -2\na 3 2 0 2 1\na 3 4 0 2 1\na 2 1 0 2 1\n"
    instance = parse_dimacs(text)
    # 3 -> 1, 2 -> 2, 4 -> 3, 1 -> 4
    assert instance == FlowInstance(4, [(1, 2, 2, 1), (1, 3, 2, 1), (2, 4, 2, 1)], 2)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("p min 2 2\nn 1 1\nn 2 -1\na 1 2 0 1 1\na 1 2 0 2 1\n", "duplicate or self arc"),
        ("p min 2 2\nn 1 1\nn 2 -1\na 1 2 0 1 1\na 2 1 0 1 1\n", "cycle detected"),
        ("p min 3 3\nn 1 1\nn 3 -1\na 1 2 0 1 1\na 2 3 0 1 1\na 3 2 0 1 1\n", "cycle detected"),
        ("p min 3 2\nn 1 1\nn 2 1\nn 3 -2\na 1 3 0 1 1\na 2 3 0 1 1\n", "exactly one source"),
        ("p min 2 1\nn 1 1\nn 2 -1\na 1 2 1 1 1\n", "lower bound"),
        ("p min 2 1\nn 1 2\nn 2 -1\na 1 2 0 1 1\n", "does not balance"),
        ("p min 2 1\nn 1 1\nn 2 -1\na 1 2 0 1\n", "arc line"),
        ("p min 2 2\nn 1 1\nn 2 -1\na 1 2 0 1 1\n", "declares 2 arcs"),
        ("n 1 1\n", "before the problem line"),
        ("c nothing\n", "missing problem line"),
        ("p max 2 1\n", "problem line"),
        ("p min 2 1\nn 1 1\nn 2 -1\nx 1 2\n", "unknown line type"),
        ("p min 2 1\nn 1 1\nn 3 -1\n", "out of range"),
        ("p min 3 2\nn 2 1\nn 3 -1\na 1 2 0 1 1\na 2 3 0 1 1\n", "has incoming arcs"),
    ],
)
def test_parse_dimacs_errors(text, fragment):
    with pytest.raises(InstanceFormatError) as info:
        parse_dimacs(text)
    assert fragment in str(info.value)


def test_parse_dimacs_error_names_line():
    with pytest.raises(InstanceFormatError) as info:
        parse_dimacs("c header\np min 2 1\nn 1 1\nn 2 -1\na 1 2 0 -1 1\n")
    assert info.value.line == 5
    assert "negative capacity" in str(info.value)


# ============== 发送记录 ==============
def test_write_trace_example1():
    text = write_trace(run_heuristic(example("example1")))
    lines = text.split("\n")
    assert lines[0] == ",".join(TRACE_COLUMNS)
    assert lines[1] == "1,1,2,7,3,21,21"
    assert lines[6].endswith(",103")
    assert lines[7] == ""
    assert "\r" not in text


def test_trace_frame_example2_prefix_sums():
    frame = trace_frame(run_heuristic(example("example2")))
    assert frame["cumulative_cost"].tolist() == [4, 8, 10, 14]
    assert (frame["cumulative_cost"] == frame["leg_cost"].cumsum()).all()


def test_write_trace_empty():
    sol = FlowSolution(3, {}, 0, SolveStatus.STRANDED)
    assert write_trace(sol) == ",".join(TRACE_COLUMNS) + "\n"


# ============== 文件读取 ==============
def test_detect_format():
    assert detect_format("a/b.dimacs") == "dimacs"
    assert detect_format("net.MIN") == "dimacs"
    assert detect_format("x.matrix") == "matrix"
    assert detect_format("x.txt") == "matrix"
    assert detect_format("noext") == "matrix"


def test_load_instance_with_override(tmp_path):
    path = tmp_path / "example2.dimacs"
    path.write_text(EXAMPLE2_DIMACS, encoding="utf-8")
    assert load_instance(str(path)) == example("example2")
    assert load_instance(str(path), supply=6).supply == 6

    matrix = tmp_path / "example1.txt"
    matrix.write_text(write_matrix(example("example1")), encoding="utf-8")
    assert load_instance(str(matrix)) == example("example1")
    assert load_instance(str(matrix), fmt="matrix") == example("example1")


def test_load_instance_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_instance(str(tmp_path / "missing.matrix"))

"""
实例读写工具 - 矩阵格式、DIMACS 格式与发送记录 CSV

矩阵格式（汇总表的文本形式）:
    第一个 token 为 n，随后按行优先写 n×n 个 token：
    (i, j), i < j 为弧 i→j 的容量；(i, j), i > j 为弧 j→i 的单位费用（"inf" 表示无弧）；
    对角线为 0；最后可选一行 "s <供给量>"。token 之间可用任意空白分隔。

DIMACS 最小费用流格式:
    c <注释>
    p min <节点数> <弧数>
    n <节点> <流量>            正数为源点，负数为汇点
    a <起点> <终点> <下界> <容量> <费用>
"""
import logging
import os
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx
import pandas as pd

from solvers.exceptions import InstanceFormatError, InvalidInstanceError
from solvers.models import Arc, FlowInstance, FlowSolution
from solvers.oracle import _max_flow_value

logger = logging.getLogger(__name__)

INF_TOKEN = "inf"
TRACE_COLUMNS = ["step", "sender", "receiver", "quantity", "unit_cost", "leg_cost", "cumulative_cost"]

DIMACS_EXTENSIONS = {".dimacs", ".min", ".inp"}
MATRIX_EXTENSIONS = {".matrix", ".txt", ".mat"}


def _tokens(text: str) -> Iterator[Tuple[int, str]]:
    """逐个产出 (行号, token)"""
    for line_no, line in enumerate(text.splitlines(), start=1):
        for token in line.split():
            yield line_no, token


def _parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceFormatError(f"{what} must be an integer", line=line, token=token) from None


# ============== 矩阵格式 ==============
def parse_matrix(text: str) -> FlowInstance:
    """
    解析矩阵格式文本

    未给出供给量时，默认取网络的最大流量（并在日志中说明），以便复现结果。

    异常:
        InstanceFormatError: 维度不符、负数、对角线非零、有容量却无费用、供给量非法等
    """
    tokens = list(_tokens(text))
    if not tokens:
        raise InstanceFormatError("empty matrix file")

    line, token = tokens[0]
    n = _parse_int(token, line, "node count")
    if n < 2:
        raise InstanceFormatError("node count must be at least 2", line=line, token=token)

    body = tokens[1:]
    supply_at = next((k for k, (_, tok) in enumerate(body) if tok.lower() == "s"), None)
    entries = body if supply_at is None else body[:supply_at]
    if len(entries) != n * n:
        raise InstanceFormatError(f"dimension mismatch: expected {n * n} entries for n={n}, found {len(entries)}")

    values: List[List[Optional[int]]] = [[0] * n for _ in range(n)]
    for k, (line, token) in enumerate(entries):
        i, j = divmod(k, n)
        if token.lower() == INF_TOKEN:
            if i <= j:
                raise InstanceFormatError("'inf' is only allowed below the diagonal", line=line, token=token)
            values[i][j] = None
            continue
        value = _parse_int(token, line, f"entry ({i + 1},{j + 1})")
        if value < 0:
            raise InstanceFormatError(f"negative entry at ({i + 1},{j + 1})", line=line, token=token)
        if i == j and value != 0:
            raise InstanceFormatError(f"nonzero diagonal at ({i + 1},{j + 1})", line=line, token=token)
        values[i][j] = value

    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            capacity, cost = values[i][j], values[j][i]
            if capacity == 0:
                continue
            if cost is None:
                line, token = entries[j * n + i]
                raise InstanceFormatError(
                    f"arc {i + 1}->{j + 1} has capacity {capacity} but no cost", line=line, token=token
                )
            arcs.append(Arc(i + 1, j + 1, capacity, cost))

    if supply_at is None:
        supply = _max_flow_value(n, arcs)
        if supply == 0:
            raise InstanceFormatError("no supply line and the network carries no flow from node 1 to node n")
        logger.info("矩阵未给出供给量，按最大流量设定供给量为 %d", supply)
    else:
        trailer = body[supply_at + 1 :]
        if len(trailer) != 1:
            line, token = body[supply_at]
            raise InstanceFormatError("supply line must be 's <integer>'", line=line, token=token)
        line, token = trailer[0]
        supply = _parse_int(token, line, "supply")
        if supply < 1:
            raise InstanceFormatError("supply must be at least 1", line=line, token=token)

    try:
        return FlowInstance(node_count=n, arcs=arcs, supply=supply)
    except InvalidInstanceError as exc:
        raise InstanceFormatError(str(exc)) from exc


def write_matrix(instance: FlowInstance) -> str:
    """矩阵格式输出: 首行 n，随后 n 行单空格分隔，无弧费用写 inf，最后一行 s <供给量>"""
    n = instance.node_count
    arcs = {key: arc for key, arc in instance.arc_map().items() if arc.capacity > 0}
    lines = [str(n)]
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i == j:
                row.append("0")
            elif i < j:
                arc = arcs.get((i, j))
                row.append(str(arc.capacity) if arc else "0")
            else:
                arc = arcs.get((j, i))
                row.append(str(arc.cost) if arc else INF_TOKEN)
        lines.append(" ".join(row))
    lines.append(f"s {instance.supply}")
    return "\n".join(lines) + "\n"


# ============== DIMACS 格式 ==============
def parse_dimacs(text: str) -> FlowInstance:
    """
    解析 DIMACS 最小费用流文本

    要求恰好一个源点和一个汇点、下界为 0、网络无环；
    按稳定的拓扑序重新编号，使源点为 1、汇点为 n、所有弧满足 tail < head。

    异常:
        InstanceFormatError: 行格式错误、多源多汇、非零下界、流量不平衡、存在环等
    """
    node_count: Optional[int] = None
    declared_arcs = 0
    flux: Dict[int, int] = {}
    raw_arcs: List[Tuple[int, int, int, int, int]] = []

    def node_id(token: str, line: int) -> int:
        value = _parse_int(token, line, "node id")
        if node_count is None:
            raise InstanceFormatError("node or arc line before the problem line", line=line, token=token)
        if not 1 <= value <= node_count:
            raise InstanceFormatError(f"node id out of range 1..{node_count}", line=line, token=token)
        return value

    for line_no, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields or fields[0] == "c":
            continue
        kind = fields[0]
        if kind == "p":
            if node_count is not None:
                raise InstanceFormatError("duplicate problem line", line=line_no, token=kind)
            if len(fields) != 4 or fields[1] != "min":
                raise InstanceFormatError("problem line must be 'p min <nodes> <arcs>'", line=line_no, token=kind)
            node_count = _parse_int(fields[2], line_no, "node count")
            declared_arcs = _parse_int(fields[3], line_no, "arc count")
            if node_count < 2:
                raise InstanceFormatError("node count must be at least 2", line=line_no, token=fields[2])
        elif kind == "n":
            if len(fields) != 3:
                raise InstanceFormatError("node line must be 'n <id> <flux>'", line=line_no, token=kind)
            node = node_id(fields[1], line_no)
            value = _parse_int(fields[2], line_no, "node flux")
            if value != 0:
                flux[node] = flux.get(node, 0) + value
        elif kind == "a":
            if len(fields) != 6:
                raise InstanceFormatError(
                    "arc line must be 'a <src> <dst> <low> <cap> <cost>'", line=line_no, token=kind
                )
            src, dst = node_id(fields[1], line_no), node_id(fields[2], line_no)
            low = _parse_int(fields[3], line_no, "lower bound")
            capacity = _parse_int(fields[4], line_no, "capacity")
            cost = _parse_int(fields[5], line_no, "cost")
            if low != 0:
                raise InstanceFormatError("nonzero lower bound is not supported", line=line_no, token=fields[3])
            if capacity < 0:
                raise InstanceFormatError("negative capacity", line=line_no, token=fields[4])
            if cost < 0:
                raise InstanceFormatError("negative cost", line=line_no, token=fields[5])
            raw_arcs.append((line_no, src, dst, capacity, cost))
        else:
            raise InstanceFormatError("unknown line type", line=line_no, token=kind)

    if node_count is None:
        raise InstanceFormatError("missing problem line 'p min <nodes> <arcs>'")
    if len(raw_arcs) != declared_arcs:
        raise InstanceFormatError(f"problem line declares {declared_arcs} arcs, found {len(raw_arcs)}")

    sources = [node for node, value in flux.items() if value > 0]
    sinks = [node for node, value in flux.items() if value < 0]
    if len(sources) != 1 or len(sinks) != 1:
        raise InstanceFormatError(
            f"exactly one source and one sink required, found {len(sources)} sources and {len(sinks)} sinks"
        )
    source, sink = sources[0], sinks[0]
    if flux[source] != -flux[sink]:
        raise InstanceFormatError(f"source flux {flux[source]} does not balance sink flux {flux[sink]}")

    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, node_count + 1))
    for line_no, src, dst, _, _ in raw_arcs:
        if src == dst or graph.has_edge(src, dst):
            raise InstanceFormatError(f"duplicate or self arc {src}->{dst}", line=line_no)
        graph.add_edge(src, dst)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = " -> ".join(str(u) for u, _ in nx.find_cycle(graph))
        raise InstanceFormatError(f"cycle detected ({cycle}); the tableau form needs an acyclic network")

    def rank(node: int) -> Tuple[int, int]:
        return (0 if node == source else 2 if node == sink else 1, node)

    order = list(nx.lexicographical_topological_sort(graph, key=rank))
    if order[0] != source:
        raise InstanceFormatError(f"source node {source} has incoming arcs")
    if order[-1] != sink:
        raise InstanceFormatError(f"sink node {sink} has outgoing arcs")
    relabel = {old: new for new, old in enumerate(order, start=1)}
    if any(old != new for old, new in relabel.items()):
        logger.info("DIMACS 节点按拓扑序重新编号: %s", relabel)

    arcs = [Arc(relabel[src], relabel[dst], capacity, cost) for _, src, dst, capacity, cost in raw_arcs]
    try:
        return FlowInstance(node_count=node_count, arcs=arcs, supply=flux[source])
    except InvalidInstanceError as exc:
        raise InstanceFormatError(str(exc)) from exc


def write_dimacs(instance: FlowInstance) -> str:
    """DIMACS 格式输出，下界恒为 0，弧按 (tail, head) 排序"""
    n = instance.node_count
    lines = [
        "c single-source single-sink minimum cost flow",
        f"p min {n} {len(instance.arcs)}",
        f"n 1 {instance.supply}",
        f"n {n} {-instance.supply}",
    ]
    lines.extend(f"a {arc.tail} {arc.head} 0 {arc.capacity} {arc.cost}" for arc in instance.arcs)
    return "\n".join(lines) + "\n"


# ============== 发送记录 ==============
def trace_frame(sol: FlowSolution) -> pd.DataFrame:
    """发送记录表，cumulative_cost 为 leg_cost 的前缀和"""
    if not sol.trace:
        return pd.DataFrame(columns=TRACE_COLUMNS)
    frame = pd.DataFrame(
        {
            "step": range(1, len(sol.trace) + 1),
            "sender": [event.sender for event in sol.trace],
            "receiver": [event.receiver for event in sol.trace],
            "quantity": [event.quantity for event in sol.trace],
            "unit_cost": [event.unit_cost for event in sol.trace],
            "leg_cost": [event.leg_cost for event in sol.trace],
        }
    )
    frame["cumulative_cost"] = frame["leg_cost"].cumsum()
    return frame[TRACE_COLUMNS]


def write_trace(sol: FlowSolution) -> str:
    """发送记录 CSV（LF 换行，无索引列）"""
    return trace_frame(sol).to_csv(index=False, lineterminator="\n")


# ============== 文件读取 ==============
def detect_format(path: str) -> str:
    """按扩展名推断格式，无法判断时按矩阵格式处理"""
    ext = os.path.splitext(path)[1].lower()
    if ext in DIMACS_EXTENSIONS:
        return "dimacs"
    if ext not in MATRIX_EXTENSIONS:
        logger.debug("无法从扩展名 %r 判断格式，按矩阵格式读取", ext)
    return "matrix"


def load_instance(path: str, fmt: Optional[str] = None, supply: Optional[int] = None) -> FlowInstance:
    """
    读取实例文件

    参数:
        path: 文件路径
        fmt: "dimacs" 或 "matrix"，None 时按扩展名推断
        supply: 覆盖文件中的供给量

    异常:
        OSError: 文件无法读取
        InstanceFormatError: 内容无法解析或覆盖的供给量非法
    """
    fmt = fmt or detect_format(path)
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    instance = parse_dimacs(text) if fmt == "dimacs" else parse_matrix(text)
    if supply is not None:
        try:
            instance = instance.with_supply(supply)
        except InvalidInstanceError as exc:
            raise InstanceFormatError(str(exc)) from exc
    logger.info("读取实例 %s: n=%d, 弧数=%d, 供给量=%d", path, instance.node_count, len(instance.arcs), instance.supply)
    return instance

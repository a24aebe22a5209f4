"""
精确求解器 - 残量网络上的逐次最短增广路

用于验证启发式结果并度量最优性差距。最短路使用标号修正法（SPFA），
可以处理残量网络中反向弧的负费用。最大流使用 scipy 的稀疏图 Dinic 实现。
"""
import logging
from collections import deque
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .heuristic import run_heuristic
from .models import (
    Arc,
    Augmentation,
    FlowInstance,
    FlowSolution,
    GapReport,
    SenderRule,
    SolveStatus,
    arc_table,
)

logger = logging.getLogger(__name__)


class ResidualNetwork:
    """
    残量网络

    每条容量为正的弧 u→v 对应正向残量 residual[(u, v)] 与反向残量 residual[(v, u)]；
    反向弧费用为正向费用的相反数。反向残量即当前流量。
    """

    def __init__(self, instance: FlowInstance):
        self.n = instance.node_count
        self.capacity: Dict[Tuple[int, int], int] = {}
        self.residual: Dict[Tuple[int, int], int] = {}
        self.cost: Dict[Tuple[int, int], int] = {}
        self.adjacency: Dict[int, List[int]] = {node: [] for node in range(1, self.n + 1)}

        for arc in instance.arcs:
            if arc.capacity == 0:
                continue
            u, v = arc.tail, arc.head
            self.capacity[(u, v)] = arc.capacity
            self.residual[(u, v)] = arc.capacity
            self.residual[(v, u)] = 0
            self.cost[(u, v)] = arc.cost
            self.cost[(v, u)] = -arc.cost
            self.adjacency[u].append(v)
            self.adjacency[v].append(u)

    def flow(self, tail: int, head: int) -> int:
        """弧 tail→head 的当前流量"""
        return self.residual.get((head, tail), 0) if (tail, head) in self.capacity else 0

    def push(self, path: List[int], amount: int) -> None:
        """沿路径推送 amount 单位"""
        for u, v in zip(path, path[1:]):
            self.residual[(u, v)] -= amount
            self.residual[(v, u)] += amount

    def shortest_path(self, source: int, sink: int) -> Optional[Tuple[int, List[int]]]:
        """
        SPFA 求 source 到 sink 的最小单位费用路径（只走残量为正的弧）

        返回:
            (路径单位费用, 节点路径)，不可达时返回 None
        """
        distance: Dict[int, int] = {source: 0}
        predecessor: Dict[int, int] = {}
        in_queue = {source}
        times_in_queue = {source: 1}
        queue = deque([source])

        while queue:
            node = queue.popleft()
            in_queue.discard(node)
            base = distance[node]
            for neighbor in self.adjacency[node]:
                if self.residual[(node, neighbor)] <= 0:
                    continue
                candidate = base + self.cost[(node, neighbor)]
                if neighbor not in distance or candidate < distance[neighbor]:
                    distance[neighbor] = candidate
                    predecessor[neighbor] = node
                    if neighbor not in in_queue:
                        times_in_queue[neighbor] = times_in_queue.get(neighbor, 0) + 1
                        if times_in_queue[neighbor] > self.n:
                            # 逐次最短路保持残量网络无负圈，出现即说明实现有误
                            raise RuntimeError("残量网络中出现负费用圈")
                        in_queue.add(neighbor)
                        queue.append(neighbor)

        if sink not in distance:
            return None
        path = [sink]
        while path[-1] != source:
            path.append(predecessor[path[-1]])
        path.reverse()
        return distance[sink], path

    def check(self) -> List[str]:
        """检查残量不变式: 正向残量 + 流量 = 容量，残量非负"""
        violations = []
        for (u, v), capacity in self.capacity.items():
            forward, backward = self.residual[(u, v)], self.residual[(v, u)]
            if forward < 0 or backward < 0:
                violations.append(f"negative residual on arc {u}->{v}")
            if forward + backward != capacity:
                violations.append(f"residual of arc {u}->{v} does not add up to capacity {capacity}")
        return violations


def _max_flow_value(node_count: int, arcs: Union[Iterable[Arc], np.ndarray]) -> int:
    """容量矩阵 (CSR) 上的 Dinic 最大流；arcs 可以是 (m, 4) 数组"""
    table = arc_table(arcs)
    table = table[table[:, 2] > 0]
    graph = csr_matrix(
        (table[:, 2].astype(np.int32), (table[:, 0] - 1, table[:, 1] - 1)),
        shape=(node_count, node_count),
    )
    graph.sort_indices()
    return int(maximum_flow(graph, 0, node_count - 1).flow_value)


def max_feasible_flow(instance: FlowInstance) -> int:
    """节点 1 到节点 n 的最大流量，无路径时为 0"""
    return _max_flow_value(instance.node_count, instance.arcs)


def solve_exact(instance: FlowInstance) -> FlowSolution:
    """
    逐次最短增广路求恰好 supply 单位的最小费用流

    返回:
        FlowSolution: COMPLETED 时总费用最优；
                      网络最多只能送出少于 supply 的流量时为 INFEASIBLE（保留已送出部分）
    """
    network = ResidualNetwork(instance)
    source, sink = 1, instance.node_count
    shipped = 0
    cost = 0
    augmentations: List[Augmentation] = []

    while shipped < instance.supply:
        found = network.shortest_path(source, sink)
        if found is None:
            break
        unit_cost, path = found
        bottleneck = min(network.residual[(u, v)] for u, v in zip(path, path[1:]))
        amount = min(bottleneck, instance.supply - shipped)
        network.push(path, amount)
        augmentations.append(Augmentation(path=tuple(path), amount=amount, unit_cost=unit_cost))
        shipped += amount
        cost += amount * unit_cost

    status = SolveStatus.COMPLETED if shipped == instance.supply else SolveStatus.INFEASIBLE
    if status is SolveStatus.INFEASIBLE:
        logger.warning("网络最多送出 %d 单位，少于供给量 %d", shipped, instance.supply)
    logger.info("精确求解结束: 状态=%s, 增广次数=%d, 总费用=%d", status.value, len(augmentations), cost)

    flows = {}
    for tail, head in network.capacity:
        flow = network.flow(tail, head)
        if flow > 0:
            flows[(tail, head)] = flow
    return FlowSolution(
        node_count=instance.node_count,
        arc_flows=flows,
        total_cost=cost,
        status=status,
        augmentations=augmentations,
    )


def verify_solution(instance: FlowInstance, sol: FlowSolution) -> List[str]:
    """
    校验解的可行性与费用

    检查项:
        - 每条有流量的弧都存在且 0 <= 流量 <= 容量
        - COMPLETED: 净流量为 (+S, 0, ..., 0, -S)
        - INFEASIBLE: 中间节点守恒，源点流出等于汇点流入
        - STRANDED: 中间节点流入不少于流出（滞留的流量留在节点上），源点流出不超过 S
        - total_cost 等于 Σ 流量 × 单位费用
    """
    violations: List[str] = []
    arcs = instance.arc_map()
    recomputed = 0
    for (tail, head), flow in sorted(sol.arc_flows.items()):
        arc = arcs.get((tail, head))
        if arc is None:
            violations.append(f"unknown arc {tail}->{head} carries flow {flow}")
            continue
        if flow < 0 or flow > arc.capacity:
            violations.append(f"capacity violation on arc {tail}->{head}: flow {flow}, capacity {arc.capacity}")
        recomputed += flow * arc.cost

    balance = sol.net_balance()
    supply = instance.supply
    inner = balance[1:-1]
    if sol.status is SolveStatus.COMPLETED:
        if balance[0] != supply or balance[-1] != -supply:
            violations.append(
                f"conservation violation: source sends {balance[0]}, sink receives {-balance[-1]}, supply {supply}"
            )
        for node, net in enumerate(inner, start=2):
            if net != 0:
                violations.append(f"conservation violation at node {node}: net outflow {net}")
    elif sol.status is SolveStatus.INFEASIBLE:
        if balance[0] != -balance[-1]:
            violations.append(f"conservation violation: source sends {balance[0]}, sink receives {-balance[-1]}")
        for node, net in enumerate(inner, start=2):
            if net != 0:
                violations.append(f"conservation violation at node {node}: net outflow {net}")
    else:
        if not 0 <= balance[0] <= supply:
            violations.append(f"conservation violation: source sends {balance[0]} of supply {supply}")
        for node, net in enumerate(inner, start=2):
            if net > 0:
                violations.append(f"conservation violation at node {node}: sends {net} more than it received")

    if recomputed != sol.total_cost:
        violations.append(f"cost mismatch: reported {sol.total_cost}, recomputed {recomputed}")
    return violations


def gap(instance: FlowInstance, rule: SenderRule = SenderRule.INDEX_ORDER) -> GapReport:
    """
    同时运行启发式与精确求解器，报告最优性差距

    差距只在两者都送满 supply 时有定义；STRANDED / INFEASIBLE 状态保留在报告中。
    """
    return compare_solutions(instance, run_heuristic(instance, rule), solve_exact(instance))


def compare_solutions(instance: FlowInstance, heuristic: FlowSolution, exact: FlowSolution) -> GapReport:
    """由已有的启发式解与精确解构造 GapReport"""
    absolute: Optional[int] = None
    relative: Optional[Fraction] = None
    both_shipped = heuristic.shipped == instance.supply and exact.shipped == instance.supply
    if both_shipped and exact.status is SolveStatus.COMPLETED:
        absolute = heuristic.total_cost - exact.total_cost
        if exact.total_cost > 0:
            relative = Fraction(absolute, exact.total_cost)
        elif absolute == 0:
            relative = Fraction(0)

    return GapReport(
        supply=instance.supply,
        heuristic_status=heuristic.status,
        heuristic_cost=heuristic.total_cost,
        heuristic_shipped=heuristic.shipped,
        exact_status=exact.status,
        exact_cost=exact.total_cost,
        exact_shipped=exact.shipped,
        absolute_gap=absolute,
        relative_gap=relative,
    )

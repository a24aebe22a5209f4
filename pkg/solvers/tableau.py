"""
汇总表 - 建表、不变式检查与文本展示
"""
import logging
from typing import List, Optional

import numpy as np
import pandas as pd

from .models import NO_ARC, FlowInstance, Tableau

logger = logging.getLogger(__name__)


def build_tableau(instance: FlowInstance) -> Tableau:
    """
    第一步: 建立 n×n 汇总表

    对角线为 0；对角线以上写容量，无弧写 0；对角线以下写费用，无弧写 NO_ARC；
    RHS 第一行写供给量，其余行为 0。容量为 0 的弧视为无弧。

    参数:
        instance: 问题实例

    返回:
        Tableau: 初始汇总表
    """
    n = instance.node_count
    cap = np.zeros((n, n), dtype=np.int64)
    cost_data = np.zeros((n, n), dtype=np.int64)
    mask = np.ones((n, n), dtype=bool)
    np.fill_diagonal(mask, False)

    arcs = np.array([arc for arc in instance.arcs if arc.capacity > 0], dtype=np.int64).reshape(-1, 4)
    tails, heads = arcs[:, 0] - 1, arcs[:, 1] - 1
    cap[tails, heads] = arcs[:, 2]
    cost_data[heads, tails] = arcs[:, 3]
    mask[heads, tails] = False

    rhs = np.zeros(n, dtype=np.int64)
    rhs[0] = instance.supply

    logger.debug("建表完成: n=%d, 弧数=%d, 供给量=%d", n, len(arcs), instance.supply)
    return Tableau(
        n=n,
        cap=cap,
        cost=np.ma.MaskedArray(cost_data, mask=mask),
        rhs=rhs,
        supply=instance.supply,
        initial_cap=cap.copy(),
    )


def check_tableau(tab: Tableau, supply: int) -> List[str]:
    """
    检查汇总表的不变式，返回违反项描述，全部满足时返回空列表

    检查项:
        - 两个三角的对角线均为 0
        - 剩余容量非负且不超过初始容量
        - 源点 RHS 非负，其余节点 RHS 非正
        - Σ|rhs| 等于供给量
        - 建表时无弧（容量为 0）当且仅当费用为 NO_ARC
    """
    violations: List[str] = []
    n = tab.n
    if tab.cap.shape != (n, n) or tab.cost.shape != (n, n) or tab.rhs.shape != (n,):
        return [f"shape violation: expected {n}x{n} matrices and length-{n} rhs"]

    cost_mask = np.ma.getmaskarray(tab.cost)
    for i in range(n):
        if tab.cap[i, i] != 0:
            violations.append(f"diagonal violation: capacity at node {i + 1} is {tab.cap[i, i]}")
        if cost_mask[i, i] or tab.cost.data[i, i] != 0:
            violations.append(f"diagonal violation: cost at node {i + 1} is not 0")

    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    for i, j in zip(*np.nonzero(upper & (tab.cap < 0))):
        violations.append(f"capacity violation: residual of arc {i + 1}->{j + 1} is {tab.cap[i, j]}")
    for i, j in zip(*np.nonzero(upper & (tab.cap > tab.initial_cap))):
        violations.append(f"capacity violation: residual of arc {i + 1}->{j + 1} exceeds its capacity")

    if tab.rhs[0] < 0:
        violations.append(f"sign violation at node 1: rhs {tab.rhs[0]} is negative")
    for i in np.flatnonzero(tab.rhs[1:] > 0) + 1:
        violations.append(f"sign violation at node {i + 1}: rhs {tab.rhs[i]} is positive")

    held = int(np.abs(tab.rhs).sum())
    if held != supply:
        violations.append(f"conservation violation: sum of |rhs| is {held}, expected {supply}")

    # 建表时 NO_ARC 与零容量一一对应（对角线以下的费用对应对角线以上的容量）
    no_arc_upper = cost_mask.T & upper
    zero_cap_upper = (tab.initial_cap == 0) & upper
    for i, j in zip(*np.nonzero(no_arc_upper != zero_cap_upper)):
        violations.append(f"arc marker violation: pair {i + 1}->{j + 1} has mismatched NO_ARC and capacity")

    return violations


def format_tableau(tab: Tableau, sender: Optional[int] = None) -> str:
    """
    按算例中的逐步表格格式输出汇总表

    给定 sender 时追加 "Cost" 与 "Sum of costs" 两行，列出其候选接收节点的评分。
    """
    from .heuristic import score_receivers

    labels = list(range(1, tab.n + 1))
    rows = []
    for i in range(tab.n):
        row = []
        for j in range(tab.n):
            if i < j:
                row.append(str(tab.cap[i, j]))
            elif i > j:
                value = tab.cost[i, j]
                row.append("∞" if value is NO_ARC else str(value))
            else:
                row.append("0")
        sign = "+" if tab.rhs[i] > 0 else ""
        row.append(f"{sign}{tab.rhs[i]}")
        rows.append(row)
    frame = pd.DataFrame(rows, index=labels, columns=labels + ["Flow"])
    frame.index.name = "Nodes"

    if sender is not None:
        costs = [""] * (tab.n + 1)
        sums = [""] * (tab.n + 1)
        for score in score_receivers(tab, sender):
            costs[score.candidate - 1] = "∞" if score.direct_cost is NO_ARC else str(score.direct_cost)
            sums[score.candidate - 1] = "∞" if score.summation is NO_ARC else str(score.summation)
        frame.loc["Cost"] = costs
        frame.loc["Sum of costs"] = sums

    return frame.to_string()

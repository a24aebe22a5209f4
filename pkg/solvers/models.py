"""
数据模型 - 最小费用流实例、汇总表与求解结果

约定:
    - 节点编号从 1 开始，1 为供给节点，n 为需求节点
    - 弧只能从小编号指向大编号（tail < head）
    - 容量、费用、流量全部为整数
    - NO_ARC 表示"没有弧"（表中的 ∞），它是 numpy 的掩码常量，
      与任何数相加仍是 NO_ARC，不会被当成一个很大的数参与运算
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

import numpy as np

from .exceptions import InvalidInstanceError

NO_ARC = np.ma.masked

CostValue = Union[int, "np.ma.core.MaskedConstant"]


def is_no_arc(value) -> bool:
    """判断一个费用值是否为 NO_ARC"""
    return value is NO_ARC


class Arc(NamedTuple):
    """有向弧 tail → head，容量与单位费用"""

    tail: int
    head: int
    capacity: int
    cost: int


class SolveStatus(str, enum.Enum):
    """求解状态"""

    COMPLETED = "completed"
    STRANDED = "stranded"
    INFEASIBLE = "infeasible"


class SenderRule(str, enum.Enum):
    """
    发送节点的选择规则

    INDEX_ORDER: RHS 非零的节点中编号最小者（逐层向后推进，复现算例的逐步表格）
    SIGNED_MAX:  RHS 非零的节点中有符号值最大者，平局取编号最小者
    """

    INDEX_ORDER = "index"
    SIGNED_MAX = "signed"


def arc_table(arcs) -> np.ndarray:
    """
    把弧序列转换为 (m, 4) 的 int64 数组，列为 tail, head, capacity, cost

    异常:
        InvalidInstanceError: 元素不是四元组，或含有非整数字段（小数、inf、nan 等）
    """
    items = arcs if isinstance(arcs, np.ndarray) else list(arcs)
    try:
        table = np.asarray(items)
    except (ValueError, TypeError, OverflowError) as e:
        raise InvalidInstanceError(f"弧必须是 (tail, head, capacity, cost) 四元组: {e}") from None
    if table.size == 0:
        return np.empty((0, 4), dtype=np.int64)
    if table.ndim != 2 or table.shape[1] != 4:
        raise InvalidInstanceError(f"弧必须是 (tail, head, capacity, cost) 四元组，实际形状为 {table.shape}")
    if table.dtype.kind not in "iu":
        rows = table.tolist() if isinstance(items, np.ndarray) else items
        first = next(
            (row for row in rows if not all(isinstance(v, (int, np.integer)) for v in row)),
            rows[0],
        )
        raise InvalidInstanceError(f"弧的端点、容量与费用必须是整数，实际为 {tuple(first)!r}")
    return table.astype(np.int64, copy=False)


@dataclass(frozen=True)
class FlowInstance:
    """
    单源单汇最小费用流问题

    参数:
        node_count: 节点数 n (n >= 2)
        arcs: 弧列表，元素为 Arc 或 (tail, head, capacity, cost) 元组
        supply: 从节点 1 送往节点 n 的流量 (>= 1)

    构造时校验全部不变式，并把弧按 (tail, head) 排序，
    因此两个描述同一网络的实例总是相等。
    """

    node_count: int
    arcs: Tuple[Arc, ...]
    supply: int

    def __post_init__(self):
        n = self.node_count
        if not isinstance(n, (int, np.integer)) or n < 2:
            raise InvalidInstanceError(f"节点数必须是 >= 2 的整数，实际为 {n!r}")
        object.__setattr__(self, "node_count", int(n))

        table = arc_table(self.arcs)
        tails, heads = table[:, 0], table[:, 1]
        bad = np.flatnonzero((tails < 1) | (heads > n) | (tails >= heads))
        if bad.size:
            tail, head = table[bad[0], :2]
            raise InvalidInstanceError(f"弧 {tail}->{head} 不满足 1 <= tail < head <= {n}")

        table = table[np.lexsort((table[:, 1], table[:, 0]))]
        keys = table[:, 0] * (n + 1) + table[:, 1]
        bad = np.flatnonzero(keys[1:] == keys[:-1])
        if bad.size:
            tail, head = table[bad[0], :2]
            raise InvalidInstanceError(f"弧 {tail}->{head} 重复出现")
        for column, label in ((2, "容量"), (3, "费用")):
            bad = np.flatnonzero(table[:, column] < 0)
            if bad.size:
                row = table[bad[0]]
                raise InvalidInstanceError(f"弧 {row[0]}->{row[1]} {label}为负: {row[column]}")
        object.__setattr__(self, "arcs", tuple(map(Arc._make, table.tolist())))

        if not isinstance(self.supply, (int, np.integer)) or self.supply < 1:
            raise InvalidInstanceError(f"供给量必须是 >= 1 的整数，实际为 {self.supply!r}")
        object.__setattr__(self, "supply", int(self.supply))

    def arc_map(self) -> Dict[Tuple[int, int], Arc]:
        """(tail, head) -> Arc"""
        return {(arc.tail, arc.head): arc for arc in self.arcs}

    def with_supply(self, supply: int) -> "FlowInstance":
        """返回供给量替换后的新实例"""
        return replace(self, supply=supply)


@dataclass
class Tableau:
    """
    汇总表: 对角线以上为剩余容量，对角线以下为单位费用，RHS 为各节点的带符号流量

    数组使用 0 起始下标，节点 i 对应下标 i-1:
        cap[i-1, j-1]  (i < j)  弧 i→j 的剩余容量
        cost[j-1, i-1] (i < j)  弧 i→j 的单位费用，无弧时为 NO_ARC
        rhs[i-1]                节点 i 的带符号流量（源点为正，其余节点为负）
    initial_cap 记录建表时的容量，供不变式检查使用。
    """

    n: int
    cap: np.ndarray
    cost: np.ma.MaskedArray
    rhs: np.ndarray
    supply: int
    initial_cap: np.ndarray

    def residual(self, tail: int, head: int) -> int:
        """弧 tail→head 的剩余容量"""
        return int(self.cap[tail - 1, head - 1])

    def unit_cost(self, tail: int, head: int) -> CostValue:
        """弧 tail→head 的单位费用，无弧时返回 NO_ARC；tail == head 时为 0"""
        value = self.cost[head - 1, tail - 1]
        return NO_ARC if value is NO_ARC else int(value)

    def balance(self, node: int) -> int:
        return int(self.rhs[node - 1])

    def copy(self) -> "Tableau":
        return Tableau(
            n=self.n,
            cap=self.cap.copy(),
            cost=self.cost.copy(),
            rhs=self.rhs.copy(),
            supply=self.supply,
            initial_cap=self.initial_cap,
        )


@dataclass(frozen=True)
class ReceiverScore:
    """候选接收节点的评分: 直接费用与两跳费用之和"""

    candidate: int
    direct_cost: CostValue
    summation: CostValue
    feasible: bool


@dataclass(frozen=True)
class DispatchEvent:
    """一次发送: sender → receiver 运送 quantity 单位"""

    sender: int
    receiver: int
    quantity: int
    unit_cost: int

    @property
    def leg_cost(self) -> int:
        return self.quantity * self.unit_cost


@dataclass(frozen=True)
class Augmentation:
    """精确求解器的一次增广: 路径、增广量、路径单位费用"""

    path: Tuple[int, ...]
    amount: int
    unit_cost: int


@dataclass
class FlowSolution:
    """
    求解结果

    参数:
        node_count: 节点数
        arc_flows: (tail, head) -> 流量，只记录正流量的弧
        total_cost: 总费用
        status: 求解状态
        trace: 启发式的发送记录（精确求解器为空）
        augmentations: 精确求解器的增广记录（启发式为空）
    """

    node_count: int
    arc_flows: Dict[Tuple[int, int], int]
    total_cost: int
    status: SolveStatus
    trace: List[DispatchEvent] = field(default_factory=list)
    augmentations: List[Augmentation] = field(default_factory=list)

    def net_balance(self) -> List[int]:
        """各节点的净流出量（流出 - 流入），下标 0 对应节点 1"""
        balance = [0] * self.node_count
        for (tail, head), flow in self.arc_flows.items():
            balance[tail - 1] += flow
            balance[head - 1] -= flow
        return balance

    @property
    def shipped(self) -> int:
        """到达需求节点的流量"""
        return -self.net_balance()[-1]

    @property
    def dispatch_count(self) -> int:
        return len(self.trace)


@dataclass(frozen=True)
class GapReport:
    """
    启发式与精确解的对比

    absolute_gap / relative_gap 仅在两者都送满 supply 时有定义，否则为 None；
    精确费用为 0 时相对差距只在绝对差距也为 0 时有定义。
    """

    supply: int
    heuristic_status: SolveStatus
    heuristic_cost: int
    heuristic_shipped: int
    exact_status: SolveStatus
    exact_cost: int
    exact_shipped: int
    absolute_gap: Optional[int]
    relative_gap: Optional[Fraction]

    def as_row(self) -> Dict[str, object]:
        return {
            "supply": self.supply,
            "heuristic_status": self.heuristic_status.value,
            "heuristic_cost": self.heuristic_cost,
            "heuristic_shipped": self.heuristic_shipped,
            "exact_status": self.exact_status.value,
            "exact_cost": self.exact_cost,
            "exact_shipped": self.exact_shipped,
            "absolute_gap": self.absolute_gap,
            "relative_gap": format_fraction(self.relative_gap),
        }


def format_fraction(value: Optional[Fraction]) -> str:
    """相对差距的固定 6 位小数文本，未定义时为空串"""
    if value is None:
        return ""
    return f"{float(value):.6f}"


def aggregate_flows(events: Iterable[DispatchEvent]) -> Dict[Tuple[int, int], int]:
    """按弧累加发送量"""
    flows: Dict[Tuple[int, int], int] = {}
    for event in events:
        key = (event.sender, event.receiver)
        flows[key] = flows.get(key, 0) + event.quantity
    return flows

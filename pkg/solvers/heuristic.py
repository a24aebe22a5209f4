"""
费用-流量求和启发式

步骤:
    1. 建立汇总表（见 tableau.build_tableau）
    2. 在除需求节点外的 RHS 中选择发送节点
    3. 对发送节点之后的每个候选节点 i，计算 发送节点→i 的费用 + i→需求节点 的费用，
       取最小者作为接收节点
    4. 发送 min(|RHS|, 剩余容量) 单位，更新 RHS: 发送方向 0 靠拢，接收方变得更负
    5. 回到第 2 步，直到除最后一行外的 RHS 全部为 0
"""
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ContractError
from .models import (
    NO_ARC,
    DispatchEvent,
    FlowInstance,
    FlowSolution,
    ReceiverScore,
    SenderRule,
    SolveStatus,
    Tableau,
    aggregate_flows,
)
from .tableau import build_tableau

logger = logging.getLogger(__name__)


def select_sender(tab: Tableau, rule: SenderRule = SenderRule.INDEX_ORDER) -> Optional[int]:
    """
    第二步: 选择发送节点

    只考虑节点 1..n-1 中 RHS 非零者；全部为零时返回 None（终止状态）。

    参数:
        tab: 汇总表
        rule: INDEX_ORDER 取编号最小者；SIGNED_MAX 取有符号值最大者，平局取编号最小者

    返回:
        发送节点编号或 None
    """
    balances = tab.rhs[:-1]
    active = np.flatnonzero(balances)
    if active.size == 0:
        return None
    if rule is SenderRule.INDEX_ORDER:
        return int(active[0]) + 1
    # np.argmax 返回第一个最大值，即编号最小者
    return int(active[np.argmax(balances[active])]) + 1


def _score_arrays(tab: Tableau, sender: int) -> Tuple[np.ma.MaskedArray, np.ma.MaskedArray, np.ndarray]:
    """候选 sender+1..n 的直接费用、两跳费用和、可行性（向量形式）"""
    s = sender - 1
    direct = tab.cost[s + 1 :, s]
    # cost(i→n)；i = n 时取对角线上的 0
    to_sink = tab.cost[tab.n - 1, s + 1 :]
    summation = direct + to_sink
    feasible = ~np.ma.getmaskarray(summation) & (tab.cap[s, s + 1 :] > 0)
    return direct, summation, feasible


def score_receivers(tab: Tableau, sender: int) -> List[ReceiverScore]:
    """
    第三步（评分）: 为 sender 之后的每个节点计算 ReceiverScore

    无弧、剩余容量为 0 或费用和含 NO_ARC 的候选标记为不可行。
    """
    direct, summation, feasible = _score_arrays(tab, sender)
    direct_mask = np.ma.getmaskarray(direct)
    sum_mask = np.ma.getmaskarray(summation)
    scores = []
    for k in range(len(feasible)):
        scores.append(
            ReceiverScore(
                candidate=sender + 1 + k,
                direct_cost=NO_ARC if direct_mask[k] else int(direct.data[k]),
                summation=NO_ARC if sum_mask[k] else int(summation.data[k]),
                feasible=bool(feasible[k]),
            )
        )
    return scores


def select_receiver(scores: Sequence[ReceiverScore]) -> Optional[int]:
    """第三步（选择）: 可行候选中费用和最小者，平局取编号最小者；没有可行候选时返回 None"""
    feasible = [score for score in scores if score.feasible]
    if not feasible:
        return None
    best = min(feasible, key=lambda score: (score.summation, score.candidate))
    return best.candidate


def _pick_receiver(tab: Tableau, sender: int) -> Optional[int]:
    """与 select_receiver(score_receivers(...)) 等价的向量化实现，主循环使用"""
    _, summation, feasible = _score_arrays(tab, sender)
    candidates = np.flatnonzero(feasible)
    if candidates.size == 0:
        return None
    best = candidates[np.argmin(summation.data[candidates])]
    return sender + 1 + int(best)


def dispatch(tab: Tableau, sender: int, receiver: int) -> DispatchEvent:
    """
    第四步: 沿弧 sender→receiver 发送 min(|RHS|, 剩余容量) 单位并原地更新汇总表

    异常:
        ContractError: 弧不存在、剩余容量为 0 或发送节点没有可发送的流量
    """
    if not (1 <= sender < receiver <= tab.n):
        raise ContractError(f"发送 {sender}->{receiver} 不满足 1 <= sender < receiver <= {tab.n}")
    s, r = sender - 1, receiver - 1
    unit_cost = tab.cost[r, s]
    if unit_cost is NO_ARC:
        raise ContractError(f"弧 {sender}->{receiver} 不存在")
    residual = int(tab.cap[s, r])
    held = abs(int(tab.rhs[s]))
    if residual <= 0 or held <= 0:
        raise ContractError(
            f"发送 {sender}->{receiver} 需要正的剩余容量与流量，实际为 容量={residual}, 流量={held}"
        )

    quantity = min(held, residual)
    tab.cap[s, r] -= quantity
    tab.rhs[s] -= np.sign(tab.rhs[s]) * quantity
    tab.rhs[r] -= quantity
    return DispatchEvent(sender=sender, receiver=receiver, quantity=quantity, unit_cost=int(unit_cost))


def total_cost(trace: Sequence[DispatchEvent]) -> int:
    """各次发送费用之和"""
    return sum(event.leg_cost for event in trace)


def run_heuristic(instance: FlowInstance, rule: SenderRule = SenderRule.INDEX_ORDER) -> FlowSolution:
    """
    运行完整的求和启发式

    参数:
        instance: 问题实例
        rule: 发送节点选择规则

    返回:
        FlowSolution: 状态为 COMPLETED（除需求节点外 RHS 全为 0）
                      或 STRANDED（某个发送节点没有可行的接收节点）
    """
    tab = build_tableau(instance)
    trace: List[DispatchEvent] = []
    status = SolveStatus.COMPLETED

    while True:
        sender = select_sender(tab, rule)
        if sender is None:
            break
        receiver = _pick_receiver(tab, sender)
        if receiver is None:
            status = SolveStatus.STRANDED
            logger.warning(
                "节点 %d 仍持有 %d 单位但没有可行的接收节点，启发式停止", sender, abs(tab.balance(sender))
            )
            break
        event = dispatch(tab, sender, receiver)
        logger.debug(
            "发送 %d: %d -> %d, 数量 %d, 单价 %d, 费用 %d",
            len(trace) + 1, event.sender, event.receiver, event.quantity, event.unit_cost, event.leg_cost,
        )
        trace.append(event)

    solution = FlowSolution(
        node_count=instance.node_count,
        arc_flows=aggregate_flows(trace),
        total_cost=total_cost(trace),
        status=status,
        trace=trace,
    )
    logger.info(
        "启发式结束: 状态=%s, 发送次数=%d, 送达=%d/%d, 总费用=%d",
        status.value, len(trace), solution.shipped, instance.supply, solution.total_cost,
    )
    return solution


def replay_trace(instance: FlowInstance, trace: Sequence[DispatchEvent]) -> Iterator[Tableau]:
    """
    按发送记录逐步重建汇总表，每次发送后产出一份副本

    异常:
        ContractError: 记录中的某次发送与重建出的数量不一致
    """
    tab = build_tableau(instance)
    for step, event in enumerate(trace, start=1):
        replayed = dispatch(tab, event.sender, event.receiver)
        if replayed != event:
            raise ContractError(f"第 {step} 次发送无法复现: 记录 {event}, 重建 {replayed}")
        yield tab.copy()

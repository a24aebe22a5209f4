#!/usr/bin/env python3
"""
费用-流量求和启发式 - 演示脚本

逐步打印 Example 1-3 的汇总表：每次发送前的表格（附发送节点的 Cost / Sum of costs 行）、
选中的发送与费用，最后与精确解对比。不需要任何输入文件。
"""
import sys
import os

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(__file__))

from solvers import SenderRule, build_tableau, format_tableau, replay_trace, run_heuristic, solve_exact
from tools.fixtures import fixture


def demo_example(name: str, rule: SenderRule = SenderRule.INDEX_ORDER):
    """演示一个算例的逐步求解过程"""
    item = fixture(name)
    instance = item.instance
    print("=" * 70)
    print(f"演示: {name} (n={instance.node_count}, 供给量={instance.supply}, 已发表费用={item.published_cost})")
    print("=" * 70)

    sol = run_heuristic(instance, rule)
    before = [build_tableau(instance)] + list(replay_trace(instance, sol.trace))

    for step, event in enumerate(sol.trace, start=1):
        print(f"\n第 {step} 步: 发送节点 {event.sender}")
        print(format_tableau(before[step - 1], sender=event.sender))
        print(
            f"  -> 发送 {event.sender}->{event.receiver}, 数量 {event.quantity}, "
            f"费用 {event.unit_cost} x {event.quantity} = {event.leg_cost}"
        )

    print("\n最终汇总表:")
    print(format_tableau(before[-1]))
    exact = solve_exact(instance)
    print(f"\n启发式: 状态 {sol.status.value}, 送达 {sol.shipped}, 总费用 {sol.total_cost}")
    print(f"精确解: 状态 {exact.status.value}, 送达 {exact.shipped}, 总费用 {exact.total_cost}")
    print()


def main():
    """运行全部演示"""
    print("\n" + "=" * 70)
    print("费用-流量求和启发式 - 演示")
    print("=" * 70 + "\n")

    for name in ("example1", "example2", "example3"):
        demo_example(name)

    print("=" * 70)
    print("对比: example1 使用 signed 发送规则（总费用相同，发送顺序不同）")
    print("=" * 70)
    sol = run_heuristic(fixture("example1").instance, SenderRule.SIGNED_MAX)
    print(", ".join(f"{e.sender}->{e.receiver}:{e.leg_cost}" for e in sol.trace))
    print(f"总费用 {sol.total_cost}\n")


if __name__ == "__main__":
    main()

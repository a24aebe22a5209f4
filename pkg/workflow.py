"""
基准测试工作流

工作流结构:
1. start - 记录本次扫描的规模、种子与精确求解上限
2. solve_cell - 每个 (规模, 种子) 格子通过 Send 并行执行:
   生成实例 -> 启发式求解 -> 规模不超过上限时运行精确求解 -> 计算差距
3. collect_rows - 汇聚所有格子，按 (规模, 种子) 排序，保证输出与完成顺序无关

使用 LangGraph 的 Send 机制实现并行执行，格子之间互不依赖。
"""
import logging
import operator
import time
from dataclasses import dataclass, field
from datetime import datetime
from typing import Annotated, Any, Dict, List, Optional, Sequence, Tuple, TypedDict

import pandas as pd
from langgraph.graph import END, StateGraph
from langgraph.types import Send

from solvers import SenderRule, SolveStatus, compare_solutions, run_heuristic, solve_exact, verify_solution
from solvers.models import format_fraction
from tools.fixtures import Fixture, published_fixtures
from tools.generator import GenConfig, SupplyMode, generate

logger = logging.getLogger(__name__)

BENCH_COLUMNS = [
    "size",
    "seed",
    "arcs",
    "supply",
    "heuristic_status",
    "heuristic_cost",
    "exact_status",
    "exact_cost",
    "absolute_gap",
    "relative_gap",
    "dispatches",
    "wall_heuristic_s",
    "wall_exact_s",
]
TIMING_COLUMNS = ["wall_heuristic_s", "wall_exact_s"]
# 可能为空的整数列
NULLABLE_INT_COLUMNS = ["exact_cost", "absolute_gap"]

FIXTURE_COLUMNS = [
    "name",
    "nodes",
    "arcs",
    "supply",
    "published_cost",
    "heuristic_status",
    "heuristic_cost",
    "exact_status",
    "exact_cost",
    "absolute_gap",
]


# ============== 状态定义 ==============
class BenchCell(TypedDict):
    """单个格子的任务"""
    size: int
    seed: int
    density: float
    capacity_range: Tuple[int, int]
    cost_range: Tuple[int, int]
    rule: str
    run_exact: bool


class BenchState(TypedDict):
    """工作流状态"""
    # 输入参数
    cells: List[BenchCell]
    exact_cutoff: int

    # 各格子的输出
    rows: Annotated[List[Dict[str, Any]], operator.add]
    errors: Annotated[List[str], operator.add]

    # 排序后的结果
    report: List[Dict[str, Any]]


# ============== 节点 ==============
def start_bench(state: BenchState):
    """入口节点，只记录日志"""
    sizes = sorted({cell["size"] for cell in state["cells"]})
    logger.info("=" * 80)
    logger.info("【步骤1】基准测试开始 (start_bench)")
    logger.info("=" * 80)
    logger.info(f"规模: {sizes}, 格子数: {len(state['cells'])}, 精确求解上限: n <= {state['exact_cutoff']}")
    logger.info(f"当前时间: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    logger.info("=" * 80)
    return {}


def dispatch_cells(state: BenchState):
    """把每个格子分发到 solve_cell"""
    return [Send("solve_cell", cell) for cell in state["cells"]]


def solve_cell(cell: BenchCell):
    """
    求解一个 (规模, 种子) 格子

    返回:
        {"rows": [行]}，出错时返回 {"errors": [描述]}
    """
    label = f"n={cell['size']}, seed={cell['seed']}"
    try:
        instance = generate(
            GenConfig(
                node_count=cell["size"],
                density=cell["density"],
                capacity_range=tuple(cell["capacity_range"]),
                cost_range=tuple(cell["cost_range"]),
                seed=cell["seed"],
                supply_mode=SupplyMode.MAX_FLOW,
            )
        )

        started = time.perf_counter()
        heuristic = run_heuristic(instance, SenderRule(cell["rule"]))
        wall_heuristic = time.perf_counter() - started

        row: Dict[str, Any] = {
            "size": cell["size"],
            "seed": cell["seed"],
            "arcs": len(instance.arcs),
            "supply": instance.supply,
            "heuristic_status": heuristic.status.value,
            "heuristic_cost": heuristic.total_cost,
            "exact_status": "",
            "exact_cost": None,
            "absolute_gap": None,
            "relative_gap": "",
            "dispatches": heuristic.dispatch_count,
            "wall_heuristic_s": round(wall_heuristic, 6),
            "wall_exact_s": None,
        }

        if cell["run_exact"]:
            started = time.perf_counter()
            exact = solve_exact(instance)
            row["wall_exact_s"] = round(time.perf_counter() - started, 6)
            violations = verify_solution(instance, exact)
            if violations:
                raise RuntimeError(f"精确解校验失败: {violations}")
            report = compare_solutions(instance, heuristic, exact)
            row.update(
                exact_status=report.exact_status.value,
                exact_cost=report.exact_cost,
                absolute_gap=report.absolute_gap,
                relative_gap=format_fraction(report.relative_gap),
            )

        logger.info(
            f"【格子完成】{label}: 启发式 {row['heuristic_status']} {row['heuristic_cost']}, "
            f"精确 {row['exact_status'] or '-'} {row['exact_cost'] if row['exact_cost'] is not None else '-'}"
        )
        return {"rows": [row]}

    except Exception as e:
        logger.error(f"【错误】格子 {label} 执行失败: {e}")
        return {"errors": [f"{label}: {e}"]}


def collect_rows(state: BenchState):
    """汇聚节点: 按 (规模, 种子) 排序"""
    rows = sorted(state.get("rows", []), key=lambda row: (row["size"], row["seed"]))
    logger.info("=" * 80)
    logger.info(f"【汇聚】完成 {len(rows)}/{len(state['cells'])} 个格子, 错误 {len(state.get('errors', []))} 个")
    logger.info("=" * 80)
    return {"report": rows}


def create_workflow():
    """创建基准测试工作流"""
    workflow = StateGraph(BenchState)
    workflow.add_node("start", start_bench)
    workflow.add_node("solve_cell", solve_cell)
    workflow.add_node("collect_rows", collect_rows)

    workflow.set_entry_point("start")
    workflow.add_conditional_edges("start", dispatch_cells, ["solve_cell"])
    workflow.add_edge("solve_cell", "collect_rows")
    workflow.add_edge("collect_rows", END)
    return workflow.compile()


# ============== 结果 ==============
@dataclass
class BenchReport:
    """按 (规模, 种子) 排序的基准测试结果"""

    rows: List[Dict[str, Any]] = field(default_factory=list)

    def to_frame(self, include_timings: bool = True) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows, columns=BENCH_COLUMNS)
        for column in NULLABLE_INT_COLUMNS:
            frame[column] = frame[column].astype("Int64")
        if include_timings:
            return frame
        return frame.drop(columns=TIMING_COLUMNS)

    def to_csv(self, include_timings: bool = True) -> str:
        return self.to_frame(include_timings).to_csv(index=False, lineterminator="\n")

    def check(self) -> List[str]:
        """有差距的行差距必须非负"""
        return [
            f"negative gap at size {row['size']} seed {row['seed']}: {row['absolute_gap']}"
            for row in self.rows
            if row["absolute_gap"] is not None and row["absolute_gap"] < 0
        ]

    def to_markdown(self) -> str:
        """Markdown 摘要：每个规模一行的汇总，再附完整表格"""
        frame = self.to_frame(include_timings=True)
        lines = ["## Summary by size", ""]
        lines.append("| size | cells | completed | mean heuristic cost | mean exact cost | mean relative gap |")
        lines.append("|---|---|---|---|---|---|")
        for size, group in frame.groupby("size", sort=True):
            completed = int((group["heuristic_status"] == SolveStatus.COMPLETED.value).sum())
            exact = group["exact_cost"].dropna()
            gaps = pd.to_numeric(group["relative_gap"], errors="coerce").dropna()
            lines.append(
                f"| {size} | {len(group)} | {completed} | {group['heuristic_cost'].mean():.1f} | "
                f"{f'{exact.mean():.1f}' if len(exact) else '-'} | {f'{gaps.mean():.6f}' if len(gaps) else '-'} |"
            )
        lines += ["", "## All cells", "", _markdown_table(frame)]
        return "\n".join(lines) + "\n"


def _markdown_table(frame: pd.DataFrame) -> str:
    header = "| " + " | ".join(frame.columns) + " |"
    rule = "|" + "---|" * len(frame.columns)
    body = [
        "| " + " | ".join("" if pd.isna(value) else str(value) for value in row) + " |"
        for row in frame.itertuples(index=False)
    ]
    return "\n".join([header, rule] + body)


def run_bench(
    sizes: Sequence[int],
    seeds: int,
    exact_cutoff: int = 300,
    density: float = 0.3,
    capacity_range: Tuple[int, int] = (1, 15),
    cost_range: Tuple[int, int] = (1, 15),
    rule: SenderRule = SenderRule.INDEX_ORDER,
    max_concurrency: Optional[int] = None,
) -> BenchReport:
    """
    运行基准测试扫描

    参数:
        sizes: 节点数列表
        seeds: 每个规模使用的种子个数（种子为 0..seeds-1）
        exact_cutoff: 节点数不超过该值时运行精确求解器
        density, capacity_range, cost_range: 生成器参数
        rule: 发送节点选择规则
        max_concurrency: 并发求解的格子数上限

    返回:
        BenchReport

    异常:
        RuntimeError: 有格子执行失败
    """
    cells: List[BenchCell] = [
        BenchCell(
            size=size,
            seed=seed,
            density=density,
            capacity_range=tuple(capacity_range),
            cost_range=tuple(cost_range),
            rule=SenderRule(rule).value,
            run_exact=size <= exact_cutoff,
        )
        for size in sizes
        for seed in range(seeds)
    ]

    app = create_workflow()
    config = {"max_concurrency": max_concurrency} if max_concurrency else {}
    result = app.invoke(
        {"cells": cells, "exact_cutoff": exact_cutoff, "rows": [], "errors": [], "report": []},
        config=config,
    )
    if result.get("errors"):
        raise RuntimeError("基准测试有格子执行失败: " + "; ".join(result["errors"]))
    return BenchReport(rows=result["report"])


# ============== 算例对比 ==============
def run_fixture_comparison(
    fixtures: Optional[Sequence[Fixture]] = None, rule: SenderRule = SenderRule.INDEX_ORDER
) -> pd.DataFrame:
    """
    对每个算例运行启发式与精确求解器，并与已发表的费用并列

    返回:
        DataFrame，列为 FIXTURE_COLUMNS
    """
    rows = []
    for item in fixtures if fixtures is not None else published_fixtures():
        instance = item.instance
        heuristic = run_heuristic(instance, rule)
        exact = solve_exact(instance)
        report = compare_solutions(instance, heuristic, exact)
        rows.append(
            {
                "name": item.name,
                "nodes": instance.node_count,
                "arcs": len(instance.arcs),
                "supply": instance.supply,
                "published_cost": item.published_cost,
                "heuristic_status": report.heuristic_status.value,
                "heuristic_cost": report.heuristic_cost,
                "exact_status": report.exact_status.value,
                "exact_cost": report.exact_cost,
                "absolute_gap": report.absolute_gap,
            }
        )
        logger.info(
            f"【算例】{item.name}: 启发式 {report.heuristic_status.value} {report.heuristic_cost}, "
            f"精确 {report.exact_status.value} {report.exact_cost}, 已发表 {item.published_cost}"
        )
    frame = pd.DataFrame(rows, columns=FIXTURE_COLUMNS)
    for column in ("published_cost", "absolute_gap"):
        frame[column] = frame[column].astype("Int64")
    return frame


def fixtures_markdown(frame: pd.DataFrame) -> str:
    """算例对比的 Markdown 报告正文"""
    completed = int((frame["heuristic_status"] == SolveStatus.COMPLETED.value).sum())
    lines = [
        "Supply is the maximum feasible flow for the matrix examples (the published tables omit it).",
        "Published costs are shown for comparison only.",
        "",
        f"Heuristic completed on {completed} of {len(frame)} examples.",
        "",
        _markdown_table(frame),
    ]
    return "\n".join(lines) + "\n"


# ============== 主程序 ==============
if __name__ == "__main__":
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    logger.info("#" * 80)
    logger.info("# 基准测试工作流 - 测试程序")
    logger.info("#" * 80)
    print(run_bench([10, 20], seeds=2).to_csv())

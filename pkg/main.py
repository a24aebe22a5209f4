#!/usr/bin/env python3
"""
费用-流量求和启发式 - 命令行入口

使用方法:
    python main.py solve example1.matrix
    python main.py solve network.dimacs --supply 4 --trace trace.csv
    python main.py exact network.dimacs
    python main.py verify network.dimacs
    python main.py gen --nodes 50 --seed 1 -o n50.matrix
    python main.py bench --sizes 50,100 --seeds 3
    python main.py fixtures --report --pdf

退出码:
    0 完成 / 报告已输出
    1 启发式滞留 (stranded)
    2 供给量超过网络最大流量 (infeasible)
    3 输入错误（文件无法读取或解析）
    4 参数错误
    5 内部错误
"""
import argparse
import logging
import os
import sys
import traceback
from typing import List, Optional, Sequence, Tuple

# 添加项目根目录到 Python 路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import Settings, load_settings
from solvers import (
    ConfigError,
    ContractError,
    FlowInstance,
    FlowSolution,
    InstanceFormatError,
    InvalidInstanceError,
    SenderRule,
    SolveStatus,
    compare_solutions,
    max_feasible_flow,
    run_heuristic,
    solve_exact,
    verify_solution,
)
from solvers.models import format_fraction

EXIT_OK = 0
EXIT_STRANDED = 1
EXIT_INFEASIBLE = 2
EXIT_INPUT = 3
EXIT_USAGE = 4
EXIT_INTERNAL = 5

STATUS_EXIT = {
    SolveStatus.COMPLETED: EXIT_OK,
    SolveStatus.STRANDED: EXIT_STRANDED,
    SolveStatus.INFEASIBLE: EXIT_INFEASIBLE,
}

logger = logging.getLogger(__name__)


class FlowArgumentParser(argparse.ArgumentParser):
    """参数错误以退出码 4 结束（argparse 默认为 2，与 infeasible 冲突）"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ============== 参数类型 ==============
def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"不是整数: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"必须 >= 1: {value}")
    return value


def non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"不是整数: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"必须 >= 0: {value}")
    return value


def int_range(text: str) -> Tuple[int, int]:
    """'lo:hi' -> (lo, hi)"""
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"区间格式应为 lo:hi，实际为 {text!r}")
    lo, hi = (positive_int(part) for part in parts)
    if hi < lo:
        raise argparse.ArgumentTypeError(f"区间上界小于下界: {text!r}")
    return lo, hi


def size_list(text: str) -> List[int]:
    """'50,100,200' -> [50, 100, 200]"""
    sizes = [positive_int(part) for part in text.split(",") if part.strip()]
    if not sizes or any(size < 2 for size in sizes):
        raise argparse.ArgumentTypeError(f"规模列表必须是 >= 2 的整数，实际为 {text!r}")
    return sizes


def density(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"不是数字: {text!r}") from None
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"密度必须在 (0, 1] 内: {value}")
    return value


# ============== 输出 ==============
def print_solution(sol: FlowSolution, supply: int) -> None:
    print(f"status {sol.status.value}")
    print(f"supply {supply}")
    print(f"shipped {sol.shipped}")
    print(f"cost {sol.total_cost}")


def check_solution(instance: FlowInstance, sol: FlowSolution) -> None:
    violations = verify_solution(instance, sol)
    if violations:
        raise ContractError("解校验失败: " + "; ".join(violations))


def _load(args) -> FlowInstance:
    from tools.instance_io import load_instance

    return load_instance(args.path, fmt=args.format, supply=args.supply)


# ============== 子命令 ==============
def cmd_solve(args, settings: Settings) -> int:
    """启发式求解，可选写出发送记录 CSV"""
    instance = _load(args)
    max_flow = max_feasible_flow(instance)
    if instance.supply > max_flow:
        logger.warning("供给量 %d 超过网络最大流量 %d", instance.supply, max_flow)
        print(f"status {SolveStatus.INFEASIBLE.value}")
        print(f"supply {instance.supply}")
        print(f"max_flow {max_flow}")
        return EXIT_INFEASIBLE

    sol = run_heuristic(instance, SenderRule(args.sender_rule))
    check_solution(instance, sol)
    print_solution(sol, instance.supply)
    print(f"dispatches {sol.dispatch_count}")

    if args.trace:
        from tools.instance_io import write_trace

        with open(args.trace, "w", encoding="utf-8", newline="") as f:
            f.write(write_trace(sol))
        logger.info("发送记录已写入 %s", args.trace)
    return STATUS_EXIT[sol.status]


def cmd_exact(args, settings: Settings) -> int:
    """逐次最短路精确求解"""
    instance = _load(args)
    sol = solve_exact(instance)
    check_solution(instance, sol)
    print_solution(sol, instance.supply)
    print(f"augmentations {len(sol.augmentations)}")
    return STATUS_EXIT[sol.status]


def cmd_verify(args, settings: Settings) -> int:
    """同时运行两个求解器并报告差距，差距未定义时省略差距行"""
    instance = _load(args)
    heuristic = run_heuristic(instance, SenderRule(args.sender_rule))
    exact = solve_exact(instance)
    check_solution(instance, heuristic)
    check_solution(instance, exact)
    report = compare_solutions(instance, heuristic, exact)

    print(f"supply {report.supply}")
    print(f"heuristic_status {report.heuristic_status.value}")
    print(f"heuristic_shipped {report.heuristic_shipped}")
    print(f"heuristic_cost {report.heuristic_cost}")
    print(f"exact_status {report.exact_status.value}")
    print(f"exact_shipped {report.exact_shipped}")
    print(f"exact_cost {report.exact_cost}")
    if report.absolute_gap is not None:
        print(f"absolute_gap {report.absolute_gap}")
    if report.relative_gap is not None:
        print(f"relative_gap {format_fraction(report.relative_gap)}")
    return EXIT_OK


def cmd_gen(args, settings: Settings) -> int:
    """生成随机实例"""
    from tools.generator import GenConfig, SupplyMode, generate
    from tools.instance_io import write_dimacs, write_matrix

    try:
        config = GenConfig(
            node_count=args.nodes,
            density=args.density,
            capacity_range=args.cap_range,
            cost_range=args.cost_range,
            seed=args.seed,
            supply_mode=SupplyMode.FIXED if args.supply is not None else SupplyMode.MAX_FLOW,
            supply=args.supply,
        )
    except ConfigError as e:
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_USAGE

    instance = generate(config)
    text = write_dimacs(instance) if args.format == "dimacs" else write_matrix(instance)
    echo = f"config {config.describe()}\narcs {len(instance.arcs)}\nsupply {instance.supply}"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        print(echo)
        print(f"written {args.output}")
    else:
        sys.stdout.write(text)
        print(echo, file=sys.stderr)
    return EXIT_OK


def _write_reports(markdown_text: str, kind: str, args, settings: Settings) -> None:
    from tools.file_saver import save_bench_to_markdown, save_fixtures_to_markdown
    from tools.pdf_generator import PDFGenerator

    save = save_bench_to_markdown if kind == "bench" else save_fixtures_to_markdown
    md_path = save(markdown_text, settings.reports_dir)
    print(f"report {md_path}", file=sys.stderr)
    if args.pdf:
        title = "Benchmark report" if kind == "bench" else "Worked examples comparison"
        pdf_path = PDFGenerator(settings.reports_dir).render_markdown_file(md_path, title)
        print(f"pdf {pdf_path}", file=sys.stderr)


def cmd_bench(args, settings: Settings) -> int:
    """基准测试扫描，CSV 输出到标准输出"""
    from workflow import run_bench

    exact_cutoff = args.exact_cutoff if args.exact_cutoff is not None else settings.exact_cutoff
    report = run_bench(
        sizes=args.sizes,
        seeds=args.seeds,
        exact_cutoff=exact_cutoff,
        density=args.density,
        capacity_range=args.cap_range,
        cost_range=args.cost_range,
        rule=SenderRule(args.sender_rule),
        max_concurrency=args.workers or settings.bench_workers,
    )
    violations = report.check()
    if violations:
        raise ContractError("; ".join(violations))
    sys.stdout.write(report.to_csv(include_timings=not args.no_timings))
    if args.report or args.pdf:
        _write_reports(report.to_markdown(), "bench", args, settings)
    return EXIT_OK


def cmd_fixtures(args, settings: Settings) -> int:
    """九个已发表算例的对比，CSV 输出到标准输出"""
    from workflow import fixtures_markdown, run_fixture_comparison

    frame = run_fixture_comparison(rule=SenderRule(args.sender_rule))
    sys.stdout.write(frame.to_csv(index=False, lineterminator="\n"))
    if args.report or args.pdf:
        _write_reports(fixtures_markdown(frame), "fixtures", args, settings)
    return EXIT_OK


# ============== 参数解析 ==============
def build_parser() -> argparse.ArgumentParser:
    parser = FlowArgumentParser(
        prog="flowtab",
        description="单源单汇最小费用流: 费用-流量求和启发式与精确求解器",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  python main.py solve example1.matrix                 # 启发式求解
  python main.py verify example2.dimacs                # 启发式与最优解的差距
  python main.py gen --nodes 50 --seed 1 -o n50.matrix # 生成随机实例
  python main.py bench --sizes 50,100 --seeds 3        # 基准测试
        """,
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True

    common = FlowArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="输出 INFO 级别日志到标准错误")

    instance_args = FlowArgumentParser(add_help=False)
    instance_args.add_argument("path", help="实例文件路径")
    instance_args.add_argument(
        "--format", choices=["dimacs", "matrix"], default=None, help="文件格式，默认按扩展名判断"
    )
    instance_args.add_argument("--supply", type=positive_int, default=None, help="覆盖文件中的供给量")

    rule_args = FlowArgumentParser(add_help=False)
    rule_args.add_argument(
        "--sender-rule",
        choices=[rule.value for rule in SenderRule],
        default=SenderRule.INDEX_ORDER.value,
        help="发送节点选择规则: index 编号最小 (默认), signed 有符号最大",
    )

    gen_args = FlowArgumentParser(add_help=False)
    gen_args.add_argument("--density", type=density, default=0.3, help="连弧概率 (默认 0.3)")
    gen_args.add_argument("--cap-range", type=int_range, default=(1, 15), help="容量区间 lo:hi (默认 1:15)")
    gen_args.add_argument("--cost-range", type=int_range, default=(1, 15), help="费用区间 lo:hi (默认 1:15)")

    report_args = FlowArgumentParser(add_help=False)
    report_args.add_argument("--report", action="store_true", help="在报告目录写 Markdown 报告")
    report_args.add_argument("--pdf", action="store_true", help="同时渲染 PDF（隐含 --report）")

    p = subparsers.add_parser("solve", parents=[common, instance_args, rule_args], help="启发式求解")
    p.add_argument("--trace", default=None, help="发送记录 CSV 输出路径")
    p.set_defaults(handler=cmd_solve)

    p = subparsers.add_parser("exact", parents=[common, instance_args], help="精确求解")
    p.set_defaults(handler=cmd_exact)

    p = subparsers.add_parser("verify", parents=[common, instance_args, rule_args], help="最优性差距")
    p.set_defaults(handler=cmd_verify)

    p = subparsers.add_parser("gen", parents=[common, gen_args], help="生成随机实例")
    p.add_argument("--nodes", type=positive_int, required=True, help="节点数 (>= 2)")
    p.add_argument("--seed", type=non_negative_int, default=0, help="随机种子 (默认 0)")
    p.add_argument("--supply", type=positive_int, default=None, help="固定供给量，默认取最大流量")
    p.add_argument("--format", choices=["dimacs", "matrix"], default="matrix", help="输出格式 (默认 matrix)")
    p.add_argument("-o", "--output", default=None, help="输出路径，默认写到标准输出")
    p.set_defaults(handler=cmd_gen)

    p = subparsers.add_parser("bench", parents=[common, gen_args, rule_args, report_args], help="基准测试")
    p.add_argument("--sizes", type=size_list, default=[50, 100, 200, 500, 1000], help="节点数列表，逗号分隔")
    p.add_argument("--seeds", type=positive_int, default=1, help="每个规模的种子个数，种子为 0..k-1")
    p.add_argument("--exact-cutoff", type=non_negative_int, default=None, help="运行精确求解的最大节点数")
    p.add_argument("--workers", type=positive_int, default=None, help="并发格子数上限")
    p.add_argument("--no-timings", action="store_true", help="省略 wall_* 计时列，输出逐字节可复现")
    p.set_defaults(handler=cmd_bench)

    p = subparsers.add_parser("fixtures", parents=[common, rule_args, report_args], help="已发表算例对比")
    p.set_defaults(handler=cmd_fixtures)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        settings = load_settings()
    except ConfigError as e:
        print(f"错误: 配置无效 - {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.INFO if args.verbose else settings.log_level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
        force=True,
    )

    try:
        return args.handler(args, settings)
    except (InstanceFormatError, InvalidInstanceError) as e:
        print(f"错误: 输入无效 - {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"错误: 文件读写失败 - {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        print(f"错误: 执行过程出错 - {e}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

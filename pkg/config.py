"""
运行配置 - 从环境变量 / .env 读取

    FLOWTAB_EXACT_CUTOFF   基准测试中运行精确求解器的最大节点数（默认 300）
    FLOWTAB_REPORTS_DIR    Markdown / PDF 报告目录（默认项目根目录下的 reports/）
    FLOWTAB_LOG_LEVEL      日志级别（默认 WARNING）
    FLOWTAB_BENCH_WORKERS  基准测试并发求解的格子数上限（默认 4）
"""
import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from solvers.exceptions import ConfigError

# 加载环境变量
load_dotenv()

DEFAULT_REPORTS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "reports")


@dataclass(frozen=True)
class Settings:
    exact_cutoff: int = 300
    reports_dir: str = DEFAULT_REPORTS_DIR
    log_level: str = "WARNING"
    bench_workers: int = 4


def _int_env(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} 必须是整数，实际为 {raw!r}") from None
    if value < minimum:
        raise ConfigError(f"{name} 必须 >= {minimum}，实际为 {value}")
    return value


def load_settings() -> Settings:
    """
    读取当前环境中的配置

    异常:
        ConfigError: 取值非法
    """
    log_level = os.getenv("FLOWTAB_LOG_LEVEL", "WARNING").upper()
    if not isinstance(logging.getLevelName(log_level), int):
        raise ConfigError(f"FLOWTAB_LOG_LEVEL 不是合法的日志级别: {log_level!r}")
    return Settings(
        exact_cutoff=_int_env("FLOWTAB_EXACT_CUTOFF", 300, 0),
        reports_dir=os.getenv("FLOWTAB_REPORTS_DIR") or DEFAULT_REPORTS_DIR,
        log_level=log_level,
        bench_workers=_int_env("FLOWTAB_BENCH_WORKERS", 4, 1),
    )

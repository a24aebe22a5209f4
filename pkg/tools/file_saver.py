"""
文件保存工具 - 将基准测试与算例对比结果保存为 Markdown 报告
"""
import logging
import os
from datetime import datetime
from typing import Optional

logger = logging.getLogger(__name__)


def _ensure_reports_dir(reports_dir: Optional[str] = None) -> str:
    """确保 reports 目录存在，默认使用项目根目录下的 reports/"""
    if reports_dir is None:
        reports_dir = os.path.join(os.path.dirname(os.path.dirname(__file__)), "reports")
    os.makedirs(reports_dir, exist_ok=True)
    return reports_dir


def _save(prefix: str, title: str, content: str, reports_dir: Optional[str]) -> str:
    reports_dir = _ensure_reports_dir(reports_dir)
    now = datetime.now()
    filename = os.path.join(reports_dir, f"{prefix}_{now.strftime('%Y%m%d_%H%M%S')}.md")

    header = f"""# {title}

**Generated**: {now.strftime('%Y-%m-%d %H:%M:%S')}

---

"""
    with open(filename, "w", encoding="utf-8") as f:
        f.write(header + content)
    logger.info("报告已保存至: %s", filename)
    return filename


def save_bench_to_markdown(content: str, reports_dir: Optional[str] = None) -> str:
    """
    将基准测试结果保存为 Markdown 文件

    参数:
        content: 报告正文（Markdown）
        reports_dir: 报告目录，默认为项目根目录下的 reports/

    返回:
        str: 保存的文件路径
    """
    return _save("bench", "Benchmark report", content, reports_dir)


def save_fixtures_to_markdown(content: str, reports_dir: Optional[str] = None) -> str:
    """
    将九个算例的对比结果保存为 Markdown 文件

    返回:
        str: 保存的文件路径
    """
    return _save("fixtures", "Worked examples comparison", content, reports_dir)

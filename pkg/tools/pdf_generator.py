"""
PDF 生成工具 - 将 Markdown 报告渲染为 PDF
"""
import logging
import os
import re
from datetime import datetime
from typing import Optional

from fpdf import FPDF
from markdown import markdown

logger = logging.getLogger(__name__)


class PDFGenerator:
    """
    PDF 生成器

    报告正文先由 markdown 转为 HTML 再交给 fpdf2 排版；
    HTML 排版失败时退回到逐行纯文本输出。
    """

    def __init__(self, reports_dir: Optional[str] = None):
        """
        参数:
            reports_dir: 报告目录路径，默认为项目根目录下的 reports/
        """
        if reports_dir is None:
            self.reports_dir = os.path.join(os.path.dirname(os.path.dirname(__file__)), "reports")
        else:
            self.reports_dir = reports_dir

    @staticmethod
    def _latin1(text: str) -> str:
        # 内置字体只支持 latin-1
        return text.replace("∞", "inf").encode("latin-1", "replace").decode("latin-1")

    def md_to_text(self, md_content: str) -> str:
        """将 Markdown 转换为纯文本，保留段落与表格的行结构"""
        text = re.sub(r"^#+ (.*?)$", r"\n\1\n", md_content, flags=re.MULTILINE)
        text = re.sub(r"^[\s\-\|:]+$", "", text, flags=re.MULTILINE)
        text = re.sub(r"\*\*", "", text)
        text = re.sub(r"\n{3,}", "\n\n", text)
        return text.strip()

    def create_pdf(self, md_content: str, output_path: str, title: Optional[str] = None) -> str:
        """
        创建 PDF 文件

        参数:
            md_content: Markdown 正文
            output_path: 输出路径
            title: 标题

        返回:
            str: 输出路径
        """
        pdf = FPDF()
        pdf.set_left_margin(15)
        pdf.set_right_margin(15)
        pdf.add_page()

        if title:
            pdf.set_font("Helvetica", "B", 18)
            pdf.cell(0, 12, self._latin1(title), new_x="LMARGIN", new_y="NEXT", align="C")
        pdf.set_font("Helvetica", "", 9)
        pdf.cell(0, 8, f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}", new_x="LMARGIN", new_y="NEXT", align="C")
        pdf.ln(6)

        body = self._latin1(md_content)
        try:
            pdf.write_html(markdown(body, extensions=["tables"]))
        except Exception as e:
            logger.warning("HTML 排版失败，改用纯文本输出: %s", e)
            available_width = pdf.w - pdf.l_margin - pdf.r_margin
            pdf.set_font("Courier", "", 8)
            for line in self.md_to_text(body).split("\n"):
                if not line.strip():
                    pdf.ln(3)
                    continue
                pdf.multi_cell(available_width, 5, line, new_x="LMARGIN", new_y="NEXT")

        pdf.output(output_path)
        logger.info("PDF 报告已生成: %s", output_path)
        return output_path

    def render_markdown_file(self, md_path: str, title: Optional[str] = None) -> str:
        """
        把 reports/ 中的一份 Markdown 报告渲染为同名 PDF

        返回:
            str: 生成的 PDF 文件路径
        """
        with open(md_path, "r", encoding="utf-8") as f:
            md_content = f.read()
        output_path = os.path.splitext(md_path)[0] + ".pdf"
        return self.create_pdf(md_content, output_path, title)


def generate_pdf_report(md_path: str, title: Optional[str] = None) -> str:
    """
    便捷函数：把一份 Markdown 报告渲染为 PDF

    参数:
        md_path: Markdown 报告路径
        title: PDF 标题

    返回:
        str: 生成的 PDF 文件路径
    """
    generator = PDFGenerator(os.path.dirname(md_path))
    return generator.render_markdown_file(md_path, title)

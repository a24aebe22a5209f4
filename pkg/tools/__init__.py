"""工具模块"""
from .instance_io import (
    detect_format,
    load_instance,
    parse_dimacs,
    parse_matrix,
    trace_frame,
    write_dimacs,
    write_matrix,
    write_trace,
)
from .generator import GenConfig, SupplyMode, generate
from .fixtures import Fixture, extra_fixtures, fixture, published_fixtures
from .file_saver import save_bench_to_markdown, save_fixtures_to_markdown
from .pdf_generator import PDFGenerator, generate_pdf_report

__all__ = [
    'detect_format',
    'load_instance',
    'parse_dimacs',
    'parse_matrix',
    'trace_frame',
    'write_dimacs',
    'write_matrix',
    'write_trace',
    'GenConfig',
    'SupplyMode',
    'generate',
    'Fixture',
    'extra_fixtures',
    'fixture',
    'published_fixtures',
    'save_bench_to_markdown',
    'save_fixtures_to_markdown',
    'PDFGenerator',
    'generate_pdf_report',
]

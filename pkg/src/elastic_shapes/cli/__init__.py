"""Command-line tools: file I/O, the flat baseline, synthetic data and benchmarks."""

from .main import build_parser, main

__all__ = ["build_parser", "main"]

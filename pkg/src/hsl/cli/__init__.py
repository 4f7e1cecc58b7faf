"""Command line interface: expression language, suite runner and reports."""

from .evaluator import eval_text, evaluate, render
from .parser import ParseError, parse_expr, to_text
from .runner import SuiteConfig, enumerate_cases, run

__all__ = ["ParseError", "SuiteConfig", "enumerate_cases", "eval_text", "evaluate", "parse_expr", "render", "run", "to_text"]

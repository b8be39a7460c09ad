"""Dialogue games for propositional validity."""

from .formula import parse, to_text
from .rules import PRESETS, parse_rules
from .search import SearchConfig, Status, search_strategy, verify_strategy, naive_search

__all__ = ["parse", "to_text", "PRESETS", "parse_rules", "SearchConfig", "Status",
           "search_strategy", "verify_strategy", "naive_search"]

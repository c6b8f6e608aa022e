"""Fact-checking toolkit: check-worthiness ranking for political debates and
answer verification for community QA forums."""

__version__ = "0.1.0"

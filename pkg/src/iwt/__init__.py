"""Exact sharp/flat Iwasawa-function toolkit for weight-two modular forms."""

__version__ = "0.1.0"

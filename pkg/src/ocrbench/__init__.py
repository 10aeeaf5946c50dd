"""Benchmarking harness for OCR text extraction from food packaging."""

__version__ = "0.1.0"

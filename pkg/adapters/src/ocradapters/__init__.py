"""Thin OCR-engine adapters speaking the canonical predictions CSV protocol."""

__version__ = "0.1.0"

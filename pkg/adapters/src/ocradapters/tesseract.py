"""Tesseract adapter: grayscale + contrast stretch + denoise, then the
LSTM engine via pytesseract."""

from __future__ import annotations

import sys

import numpy as np

from .common import EngineUnavailable, adapter_main
from .preprocess import tesseract_preprocess


def make_recognizer(args):
    try:
        import pytesseract
    except ImportError as exc:
        raise EngineUnavailable("pytesseract is not installed") from exc
    try:
        pytesseract.get_tesseract_version()
    except Exception as exc:  # missing binary surfaces as TesseractNotFoundError
        raise EngineUnavailable(f"tesseract binary not usable: {exc}") from exc

    def recognize(image: np.ndarray) -> str:
        return pytesseract.image_to_string(image).strip()

    return recognize


def main(argv=None) -> int:
    return adapter_main(
        "Tesseract OCR adapter", make_recognizer, preprocess=tesseract_preprocess, argv=argv
    )


if __name__ == "__main__":
    sys.exit(main())

"""PaddleOCR adapter: default PP-OCR pipeline, no custom preprocessing."""

from __future__ import annotations

import sys

import numpy as np

from .common import EngineUnavailable, adapter_main


def make_recognizer(args):
    try:
        from paddleocr import PaddleOCR
    except ImportError as exc:
        raise EngineUnavailable("paddleocr is not installed") from exc
    try:
        engine = PaddleOCR(lang="en", show_log=False)
    except Exception as exc:
        raise EngineUnavailable(f"paddleocr could not initialize: {exc}") from exc

    def recognize(image: np.ndarray) -> str:
        result = engine.ocr(image)
        lines = []
        for page in result or []:
            for item in page or []:
                # item = [box, (text, confidence)]
                lines.append(item[1][0])
        return " ".join(lines).strip()

    return recognize


def main(argv=None) -> int:
    return adapter_main("PaddleOCR adapter", make_recognizer, argv=argv)


if __name__ == "__main__":
    sys.exit(main())

"""EasyOCR adapter: engine defaults, no custom preprocessing."""

from __future__ import annotations

import sys

import numpy as np

from .common import EngineUnavailable, adapter_main


def make_recognizer(args):
    try:
        import easyocr
    except ImportError as exc:
        raise EngineUnavailable("easyocr is not installed") from exc
    try:
        reader = easyocr.Reader(["en"], verbose=False)
    except Exception as exc:  # model download / backend init can fail offline
        raise EngineUnavailable(f"easyocr could not initialize: {exc}") from exc

    def recognize(image: np.ndarray) -> str:
        return " ".join(easy_text for easy_text in reader.readtext(image, detail=0)).strip()

    return recognize


def main(argv=None) -> int:
    return adapter_main("EasyOCR adapter", make_recognizer, argv=argv)


if __name__ == "__main__":
    sys.exit(main())

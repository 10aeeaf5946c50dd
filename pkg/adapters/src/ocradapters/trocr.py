"""TrOCR adapter: RGB conversion plus optional horizontal band slicing
before inference, because full-image encoding fragments on dense layouts.

Band outputs are concatenated top to bottom with single spaces.
"""

from __future__ import annotations

import sys

import numpy as np

from .common import EngineUnavailable, adapter_main
from .preprocess import slice_horizontal_bands, to_rgb

MODEL_NAME = "microsoft/trocr-base-printed"


def make_recognizer(args):
    try:
        from transformers import TrOCRProcessor, VisionEncoderDecoderModel
    except ImportError as exc:
        raise EngineUnavailable("transformers (with torch) is not installed") from exc
    try:
        processor = TrOCRProcessor.from_pretrained(MODEL_NAME)
        model = VisionEncoderDecoderModel.from_pretrained(MODEL_NAME)
    except Exception as exc:  # model weights unavailable (offline, no cache)
        raise EngineUnavailable(f"cannot load {MODEL_NAME}: {exc}") from exc

    def recognize_band(band: np.ndarray) -> str:
        pixel_values = processor(images=band, return_tensors="pt").pixel_values
        ids = model.generate(pixel_values)
        return processor.batch_decode(ids, skip_special_tokens=True)[0].strip()

    return build_recognizer(recognize_band, slice_bands=args.slice)


def build_recognizer(recognize_band, slice_bands: bool):
    """Wrap a single-band recognizer with RGB conversion and slicing."""

    def recognize(image: np.ndarray) -> str:
        rgb = to_rgb(image)
        bands = slice_horizontal_bands(rgb) if slice_bands else [rgb]
        parts = [recognize_band(band) for band in bands]
        return " ".join(p for p in parts if p).strip()

    return recognize


def _add_slice_flag(parser):
    parser.add_argument(
        "--slice", action="store_true", help="split dense images into horizontal line bands"
    )


def main(argv=None) -> int:
    return adapter_main(
        "TrOCR adapter", make_recognizer, extra_args=[_add_slice_flag], argv=argv
    )


if __name__ == "__main__":
    sys.exit(main())

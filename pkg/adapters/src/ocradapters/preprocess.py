"""Image preprocessing shared by the adapters: grayscale conversion,
histogram contrast stretching, non-local means denoising, RGB conversion,
and horizontal line-band slicing for dense layouts."""

from __future__ import annotations

import numpy as np

from .common import EngineUnavailable

MIN_BAND_HEIGHT = 16

# Grayscale = ITU-R BT.601 luma weights.
_LUMA = np.array([0.299, 0.587, 0.114])


def to_grayscale(image: np.ndarray) -> np.ndarray:
    if image.ndim == 2:
        return image.astype(np.uint8, copy=False)
    rgb = image[..., :3].astype(np.float64)
    return (rgb @ _LUMA).round().clip(0, 255).astype(np.uint8)


def to_rgb(image: np.ndarray) -> np.ndarray:
    """Ensure a 3-channel image (ViT-style encoders need exactly three)."""
    if image.ndim == 2:
        return np.repeat(image[..., None], 3, axis=2)
    if image.shape[2] == 4:
        return image[..., :3].copy()
    return image


def contrast_stretch(image: np.ndarray, low_pct: float = 2.0, high_pct: float = 98.0) -> np.ndarray:
    """Histogram-based contrast stretch mapping the [low, high] percentile
    range onto the full 0-255 range."""
    gray = to_grayscale(image).astype(np.float64)
    low, high = np.percentile(gray, [low_pct, high_pct])
    if high <= low:
        return gray.astype(np.uint8)
    stretched = (gray - low) * 255.0 / (high - low)
    return stretched.clip(0, 255).astype(np.uint8)


def denoise_nonlocal_means(image: np.ndarray, strength: float = 10.0) -> np.ndarray:
    """Non-local means denoising; defaults (h=10, template 7, search 21)
    are the usual general-purpose settings."""
    try:
        import cv2
    except ImportError as exc:
        raise EngineUnavailable("opencv-python-headless (cv2) is required for denoising") from exc
    return cv2.fastNlMeansDenoising(
        to_grayscale(image), None, h=strength, templateWindowSize=7, searchWindowSize=21
    )


def tesseract_preprocess(image: np.ndarray) -> np.ndarray:
    """Grayscale conversion, contrast enhancement, non-local means denoising."""
    return denoise_nonlocal_means(contrast_stretch(to_grayscale(image)))


def slice_horizontal_bands(image: np.ndarray, min_height: int = MIN_BAND_HEIGHT) -> list[np.ndarray]:
    """Split an image into horizontal text bands at projection-profile valleys.

    Rows whose mean darkness stays below 10% of the profile peak count as
    gaps; runs between gaps become bands, top to bottom. Bands shorter than
    min_height are merged into the previous band. Returns [image] when no
    ink is found.
    """
    gray = to_grayscale(image).astype(np.float64)
    darkness = 255.0 - gray
    profile = darkness.mean(axis=1)
    peak = profile.max()
    if peak <= 0:
        return [image]
    has_ink = profile > 0.1 * peak

    spans: list[tuple[int, int]] = []
    start = None
    for y, ink in enumerate(has_ink):
        if ink and start is None:
            start = y
        elif not ink and start is not None:
            spans.append((start, y))
            start = None
    if start is not None:
        spans.append((start, len(has_ink)))
    if not spans:
        return [image]

    merged: list[list[int]] = []
    for lo, hi in spans:
        if merged and hi - lo < min_height:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    # A single leading short band has nothing to merge into; keep it.
    return [image[lo:hi] for lo, hi in merged]

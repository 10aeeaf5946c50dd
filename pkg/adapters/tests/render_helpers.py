"""Synthetic rendered text images for adapter tests."""

from __future__ import annotations

from pathlib import Path

from PIL import Image, ImageDraw


def render_text_image(path: Path, lines: list[str], width: int = 240, line_height: int = 24) -> Path:
    """White background, black text, one line per band with generous gaps.

    Rendered small then upscaled 3x so each text band is comfortably taller
    than the band-slicing minimum height.
    """
    height = line_height * (2 * len(lines) + 1)
    img = Image.new("L", (width, height), color=255)
    draw = ImageDraw.Draw(img)
    for i, line in enumerate(lines):
        draw.text((8, line_height * (2 * i + 1)), line, fill=0)
    img = img.resize((width * 3, height * 3), Image.NEAREST)
    img.save(path)
    return path

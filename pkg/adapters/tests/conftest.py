"""Fixtures for adapter tests."""

import pytest

from render_helpers import render_text_image


@pytest.fixture
def image_dir(tmp_path):
    d = tmp_path / "images"
    d.mkdir()
    texts = [
        ["ingredients: sugar salt"],
        ["ingredients: wheat flour"],
        ["nutrition information", "energy 450 kj"],
        ["ingredients: cocoa butter"],
        ["nutrition information", "protein 5 g"],
    ]
    for i, lines in enumerate(texts, start=1):
        render_text_image(d / f"20230613_04_03_045 ({i}).jpg", lines)
    return d

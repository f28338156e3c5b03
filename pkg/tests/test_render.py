import hashlib
import io
import json
import time
from pathlib import Path

import numpy as np
import pytest

from phasor.color import ColorScheme, parse_scheme
from phasor.expr import parse
from phasor.render import (
    Frame,
    Image,
    encode,
    ppm_bytes,
    read_png,
    read_ppm,
    render,
    save,
    write_png,
    write_ppm,
)

GOLDENS = json.loads((Path(__file__).parent / "goldens.json").read_text())
RATIONAL_FRAME = Frame(-2, 2, -2, 2, 256, 256)


def digest(img):
    return hashlib.sha256(ppm_bytes(img)).hexdigest()


def test_frame_pixel_centers():
    fr = Frame(-1, 1, -1, 1, 4, 2)
    assert fr.point(0, 0) == complex(-0.75, 0.5)
    assert fr.point(3, 1) == complex(0.75, -0.5)
    np.testing.assert_array_equal(fr.grid()[1, 3], fr.point(3, 1))
    with pytest.raises(ValueError):
        Frame(1, 0, 0, 1, 2, 2)


def test_render_identity_3x3():
    img = render(parse("z"), Frame(-1, 1, -1, 1, 3, 3))
    assert img.pixel(1, 1) == (128, 128, 128)
    assert img.pixel(2, 1) == (255, 0, 0)


def test_ppm_format():
    red = Image(1, 1, np.array([[[255, 0, 0]]], dtype=np.uint8))
    assert ppm_bytes(red) == bytes.fromhex("50360A3120310A3235350A FF0000".replace(" ", ""))
    two = Image(2, 1, np.zeros((1, 2, 3), dtype=np.uint8))
    data = ppm_bytes(two)
    assert data.startswith(b"P6\n2 1\n255\n") and len(data) == len(b"P6\n2 1\n255\n") + 6


def test_ppm_and_png_round_trip(rng):
    img = Image(7, 5, rng.integers(0, 256, (5, 7, 3), dtype=np.uint8))
    buf = io.BytesIO()
    write_ppm(img, buf)
    buf.seek(0)
    assert read_ppm(buf) == img
    buf = io.BytesIO()
    write_png(img, buf)
    buf.seek(0)
    assert buf.getvalue()[:8] == b"\x89PNG\r\n\x1a\n"
    assert read_png(buf) == img


def test_save_by_extension(tmp_path):
    img = render(parse("z"), Frame(-1, 1, -1, 1, 8, 8))
    save(img, tmp_path / "a.png")
    save(img, tmp_path / "a.ppm")
    assert (tmp_path / "a.png").read_bytes()[:4] == b"\x89PNG"
    assert (tmp_path / "a.ppm").read_bytes() == ppm_bytes(img)


@pytest.mark.parametrize("name", ["plain", "sawtooth", "grid", "domain"])
def test_rational_goldens(name):
    img = render(parse("(z-1)/(z^2+z+1)"), RATIONAL_FRAME, parse_scheme(name))
    assert digest(img) == GOLDENS[f"rational_{name}"]


def test_rational_layout():
    img = render(parse("(z-1)/(z^2+z+1)"), Frame(-2, 2, -2, 2, 400, 400))
    # zero at 1: all hues within a few pixels; pole at exp(2 pi i/3) likewise
    for z0 in (1, np.exp(2j * np.pi / 3), np.exp(-2j * np.pi / 3)):
        col = int((z0.real + 2) / 4 * 400)
        row = int((2 - z0.imag) / 4 * 400)
        patch = img.pixels[row - 4:row + 5, col - 4:col + 5].reshape(-1, 3)
        assert len({tuple(p) for p in patch}) > 20


def test_threads_do_not_change_output():
    f = parse("zeta(z)")
    fr = Frame(-10, 10, -2, 30, 64, 96)
    assert render(f, fr, threads=1) == render(f, fr, threads=4)


def test_scalar_multiple_gives_identical_plot():
    fr = Frame(-2, 2, -2, 2, 128, 128)
    a = render(parse("(z-1)/(z^2+z+1)"), fr)
    b = render(parse("2*((z-1)/(z^2+z+1))"), fr)
    assert ppm_bytes(a) == ppm_bytes(b)


def test_resolution_refinement():
    f = parse("(z-1)/(z^2+z+1)")
    lo = render(f, Frame(-2, 2, -2, 2, 128, 128)).pixels.astype(int)
    hi = render(f, Frame(-2, 2, -2, 2, 256, 256)).pixels.astype(int)
    down = hi.reshape(128, 2, 128, 2, 3).mean(axis=(1, 3))
    bad = (np.abs(down - lo) > 8).any(axis=2)
    assert bad.mean() <= 0.05


def test_supersample_runs():
    img = render(parse("z"), Frame(-1, 1, -1, 1, 16, 16), ColorScheme("plain"), supersample=True)
    assert img.pixels.shape == (16, 16, 3)


def test_render_512_with_png_under_two_seconds():
    t = time.perf_counter()
    img = render(parse("(z-1)/(z^2+z+1)"), Frame(-2, 2, -2, 2, 512, 512), ColorScheme("grid"))
    encode(img, "png")
    assert time.perf_counter() - t < 2.0

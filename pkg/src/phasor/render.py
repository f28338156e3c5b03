"""Sampling a function on a pixel grid, and PPM/PNG output."""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .color import PLAIN, ColorScheme, colorize
from .geometry import Rect

# Rows are always evaluated in blocks of this size, whatever the thread count,
# so results never depend on how the work was split.
ROW_BLOCK = 16


@dataclass(frozen=True)
class Frame:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    xres: int
    yres: int

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("frame needs xmin < xmax and ymin < ymax")
        if int(self.xres) != self.xres or int(self.yres) != self.yres or self.xres < 1 or self.yres < 1:
            raise ValueError("resolution must be positive integers")

    @classmethod
    def from_rect(cls, rect: Rect, xres: int, yres: int | None = None) -> "Frame":
        return cls(rect.xmin, rect.xmax, rect.ymin, rect.ymax, xres, xres if yres is None else yres)

    @property
    def rect(self) -> Rect:
        return Rect(self.xmin, self.xmax, self.ymin, self.ymax)

    @property
    def dx(self):
        return (self.xmax - self.xmin) / self.xres

    @property
    def dy(self):
        return (self.ymax - self.ymin) / self.yres

    def point(self, col, row, sub=(0.5, 0.5)):
        return complex(self.xmin + (col + sub[0]) * self.dx, self.ymax - (row + sub[1]) * self.dy)

    def grid(self, rows=None, sub=(0.5, 0.5)) -> np.ndarray:
        """Complex sample points, shape (rows, xres); row 0 is the top."""
        rows = np.arange(self.yres) if rows is None else np.asarray(rows)
        x = self.xmin + (np.arange(self.xres) + sub[0]) * self.dx
        y = self.ymax - (rows + sub[1]) * self.dy
        return x[None, :] + 1j * y[:, None]


@dataclass
class Image:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8, row-major

    def __post_init__(self):
        self.pixels = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError("pixel array shape does not match the image size")

    def pixel(self, col, row) -> tuple:
        return tuple(int(c) for c in self.pixels[row, col])

    def __eq__(self, other):
        return (isinstance(other, Image) and self.width == other.width
                and self.height == other.height and np.array_equal(self.pixels, other.pixels))


_SUBSAMPLES = ((0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75))


def _render_rows(fn, frame: Frame, scheme, rows, supersample):
    if not supersample:
        return colorize(scheme, fn(frame.grid(rows)))
    acc = np.zeros((len(rows), frame.xres, 3))
    for sub in _SUBSAMPLES:
        acc += colorize(scheme, fn(frame.grid(rows, sub)))
    return np.rint(acc / len(_SUBSAMPLES)).astype(np.uint8)


def render(expr, frame: Frame, scheme: ColorScheme = PLAIN, supersample: bool = False,
           threads: int | None = None) -> Image:
    """Color every pixel center by ``scheme(expr(z))``.

    ``expr`` is anything callable on a complex array (an ``Expr`` or a numpy
    function). Output is bit-identical for identical inputs regardless of
    ``threads``.
    """
    blocks = [np.arange(r, min(r + ROW_BLOCK, frame.yres)) for r in range(0, frame.yres, ROW_BLOCK)]
    pixels = np.empty((frame.yres, frame.xres, 3), dtype=np.uint8)

    def work(rows):
        pixels[rows[0]:rows[-1] + 1] = _render_rows(expr, frame, scheme, rows, supersample)

    if threads is not None and threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, blocks))
    else:
        for rows in blocks:
            work(rows)
    return Image(frame.xres, frame.yres, pixels)


# -- encoders -------------------------------------------------------------------

def ppm_bytes(image: Image) -> bytes:
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + image.pixels.tobytes()


def write_ppm(image: Image, sink) -> None:
    sink.write(ppm_bytes(image))


def read_ppm(source) -> Image:
    data = source.read() if hasattr(source, "read") else bytes(source)
    fields = []
    pos = 0
    while len(fields) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end:end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    pos += 1  # the single whitespace byte after maxval
    if fields[0] != b"P6" or int(fields[3]) != 255:
        raise ValueError("only binary 8-bit PPM (P6, maxval 255) is supported")
    w, h = int(fields[1]), int(fields[2])
    raw = np.frombuffer(data[pos:pos + w * h * 3], dtype=np.uint8)
    if raw.size != w * h * 3:
        raise ValueError("truncated PPM payload")
    return Image(w, h, raw.reshape(h, w, 3).copy())


def write_png(image: Image, sink) -> None:
    from PIL import Image as PILImage

    PILImage.fromarray(image.pixels).save(sink, format="PNG")


def read_png(source) -> Image:
    from PIL import Image as PILImage

    with PILImage.open(source) as im:
        arr = np.asarray(im.convert("RGB"))
    return Image(arr.shape[1], arr.shape[0], arr)


def save(image: Image, path: str) -> None:
    """Write by extension: ``.png`` as PNG, anything else as PPM."""
    with open(path, "wb") as fh:
        if str(path).lower().endswith(".png"):
            write_png(image, fh)
        else:
            write_ppm(image, fh)


def encode(image: Image, fmt: str = "ppm") -> bytes:
    buf = io.BytesIO()
    (write_png if fmt == "png" else write_ppm)(image, buf)
    return buf.getvalue()

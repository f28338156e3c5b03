"""Phase plots of complex functions and what can be read off them."""

from .color import ColorScheme, colorize, jump, parse_scheme, phase_to_color
from .errors import PhasorError
from .expr import Expr, blaschke, differentiate, evaluate, parse
from .geometry import Disk, PathPolyline, Rect, circle_path, rect_path
from .render import Frame, Image, render, save

__version__ = "0.1.0"

__all__ = [
    "ColorScheme",
    "Disk",
    "Expr",
    "Frame",
    "Image",
    "PathPolyline",
    "PhasorError",
    "Rect",
    "blaschke",
    "circle_path",
    "colorize",
    "differentiate",
    "evaluate",
    "jump",
    "parse",
    "parse_scheme",
    "phase_to_color",
    "rect_path",
    "render",
    "save",
]

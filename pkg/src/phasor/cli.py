"""Command-line front end: ``phasor render|analyze|flow|boundary|demo``."""

from __future__ import annotations

import argparse
import re
import sys

import numpy as np

from .errors import PhasorError
from .expr.ast import format_number
from .geometry import Disk, Rect, circle_path

EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- value parsers ------------------------------------------------------------------

def _complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    if "," in t:
        re_, im = t.split(",", 1)
        return complex(float(re_), float(im))
    try:
        return complex(t)
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def _complex_list(text: str):
    """``a;b;c`` with an optional ``:k`` order suffix on each item."""
    out = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        z, _, k = item.partition(":")
        out.append((_complex(z), int(k) if k else 1))
    return out


def _floats(text: str):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"not a list of numbers: {text!r}") from None


def _rect(text: str) -> Rect:
    try:
        return Rect.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad rectangle {text!r}: {exc}") from None


def _res(text: str):
    w, _, h = text.lower().partition("x")
    try:
        w = int(w)
        h = int(h) if h else w
    except ValueError:
        raise UsageError(f"bad resolution {text!r}; expected WxH") from None
    if w < 1 or h < 1:
        raise UsageError("resolution must be positive")
    return w, h


def _num(x) -> str:
    return format_number(float(x))


def _cnum(z) -> str:
    z = complex(z)
    return f"{_num(z.real)} {_num(z.imag)}"


def _out(line=""):
    sys.stdout.write(f"{line}\n")


def _expr(args):
    from .expr import parse

    if not args.f:
        raise UsageError("missing expression: use -f EXPR")
    return parse(args.f)


def _save(image, path):
    from .render import save

    save(image, path)


def _frame(rect: Rect, res):
    from .render import Frame

    return Frame.from_rect(rect, res[0], res[1])


def _need(args, *names):
    for n in names:
        if getattr(args, n, None) in (None, ""):
            raise UsageError(f"missing required option --{n.replace('_', '-')}")


# -- subcommands ------------------------------------------------------------------

def cmd_render(args):
    from .color import parse_scheme
    from .render import render

    _need(args, "f", "output")
    f = _expr(args)
    frame = _frame(_rect(args.frame), _res(args.res))
    try:
        scheme = parse_scheme(args.scheme)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    img = render(f, frame, scheme, supersample=args.supersample, threads=args.threads)
    _save(img, args.output)


def _count_path(args):
    if args.circle:
        c = _floats(args.circle)
        if len(c) != 3 or c[2] <= 0:
            raise UsageError("--circle expects cx,cy,r with r > 0")
        return circle_path(complex(c[0], c[1]), c[2], args.samples)
    from .geometry import rect_path

    return rect_path(_rect(args.rect))


def cmd_analyze(args):
    from . import analysis

    f = _expr(args)
    if args.what == "count":
        from .analysis.chromatic import require_holomorphic

        require_holomorphic(f)
        _out(analysis.chromatic_number(f, _count_path(args)).winding)
    elif args.what == "locate":
        rep = analysis.localize_singularities(f, _rect(args.rect), args.min_box)
        for line in rep.lines():
            _out(line)
    elif args.what == "saddles":
        rep = analysis.find_saddles(f, _rect(args.rect), args.min_box)
        for e in rep.entries:
            _out(f"{e.line()} rays {e.rays}")
    elif args.what == "probe":
        radii = _floats(args.radii)
        color = np.exp(2j * np.pi * args.color)
        for r, n in analysis.essential_probe(f, _complex(args.center), color, radii):
            _out(f"{_num(r)} {n}")
    elif args.what == "period":
        _need(args, "periods")
        periods = [z for z, _ in _complex_list(args.periods)]
        _out(str(analysis.classify_periodicity(f, periods, _rect(args.rect))))


def _blaschke(args):
    from .flow import BlaschkeProduct

    if not args.zeros:
        raise UsageError("missing --zeros for the Blaschke product")
    return BlaschkeProduct(tuple(_complex_list(args.zeros)), _complex(args.c))


def cmd_flow(args):
    from . import flow

    if args.what == "orbits":
        if args.zeros:
            f = _blaschke(args)
            domain = Disk(0j, 1.0)
        else:
            f = _expr(args)
            domain = _rect(args.rect)
        _need(args, "start")
        fixed = flow.classify_fixed_points(f, domain if isinstance(domain, Rect)
                                           else Rect(-1.0, 1.0, -1.0, 1.0))
        for z0, _ in _complex_list(args.start):
            o = flow.integrate_orbit(f, z0, args.direction, domain, fixed)
            idx = "" if o.index is None else f" {o.index}"
            _out(f"{_cnum(z0)} {o.termination}{idx} {_cnum(o.end)} {len(o)}")
        return
    B = _blaschke(args)
    frame = _frame(Rect(-1.0, 1.0, -1.0, 1.0), _res(args.res)) if args.output else None
    decomp = flow.basin_decomposition(B, frame)
    if args.what == "basins":
        sys.stdout.write(decomp.serialize())
        if args.output:
            _save(_basin_image(decomp), args.output)
    else:
        _out(" ".join(str(i) for i in flow.structure_sequence(decomp)))


def _basin_image(decomp):
    from .color import hsv_rgb
    from .render import Image

    lab = decomp.labels
    m = max(1, decomp.m)
    hues = np.arange(m) / m
    pal = np.clip(np.rint(hsv_rgb(hues) * 255), 0, 255).astype(np.uint8)
    img = np.full(lab.shape + (3,), 255, dtype=np.uint8)
    inside = lab >= 0
    img[inside] = pal[lab[inside]]
    return Image(lab.shape[1], lab.shape[0], img)


def cmd_boundary(args):
    from .boundary import (
        chrom_of_coloring,
        extend_analytic,
        extend_with_singularities,
        read_coloring,
    )
    from .color import PLAIN, colorize
    from .render import Image

    _need(args, "B")
    try:
        B = read_coloring(args.B)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    frame = _frame(Rect(-1.0, 1.0, -1.0, 1.0), _res(args.res))
    zeros = _complex_list(args.zeros) if args.zeros else []
    poles = _complex_list(args.poles) if args.poles else []
    if zeros or poles:
        sol = extend_with_singularities(B, zeros, poles, frame)
    else:
        sol = extend_analytic(B, frame)
    _out(f"N {B.n}")
    _out(f"chrom {chrom_of_coloring(B)}")
    w0 = complex(sol.phase_at(np.array([0j]))[0])
    _out(f"phase_at_0 {_cnum(w0) if np.isfinite(w0) else 'undefined'}")
    if args.output:
        rgb = colorize(PLAIN, sol.phase)
        _save(Image(frame.xres, frame.yres, rgb), args.output)


# demos ------------------------------------------------------------------------

DEMO_BLASCHKE_ZEROS = (0.5, 0.5j, -0.6, -0.3 - 0.3j, 0.2 + 0.6j)


def demo_jentzsch(args):
    from .analysis import chromatic_number, localize_singularities, partial_sum

    p = partial_sum("geometric", 20)
    rep = localize_singularities(p, Rect(-1.5, 1.5, -1.5, 1.5))
    for line in rep.lines():
        _out(line)
    _out(f"chrom_circle_1.2 {chromatic_number(p, circle_path(0j, 1.2, 256)).winding}")
    if args.output:
        from .color import parse_scheme
        from .render import Frame, render

        _save(render(p, Frame(-1.5, 1.5, -1.5, 1.5, *_res(args.res)), parse_scheme("plain"),
                     threads=args.threads), args.output)


def demo_zeta(args):
    from .analysis import chromatic_number
    from .expr import parse
    from .special import zeta

    f = parse("zeta(z)")
    _out(f"zeta(2) {_cnum(zeta(2.0))}")
    for s in (-2.0, -4.0):
        _out(f"zeta({s:g}) {_cnum(zeta(s))}")
    for c in (-2.0, complex(0.5, 14.1347)):
        _out(f"chrom_circle {_cnum(c)} 0.5 {chromatic_number(f, circle_path(c, 0.5, 128)).winding}")
    if args.output:
        from .color import parse_scheme
        from .render import Frame, render

        _save(render(f, Frame(-40.0, 10.0, -2.0, 48.0, *_res(args.res)), parse_scheme("plain"),
                     threads=args.threads), args.output)


def demo_wilmshurst(args):
    from .analysis import WILMSHURST_FRAME, wilmshurst, zero_line_crossings
    from .expr import parse

    h = parse(wilmshurst(4))
    zeros = zero_line_crossings(h, WILMSHURST_FRAME)
    _out(f"zeros {len(zeros)}")
    for z in zeros:
        _out(_cnum(z))
    if args.output:
        from .color import parse_scheme
        from .render import Frame, render

        _save(render(h, Frame.from_rect(WILMSHURST_FRAME, *_res(args.res)),
                     parse_scheme("jump:0,0.25,0.5,0.75"), threads=args.threads), args.output)


def demo_blaschke(args):
    from .flow import BlaschkeProduct, basin_decomposition

    B = BlaschkeProduct(DEMO_BLASCHKE_ZEROS)
    frame = _frame(Rect(-1.0, 1.0, -1.0, 1.0), _res(args.res)) if args.output else None
    decomp = basin_decomposition(B, frame)
    sys.stdout.write(decomp.serialize())
    if args.output:
        _save(_basin_image(decomp), args.output)


DEMOS = {"jentzsch": demo_jentzsch, "zeta": demo_zeta, "wilmshurst": demo_wilmshurst,
         "blaschke": demo_blaschke}


def cmd_demo(args):
    DEMOS[args.name](args)


# -- parser -----------------------------------------------------------------------

def _common(p):
    p.add_argument("--config", metavar="FILE", help="key = value defaults (flags win)")
    p.add_argument("--threads", type=int, default=None, help="cap on worker threads")


def build_parser() -> _Parser:
    top = _Parser(prog="phasor", description="Phase plots of complex functions.")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    r = sub.add_parser("render", help="render a phase plot to PPM or PNG")
    r.add_argument("-f", metavar="EXPR", help="expression in z")
    r.add_argument("--frame", default="-2,2,-2,2", help="xmin,xmax,ymin,ymax")
    r.add_argument("--res", default="512x512", help="WxH pixels")
    r.add_argument("--scheme", default="plain",
                   help="plain, sawtooth, grid, domain or jump:<turns,...>[@base]")
    r.add_argument("--supersample", action="store_true", help="average 2x2 samples per pixel")
    r.add_argument("-o", "--output", metavar="FILE", help=".png or .ppm")
    _common(r)
    r.set_defaults(run=cmd_render)

    a = sub.add_parser("analyze", help="zeros, poles, saddles, probes, periodicity")
    a.add_argument("what", choices=["count", "locate", "saddles", "probe", "period"])
    a.add_argument("-f", metavar="EXPR", help="expression in z")
    a.add_argument("--rect", default="-2,2,-2,2", help="xmin,xmax,ymin,ymax")
    a.add_argument("--circle", metavar="CX,CY,R", help="count on a circle instead of --rect")
    a.add_argument("--samples", type=int, default=128, help="polygon vertices for --circle")
    a.add_argument("--min-box", dest="min_box", type=float, default=1e-3, help="leaf box size")
    a.add_argument("--center", default="0", help="probe center (re,im or a+bi)")
    a.add_argument("--color", type=float, default=0.0, help="probe color phase in turns")
    a.add_argument("--radii", default="0.2,0.1,0.05", help="descending probe radii")
    a.add_argument("--periods", help="candidate periods separated by ';'")
    _common(a)
    a.set_defaults(run=cmd_analyze)

    fl = sub.add_parser("flow", help="phase flow orbits and Blaschke basins")
    fl.add_argument("what", choices=["orbits", "basins", "sequence"])
    fl.add_argument("-f", metavar="EXPR", help="expression in z (orbits only)")
    fl.add_argument("--zeros", help="Blaschke zeros 'a;b:2;...' (order after ':')")
    fl.add_argument("--c", default="1", help="unimodular Blaschke constant")
    fl.add_argument("--start", help="orbit start points separated by ';'")
    fl.add_argument("--direction", choices=["forward", "reversed"], default="forward")
    fl.add_argument("--rect", default="-2,2,-2,2", help="orbit domain for -f")
    fl.add_argument("--res", default="256x256", help="basin label image size")
    fl.add_argument("-o", "--output", metavar="FILE", help="basin label image")
    _common(fl)
    fl.set_defaults(run=cmd_flow)

    b = sub.add_parser("boundary", help="analytic phase from a boundary coloring")
    b.add_argument("what", choices=["solve"])
    b.add_argument("-B", metavar="FILE", help="coloring file: N then N lines 're im'")
    b.add_argument("--zeros", help="prescribed zeros 'a;b:2'")
    b.add_argument("--poles", help="prescribed poles 'a;b:2'")
    b.add_argument("--res", default="256x256", help="output image size")
    b.add_argument("-o", "--output", metavar="FILE", help="interior phase image")
    _common(b)
    b.set_defaults(run=cmd_boundary)

    d = sub.add_parser("demo", help="reproduce the bundled examples")
    d.add_argument("name", choices=sorted(DEMOS))
    d.add_argument("--res", default="512x512", help="image size when -o is given")
    d.add_argument("-o", "--output", metavar="FILE", help="also write an image")
    _common(d)
    d.set_defaults(run=cmd_demo)
    return top


def read_config(path) -> dict:
    out = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    with fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, val = line.partition("=")
            if not eq:
                raise UsageError(f"{path}:{n}: expected key = value")
            out[key.strip().replace("-", "_")] = val.strip().strip('"')
    return out


def _subparser(parser, command):
    for action in parser._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command]
    raise UsageError(f"unknown command {command!r}")


_NEGATIVE = re.compile(r"^-[\d.]")


def _value_options(parser):
    opts = set()
    stack = [parser]
    while stack:
        p = stack.pop()
        for act in p._actions:
            if isinstance(act, argparse._SubParsersAction):
                stack.extend(act.choices.values())
            elif act.option_strings and act.nargs is None and not isinstance(
                    act, (argparse._StoreTrueAction, argparse._HelpAction)):
                opts.update(act.option_strings)
    return opts


def _glue_negative_values(parser, argv):
    """``--frame -0.5,0.5,...`` -> ``--frame=-0.5,0.5,...``; argparse would
    otherwise read the value as an unknown option."""
    opts = _value_options(parser)
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in opts and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def parse_args(argv):
    parser = build_parser()
    argv = _glue_negative_values(parser, argv)
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError(parser.format_usage().strip())
    if args.config:
        cfg = read_config(args.config)
        sp = _subparser(parser, args.command)
        dests = {a.dest: a for a in sp._actions if a.dest not in ("help", "config")}
        unknown = sorted(set(cfg) - set(dests))
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        typed = {}
        for k, v in cfg.items():
            act = dests[k]
            if isinstance(act, argparse._StoreTrueAction):
                typed[k] = v.lower() in ("1", "true", "yes", "on")
            elif act.type is not None:
                try:
                    typed[k] = act.type(v)
                except ValueError:
                    raise UsageError(f"bad value for config key {k}: {v!r}") from None
            else:
                typed[k] = v
        sp.set_defaults(**typed)
        args = parser.parse_args(argv)
    return args


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be positive")
        args.run(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except PhasorError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_MATH
    except ValueError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

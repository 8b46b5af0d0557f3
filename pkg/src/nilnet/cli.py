"""Command-line driver.

Exit codes: 0 = checks passed, 1 = a verdict failed, 2 = input error.
Every experiment command writes machine-readable records and, when
figures are requested, matplotlib SVG files alongside them.
"""

from __future__ import annotations

import os
import random
import sys
from fractions import Fraction

import click

from . import dyadic as dy
from . import groupfile
from .criteria import (
    ExplicitNet,
    LambdaNetHandle,
    TranslatedNet,
    coarse_perimeter,
    discrepancy,
    strong_bd_check,
    uniformly_spread_check,
)
from .export import format_table, frac_str, write_points_csv, write_records
from .group import (
    GroupError,
    GroupSpec,
    abelian_spec,
    filiform4_spec,
    heisenberg_spec,
    integral_law,
    synthesize_law,
)
from .quasicrystal import QCSpec, qc_density, qc_generate
from .tiling import Box, Lambda, Region, Window, lambda_net, separation_constants

BUILTINS = {
    "heisenberg": heisenberg_spec,
    "filiform4": filiform4_spec,
    "abelian2": lambda: abelian_spec(2),
    "abelian3": lambda: abelian_spec(3),
}


def load_spec(name_or_path):
    if name_or_path in BUILTINS:
        return BUILTINS[name_or_path]()
    if not os.path.exists(name_or_path):
        raise click.BadParameter(
            f"group {name_or_path!r} is neither a builtin nor a file"
        )
    return groupfile.load(name_or_path)


def parse_rational(text):
    return groupfile.parse_rational(text)


def parse_window(text, n=None):
    """lo:hi,lo:hi,... with exact rationals; closed bounds."""
    bounds = []
    for part in text.split(","):
        lo, _, hi = part.partition(":")
        if not hi:
            raise click.BadParameter(f"window axis {part!r} needs lo:hi")
        bounds.append((parse_rational(lo), parse_rational(hi)))
    if n is not None and len(bounds) != n:
        raise click.BadParameter(f"window has {len(bounds)} axes, expected {n}")
    return Box(tuple(bounds))


def parse_vector(text):
    return tuple(parse_rational(p) for p in text.split(","))


def fail_input(message):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def guarded(fn):
    """Map domain errors to exit code 2 (bad input)."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (GroupError, click.BadParameter) as exc:
            fail_input(f"{type(exc).__name__}: {exc}")

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def common_options(fn):
    fn = click.option("--group", "group_name", default="heisenberg",
                      help="builtin name or group definition file")(fn)
    fn = click.option("--window", "window_text", default=None,
                      help="coordinate box lo:hi,lo:hi,...")(fn)
    fn = click.option("--out", "out_dir", default=".",
                      help="output directory")(fn)
    fn = click.option("--seed", default=0, type=int, help="sampling seed")(fn)
    fn = click.option("--format", "fmt", default="records",
                      type=click.Choice(["csv", "records", "svg"]))(fn)
    return fn


def outpath(out_dir, name):
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


@click.group()
def main():
    """Exact computation with separated nets in nilpotent Lie groups."""


# ---------------------------------------------------------------------------


@main.command()
@common_options
@guarded
def check(group_name, window_text, out_dir, seed, fmt):
    """Validate a group definition and report rationality properties."""
    spec = load_spec(group_name)
    rng = random.Random(seed)
    lines = []
    try:
        law = synthesize_law(spec, rng=rng)
    except GroupError as exc:
        click.echo(f"check: FAIL ({type(exc).__name__}: {exc})")
        sys.exit(1)
    lines.append(("dimension", spec.dimension))
    lines.append(("step", spec.step))
    lines.append(("weights", " ".join(map(str, spec.weights))))
    ok = True
    for _ in range(200):
        g, h, k = (
            tuple(Fraction(rng.randint(-40, 40), rng.randint(1, 8))
                  for _ in range(spec.dimension))
            for _ in range(3)
        )
        if law.multiply(law.multiply(g, h), k) != law.multiply(g, law.multiply(h, k)):
            ok = False
        if any(c != 0 for c in law.multiply(g, law.invert(g))):
            ok = False
    lines.append(("associativity_samples", "pass" if ok else "fail"))
    from .group import check_rationality

    rep = check_rationality(spec, law)
    lines.append(("has_rational_basis", rep["has_rational_basis"]))
    lines.append(("law_is_integral_second_kind", rep["law_is_integral_second_kind"]))
    lines.append(("graded", law.is_graded()))
    click.echo(format_table(["property", "value"], lines))
    report = outpath(out_dir, "check.records")
    write_records(report, [f"{k}\t{v}" for k, v in lines])
    click.echo("check: PASS" if ok else "check: FAIL")
    sys.exit(0 if ok else 1)


@main.command()
@common_options
@click.option("--lam", default=None, help="comma-separated positive rationals")
@guarded
def net(group_name, window_text, out_dir, seed, fmt, lam):
    """Enumerate a Lambda-net on a window and export it."""
    spec = load_spec(group_name)
    law = synthesize_law(spec)
    if window_text is None:
        fail_input("net needs --window")
    window = parse_window(window_text, law.n)
    entries = parse_vector(lam) if lam else (1,) * law.n
    pts = lambda_net(law, Lambda(entries), window)
    csv_path = outpath(out_dir, "net.csv")
    write_points_csv(csv_path, pts)
    if fmt == "svg":
        from .render import render_points

        render_points(pts, outpath(out_dir, "net.svg"),
                      axes=(0, law.n - 1), title="lambda net")
    if len(pts) >= 2:
        c_est, c_big = separation_constants(law, pts, window, grid_pitch=Fraction(1, 2))
        click.echo(f"points {len(pts)}  c_est {c_est:.4g}  C_est {c_big:.4g}")
    else:
        click.echo(f"points {len(pts)}")
    sys.exit(0)


@main.command()
@common_options
@click.option("--level", default=1, type=int)
@click.option("--base", default=None, help="tile base coordinates")
@click.option("--carnot", is_flag=True, help="Carnot (dilation) dyadic tile")
@click.option("--describe-box", default=None,
              help="describe the integer points of this box instead")
@guarded
def dyadic(group_name, window_text, out_dir, seed, fmt, level, base, carnot,
           describe_box):
    """Enumerate a dyadic tile or describe a box region by tiles."""
    spec = load_spec(group_name)
    law = synthesize_law(spec)
    try:
        law_int = integral_law(spec, law)
    except GroupError:
        law_int = law
    if describe_box is not None:
        region = Region.from_box(law_int, parse_window(describe_box, law.n))
        desc = dy.describe_region(law_int, region)
        path = outpath(out_dir, "description.txt")
        write_records(path, desc.to_text())
        counts = desc.per_level_counts()
        click.echo(format_table(
            ["level", "tiles"], sorted(counts.items(), reverse=True)))
        sys.exit(0)
    base_pt = parse_vector(base) if base else (0,) * law.n
    if carnot:
        pts = dy.carnot_dyadic(law_int, base_pt, level)
    else:
        pts = dy.enumerate_dyadic(law, dy.DyadicTile(base_pt, level))
    write_points_csv(outpath(out_dir, "tile.csv"), pts)
    click.echo(f"points {len(pts)}")
    sys.exit(0)


@main.command()
@common_options
@click.option("--region-box", required=True, help="box of unit tile bases")
@click.option("--method", default="combinatorial",
              type=click.Choice(["combinatorial", "neighborhood", "boundary_net"]))
@click.option("--r", "radius", default="1", help="neighborhood radius")
@click.option("--samples", default=4000, type=int)
@guarded
def perimeter(group_name, window_text, out_dir, seed, fmt, region_box, method,
              radius, samples):
    """Coarse perimeter of a tile region."""
    spec = load_spec(group_name)
    law = synthesize_law(spec)
    try:
        law = integral_law(spec, law)
    except GroupError:
        pass
    region = Region.from_box(law, parse_window(region_box, law.n))
    result = coarse_perimeter(law, region, parse_rational(radius),
                              method=method, samples=samples, seed=seed)
    if isinstance(result, dict):
        line = "\t".join(f"{k}={v}" for k, v in result.items())
    else:
        line = f"perimeter={frac_str(result)}"
    write_records(outpath(out_dir, "perimeter.records"), [line])
    click.echo(line)
    sys.exit(0)


def _net_from_options(law, lam, shift):
    handle = LambdaNetHandle(law, parse_vector(lam) if lam else (1,) * law.n)
    if shift:
        handle = TranslatedNet(law, handle, parse_vector(shift))
    return handle


@main.command("discrepancy")
@common_options
@click.option("--lam1", default=None)
@click.option("--lam2", default=None)
@click.option("--shift2", default=None, help="left-translate the second net")
@click.option("--levels", default=4, type=int)
@guarded
def discrepancy_cmd(group_name, window_text, out_dir, seed, fmt, lam1, lam2,
                    shift2, levels):
    """Max dyadic-tile discrepancy between two nets, per level."""
    spec = load_spec(group_name)
    law = integral_law(spec)
    if window_text is None:
        fail_input("discrepancy needs --window")
    window = parse_window(window_text, law.n)
    net1 = _net_from_options(law, lam1, None)
    net2 = _net_from_options(law, lam2, shift2)
    rep = strong_bd_check(law, net1, net2, range(levels + 1), window)
    write_records(outpath(out_dir, "discrepancy.records"), rep.to_records())
    if fmt == "svg":
        from .render import render_series

        ks = rep.levels
        render_series(ks, {"D(k)": [rep.d_values[k] for k in ks]},
                      outpath(out_dir, "discrepancy.svg"),
                      xlabel="level", ylabel="max discrepancy")
    click.echo(rep.to_records())
    sys.exit(0)


@main.command()
@common_options
@click.option("--lam", default=None)
@click.option("--density", default=None, help="target density v (default |Lambda|)")
@click.option("--levels", default=4, type=int)
@guarded
def spread(group_name, window_text, out_dir, seed, fmt, lam, density, levels):
    """Uniformly-spread ratio check over nested dyadic-tile families."""
    spec = load_spec(group_name)
    law = integral_law(spec)
    entries = parse_vector(lam) if lam else (1,) * law.n
    lam_obj = Lambda(entries)
    v = parse_rational(density) if density else lam_obj.covolume
    handle = LambdaNetHandle(law, lam_obj)
    rng = random.Random(seed)
    families = []
    for k in range(levels + 1):
        tiles = []
        for _ in range(6):
            base = tuple(2 ** k * rng.randint(0, 3) for _ in range(law.n))
            tiles.append(dy.DyadicTile(base, k))
        families.append((f"{k}", tiles))
    rep = uniformly_spread_check(law, handle, v, families)
    write_records(outpath(out_dir, "spread.records"), rep.to_records())
    if fmt == "svg":
        from .render import render_series

        ks = sorted(rep.scale_max)
        render_series(ks, {"max ratio": [rep.scale_max[k] for k in ks]},
                      outpath(out_dir, "spread.svg"),
                      xlabel="level", ylabel="max spread ratio")
    bounded = rep.verdict_bounded()
    click.echo(f"max_ratio {rep.max_ratio:.4g}  bounded {bounded}")
    sys.exit(0 if bounded else 1)


@main.command()
@common_options
@click.option("--mode", default="shift",
              type=click.Choice(["shift", "halfspace"]))
@click.option("--shift2", default="1/2,0,0")
@click.option("--levels", default=3, type=int)
@click.option("--epsilon", default=0.1, type=float)
@guarded
def strongbd(group_name, window_text, out_dir, seed, fmt, mode, shift2, levels,
             epsilon):
    """Strong-BD dyadic discrepancy slope between G(Z) and a variant."""
    spec = load_spec(group_name)
    law = integral_law(spec)
    if window_text is None:
        window = Box(tuple((0, 2 ** levels - 1) for _ in range(law.n)))
    else:
        window = parse_window(window_text, law.n)
    net1 = LambdaNetHandle(law, (1,) * law.n)
    if mode == "shift":
        net2 = TranslatedNet(law, net1, parse_vector(shift2))
    else:
        pts = net1.points(window)
        cut = max(p[0] for p in pts) / 2
        net2 = ExplicitNet([p for p in pts if p[0] < cut], window=window,
                           label="halfspace")
    rep = strong_bd_check(law, net1, net2, range(levels + 1), window,
                          epsilon=epsilon)
    write_records(outpath(out_dir, "strongbd.records"), rep.to_records())
    if fmt == "svg":
        from .render import render_series

        ks = rep.levels
        render_series(ks, {"D(k)": [max(rep.d_values[k], 1) for k in ks]},
                      outpath(out_dir, "strongbd.svg"),
                      xlabel="level", ylabel="max discrepancy")
    click.echo(rep.to_records())
    sys.exit(0 if rep.verdict else 1)


@main.command()
@common_options
@click.option("--theta", default="6180339887/10000000000")
@click.option("--s0", default="0:1/2", help="internal window box")
@click.option("--nested", default=3, type=int, help="windows for the density trend")
@guarded
def qc(group_name, window_text, out_dir, seed, fmt, theta, s0, nested):
    """Generate a cut-and-project quasi-crystal and report density."""
    spec = load_spec(group_name)
    law = synthesize_law(spec)
    try:
        law = integral_law(spec, law)
    except GroupError:
        pass
    if window_text is None:
        fail_input("qc needs --window")
    window = parse_window(window_text, law.n)
    from .quasicrystal import abelian_coordinates

    d = len(abelian_coordinates(law))
    row = [parse_rational(theta)] + [Fraction(0)] * (d - 1)
    s0_box = Box(tuple(
        (parse_rational(p.partition(":")[0]), parse_rational(p.partition(":")[2]))
        for p in s0.split(",")), closed_hi=False)
    qspec = QCSpec(law=law, m=len(s0_box.bounds), lmap=(tuple(row),), s0=s0_box)
    result = qc_generate(qspec, window)
    write_points_csv(outpath(out_dir, "qc.csv"), result.points)
    if fmt == "svg":
        from .render import render_points

        render_points(result.points, outpath(out_dir, "qc.svg"),
                      axes=(0, min(1, law.n - 1)), title="quasicrystal")
    windows = []
    for k in range(nested):
        side = 2 ** (4 + k)
        windows.append(Box(tuple((0, side) for _ in range(law.n)),
                           closed_hi=False))
    dens = qc_density(qspec, windows)
    lines = [f"count\t{len(result.points)}"]
    for rec in dens["windows"]:
        lines.append(f"window_vol\t{rec['volume']}\tcovolume\t{rec['covolume']:.6g}")
    lines.append(f"trend\t{dens['trend']}")
    write_records(outpath(out_dir, "qc.records"), lines)
    click.echo("\n".join(lines))
    sys.exit(0)


@main.command()
@common_options
@click.option("--theta", default="6180339887/10000000000")
@click.option("--i-max", default=2, type=int)
@click.option("--levels", default=5, type=int)
@guarded
def exotic(group_name, window_text, out_dir, seed, fmt, theta, i_max, levels):
    """Build the exotic net and verify its defining properties."""
    from .exotic import ExoticSpec, build_exotic, verify_exotic

    spec = load_spec(group_name)
    law = synthesize_law(spec)
    law_int = integral_law(spec, law)
    espec = ExoticSpec(law=law, integral_law=law_int,
                       theta=parse_rational(theta), i_max=i_max)
    boxes = []
    for i in range(1, i_max + 1):
        c = espec.ball_center(i)
        boxes.append(Box(tuple(
            (c[j].__floor__() - i - 2, c[j].__floor__() + i + 2)
            for j in range(law.n))))
    near = Box(((0, i_max + 1),) + ((-2, 2),) * (law.n - 1))
    window = Window(tuple(boxes) + (near,))
    net_obj = build_exotic(espec, window)
    rep = verify_exotic(net_obj, levels=range(levels + 1),
                        sep_window=Window(tuple(boxes)))
    write_points_csv(outpath(out_dir, "exotic.csv"), net_obj.points())
    lines = [f"{k}\t{v}" for k, v in rep.items()]
    write_records(outpath(out_dir, "exotic.records"), lines)
    if fmt == "svg":
        from .render import render_points

        render_points(net_obj.retained, outpath(out_dir, "exotic.svg"),
                      axes=(0, 1), title="exotic net",
                      highlight=net_obj.added)
    click.echo("\n".join(lines))
    ok = rep["bd_ok"] and rep.get("added_gaps_decreasing", True)
    sys.exit(0 if ok else 1)


@main.command()
@common_options
@click.option("--levels", default="0,1,2")
@click.option("--carnot", is_flag=True)
@click.option("--axes", default=None, help="projection axes i,j (1-based)")
@guarded
def render(group_name, window_text, out_dir, seed, fmt, levels, carnot, axes):
    """Emit SVG figures of dyadic tiles, one per level."""
    from .render import render_dyadic_tile

    spec = load_spec(group_name)
    law = synthesize_law(spec)
    if carnot:
        law = integral_law(spec, law)
    axes_t = None
    if axes:
        i, j = (int(a) for a in axes.split(","))
        axes_t = (i - 1, j - 1)
    for lvl in (int(v) for v in levels.split(",")):
        path = outpath(out_dir, f"dyadic_level{lvl}.svg")
        count = render_dyadic_tile(law, lvl, path, axes=axes_t, carnot=carnot)
        click.echo(f"level {lvl}: {count} points -> {path}")
    sys.exit(0)


if __name__ == "__main__":
    main()

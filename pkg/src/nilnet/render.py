"""Matplotlib SVG rendering of dyadic tiles and point sets.

Tiles are drawn as the 2-D shadows of their continuous unit cells; a
level-l figure is Euclidean-rescaled by 2^-l so all levels share one
frame.  Point counts are embedded in the SVG description metadata.
"""

from __future__ import annotations

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")

import itertools

import matplotlib.pyplot as plt
from matplotlib.patches import Polygon as MplPolygon

from .dyadic import DyadicTile, carnot_dyadic, enumerate_dyadic
from .group import GroupError


class RenderDimension(GroupError):
    pass


def convex_hull(points):
    """Monotone-chain hull of 2-D points; returns vertices CCW."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def cell_corners(law, h):
    """The 2^n corners of the continuous unit cell h * I_G, exactly."""
    half = Fraction(1, 2)
    out = []
    for signs in itertools.product((-half, half), repeat=law.n):
        out.append(law.multiply(h, signs))
    return out


def tile_cell_polygons(law, tile, axes=(0, 1)):
    """Projected hull polygon of every cell of the tile, rescaled."""
    if max(axes) >= law.n:
        raise RenderDimension(f"axes {axes} out of range for dimension {law.n}")
    scale = Fraction(1, 2 ** tile.level)
    polys = []
    for h in enumerate_dyadic(law, tile):
        corners = [
            (float(c[axes[0]] * scale), float(c[axes[1]] * scale))
            for c in cell_corners(law, h)
        ]
        polys.append(convex_hull(corners))
    return polys


def projected_outline(law, tile, axes=(0, 1)):
    """Boundary vertices of the union of projected cells (collinear
    points merged).  An unsheared tile projects to a box (4 vertices);
    shear shows up as extra outline vertices."""
    from shapely.geometry import Polygon as ShPolygon
    from shapely.ops import unary_union

    union = unary_union(
        [ShPolygon(poly) for poly in tile_cell_polygons(law, tile, axes=axes)]
    )
    coords = list(union.exterior.coords)[:-1]
    out = []
    m = len(coords)
    for i in range(m):
        o, a, b = coords[i - 1], coords[i], coords[(i + 1) % m]
        cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        if abs(cross) > 1e-9:
            out.append(a)
    return out


def projected_hull(law, tile, axes=(0, 1)):
    """Convex hull of all cell corners of the tile in the projection."""
    scale = Fraction(1, 2 ** tile.level)
    corners = []
    for h in enumerate_dyadic(law, tile):
        for c in cell_corners(law, h):
            corners.append((float(c[axes[0]] * scale), float(c[axes[1]] * scale)))
    return convex_hull(corners)


def _oblique(point, axes3=(0, 1, 2), k=0.35):
    x, y, z = (float(point[a]) for a in axes3)
    return (x + k * y, z + k * y)


def render_dyadic_tile(law, level, out_path, axes=None, base=None, carnot=False):
    """Write one SVG of the level tile; returns the embedded point count.

    For 3-D groups an oblique panel is drawn next to the axis
    projection.  Groups of dimension > 3 must pass explicit axes.
    """
    if law.n < 2:
        raise RenderDimension("rendering needs dimension >= 2")
    if axes is None:
        if law.n > 3:
            raise RenderDimension("choose projection axes for dimension > 3")
        axes = (0, law.n - 1)
    base = tuple(Fraction(0) for _ in range(law.n)) if base is None else base

    if carnot:
        points = carnot_dyadic(law, base, level)
        scale = None
    else:
        tile = DyadicTile(base, level)
        points = enumerate_dyadic(law, tile)

    if law.n == 3 and not carnot:
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4.5))
    else:
        fig, ax1 = plt.subplots(figsize=(4.5, 4.5))
        ax2 = None

    if carnot:
        xs = [float(p[axes[0]]) for p in points]
        ys = [float(p[axes[1]]) for p in points]
        ax1.scatter(xs, ys, s=12, color="tab:blue")
    else:
        for poly in tile_cell_polygons(law, tile, axes=axes):
            ax1.add_patch(
                MplPolygon(
                    poly, closed=True, facecolor="#9ecae1", edgecolor="#08519c",
                    linewidth=0.5, alpha=0.8,
                )
            )
        ax1.autoscale_view()
        ax1.relim()
        allx = [v for poly in tile_cell_polygons(law, tile, axes=axes) for v, _ in poly]
        ally = [v for poly in tile_cell_polygons(law, tile, axes=axes) for _, v in poly]
        ax1.set_xlim(min(allx) - 0.1, max(allx) + 0.1)
        ax1.set_ylim(min(ally) - 0.1, max(ally) + 0.1)
    ax1.set_aspect("equal")
    ax1.set_title(f"level {level}, axes ({axes[0] + 1},{axes[1] + 1})")

    if ax2 is not None:
        scale = Fraction(1, 2 ** level)
        for h in points:
            corners = [
                _oblique(tuple(c * scale for c in corner))
                for corner in cell_corners(law, h)
            ]
            ax2.add_patch(
                MplPolygon(
                    convex_hull(corners), closed=True, facecolor="#c7e9c0",
                    edgecolor="#00441b", linewidth=0.4, alpha=0.8,
                )
            )
        ax2.autoscale_view()
        pts2 = [
            _oblique(tuple(c * scale for c in corner))
            for h in points
            for corner in cell_corners(law, h)
        ]
        ax2.set_xlim(min(p[0] for p in pts2) - 0.1, max(p[0] for p in pts2) + 0.1)
        ax2.set_ylim(min(p[1] for p in pts2) - 0.1, max(p[1] for p in pts2) + 0.1)
        ax2.set_aspect("equal")
        ax2.set_title("oblique")

    count = len(points)
    fig.savefig(
        out_path,
        format="svg",
        metadata={"Description": f"point_count={count}"},
    )
    plt.close(fig)
    return count


def render_points(points, out_path, axes=(0, 1), title="", highlight=()):
    """Simple SVG scatter of a point set's chosen coordinate projection."""
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = [float(Fraction(p[axes[0]])) for p in points]
    ys = [float(Fraction(p[axes[1]])) for p in points]
    ax.scatter(xs, ys, s=8, color="tab:blue")
    if highlight:
        hx = [float(Fraction(p[axes[0]])) for p in highlight]
        hy = [float(Fraction(p[axes[1]])) for p in highlight]
        ax.scatter(hx, hy, s=24, color="tab:red", marker="x")
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    fig.savefig(
        out_path, format="svg", metadata={"Description": f"point_count={len(points)}"}
    )
    plt.close(fig)
    return len(points)


def render_series(xs, ys_by_label, out_path, xlabel="", ylabel="", title=""):
    """Line plot of one or more labelled series."""
    fig, ax = plt.subplots(figsize=(5.5, 4))
    for label, ys in ys_by_label.items():
        ax.plot(xs, ys, marker="o", label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(ys_by_label) > 1:
        ax.legend()
    fig.savefig(out_path, format="svg")
    plt.close(fig)

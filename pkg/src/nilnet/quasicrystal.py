"""Cut-and-project quasi-crystals via the abelianization reduction.

A point g with alpha(g) integral is kept when the shifted window
L(g) + S_0 meets the integer lattice of the internal space.  L factors
through the abelianization, so it is given as a rational matrix on the
coordinates that receive no commutator corrections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .group import GroupError
from .poly import Polynomial
from .tiling import Box, Window, lambda_net, Lambda


class QCError(GroupError):
    pass


class NonInvertibleAlpha(QCError):
    pass


class WindowUnbounded(QCError):
    pass


class TooFewWindows(QCError):
    pass


def abelian_coordinates(law):
    """Indices (0-based) of coordinates with no commutator corrections.

    These coordinates add under the product, so linear maps on them
    factor through the abelianization.
    """
    return [i for i in range(law.n) if law.polys[i].is_zero()]


# ---------------------------------------------------------------------------
# Linear algebra over Fractions (small systems)
# ---------------------------------------------------------------------------


def solve_linear(matrix, rhs):
    """Solve A x = b exactly; raises on singular A."""
    m = len(matrix)
    a = [[Fraction(matrix[i][j]) for j in range(m)] + [Fraction(rhs[i])] for i in range(m)]
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col] != 0), None)
        if piv is None:
            raise QCError("singular parallelotope edge matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [c * inv for c in a[col]]
        for r in range(m):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [c - f * d for c, d in zip(a[r], a[col])]
    return [a[i][m] for i in range(m)]


# ---------------------------------------------------------------------------
# Internal-space windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Parallelotope:
    """v0 + E [0,1)^m with an exact invertible edge matrix E (columns)."""

    v0: tuple
    edges: tuple  # m rows x m cols, column j is the j-th edge vector

    def __post_init__(self):
        v0 = tuple(Fraction(c) for c in self.v0)
        edges = tuple(tuple(Fraction(c) for c in row) for row in self.edges)
        object.__setattr__(self, "v0", v0)
        object.__setattr__(self, "edges", edges)

    @property
    def m(self):
        return len(self.v0)

    def meets_integers(self, shift):
        """Exact test: (shift + self) contains an integer vector."""
        m = self.m
        base = [Fraction(s) + v for s, v in zip(shift, self.v0)]
        # bounding interval per axis over u in [0,1]^m
        ranges = []
        for i in range(m):
            lo = hi = base[i]
            for j in range(m):
                e = self.edges[i][j]
                if e > 0:
                    hi += e
                else:
                    lo += e
            ranges.append(range(int(-((-lo) // 1)), int(hi // 1) + 1))
        for z in itertools.product(*ranges):
            rhs = [Fraction(zi) - b for zi, b in zip(z, base)]
            u = solve_linear(self.edges, rhs)
            if all(0 <= ui < 1 for ui in u):
                return True
        return False


def box_meets_integers(box, shift):
    """Exact per-axis test that (shift + box) contains an integer vector."""
    for s, (lo, hi) in zip(shift, box.bounds):
        a = Fraction(s) + lo
        b = Fraction(s) + hi
        ceil_a = -((-a) // 1)
        if box.closed_hi:
            if ceil_a > b:
                return False
        else:
            if ceil_a >= b:
                return False
    return True


def window_condition(s0, shift):
    if isinstance(s0, Parallelotope):
        return s0.meets_integers(shift)
    return box_meets_integers(s0, shift)


# ---------------------------------------------------------------------------
# Alpha endomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Alpha:
    """Triangular polynomial endomorphism: alpha_i depends on x_1..x_i.

    Invertibility (needed for generation) requires each alpha_i to be
    linear in x_i with a constant nonzero coefficient.
    """

    polys: tuple  # Polynomials in x1..xn

    @classmethod
    def identity(cls, n):
        return cls(tuple(Polynomial.variable(f"x{i}") for i in range(1, n + 1)))

    @property
    def n(self):
        return len(self.polys)

    def apply(self, g):
        env = {f"x{i}": Fraction(c) for i, c in enumerate(g, start=1)}
        return tuple(p.evaluate(env) for p in self.polys)

    def _diagonal_coefficient(self, i):
        """Coefficient of x_i in alpha_i; None when not constant-linear."""
        coeff = Fraction(0)
        for mono, c in self.polys[i - 1].terms.items():
            names = dict(mono)
            if f"x{i}" in names:
                if names[f"x{i}"] != 1 or len(names) != 1:
                    return None
                coeff = c
            for name in names:
                if int(name[1:]) > i:
                    raise QCError(f"alpha_{i} depends on {name}; not triangular")
        return coeff if coeff != 0 else None

    def invert_point(self, h):
        x = []
        for i in range(1, self.n + 1):
            c = self._diagonal_coefficient(i)
            if c is None:
                raise NonInvertibleAlpha(
                    f"alpha_{i} is not linear in x_{i} with constant coefficient"
                )
            env = {f"x{j}": x[j - 1] for j in range(1, i)}
            env[f"x{i}"] = Fraction(0)
            rest = self.polys[i - 1].evaluate(env)
            x.append((Fraction(h[i - 1]) - rest) / c)
        return tuple(x)

    def check_homomorphism(self, law, rng, samples=50):
        for _ in range(samples):
            g = tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(law.n))
            h = tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(law.n))
            lhs = self.apply(law.multiply(g, h))
            rhs = law.multiply(self.apply(g), self.apply(h))
            if lhs != rhs:
                raise QCError("alpha is not a group homomorphism")


# ---------------------------------------------------------------------------
# QC spec and generation
# ---------------------------------------------------------------------------


@dataclass
class QCSpec:
    law: object
    m: int
    lmap: tuple  # m x d rational matrix over the abelian coordinates
    s0: object  # Box or Parallelotope in R^m
    alpha: Alpha | None = None
    basepoint: tuple | None = None  # optional extra shift of the window

    def __post_init__(self):
        if self.alpha is None:
            self.alpha = Alpha.identity(self.law.n)
        self.lmap = tuple(tuple(Fraction(c) for c in row) for row in self.lmap)
        d = len(abelian_coordinates(self.law))
        for row in self.lmap:
            if len(row) != d:
                raise QCError(
                    f"L' must have {d} columns (abelianization dimension)"
                )
        if len(self.lmap) != self.m:
            raise QCError("L' must have m rows")
        if self.basepoint is not None:
            self.basepoint = tuple(Fraction(c) for c in self.basepoint)
            if len(self.basepoint) != self.m:
                raise QCError("basepoint lives in the internal space R^m")

    def internal_image(self, g):
        idx = abelian_coordinates(self.law)
        gp = [Fraction(g[i]) for i in idx]
        out = []
        for row in self.lmap:
            out.append(sum((c * v for c, v in zip(row, gp)), Fraction(0)))
        if self.basepoint is not None:
            out = [a + b for a, b in zip(out, self.basepoint)]
        return tuple(out)

    def accepts(self, g):
        return window_condition(self.s0, self.internal_image(g))


@dataclass
class QCPointSet:
    spec: QCSpec
    window: Window
    points: list

    def recheck(self):
        for g in self.points:
            if not self.spec.accepts(g):
                return False
            if any(Fraction(c).denominator != 1 for c in self.spec.alpha.apply(g)):
                return False
        return True


def _interval_eval(poly, bounds):
    """Conservative [lo, hi] of a polynomial over a coordinate box."""
    lo = hi = Fraction(0)
    for mono, c in poly.terms.items():
        tlo = thi = Fraction(1)
        for name, exp in mono:
            blo, bhi = bounds[int(name[1:]) - 1]
            cands = [blo ** exp, bhi ** exp]
            if blo < 0 < bhi and exp % 2 == 0:
                cands.append(Fraction(0))
            mlo, mhi = min(cands), max(cands)
            tlo, thi = (
                min(tlo * mlo, tlo * mhi, thi * mlo, thi * mhi),
                max(tlo * mlo, tlo * mhi, thi * mlo, thi * mhi),
            )
        lo += min(c * tlo, c * thi)
        hi += max(c * tlo, c * thi)
    return lo, hi


def qc_generate(spec, window):
    """Enumerate the quasi-crystal on a bounded window, lex order.

    Candidates are integer points h = alpha(g); g = alpha^{-1}(h) is
    kept when it lies in the window and the internal window condition
    holds (decided exactly).
    """
    if window is None:
        raise WindowUnbounded("qc generation needs a bounded window")
    window = Window.of(window)
    law = spec.law
    spec.alpha._diagonal_coefficient(1)  # raise early if malformed
    out = []
    seen = set()
    for box in window.boxes:
        hbounds = []
        for i in range(law.n):
            lo, hi = _interval_eval(spec.alpha.polys[i], box.bounds)
            hbounds.append((lo, hi))
        hbox = Box(tuple(hbounds))
        for h in lambda_net(law, Lambda((1,) * law.n), Window.of(hbox)):
            g = spec.alpha.invert_point(h)
            if g in seen or not box.contains(g):
                continue
            if spec.accepts(g):
                seen.add(g)
                out.append(g)
    out.sort()
    return QCPointSet(spec=spec, window=window, points=out)


def qc_density(spec, windows):
    """Empirical covolume per nested window plus a convergence flag."""
    if len(windows) < 3:
        raise TooFewWindows("density trend needs at least three nested windows")
    records = []
    for w in windows:
        w = Window.of(w)
        pts = qc_generate(spec, w).points
        vol = sum(b.volume() for b in w.boxes)
        v = float(vol) / len(pts) if pts else float("inf")
        records.append({"volume": float(vol), "count": len(pts), "covolume": v})
    gaps = [
        abs(records[i + 1]["covolume"] - records[i]["covolume"])
        for i in range(len(records) - 1)
    ]
    trend = "converging" if gaps[-1] <= gaps[0] + 1e-12 else "diverging"
    return {"windows": records, "trend": trend}


# ---------------------------------------------------------------------------
# Reference construction for the reduction check
# ---------------------------------------------------------------------------


def planar_quasicrystal(lmap, s0, window2d, basepoint=None):
    """The abelian cut-and-project set in Z^d computed directly."""
    window2d = Window.of(window2d)
    d = window2d.dimension
    out = []
    for box in window2d.boxes:
        ranges = [range(*_int_range(box, i)) for i in range(d)]
        for z in itertools.product(*ranges):
            g = tuple(map(Fraction, z))
            shift = []
            for row in lmap:
                shift.append(sum((Fraction(c) * v for c, v in zip(row, g)), Fraction(0)))
            if basepoint is not None:
                shift = [a + Fraction(b) for a, b in zip(shift, basepoint)]
            if window_condition(s0, tuple(shift)) and g not in out:
                out.append(g)
    return sorted(set(out))


def _int_range(box, axis):
    lo, hi = box.bounds[axis]
    kmin = -((-lo) // 1)
    kmax = hi // 1
    if not box.closed_hi and kmax == hi:
        kmax -= 1
    return int(kmin), int(kmax) + 1

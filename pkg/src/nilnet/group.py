"""Nilpotent group laws in exponential coordinates.

A group is given either by structure constants on a triangular (Malcev)
basis, from which the product polynomials are synthesized with the
Dynkin commutator series, or by an explicit polynomial law.  All
arithmetic is exact rational.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .poly import Polynomial


class GroupError(Exception):
    pass


class JacobiViolation(GroupError):
    pass


class NonNilpotent(GroupError):
    pass


class AssociativityFailure(GroupError):
    pass


class DimensionMismatch(GroupError):
    pass


class DimensionTooSmall(GroupError):
    pass


def _frac(x):
    return Fraction(x)


# ---------------------------------------------------------------------------
# Specification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupSpec:
    """A nilpotent Lie algebra/group description.

    brackets maps (i, j) with i < j (1-based) to {k: coefficient} giving
    [xi_i, xi_j] = sum_k c_k xi_k.  Triangularity requires k > j.  When
    explicit_law is given it takes precedence and brackets may be empty.
    """

    dimension: int
    step: int
    brackets: dict = field(default_factory=dict)
    explicit_law: tuple | None = None
    weights: tuple | None = None
    basis_labels: tuple | None = None

    def __post_init__(self):
        norm = {}
        for (i, j), row in self.brackets.items():
            if not (1 <= i < j <= self.dimension):
                raise GroupError(f"bracket indices ({i},{j}) out of order or range")
            entries = {k: _frac(c) for k, c in row.items() if _frac(c) != 0}
            for k in entries:
                if k <= max(i, j):
                    raise GroupError(
                        f"triangularity violated: [xi_{i}, xi_{j}] has xi_{k} component"
                    )
            if entries:
                norm[(i, j)] = entries
        object.__setattr__(self, "brackets", norm)
        if self.basis_labels is None:
            object.__setattr__(
                self, "basis_labels", tuple(f"xi{i}" for i in range(1, self.dimension + 1))
            )
        if self.weights is None:
            object.__setattr__(self, "weights", self._default_weights())
        if len(self.weights) != self.dimension:
            raise GroupError("weights length must equal dimension")

    def _default_weights(self):
        # Filtration depth: a bracket target is at least as deep as the sum
        # of its arguments' depths.  One forward pass suffices because
        # targets have strictly larger index than sources.
        w = [1] * self.dimension
        for k in range(1, self.dimension + 1):
            best = 1
            for (i, j), row in self.brackets.items():
                if k in row:
                    best = max(best, w[i - 1] + w[j - 1])
            w[k - 1] = best
        return tuple(w)

    def bracket_vectors(self, u, v):
        """Bracket of two coefficient vectors over the basis."""
        n = self.dimension
        out = [Fraction(0) if not isinstance(u[0], Polynomial) else Polynomial()] * n
        out = list(out)
        for (i, j), row in self.brackets.items():
            cross = u[i - 1] * v[j - 1] - u[j - 1] * v[i - 1]
            if isinstance(cross, Polynomial) and cross.is_zero():
                continue
            if not isinstance(cross, Polynomial) and cross == 0:
                continue
            for k, c in row.items():
                out[k - 1] = out[k - 1] + c * cross
        return out

    def validate(self, rng=None):
        """Check antisymmetry/triangularity (structural), Jacobi, nilpotency."""
        n = self.dimension
        if self.explicit_law is not None:
            _validate_explicit_law(self, rng=rng)
            return
        basis = []
        for i in range(n):
            vec = [Fraction(0)] * n
            vec[i] = Fraction(1)
            basis.append(vec)

        def is_zero(vec):
            return all(c == 0 for c in vec)

        for a, b, c in itertools.combinations(range(n), 3):
            jac = [Fraction(0)] * n
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                inner = self.bracket_vectors(basis[y], basis[z])
                outer = self.bracket_vectors(basis[x], inner)
                jac = [p + q for p, q in zip(jac, outer)]
            if not is_zero(jac):
                raise JacobiViolation(
                    f"Jacobi identity fails on basis triple ({a + 1},{b + 1},{c + 1})"
                )

        # Nilpotency: every bracket chain of length step+1 must vanish.
        layer = list(basis)
        for depth in range(2, self.step + 2):
            nxt = []
            for e in basis:
                for v in layer:
                    w = self.bracket_vectors(e, v)
                    if not is_zero(w):
                        nxt.append(w)
            layer = nxt
            if depth == self.step + 1 and layer:
                raise NonNilpotent(
                    f"nonzero bracket chain of length {self.step + 1} found"
                )
            if not layer:
                break


def _validate_explicit_law(spec, rng=None, samples=25):
    n = spec.dimension
    polys = spec.explicit_law
    if len(polys) != n:
        raise GroupError("explicit law must give one polynomial per coordinate")
    for idx, p in enumerate(polys, start=1):
        if idx <= 2 and not p.is_zero():
            raise GroupError(f"p_{idx} must be the zero polynomial")
        for name in p.variables():
            j = int(name[1:])
            if j >= idx:
                raise GroupError(
                    f"p_{idx} depends on {name}; only indices < {idx} allowed"
                )
    law = GroupLaw(n, tuple(polys), spec.weights)
    rng = rng or random.Random(11)
    for _ in range(samples):
        g, h, k = (_random_point(n, rng) for _ in range(3))
        if law.multiply(law.multiply(g, h), k) != law.multiply(g, law.multiply(h, k)):
            raise AssociativityFailure("explicit law fails associativity on a sample")
        if any(c != 0 for c in law.multiply(g, law.invert(g))):
            raise AssociativityFailure("explicit law fails inverse on a sample")


def _random_point(n, rng):
    return tuple(
        Fraction(rng.randint(-60, 60), rng.randint(1, 12)) for _ in range(n)
    )


# ---------------------------------------------------------------------------
# Dynkin series
# ---------------------------------------------------------------------------

MAX_BCH_STEP = 6


def _compositions(total):
    """Block sequences ((r1,s1),...,(rk,sk)), r_i+s_i >= 1, summing to total."""
    if total == 0:
        yield ()
        return
    for r in range(total + 1):
        for s in range(total - r + 1):
            if r + s == 0:
                continue
            for rest in _compositions(total - r - s):
                yield ((r, s),) + rest


def dynkin_terms(step):
    """(coefficient, word) pairs of the BCH series up to bracket weight step.

    word is a string over {'x','y'}; the bracket convention is
    right-nested: [w1,[w2,[...,[w_{m-1}, w_m]]]].
    """
    if step > MAX_BCH_STEP:
        raise GroupError(
            f"BCH synthesis supports step <= {MAX_BCH_STEP}; supply an explicit law"
        )
    terms = []
    for m in range(1, step + 1):
        for blocks in _compositions(m):
            nblocks = len(blocks)
            denom = m
            for r, s in blocks:
                denom *= math.factorial(r) * math.factorial(s)
            coeff = Fraction((-1) ** (nblocks - 1), nblocks * denom)
            word = "".join("x" * r + "y" * s for r, s in blocks)
            terms.append((coeff, word))
    return terms


def bch_vectors(spec, xv, yv):
    """Truncated BCH of two basis-coefficient vectors (numbers or polys)."""
    n = spec.dimension
    zero = Polynomial() if isinstance(xv[0], Polynomial) else Fraction(0)
    acc = [zero] * n
    letters = {"x": list(xv), "y": list(yv)}
    for coeff, word in dynkin_terms(spec.step):
        vec = letters[word[-1]]
        trivial = False
        for ch in reversed(word[:-1]):
            vec = spec.bracket_vectors(letters[ch], vec)
            if all(
                (c.is_zero() if isinstance(c, Polynomial) else c == 0) for c in vec
            ):
                trivial = True
                break
        if trivial:
            continue
        acc = [a + coeff * c for a, c in zip(acc, vec)]
    return acc


def bch(spec, x, y):
    """BCH product of two Lie algebra vectors with exact coefficients."""
    if len(x) != spec.dimension or len(y) != spec.dimension:
        raise DimensionMismatch("algebra vectors must match the group dimension")
    return tuple(bch_vectors(spec, [_frac(c) for c in x], [_frac(c) for c in y]))


# ---------------------------------------------------------------------------
# Group law
# ---------------------------------------------------------------------------


class GroupLaw:
    """A concrete polynomial group law on R^n.

    polys[i] is p_{i+1}, a Polynomial in variables a1..a{i}, b1..b{i}
    (strictly lower indices).  Coordinates multiply as
    (g*h)_i = g_i + h_i + p_i(g_<i, h_<i).
    """

    def __init__(self, n, polys, weights=None):
        self.n = n
        self.polys = tuple(polys)
        self.weights = tuple(weights) if weights else (1,) * n
        self._compiled = [self._compile(p, n) for p in self.polys]

    @staticmethod
    def _compile(poly, n):
        # (coeff, ((argument index, exponent), ...)) with args = g + h concat.
        out = []
        for mono, coeff in poly.terms.items():
            factors = []
            for name, exp in mono:
                idx = int(name[1:]) - 1
                if name[0] == "b":
                    idx += n
                factors.append((idx, exp))
            c = int(coeff) if coeff.denominator == 1 else coeff
            out.append((c, tuple(factors)))
        return out

    def multiply(self, g, h):
        if len(g) != self.n or len(h) != self.n:
            raise DimensionMismatch(f"expected {self.n} coordinates")
        args = tuple(g) + tuple(h)
        out = []
        for i in range(self.n):
            val = g[i] + h[i]
            for coeff, factors in self._compiled[i]:
                term = coeff
                for idx, exp in factors:
                    term *= args[idx] ** exp
                val += term
            out.append(val)
        return tuple(out)

    def identity(self):
        return (Fraction(0),) * self.n

    def invert(self, g):
        # Triangular solve for g * x = 0.  For first-kind coordinates this
        # reduces to negation.
        x = []
        for i in range(self.n):
            args = tuple(g) + tuple(x) + (0,) * (2 * self.n - len(g) - len(x))
            val = -g[i]
            for coeff, factors in self._compiled[i]:
                term = coeff
                for idx, exp in factors:
                    term *= args[idx] ** exp
                val -= term
            x.append(val)
        return tuple(x)

    def conjugate_difference(self, g, h):
        """g^{-1} * h, the group-theoretic displacement from g to h."""
        return self.multiply(self.invert(g), h)

    def power(self, g, k):
        out = self.identity()
        base = g if k >= 0 else self.invert(g)
        for _ in range(abs(k)):
            out = self.multiply(out, base)
        return out

    def symbolic_product(self, avars="a", bvars="b"):
        ga = [Polynomial.variable(f"{avars}{i}") for i in range(1, self.n + 1)]
        gb = [Polynomial.variable(f"{bvars}{i}") for i in range(1, self.n + 1)]
        env = {}
        for i in range(1, self.n + 1):
            env[f"a{i}"] = ga[i - 1]
            env[f"b{i}"] = gb[i - 1]
        out = []
        for i in range(self.n):
            p = self.polys[i].evaluate(env) if self.polys[i].terms else Polynomial()
            if not isinstance(p, Polynomial):
                p = Polynomial.constant(p)
            out.append(ga[i] + gb[i] + p)
        return out

    def is_graded(self):
        """True when the weight-w dilations are automorphisms of the law."""
        for i, p in enumerate(self.polys):
            target = self.weights[i]
            for mono, _coeff in p.terms.items():
                wsum = 0
                for name, exp in mono:
                    wsum += self.weights[int(name[1:]) - 1] * exp
                if wsum != target:
                    return False
        return True


def synthesize_law(spec, rng=None):
    """Build the exponential-coordinate group law from a GroupSpec."""
    spec.validate(rng=rng)
    if spec.explicit_law is not None:
        return GroupLaw(spec.dimension, spec.explicit_law, spec.weights)
    n = spec.dimension
    xv = [Polynomial.variable(f"a{i}") for i in range(1, n + 1)]
    yv = [Polynomial.variable(f"b{i}") for i in range(1, n + 1)]
    zv = bch_vectors(spec, xv, yv)
    polys = []
    for i in range(n):
        p = zv[i] - xv[i] - yv[i]
        if not isinstance(p, Polynomial):
            p = Polynomial.constant(p)
        polys.append(p)
    return GroupLaw(n, polys, spec.weights)


# ---------------------------------------------------------------------------
# Coordinate systems
# ---------------------------------------------------------------------------


def basis_point(n, i, value=1):
    coords = [Fraction(0)] * n
    coords[i - 1] = _frac(value)
    return tuple(coords)


def from_second_kind(law, b):
    """exp(b1 xi1) * ... * exp(bn xin), evaluated left to right."""
    g = law.identity()
    for i in range(1, law.n + 1):
        g = law.multiply(g, basis_point(law.n, i, b[i - 1]))
    return g


def to_second_kind(law, g):
    """Invert from_second_kind by triangular peeling."""
    b = []
    prefix = law.identity()
    for i in range(1, law.n + 1):
        bi = g[i - 1] - prefix[i - 1]
        b.append(bi)
        prefix = law.multiply(prefix, basis_point(law.n, i, bi))
    return tuple(b)


def second_kind_law(law):
    """The product polynomials q_i in second-kind coordinates.

    Returned as a GroupLaw over variables a* (first factor) and b*
    (second factor), i.e. the law of the same group viewed in
    second-kind coordinates.
    """
    n = law.n
    bs = [Polynomial.variable(f"a{i}") for i in range(1, n + 1)]
    cs = [Polynomial.variable(f"b{i}") for i in range(1, n + 1)]

    def sym_multiply(g, h):
        env = {}
        for i in range(1, n + 1):
            env[f"a{i}"] = g[i - 1]
            env[f"b{i}"] = h[i - 1]
        out = []
        for i in range(n):
            p = law.polys[i]
            val = g[i] + h[i]
            if p.terms:
                val = val + p.evaluate(env)
            if not isinstance(val, Polynomial):
                val = Polynomial.constant(val)
            out.append(val)
        return out

    def sym_basis(i, value):
        vec = [Polynomial() for _ in range(n)]
        vec[i - 1] = value if isinstance(value, Polynomial) else Polynomial.constant(value)
        return vec

    def sym_from_second(b):
        g = [Polynomial() for _ in range(n)]
        for i in range(1, n + 1):
            g = sym_multiply(g, sym_basis(i, b[i - 1]))
        return g

    gb = sym_from_second(bs)
    gc = sym_from_second(cs)
    prod = sym_multiply(gb, gc)

    # Convert back to second kind symbolically.
    out_b = []
    prefix = [Polynomial() for _ in range(n)]
    for i in range(1, n + 1):
        bi = prod[i - 1] - prefix[i - 1]
        out_b.append(bi)
        prefix = sym_multiply(prefix, sym_basis(i, bi))
    qpolys = [out_b[i] - bs[i] - cs[i] for i in range(n)]
    return GroupLaw(n, qpolys, law.weights)


def check_rationality(spec, law=None):
    """Report on the Malcev rationality conditions for the given basis.

    Structure constants are exact rationals by the data model, so the
    rational-basis flag is about the basis as provided; irrational groups
    must be modeled by rational approximants.
    """
    law = law or synthesize_law(spec)
    second = second_kind_law(law)
    integral = all(
        all(c.denominator == 1 for c in p.coefficients()) for p in second.polys
    )
    return {
        "has_rational_basis": True,
        "law_is_integral_second_kind": integral,
        "note": "irrational structure constants are not representable; "
        "supply rational approximants",
    }


def integral_law(spec, law=None):
    """The group viewed in integral (second-kind) exponential coordinates."""
    law = law or synthesize_law(spec)
    second = second_kind_law(law)
    if not all(
        all(c.denominator == 1 for c in p.coefficients()) for p in second.polys
    ):
        raise GroupError("second-kind law is not integral for this basis")
    return second


# ---------------------------------------------------------------------------
# Dilations, quasi-norm, projections
# ---------------------------------------------------------------------------


def dilate(spec_or_law, g, lam):
    lam = _frac(lam)
    weights = spec_or_law.weights
    return tuple(_frac(c) * lam ** w for c, w in zip(g, weights))


def quasi_norm(spec_or_law, g):
    """max_i |g_i|^(1/w_i); homogeneous of degree 1 under dilations."""
    weights = spec_or_law.weights
    return max(
        (abs(float(c)) ** (1.0 / w) for c, w in zip(g, weights)), default=0.0
    )


def quasi_ball_contains(spec_or_law, g, r):
    """Exact test quasi_norm(g) <= r for rational r."""
    r = _frac(r)
    if r < 0:
        return False
    return all(abs(_frac(c)) <= r ** w for c, w in zip(g, spec_or_law.weights))


def project_spec(spec):
    if spec.dimension < 2:
        raise DimensionTooSmall("cannot project a 1-dimensional group")
    n = spec.dimension
    brackets = {}
    for (i, j), row in spec.brackets.items():
        kept = {k: c for k, c in row.items() if k < n}
        if kept:
            brackets[(i, j)] = kept
    return GroupSpec(
        dimension=n - 1,
        step=spec.step,
        brackets=brackets,
        weights=spec.weights[: n - 1],
        basis_labels=spec.basis_labels[: n - 1],
    )


def project_law(law):
    if law.n < 2:
        raise DimensionTooSmall("cannot project a 1-dimensional group")
    return GroupLaw(law.n - 1, law.polys[: law.n - 1], law.weights[: law.n - 1])


def project_point(g):
    if len(g) < 2:
        raise DimensionTooSmall("cannot project a 1-dimensional point")
    return tuple(g[:-1])


# ---------------------------------------------------------------------------
# Stock groups
# ---------------------------------------------------------------------------


def abelian_spec(n):
    return GroupSpec(dimension=n, step=1)


def heisenberg_spec():
    """The 3-dimensional Heisenberg group with [xi1, xi2] = -xi3.

    The sign is fixed so the synthesized first-kind law has
    p3 = -(a1 b2 - a2 b1)/2.
    """
    return GroupSpec(
        dimension=3,
        step=2,
        brackets={(1, 2): {3: Fraction(-1)}},
        weights=(1, 1, 2),
    )


def filiform4_spec():
    """Step-3 filiform algebra: [xi1,xi2]=xi3, [xi1,xi3]=xi4."""
    return GroupSpec(
        dimension=4,
        step=3,
        brackets={(1, 2): {3: Fraction(1)}, (1, 3): {4: Fraction(1)}},
        weights=(1, 1, 2, 3),
    )


def heisenberg_law():
    return synthesize_law(heisenberg_spec())


def heisenberg_integral_law():
    """Heisenberg in integral coordinates; G(Z) is a subgroup of this law."""
    return integral_law(heisenberg_spec())

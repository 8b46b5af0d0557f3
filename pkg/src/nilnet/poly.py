"""Sparse multivariate polynomials with exact rational coefficients.

Group laws are small and sparse (few monomials, low degree), so a dict
keyed by monomials is the right representation.  A monomial is a sorted
tuple of (variable, exponent) pairs; variables are plain strings such as
"a1" or "b3".
"""

from __future__ import annotations

from fractions import Fraction


def _as_coeff(value):
    f = Fraction(value)
    return f


class Polynomial:
    """Polynomial over named variables with Fraction coefficients.

    Immutable by convention: no method mutates self after construction.
    Arithmetic accepts ints, Fractions, and other Polynomials, so a
    polynomial map can be composed by evaluating with Polynomial values.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for mono, coeff in dict(terms).items():
                c = _as_coeff(coeff)
                if c != 0:
                    self.terms[tuple(sorted(mono))] = c

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value):
        c = _as_coeff(value)
        if c == 0:
            return cls()
        return cls({(): c})

    @classmethod
    def variable(cls, name):
        return cls({((name, 1),): Fraction(1)})

    # -- queries ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def variables(self):
        seen = set()
        for mono in self.terms:
            for name, _ in mono:
                seen.add(name)
        return seen

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def total_degree(self):
        if not self.terms:
            return 0
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def coefficients(self):
        return list(self.terms.values())

    # -- arithmetic ---------------------------------------------------

    def _merged(self, other_terms, sign=1):
        out = dict(self.terms)
        for mono, coeff in other_terms.items():
            c = out.get(mono, Fraction(0)) + sign * coeff
            if c == 0:
                out.pop(mono, None)
            else:
                out[mono] = c
        result = Polynomial()
        result.terms = out
        return result

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self._merged(other.terms)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self._merged(other.terms, sign=-1)

    def __rsub__(self, other):
        return Polynomial.constant(other) - self

    def __neg__(self):
        out = Polynomial()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _as_coeff(other)
            if c == 0:
                return Polynomial()
            out = Polynomial()
            out.terms = {m: co * c for m, co in self.terms.items()}
            return out
        acc = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                exps = {}
                for name, e in m1:
                    exps[name] = exps.get(name, 0) + e
                for name, e in m2:
                    exps[name] = exps.get(name, 0) + e
                mono = tuple(sorted(exps.items()))
                c = acc.get(mono, Fraction(0)) + c1 * c2
                if c == 0:
                    acc.pop(mono, None)
                else:
                    acc[mono] = c
        out = Polynomial()
        out.terms = acc
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        return self.terms == Polynomial.constant(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- evaluation ---------------------------------------------------

    def evaluate(self, env):
        """Evaluate with env mapping variable name -> value.

        Values may be numbers or Polynomials; missing variables raise
        KeyError.  Returns a plain number when all values are numbers.
        """
        total = None
        for mono, coeff in self.terms.items():
            term = coeff
            for name, exp in mono:
                term = term * env[name] ** exp
            total = term if total is None else total + term
        if total is None:
            return Fraction(0)
        return total

    def substitute(self, env):
        """Like evaluate but unmentioned variables stay symbolic."""
        full = {name: Polynomial.variable(name) for name in self.variables()}
        full.update(env)
        result = self.evaluate(full)
        if not isinstance(result, Polynomial):
            result = Polynomial.constant(result)
        return result

    # -- display ------------------------------------------------------

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in sorted(self.terms.items()):
            factors = []
            if coeff != 1 or not mono:
                factors.append(str(coeff))
            for name, exp in mono:
                factors.append(name if exp == 1 else f"{name}^{exp}")
            parts.append("*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

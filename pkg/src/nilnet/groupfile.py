"""Text format for group definitions.

A group file is key/value lines.  Example::

    dimension 3
    step 2
    weights 1 1 2
    structure_constants
    (1, 2, 3, -1/1)

or with an explicit law::

    dimension 3
    step 2
    law 3 = -1/2*a1*b2 + 1/2*a2*b1

Rationals are written ``p/q``.  Polynomial strings use variables
``a1..an`` (first factor) and ``b1..bn`` (second factor) with
``+ - * ^`` and parentheses.  Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .group import GroupError, GroupSpec
from .poly import Polynomial


class ParseError(GroupError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?(?:\.\d+)?)|(?P<name>[A-Za-z]\w*)|(?P<op>[-+*^()]))"
)


def tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"bad character in polynomial: {text[pos:]!r}")
            break
        pos = m.end()
        if m.lastgroup == "num":
            out.append(("num", parse_rational(m.group("num"))))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


def parse_rational(text):
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc


def parse_polynomial(text):
    """Recursive-descent parse of a polynomial string into a Polynomial."""
    tokens = tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else (None, None)

    def take():
        tok = peek()
        pos[0] += 1
        return tok

    def atom():
        kind, val = take()
        if kind == "num":
            return Polynomial.constant(val)
        if kind == "name":
            return Polynomial.variable(val)
        if kind == "op" and val == "(":
            inner = expr()
            kind2, val2 = take()
            if (kind2, val2) != ("op", ")"):
                raise ParseError("missing closing parenthesis")
            return inner
        if kind == "op" and val == "-":
            return -atom()
        if kind == "op" and val == "+":
            return atom()
        raise ParseError(f"unexpected token {val!r}")

    def power():
        base = atom()
        kind, val = peek()
        if (kind, val) == ("op", "^"):
            take()
            kind2, exp = take()
            if kind2 != "num" or exp.denominator != 1 or exp < 0:
                raise ParseError("exponent must be a nonnegative integer")
            return base ** int(exp)
        return base

    def term():
        result = power()
        while True:
            kind, val = peek()
            if (kind, val) == ("op", "*"):
                take()
                result = result * power()
            elif kind in ("num", "name") or (kind, val) == ("op", "("):
                result = result * power()  # implicit multiplication
            else:
                return result

    def expr():
        kind, val = peek()
        sign = 1
        if (kind, val) == ("op", "-"):
            take()
            sign = -1
        elif (kind, val) == ("op", "+"):
            take()
        result = sign * term()
        while True:
            kind, val = peek()
            if (kind, val) == ("op", "+"):
                take()
                result = result + term()
            elif (kind, val) == ("op", "-"):
                take()
                result = result - term()
            else:
                return result

    result = expr()
    if pos[0] != len(tokens):
        raise ParseError(f"trailing tokens in polynomial {text!r}")
    return result


_TRIPLE = re.compile(
    r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(-?\d+(?:/\d+)?)\s*\)"
)


def loads(text):
    """Parse a group definition string into a GroupSpec."""
    dimension = None
    step = None
    weights = None
    brackets = {}
    law_lines = {}
    mode = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key = line.split(None, 1)[0].lower()
        if key == "dimension":
            dimension = int(line.split(None, 1)[1])
            mode = None
        elif key == "step":
            step = int(line.split(None, 1)[1])
            mode = None
        elif key == "weights":
            weights = tuple(int(w) for w in line.split()[1:])
            mode = None
        elif key == "structure_constants":
            mode = "sc"
            rest = line.split(None, 1)
            if len(rest) > 1:
                _parse_triples(rest[1], brackets)
        elif key == "law":
            mode = None
            rest = line.split(None, 1)[1]
            lhs, _, rhs = rest.partition("=")
            try:
                idx = int(lhs.strip())
            except ValueError as exc:
                raise ParseError(f"bad law line {line!r}") from exc
            law_lines[idx] = parse_polynomial(rhs)
        elif mode == "sc" and line.startswith("("):
            _parse_triples(line, brackets)
        else:
            raise ParseError(f"unrecognized line {line!r}")

    if dimension is None or step is None:
        raise ParseError("dimension and step are required")
    if dimension < 1 or step < 1:
        raise ParseError("dimension and step must be positive")

    explicit = None
    if law_lines:
        if brackets:
            raise ParseError("give structure_constants or law, not both")
        explicit = tuple(
            law_lines.get(i, Polynomial()) for i in range(1, dimension + 1)
        )
    norm = _brackets_from_triples(brackets, dimension)
    return GroupSpec(
        dimension=dimension,
        step=step,
        brackets=norm,
        explicit_law=explicit,
        weights=weights,
    )


def _parse_triples(text, brackets):
    consumed = 0
    for m in _TRIPLE.finditer(text):
        i, j, k = int(m.group(1)), int(m.group(2)), int(m.group(3))
        c = parse_rational(m.group(4))
        brackets[(i, j, k)] = brackets.get((i, j, k), Fraction(0)) + c
        consumed += 1
    stripped = _TRIPLE.sub("", text).strip(" ,;")
    if stripped:
        raise ParseError(f"bad structure constant entry {stripped!r}")
    if consumed == 0:
        raise ParseError(f"no structure constant triples in {text!r}")


def _brackets_from_triples(triples, dimension):
    """Fold (i,j,k,c) entries into the {(i,j): {k: c}} form, checking
    antisymmetry when both orders are given."""
    by_pair = {}
    for (i, j, k), c in triples.items():
        if i == j:
            if c != 0:
                raise ParseError(f"[xi_{i}, xi_{i}] must vanish")
            continue
        if not (1 <= i <= dimension and 1 <= j <= dimension and 1 <= k <= dimension):
            raise ParseError(f"structure constant index out of range: ({i},{j},{k})")
        lo, hi = min(i, j), max(i, j)
        val = c if i < j else -c
        row = by_pair.setdefault((lo, hi), {})
        if k in row and row[k] != val:
            raise ParseError(
                f"antisymmetry violated for s_{i}{j}{k}: "
                f"conflicting values {row[k]} and {val}"
            )
        row[k] = val
    return {
        pair: {k: c for k, c in row.items() if c != 0}
        for pair, row in by_pair.items()
        if any(c != 0 for c in row.values())
    }


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(spec):
    lines = [f"dimension {spec.dimension}", f"step {spec.step}"]
    lines.append("weights " + " ".join(str(w) for w in spec.weights))
    if spec.explicit_law is not None:
        for i, p in enumerate(spec.explicit_law, start=1):
            if not p.is_zero():
                lines.append(f"law {i} = {p}")
    elif spec.brackets:
        lines.append("structure_constants")
        for (i, j), row in sorted(spec.brackets.items()):
            for k, c in sorted(row.items()):
                lines.append(f"({i}, {j}, {k}, {c.numerator}/{c.denominator})")
    return "\n".join(lines) + "\n"

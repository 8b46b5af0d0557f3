"""Group definition file parsing."""

from fractions import Fraction

import pytest

from nilnet import groupfile
from nilnet.group import heisenberg_spec, synthesize_law
from nilnet.groupfile import ParseError, dumps, loads, parse_polynomial
from nilnet.poly import Polynomial

HEIS_TEXT = """
# three-dimensional, step two
dimension 3
step 2
weights 1 1 2
structure_constants
(1, 2, 3, -1/1)
"""


def test_load_heisenberg_by_structure_constants():
    spec = loads(HEIS_TEXT)
    assert spec.dimension == 3
    assert spec.step == 2
    assert spec.weights == (1, 1, 2)
    assert spec.brackets == {(1, 2): {3: Fraction(-1)}}
    law = synthesize_law(spec)
    ref = synthesize_law(heisenberg_spec())
    assert law.polys == ref.polys


def test_load_explicit_law():
    text = """
dimension 3
step 2
weights 1 1 2
law 3 = -1/2*a1*b2 + 1/2*a2*b1
"""
    spec = loads(text)
    law = synthesize_law(spec)
    ref = synthesize_law(heisenberg_spec())
    assert law.polys == ref.polys


def test_dumps_roundtrip():
    for spec in (heisenberg_spec(), loads(HEIS_TEXT)):
        again = loads(dumps(spec))
        assert again.dimension == spec.dimension
        assert again.step == spec.step
        assert again.weights == spec.weights
        assert again.brackets == spec.brackets


def test_load_file(tmp_path):
    path = tmp_path / "heis.group"
    path.write_text(HEIS_TEXT)
    spec = groupfile.load(str(path))
    assert spec.brackets == {(1, 2): {3: Fraction(-1)}}


def test_reversed_triple_antisymmetry():
    text = """
dimension 3
step 2
structure_constants
(1, 2, 3, -1)
(2, 1, 3, 1)
"""
    spec = loads(text)
    assert spec.brackets == {(1, 2): {3: Fraction(-1)}}


def test_antisymmetry_conflict():
    text = """
dimension 3
step 2
structure_constants
(1, 2, 3, -1)
(2, 1, 3, -1)
"""
    with pytest.raises(ParseError):
        loads(text)


def test_missing_dimension():
    with pytest.raises(ParseError):
        loads("step 2\n")


def test_unrecognized_line():
    with pytest.raises(ParseError):
        loads("dimension 3\nstep 2\nbananas 4\n")


def test_bad_triple():
    with pytest.raises(ParseError):
        loads("dimension 3\nstep 2\nstructure_constants\n(1, 2, x)\n")


def test_parse_polynomial_forms():
    a1, b2 = Polynomial.variable("a1"), Polynomial.variable("b2")
    assert parse_polynomial("-1/2*a1*b2") == Fraction(-1, 2) * a1 * b2
    assert parse_polynomial("a1^2 - (a1 + b2)^2") == -2 * a1 * b2 - b2 ** 2
    assert parse_polynomial("2a1") == 2 * a1  # implicit multiplication
    assert parse_polynomial("3/4") == Polynomial.constant(Fraction(3, 4))


def test_parse_polynomial_errors():
    with pytest.raises(ParseError):
        parse_polynomial("a1 +")
    with pytest.raises(ParseError):
        parse_polynomial("(a1")
    with pytest.raises(ParseError):
        parse_polynomial("a1 ^ b2")
    with pytest.raises(ParseError):
        parse_polynomial("a1 @ b2")

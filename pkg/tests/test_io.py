from __future__ import annotations

import io
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qpluecker import QuiverFileError, all_relations, parse_quiver_file, print_quiver_file
from qpluecker.export import export_relations
from qpluecker.fixtures import NAMES, load_fixture
from qpluecker.instances import random_instance
from qpluecker.quiverfile import QuiverFile, parse_entry
from qpluecker.scalars import Scalar


def diagnostics(text):
    with pytest.raises(QuiverFileError) as info:
        parse_quiver_file(text)
    return [str(d) for d in info.value.diagnostics]


@pytest.mark.parametrize("name", NAMES)
def test_fixtures_roundtrip(name):
    qf = load_fixture(name)
    again = parse_quiver_file(print_quiver_file(qf))
    assert again == qf
    assert print_quiver_file(again) == print_quiver_file(qf)


def test_example2_fixture_contents():
    qf = load_fixture("jumping_euler")
    rep = qf.representation()
    assert rep.parameters == ("lambda",)
    assert rep.global_labels() == {"p1": (1, 4), "p2": (2, 5), "p3": (3, 6)}
    assert rep.matrix("c")[1][1] == Scalar.param("lambda")


def test_parse_entry():
    lam = Scalar.param("lambda")
    assert parse_entry("1+lambda", {"lambda"}) == lam + 1
    assert parse_entry("-3*lambda", {"lambda"}) == lam * -3
    assert parse_entry("1/2", set()) == Scalar.const(0.5)
    for bad in ("1+", "mu", "1//2", "*2"):
        with pytest.raises(ValueError):
            parse_entry(bad, {"lambda"})


def test_empty_input():
    assert diagnostics("") == ["1:1: no quiver declared"]
    assert diagnostics("# only a comment\n") == ["1:1: no quiver declared"]


def test_shape_diagnostic():
    text = "quiver q\nvertex 1 dim 2\nvertex 2 dim 3\narrow a : 1 -> 2\nmatrix a\n  1 0\n  0 1\ndimvector 1=1 2=1\n"
    (msg,) = diagnostics(text)
    assert msg == "5:1: matrix 'a': expected shape 3x2 (2 <- 1), got 2 rows"


def test_undeclared_parameter_diagnostic():
    text = "quiver q\nvertex 1 dim 1\narrow a : 1 -> 1\nmatrix a\n  mu\n"
    (msg,) = diagnostics(text)
    assert msg.startswith("5:3:") and "undeclared parameter 'mu'" in msg


def test_several_diagnostics_reported():
    text = "quiver q\nvertex 1 dim 1\nvertex 1 dim 2\narrow a : 1 -> 9\nfoo\ndimvector 1=3\n"
    msgs = diagnostics(text)
    assert len(msgs) >= 4
    assert any("declared twice" in m for m in msgs)
    assert any("unknown vertex '9'" in m for m in msgs)
    assert any("unknown directive 'foo'" in m for m in msgs)


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_random_roundtrip(seed):
    rep, dims = random_instance(random.Random(seed))
    qf = QuiverFile.from_representation(rep, dims)
    assert parse_quiver_file(print_quiver_file(qf)).representation() == rep


def test_plain_export(jumping, elliptic):
    rep, dims = jumping
    text = export_relations(all_relations(rep, dims))
    assert text.splitlines()[0] == "# jumping_euler_A2: e = (p1=1 p2=2 p3=1), 1 relation(s)"
    assert "lambda" in text
    from qpluecker import Representation
    rep0 = Representation(rep.quiver, rep.dims, {a: [[0, 0], [0, 0]] for a in "abc"}, name="zero")
    assert export_relations(all_relations(rep0, dims)) == "# zero: e = (p1=1 p2=2 p3=1), 0 relation(s)\n"


def test_cas_export_parses(elliptic, jumping):
    rep, dims = elliptic
    rels = all_relations(rep, dims)
    text = export_relations(rels, "cas")
    ring = next(l for l in text.splitlines() if l.startswith("ring"))
    names = ring[ring.index("(") + 1: ring.index(")")].split(", ")
    assert len(names) == 7
    gens = text.split("ideal I =", 1)[1].strip().rstrip(";").split(",\n")
    assert len(gens) == 4
    symbols = sympy.symbols(names)
    local = dict(zip(names, symbols))
    for g in gens:
        expr = sympy.sympify(g.strip(), locals=local)
        assert expr.free_symbols <= set(symbols)
        assert sympy.Poly(expr, *symbols).total_degree() == 2
    rep, dims = jumping
    text = export_relations(all_relations(rep, dims), "cas")
    assert "ring R = 0, (lambda, D_1, D_4, D_2_5, D_3, D_6), dp;" in text
    with pytest.raises(ValueError):
        export_relations(rels, "json")

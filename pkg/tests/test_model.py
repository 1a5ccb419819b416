from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qpluecker import (
    Arrow,
    Path,
    Quiver,
    Representation,
    StructuralError,
    enumerate_paths,
    path_matrix,
    validate_representation,
)
from qpluecker.model import mat_mul
from qpluecker.scalars import Scalar


def kinds(report):
    return sorted(v.kind for v in report.violations)


def test_fixtures_validate(del_pezzo, jumping, elliptic):
    for rep, _ in (del_pezzo, jumping, elliptic):
        assert validate_representation(rep).ok


def test_shape_violation():
    q = Quiver(("1", "2"), (Arrow("a", "1", "2"),))
    rep = Representation(q, {"1": 2, "2": 3}, {"a": [[1, 0, 0], [0, 1, 0]]})
    report = validate_representation(rep)
    assert kinds(report) == ["shape"]
    assert "expected 3x2 (2 <- 1)" in str(report.violations[0])


def test_unknown_vertex_and_missing_dim():
    q = Quiver(("1",), (Arrow("a", "1", "7"),))
    rep = Representation(q, {}, {"a": []})
    assert "unknown-vertex" in kinds(validate_representation(rep))
    assert "missing-dimension" in kinds(validate_representation(rep))


def test_undeclared_parameter():
    q = Quiver(("1",), (Arrow("a", "1", "1"),))
    rep = Representation(q, {"1": 1}, {"a": [[Scalar.param("mu")]]})
    assert kinds(validate_representation(rep)) == ["undeclared-parameter"]


def test_path_matrix_example2(jumping):
    rep, _ = jumping
    m = path_matrix(rep, Path.along(rep.quiver, ["c", "a"]))
    lam = Scalar.param("lambda")
    assert m == ((lam, Scalar()), (Scalar.const(1), lam))
    assert path_matrix(rep, Path.trivial("p1")) == ((1, 0), (0, 1))


def test_bad_path(jumping):
    rep, _ = jumping
    with pytest.raises(StructuralError):
        Path.along(rep.quiver, ["a", "c"])
    with pytest.raises(StructuralError):
        path_matrix(rep, Path("p1", "p3", ()))


def brute_force_path_count(quiver, length):
    if length == 0:
        return len(quiver.vertices)
    walks = [(a.name,) for a in quiver.arrows]
    for _ in range(length - 1):
        walks = [w + (b.name,) for w in walks for b in quiver.arrows
                 if b.source == quiver.arrow(w[-1]).target]
    return len(walks)


def test_enumerate_paths_counts(del_pezzo, jumping):
    counts = lambda q, n: [sum(1 for p in enumerate_paths(q, n) if len(p) == k) for k in range(n + 1)]
    assert counts(del_pezzo[0].quiver, 2) == [4, 3, 0]
    assert counts(jumping[0].quiver, 3) == [3, 3, 1, 0]


def random_quiver(rng):
    n = rng.randint(1, 3)
    vs = tuple(f"v{k}" for k in range(n))
    arrows = tuple(Arrow(f"a{k}", rng.choice(vs), rng.choice(vs)) for k in range(rng.randint(0, 4)))
    return Quiver(vs, arrows)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_enumerate_paths_matches_brute_force(seed):
    q = random_quiver(random.Random(seed))
    paths = enumerate_paths(q, 3)
    for k in range(4):
        assert sum(1 for p in paths if len(p) == k) == brute_force_path_count(q, k)
    assert len(set(paths)) == len(paths)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_path_matrix_functorial(seed):
    rng = random.Random(seed)
    q = random_quiver(rng)
    dims = {v: rng.randint(0, 3) for v in q.vertices}
    mats = {a.name: [[Fraction(rng.randint(-3, 3)) for _ in range(dims[a.source])]
                     for _ in range(dims[a.target])] for a in q.arrows}
    rep = Representation(q, dims, mats)
    for p in enumerate_paths(q, 3):
        if len(p) < 2:
            continue
        head = Path.along(q, p.arrows[:1])
        tail = Path.along(q, p.arrows[1:])
        expected = mat_mul(path_matrix(rep, tail), path_matrix(rep, head), cols=dims[p.source])
        assert path_matrix(rep, p) == expected

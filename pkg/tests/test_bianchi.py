import numpy as np
import pytest
import sympy

from liepoisson import algebra as alg
from liepoisson import bianchi as bn
from liepoisson.bianchi import BianchiType
from liepoisson.lie_poisson import poisson_matrix

ETAS = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
x1, x2, x3 = sympy.symbols("x1 x2 x3")


def _sym_J(t):
    c = bn.bianchi_algebra(t).c
    X = (x1, x2, x3)
    return sympy.Matrix(3, 3, lambda j, k: sum(sympy.nsimplify(c[l, j, k]) * X[l] for l in range(3)))


def _sym_casimir(label, eta):
    """Independent symbolic Casimirs for the class B types."""
    e = sympy.nsimplify(eta) if eta is not None else None
    if label == "IV":
        return x2 / x1 - sympy.log(x1)
    if label == "V":
        return x1 / x2
    if label == "VI":
        return e * sympy.log(x1) - sympy.log(x2)
    if e ** 2 > 4:
        r = sympy.sqrt(e ** 2 - 4)
        lp, lm = (-e + r) / 2, (-e - r) / 2
        return lm * sympy.log(lm * x1 + x2) - lp * sympy.log(lp * x1 + x2)
    if e ** 2 == 4:
        s = sympy.sign(e)
        return s * x2 / (x1 - s * x2) + sympy.log(x1 - s * x2)
    a, w = -e / 2, sympy.sqrt(1 - e ** 2 / 4)
    return 2 * a * sympy.atan((a * x1 + x2) / (w * x1)) - w * sympy.log((a * x1 + x2) ** 2 + (w * x1) ** 2)


@pytest.mark.parametrize("t", [BianchiType("IV"), BianchiType("V")]
                         + [BianchiType("VI", e) for e in (-2.0, -0.5, 0.5, 2.0)]
                         + [BianchiType("VII", e) for e in (-3.0, -2.0, -0.5, 0.5, 2.0, 3.0)], ids=str)
def test_class_b_casimir_symbolic(t):
    C = _sym_casimir(t.label, t.eta)
    grad = sympy.Matrix([sympy.diff(C, v) for v in (x1, x2, x3)])
    assert sympy.simplify(_sym_J(t) * grad) == sympy.zeros(3, 1)
    f = bn.casimir_of(t)
    g = sympy.lambdify((x1, x2, x3), grad, "numpy")
    rng = np.random.default_rng(0)
    for x in rng.uniform(0.3, 2.0, size=(10, 3)):
        np.testing.assert_allclose(f.grad(x), np.asarray(g(*x), dtype=float).ravel(), rtol=1e-10, atol=1e-12)


def test_vii_alternative_discriminant_fails_symbolically():
    e = sympy.Integer(3)
    r = sympy.sqrt(e ** 2 - 1)
    lp, lm = (-e + r) / 2, (-e - r) / 2
    C = lm * sympy.log(lm * x1 + x2) - lp * sympy.log(lp * x1 + x2)
    grad = sympy.Matrix([sympy.diff(C, v) for v in (x1, x2, x3)])
    assert sympy.simplify(_sym_J(BianchiType("VII", 3.0)) * grad) != sympy.zeros(3, 1)


@pytest.mark.parametrize("t", bn.all_types(ETAS), ids=str)
def test_every_casimir_annihilated(t):
    C = bn.casimir_of(t)
    c = bn.bianchi_algebra(t)
    rng = np.random.default_rng(1)
    for x in rng.normal(size=(50, 3)):
        if C.in_domain(x):
            g = C.grad(x)
            assert np.max(np.abs(poisson_matrix(c, x) @ g)) < 1e-12 * (1 + np.max(np.abs(g)))


def test_ix_is_cross_product_and_class_labels():
    c = bn.bianchi_algebra(BianchiType("IX"))
    x, y = np.random.default_rng(2).normal(size=(2, 3))
    np.testing.assert_allclose(alg.bracket(c, x, y), np.cross(x, y), atol=1e-14)
    assert {t.label for t in bn.all_types() if t.klass == "A"} == {"I", "II", "VI", "VII", "VIII", "IX"}
    assert BianchiType("VI", -1.0).klass == "A" and BianchiType("VI", 0.5).klass == "B"
    assert BianchiType("VII", 0.0).klass == "A" and BianchiType("VII", 1.0).klass == "B"
    assert BianchiType("III").klass == BianchiType("V").klass == "B"


def test_parse_and_str():
    assert str(BianchiType.parse("VI(-1)")) == "VI(-1)"
    assert BianchiType.parse("VII", 0.5).eta == 0.5
    assert str(BianchiType.parse("ix")) == "IX"
    with pytest.raises(ValueError):
        BianchiType("X")
    with pytest.raises(ValueError):
        BianchiType("VI")


def test_all_types_count():
    assert len(bn.all_types(ETAS)) == 7 + 2 * len(ETAS)


@pytest.mark.parametrize("t", bn.all_types(ETAS), ids=str)
def test_singular_set_is_zero_set_of_J(t):
    S = bn.singular_set(t)
    c = bn.bianchi_algebra(t)
    rng = np.random.default_rng(3)
    for _ in range(5):
        assert np.max(np.abs(poisson_matrix(c, S.sample(rng)))) < 1e-14
    from liepoisson.lie_poisson import singular_subspace

    assert singular_subspace(c).shape[0] == S.dim


def test_vii_casimir_regimes_are_distinct_functions():
    assert "sqrt(eta^2-4)" in bn.casimir_of(BianchiType("VII", 3.0)).expression
    assert "atan" in bn.casimir_of(BianchiType("VII", 1.0)).expression
    C = bn.casimir_of(BianchiType("VII", 2.0))
    assert not C.in_domain([1.0, 1.0, 0.0])


def test_reversal_t3_and_literal_form():
    T3 = bn.REVERSAL_CANDIDATES["T3"]
    c = bn.bianchi_algebra(BianchiType("IX"))
    x = np.array([0.3, -1.2, 0.7])
    assert bn.reversal_defect(c, T3, x) < 1e-14
    # the literal J(T xi) = -J(xi) does not hold even here
    assert np.max(np.abs(poisson_matrix(c, T3 @ x) + poisson_matrix(c, x))) > 0.1
    assert all("T3" in [n for n, _ in bn.reversal_transforms(t)] for t in bn.all_types())


def test_killing_scaled_so3():
    np.testing.assert_array_equal(bn.killing_scaled(BianchiType("IX")), -np.eye(3))

import numpy as np
import pytest

from liepoisson import bianchi as bn
from liepoisson import lie_poisson as lp
from liepoisson import spectral as sp
from liepoisson.errors import EquilibriumError, SpectralError
from liepoisson.functions import random_polynomial

I = (1.0, 2.0, 3.0)


def _euler_lambda2(a, axis):
    """Squared nonzero eigenvalue of the rigid body linearized about a * e_axis."""
    o = [j for j in range(3) if j != axis]
    return -4 * a * a * (1 / I[o[0]] - 1 / I[axis]) * (1 / I[o[1]] - 1 / I[axis])


def test_classify_equilibrium_examples():
    prs = lp.prs_system(2.0)
    assert sp.classify_equilibrium(prs, [0.0, 0.0, 1.5]) == "singular"
    assert sp.classify_equilibrium(prs, [1.0, 1.0, 1.0]) == "not_equilibrium"
    e = lp.euler_top(I)
    F = lp.energy_casimir(e, [lp.euler_regular_multiplier(I)])
    assert sp.classify_equilibrium(e, [1.0, 0.0, 0.0], F) == "regular"
    assert sp.classify_equilibrium(e, [1.0, 0.0, 0.0]) == "generic"


def test_prs_singular_generator():
    g = sp.linearize_singular(lp.prs_system(3.0), [0.0, 0.0, 0.5])
    np.testing.assert_allclose(g.A, np.diag([1.5, -0.5, 0.0]), atol=1e-15)
    assert g.reconstruction_error() < 1e-12
    r = sp.spectrum(g)
    assert r.symmetry_verdict == "chiral" and r.equilibrium_kind == "singular"


@pytest.mark.parametrize("eta", [-2.0, -0.5, 0.5, 2.0])
def test_vi_generator_is_diagonal(eta):
    s = lp.bianchi_system(bn.BianchiType("VI", eta))
    H = lp.quadratic_form(np.eye(3))
    s = lp.LiePoissonSystem(s.tensor, lp.ScalarFunction(lambda x: H(x) + 0.7 * x[2], lambda x: H.grad(x) + [0, 0, 0.7]))
    g = sp.linearize_singular(s, [0.0, 0.0, 0.3])
    np.testing.assert_allclose(g.A, np.diag([1.0, eta, 0.0]) * 1.0, atol=1e-14)


def test_viii_spectrum():
    s = lp.LiePoissonSystem(bn.bianchi_algebra(bn.BianchiType("VIII")),
                            lp.ScalarFunction(lambda x: x[2], lambda x: np.array([0.0, 0.0, 1.0])), check=False)
    r = sp.spectrum(sp.linearize_singular(s, np.zeros(3)))
    np.testing.assert_allclose(sorted(r.eigenvalues.imag), [-1.0, 0.0, 1.0], atol=1e-14)
    assert r.symmetric


@pytest.mark.parametrize("axis,a", [(0, 1.0), (0, -0.7), (1, 1.3), (2, 0.4)])
def test_euler_regular_linearization_oracle(axis, a):
    e = lp.euler_top(I)
    F = lp.energy_casimir(e, [lp.euler_regular_multiplier(I, axis)])
    x = np.zeros(3)
    x[axis] = a
    g = sp.linearize_regular(e, x, F)
    assert g.reconstruction_error() < 1e-12
    r = sp.spectrum(g)
    ev = sorted(r.eigenvalues, key=lambda z: (z.real, z.imag))
    lam = np.sqrt(complex(_euler_lambda2(a, axis)))
    np.testing.assert_allclose(sorted([-lam, 0, lam], key=lambda z: (z.real, z.imag)), ev, atol=1e-6)
    assert r.symmetric
    if axis == 1:
        assert max(z.real for z in ev) > 0.1


def test_linearize_rejects_wrong_points():
    with pytest.raises(EquilibriumError):
        sp.linearize_singular(lp.prs_system(2.0), [1.0, 1.0, 1.0])
    e = lp.euler_top(I)
    F = lp.energy_casimir(e, [lp.euler_regular_multiplier(I)])
    with pytest.raises(EquilibriumError):
        sp.linearize_regular(e, [0.0, 1.0, 0.0], F)


def test_zero_hessian_gives_zero_generator():
    e = lp.euler_top(I)
    F = lp.ScalarFunction(lambda x: 0.0, lambda x: np.zeros(3), hessian=lambda x: np.zeros((3, 3)))
    g = sp.linearize_regular(e, [1.0, 0.0, 0.0], F)
    assert not np.any(g.A)
    assert sp.spectrum(g).symmetric and sp.spectrum(g).nullity == 3


def test_charpoly_paths_agree():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3, 4):
        A = rng.normal(size=(n, n))
        np.testing.assert_allclose(sp.charpoly_laplace(A), np.poly(A), atol=1e-10)
        assert sp.spectrum(A).char_poly_mismatch < 1e-10


def test_bottleneck_distance():
    assert sp.bottleneck_distance([1, 2, 3], [3, 1, 2]) == 0.0
    assert sp.bottleneck_distance([0.0, 1.0], [0.0, 1.5]) == pytest.approx(0.5)
    # a greedy nearest-neighbour pairing would report 2; the optimal matching gives 1
    assert sp.bottleneck_distance([0.0, 1.0], [1.0, 2.0]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        sp.bottleneck_distance([1.0], [1.0, 2.0])


def test_spectrum_report_dict_and_conjugation():
    A = np.array([[0.0, -2.0], [2.0, 0.0]])
    r = sp.spectrum(A)
    d = r.to_dict()
    assert d["eigenvalues"] == [[0.0, -2.0], [0.0, 2.0]]
    assert d["symmetry_verdict"] == "hamiltonian_symmetric"
    assert r.conjugation_defect == 0.0
    with pytest.raises(SpectralError):
        sp.spectrum(np.zeros((2, 3)))


def test_defective_nilpotent_is_symmetric():
    A = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    assert sp.spectrum(A).symmetric


@pytest.mark.parametrize("t", bn.all_types((-1.0, 0.0, 0.5)), ids=str)
def test_linear_invariants(t):
    rng = np.random.default_rng(4)
    s = lp.bianchi_system(t, random_polynomial(3, 4, rng).as_function("H"))
    g = sp.linearize_singular(s, bn.singular_set(t).sample(rng))
    r = sp.verify_linear_invariants(g, bn.casimir_of(t))
    assert r.ok, r


@pytest.mark.parametrize("label,eta", [("II", None), ("VI", -1.0), ("VII", 0.0), ("VIII", None), ("IX", None)])
def test_class_a_hamiltonian_form(label, eta):
    t = bn.BianchiType(label, eta)
    rng = np.random.default_rng(5)
    s = lp.bianchi_system(t, random_polynomial(3, 3, rng).as_function("H"))
    f = sp.class_a_singular_hamiltonian_form(s, bn.singular_set(t).sample(rng))
    assert f.factorization_residual < 1e-12
    assert f.h1_casimir_residual < 1e-12
    np.testing.assert_array_equal(f.Jh, -f.Jh.T)
    np.testing.assert_array_equal(f.M, f.M.T)


def test_class_a_form_rejects_class_b():
    s = lp.bianchi_system(bn.BianchiType("V"))
    with pytest.raises(EquilibriumError):
        sp.class_a_singular_hamiltonian_form(s, [0.0, 0.0, 1.0])

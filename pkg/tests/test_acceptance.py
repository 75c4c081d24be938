"""Acceptance criteria, one check per criterion at its stated tolerance.

Each ``crit_N`` returns (ok, detail).  The pytest wrappers record the
outcome for the terminal summary and then assert it, so an unmet
criterion shows up both as a FAIL line and as a failing test.
Run ``python3 tests/test_acceptance.py`` for the lines alone.
"""
import math
import time

import numpy as np
import pytest

from liepoisson import algebra as alg
from liepoisson import bianchi as bn
from liepoisson import dim4
from liepoisson import field as fb
from liepoisson import lie_poisson as lp
from liepoisson import spectral as sp
from liepoisson.deformation import deform, recover_M, validate_deformation
from liepoisson.functions import ScalarFunction, random_polynomial

ETAS = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# 1 ----------------------------------------------------------------------

def crit_1():
    def work():
        gen = sp.linearize_singular(lp.prs_system(2.0), [0.0, 0.0, 1.0])
        ev = np.sort(np.linalg.eigvals(gen.A).real)
        err = float(np.max(np.abs(ev - np.array([-1.0, 0.0, 2.0]))))
        rng = np.random.default_rng(1)
        worst_ulp = 0.0
        for _ in range(20):
            a = rng.uniform(1.0, 5.0)
            s = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
            e = np.linalg.eigvals(sp.linearize_singular(lp.prs_system(a), [0.0, 0.0, s]).A).real
            nz = e[np.abs(e) > 1e-12]
            big, small = nz[np.argmax(np.abs(nz))], nz[np.argmin(np.abs(nz))]
            worst_ulp = max(worst_ulp, abs(big / small + a) / np.spacing(a))
        return err, worst_ulp

    (err, ulp), dt = _timed(work)
    ok = err < 1e-10 and ulp <= 2 and dt < 1.0
    return ok, f"eig error {err:.1e}, ratio within {ulp:.0f} ulp of -alpha over 20 draws, {dt:.3f} s"


# 2 ----------------------------------------------------------------------

def crit_2():
    def work():
        bad = []
        eps = alg.levi_civita()
        types = bn.all_types(ETAS)
        for t in types:
            c = bn.bianchi_algebra(t)
            back = deform(eps, recover_M(c))
            if not np.array_equal(back.c, c.c) or alg.jacobi_residual(c) != 0.0:
                bad.append(str(t))
        return bad, len(types)

    (bad, n), dt = _timed(work)
    return (not bad and dt < 1.0), f"{n - len(bad)}/{n} tensors exact with zero Jacobi residual, {dt:.3f} s"


# 3 ----------------------------------------------------------------------

def _random_symmetric(rng, rank):
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    d = np.zeros(3)
    d[:rank] = rng.uniform(0.5, 2.0, size=rank) * rng.choice([-1.0, 1.0], size=rank)
    return Q @ np.diag(d) @ Q.T


def class_a_3d_trials(trials=100, seed=0):
    rng = np.random.default_rng(seed)
    eps = alg.levi_civita()
    sym = 0
    for i in range(trials):
        M = _random_symmetric(rng, i % 3)
        c = deform(eps, M)
        H = random_polynomial(3, 4, rng).as_function("H")
        sysm = lp.LiePoissonSystem(c, H, check=False)
        K = lp.singular_subspace(c)
        xi = rng.normal(size=K.shape[0]) @ K
        if sp.spectrum(sp.linearize_singular(sysm, xi)).symmetric:
            sym += 1
    return sym


def class_a_dim4_trials(entry, trials=100, seed=0):
    rng = np.random.default_rng(seed)
    K = lp.singular_subspace(entry.tensor)
    sym = 0
    for _ in range(trials):
        H = random_polynomial(4, 4, rng).as_function("H")
        sysm = lp.LiePoissonSystem(entry.tensor, H, check=False)
        xi = rng.normal(size=K.shape[0]) @ K
        if sp.spectrum(sp.linearize_singular(sysm, xi)).symmetric:
            sym += 1
    return sym


def crit_3():
    parts, ok = [], True
    s = class_a_3d_trials()
    ok &= s == 100
    parts.append(f"3-D symmetric M {s}/100 symmetric")
    for name in ("mother", "A4_10", "A4_8", "A4_1"):
        e = dim4.mother_entry() if name == "mother" else dim4.dim4_entry(name)
        s = class_a_dim4_trials(e)
        ok &= s == 100
        parts.append(f"{name} {s}/100")
    probe_h3 = (("h3 = 0", lambda h: np.array([h[0], h[1], 0.0])),)
    chiral_parts, exceptions = [], []
    b_types = [bn.BianchiType("IV"), bn.BianchiType("V")]
    b_types += [bn.BianchiType("VI", e) for e in ETAS if e != -1.0]
    b_types += [bn.BianchiType("VII", e) for e in ETAS if e != 0.0]
    for t in b_types:
        r = dim4.symmetry_trials(bn.bianchi_algebra(t), str(t), 100, 0, probe_h3)
        ok &= r.chiral >= 95
        chiral_parts.append(r.chiral)
        exceptions += [f"{t} at {d}: {v}" for d, _, v in r.exceptions if v == "hamiltonian_symmetric"]
    for name in ("A4_3", "A4_12"):
        r = dim4.deformation_symmetry_check(dim4.dim4_entry(name))
        ok &= r.chiral >= 95
        parts.append(f"{name} chiral {r.chiral}/100")
        exceptions += [f"{name} at {d}: {v}" for d, _, v in r.exceptions if v == "hamiltonian_symmetric"]
    parts.append(f"3-D class B chiral min {min(chiral_parts)}/100 over {len(b_types)} types")
    parts.append(f"symmetric exceptions detected: {len(exceptions)} ({'; '.join(exceptions[:3])}...)")
    return ok, ", ".join(parts)


# 4 ----------------------------------------------------------------------

M_CASE1 = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
M_CASE2 = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def crit_4():
    eps = alg.levi_civita()
    v1 = validate_deformation(eps, M_CASE1)
    flagged = "derived algebra not an ideal" in v1.failures
    v2 = validate_deformation(eps, M_CASE2)
    d = v2.residual_direction
    target = np.array([1.0, -1.0, 0.0]) / math.sqrt(2.0)
    cos = abs(float(d @ target)) if d is not None else 0.0
    ok = flagged and cos > 1 - 1e-10
    return ok, (f"case 1 failures {list(v1.failures)} (ideal flag {'present' if flagged else 'absent'}); "
                f"case 2 residual direction {np.round(d, 12).tolist() if d is not None else None}, "
                f"|cos| with e1-e2 = {cos:.3g}")


# 5 ----------------------------------------------------------------------

def casimir_residual(c, C, points=1000, seed=0):
    """Worst ||J dC||_inf / (1 + ||dC||_inf) over seeded points inside the domain."""
    rng = np.random.default_rng(seed)
    worst, done = 0.0, 0
    while done < points:
        x = rng.normal(size=c.dim) * 2.0
        if not C.in_domain(x):
            continue
        g = C.grad(x)
        r = np.max(np.abs(lp.poisson_matrix(c, x) @ g)) / (1.0 + np.max(np.abs(g)))
        worst = max(worst, float(r))
        done += 1
    return worst


def alternative_vii_casimir(eta):
    """The VII(eta) Casimir with discriminant eta^2 - 1 in place of eta^2 - 4."""
    r = math.sqrt(eta * eta - 1.0)
    lp_, lm = (-eta + r) / 2.0, (-eta - r) / 2.0

    def gradient(x):
        dm, dp = lm * x[0] + x[1], lp_ * x[0] + x[1]
        return np.array([lm * lm / dm - lp_ * lp_ / dp, lm / dm - lp_ / dp, 0.0])

    return ScalarFunction(lambda x: 0.0, gradient,
                          boundary_distance=lambda x: min(abs(lm * x[0] + x[1]), abs(lp_ * x[0] + x[1])))


def crit_5():
    cases = [(str(t), bn.bianchi_algebra(t), bn.casimir_of(t)) for t in bn.all_types(ETAS)]
    for e in (-3.0, 3.0, -2.0, 2.0, -1.0, 1.0, -0.5, 0.5):
        t = bn.BianchiType("VII", e)
        cases.append((str(t), bn.bianchi_algebra(t), bn.casimir_of(t)))
    for a in (0.5, 2.0, 3.0):
        s = lp.prs_system(a)
        cases.append((s.name, s.tensor, s.casimirs[0]))
    worst = {name: casimir_residual(c, C) for name, c, C in cases}
    top = max(worst, key=worst.get)
    ok = all(v < 1e-10 for v in worst.values())
    alt = min(casimir_residual(bn.bianchi_algebra(bn.BianchiType("VII", e)), alternative_vii_casimir(e), 200)
              for e in (-3.0, 3.0))
    return ok, (f"{len(cases)} Casimirs, worst scaled residual {worst[top]:.1e} ({top}); "
                f"eta^2-4 discriminant confirmed, eta^2-1 alternative leaves {alt:.2g}")


# 6 ----------------------------------------------------------------------

def crit_6():
    reps = [dim4.verify_char_polys(e) for e in dim4.all_entries()]
    ok = all(r.passed for r in reps)
    fails = [f"{r.name} {r.max_rel_error:.2g}" for r in reps if not r.passed]
    corr = dim4.verify_char_polys(dim4.dim4_entry("A4_12"), descriptor=dim4.CORRECTED_POLYS["A4_12"])
    worst = max(r.max_rel_error for r in reps if r.passed)
    return ok, (f"{sum(r.passed for r in reps)}/6 printed polynomials match (worst passing {worst:.1e}); "
                f"failing: {fails or 'none'}; monic correction of A4_12 matches to {corr.max_rel_error:.1e}")


# 7 ----------------------------------------------------------------------

def crit_7():
    out, ok = [], True
    for sysm, x0 in ((lp.euler_top((1.0, 2.0, 3.0)), [0.1, 1.0, 0.1]), (lp.prs_system(2.0), [0.01, 0.01, 1.0])):
        tr, dt = _timed(lambda: lp.integrate(sysm, x0, 1e-3, 10.0, "rk4"))
        ok &= tr.max_drift < 1e-6 and dt < 5.0 and not tr.diagnostic
        out.append(f"{sysm.name} drift {tr.max_drift:.1e} in {dt:.2f} s")
    return ok, "; ".join(out)


# 8 ----------------------------------------------------------------------

def crit_8():
    rng = np.random.default_rng(8)
    worst_h1 = worst_c = 0.0
    types = bn.all_types(ETAS)
    for t in types:
        H = random_polynomial(3, 4, rng).as_function("H")
        sysm = lp.bianchi_system(t, H)
        xi = bn.singular_set(t).sample(rng)
        gen = sp.linearize_singular(sysm, xi)
        r = sp.verify_linear_invariants(gen, bn.casimir_of(t), trials=20, seed=int(rng.integers(1 << 30)),
                                        h1_tol=1e-8, c_tol=1e-8)
        worst_h1, worst_c = max(worst_h1, r.h1_drift), max(worst_c, r.casimir_drift)
    ok = worst_h1 < 1e-8 and worst_c < 1e-8
    return ok, f"{len(types)} types x 20 perturbations: H1 drift {worst_h1:.1e}, C drift {worst_c:.1e}"


# 9 ----------------------------------------------------------------------

def crit_9():
    types = bn.all_types(ETAS)
    found = {str(t): {n for n, _ in bn.reversal_transforms(t, samples=1000)} for t in types}
    t3 = all("T3" in v for v in found.values())
    nonabelian = [str(t) for t in types if t.label != "I"]
    t2 = {n for n in nonabelian if "T2" in found[n]}
    t12 = {n for n in nonabelian if "T12" in found[n]}
    want2, want12 = {"II", "VII(0)", "VIII", "IX"}, {"VI(-1)"}
    ok = t3 and t2 == want2 and t12 == want12
    return ok, (f"T3 on all {len(types)}: {t3}; T2 set {sorted(t2)} "
                f"({'matches' if t2 == want2 else 'differs'}); T12 set {sorted(t12)} "
                f"({'matches' if t12 == want12 else 'expected ' + str(sorted(want12))})")


# 10 ---------------------------------------------------------------------

def crit_10():
    t0 = time.perf_counter()
    X = fb.lattice(16)
    h = np.array([np.sin(X[1]), 0.3 * np.ones_like(X[0]), 1.0 + np.cos(X[0])])
    u0 = np.random.default_rng(10).normal(size=X.shape)
    a = float(np.max(np.abs(fb.integrate_local(h, u0, 1.0, 1e-3) - fb.local_chiral_evolution(h, u0, 1.0))))
    tr = fb.integrate_field(fb.two_beltrami(2), 1e-3, 1.0)
    b = max(tr.energy_drift, tr.helicity_drift)
    c = 0.0
    for k in ((0, 0, 1), (1, 1, 0), (1, 2, 2)):
        for s in (1, -1):
            w = fb.beltrami(2, k, s)
            c = max(c, float(np.max(np.abs(fb.vortex_rhs(w).coef))))
            run = fb.integrate_field(w, 1e-3, 0.05)
            c = max(c, float(np.max(np.abs(run.final.coef - w.coef))))
    dt = time.perf_counter() - t0
    ok = a < 1e-8 and b < 1e-6 and c < 1e-10 and dt < 60.0
    return ok, (f"(a) closed form vs rk4 {a:.1e}; (b) energy/helicity drift {b:.1e}; "
                f"(c) Beltrami stationarity {c:.1e}; {dt:.1f} s")


CRITERIA = {i: globals()[f"crit_{i}"] for i in range(1, 11)}


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_acceptance(num, record):
    ok, detail = CRITERIA[num]()
    record(num, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for num, fn in CRITERIA.items():
        ok, detail = fn()
        print(f"ACCEPTANCE {num:>2} {'PASS' if ok else 'FAIL'}: {detail}")

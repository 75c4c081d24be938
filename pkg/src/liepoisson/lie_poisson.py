"""Lie-Poisson systems: Poisson matrix, Hamilton's equations and flows."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import algebra as alg
from .algebra import StructureTensor
from .errors import DimensionError
from .functions import CasimirFunction, ScalarFunction, linear_combination, quadratic_form


def poisson_matrix(c: StructureTensor, xi) -> np.ndarray:
    """J_{jk}(xi) = c^l_{jk} xi_l."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (c.dim,):
        raise DimensionError(f"expected phase vector of length {c.dim}, got shape {xi.shape}")
    return np.tensordot(xi, c.c, axes=1)


def poisson_pattern(c: StructureTensor) -> list[list[str]]:
    """Symbolic entries of J(xi) as strings, e.g. ``'-xi1+2*xi3'``."""
    n = c.dim
    rows = []
    for j in range(n):
        row = []
        for k in range(n):
            terms = []
            for ell in range(n):
                v = c.c[ell, j, k]
                if v == 0.0:
                    continue
                if v == 1.0:
                    terms.append(f"+xi{ell + 1}")
                elif v == -1.0:
                    terms.append(f"-xi{ell + 1}")
                else:
                    terms.append(f"{v:+g}*xi{ell + 1}")
            s = "".join(terms)
            row.append(s[1:] if s.startswith("+") else (s or "0"))
        rows.append(row)
    return rows


def rank_profile(c: StructureTensor, xi, tol: float = 1e-10) -> tuple[int, int]:
    """(rank of J(xi), nullity n - rank)."""
    J = poisson_matrix(c, xi)
    s = np.linalg.svd(J, compute_uv=False)
    scale = max(1.0, float(np.max(np.abs(c.c), initial=0.0)) * (1.0 + float(np.max(np.abs(xi), initial=0.0))))
    r = int(np.sum(s > tol * scale))
    return r, c.dim - r


def check_gradient(f: ScalarFunction, points, rel: float = 1e-6) -> float:
    """Worst relative mismatch between f.grad and central differences."""
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        h = 1e-6 * (1.0 + np.linalg.norm(x))
        g = f.grad(x)
        fd = np.empty_like(g)
        for j in range(x.size):
            e = np.zeros_like(x)
            e[j] = h
            fd[j] = (f(x + e) - f(x - e)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(fd - g)) / (1.0 + np.max(np.abs(g)))))
    return worst


@dataclass(frozen=True, eq=False)
class LiePoissonSystem:
    """A structure tensor with a Hamiltonian and known Casimirs.

    On construction the Hamiltonian gradient is compared against central
    differences at a few seeded points; a mismatch above relative 1e-6
    raises ValueError.
    """

    tensor: StructureTensor
    hamiltonian: ScalarFunction
    casimirs: tuple = ()
    name: str = "system"
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "casimirs", tuple(self.casimirs))
        if self.check:
            rng = np.random.default_rng(12345)
            pts = [p for p in rng.normal(size=(8, self.dim)) if self.hamiltonian.in_domain(p)][:4]
            err = check_gradient(self.hamiltonian, pts)
            if err > 1e-6:
                raise ValueError(f"Hamiltonian gradient inconsistent with finite differences ({err:.3g})")

    @property
    def dim(self) -> int:
        return self.tensor.dim

    def J(self, xi) -> np.ndarray:
        return poisson_matrix(self.tensor, xi)


def bracket_eval(sys: LiePoissonSystem, G: ScalarFunction, H: ScalarFunction, xi) -> float:
    """{G, H}(xi) = <dG, J(xi) dH>."""
    xi = np.asarray(xi, dtype=float)
    return float(G.grad(xi) @ sys.J(xi) @ H.grad(xi))


def vector_field(sys: LiePoissonSystem, xi) -> np.ndarray:
    """Hamilton's equation d(xi)/dt = J(xi) dH(xi)."""
    xi = np.asarray(xi, dtype=float)
    return sys.J(xi) @ sys.hamiltonian.grad(xi)


def energy_casimir(sys: LiePoissonSystem, mu: Sequence[float]) -> ScalarFunction:
    """F = H + sum mu_i C_i."""
    mu = list(mu)
    if not sys.casimirs:
        raise ValueError("system has no Casimirs")
    if len(mu) != len(sys.casimirs):
        raise ValueError(f"need {len(sys.casimirs)} multipliers, got {len(mu)}")
    return linear_combination([(1.0, sys.hamiltonian)] + list(zip(mu, sys.casimirs)), name="F")


# -- integration ------------------------------------------------------------

@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    invariants: dict
    drifts: dict
    diagnostic: str = ""

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    @property
    def max_drift(self) -> float:
        v = [d for d in self.drifts.values() if not math.isnan(d)]
        return max(v, default=0.0)


def relative_drift(values: np.ndarray) -> float:
    """max |v(t) - v(0)| / |v(0)|, absolute when v(0) = 0; NaN entries ignored."""
    v = np.asarray(values, dtype=float)
    ok = ~np.isnan(v)
    if not ok.any():
        return math.nan
    v = v[ok]
    d = float(np.max(np.abs(v - v[0])))
    return d / abs(v[0]) if v[0] != 0.0 else d


def _step_rk4(f, x, dt):
    k1 = f(x)
    k2 = f(x + 0.5 * dt * k1)
    k3 = f(x + 0.5 * dt * k2)
    k4 = f(x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _step_midpoint(f, x, dt):
    return x + dt * f(x + 0.5 * dt * f(x))


STEPPERS = {"rk4": _step_rk4, "midpoint": _step_midpoint}


def integrate_rhs(f, x0, dt: float, T: float, scheme: str = "rk4"):
    """Fixed-step integration of dx/dt = f(x); returns (times, states, diagnostic)."""
    if scheme not in STEPPERS:
        raise ValueError(f"unknown scheme {scheme!r}; choose from {sorted(STEPPERS)}")
    if not dt > 0 or not T >= dt:
        raise ValueError("need dt > 0 and T >= dt")
    step = STEPPERS[scheme]
    nsteps = int(round(T / dt))
    x = np.array(x0)
    x = x.astype(complex if np.iscomplexobj(x) else float)
    states = np.empty((nsteps + 1,) + x.shape, dtype=x.dtype)
    states[0] = x
    diag = ""
    k = 0
    for k in range(1, nsteps + 1):
        x = step(f, x, dt)
        if not np.all(np.isfinite(x)):
            diag = f"non-finite state at step {k} (t={k * dt:g}); trajectory truncated"
            k -= 1
            break
        states[k] = x
    else:
        k = nsteps
    states = states[: k + 1]
    times = dt * np.arange(k + 1)
    return times, states, diag


def integrate(sys: LiePoissonSystem, xi0, dt: float, T: float, scheme: str = "rk4",
              monitors: dict | None = None, guard: float | None = None) -> Trajectory:
    """Integrate Hamilton's equations and log H, each Casimir and extra monitors.

    Casimir values within the guard distance of their domain boundary are
    logged as NaN and excluded from the drift.
    """
    c = sys.tensor.c
    grad_h = sys.hamiltonian.gradient

    def f(x):
        return np.tensordot(x, c, axes=1) @ grad_h(x)

    xi0 = np.asarray(xi0, dtype=float)
    if xi0.shape != (sys.dim,):
        raise DimensionError(f"initial state must have length {sys.dim}")
    times, states, diag = integrate_rhs(f, xi0, dt, T, scheme)
    funcs = {"H": sys.hamiltonian}
    for i, C in enumerate(sys.casimirs):
        funcs[f"C{i + 1}" if len(sys.casimirs) > 1 else "C"] = C
    funcs.update(monitors or {})
    inv = {}
    for key, g in funcs.items():
        vals = np.empty(len(states))
        for i, x in enumerate(states):
            vals[i] = g.value(x) if g.in_domain(x, guard) else math.nan
        inv[key] = vals
    drifts = {key: relative_drift(v) for key, v in inv.items()}
    return Trajectory(times, states, inv, drifts, diag)


# -- concrete systems -------------------------------------------------------

def prs_tensor(alpha: float) -> StructureTensor:
    """Bracket with J rows (0,0,aP), (0,0,-R), (-aP,R,0) in xi = (P, R, S)."""
    return StructureTensor.from_table(3, {(1, 3): {1: float(alpha)}, (2, 3): {2: -1.0}})


def prs_casimir(alpha: float) -> CasimirFunction:
    """log|P| + alpha log|R|."""
    a = float(alpha)
    return ScalarFunction(
        value=lambda x: math.log(abs(x[0])) + a * math.log(abs(x[1])),
        gradient=lambda x: np.array([1.0 / x[0], a / x[1], 0.0]),
        boundary_distance=lambda x: min(abs(x[0]), abs(x[1])),
        name="C_prs", expression=f"log|P| + {a:g} log|R|",
    )


def prs_system(alpha: float) -> LiePoissonSystem:
    """Pitch-roll-spin rattleback model: dP = aPS, dR = -RS, dS = R^2 - aP^2."""
    if not math.isfinite(alpha):
        raise ValueError("alpha must be finite")
    H = quadratic_form(np.eye(3), name="H")
    H = ScalarFunction(H.value, H.gradient, H.hessian, name="H", expression="(P^2+R^2+S^2)/2")
    return LiePoissonSystem(prs_tensor(alpha), H, (prs_casimir(alpha),), name=f"prs(alpha={alpha:g})")


def euler_top(inertia=(1.0, 2.0, 3.0), half: bool = False) -> LiePoissonSystem:
    """Free rigid body on so(3)*: H = sum xi_j^2 / I_j (times 1/2 if ``half``)."""
    I = np.asarray(inertia, dtype=float)
    if I.shape != (3,) or np.any(I <= 0):
        raise ValueError("inertia must be three positive numbers")
    scale = 1.0 if half else 2.0
    H = quadratic_form(np.diag(scale / I), name="H")
    expr = ("1/2 " if half else "") + "sum xi_j^2/I_j"
    H = ScalarFunction(H.value, H.gradient, H.hessian, name="H", expression=expr)
    C = quadratic_form(np.eye(3), name="C")
    C = ScalarFunction(C.value, C.gradient, C.hessian, name="C", expression="|xi|^2/2")
    return LiePoissonSystem(alg.levi_civita(), H, (C,), name=f"euler(I={I.tolist()})")


def euler_regular_multiplier(inertia, axis: int = 0, half: bool = False) -> float:
    """mu making dF = dH + mu dC vanish on principal axis ``axis``.

    With C = |xi|^2/2 this is -2/I (or -1/I with the 1/2 convention).
    """
    return -(1.0 if half else 2.0) / float(inertia[axis])


def bianchi_system(t, hamiltonian: ScalarFunction | None = None) -> LiePoissonSystem:
    """Lie-Poisson system of a Bianchi type with H = |xi|^2/2 by default."""
    from .bianchi import bianchi_algebra, casimir_of

    H = hamiltonian or ScalarFunction(*_half_norm(), name="H", expression="|xi|^2/2")
    return LiePoissonSystem(bianchi_algebra(t), H, (casimir_of(t),), name=f"bianchi {t}")


def _half_norm():
    q = quadratic_form(np.eye(3))
    return q.value, q.gradient, q.hessian


def singular_subspace(c: StructureTensor) -> np.ndarray:
    """Orthonormal basis (rows) of {xi : J(xi) = 0}, a linear subspace."""
    from scipy.linalg import null_space

    n = c.dim
    return null_space(c.c.reshape(n, n * n).T, rcond=1e-12).T

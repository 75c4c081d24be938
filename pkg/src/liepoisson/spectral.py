"""Linearization at equilibria and Hamiltonian spectral symmetry.

At a singular point xi_s (J(xi_s) = 0) the linearized flow is
d(xi~)/dt = J(xi~) h with h = dH(xi_s), whose matrix is the coadjoint
generator A_{j a} = c^a_{jk} h^k.  At a regular equilibrium, a critical
point of F = H + mu C with J != 0, it is A = J(xi_r) F''(xi_r).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import expm
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import algebra as alg
from .errors import EquilibriumError, SpectralError
from .functions import ScalarFunction, quadratic_form
from .lie_poisson import LiePoissonSystem, poisson_matrix, vector_field

EQ_TOL = 1e-10
SYMMETRY_RTOL = 1e-8


def _scale(sys: LiePoissonSystem, xi) -> float:
    return 1.0 + float(np.max(np.abs(xi), initial=0.0))


def classify_equilibrium(sys: LiePoissonSystem, xi, F: ScalarFunction | None = None,
                         tol: float = EQ_TOL) -> str:
    """'singular', 'regular', 'generic' or 'not_equilibrium'.

    singular: J(xi) vanishes.  regular: dF vanishes while J does not.
    generic: an equilibrium (J dH = 0) of neither kind.
    """
    xi = np.asarray(xi, dtype=float)
    s = _scale(sys, xi)
    if np.max(np.abs(sys.J(xi))) < tol * s:
        return "singular"
    if np.max(np.abs(vector_field(sys, xi))) >= tol * s:
        return "not_equilibrium"
    if F is not None and np.max(np.abs(F.grad(xi))) < tol * s:
        return "regular"
    return "generic"


@dataclass(frozen=True, eq=False)
class LinearGenerator:
    """Matrix of a linearized flow with its origin."""

    A: np.ndarray
    provenance: str
    point: np.ndarray
    h: Optional[np.ndarray] = None
    tensor: Optional[alg.StructureTensor] = field(default=None, repr=False)
    hessian: Optional[np.ndarray] = field(default=None, repr=False)

    def reconstruction_error(self) -> float:
        if self.provenance == "singular":
            B = alg.coadjoint_matrix(self.tensor, self.h)
        else:
            B = poisson_matrix(self.tensor, self.point) @ self.hessian
        return float(np.max(np.abs(B - self.A), initial=0.0))


def linearize_singular(sys: LiePoissonSystem, xi_s, tol: float = EQ_TOL) -> LinearGenerator:
    """Generator c^a_{jk} h^k at a singular point, h = dH(xi_s)."""
    xi_s = np.asarray(xi_s, dtype=float)
    if classify_equilibrium(sys, xi_s, tol=tol) != "singular":
        raise EquilibriumError(f"{xi_s.tolist()} is not a singular point of {sys.name}")
    h = sys.hamiltonian.grad(xi_s)
    A = alg.coadjoint_matrix(sys.tensor, h)
    return LinearGenerator(A, "singular", xi_s, h=h, tensor=sys.tensor)


def linearize_regular(sys: LiePoissonSystem, xi_r, F: ScalarFunction, tol: float = 1e-8) -> LinearGenerator:
    """Generator J(xi_r) F''(xi_r) at a regular equilibrium of F."""
    xi_r = np.asarray(xi_r, dtype=float)
    s = _scale(sys, xi_r)
    if np.max(np.abs(sys.J(xi_r))) < EQ_TOL * s:
        raise EquilibriumError("point is singular; use linearize_singular")
    if np.max(np.abs(F.grad(xi_r))) >= tol * s:
        raise EquilibriumError(f"dF does not vanish at {xi_r.tolist()}")
    Hs = F.hess(xi_r)
    return LinearGenerator(poisson_matrix(sys.tensor, xi_r) @ Hs, "regular", xi_r,
                           tensor=sys.tensor, hessian=Hs)


# -- spectra ----------------------------------------------------------------

def charpoly_laplace(A: np.ndarray) -> np.ndarray:
    """Coefficients (highest degree first) of det(lambda I - A) by cofactor expansion."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    # entries as polynomials in lambda, low-degree-first numpy convention
    ent = [[np.array([-A[i, j], 1.0]) if i == j else np.array([-A[i, j]]) for j in range(n)] for i in range(n)]

    def det(rows, cols):
        if len(rows) == 1:
            return ent[rows[0]][cols[0]]
        out = np.zeros(1)
        r0, rest = rows[0], rows[1:]
        for idx, cj in enumerate(cols):
            minor = det(rest, cols[:idx] + cols[idx + 1:])
            term = P.polymul(ent[r0][cj], minor)
            out = P.polyadd(out, term if idx % 2 == 0 else -term)
        return out

    coeffs = det(list(range(n)), list(range(n)))
    coeffs = np.concatenate([coeffs, np.zeros(n + 1 - coeffs.size)])
    return coeffs[::-1].copy()


def bottleneck_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Smallest d admitting a perfect matching of multisets a, b with |a_i - b_j| <= d."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size != b.size:
        raise ValueError("multisets must have equal size")
    if a.size == 0:
        return 0.0
    D = np.abs(a[:, None] - b[None, :])
    levels = np.unique(D)
    lo, hi = 0, levels.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        graph = csr_matrix((D <= levels[mid]).astype(np.int8))
        if np.all(maximum_bipartite_matching(graph, perm_type="column") >= 0):
            hi = mid
        else:
            lo = mid + 1
    return float(levels[lo])


def _sort_eigs(ev: np.ndarray) -> np.ndarray:
    ev = np.asarray(ev, dtype=complex)
    key = np.lexsort((np.round(ev.imag, 12), np.round(ev.real, 12)))
    return ev[key]


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    char_poly: np.ndarray
    char_poly_laplace: Optional[np.ndarray]
    char_poly_mismatch: float
    chirality_measure: float
    tolerance: float
    symmetry_verdict: str
    equilibrium_kind: str
    nullity: int

    @property
    def symmetric(self) -> bool:
        return self.symmetry_verdict == "hamiltonian_symmetric"

    @property
    def conjugation_defect(self) -> float:
        return bottleneck_distance(self.eigenvalues, np.conj(self.eigenvalues))

    def to_dict(self, digits: int = 12) -> dict:
        def r(x):
            v = round(float(x), digits)
            return 0.0 if v == 0.0 else v

        return {
            "equilibrium_kind": self.equilibrium_kind,
            "eigenvalues": [[r(z.real), r(z.imag)] for z in self.eigenvalues],
            "char_poly": [r(x) for x in self.char_poly],
            "char_poly_crosscheck_error": float(f"{self.char_poly_mismatch:.3e}"),
            "symmetry_verdict": self.symmetry_verdict,
            "chirality_measure": r(self.chirality_measure),
            "tolerance": self.tolerance,
            "nullity": self.nullity,
        }


def spectrum(gen, kind: str | None = None, nullity: int | None = None,
             rtol: float = SYMMETRY_RTOL) -> SpectrumReport:
    """Eigenvalues, characteristic polynomial and the lambda -> -lambda test.

    ``gen`` is a LinearGenerator or a bare square matrix.  The ``nullity``
    smallest-modulus eigenvalues are snapped to zero before matching; by
    default nullity is the numerical corank of the matrix.  The verdict is
    'hamiltonian_symmetric' when the bottleneck distance between the
    spectrum and its negation is below rtol * (1 + ||A||_2).
    """
    if isinstance(gen, LinearGenerator):
        A, kind = gen.A, kind or gen.provenance
    else:
        A, kind = np.asarray(gen, dtype=float), kind or "generic"
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise SpectralError("generator must be square")
    n = A.shape[0]
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise SpectralError(f"eigen-solver failed: {exc}") from exc
    if not np.all(np.isfinite(ev)):
        raise SpectralError("eigen-solver returned non-finite values")
    norm = float(np.linalg.norm(A, 2)) if n else 0.0
    if nullity is None:
        s = np.linalg.svd(A, compute_uv=False) if n else np.zeros(0)
        nullity = int(np.sum(s <= 1e-12 * max(1.0, norm)))
    ev = ev.astype(complex)
    if nullity:
        idx = np.argsort(np.abs(ev), kind="stable")[:nullity]
        ev[idx] = 0.0
    ev = _sort_eigs(ev)
    cp = np.real(np.poly(ev)) if n else np.ones(1)
    lap = charpoly_laplace(A) if n <= 4 else None
    mismatch = float(np.max(np.abs(cp - lap))) / (1.0 + float(np.max(np.abs(lap)))) if lap is not None else 0.0
    tol = rtol * (1.0 + norm)
    chi = bottleneck_distance(ev, -ev)
    return SpectrumReport(ev, cp, lap, mismatch, chi, tol,
                          "hamiltonian_symmetric" if chi < tol else "chiral", kind, nullity)


# -- invariants of the singular linearization ------------------------------

@dataclass
class LinearInvariantReport:
    trials: int
    rejected: int
    h1_drift: float
    casimir_drift: float
    h1_ok: bool
    casimir_ok: bool

    @property
    def ok(self) -> bool:
        return self.h1_ok and self.casimir_ok


def verify_linear_invariants(gen: LinearGenerator, casimir: ScalarFunction | None, trials: int = 20,
                             seed: int = 0, samples: int = 41, t_max: float | None = None,
                             h1_tol: float = 1e-9, c_tol: float = 1e-8) -> LinearInvariantReport:
    """Check H1 = <h, xi~> and C(xi~) along xi~(t) = exp(tA) xi~(0).

    Perturbations whose orbit leaves the open orthant it starts in are
    redrawn when the Casimir has a bounded domain, since such Casimirs are
    only defined on the pieces cut out by their singular lines.
    """
    if gen.provenance != "singular":
        raise EquilibriumError("linear invariants refer to a singular-point generator")
    A, h = gen.A, gen.h
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    norm = float(np.linalg.norm(A, 2))
    t_max = (0.2 / norm if norm > 0 else 1.0) if t_max is None else t_max
    ts = np.linspace(0.0, t_max, samples)
    props = [expm(t * A) for t in ts]
    bounded = casimir is not None and not math.isinf(casimir.boundary_distance(np.ones(n)))
    h1_worst = c_worst = 0.0
    done = rejected = 0
    while done < trials:
        if rejected > 50 * trials:
            raise EquilibriumError("could not find perturbations inside the Casimir domain")
        x0 = rng.normal(size=n)
        orbit = np.array([E @ x0 for E in props])
        if casimir is not None:
            if not all(casimir.in_domain(x) for x in orbit):
                rejected += 1
                continue
            if bounded and np.any(np.sign(orbit) != np.sign(orbit[0])):
                rejected += 1
                continue
        h1 = orbit @ h
        h1_worst = max(h1_worst, float(np.max(np.abs(h1 - h1[0]))) / (1.0 + abs(h1[0])))
        if casimir is not None:
            cv = np.array([casimir(x) for x in orbit])
            c_worst = max(c_worst, float(np.max(np.abs(cv - cv[0]))) / (1.0 + abs(cv[0])))
        done += 1
    return LinearInvariantReport(trials, rejected, h1_worst, c_worst, h1_worst < h1_tol, c_worst < c_tol)


# -- class-A factorization -------------------------------------------------

@dataclass
class HamiltonianForm:
    """A = Jh M with constant Poisson matrix Jh = -J_mother(h) and symmetric M."""

    Jh: np.ndarray
    M: np.ndarray
    hamiltonian: ScalarFunction
    factorization_residual: float
    h1_casimir_residual: float
    mother: str


def class_a_singular_hamiltonian_form(sys: LiePoissonSystem, xi_s, mothers=None, seed: int = 0,
                                      tol: float = 1e-10) -> HamiltonianForm:
    """Write the singular linearization of a class-A system as Hamilton's equation.

    The Hamiltonian is 1/2 <M xi~, xi~> and H1 = <h, xi~> is a Casimir of
    the constant bracket Jh; residuals of both facts are reported.
    """
    from .deformation import classify, registered_mothers

    label = classify(sys.tensor, mothers)
    if label.value != "A":
        raise EquilibriumError(f"{sys.name} is class {label.value}, not A")
    gen = linearize_singular(sys, xi_s)
    pool = dict(mothers) if mothers is not None else dict(registered_mothers(sys.dim))
    mother = sys.tensor if label.mother == "self" else pool[label.mother]
    M = label.M.M
    Jh = -poisson_matrix(mother, gen.h)
    rng = np.random.default_rng(seed)
    pert = rng.normal(size=(16, sys.dim))
    res = max(float(np.max(np.abs(gen.A @ x - Jh @ (M @ x)))) for x in pert)
    res = max(res, float(np.max(np.abs(gen.A - Jh @ M))))
    h1res = float(np.max(np.abs(Jh @ gen.h), initial=0.0))
    Hq = quadratic_form(M, name="H2")
    if res > tol * (1.0 + float(np.max(np.abs(gen.A), initial=0.0))):
        raise SpectralError(f"factorization residual {res:.3g} too large")
    return HamiltonianForm(Jh, M, Hq, res, h1res, label.mother)

"""Fields of so(3) fibers over the 3-torus.

Two realizations:

* grid fields (arrays of shape (3, N, N, N) on [0, 2pi)^3) for pointwise
  deformations of the cross product, e.g. the local type-III bracket;
* truncated Fourier fields (wavevectors with |k|_inf <= K) for the curl
  deformation, whose Lie-Poisson dynamics is the vorticity equation
  d(omega)/dt = -curl(omega x u), u = curl^{-1} omega.

Inner products are L^2 over the torus: <f, g> = (2pi)^3 sum_k Re(conj f_k . g_k).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bianchi import BianchiType, bianchi_algebra
from .algebra import coadjoint_matrix
from .deformation import DeformationMatrix, recover_M
from .errors import DimensionError, NotSolenoidalError
from .lie_poisson import integrate_rhs, relative_drift

VOLUME = (2 * math.pi) ** 3


# -- grid fields and local deformations -------------------------------------

def lattice(N: int = 16) -> np.ndarray:
    """Coordinates, shape (3, N, N, N), of the uniform lattice on [0, 2pi)^3."""
    x = 2 * math.pi * np.arange(N) / N
    return np.array(np.meshgrid(x, x, x, indexing="ij"))


def _check_grid(*fs):
    shape = np.shape(fs[0])
    if len(shape) != 4 or shape[0] != 3:
        raise DimensionError("grid fields must have shape (3, N, N, N)")
    for f in fs[1:]:
        if np.shape(f) != shape:
            raise DimensionError("grid fields live on different lattices")


def pointwise_deform(M, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """M^T (v(x) x w(x)) at every lattice point."""
    _check_grid(v, w)
    M = DeformationMatrix.coerce(M).M
    return np.einsum("km,k...->m...", M, np.cross(v, w, axis=0))


TYPE_III = BianchiType("III")


def local_generator(h: np.ndarray) -> np.ndarray:
    """Pointwise generator G(x) of the local type-III linearized field flow.

    du1/dt = -h3 u1, du2/dt = 0, du3/dt = h1 u1.  Shape (3, 3, N, N, N).
    This is minus the finite-dimensional coadjoint generator at h(x).
    """
    c = bianchi_algebra(TYPE_III)
    flat = h.reshape(3, -1).T
    G = -np.array([coadjoint_matrix(c, v) for v in flat])
    return G.transpose(1, 2, 0).reshape((3, 3) + h.shape[1:])


def local_rhs(h: np.ndarray, u: np.ndarray) -> np.ndarray:
    return np.einsum("ij...,j...->i...", local_generator(h), u)


def local_chiral_evolution(h: np.ndarray, u0: np.ndarray, t: float) -> np.ndarray:
    """Closed-form solution of the local type-III flow at time t.

    u1 = u1(0) exp(-h3 t); u2 constant; u3 = u3(0) + h1 u1(0) (1 - exp(-h3 t)) / h3.
    """
    _check_grid(h, u0)
    h1, h3 = h[0], h[2]
    decay = np.exp(-h3 * t)
    with np.errstate(divide="ignore", invalid="ignore"):
        integ = np.where(h3 != 0.0, -np.expm1(-h3 * t) / np.where(h3 != 0.0, h3, 1.0), t)
    return np.array([u0[0] * decay, u0[1], u0[2] + h1 * u0[0] * integ])


def integrate_local(h: np.ndarray, u0: np.ndarray, t: float, dt: float = 1e-3) -> np.ndarray:
    """rk4 integration of the local flow, for comparison with the closed form."""
    G = local_generator(h)
    _, states, diag = integrate_rhs(lambda u: np.einsum("ij...,j...->i...", G, u), u0, dt, t)
    if diag:
        raise FloatingPointError(diag)
    return states[-1]


def decay_rates(h: np.ndarray) -> np.ndarray:
    """The pointwise exponent -h3(x): a continuum of rates for varying h3."""
    return -np.asarray(h)[2]


def type_iii_matrix() -> np.ndarray:
    return recover_M(bianchi_algebra(TYPE_III)).M


# -- truncated Fourier fields -----------------------------------------------

@lru_cache(maxsize=8)
def _modes(K: int):
    r = np.arange(-K, K + 1)
    ks = np.array(np.meshgrid(r, r, r, indexing="ij")).reshape(3, -1).T.copy()
    index = {tuple(k): i for i, k in enumerate(ks.tolist())}
    neg = np.array([index[tuple((-k).tolist())] for k in ks])
    k2 = (ks ** 2).sum(axis=1).astype(float)
    for a in (ks, neg, k2):
        a.flags.writeable = False
    return ks, neg, k2, index


@lru_cache(maxsize=8)
def _pairs(K: int):
    """Index triples (p, q, r) with k_p + k_q = k_r, all inside the cube."""
    ks, _, _, index = _modes(K)
    n = ks.shape[0]
    P, Q, R = [], [], []
    for ip in range(n):
        for iq in range(n):
            r = ks[ip] + ks[iq]
            if np.max(np.abs(r)) <= K:
                P.append(ip)
                Q.append(iq)
                R.append(index[tuple(r.tolist())])
    out = tuple(np.array(a, dtype=np.intp) for a in (P, Q, R))
    for a in out:
        a.flags.writeable = False
    return out


def mode_count(K: int) -> int:
    return (2 * K + 1) ** 3


@dataclass(frozen=True, eq=False)
class FieldState:
    """Fourier coefficients ``coef[i]`` of a vector field at wavevector ``wavevectors(K)[i]``."""

    K: int
    coef: np.ndarray
    rep: str = "vorticity"

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be at least 1")
        coef = np.array(self.coef, dtype=complex)
        if coef.shape != (mode_count(self.K), 3):
            raise DimensionError(f"expected coefficients of shape {(mode_count(self.K), 3)}")
        if self.rep not in ("vorticity", "velocity"):
            raise ValueError("rep must be 'vorticity' or 'velocity'")
        coef.flags.writeable = False
        object.__setattr__(self, "coef", coef)

    @property
    def ks(self) -> np.ndarray:
        return _modes(self.K)[0]

    def reality_defect(self) -> float:
        neg = _modes(self.K)[1]
        return float(np.max(np.abs(self.coef[neg] - np.conj(self.coef))))

    def divergence_defect(self) -> float:
        return float(np.max(np.abs(np.einsum("ki,ki->k", self.ks, self.coef)), initial=0.0))

    def is_solenoidal(self, tol: float = 1e-12) -> bool:
        scale = 1.0 + float(np.max(np.abs(self.coef), initial=0.0))
        return self.divergence_defect() <= tol * scale

    def replace(self, coef, rep=None) -> "FieldState":
        return FieldState(self.K, coef, rep or self.rep)


def wavevectors(K: int) -> np.ndarray:
    return _modes(K)[0]


def zero_index(K: int) -> int:
    return _modes(K)[3][(0, 0, 0)]


def curl(f: FieldState) -> FieldState:
    """i k x f_k."""
    return f.replace(1j * np.cross(f.ks, f.coef), "vorticity")


def curl_inv(f: FieldState, tol: float = 1e-12) -> FieldState:
    """Inverse curl on solenoidal zero-mean fields: i k x f_k / |k|^2."""
    if not f.is_solenoidal(tol):
        raise NotSolenoidalError(f"field has divergence defect {f.divergence_defect():.3g}")
    z = zero_index(f.K)
    if np.any(np.abs(f.coef[z]) > tol):
        raise NotSolenoidalError("field has a nonzero mean (k = 0) component")
    k2 = _modes(f.K)[2].copy()
    k2[z] = 1.0
    return f.replace(1j * np.cross(f.ks, f.coef) / k2[:, None], "velocity")


def project(f: FieldState) -> FieldState:
    """Orthogonal projection onto divergence-free fields (k = 0 left alone)."""
    ks = f.ks
    k2 = _modes(f.K)[2].copy()
    z = zero_index(f.K)
    k2[z] = 1.0
    kdot = np.einsum("ki,ki->k", ks, f.coef)
    return f.replace(f.coef - ks * (kdot / k2)[:, None])


def inner(f: FieldState, g: FieldState) -> float:
    """L^2 inner product over the torus via Parseval."""
    if f.K != g.K:
        raise DimensionError("fields have different truncations")
    return VOLUME * float(np.real(np.sum(np.conj(f.coef) * g.coef)))


def energy(omega: FieldState) -> float:
    """E = 1/2 int |u|^2 with u = curl^{-1} omega."""
    u = curl_inv(omega)
    return 0.5 * inner(u, u)


def helicity(omega: FieldState) -> float:
    """C = 1/2 int omega . curl^{-1} omega."""
    return 0.5 * inner(omega, curl_inv(omega))


# -- helical basis ----------------------------------------------------------

def _frame(k: np.ndarray):
    kh = k / np.linalg.norm(k)
    a = np.array([1.0, 0.0, 0.0]) if abs(kh[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(kh, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(kh, e1)
    return e1, e2


def helical_vector(k, s: int) -> np.ndarray:
    """h_s(k) = (e1 + i s e2)/sqrt 2 with i k x h_s = s |k| h_s."""
    e1, e2 = _frame(np.asarray(k, dtype=float))
    return (e1 + 1j * s * e2) / math.sqrt(2.0)


@dataclass
class HelicalDecomposition:
    K: int
    plus: np.ndarray
    minus: np.ndarray

    def reconstruct(self) -> np.ndarray:
        ks = wavevectors(self.K)
        out = np.zeros((ks.shape[0], 3), dtype=complex)
        for i, k in enumerate(ks):
            if not k.any():
                continue
            out[i] = self.plus[i] * helical_vector(k, 1) + self.minus[i] * helical_vector(k, -1)
        return out

    def curl_eigenvalues(self) -> tuple[np.ndarray, np.ndarray]:
        """(+|k|, -|k|) per mode: curl acts diagonally on the amplitudes."""
        kn = np.sqrt(_modes(self.K)[2])
        return kn, -kn


def helical_decompose(f: FieldState) -> HelicalDecomposition:
    ks = f.ks
    plus = np.zeros(ks.shape[0], dtype=complex)
    minus = np.zeros(ks.shape[0], dtype=complex)
    for i, k in enumerate(ks):
        if not k.any():
            continue
        plus[i] = np.vdot(helical_vector(k, 1), f.coef[i])
        minus[i] = np.vdot(helical_vector(k, -1), f.coef[i])
    return HelicalDecomposition(f.K, plus, minus)


# -- dynamics ---------------------------------------------------------------

def convolve_cross(a: FieldState, b: FieldState) -> FieldState:
    """Fourier coefficients of a(x) x b(x), truncated to the cube.

    Sums over (p, q) pairs use np.bincount in a fixed pair order, so the
    result is bitwise reproducible.
    """
    if a.K != b.K:
        raise DimensionError("fields have different truncations")
    P, Q, R = _pairs(a.K)
    X = np.cross(a.coef[P], b.coef[Q])
    n = mode_count(a.K)
    out = np.empty((n, 3), dtype=complex)
    for c in range(3):
        out[:, c] = np.bincount(R, X[:, c].real, minlength=n) + 1j * np.bincount(R, X[:, c].imag, minlength=n)
    return a.replace(out)


def vortex_rhs(omega: FieldState) -> FieldState:
    """Galerkin-truncated -curl(omega x u), projected onto solenoidal fields."""
    u = curl_inv(omega)
    cN = curl(convolve_cross(omega, u))
    return project(cN.replace(-cN.coef))


@dataclass
class FieldTrajectory:
    times: np.ndarray
    energy: np.ndarray
    helicity: np.ndarray
    final: FieldState
    diagnostic: str = ""

    @property
    def energy_drift(self) -> float:
        return relative_drift(self.energy)

    @property
    def helicity_drift(self) -> float:
        return relative_drift(self.helicity)


def integrate_field(omega0: FieldState, dt: float = 1e-3, T: float = 1.0) -> FieldTrajectory:
    """rk4 evolution under :func:`vortex_rhs` with per-step energy and helicity."""
    K = omega0.K
    k2 = _modes(K)[2].copy()
    z = zero_index(K)
    k2[z] = 1.0
    P, Q, R = _pairs(K)
    ks = wavevectors(K).astype(float)
    n = mode_count(K)

    def rhs(w):
        u = 1j * np.cross(ks, w) / k2[:, None]
        X = np.cross(w[P], u[Q])
        N = np.empty((n, 3), dtype=complex)
        for c in range(3):
            N[:, c] = np.bincount(R, X[:, c].real, minlength=n) + 1j * np.bincount(R, X[:, c].imag, minlength=n)
        r = -1j * np.cross(ks, N)
        return r - ks * (np.einsum("ki,ki->k", ks, r) / k2)[:, None]

    curl_inv(omega0)  # precondition check
    times, states, diag = integrate_rhs(rhs, omega0.coef, dt, T)
    E = np.array([0.5 * VOLUME * float(np.sum(np.abs(np.cross(ks, w)) ** 2 / k2[:, None] ** 2)) for w in states])
    C = np.array([0.5 * VOLUME * float(np.real(np.sum(np.conj(w) * (1j * np.cross(ks, w) / k2[:, None]))))
                  for w in states])
    return FieldTrajectory(times, E, C, omega0.replace(states[-1]), diag)


# -- initial data -----------------------------------------------------------

def beltrami(K: int = 2, k=(0, 0, 1), sign: int = 1, amplitude: float = 1.0) -> FieldState:
    """Vorticity of a single real helical mode, curl u = sign |k| u.

    For k = (0,0,1), sign = +1 the velocity is amplitude*(cos z, -sin z, 0).
    """
    k = np.asarray(k, dtype=int)
    if not k.any() or np.max(np.abs(k)) > K:
        raise ValueError("wavevector must be nonzero and inside the truncation")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    ks, neg, _, index = _modes(K)
    i = index[tuple(k.tolist())]
    if k.tolist() == [0, 0, 1] or k.tolist() == [0, 0, -1]:
        # fixed frame so that the +1 mode at (0,0,1) is (cos z, -sin z, 0)
        e1, e2 = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]) * np.sign(k[2])
        hv = (e1 + 1j * sign * e2) / math.sqrt(2.0)
    else:
        hv = helical_vector(k, sign)
    u = np.zeros((ks.shape[0], 3), dtype=complex)
    u[i] = amplitude * hv / math.sqrt(2.0)
    u[neg[i]] = np.conj(u[i])
    lam = sign * math.sqrt(float((k ** 2).sum()))
    return FieldState(K, lam * u, "vorticity")


def two_beltrami(K: int = 2) -> FieldState:
    """Superposition of Beltrami modes with |k| = 1 and |k| = sqrt 2 of opposite handedness."""
    a = beltrami(K, (0, 0, 1), 1, 1.0)
    b = beltrami(K, (1, 1, 0), -1, 0.7)
    return a.replace(a.coef + b.coef)


def random_field(K: int = 2, seed: int = 0, amplitude: float = 0.1) -> FieldState:
    """Seeded random real, solenoidal, zero-mean vorticity."""
    ks, neg, _, _ = _modes(K)
    rng = np.random.default_rng(seed)
    w = rng.normal(size=(ks.shape[0], 3)) + 1j * rng.normal(size=(ks.shape[0], 3))
    w = 0.5 * (w + np.conj(w[neg]))
    w[zero_index(K)] = 0.0
    f = project(FieldState(K, amplitude * w))
    return f


def mirror(f: FieldState) -> FieldState:
    """Parity x -> -x: velocity u(x) -> -u(-x), vorticity omega(x) -> omega(-x)."""
    neg = _modes(f.K)[1]
    s = 1.0 if f.rep == "vorticity" else -1.0
    return f.replace(s * f.coef[neg])


def to_grid(f: FieldState, N: int = 16) -> np.ndarray:
    """Real-space values on the N^3 lattice, shape (3, N, N, N)."""
    if N < 2 * f.K + 1:
        raise ValueError("lattice too coarse for the truncation")
    A = np.zeros((3, N, N, N), dtype=complex)
    ks = f.ks % N
    for c in range(3):
        A[c][ks[:, 0], ks[:, 1], ks[:, 2]] = f.coef[:, c]
    out = np.fft.ifftn(A, axes=(1, 2, 3)) * N ** 3
    return out.real


# -- linearization about a frozen field -------------------------------------

def linearized_vortex(h: FieldState, w: FieldState) -> FieldState:
    """P curl(h x w): the vorticity equation linearized with frozen field h."""
    return project(curl(convolve_cross(h, w)))


def curl_poisson(h: FieldState, phi: FieldState) -> FieldState:
    """J_S(h) phi = P curl((curl phi) x h), an antisymmetric operator."""
    return project(curl(convolve_cross(curl(phi), h)))


@dataclass
class HamiltonianFormReport:
    factorization_residual: float
    antisymmetry_defect: float
    helicity_rate: float


def linearized_hamiltonian_form(h: FieldState, trials: int = 5, seed: int = 0) -> HamiltonianFormReport:
    """Check P curl(h x w) = -J_S(h) dC(w) with C the helicity, dC = curl^{-1} w.

    Also reports the antisymmetry defect of J_S(h) and d(helicity)/dt along
    the linear flow, both zero for a Hamiltonian system with C as Hamiltonian.
    """
    res = anti = rate = 0.0
    for t in range(trials):
        w = random_field(h.K, seed + 2 * t, 1.0)
        v = random_field(h.K, seed + 2 * t + 1, 1.0)
        lhs = linearized_vortex(h, w)
        rhs = curl_poisson(h, curl_inv(w))
        scale = 1.0 + float(np.max(np.abs(lhs.coef)))
        res = max(res, float(np.max(np.abs(lhs.coef + rhs.coef))) / scale)
        a = inner(v, curl_poisson(h, w)) + inner(w, curl_poisson(h, v))
        anti = max(anti, abs(a) / (1.0 + abs(inner(v, curl_poisson(h, w)))))
        rate = max(rate, abs(inner(curl_inv(w), lhs)) / scale)
    return HamiltonianFormReport(res, anti, rate)

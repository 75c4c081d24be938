"""Deforming a fully antisymmetric bracket by a matrix, and the A/B/C classes.

Given a mother bracket [ , ] with fully antisymmetric constants and a real
n x n matrix M, the deformed bracket is [x, y]_M = M^T [x, y], i.e.

    c_M^m_{ij} = sum_k M_{km} c^k_{ij}.

Dually, J_M(xi) = J(M xi), so the singular set of a deformation of so(3)
is Ker M.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import null_space

from . import algebra as alg
from .algebra import StructureTensor
from .errors import DimensionError, NotFullyAntisymmetricError

SYM_TOL = 1e-12
SOLVE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DeformationMatrix:
    """A deformation matrix M with its symmetry class and kernel."""

    M: np.ndarray

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DimensionError(f"M must be square, got shape {M.shape}")
        M.flags.writeable = False
        object.__setattr__(self, "M", M)

    @property
    def n(self) -> int:
        return self.M.shape[0]

    @property
    def is_symmetric(self) -> bool:
        return bool(np.max(np.abs(self.M - self.M.T), initial=0.0) <= SYM_TOL)

    def kernel(self) -> np.ndarray:
        """Orthonormal basis of Ker M as rows."""
        return null_space(self.M, rcond=1e-12).T

    @property
    def rank(self) -> int:
        return self.n - self.kernel().shape[0]

    def common_kernel(self) -> np.ndarray:
        """Orthonormal basis (rows) of Ker M intersected with Ker M^T."""
        return null_space(np.vstack([self.M, self.M.T]), rcond=1e-12).T

    @property
    def symmetry(self) -> str:
        """'symmetric', 'N+0-asymmetric' or 'other'.

        An asymmetric M is N+0 when M and M^T share a null vector v, so that
        in an orthonormal basis ending with v it reads N (+) 0.
        """
        if self.is_symmetric:
            return "symmetric"
        return "N+0-asymmetric" if self.common_kernel().shape[0] else "other"

    def describe(self) -> str:
        if np.array_equal(self.M, np.eye(self.n)):
            return "identity"
        if not np.any(self.M):
            return "zero"
        return self.symmetry

    @classmethod
    def coerce(cls, M) -> "DeformationMatrix":
        return M if isinstance(M, cls) else cls(M)


def _require_mother(mother: StructureTensor):
    if not alg.is_fully_antisymmetric(mother):
        raise NotFullyAntisymmetricError("mother bracket must have fully antisymmetric structure constants")


def deform(mother: StructureTensor, M) -> StructureTensor:
    """Tensor of [e_i, e_j]_M = M^T [e_i, e_j]_mother (Jacobi not enforced)."""
    _require_mother(mother)
    M = DeformationMatrix.coerce(M)
    if M.n != mother.dim:
        raise DimensionError(f"M is {M.n}x{M.n} but mother has dim {mother.dim}")
    return StructureTensor(np.einsum("km,kij->mij", M.M, mother.c))


def recover_M(c: StructureTensor) -> DeformationMatrix:
    """The unique M with deform(eps, M) = c, for a 3-D tensor.

    M_{km} = 1/2 eps_{kij} c^m_{ij}.

    >>> recover_M(alg.levi_civita()).describe()
    'identity'
    """
    if c.dim != 3:
        raise DimensionError("recover_M needs a 3-dimensional tensor; use solve_deformation for n > 3")
    eps = alg.levi_civita().c  # eps[k, i, j] = eps_{ijk} = eps_{kij}
    return DeformationMatrix(0.5 * np.einsum("kij,mij->km", eps, c.c))


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class DeformationVerdict:
    valid: bool
    jacobi_residual: float
    residual_direction: Optional[np.ndarray]
    derived_dim: int
    derived_is_ideal: bool
    symmetry: str
    failures: tuple = ()
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "jacobi_residual": self.jacobi_residual,
            "residual_direction": None if self.residual_direction is None else self.residual_direction.tolist(),
            "derived_dim": self.derived_dim,
            "derived_is_ideal": self.derived_is_ideal,
            "symmetry": self.symmetry,
            "failures": list(self.failures),
            "notes": list(self.notes),
        }


def jacobi_direction(c: StructureTensor) -> tuple[float, Optional[np.ndarray]]:
    """Largest Jacobiator over basis triples and its unit direction."""
    r = alg.jacobiator(c)
    n = c.dim
    flat = r.reshape(n ** 3, n)
    norms = np.linalg.norm(flat, axis=1)
    i = int(np.argmax(norms))
    res = float(np.max(np.abs(flat), initial=0.0))
    if norms[i] == 0.0:
        return res, None
    return res, flat[i] / norms[i]


def derived_is_ideal(c: StructureTensor, tol: float = 1e-10) -> bool:
    """Whether [g, g'] is contained in g' = span of all brackets."""
    D = alg.derived_basis(c)
    if D.shape[0] in (0, c.dim):
        return True
    P = np.eye(c.dim) - D.T @ D
    for e in np.eye(c.dim):
        for d in D:
            if np.linalg.norm(P @ alg.bracket(c, e, d)) > tol:
                return False
    return True


def validate_deformation(mother: StructureTensor, M, tol: float = alg.JACOBI_TOL) -> DeformationVerdict:
    """Check that deform(mother, M) is a Lie algebra with an ideal derived algebra.

    For n = 3 the outcome is compared against the normal-form prediction
    (symmetric or N+0 M give Lie algebras, anything else does not) and a
    note is added if they disagree.
    """
    M = DeformationMatrix.coerce(M)
    c = deform(mother, M)
    res, direction = jacobi_direction(c)
    ideal = derived_is_ideal(c)
    ddim = alg.derived_basis(c).shape[0]
    failures = []
    if res > tol:
        failures.append("jacobi identity violated")
    if not ideal:
        failures.append("derived algebra not an ideal")
    notes = []
    sym = M.symmetry
    if mother.dim == 3 and alg.is_lie_algebra(mother):
        predicted = sym != "other"
        if predicted != (res <= tol):
            notes.append("normal-form prediction disagrees with Jacobi check")
        if sym == "other":
            notes.append("asymmetric M with no common null vector of M and M^T (not N+0)")
    return DeformationVerdict(
        valid=not failures,
        jacobi_residual=res,
        residual_direction=direction,
        derived_dim=ddim,
        derived_is_ideal=ideal,
        symmetry=sym,
        failures=tuple(failures),
        notes=tuple(notes),
    )


# -- solving for M ----------------------------------------------------------

def _deform_operator(mother: StructureTensor, symmetric: bool):
    """Columns: vec(deform(mother, E)) for a basis E of (symmetric) matrices."""
    n = mother.dim
    basis = []
    for a in range(n):
        for b in range(n):
            if symmetric and b < a:
                continue
            E = np.zeros((n, n))
            E[a, b] = 1.0
            if symmetric:
                E[b, a] = 1.0
            basis.append(E)
    L = np.stack([np.einsum("km,kij->mij", E, mother.c).ravel() for E in basis], axis=1)
    return L, basis


def solve_deformation(mother: StructureTensor, c: StructureTensor, symmetric: bool = False,
                      tol: float = SOLVE_TOL) -> tuple[Optional[DeformationMatrix], float]:
    """Find M with deform(mother, M) = c, optionally restricted to symmetric M.

    The map M -> deform(mother, M) is linear, so this is a least-squares
    problem whose residual certifies (un)solvability.  Returns (M, residual)
    with M None when the residual exceeds ``tol``.  When solutions are not
    unique the minimum-norm one is returned.
    """
    _require_mother(mother)
    if c.dim != mother.dim:
        raise DimensionError("dimension mismatch between mother and target")
    L, basis = _deform_operator(mother, symmetric)
    target = c.c.ravel()
    coef, *_ = np.linalg.lstsq(L, target, rcond=None)
    coef[np.abs(coef) < 1e-14] = 0.0
    residual = float(np.max(np.abs(L @ coef - target), initial=0.0))
    if residual > tol:
        return None, residual
    M = sum(a * E for a, E in zip(coef, basis))
    return DeformationMatrix(np.where(np.abs(M) < 1e-14, 0.0, M)), residual


# -- classes ----------------------------------------------------------------

@dataclass(frozen=True)
class ClassLabel:
    """Class A, B, C or 'unknown', with the witness when A or B."""

    value: str
    mother: Optional[str] = None
    M: Optional[DeformationMatrix] = None
    certificate: str = ""

    def __post_init__(self):
        if self.value not in ("A", "B", "C", "unknown"):
            raise ValueError(f"bad class label {self.value!r}")
        if self.value == "A" and self.M is not None and not self.M.is_symmetric:
            raise ValueError("class A witness must be symmetric")
        if self.value == "B" and (self.M is None or self.M.is_symmetric):
            raise ValueError("class B witness must be asymmetric")

    def to_dict(self) -> dict:
        out = {"class": self.value, "mother": self.mother}
        if self.M is not None:
            out["M"] = self.M.M.tolist()
            out["M_description"] = self.M.describe()
            out["kernel"] = self.M.kernel().tolist()
        out["certificate"] = self.certificate
        return out


def registered_mothers(n: int) -> list[tuple[str, StructureTensor]]:
    """Built-in fully antisymmetric mothers of dimension n."""
    if n == 3:
        return [("so3", alg.levi_civita())]
    if n == 4:
        from .dim4 import mother_r_so3

        return [("r+so3", mother_r_so3())]
    return []


def classify(c: StructureTensor, mothers: Sequence[tuple[str, StructureTensor]] | None = None) -> ClassLabel:
    """Class of a Lie algebra relative to deformations of fully antisymmetric mothers.

    n = 3 uses the closed-form recover_M.  For other n the tensor is class A
    if itself fully antisymmetric, otherwise the deformation equation is
    solved against each mother (given or registered): a symmetric solution
    gives A, any solution gives B, none gives C.  Without any mother of the
    right dimension the answer is 'unknown'.
    """
    alg.require_lie(c)
    if c.dim == 3 and mothers is None:
        M = recover_M(c)
        return ClassLabel("A" if M.is_symmetric else "B", "so3", M, "closed-form recovery from eps")
    if alg.is_fully_antisymmetric(c):
        return ClassLabel("A", "self", DeformationMatrix(np.eye(c.dim)), "fully antisymmetric")
    mothers = registered_mothers(c.dim) if mothers is None else list(mothers)
    if not mothers:
        return ClassLabel("unknown", certificate=f"no registered mother of dimension {c.dim}")
    worst = []
    for name, mom in mothers:
        M, _ = solve_deformation(mom, c, symmetric=True)
        if M is not None:
            return ClassLabel("A", name, M, "symmetric solution of the deformation equation")
    for name, mom in mothers:
        M, res = solve_deformation(mom, c)
        if M is not None:
            return ClassLabel("B", name, M, "asymmetric solution; no symmetric one exists")
        worst.append(f"{name}: least-squares residual {res:.3g}")
    return ClassLabel("C", certificate="no M solves deform(mother, M) = c for " + "; ".join(worst))


def singular_kernel_check(M, mother: StructureTensor | None = None, tol: float = 1e-12) -> float:
    """Max |J_M(xi)| over the kernel basis of M (zero when Ker M is singular)."""
    from .lie_poisson import poisson_matrix

    M = DeformationMatrix.coerce(M)
    mother = alg.levi_civita() if mother is None else mother
    c = deform(mother, M)
    K = M.kernel()
    return max((float(np.max(np.abs(poisson_matrix(c, v)))) for v in K), default=0.0)

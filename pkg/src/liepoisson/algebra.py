"""Finite-dimensional real Lie algebras given by structure constants.

A bracket on an n-dimensional algebra with basis e_1..e_n is stored as a
dense array ``c`` of shape (n, n, n) with ``c[l, j, k]`` the coefficient of
e_l in [e_j, e_k].  Vectors of the state space and of its dual (the phase
space) are plain 1-D numpy arrays of length n.

Indices are 0-based in code; user-facing text (tables, files, CLI) is
1-based to match the usual e_1, e_2, e_3 names.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import DimensionError, NotALieAlgebraError

#: Absolute tolerance for "is a Lie algebra" predicates.
JACOBI_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StructureTensor:
    """Structure constants ``c[l, j, k]`` of a bracket [e_j, e_k] = c^l_{jk} e_l.

    Antisymmetry in the two lower indices is checked on construction; the
    stored array is read-only.
    """

    c: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise DimensionError(f"structure tensor must have shape (n, n, n), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("structure constants must be finite")
        asym = np.max(np.abs(c + c.transpose(0, 2, 1)), initial=0.0)
        if asym > 1e-12 * (1.0 + np.max(np.abs(c), initial=0.0)):
            raise ValueError(f"structure constants not antisymmetric in lower indices (defect {asym:.3g})")
        c.flags.writeable = False
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @classmethod
    def from_table(cls, dim: int, table: Mapping[tuple[int, int], Mapping[int, float]]) -> "StructureTensor":
        """Build from a 1-based multiplication table.

        ``table[(j, k)] = {l: value, ...}`` sets [e_j, e_k] = sum value e_l;
        the (k, j) entries are filled in by antisymmetry.

        >>> t = StructureTensor.from_table(3, {(1, 3): {1: 1.0}})
        >>> bracket(t, [1, 0, 0], [0, 0, 1]).tolist()
        [1.0, 0.0, 0.0]
        """
        c = np.zeros((dim, dim, dim))
        for (j, k), row in table.items():
            if j == k:
                raise ValueError(f"[e_{j}, e_{j}] must vanish")
            for ell, value in row.items():
                c[ell - 1, j - 1, k - 1] += value
                c[ell - 1, k - 1, j - 1] -= value
        return cls(c)

    def nonzero_entries(self) -> list[tuple[int, int, int, float]]:
        """1-based (l, j, k, value) for nonzero c^l_{jk} with j < k."""
        out = []
        n = self.dim
        for j in range(n):
            for k in range(j + 1, n):
                for ell in range(n):
                    v = self.c[ell, j, k]
                    if v != 0.0:
                        out.append((ell + 1, j + 1, k + 1, float(v)))
        return out

    def equals(self, other: "StructureTensor", atol: float = 0.0) -> bool:
        return self.dim == other.dim and bool(np.all(np.abs(self.c - other.c) <= atol))

    def __repr__(self):
        return f"StructureTensor(dim={self.dim}, nonzero={self.nonzero_entries()})"


def _check_vec(c: StructureTensor, *vs) -> list[np.ndarray]:
    out = []
    for v in vs:
        v = np.asarray(v, dtype=float)
        if v.shape != (c.dim,):
            raise DimensionError(f"expected vector of length {c.dim}, got shape {v.shape}")
        out.append(v)
    return out


def bracket(c: StructureTensor, x, y) -> np.ndarray:
    """[x, y] with components c^l_{jk} x^j y^k."""
    x, y = _check_vec(c, x, y)
    return np.einsum("ljk,j,k->l", c.c, x, y)


def jacobiator(c: StructureTensor) -> np.ndarray:
    """Array ``r[i, j, k, :]`` = [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]."""
    cc = c.c
    # [[e_i,e_j],e_k]^m = c^l_{ij} c^m_{lk}
    t = np.einsum("lij,mlk->ijkm", cc, cc)
    return t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)


def jacobi_residual(c: StructureTensor) -> float:
    """Largest sup-norm of the Jacobiator over basis triples; zero iff Lie."""
    return float(np.max(np.abs(jacobiator(c)), initial=0.0))


def is_lie_algebra(c: StructureTensor, tol: float = JACOBI_TOL) -> bool:
    return jacobi_residual(c) <= tol


def require_lie(c: StructureTensor, tol: float = JACOBI_TOL) -> None:
    r = jacobi_residual(c)
    if r > tol:
        raise NotALieAlgebraError(f"Jacobi residual {r:.3g} exceeds {tol:g}")


def killing_form(c: StructureTensor) -> np.ndarray:
    """g_{jk} = c^b_{ja} c^a_{kb} (unscaled; so(3) gives -2 I)."""
    return np.einsum("bja,akb->jk", c.c, c.c)


def is_semisimple(c: StructureTensor, tol: float = 1e-10) -> bool:
    """Cartan's criterion: the Killing form is nondegenerate."""
    g = killing_form(c)
    sv = np.linalg.svd(g, compute_uv=False)
    return bool(sv.min() > tol * max(1.0, sv.max()))


def killing_lowered(c: StructureTensor) -> np.ndarray:
    """c_{ijk} = c^a_{jk} g_{ai}; fully antisymmetric for semi-simple algebras."""
    return np.einsum("ajk,ai->ijk", c.c, killing_form(c))


def _fully_antisym_defect(t: np.ndarray) -> float:
    d1 = np.abs(t + t.transpose(1, 0, 2))
    d2 = np.abs(t + t.transpose(0, 2, 1))
    d3 = np.abs(t + t.transpose(2, 1, 0))
    return float(max(d1.max(initial=0.0), d2.max(initial=0.0), d3.max(initial=0.0)))


def is_fully_antisymmetric(c: StructureTensor, tol: float = 1e-12) -> bool:
    """True when c^l_{jk}, lowered with the identity metric, is alternating."""
    return _fully_antisym_defect(c.c) <= tol


def adjoint_matrix(c: StructureTensor, v) -> np.ndarray:
    """Matrix of ad_v x = [x, v] on the state space (rows: output index)."""
    (v,) = _check_vec(c, v)
    return np.einsum("ljk,k->lj", c.c, v)


def coadjoint_matrix(c: StructureTensor, v) -> np.ndarray:
    """Matrix A with (ad*_v xi)_j = c^a_{jk} v^k xi_a.

    Satisfies <x, A xi> = <[x, v], xi>, i.e. A is the transpose of
    :func:`adjoint_matrix`.
    """
    (v,) = _check_vec(c, v)
    return np.einsum("ajk,k->ja", c.c, v)


def derived_basis(c: StructureTensor, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (rows) of span{[e_j, e_k]}."""
    n = c.dim
    vecs = c.c.reshape(n, n * n).T
    if not np.any(vecs):
        return np.zeros((0, n))
    u, s, _ = np.linalg.svd(vecs.T, full_matrices=False)
    r = int(np.sum(s > tol * max(1.0, s.max())))
    return u[:, :r].T


def derived_dim(c: StructureTensor, tol: float = JACOBI_TOL) -> int:
    """Dimension of the derived algebra [g, g]."""
    require_lie(c, tol)
    return derived_basis(c).shape[0]


# -- text format ------------------------------------------------------------

def dumps(c: StructureTensor) -> str:
    """Serialize: ``dim n`` then ``l j k value`` lines (1-based, j < k)."""
    lines = [f"dim {c.dim}"]
    lines += [f"{l} {j} {k} {v!r}" for l, j, k, v in c.nonzero_entries()]
    return "\n".join(lines) + "\n"


def loads(text: str) -> StructureTensor:
    """Parse the format written by :func:`dumps`; ``#`` starts a comment."""
    dim = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if dim is None:
            if len(parts) != 2 or parts[0] != "dim":
                raise ValueError(f"line {lineno}: expected 'dim n' header")
            dim = int(parts[1])
            if dim < 1:
                raise ValueError("dim must be positive")
            continue
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 'l j k value'")
        l, j, k = (int(p) for p in parts[:3])
        if not (1 <= l <= dim and 1 <= j < k <= dim):
            raise ValueError(f"line {lineno}: indices out of range or j >= k")
        entries.append((l, j, k, float(parts[3])))
    if dim is None:
        raise ValueError("empty structure-tensor file")
    c = np.zeros((dim, dim, dim))
    for l, j, k, v in entries:
        c[l - 1, j - 1, k - 1] += v
        c[l - 1, k - 1, j - 1] -= v
    return StructureTensor(c)


def load(path) -> StructureTensor:
    with open(path) as fh:
        return loads(fh.read())


def dump(c: StructureTensor, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(c))


def levi_civita() -> StructureTensor:
    """The so(3) bracket [e_i, e_j] = eps_ijk e_k (cross product)."""
    return StructureTensor.from_table(3, {(1, 2): {3: 1.0}, (2, 3): {1: 1.0}, (3, 1): {2: 1.0}})

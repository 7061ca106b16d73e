"""Normalized bases of C^d: duals, Riesz bounds, coherence, coordinate maps.

A basis is stored as the d x d matrix whose columns are the basis vectors.
Inner products are linear in the first slot: <a, b> = sum_i a_i conj(b_i).
"""
import json
import math

import numpy as np

from . import groups
from .errors import BasisError, ConditioningError, ConvergenceError, DimensionError

UNIT_TOL = 1e-10
SINGULAR_TOL = 1e-10


def singular_values(A):
    """Singular values in descending order.

    LAPACK's divide-and-conquer SVD; a convergence failure surfaces as
    :class:`ConvergenceError` rather than a silently truncated answer.
    """
    try:
        return np.linalg.svd(np.asarray(A), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"singular value iteration did not converge: {exc}") from exc


def hermitian_eigh(Q):
    try:
        return np.linalg.eigh(Q)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigen-iteration did not converge: {exc}") from exc


def _columns(obj):
    return obj.columns if isinstance(obj, Basis) else np.asarray(obj, dtype=np.complex128)


class Basis:
    """d unit-norm, linearly independent columns of length d."""

    def __init__(self, columns, name=None):
        cols = np.array(columns, dtype=np.complex128)
        if cols.ndim != 2 or cols.shape[0] != cols.shape[1] or cols.shape[0] == 0:
            raise BasisError("square", f"expected d columns of length d, got shape {cols.shape}")
        norms = np.linalg.norm(cols, axis=0)
        bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_TOL)
        if bad.size:
            raise BasisError("unit_norm", f"column {bad[0]} has norm {norms[bad[0]]!r}")
        sv = singular_values(cols)
        if sv[-1] <= SINGULAR_TOL:
            raise BasisError("independent", f"smallest singular value {sv[-1]:.3e} <= {SINGULAR_TOL}")
        cols.setflags(write=False)
        self.columns = cols
        self.name = name
        self._sv = sv

    @property
    def dim(self):
        return self.columns.shape[0]

    def __len__(self):
        return self.dim

    def __getitem__(self, j):
        return self.columns[:, j]

    @property
    def dual(self):
        """Dual columns; generally not unit norm."""
        if not hasattr(self, "_dual"):
            self._dual = dual_basis(self.columns)
        return self._dual

    @property
    def alpha(self):
        return 1.0 / self._sv[0]

    @property
    def beta(self):
        return 1.0 / self._sv[-1]

    @property
    def is_orthonormal(self):
        G = self.columns.conj().T @ self.columns
        off = G - np.diag(np.diag(G))
        return bool(np.max(np.abs(off), initial=0.0) < UNIT_TOL)

    def analysis_matrix(self):
        """A with A @ a = (<a, Phi*_j>)_j, i.e. the inverse of the column matrix."""
        if not hasattr(self, "_analysis"):
            if self.is_orthonormal:
                self._analysis = self.columns.conj().T
            else:
                self._analysis = np.linalg.inv(self.columns)
        return self._analysis

    def to_json(self):
        return json.dumps(
            {
                "dim": self.dim,
                "columns": [[[float(z.real), float(z.imag)] for z in col] for col in self.columns.T],
            }
        )

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        try:
            d = int(data["dim"])
            cols = np.array(
                [[complex(re, im) for re, im in col] for col in data["columns"]], dtype=np.complex128
            ).T
        except (KeyError, TypeError, ValueError) as exc:
            raise BasisError("schema", f"cannot read basis JSON: {exc}") from exc
        if cols.shape != (d, d):
            raise BasisError("dim", f"declared dim {d} but columns form shape {cols.shape}")
        return cls(cols)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Basis{label} dim={self.dim} orthonormal={self.is_orthonormal}>"


def dual_basis(phi):
    """Columns Phi*_k with <Phi_j, Phi*_k> = delta_jk (conjugate transpose of the inverse)."""
    cols = _columns(phi)
    if cols.ndim != 2 or cols.shape[0] != cols.shape[1]:
        raise DimensionError(f"expected a square column matrix, got {cols.shape}")
    sv = singular_values(cols)
    if sv[-1] <= SINGULAR_TOL * max(1.0, sv[0]):
        raise ConditioningError(f"column matrix is near singular (sigma_min = {sv[-1]:.3e})")
    return np.linalg.inv(cols).conj().T


def riesz_bounds(phi):
    """(alpha, beta): extreme singular values of a -> (<a, Phi*_j>)_j."""
    if isinstance(phi, Basis):
        return phi.alpha, phi.beta
    sv = singular_values(_columns(phi))
    return 1.0 / sv[0], 1.0 / sv[-1]


def coherence(phi, psi):
    """max_{j,k} |<Phi_j, Psi_k>|; accepts Basis objects or raw column matrices."""
    A, B = _columns(phi), _columns(psi)
    if A.shape[0] != B.shape[0]:
        raise DimensionError(f"dimension mismatch: {A.shape[0]} vs {B.shape[0]}")
    return float(np.max(np.abs(B.conj().T @ A)))


def standard_basis(d):
    return Basis(np.eye(d), name="standard")


def fourier_basis(spec):
    """Normalized characters |G|^{-1/2} <xi, .>, one column per dual element."""
    if isinstance(spec, int):
        spec = groups.GroupSpec((spec,))
    t = groups.tables(spec)
    return Basis(t.character_table.T / math.sqrt(t.n), name=f"fourier[{spec}]")


def random_orthonormal_basis(d, rng):
    """QR of a complex Gaussian matrix with R's diagonal made positive real."""
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    diag = np.diag(R)
    Q = Q * (diag / np.abs(diag))[None, :]
    # re-normalize to kill rounding drift in the column norms
    Q = Q / np.linalg.norm(Q, axis=0)
    return Basis(Q, name="random")


def random_basis(d, rng, min_sigma=0.2):
    """Random normalized (not orthonormal) basis with sigma_min >= min_sigma."""
    while True:
        Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        Z = Z / np.linalg.norm(Z, axis=0)
        if singular_values(Z)[-1] >= min_sigma:
            return Basis(Z, name="random-normalized")


def analysis(a, phi):
    """Coefficients (<a, Phi*_j>)_j of a in the basis phi."""
    a = np.asarray(a, dtype=np.complex128)
    if a.shape[-1] != phi.dim:
        raise DimensionError(f"vector of length {a.shape[-1]} vs basis of dim {phi.dim}")
    return a @ phi.analysis_matrix().T


def synthesis(c, phi):
    """sum_j c_j Phi_j."""
    c = np.asarray(c, dtype=np.complex128)
    if c.shape[-1] != phi.dim:
        raise DimensionError(f"coefficient vector of length {c.shape[-1]} vs basis of dim {phi.dim}")
    return c @ phi.columns.T

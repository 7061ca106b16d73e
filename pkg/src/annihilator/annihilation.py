"""Annihilating pairs for two bases of C^d.

For supports S (coordinates in phi) and Sigma (coordinates in psi) this
module computes the quantities that bound ``||a||_2`` by the two tail norms
``||a||_{l2(phi, S^c)} + ||a||_{l2(psi, Sigma^c)}``: coherence bounds,
the concentration operator ``P_Sigma U P_S`` and its norms, and an
eigenvalue bracket around the optimal constant.
"""
from dataclasses import asdict, dataclass
import math

import numpy as np

from .bases import Basis, analysis, coherence, hermitian_eigh, riesz_bounds, singular_values
from .errors import DimensionError, InvariantError

CHAIN_TOL = 1e-9
WEAK_TOL = 1e-10


@dataclass(frozen=True)
class SupportSet:
    """Sorted subset of {0, ..., dim-1}."""

    indices: tuple
    dim: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices must be strictly increasing: {idx}")
        if idx and (idx[0] < 0 or idx[-1] >= self.dim):
            raise ValueError(f"indices {idx} out of range for dim {self.dim}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, indices, dim):
        return cls(tuple(sorted(set(int(i) for i in indices))), dim)

    @classmethod
    def parse(cls, text, dim):
        text = (text or "").strip()
        if not text:
            return cls((), dim)
        return cls.of((int(t) for t in text.split(",")), dim)

    @classmethod
    def full(cls, dim):
        return cls(tuple(range(dim)), dim)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, j):
        return j in self.indices

    def mask(self):
        m = np.zeros(self.dim, dtype=bool)
        m[list(self.indices)] = True
        return m

    def complement(self):
        return SupportSet(tuple(np.flatnonzero(~self.mask())), self.dim)


def _support(obj, dim):
    if isinstance(obj, SupportSet):
        if obj.dim != dim:
            raise DimensionError(f"support of dim {obj.dim} used with bases of dim {dim}")
        return obj
    return SupportSet.of(obj, dim)


def _check_pair(phi, psi):
    if phi.dim != psi.dim:
        raise DimensionError(f"bases of different dimensions: {phi.dim} vs {psi.dim}")
    return phi.dim


@dataclass
class AnnihilationReport:
    coherence: float
    op_norm: float
    hs_norm: float
    theorem_a_bound: float | None
    refined_bound: float | None
    lambda_min: float
    exact_constant_lo: float
    exact_constant_hi: float
    weak_pair: bool

    def to_dict(self):
        out = asdict(self)
        for key in ("exact_constant_lo", "exact_constant_hi"):
            if math.isinf(out[key]):
                out[key] = "inf"
        return out


def tail_norms(a, phi, psi, S, Sigma):
    """(||a||_{l2(phi, S^c)}, ||a||_{l2(psi, Sigma^c)}); a may be a stack of row vectors."""
    d = _check_pair(phi, psi)
    S, Sigma = _support(S, d), _support(Sigma, d)
    ca = analysis(a, phi)
    cb = analysis(a, psi)
    return (
        np.linalg.norm(ca[..., ~S.mask()], axis=-1),
        np.linalg.norm(cb[..., ~Sigma.mask()], axis=-1),
    )


def support_l0(a, phi, tol=1e-10):
    """Indices j with |<a, Phi*_j>| > tol * max_k |<a, Phi*_k>|, and their count."""
    c = np.abs(analysis(a, phi))
    top = c.max(initial=0.0)
    if top == 0.0:
        return SupportSet((), phi.dim), 0
    idx = np.flatnonzero(c > tol * top)
    return SupportSet(tuple(idx), phi.dim), int(idx.size)


def elad_bruckstein_bound(phi, psi):
    """Lower bounds on ||a||_{l0(phi)} * ||a||_{l0(psi)} and on their sum, for a != 0."""
    _check_pair(phi, psi)
    a_phi, b_phi = riesz_bounds(phi)
    a_psi, b_psi = riesz_bounds(psi)
    m = min(
        b_phi / a_psi * coherence(phi.columns, psi.dual),
        b_psi / a_phi * coherence(phi.dual, psi.columns),
    )
    return 1.0 / m**2, 2.0 / m


def change_of_basis(phi, psi):
    """U with U[i, j] = <Phi_j, Psi_i>."""
    return psi.columns.conj().T @ phi.columns


def concentration_operator(phi, psi, S, Sigma):
    """P_Sigma U P_S as a d x d matrix (rows Sigma, columns S kept)."""
    d = _check_pair(phi, psi)
    S, Sigma = _support(S, d), _support(Sigma, d)
    U = change_of_basis(phi, psi)
    return U * Sigma.mask()[:, None] * S.mask()[None, :]


def norms_chain(phi, psi, S, Sigma):
    """(operator norm, Hilbert-Schmidt norm, M * sqrt(|S||Sigma|)), checked to be ordered."""
    d = _check_pair(phi, psi)
    S, Sigma = _support(S, d), _support(Sigma, d)
    block = change_of_basis(phi, psi)[np.ix_(Sigma.indices, S.indices)]
    op = float(singular_values(block)[0]) if block.size else 0.0
    hs = float(np.linalg.norm(block)) if block.size else 0.0
    bound = coherence(phi, psi) * math.sqrt(len(S) * len(Sigma))
    if not (op <= hs + CHAIN_TOL and hs <= bound + CHAIN_TOL):
        raise InvariantError(f"norm chain violated: op={op}, hs={hs}, M*sqrt(|S||Sigma|)={bound}")
    return op, hs, bound


def theorem_a_constant(M, s, sigma):
    """1 + 1/(1 - M sqrt(s sigma)) when M^2 s sigma < 1, else None."""
    if M * M * s * sigma >= 1.0:
        return None
    return 1.0 + 1.0 / (1.0 - M * math.sqrt(s * sigma))


def refined_constant(phi, psi, S, Sigma):
    """1 + 1/(1 - ||P_Sigma U P_S||) when the operator norm is below 1."""
    op, _, _ = norms_chain(phi, psi, S, Sigma)
    if op >= 1.0 - CHAIN_TOL:
        return None
    return 1.0 + 1.0 / (1.0 - op)


def tail_form(phi, psi, S, Sigma):
    """Q with a^H Q a = ||a||^2_{l2(phi,S^c)} + ||a||^2_{l2(psi,Sigma^c)}.

    For orthonormal bases this is the sum of the two orthogonal projections
    onto the spans of the columns outside S and outside Sigma.
    """
    d = _check_pair(phi, psi)
    S, Sigma = _support(S, d), _support(Sigma, d)
    A = phi.analysis_matrix()[~S.mask()]
    B = psi.analysis_matrix()[~Sigma.mask()]
    Q = A.conj().T @ A + B.conj().T @ B
    return (Q + Q.conj().T) / 2


def minimizing_vector(phi, psi, S, Sigma):
    """(lambda_min of the tail form, unit eigenvector attaining it)."""
    w, V = hermitian_eigh(tail_form(phi, psi, S, Sigma))
    return max(float(w[0]), 0.0), V[:, 0]


def exact_constant_bracket(phi, psi, S, Sigma, tol=WEAK_TOL):
    """(lo, hi, lambda_min) with lo <= optimal strong-annihilation constant <= hi.

    With q = sqrt(lambda_min), the minimum of the tail-norm sum over the unit
    sphere lies in [q, sqrt(2) q], so the optimal constant lies in
    [1/(sqrt(2) q), 1/q].
    """
    lam, _ = minimizing_vector(phi, psi, S, Sigma)
    if lam <= tol:
        return math.inf, math.inf, lam
    q = math.sqrt(lam)
    return 1.0 / (math.sqrt(2.0) * q), 1.0 / q, lam


def general_basis_constant(phi, psi, S, Sigma):
    """Constant for merely normalized bases, minimized over the two role assignments."""
    d = _check_pair(phi, psi)
    S, Sigma = _support(S, d), _support(Sigma, d)
    k = len(S) * len(Sigma)
    candidates = []
    for first, second in ((phi, psi), (psi, phi)):
        a1, b1 = riesz_bounds(first)
        a2, b2 = riesz_bounds(second)
        gap = a2**2 - k * coherence(first.columns, second.dual) ** 2 * b1**2
        if gap > 0:
            D = gap ** -0.5
            candidates.append((1.0 + D * b2) / a1)
    return min(candidates) if candidates else None


def group_sup_constant(card_g, s, sigma):
    """2 / (1 - sqrt(s sigma / |G|)) for standard/Fourier supports on a group."""
    if s * sigma >= card_g:
        return None
    return 2.0 / (1.0 - math.sqrt(s * sigma / card_g))


def compressible_check(a, phi, C, alpha, rtol=1e-12):
    """Is a (C, alpha)-compressible in phi?  Returns (ok, first violating rank or None).

    The j-th largest coefficient magnitude (ties by index) must not exceed
    sqrt(2 alpha - 1) C (j+1)^(-alpha) ||a||_2.
    """
    if C <= 0 or alpha <= 0.5:
        raise ValueError("need C > 0 and alpha > 1/2")
    a = np.asarray(a, dtype=np.complex128)
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        raise ValueError("compressibility is undefined for the zero vector")
    mags = np.abs(analysis(a, phi))
    order = np.lexsort((np.arange(mags.size), -mags))
    ranked = mags[order]
    j = np.arange(mags.size)
    bound = math.sqrt(2 * alpha - 1) * C * (j + 1.0) ** (-alpha) * norm
    bad = np.flatnonzero(ranked > bound * (1 + rtol))
    if bad.size:
        return False, int(bad[0])
    return True, None


def compressibility_threshold(d, alpha):
    """(floor(sqrt d) - 1)^(alpha - 1/2) / (4 sqrt d) for unbiased orthonormal pairs."""
    if d < 4:
        raise ValueError("threshold defined for d >= 4")
    if alpha <= 0.5:
        raise ValueError("alpha must exceed 1/2")
    return (math.isqrt(d) - 1) ** (alpha - 0.5) / (4.0 * math.sqrt(d))


corollary_2_5_threshold = compressibility_threshold


def compressibility_ratio(A, phi, alpha):
    """Smallest C for which each row of A is (C, alpha)-compressible in phi.

    Vectorized over rows: max_j of the j-th largest coefficient magnitude
    divided by sqrt(2 alpha - 1) (j+1)^(-alpha) ||a||_2.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.complex128))
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0):
        raise ValueError("compressibility is undefined for the zero vector")
    mags = -np.sort(-np.abs(analysis(A, phi)), axis=1)
    j = np.arange(A.shape[1])
    shape = math.sqrt(2 * alpha - 1) * (j + 1.0) ** (-alpha)
    return np.max(mags / shape[None, :], axis=1) / norms


def _structured_candidates(d):
    n = np.arange(d)
    out = [np.eye(d)]
    out.append(np.exp(2j * np.pi * np.outer(n, n) / d) / math.sqrt(d))
    for step in range(2, d):
        if d % step == 0:
            comb = (n % step == 0).astype(float)
            out.append(np.array([np.roll(comb, x) * np.exp(2j * np.pi * k * n / d)
                                 for x in range(step) for k in range(0, d, d // step)]))
    for k in range(1, d):
        out.append(np.exp(1j * np.pi * k * n[None, :] ** 2 / d) * np.exp(2j * np.pi * n[None, :] * np.arange(d)[:, None] / d))
    dist = np.minimum(n, d - n)
    for width in np.linspace(0.3, 2.0, 18) * math.sqrt(d / (2 * np.pi)):
        g = np.exp(-dist ** 2 / (2 * width ** 2))
        out.append(np.array([np.roll(g, x) for x in range(d)]))
    for m in range(2, d):
        # few equal spikes spread across the cycle: near-flat spectrum
        idx = (np.arange(m) * d) // m
        v = np.zeros(d)
        v[idx] = 1.0
        out.append(v[None, :])
    return np.vstack(out)


def joint_compressible_search(phi, psi, C, alpha, candidates=5000, seed=0):
    """Seeded search for a vector (C, alpha)-compressible in both phi and psi.

    The pool mixes structured vectors (basis vectors, combs, chirps,
    discrete Gaussians, spread spikes) with random Gaussian and random-phase
    flat vectors, ``candidates`` in total.  Returns a dict with ``found``,
    the best vector and ``min_joint_C``, the smallest C at which any
    candidate is jointly compressible.
    """
    from . import rng as rngmod

    d = phi.dim
    pool = _structured_candidates(d)[:candidates]
    rest = candidates - pool.shape[0]
    if rest > 0:
        r = rngmod.stream(seed, 0, "joint-compressible-search")
        half = rest // 2
        gauss = rngmod.complex_gaussian(r, half, d)
        flat = np.exp(2j * np.pi * r.random((rest - half, d)))
        pool = np.vstack([pool, gauss, flat])
    joint = np.maximum(compressibility_ratio(pool, phi, alpha), compressibility_ratio(pool, psi, alpha))
    best = int(np.argmin(joint))
    v = pool[best] / np.linalg.norm(pool[best])
    return {
        "found": bool(joint[best] <= C * (1 + 1e-12)),
        "min_joint_C": float(joint[best]),
        "best_vector": v,
        "candidates": int(pool.shape[0]),
    }


def biased_compressibility_threshold(M, alpha):
    """(M/4) (floor(1/M) - 1)^(alpha - 1/2) for a pair of coherence M."""
    k = math.floor(1.0 / M + 1e-9) - 1
    if k < 1:
        raise ValueError(f"coherence {M} too large for a nontrivial threshold")
    return M / 4.0 * k ** (alpha - 0.5)


def lp_lower_bound(d, p):
    """Lower bound on max(||a||_{lp(phi)}, ||a||_{lp(psi)}) for unit a, unbiased orthonormal pair."""
    if not 0 < p < 2:
        raise ValueError("p must lie in (0, 2)")
    if d < 4:
        raise ValueError("bound defined for d >= 4")
    return math.sqrt((2 - p) / p) * (math.isqrt(d) - 1) ** (1 / p - 0.5) / (4.0 * math.sqrt(d))


def annihilation_report(phi, psi, S, Sigma, tol=WEAK_TOL):
    d = _check_pair(phi, psi)
    S, Sigma = _support(S, d), _support(Sigma, d)
    M = coherence(phi, psi)
    op, hs, _ = norms_chain(phi, psi, S, Sigma)
    lo, hi, lam = exact_constant_bracket(phi, psi, S, Sigma, tol=tol)
    return AnnihilationReport(
        coherence=M,
        op_norm=op,
        hs_norm=hs,
        theorem_a_bound=theorem_a_constant(M, len(S), len(Sigma)),
        refined_bound=refined_constant(phi, psi, S, Sigma),
        lambda_min=lam,
        exact_constant_lo=lo,
        exact_constant_hi=hi,
        weak_pair=lam > tol,
    )


def tao_exhaustive(d, tol=WEAK_TOL):
    """Smallest tail-form eigenvalue over all (S, Sigma) with |S| + |Sigma| <= d.

    Standard/Fourier pair on Z_d.  Returns (min lambda_min, number of pairs, argmin pair).
    """
    from itertools import combinations

    from .bases import fourier_basis, standard_basis

    F = fourier_basis(d).columns
    I = standard_basis(d).columns
    # a^H Q a = ||P_{S^c} a||^2 + ||P_{Sigma^c} F^H a||^2
    subsets = [c for k in range(d + 1) for c in combinations(range(d), k)]
    best = (math.inf, None)
    count = 0
    for Sset in subsets:
        keep_s = np.ones(d, dtype=bool)
        keep_s[list(Sset)] = False
        P1 = I[:, keep_s] @ I[:, keep_s].T
        sigmas = [c for c in subsets if len(c) + len(Sset) <= d]
        Qs = np.empty((len(sigmas), d, d), dtype=np.complex128)
        for n, Sig in enumerate(sigmas):
            keep = np.ones(d, dtype=bool)
            keep[list(Sig)] = False
            Fk = F[:, keep]
            Qs[n] = P1 + Fk @ Fk.conj().T
        lams = np.linalg.eigvalsh(Qs)[:, 0]
        count += len(sigmas)
        i = int(np.argmin(lams))
        if lams[i] < best[0]:
            best = (float(lams[i]), (Sset, sigmas[i]))
    return best[0], count, best[1]


def witness(phi, psi, S, Sigma):
    """Minimizing eigenvector of the tail form, phase fixed so its largest entry is real positive.

    Returns (lambda_min, vector, tail in phi, tail in psi).  When the pair is
    not annihilating, the vector is supported in S and Sigma up to rounding.
    """
    lam, v = minimizing_vector(phi, psi, S, Sigma)
    k = int(np.argmax(np.abs(v)))
    v = v * (abs(v[k]) / v[k])
    t1, t2 = tail_norms(v, phi, psi, S, Sigma)
    return lam, v, float(t1), float(t2)

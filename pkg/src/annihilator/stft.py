"""Time-frequency shifts and the short-time Fourier transform on a finite abelian group.

TF arrays are (|G|, |G|) complex arrays indexed [x, xi]; flattened row-major
they follow the canonical (x outer, xi inner) order.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import groups, kernels
from .errors import DimensionError

NORM_TOL = 1e-10


def _idx(spec, el):
    return spec.index(el)


def translate(spec, f, x):
    """T_x f(y) = f(y - x)."""
    f = groups.as_signal(spec, f)
    t = groups.tables(spec)
    return f[t.diff[:, _idx(spec, x)]]


def modulate(spec, f, xi):
    """M_xi f = f . <xi, .>."""
    f = groups.as_signal(spec, f)
    t = groups.tables(spec)
    return f * t.character_table[_idx(spec, xi)]


def tf_shift(spec, f, lam):
    """pi(x, xi) f = M_xi T_x f."""
    x, xi = lam
    return modulate(spec, translate(spec, f, x), xi)


def stft(spec, f, g):
    """V_g f(x, xi) = |G|^{-1/2} <f, pi(x, xi) g> = F_G[f . conj(T_x g)](xi)."""
    f = groups.as_signal(spec, f)
    g = groups.as_signal(spec, g)
    t = groups.tables(spec)
    return kernels.stft_table(f, g, t.diff, t.phase, t.roots_fwd) / math.sqrt(t.n)


def stft_naive(spec, f, g):
    """Direct evaluation of |G|^{-1/2} <f, pi(x, xi) g>; oracle for tests."""
    els = spec.elements()
    n = len(els)
    V = np.empty((n, n), dtype=np.complex128)
    for i, x in enumerate(els):
        for k, xi in enumerate(els):
            V[i, k] = np.vdot(tf_shift(spec, g, (x, xi)), f)
    return V / math.sqrt(n)


def stft_inverse(spec, V, g):
    """f(y) = (|G|^{1/2} ||g||^2)^{-1} sum_{x, xi} V(x, xi) g(y - x) <xi, y>."""
    V = groups.as_tfarray(spec, V)
    g = groups.as_signal(spec, g)
    gg = float(np.vdot(g, g).real)
    if math.sqrt(gg) < 1e-12:
        raise ValueError("window has (numerically) zero norm")
    t = groups.tables(spec)
    # rows: sum_xi V(x, xi) <xi, y> = |G|^{1/2} idft(V[x])(y)
    inner = V @ t.character_table  # [x, y]
    shifted = g[t.diff]  # [y, x] -> g(y - x)
    return np.einsum("xy,yx->y", inner, shifted) / (math.sqrt(t.n) * gg)


def covariance_check(spec, f, g, a, u, b, v):
    """Max deviation in V_{pi(b,v)g} pi(a,u) f (x,xi) = <u-v-xi, a><v, x> V_g f(x-a+b, xi-u+v)."""
    t = groups.tables(spec)
    lhs = stft(spec, tf_shift(spec, f, (a, u)), tf_shift(spec, g, (b, v)))
    V = stft(spec, f, g)
    ia, iu, ib, iv = (_idx(spec, e) for e in (a, u, b, v))
    X = np.arange(t.n)[:, None]
    XI = np.arange(t.n)[None, :]
    row = t.add[t.diff[X, ia], ib]  # x - a + b
    col = t.add[t.diff[XI, iu], iv]  # xi - u + v
    dual = t.diff[t.diff[iu, iv], XI]  # u - v - xi
    K = t.character_table
    rhs = K[dual, ia] * K[iv, X] * V[row, col]
    return float(np.max(np.abs(lhs - rhs)))


def fundstft_check(spec, f, g):
    """Max deviation in V_g f(x, xi) = conj(<xi, x>) V_{ghat} fhat (xi, -x)."""
    t = groups.tables(spec)
    V = stft(spec, f, g)
    # the dual group has the same coordinates and a symmetric pairing,
    # so the STFT on Ghat is the same computation applied to (fhat, ghat)
    W = stft(spec, groups.dft(spec, f), groups.dft(spec, g))
    X = np.arange(t.n)[:, None]
    XI = np.arange(t.n)[None, :]
    rhs = np.conj(t.character_table[XI, X]) * W[XI, t.neg[X]]
    return float(np.max(np.abs(V - rhs)))


def symmetry_lemma_check(spec, f, g, h, k):
    """Max deviation in F_{GxGhat}[V_g f conj(V_h k)](eta, u) = V_k f(-u, eta) conj(V_h g(-u, eta))."""
    t = groups.tables(spec)
    lhs = groups.dft_product(spec, stft(spec, f, g) * np.conj(stft(spec, k, h)))
    Vkf = stft(spec, f, k)
    Vhg = stft(spec, g, h)
    ETA = np.arange(t.n)[:, None]
    U = np.arange(t.n)[None, :]
    rhs = Vkf[t.neg[U], ETA] * np.conj(Vhg[t.neg[U], ETA])
    return float(np.max(np.abs(lhs - rhs)))


@dataclass(frozen=True)
class TFSupport:
    """A set of points of G x Ghat (or, when ``swapped``, of Ghat x G) as flat index pairs."""

    spec: groups.GroupSpec
    points: frozenset
    swapped: bool = False

    def __post_init__(self):
        n = self.spec.cardinality
        pts = frozenset((int(i), int(j)) for i, j in self.points)
        if any(not (0 <= i < n and 0 <= j < n) for i, j in pts):
            raise DimensionError(f"TF point out of range for group {self.spec}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_elements(cls, spec, pairs, swapped=False):
        return cls(spec, frozenset((spec.index(a), spec.index(b)) for a, b in pairs), swapped)

    @classmethod
    def from_mask(cls, spec, mask, swapped=False):
        return cls(spec, frozenset(zip(*map(lambda a: a.tolist(), np.nonzero(mask)))), swapped)

    def __len__(self):
        return len(self.points)

    def mask(self):
        n = self.spec.cardinality
        m = np.zeros((n, n), dtype=bool)
        for i, j in self.points:
            m[i, j] = True
        return m

    def elements(self):
        return sorted((self.spec.element(i), self.spec.element(j)) for i, j in self.points)


def tilde_support(sigma):
    """{(xi, -x) : (x, xi) in Sigma}, a subset of Ghat x G."""
    neg = groups.tables(sigma.spec).neg
    return TFSupport(sigma.spec, frozenset((j, int(neg[i])) for i, j in sigma.points), not sigma.swapped)


def untilde_support(sigma_tilde):
    """Inverse of :func:`tilde_support`: (xi, y) -> (-y, xi)."""
    neg = groups.tables(sigma_tilde.spec).neg
    return TFSupport(
        sigma_tilde.spec, frozenset((int(neg[j]), i) for i, j in sigma_tilde.points), not sigma_tilde.swapped
    )


def stft_up_constant(card_sigma, card_g, form="squared"):
    """8/(1 - |Sigma|/|G|)^2 (squared form) or 2 sqrt(2)/(1 - |Sigma|/|G|) (norm form)."""
    if card_sigma >= card_g:
        return None
    x = card_sigma / card_g
    if form == "squared":
        return 8.0 / (1.0 - x) ** 2
    if form == "norm":
        return 2.0 * math.sqrt(2.0) / (1.0 - x)
    raise ValueError(f"unknown form {form!r}")


def transfer_constant(c_sigma):
    """Double a squared-form annihilation constant of (Sigma, Sigma~) on G x Ghat."""
    if c_sigma <= 0:
        raise ValueError("constant must be positive")
    return 2.0 * c_sigma


def squared_sup_constant(card_g, s, sigma):
    """Square of the group uncertainty constant, 4/(1 - sqrt(s sigma/|G|))^2.

    Valid in squared form: the tail quadratic form of the standard/Fourier
    pair has smallest eigenvalue 1 - ||P_Sigma U P_S|| >= 1 - sqrt(s sigma/|G|),
    whose reciprocal is below this value.
    """
    from .annihilation import group_sup_constant

    c = group_sup_constant(card_g, s, sigma)
    return None if c is None else c * c


def tf_tail_energy(V, sigma):
    """sum over (x, xi) not in Sigma of |V(x, xi)|^2."""
    return float(np.sum(np.abs(V[~sigma.mask()]) ** 2))


def require_unit_window(g):
    norm = float(np.linalg.norm(g))
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"window must have unit norm, got {norm!r}")


def gabor_frame(spec, g):
    """The |G|^2 vectors pi(x, xi) g in canonical (x, xi) order, as rows of an array."""
    g = groups.as_signal(spec, g)
    require_unit_window(g)
    t = groups.tables(spec)
    shifted = g[t.diff.T]  # [x, y] -> g(y - x)
    frame = shifted[:, None, :] * t.character_table[None, :, :]
    return frame.reshape(t.n * t.n, t.n)


def frame_coefficients(frame, f):
    """(<f, e_j>)_j."""
    return frame.conj() @ np.asarray(f, dtype=np.complex128)


def exact_tf_constant(spec, sigma):
    """Optimal squared-form constant for (Sigma, Sigma~) on G x Ghat: 1/lambda_min of the tail form.

    Returns None when the pair is not annihilating.
    """
    from .annihilation import WEAK_TOL
    from .bases import hermitian_eigh

    n = spec.cardinality
    big = spec.product(spec)
    t = groups.tables(big)
    K = t.roots_fwd[t.phase] / n  # unitary transform of the product group
    keep_out = ~tilde_support(sigma).mask().reshape(-1)
    keep_in = ~sigma.mask().reshape(-1)
    B = K[keep_out]
    Q = B.conj().T @ B + np.diag(keep_in.astype(float))
    w, _ = hermitian_eigh((Q + Q.conj().T) / 2)
    if w[0] <= WEAK_TOL:
        return None
    return 1.0 / float(w[0])

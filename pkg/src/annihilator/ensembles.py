"""Random supports, restricted isometry constants, and restricted invertibility."""
from dataclasses import asdict, dataclass, field
from itertools import combinations
import math

import numpy as np

from . import rng as rngmod
from .annihilation import SupportSet, exact_constant_bracket, minimizing_vector, tail_norms
from .bases import Basis, coherence
from .errors import DimensionError

EXHAUSTIVE_LIMIT = 200_000
BT_GRAM_FLOOR = 1.0 / 144.0
BATCH = 4096


@dataclass(frozen=True)
class RandomSetModel:
    d: int
    k: float
    seed: int

    def __post_init__(self):
        if not 0 <= self.k <= self.d:
            raise ValueError(f"need 0 <= k <= d, got k={self.k}, d={self.d}")


def random_subset_avg_card(model, trial=0):
    """Each index kept independently with probability k/d."""
    r = rngmod.stream(model.seed, trial, "random-subset")
    keep = r.random(model.d) < model.k / model.d
    return SupportSet(tuple(np.flatnonzero(keep)), model.d)


@dataclass
class RipReport:
    delta_s: float
    s: int
    omega_size: int
    method: str
    supports_examined: int
    worst_support: tuple = ()

    def to_dict(self):
        return asdict(self)


def _deltas(T_rows, supports, scale):
    """delta for each support (rows of an int array of column indices)."""
    sub = T_rows[:, supports].transpose(1, 0, 2)  # (batch, |Omega|, s)
    sv = np.linalg.svd(sub, compute_uv=False)
    hi = sv[:, 0] ** 2 * scale - 1.0
    lo = 1.0 - sv[:, -1] ** 2 * scale if sub.shape[1] >= sub.shape[2] else np.ones(len(supports))
    return np.maximum(hi, lo)


def rip_constant(T, omega, s, method="exhaustive", trials=1000, seed=0):
    """Restricted isometry constant of (T, Omega, s).

    Exhaustive mode is exact; sampled mode is a lower bound over ``trials``
    random supports.  Values are clamped to [0, 1], 1 meaning the two-sided
    bound fails.
    """
    T = np.asarray(T, dtype=np.complex128)
    d = T.shape[0]
    if T.shape != (d, d):
        raise DimensionError(f"T must be square, got {T.shape}")
    omega = omega if isinstance(omega, SupportSet) else SupportSet.of(omega, d)
    if len(omega) == 0:
        raise ValueError("Omega must be nonempty")
    if not 1 <= s <= d:
        raise ValueError(f"sparsity s must be in [1, {d}]")
    rows = T[list(omega.indices)]
    scale = d / len(omega)
    if method == "exhaustive":
        total = math.comb(d, s)
        if total > EXHAUSTIVE_LIMIT:
            raise ValueError(f"C({d},{s}) = {total} supports exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}")
        gen = combinations(range(d), s)
    elif method == "sampled":
        total = int(trials)
        r = rngmod.stream(seed, 0, "rip-sampled")
        gen = (tuple(sorted(r.choice(d, size=s, replace=False))) for _ in range(total))
    else:
        raise ValueError(f"unknown method {method!r}")
    worst, worst_support = -math.inf, ()
    while True:
        chunk = [c for _, c in zip(range(BATCH), gen)]
        if not chunk:
            break
        arr = np.array(chunk, dtype=np.int_)
        deltas = _deltas(rows, arr, scale)
        i = int(np.argmax(deltas))
        if deltas[i] > worst:
            worst, worst_support = float(deltas[i]), tuple(int(v) for v in arr[i])
    delta = min(max(worst, 0.0), 1.0)
    return RipReport(delta, s, len(omega), method, total, worst_support)


def rip_two_sided_holds(T, omega, support, delta, tol=1e-10):
    """Check every singular value^2 of T[Omega, support] lies in [(1-delta)|Omega|/d, (1+delta)|Omega|/d]."""
    T = np.asarray(T)
    d = T.shape[0]
    idx = list(omega.indices) if isinstance(omega, SupportSet) else list(omega)
    sv = np.linalg.svd(T[np.ix_(idx, list(support))], compute_uv=False)
    sq = np.sort(sv**2)
    if len(idx) < len(support):
        sq = np.concatenate([np.zeros(len(support) - len(idx)), sq])
    r = len(idx) / d
    return bool(sq[0] >= (1 - delta) * r - tol and sq[-1] <= (1 + delta) * r + tol)


def uup_to_annihilation(delta_s, omega_size, d):
    """1 + sqrt(d / ((1 - delta_s) |Omega|))."""
    if delta_s >= 1:
        raise ValueError("delta_s must be < 1")
    if omega_size < 1:
        raise ValueError("Omega must be nonempty")
    return 1.0 + math.sqrt(d / ((1.0 - delta_s) * omega_size))


def annihilation_to_uup(c_sigma, sigma_size, d):
    """1 - (1/C) / (1 - |Sigma|/d)."""
    if sigma_size >= d:
        raise ValueError("|Sigma| must be < d")
    if c_sigma < 1:
        raise ValueError("an annihilation constant is at least 1")
    return 1.0 - (1.0 / c_sigma) / (1.0 - sigma_size / d)


@dataclass(frozen=True)
class RvConfig:
    eta: float
    t: float
    s: int
    trials: int
    seed: int
    k: float | None = None  # average |Omega|; d/2 when omitted

    def __post_init__(self):
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")
        if not self.t > 1:
            raise ValueError("t must exceed 1")
        if self.s < 0 or self.trials < 1:
            raise ValueError("need s >= 0 and trials >= 1")


def rv_experiment(config, phi, psi, forced_full_trial=None):
    """Empirical check of the random-support annihilation inequality.

    Per trial: Omega from the average-cardinality model, S uniform of size s,
    a uniform on the sphere.  Records violations of
    ||a|| <= (1 + sqrt(d/(eta |Omega|))) (||a||_{l2(phi,S^c)} + ||a||_{l2(psi,Omega)})
    and of the same with constant 2/sqrt(eta), for the random a and for the
    worst-case a (smallest eigenvector of the tail form).
    """
    d = phi.dim
    if psi.dim != d:
        raise DimensionError("bases must share a dimension")
    k = d / 2 if config.k is None else config.k
    model = RandomSetModel(d, k, config.seed)
    rows = []
    for trial in range(config.trials):
        if forced_full_trial is not None and trial == forced_full_trial:
            omega = SupportSet.full(d)
        else:
            omega = random_subset_avg_card(model, trial)
        r = rngmod.stream(config.seed, trial, "rv-trial")
        S = SupportSet.of(r.choice(d, size=min(config.s, d), replace=False), d)
        a = rngmod.unit_vector(r, d)
        # tail in psi is measured on Omega, so the excluded set is Omega^c
        Sigma = omega.complement()
        t1, t2 = tail_norms(a, phi, psi, S, Sigma)
        m = len(omega)
        c_rv = math.inf if m == 0 else 1.0 + math.sqrt(d / (config.eta * m))
        c_rv2 = 2.0 / math.sqrt(config.eta)
        lam, v = minimizing_vector(phi, psi, S, Sigma)
        w1, w2 = tail_norms(v, phi, psi, S, Sigma)
        rows.append(
            {
                "trial": trial,
                "omega_size": m,
                "s": len(S),
                "constant": c_rv,
                "violated": bool(1.0 > c_rv * (float(t1) + float(t2)) + 1e-12),
                "violated_rv2": bool(1.0 > c_rv2 * (float(t1) + float(t2)) + 1e-12),
                "worst_violated": bool(1.0 > c_rv * (float(w1) + float(w2)) + 1e-12),
                "certified": bool(c_rv * math.sqrt(lam) >= 1.0),
            }
        )
    sizes = np.array([row["omega_size"] for row in rows], dtype=float)
    band = math.sqrt(config.t * k)
    n = len(rows)
    return {
        "label": "empirical",
        "d": d,
        "k": k,
        "eta": config.eta,
        "t": config.t,
        "s": config.s,
        "trials": n,
        "seed": config.seed,
        "violation_rate": sum(r["violated"] for r in rows) / n,
        "violation_rate_rv2": sum(r["violated_rv2"] for r in rows) / n,
        "worst_case_violation_rate": sum(r["worst_violated"] for r in rows) / n,
        "certified_rate": sum(r["certified"] for r in rows) / n,
        "omega_mean": float(sizes.mean()),
        "omega_std": float(sizes.std()),
        "omega_in_band_rate": float(np.mean(np.abs(sizes - k) <= band)),
        "rows": rows,
    }


def bt_matrix(phi, psi, S, omega):
    """n x n matrix with column k equal to sqrt(d/n) (<Phi_{j_k}, Psi_{w_l}>)_l."""
    d = phi.dim
    n = len(S)
    if n != len(omega):
        raise ValueError(f"|S| = {n} must equal |Omega| = {len(omega)}")
    if n == 0:
        raise ValueError("S must be nonempty")
    Phi = phi.columns[:, list(S)]
    Psi = psi.columns[:, list(omega)]
    return math.sqrt(d / n) * (Psi.conj().T @ Phi)


def _gram_min(T, cols):
    if not cols:
        return math.inf
    A = T[:, list(cols)]
    return float(np.linalg.eigvalsh(A.conj().T @ A)[0])


@dataclass
class BtResult:
    sigma: SupportSet
    lambda_min_gram: float
    column_norm_error: float
    mode: str
    guaranteed_size: int
    local: tuple = field(default=())

    def to_dict(self):
        return {
            "sigma": list(self.sigma.indices),
            "lambda_min_gram": self.lambda_min_gram,
            "column_norm_error": self.column_norm_error,
            "mode": self.mode,
            "guaranteed_size": self.guaranteed_size,
        }


def bt_restricted_invertibility(phi, psi, S, omega, mode="auto", floor=BT_GRAM_FLOOR):
    """Select sigma in S whose columns of the BT matrix have Gram lambda_min >= floor.

    Greedy adds, at each step, the column that keeps the smallest Gram
    eigenvalue largest (ties to the lowest index).  For n <= 12 the
    exhaustive mode returns a largest admissible subset.
    """
    d = phi.dim
    S = S if isinstance(S, SupportSet) else SupportSet.of(S, d)
    omega = omega if isinstance(omega, SupportSet) else SupportSet.of(omega, d)
    T = bt_matrix(phi, psi, S, omega)
    n = T.shape[1]
    col_err = float(np.max(np.abs(np.linalg.norm(T, axis=0) - 1.0)))
    if mode == "auto":
        mode = "exhaustive" if n <= 12 else "greedy"
    chosen = []
    if mode == "greedy":
        while len(chosen) < n:
            best, best_val = None, -math.inf
            for k in range(n):
                if k in chosen:
                    continue
                val = _gram_min(T, chosen + [k])
                if val > best_val + 1e-15:
                    best, best_val = k, val
            if best is None or best_val < floor:
                break
            chosen.append(best)
    elif mode == "exhaustive":
        if n > 12:
            raise ValueError("exhaustive mode is limited to n <= 12")
        for size in range(n, 0, -1):
            found = None
            for cols in combinations(range(n), size):
                if _gram_min(T, cols) >= floor:
                    found = list(cols)
                    break
            if found:
                chosen = found
                break
    else:
        raise ValueError(f"unknown mode {mode!r}")
    chosen.sort()
    sigma = SupportSet(tuple(S.indices[k] for k in chosen), d)
    guaranteed = math.ceil(n * n / (240 * d))
    return BtResult(sigma, _gram_min(T, chosen) if chosen else 0.0, col_err, mode, guaranteed, tuple(chosen))


def bt_certificate(phi, psi, sigma, omega, vectors):
    """Min slack of ||a|| <= 13/sqrt(1 - |Sigma|/d) (tails outside sigma and Sigma = Omega^c)."""
    d = phi.dim
    Sigma = omega.complement()
    c = 13.0 / math.sqrt(1.0 - len(Sigma) / d)
    t1, t2 = tail_norms(vectors, phi, psi, sigma, Sigma)
    norms = np.linalg.norm(vectors, axis=-1)
    return float(np.min(c * (t1 + t2) - norms)), c


def bt_worst_case(phi, psi, sigma, omega):
    """Bracket of the optimal constant for (sigma, Omega^c)."""
    return exact_constant_bracket(phi, psi, sigma, omega.complement())


def unbiased(phi, psi, tol=1e-10):
    return abs(coherence(phi, psi) - 1.0 / math.sqrt(phi.dim)) < tol

"""Complex l1 minimization under affine constraints, and the Gabor-frame recovery harness.

The solver is Douglas-Rachford splitting between the l1 norm (complex
soft-thresholding) and the indicator of the affine constraint set
(projection through a precomputed SVD of the constraint matrix).
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import groups, kernels
from . import rng as rngmod
from .errors import InfeasibleError, NotConvergedError
from .stft import gabor_frame, frame_coefficients, require_unit_window

CHECKPOINT_EVERY = 100


@dataclass(frozen=True)
class SolverOptions:
    max_iter: int = 50_000
    step: float = 1.0  # threshold scale relative to the data magnitude
    relax: float = 1.0
    feas_tol: float = 1e-8
    obj_tol: float = 1e-6
    restarts: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.max_iter < 1 or self.restarts < 1:
            raise ValueError("max_iter and restarts must be positive")
        if not (self.step > 0 and self.feas_tol > 0 and self.obj_tol > 0):
            raise ValueError("step and tolerances must be positive")
        if not 0 < self.relax < 2:
            raise ValueError("relaxation must lie in (0, 2)")


class AffineSet:
    """{x : A x = y}, with projection through a rank-revealing SVD of A."""

    def __init__(self, A, y, rank_tol=1e-10, feas_tol=1e-8):
        A = np.asarray(A, dtype=np.complex128)
        y = np.asarray(y, dtype=np.complex128)
        if A.ndim != 2 or y.shape != (A.shape[0],):
            raise ValueError(f"shape mismatch: A {A.shape}, y {y.shape}")
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
        r = int(np.sum(s > rank_tol * max(1.0, s[0] if s.size else 1.0)))
        self.A, self.y = A, y
        self.U, self.s, self.Vh = U[:, :r], s[:r], Vh[:r]
        in_range = self.U @ (self.U.conj().T @ y)
        gap = float(np.linalg.norm(in_range - y))
        if gap > feas_tol * max(1.0, float(np.linalg.norm(y))):
            raise InfeasibleError(f"measurements are {gap:.3e} away from the range of A")
        self.x0 = self.Vh.conj().T @ ((self.U.conj().T @ y) / self.s)

    @property
    def rank(self):
        return self.s.size

    def project(self, v):
        # x0 + (I - V V^H)(v - x0); x0 lies in the row space
        return v - self.Vh.conj().T @ (self.Vh @ v) + self.x0

    def residual(self, x):
        return float(np.linalg.norm(self.A @ x - self.y))


@dataclass
class BpResult:
    x: np.ndarray
    objective: float
    residual: float
    fixed_point_residual: float
    iterations: int
    converged: bool
    monotone: bool
    checkpoints: list = field(default_factory=list)
    restart_objectives: list = field(default_factory=list)


def douglas_rachford(project, n, scale, opts, z0):
    """min ||x||_1 subject to x = project(x).  Returns (x, iterations, residual, checkpoints)."""
    gamma = opts.step * scale
    z = z0.astype(np.complex128, copy=True)
    tol = opts.feas_tol
    checkpoints = []
    res = math.inf
    for it in range(1, opts.max_iter + 1):
        x = project(z)
        u = kernels.soft_threshold(2.0 * x - z, gamma)
        step = u - x
        z = z + opts.relax * step
        res = float(np.linalg.norm(step))
        if it % CHECKPOINT_EVERY == 0:
            checkpoints.append(res)
        if res <= tol * max(scale, 1e-300):
            return project(z), it, res, checkpoints, True
    return project(z), opts.max_iter, res, checkpoints, False


def _is_monotone(checkpoints):
    return all(b <= a * (1 + 1e-9) + 1e-300 for a, b in zip(checkpoints, checkpoints[1:]))


def _solve(project, residual_fn, n, scale, opts, tag):
    best = None
    objectives = []
    for restart in range(opts.restarts):
        r = rngmod.stream(opts.seed, restart, tag)
        z0 = scale * rngmod.complex_gaussian(r, n) / math.sqrt(2 * n)
        x, its, res, cps, ok = douglas_rachford(project, n, scale, opts, z0)
        obj = float(np.sum(np.abs(x)))
        objectives.append(obj)
        cand = BpResult(x, obj, residual_fn(x), res, its, ok, _is_monotone(cps), cps)
        if not ok:
            raise NotConvergedError(
                f"no convergence after {its} iterations (fixed-point residual {res:.3e})",
                {"fixed_point": res, "feasibility": cand.residual, "checkpoints": cps},
            )
        if best is None or obj < best.objective:
            best = cand
    best.restart_objectives = objectives
    return best


def basis_pursuit_synthesis(A, y, opts=None):
    """argmin ||x||_1 subject to A x = y (complex)."""
    opts = opts or SolverOptions()
    aff = AffineSet(A, y, feas_tol=opts.feas_tol)
    n = aff.A.shape[1]
    ynorm = float(np.linalg.norm(aff.y))
    if ynorm == 0.0:
        x = np.zeros(n, dtype=np.complex128)
        return BpResult(x, 0.0, 0.0, 0.0, 0, True, True, [], [0.0])
    scale = float(np.linalg.norm(aff.x0)) / math.sqrt(n)
    return _solve(aff.project, aff.residual, n, scale, opts, "bp-init")


def analysis_l1_recover(frame, omega_tilde, values, opts=None):
    """argmin sum_j |<f, e_j>| subject to <f, e_j> = values for j in omega_tilde.

    ``frame`` holds the vectors e_j as rows and must be tight with bound d.
    Solved in coefficient space: the constraint set is {E f : (E f)_Omega = values}.
    """
    opts = opts or SolverOptions()
    frame = np.asarray(frame, dtype=np.complex128)
    m, d = frame.shape
    E = frame.conj()  # analysis operator: (E f)_j = <f, e_j>
    idx = np.asarray(sorted(omega_tilde), dtype=np.int_)
    aff = AffineSet(E[idx], values, feas_tol=opts.feas_tol)

    def project(v):
        z = aff.project(E.conj().T @ v / d)
        return E @ z

    def residual(c):
        return aff.residual(E.conj().T @ c / d)

    scale = max(float(np.linalg.norm(values)) / math.sqrt(max(len(idx), 1)), 1e-12)
    res = _solve(project, residual, m, scale, opts, "gabor-init")
    return E.conj().T @ res.x / d, res


def frame_lower_bound(frame, omega_tilde, probes=None):
    """delta with delta d ||f||^2 <= sum_{j in Omega~} |<f, e_j>|^2.

    Exact value from the restricted frame operator, plus the empirical
    minimum over the given probe vectors (an upper estimate of the exact one).
    """
    frame = np.asarray(frame, dtype=np.complex128)
    d = frame.shape[1]
    rows = frame[sorted(omega_tilde)]
    exact = float(np.linalg.eigvalsh(rows.T @ rows.conj())[0]) / d
    probe = None
    if probes is not None:
        coeffs = probes @ rows.conj().T
        energy = np.sum(np.abs(coeffs) ** 2, axis=1) / np.sum(np.abs(probes) ** 2, axis=1)
        probe = float(energy.min()) / d
    return max(exact, 0.0), probe


def tf_index_set(spec, S=(), omega=()):
    """Frame indices (x outer, xi inner) of {pi(x, xi) g : x not in S, xi in Omega}."""
    n = spec.cardinality
    S = set(S)
    return sorted(x * n + xi for x in range(n) if x not in S for xi in omega)


def problem41_experiment(spec, g, omega_tilde, trials, opts=None, seed=0, threshold=1e-4, probes=50):
    """Exploratory harness: recover random f from the frame coefficients on Omega~ by l1 minimization."""
    opts = opts or SolverOptions(seed=seed)
    g = groups.as_signal(spec, g)
    require_unit_window(g)
    frame = gabor_frame(spec, g)
    d = spec.cardinality
    omega_tilde = sorted(set(int(j) for j in omega_tilde))
    pr = rngmod.unit_vectors(rngmod.stream(seed, 0, "p41-probes"), probes, d)
    delta_exact, delta_probe = frame_lower_bound(frame, omega_tilde, pr)
    rows = []
    for trial in range(trials):
        r = rngmod.stream(seed, trial, "p41-signal")
        f = rngmod.complex_gaussian(r, d)
        b = frame_coefficients(frame, f)[omega_tilde]
        trial_opts = SolverOptions(
            max_iter=opts.max_iter, step=opts.step, relax=opts.relax, feas_tol=opts.feas_tol,
            obj_tol=opts.obj_tol, restarts=opts.restarts, seed=seed * 1_000_003 + trial,
        )
        try:
            fhat, res = analysis_l1_recover(frame, omega_tilde, b, trial_opts)
            rows.append(
                {
                    "trial": trial,
                    "residual": res.residual,
                    "l1_objective": res.objective,
                    "rel_error": float(np.linalg.norm(fhat - f) / np.linalg.norm(f)),
                    "converged": True,
                }
            )
        except NotConvergedError as exc:
            rows.append(
                {
                    "trial": trial,
                    "residual": exc.residuals["feasibility"],
                    "l1_objective": math.nan,
                    "rel_error": math.nan,
                    "converged": False,
                }
            )
    ok = [r for r in rows if r["converged"] and r["rel_error"] < threshold]
    return {
        "label": "exploratory",
        "group": str(spec),
        "d": d,
        "omega_tilde_size": len(omega_tilde),
        "delta_exact": delta_exact,
        "delta_probe": delta_probe,
        "trials": trials,
        "seed": seed,
        "threshold": threshold,
        "success_fraction": len(ok) / trials if trials else 0.0,
        "rows": rows,
    }


def compressed_sensing_trial(d, sparsity, measurements, seed, trial, opts=None):
    """One standard/Fourier recovery run: sparse x, random DFT rows, basis pursuit."""
    r = rngmod.stream(seed, trial, "cs-trial")
    support = r.choice(d, size=sparsity, replace=False)
    x = np.zeros(d, dtype=np.complex128)
    x[support] = rngmod.complex_gaussian(r, sparsity)
    rows = np.sort(r.choice(d, size=measurements, replace=False))
    F = np.exp(-2j * np.pi * np.outer(np.arange(d), np.arange(d)) / d) / math.sqrt(d)
    A = F[rows]
    y = A @ x
    base = opts or SolverOptions()
    o = SolverOptions(
        max_iter=base.max_iter, step=base.step, relax=base.relax, feas_tol=base.feas_tol,
        obj_tol=base.obj_tol, restarts=base.restarts, seed=seed * 1_000_003 + trial,
    )
    try:
        res = basis_pursuit_synthesis(A, y, o)
    except NotConvergedError as exc:
        return {"trial": trial, "residual": exc.residuals["feasibility"], "l1_objective": math.nan,
                "rel_error": math.nan, "converged": False, "true_l1": float(np.abs(x).sum())}
    return {
        "trial": trial,
        "residual": res.residual,
        "l1_objective": res.objective,
        "rel_error": float(np.linalg.norm(res.x - x) / np.linalg.norm(x)),
        "converged": True,
        "true_l1": float(np.abs(x).sum()),
    }

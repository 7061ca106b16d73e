"""Property suites over a list of groups, aggregated into one report."""
import math

import numpy as np

from . import annihilation as an
from . import bases, ensembles, groups, recovery, stft
from . import rng as rngmod

DEFAULT_GROUPS = ("2", "3", "4", "5", "6", "7", "8", "2x2", "2x3", "2x4", "3x3")
TOL = {
    "unitarity": 1e-12,
    "round_trip": 1e-12,
    "bilinearity": 1e-14,
    "fast_path": 1e-12,
    "dual_of_dual": 1e-9,
    "riesz_sandwich": 1e-10,
    "stft": 1e-10,
    "energy": 1e-10,
    "inversion": 1e-10,
    "symmetry_lemma": 1e-10,
    "covariance": 1e-10,
    "fundstft": 1e-10,
}


class _Suite:
    def __init__(self, name, tol):
        self.name, self.tol = name, tol
        self.max_dev = 0.0
        self.cases = 0
        self.failures = 0

    def record(self, deviation, ok=None):
        deviation = float(deviation)
        self.cases += 1
        self.max_dev = max(self.max_dev, deviation) if not math.isnan(deviation) else math.inf
        if ok is None:
            ok = deviation <= (self.tol or 0.0)
        if not ok:
            self.failures += 1

    def result(self):
        return {
            "name": self.name,
            "passed": self.failures == 0,
            "cases": self.cases,
            "failures": self.failures,
            "max_deviation": self.max_dev,
            "tolerance": self.tol,
        }


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _group_suites(spec, seed, draws, S):
    n = spec.cardinality
    r = rngmod.stream(seed, n, f"verify-group-{spec}")
    els = spec.elements()
    for _ in range(draws):
        f = rngmod.complex_gaussian(r, n)
        fh = groups.dft(spec, f)
        S("unitarity").record(_rel(np.linalg.norm(fh), np.linalg.norm(f)))
        S("round_trip").record(
            max(
                np.linalg.norm(groups.idft(spec, fh) - f) / np.linalg.norm(f),
                np.linalg.norm(groups.dft(spec, groups.idft(spec, f)) - f) / np.linalg.norm(f),
            )
        )
        if n <= 256:
            S("fast_path").record(np.max(np.abs(groups.dft(spec, f, fast=True) - fh)) / np.linalg.norm(f))
        xi, eta, x, y = (els[i] for i in r.integers(n, size=4))
        S("bilinearity").record(
            max(
                abs(groups.character(spec, spec.add(xi, eta), x)
                    - groups.character(spec, xi, x) * groups.character(spec, eta, x)),
                abs(groups.character(spec, xi, spec.add(x, y))
                    - groups.character(spec, xi, x) * groups.character(spec, xi, y)),
            )
        )


def _basis_suites(spec, seed, draws, S):
    n = spec.cardinality
    r = rngmod.stream(seed, n, f"verify-bases-{spec}")
    phi = bases.random_basis(n, r)
    dd = bases.dual_basis(bases.dual_basis(phi))
    S("dual_of_dual").record(np.max(np.abs(dd - phi.columns)))
    alpha, beta = phi.alpha, phi.beta
    A = rngmod.unit_vectors(r, 100, n)
    norms = np.linalg.norm(bases.analysis(A, phi), axis=1)
    S("riesz_sandwich").record(max(0.0, float(np.max(alpha - norms)), float(np.max(norms - beta))))
    for basis, expect in ((bases.fourier_basis(spec), True), (phi, False), (bases.standard_basis(n), True)):
        a, b = basis.alpha, basis.beta
        flag = basis.is_orthonormal
        consistent = flag == expect and (flag == (abs(a - 1) < 1e-10 and abs(b - 1) < 1e-10))
        S("orthonormal_detection").record(0.0 if consistent else 1.0)


def _random_supports(r, d, M, limit=0.9):
    smax = max(0, int(math.floor(limit**2 / M**2)))
    s = int(r.integers(0, min(smax, d) + 1))
    sig_max = d if s == 0 else int(math.floor(limit**2 / (M**2 * s)))
    sigma = int(r.integers(0, min(sig_max, d) + 1))
    Sset = an.SupportSet.of(r.choice(d, size=s, replace=False), d)
    Sig = an.SupportSet.of(r.choice(d, size=sigma, replace=False), d)
    return Sset, Sig


def _annihilation_suites(spec, seed, draws, S):
    n = spec.cardinality
    r = rngmod.stream(seed, n, f"verify-annihilation-{spec}")
    pairs = [(bases.standard_basis(n), bases.fourier_basis(spec))]
    pairs += [(bases.random_orthonormal_basis(n, r), bases.random_orthonormal_basis(n, r)) for _ in range(draws)]
    for phi, psi in pairs:
        M = bases.coherence(phi, psi)
        Sset, Sig = _random_supports(r, n, M)
        A = rngmod.unit_vectors(r, 200, n)
        t1, t2 = an.tail_norms(A, phi, psi, Sset, Sig)
        C = an.theorem_a_constant(M, len(Sset), len(Sig))
        if C is not None:
            S("strong_pair_certificate").record(max(0.0, float(np.max(1.0 - C * (t1 + t2)))), None)
        op, hs, bound = an.norms_chain(phi, psi, Sset, Sig)
        S("cs2_chain").record(max(0.0, op - hs, hs - bound), op <= hs + 1e-9 and hs <= bound + 1e-9)
        R = an.refined_constant(phi, psi, Sset, Sig)
        if R is not None and C is not None:
            S("refinement_order").record(max(0.0, R - C), R <= C + 1e-9)
        lo, hi, lam = an.exact_constant_bracket(phi, psi, Sset, Sig)
        if math.isfinite(hi):
            slack_hi = float(np.max(1.0 - hi * (t1 + t2)))
            _, v = an.minimizing_vector(phi, psi, Sset, Sig)
            w1, w2 = an.tail_norms(v, phi, psi, Sset, Sig)
            witness = (lo / 1.0001) * (float(w1) + float(w2)) < 1.0
            S("bracket_validity").record(max(0.0, slack_hi), slack_hi <= 1e-9 and witness)
        pb, _ = an.elad_bruckstein_bound(phi, psi)
        worst = 0.0
        ok = True
        for a in A[:50]:
            _, c1 = an.support_l0(a, phi)
            _, c2 = an.support_l0(a, psi)
            ok &= c1 * c2 >= pb * (1 - 1e-12)
            worst = max(worst, pb - c1 * c2)
        S("elad_bruckstein").record(max(0.0, worst), ok)
    if spec.is_cyclic and n >= 2 and all(n % p for p in range(2, int(math.isqrt(n)) + 1)):
        lam, count, _ = an.tao_exhaustive(n)
        S("tao_prime").record(0.0 if lam > 1e-10 else 1.0, lam > 1e-10)


def _stft_suites(spec, seed, draws, S):
    n = spec.cardinality
    r = rngmod.stream(seed, n, f"verify-stft-{spec}")
    els = spec.elements()
    for _ in range(draws):
        f, g, h, k = (rngmod.complex_gaussian(r, n) for _ in range(4))
        V = stft.stft(spec, f, g)
        S("energy").record(abs(np.linalg.norm(V) - np.linalg.norm(f) * np.linalg.norm(g)))
        S("inversion").record(np.max(np.abs(stft.stft_inverse(spec, V, g) - f)))
        S("symmetry_lemma").record(stft.symmetry_lemma_check(spec, f, g, h, k))
        a, u, b, v = (els[i] for i in r.integers(n, size=4))
        S("covariance").record(stft.covariance_check(spec, f, g, a, u, b, v))
        S("fundstft").record(stft.fundstft_check(spec, f, g))
        gu = g / np.linalg.norm(g)
        size = int(r.integers(0, n))
        pts = r.choice(n * n, size=size, replace=False)
        sigma = stft.TFSupport(spec, frozenset((int(p) // n, int(p) % n) for p in pts))
        tail = stft.tf_tail_energy(stft.stft(spec, f, gu), sigma)
        fn2 = float(np.vdot(f, f).real)
        c_sq = stft.stft_up_constant(size, n, "squared")
        c_nm = stft.stft_up_constant(size, n, "norm")
        slack = max(fn2 - c_sq * tail, math.sqrt(fn2) - c_nm * math.sqrt(tail))
        S("stft_uncertainty").record(max(0.0, slack), slack <= 1e-9)
        zero = np.zeros(n, dtype=complex)
        S("nonvanishing").record(
            float(np.max(np.abs(stft.stft(spec, zero, g)))),
            np.max(np.abs(V)) > 0 and np.max(np.abs(stft.stft(spec, zero, g))) == 0,
        )


def _ensemble_suites(spec, seed, draws, S):
    n = spec.cardinality
    r = rngmod.stream(seed, n, f"verify-ensembles-{spec}")
    T = bases.fourier_basis(spec).columns.conj().T  # unitary DFT matrix of the group
    s = min(2, n)
    omega = an.SupportSet.of(r.choice(n, size=max(1, n // 2), replace=False), n)
    rep = ensembles.rip_constant(T, omega, s, "exhaustive")
    ok = True
    from itertools import combinations

    supports = list(combinations(range(n), s))
    for i in r.choice(len(supports), size=min(20, len(supports)), replace=False):
        ok &= ensembles.rip_two_sided_holds(T, omega, supports[int(i)], rep.delta_s)
    S("uup_two_sided").record(0.0 if ok else 1.0, ok)
    grid = np.linspace(0.0, 0.9, 10)
    m = max(1, n // 2)
    comp = [ensembles.annihilation_to_uup(ensembles.uup_to_annihilation(dl, m, n), n - m, n) for dl in grid]
    mono = all(b >= a for a, b in zip(comp, comp[1:])) and all(c < 1 for c in comp)
    S("conversion_monotone").record(0.0 if mono else 1.0, mono)
    phi, psi = bases.standard_basis(n), bases.fourier_basis(spec)
    k = max(1, n // 2)
    Sset = an.SupportSet.of(r.choice(n, size=k, replace=False), n)
    Om = an.SupportSet.of(r.choice(n, size=k, replace=False), n)
    res = ensembles.bt_restricted_invertibility(phi, psi, Sset, Om)
    S("bt_column_norms").record(res.column_norm_error, res.column_norm_error <= 1e-10)
    model = ensembles.RandomSetModel(n, n / 2, seed)
    same = ensembles.random_subset_avg_card(model, 3) == ensembles.random_subset_avg_card(model, 3)
    S("determinism").record(0.0 if same else 1.0, same)


def _recovery_suites(spec, seed, draws, S):
    n = spec.cardinality
    if n < 4:
        return
    opts = recovery.SolverOptions(seed=seed)
    for trial in range(max(1, draws // 2)):
        row = recovery.compressed_sensing_trial(n, 1, max(2, n // 2 + 1), seed, trial, opts)
        S("bp_feasibility").record(row["residual"], row["converged"] and row["residual"] <= 1e-8)
        S("bp_objective").record(
            max(0.0, row["l1_objective"] - row["true_l1"]),
            row["converged"] and row["l1_objective"] <= row["true_l1"] + 1e-6,
        )
    r = rngmod.stream(seed, n, f"verify-recovery-{spec}")
    A = rngmod.complex_gaussian(r, max(2, n // 2), n)
    x = np.zeros(n, dtype=complex)
    x[0] = 1.0
    r1 = recovery.basis_pursuit_synthesis(A, A @ x, opts)
    r2 = recovery.basis_pursuit_synthesis(A, A @ x, opts)
    S("bp_monotone_residual").record(0.0 if r1.monotone else 1.0, r1.monotone)
    same = np.array_equal(r1.x, r2.x)
    S("bp_determinism").record(0.0 if same else 1.0, same)


SUITES = (_group_suites, _basis_suites, _annihilation_suites, _stft_suites, _ensemble_suites, _recovery_suites)


def verify_all(seed=1, group_list=None, draws=5):
    """Run every property suite on every group; returns the aggregated report dict."""
    group_list = DEFAULT_GROUPS if group_list is None else group_list
    specs = [g if isinstance(g, groups.GroupSpec) else groups.GroupSpec.parse(g) for g in group_list]
    suites = {}

    def S(name):
        if name not in suites:
            suites[name] = _Suite(name, TOL.get(name))
        return suites[name]

    for spec in specs:
        for run in SUITES:
            run(spec, seed, draws, S)
    results = [suites[k].result() for k in sorted(suites)]
    return {
        "seed": seed,
        "groups": [str(s) for s in specs],
        "draws": draws,
        "passed": all(r["passed"] for r in results),
        "suites": results,
    }


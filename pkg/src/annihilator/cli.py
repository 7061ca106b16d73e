"""Command-line entry point: ``annihilator <subcommand> [options]``.

Exit status: 0 on success, 1 when a verification suite detects a violated
invariant, 2 on usage errors (bad arguments, malformed group, unwritable
output).
"""
import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__, annihilation as an, bases, ensembles, groups, recovery, stft, verify
from . import rng as rngmod
from .errors import GroupSpecError
from .parallel import ordered_map


class UsageError(Exception):
    pass


def _group(text):
    try:
        return groups.GroupSpec.parse(text)
    except GroupSpecError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _index_list(text):
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _clean(obj):
    """JSON-safe copy: numpy scalars unwrapped, NaN/inf mapped to null/strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, groups.GroupSpec):
        return str(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def _config_echo(args):
    skip = {"func", "output", "record_timing"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = v
    return out


# ---------------------------------------------------------------- commands


def cmd_verify(args):
    glist = [str(g) for g in args.group] if args.group is not None else list(verify.DEFAULT_GROUPS)
    if args.no_groups:
        glist = []
    report = verify.verify_all(args.seed, glist, draws=args.draws)
    return report, None, 0 if report["passed"] else 1


def _pair(args, spec):
    n = spec.cardinality
    if args.pair == "fourier":
        return bases.standard_basis(n), bases.fourier_basis(spec)
    r = rngmod.stream(args.seed, 0, "cli-random-pair")
    return bases.random_orthonormal_basis(n, r), bases.random_orthonormal_basis(n, r)


def cmd_constants(args):
    spec = args.group
    n = spec.cardinality
    phi, psi = _pair(args, spec)
    try:
        S = an.SupportSet.of(args.S, n)
        Sigma = an.SupportSet.of(args.Sigma, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = an.annihilation_report(phi, psi, S, Sigma)
    out = rep.to_dict()
    out["S"] = list(S.indices)
    out["Sigma"] = list(Sigma.indices)
    out["group_sup_bound"] = an.group_sup_constant(n, len(S), len(Sigma)) if args.pair == "fourier" else None
    out["general_basis_bound"] = an.general_basis_constant(phi, psi, S, Sigma)
    _, v, t1, t2 = an.witness(phi, psi, S, Sigma)
    out["witness"] = [[float(z.real), float(z.imag)] for z in v]
    out["witness_tails"] = [t1, t2]
    rows = [{k: out[k] for k in rep.to_dict()}]
    return out, rows, 0


def _window(kind, spec, seed):
    n = spec.cardinality
    if kind == "delta":
        g = np.zeros(n, dtype=complex)
        g[0] = 1.0
        return g
    if kind == "random":
        return rngmod.unit_vector(rngmod.stream(seed, 0, "cli-window"), n)
    if kind == "gaussian":
        x = np.arange(n)
        g = np.exp(-np.pi * np.minimum(x, n - x) ** 2 / n).astype(complex)
        return g / np.linalg.norm(g)
    raise UsageError(f"unknown window {kind!r}")


def cmd_stft_up(args):
    spec = args.group
    n = spec.cardinality
    if not 0 <= args.Sigma_frac < 1:
        raise UsageError("--Sigma-frac must lie in [0, 1)")
    size = int(round(args.Sigma_frac * n))
    g = _window(args.window, spec, args.seed)
    bound = stft.stft_up_constant(size, n, "squared")

    def trial(i):
        r = rngmod.stream(args.seed, i, "cli-stft-up")
        f = rngmod.complex_gaussian(r, n)
        pts = r.choice(n * n, size=size, replace=False)
        sigma = stft.TFSupport(spec, frozenset((int(p) // n, int(p) % n) for p in pts))
        tail = stft.tf_tail_energy(stft.stft(spec, f, g), sigma)
        lhs = float(np.vdot(f, f).real)
        rhs = bound * tail
        return {"trial": i, "lhs": lhs, "rhs": rhs, "ratio": lhs / rhs, "bound": bound}

    rows = ordered_map(trial, range(args.trials))
    summary = {
        "group": str(spec),
        "sigma_size": size,
        "bound": bound,
        "norm_bound": stft.stft_up_constant(size, n, "norm"),
        "max_ratio": max(r["ratio"] for r in rows),
        "violations": sum(r["ratio"] > 1 + 1e-9 for r in rows),
        "rows": rows,
    }
    return summary, rows, 0


def cmd_rip(args):
    spec = args.group
    n = spec.cardinality
    T = bases.fourier_basis(spec).columns.conj().T
    try:
        rep = ensembles.rip_constant(T, args.omega, args.s, args.mode, trials=args.trials, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = rep.to_dict()
    out["group"] = str(spec)
    out["omega"] = sorted(set(args.omega))
    if rep.delta_s < 1:
        out["annihilation_constant"] = ensembles.uup_to_annihilation(rep.delta_s, rep.omega_size, n)
    else:
        out["annihilation_constant"] = None
    return out, [rep.to_dict()], 0


def cmd_rv(args):
    d = args.d
    cfg = ensembles.RvConfig(eta=args.eta, t=args.t, s=args.s, trials=args.trials, seed=args.seed, k=args.k)
    phi, psi = bases.standard_basis(d), bases.fourier_basis(d)
    rep = ensembles.rv_experiment(cfg, phi, psi)
    return rep, rep["rows"], 0


def cmd_bt(args):
    d, n = args.d, args.n
    if not 1 <= n <= d:
        raise UsageError("need 1 <= n <= d")
    r = rngmod.stream(args.seed, 0, "cli-bt")
    S = an.SupportSet.of(r.choice(d, size=n, replace=False), d)
    omega = an.SupportSet.of(r.choice(d, size=n, replace=False), d)
    phi, psi = bases.standard_basis(d), bases.fourier_basis(d)
    res = ensembles.bt_restricted_invertibility(phi, psi, S, omega, mode=args.mode)
    vecs = rngmod.unit_vectors(rngmod.stream(args.seed, 1, "cli-bt-vectors"), 100, d)
    slack, c = ensembles.bt_certificate(phi, psi, res.sigma, omega, vecs)
    out = res.to_dict()
    out.update(
        d=d, n=n, S=list(S.indices), omega=list(omega.indices),
        certificate_constant=c, certificate_min_slack=slack,
        gram_floor=ensembles.BT_GRAM_FLOOR,
    )
    return out, [{"sigma_size": len(res.sigma), "lambda_min_gram": res.lambda_min_gram, "min_slack": slack}], 0


def cmd_recover(args):
    opts = recovery.SolverOptions(max_iter=args.max_iter)

    def trial(i):
        return recovery.compressed_sensing_trial(args.d, args.sparsity, args.measurements, args.seed, i, opts)

    rows = ordered_map(trial, range(args.trials))
    ok = sum(1 for r in rows if r["converged"] and r["rel_error"] < 1e-4)
    summary = {
        "d": args.d,
        "sparsity": args.sparsity,
        "measurements": args.measurements,
        "trials": args.trials,
        "successes": ok,
        "success_fraction": ok / args.trials,
        "rows": rows,
    }
    csv_rows = [{k: r[k] for k in ("trial", "residual", "l1_objective", "rel_error", "converged")} for r in rows]
    return summary, csv_rows, 0


def cmd_problem41(args):
    spec = args.group
    n = spec.cardinality
    if not 0 < args.omega_frac <= 1:
        raise UsageError("--omega-frac must lie in (0, 1]")
    g = _window(args.window, spec, args.seed)
    r = rngmod.stream(args.seed, 0, "cli-p41-omega")
    size = int(round(args.omega_frac * n * n))
    omega_tilde = sorted(int(j) for j in r.choice(n * n, size=size, replace=False))
    rep = recovery.problem41_experiment(spec, g, omega_tilde, args.trials, seed=args.seed)
    return rep, rep["rows"], 0


# ---------------------------------------------------------------- plumbing


def build_parser():
    p = argparse.ArgumentParser(prog="annihilator", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"annihilator {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, default_out="json"):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", choices=("json", "csv"), default=default_out)
        sp.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
        sp.add_argument("--record-timing", action="store_true", help="embed wall-clock duration in the report")

    sp = sub.add_parser("verify", help="run every identity/property suite")
    common(sp)
    sp.add_argument("--group", type=_group, action="append", help="group to test (repeatable)")
    sp.add_argument("--no-groups", action="store_true", help="run with an empty group list")
    sp.add_argument("--draws", type=int, default=5)
    sp.set_defaults(func=cmd_verify, seed=1)

    sp = sub.add_parser("constants", help="annihilation constants for a support pair")
    common(sp)
    sp.add_argument("--group", type=_group, required=True)
    sp.add_argument("--pair", choices=("fourier", "random"), default="fourier")
    sp.add_argument("--S", type=_index_list, default=[])
    sp.add_argument("--Sigma", type=_index_list, default=[])
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("stft-up", help="STFT uncertainty bound against random supports")
    common(sp, default_out="csv")
    sp.add_argument("--group", type=_group, required=True)
    sp.add_argument("--window", choices=("random", "delta", "gaussian"), default="random")
    sp.add_argument("--Sigma-frac", dest="Sigma_frac", type=float, default=0.5)
    sp.add_argument("--trials", type=int, default=100)
    sp.set_defaults(func=cmd_stft_up)

    sp = sub.add_parser("rip", help="restricted isometry constant of a row-restricted DFT")
    common(sp)
    sp.add_argument("--group", type=_group, required=True)
    sp.add_argument("--omega", type=_index_list, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    sp.add_argument("--trials", type=int, default=1000)
    sp.set_defaults(func=cmd_rip)

    sp = sub.add_parser("rv", help="random-support annihilation experiment")
    common(sp)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--eta", type=float, default=0.5)
    sp.add_argument("--t", type=float, default=2.0)
    sp.add_argument("--k", type=float, default=None)
    sp.add_argument("--trials", type=int, default=100)
    sp.set_defaults(func=cmd_rv)

    sp = sub.add_parser("bt", help="restricted invertibility subset selection")
    common(sp)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", choices=("auto", "greedy", "exhaustive"), default="auto")
    sp.set_defaults(func=cmd_bt)

    sp = sub.add_parser("recover", help="basis pursuit recovery from random DFT rows")
    common(sp)
    sp.add_argument("--d", type=int, default=32)
    sp.add_argument("--sparsity", type=int, default=2)
    sp.add_argument("--measurements", type=int, default=16)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--max-iter", dest="max_iter", type=int, default=50_000)
    sp.set_defaults(func=cmd_recover)

    sp = sub.add_parser("problem41", help="exploratory Gabor-frame l1 recovery harness")
    common(sp)
    sp.add_argument("--group", type=_group, required=True)
    sp.add_argument("--omega-frac", dest="omega_frac", type=float, default=0.75)
    sp.add_argument("--window", choices=("random", "delta", "gaussian"), default="random")
    sp.add_argument("--trials", type=int, default=50)
    sp.set_defaults(func=cmd_problem41)
    return p


def _render(report, rows, fmt):
    if fmt == "json":
        return json.dumps(_clean(report), sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    rows = rows if rows is not None else [
        {k: v for k, v in s.items()} for s in report.get("suites", [])
    ]
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _clean(v) for k, v in r.items()})
    return buf.getvalue()


def run(argv=None, stdout=None):
    """Parse, dispatch and write.  Returns the exit status."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        body, rows, status = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"annihilator: error: {exc}", file=sys.stderr)
        return 2
    report = {
        "tool": {"name": "annihilator", "version": __version__},
        "command": args.command,
        "config": _config_echo(args),
        "seed": args.seed,
    }
    report.update(body)
    if args.record_timing:
        report["duration_seconds"] = time.perf_counter() - start
    text = _render(report, rows, args.out)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            parser.print_usage(sys.stderr)
            print(f"annihilator: error: cannot write {args.output}: {exc}", file=sys.stderr)
            return 2
    else:
        stdout.write(text)
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

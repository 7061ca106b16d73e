"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the character-sum DFT, the STFT table and complex soft-thresholding on
each available backend (the per-factor FFT path is listed for the DFT as a
reference) and checks that the backends agree.
"""
import argparse
import timeit

import numpy as np

from annihilator import groups, kernels


def _time(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench(repeat):
    backends = kernels.available_backends()
    rng = np.random.default_rng(0)
    rows = []
    for text in ("16", "64", "8x8", "256", "4x8x8"):
        spec = groups.GroupSpec.parse(text)
        t = groups.tables(spec)
        f = rng.standard_normal(t.n) + 1j * rng.standard_normal(t.n)
        g = rng.standard_normal(t.n) + 1j * rng.standard_normal(t.n)
        ref = {}
        for name in backends:
            ref[name] = kernels.character_sum(f, t.phase, t.roots_fwd, impl=name)
            rows.append(("dft", text, name, _time(lambda: kernels.character_sum(f, t.phase, t.roots_fwd, impl=name), repeat)))
        rows.append(("dft", text, "numpy-fft", _time(lambda: groups.dft(spec, f, fast=True), repeat)))
        _agree(ref, f"dft {text}")
        if t.n <= 64:
            ref = {}
            for name in backends:
                ref[name] = kernels.stft_table(f, g, t.diff, t.phase, t.roots_fwd, impl=name)
                rows.append(
                    ("stft", text, name, _time(lambda: kernels.stft_table(f, g, t.diff, t.phase, t.roots_fwd, impl=name), repeat))
                )
            _agree(ref, f"stft {text}")
    for size in (256, 4096, 65536):
        z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        ref = {}
        for name in backends:
            ref[name] = kernels.soft_threshold(z, 0.5, impl=name)
            rows.append(("soft_threshold", str(size), name, _time(lambda: kernels.soft_threshold(z, 0.5, impl=name), repeat)))
        _agree(ref, f"soft_threshold {size}")
    return rows


def _agree(outputs, label):
    vals = list(outputs.values())
    for other in vals[1:]:
        if not np.allclose(vals[0], other, atol=1e-10):
            raise SystemExit(f"backends disagree on {label}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    rows = bench(args.repeat)
    print(f"active backend: {kernels.BACKEND}; available: {', '.join(sorted(kernels.available_backends()))}")
    print(f"{'kernel':<15}{'size':<8}{'backend':<11}{'time':>12}{'vs python':>11}")
    base = {(k, s): t for k, s, b, t in rows if b == "python"}
    for kernel, size, backend, t in rows:
        speed = base[(kernel, size)] / t
        print(f"{kernel:<15}{size:<8}{backend:<11}{t * 1e6:>10.1f}us{speed:>10.2f}x")


if __name__ == "__main__":
    main()

"""Reference kernels in numpy.

These define the semantics the compiled kernels in ``_ckernels.pyx`` must
reproduce.  ``roots[k]`` holds ``exp(+-2 pi i k / L)`` and ``phase`` holds the
integer exponents of the character table, so every character value is an
exact table lookup.
"""
import numpy as np

BACKEND = "python"


def character_sum(values, phase, roots):
    """out[r] = sum_c values[c] * roots[phase[r, c]]."""
    return roots[phase] @ values


def stft_table(f, g, diff, phase, roots):
    """out[x, xi] = sum_y f[y] * conj(g[diff[y, x]]) * roots[phase[xi, y]]."""
    windowed = f[None, :] * np.conj(g[diff.T])
    return windowed @ roots[phase].T


def soft_threshold(z, tau):
    """Complex shrinkage z * max(1 - tau / |z|, 0), phase preserved."""
    mag = np.abs(z)
    scale = np.maximum(1.0 - tau / np.where(mag > 0, mag, 1.0), 0.0)
    return z * np.where(mag > 0, scale, 0.0)

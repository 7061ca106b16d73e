"""Finite abelian groups as products of cyclic factors, and their Fourier transforms.

Elements of G and of its dual are coordinate tuples reduced modulo the
factor orders.  A dual element ``xi`` acts on ``x`` through
``<xi, x> = exp(2 pi i sum_j xi_j x_j / d_j)``.  Signals are complex vectors
indexed by the row-major (first factor slowest) enumeration of G.
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache
import itertools
import json
import math
import re

import numpy as np

from . import kernels
from .errors import DimensionError, GroupSpecError

_SPEC_RE = re.compile(r"^[1-9][0-9]*(x[1-9][0-9]*)*$")


@dataclass(frozen=True)
class GroupSpec:
    """Z_{d_1} x ... x Z_{d_k}."""

    orders: tuple

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        if not orders:
            raise GroupSpecError("a group needs at least one cyclic factor")
        if any(d < 1 for d in orders):
            raise GroupSpecError(f"factor orders must be >= 1, got {orders}")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def parse(cls, text):
        """Parse ``"4"`` or ``"2x3x5"``."""
        text = str(text).strip()
        if not _SPEC_RE.match(text):
            raise GroupSpecError(f"malformed group spec {text!r}; expected e.g. '8' or '2x3'")
        return cls(tuple(int(t) for t in text.split("x")))

    def __str__(self):
        return "x".join(str(d) for d in self.orders)

    @property
    def cardinality(self):
        return math.prod(self.orders)

    @property
    def rank(self):
        return len(self.orders)

    @property
    def exponent(self):
        """Least common multiple of the orders; all character phases live in (1/L)Z."""
        return math.lcm(*self.orders)

    @property
    def is_cyclic(self):
        return self.rank == 1

    def product(self, other):
        """The group self x other, with coordinates concatenated."""
        return GroupSpec(self.orders + other.orders)

    def element(self, index):
        return _tables(self).coords_tuple[index]

    def index(self, coords):
        coords = self.reduce(coords)
        idx = 0
        for c, d in zip(coords, self.orders):
            idx = idx * d + c
        return idx

    def reduce(self, coords):
        if isinstance(coords, (int, np.integer)):
            coords = (int(coords),)
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise DimensionError(
                f"element {coords} has {len(coords)} coordinates, group {self} has {self.rank}"
            )
        return tuple(c % d for c, d in zip(coords, self.orders))

    def elements(self):
        return list(_tables(self).coords_tuple)

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(self.reduce(x), self.reduce(y), self.orders))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(self.reduce(x), self.orders))

    def sub(self, x, y):
        return self.add(x, self.neg(y))


class _GroupTables:
    """Index tables for one group: coordinates, arithmetic, character phases."""

    def __init__(self, spec):
        self.spec = spec
        self.n = spec.cardinality
        self.coords_tuple = tuple(itertools.product(*(range(d) for d in spec.orders)))
        self.coords = np.array(self.coords_tuple, dtype=np.int_).reshape(self.n, spec.rank)
        self.L = spec.exponent

    @cached_property
    def strides(self):
        s = np.ones(self.spec.rank, dtype=np.int_)
        for j in range(self.spec.rank - 2, -1, -1):
            s[j] = s[j + 1] * self.spec.orders[j + 1]
        return s

    def _flat(self, coords):
        orders = np.array(self.spec.orders, dtype=np.int_)
        return (np.mod(coords, orders) * self.strides).sum(axis=-1)

    @cached_property
    def phase(self):
        """phase[xi, x] = L * (sum_j xi_j x_j / d_j) mod L."""
        weights = np.array([self.L // d for d in self.spec.orders], dtype=np.int_)
        p = (self.coords[:, None, :] * self.coords[None, :, :] * weights).sum(axis=-1)
        return np.ascontiguousarray(np.mod(p, self.L), dtype=np.int_)

    @cached_property
    def roots_fwd(self):
        return np.exp(-2j * np.pi * np.arange(self.L) / self.L)

    @cached_property
    def roots_inv(self):
        return np.exp(2j * np.pi * np.arange(self.L) / self.L)

    @cached_property
    def neg(self):
        return self._flat(-self.coords)

    @cached_property
    def add(self):
        """add[i, j] = index(e_i + e_j)."""
        return np.ascontiguousarray(self._flat(self.coords[:, None, :] + self.coords[None, :, :]))

    @cached_property
    def diff(self):
        """diff[i, j] = index(e_i - e_j)."""
        return np.ascontiguousarray(self._flat(self.coords[:, None, :] - self.coords[None, :, :]))

    @cached_property
    def character_table(self):
        """K[xi, x] = <xi, x>."""
        return self.roots_inv[self.phase]


@lru_cache(maxsize=64)
def _tables(spec):
    return _GroupTables(spec)


def tables(spec):
    return _tables(spec)


def as_signal(spec, f):
    f = np.asarray(f, dtype=np.complex128)
    if f.ndim != 1 or f.shape[0] != spec.cardinality:
        raise DimensionError(
            f"signal of shape {f.shape} does not match |G| = {spec.cardinality} for group {spec}"
        )
    return f


def character(spec, xi, x):
    """<xi, x> = exp(2 pi i sum_j xi_j x_j / d_j)."""
    xi = spec.reduce(xi)
    x = spec.reduce(x)
    L = spec.exponent
    k = sum(a * b * (L // d) for a, b, d in zip(xi, x, spec.orders)) % L
    return complex(np.exp(2j * np.pi * k / L))


def dft(spec, f, fast=False):
    """Unitary Fourier transform on G.

    fhat(xi) = |G|^{-1/2} sum_x f(x) conj(<xi, x>).  The default path is the
    direct character sum; ``fast=True`` uses a per-factor FFT.
    """
    f = as_signal(spec, f)
    if fast:
        return np.fft.fftn(f.reshape(spec.orders), norm="ortho").reshape(-1)
    t = _tables(spec)
    return kernels.character_sum(f, t.phase, t.roots_fwd) / math.sqrt(t.n)


def idft(spec, fhat, fast=False):
    """Inverse of :func:`dft`: f(x) = |G|^{-1/2} sum_xi fhat(xi) <xi, x>."""
    fhat = as_signal(spec, fhat)
    if fast:
        return np.fft.ifftn(fhat.reshape(spec.orders), norm="ortho").reshape(-1)
    t = _tables(spec)
    # the phase table is symmetric, so phase[x, xi] == phase[xi, x]
    return kernels.character_sum(fhat, t.phase, t.roots_inv) / math.sqrt(t.n)


def dft_naive(spec, f):
    """Literal double loop over characters; independent oracle for tests."""
    f = as_signal(spec, f)
    els = spec.elements()
    out = np.zeros(len(els), dtype=np.complex128)
    for i, xi in enumerate(els):
        out[i] = sum(f[j] * np.conj(character(spec, xi, x)) for j, x in enumerate(els))
    return out / math.sqrt(len(els))


def as_tfarray(spec, F):
    F = np.asarray(F, dtype=np.complex128)
    n = spec.cardinality
    if F.shape == (n * n,):
        F = F.reshape(n, n)
    if F.shape != (n, n):
        raise DimensionError(f"array of shape {F.shape} is not defined on G x Ghat for |G| = {n}")
    return F


def dft_product(spec, F):
    """Fourier transform on G x Ghat, output indexed (eta, u) in Ghat x G.

    Out(eta, u) = |G|^{-1} sum_{x, xi} F(x, xi) conj(<eta, x>) conj(<xi, u>),
    i.e. the ordinary transform of the product group with coordinates
    (x, xi).  This is the kernel under which the STFT symmetry identity holds
    at the point (-u, eta).
    """
    F = as_tfarray(spec, F)
    t = _tables(spec)
    K = t.roots_fwd[t.phase]
    return (K @ F @ K.T) / t.n


def parse_signal_json(text, spec=None):
    """Read a JSON array of [re, im] pairs."""
    data = json.loads(text)
    f = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    if spec is not None:
        as_signal(spec, f)
    return f


def signal_to_json(f):
    return json.dumps([[float(z.real), float(z.imag)] for z in np.asarray(f, dtype=complex)])

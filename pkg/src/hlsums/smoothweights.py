"""Smooth cutoff functions and their transforms.

All bumps are affine reparametrizations of one smooth step
s(t) = sig(t) / (sig(t) + sig(1-t)) with sig(t) = exp(-1/t) for t > 0,
which makes the symmetry identities (s(t) + s(1-t) = 1, the shift
partition of unity) exact by algebra rather than by tuning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict

import numpy as np


def _as_array(y):
    arr = np.atleast_1d(np.asarray(y, dtype=float))
    return arr, np.isscalar(y) or np.ndim(y) == 0


def _maybe_scalar(out, scalar: bool):
    return float(np.atleast_1d(out)[0]) if scalar else out


def smooth_step(t):
    """0 for t <= 0, 1 for t >= 1, smooth and increasing in between."""
    arr, scalar = _as_array(t)
    out = np.zeros_like(arr)
    out[arr >= 1.0] = 1.0
    mid = (arr > 0.0) & (arr < 1.0)
    tm = arr[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    out[mid] = a / (a + b)
    return _maybe_scalar(out, scalar)


def psi0(y):
    """1 for y >= 1, 0 for y <= 1/2, smooth monotone bridge between."""
    arr, scalar = _as_array(y)
    return _maybe_scalar(smooth_step(2.0 * arr - 1.0), scalar)


def f_beta1(y, beta1: float, big_x: float):
    """Plateau cutoff: 0 outside [X^-b1, 1-X^-b1], 1 on [2X^-b1, 1-2X^-b1]."""
    if beta1 <= 0 or big_x <= 1:
        raise ValueError("f_beta1 requires beta1 > 0 and X > 1")
    eps = big_x**-beta1
    if eps >= 0.25:
        raise ValueError("f_beta1 requires X^-beta1 < 1/4")
    arr, scalar = _as_array(y)
    rise = smooth_step((arr - eps) / eps)
    fall = smooth_step(((1.0 - eps) - arr) / eps)
    return _maybe_scalar(rise * fall, scalar)


def gamma0(y):
    """Even bump supported in [-1, 1] with gamma0(y) + gamma0(1-y) = 1."""
    arr, scalar = _as_array(y)
    return _maybe_scalar(1.0 - smooth_step(np.abs(arr)), scalar)


def phi0(x):
    """gamma0(log x): symmetric under x -> 1/x, supported in [1/e, e]."""
    arr, scalar = _as_array(x)
    if np.any(arr <= 0):
        raise ValueError("phi0 requires x > 0")
    return _maybe_scalar(gamma0(np.log(arr)), scalar)


@lru_cache(maxsize=32)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def _raw_eta0(tau):
    arr, scalar = _as_array(tau)
    out = np.zeros_like(arr)
    mid = (arr > 1.0) & (arr < 2.0)
    tm = arr[mid]
    out[mid] = np.exp(-1.0 / ((tm - 1.0) * (2.0 - tm)))
    return _maybe_scalar(out, scalar)


@lru_cache(maxsize=1)
def _eta0_mass() -> float:
    x, w = _leggauss(40)
    total = 0.0
    panels = 64
    for k in range(panels):
        a = 1.0 + k / panels
        b = a + 1.0 / panels
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        total += half * float(np.sum(w * _raw_eta0(mid + half * x)))
    return total


def eta0(tau):
    """Nonnegative smooth weight supported in [1, 2] with unit mass."""
    raw = _raw_eta0(tau)
    return raw / _eta0_mass()


def quad_smooth(fn, a: float, b: float, panels: int, order: int = 16):
    """Composite Gauss-Legendre quadrature of a (possibly complex) smooth fn."""
    if b <= a:
        return 0.0
    x, w = _leggauss(order)
    total = 0.0 + 0.0j
    width = (b - a) / panels
    for k in range(panels):
        lo = a + k * width
        mid = lo + 0.5 * width
        vals = fn(mid + 0.5 * width * x)
        total += 0.5 * width * np.sum(w * vals)
    return total


def mellin_phi0(s: complex, order: int = 16) -> complex:
    """Mellin transform of phi0 on the imaginary axis:
    integral of gamma0(u) * exp(s*u) over [-1, 1]."""
    s = complex(s)
    if abs(s.real) > 1e-12 * (1.0 + abs(s)):
        raise ValueError("mellin_phi0 is evaluated on the line Re s = 0")
    theta = s.imag
    panel_len = min(0.25, math.pi / (abs(theta) + 1.0))
    panels = max(8, math.ceil(2.0 / panel_len))
    val = quad_smooth(lambda u: gamma0(u) * np.exp(1j * theta * u), -1.0, 1.0, panels, order)
    return complex(val)


@dataclass(frozen=True)
class BumpSpec:
    """A named smooth weight; serializable for caching and CLI use.

    kinds: psi0, gamma0, phi0, eta0, f_beta1 (params beta1, X),
    dyadic (param C: bridges up on [C, 5C/4], 1 on [5C/4, 7C/4], down
    to 0 at 2C).
    """

    kind: str
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("psi0", "gamma0", "phi0", "eta0", "f_beta1", "dyadic"):
            raise ValueError(f"unknown bump kind {self.kind!r}")

    def __call__(self, y):
        if self.kind == "psi0":
            return psi0(y)
        if self.kind == "gamma0":
            return gamma0(y)
        if self.kind == "phi0":
            return phi0(y)
        if self.kind == "eta0":
            return eta0(y)
        if self.kind == "f_beta1":
            return f_beta1(y, self.params["beta1"], self.params["X"])
        big_c = self.params["C"]
        arr, scalar = _as_array(y)
        t = (arr - big_c) / big_c
        return _maybe_scalar(smooth_step(4.0 * t) * smooth_step(4.0 * (1.0 - t)), scalar)

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items()))))

    def __eq__(self, other):
        return (
            isinstance(other, BumpSpec)
            and self.kind == other.kind
            and sorted(self.params.items()) == sorted(other.params.items())
        )

"""The entropy constants of the C4-free counting bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

GOLDEN = (math.sqrt(5) - 1) / 2

# counting-exponent gain at p = 1/2: (3 - 2*sqrt(2)) / 6
C_HALF = (3 - 2 * math.sqrt(2)) / 6
# gain obtained through the certificate encoding at p = 1/2
C_CERTIFICATE = 1e-5


def binary_entropy(y):
    if y <= 0 or y >= 1:
        return 0.0
    return -y * math.log2(y) - (1 - y) * math.log2(1 - y)


def kw_profile(x):
    """``(2/3) H(x^2) / x``, the function maximised to get gamma."""
    return 2.0 / 3.0 * binary_entropy(x * x) / x


@dataclass(frozen=True)
class ConstantsReport:
    gamma: float
    c_star: float
    argmax_x: float


def golden_max(f, lo, hi, tol=1e-9):
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return (a + b) / 2


def slope_sign_changes(f, lo=1e-4, hi=1 - 1e-4, points=10_000):
    """Number of sign changes of the forward-difference slope of ``f`` on a grid."""
    h = (hi - lo) / (points - 1)
    xs = [lo + i * h for i in range(points)]
    ys = [f(x) for x in xs]
    signs = [1 if b > a else -1 for a, b in zip(ys, ys[1:]) if b != a]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


@lru_cache(maxsize=1)
def gamma_and_cstar():
    """Maximise ``(2/3) H(x^2)/x`` on (0, 1); the maximiser is c*."""
    x = golden_max(kw_profile, 1e-6, 1 - 1e-6, tol=1e-10)
    return ConstantsReport(gamma=kw_profile(x), c_star=x, argmax_x=x)

"""Pairs of integer binary quadratic forms.

Class numbers h(d1, d2, t) of pairs with given discriminants and
codiscriminant, computed by explicit orbit enumeration under the
simultaneous unimodular action; the divisor-character sum alpha_G; the
quadratic-reciprocity sign kappa with its complementary-divisor check;
and local profiles (E, G, R) of integer triples.

The orbit count is certified per instance: the enumeration box is
doubled and the count must be stable, otherwise the result is reported
as inconclusive rather than wrong.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arith import factorize, is_prime, jacobi, nu_p

FormTuple = Tuple[int, int, int]
PairTuple = Tuple[int, int, int, int, int, int]


@dataclass(frozen=True)
class QuadForm:
    """AX^2 + BXY + CY^2 with integer coefficients."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def astuple(self) -> FormTuple:
        return (self.a, self.b, self.c)


def codiscriminant(q1: QuadForm, q2: QuadForm) -> int:
    """B1*B2 - 2*A1*C2 - 2*A2*C1, invariant under simultaneous action."""
    return q1.b * q2.b - 2 * q1.a * q2.c - 2 * q2.a * q1.c


def act(tau: Tuple[int, int, int, int], q: QuadForm) -> QuadForm:
    """Substitute (X, Y) -> (aX + bY, cX + dY) for tau = (a, b, c, d)."""
    a, b, c, d = tau
    if a * d - b * c != 1:
        raise ValueError("act requires a determinant-one matrix")
    return QuadForm(
        q.a * a * a + q.b * a * c + q.c * c * c,
        2 * q.a * a * b + q.b * (a * d + b * c) + 2 * q.c * c * d,
        q.a * b * b + q.b * b * d + q.c * d * d,
    )


# ---------------------------------------------------------------------------
# class numbers by orbit enumeration


@dataclass(frozen=True)
class Budget:
    """Search budget: seed box, enlargement factor, and a node cap."""

    box: int
    growth: int = 4
    max_nodes: int = 4_000_000


@dataclass(frozen=True)
class ClassCount:
    value: Optional[int]
    status: str  # "ok" or "inconclusive"
    box: int


def default_budget(d1: int, d2: int, t: int) -> Budget:
    return Budget(box=max(32, 4 * max(abs(d1), abs(d2), abs(t))))


def forms_with_disc(d: int, box: int) -> np.ndarray:
    """All (A, B, C) with B^2 - 4AC = d and coefficients bounded by box."""
    rows = []
    bs = np.arange(-box, box + 1, dtype=np.int64)
    for a0 in range(-box, box + 1):
        if a0 == 0:
            continue
        num = bs * bs - d
        den = 4 * a0
        mask = num % den == 0
        cc = np.zeros_like(num)
        cc[mask] = num[mask] // den
        mask &= np.abs(cc) <= box
        if mask.any():
            sel = np.nonzero(mask)[0]
            block = np.empty((len(sel), 3), dtype=np.int64)
            block[:, 0] = a0
            block[:, 1] = bs[sel]
            block[:, 2] = cc[sel]
            rows.append(block)
    if d >= 0:
        r = math.isqrt(d)
        if r * r == d and r <= box:
            cs = np.arange(-box, box + 1, dtype=np.int64)
            for b0 in sorted({r, -r}):
                block = np.empty((len(cs), 3), dtype=np.int64)
                block[:, 0] = 0
                block[:, 1] = b0
                block[:, 2] = cs
                rows.append(block)
    if not rows:
        return np.empty((0, 3), dtype=np.int64)
    return np.concatenate(rows, axis=0)


def _pairs_with_codisc(f1: np.ndarray, f2: np.ndarray, t: int) -> List[PairTuple]:
    """All (Q1, Q2) from the two form lists with codiscriminant t."""
    out: List[PairTuple] = []
    if len(f1) == 0 or len(f2) == 0:
        return out
    a2, b2, c2 = f2[:, 0], f2[:, 1], f2[:, 2]
    chunk = max(1, 2**22 // max(len(f2), 1))
    for lo in range(0, len(f1), chunk):
        blk = f1[lo : lo + chunk]
        cod = (
            blk[:, 1, None] * b2[None, :]
            - 2 * blk[:, 0, None] * c2[None, :]
            - 2 * a2[None, :] * blk[:, 2, None]
        )
        ii, jj = np.nonzero(cod == t)
        for i, j in zip(ii, jj):
            r1 = blk[i]
            out.append((int(r1[0]), int(r1[1]), int(r1[2]), int(a2[j]), int(b2[j]), int(c2[j])))
    return out


def _neighbors(p: PairTuple) -> Tuple[PairTuple, PairTuple, PairTuple]:
    a1, b1, c1, a2, b2, c2 = p
    return (
        (c1, -b1, a1, c2, -b2, a2),  # X -> -Y, Y -> X
        (a1, 2 * a1 + b1, a1 + b1 + c1, a2, 2 * a2 + b2, a2 + b2 + c2),  # X -> X + Y
        (a1, b1 - 2 * a1, a1 - b1 + c1, a2, b2 - 2 * a2, a2 - b2 + c2),  # X -> X - Y
    )


def _census(d1: int, d2: int, t: int, box: int, growth: int, max_nodes: int):
    """Orbit count of box-bounded seed pairs, closures taken inside the
    enlarged box.  Returns (count, canonicals) or None on node exhaustion."""
    f1 = forms_with_disc(d1, box)
    f2 = f1 if d2 == d1 else forms_with_disc(d2, box)
    seeds = _pairs_with_codisc(f1, f2, t)
    limit = box * growth
    visited: set = set()
    canonicals: List[PairTuple] = []
    for seed in sorted(seeds):
        if seed in visited:
            continue
        comp_min = seed
        stack = [seed]
        visited.add(seed)
        while stack:
            cur = stack.pop()
            for nxt in _neighbors(cur):
                if nxt in visited:
                    continue
                if (
                    abs(nxt[0]) > limit
                    or abs(nxt[1]) > limit
                    or abs(nxt[2]) > limit
                    or abs(nxt[3]) > limit
                    or abs(nxt[4]) > limit
                    or abs(nxt[5]) > limit
                ):
                    continue
                visited.add(nxt)
                if len(visited) > max_nodes:
                    return None
                stack.append(nxt)
                if nxt < comp_min:
                    comp_min = nxt
        canonicals.append(comp_min)
    return len(canonicals), sorted(canonicals)


_census_memo: Dict[Tuple[int, int, int, int, int, int], Optional[int]] = {}


def _census_count(d1, d2, t, box, growth, max_nodes) -> Optional[int]:
    key = (d1, d2, t, box, growth, max_nodes)
    if key not in _census_memo:
        res = _census(d1, d2, t, box, growth, max_nodes)
        _census_memo[key] = None if res is None else res[0]
    return _census_memo[key]


def class_number(d1: int, d2: int, t: int, budget: Budget | None = None) -> ClassCount:
    """Number of equivalence classes of form pairs with discriminants
    (d1, d2) and codiscriminant t.

    Counts connected components of the seed set under the generator
    moves, then repeats with the seed box doubled; disagreement, or
    exhaustion of the node budget, yields an inconclusive result.
    """
    if t * t == d1 * d2:
        raise ValueError("class_number requires t^2 != d1*d2")
    if budget is None:
        budget = default_budget(d1, d2, t)
    h1 = _census_count(d1, d2, t, budget.box, budget.growth, budget.max_nodes)
    h2 = _census_count(d1, d2, t, 2 * budget.box, budget.growth, budget.max_nodes)
    if h1 is None or h2 is None or h1 != h2:
        return ClassCount(h1 if h1 is not None else h2, "inconclusive", budget.box)
    return ClassCount(h1, "ok", budget.box)


def write_class_table(rows: Sequence[Tuple[int, int, int, ClassCount]], path: str) -> None:
    """CSV export with header d1,d2,t,h,status,box."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["d1", "d2", "t", "h", "status", "box"])
        for d1, d2, t, res in rows:
            w.writerow([d1, d2, t, "" if res.value is None else res.value, res.status, res.box])


# ---------------------------------------------------------------------------
# local profiles and the divisor-character sum


@dataclass(frozen=True)
class LocalProfile:
    """Arithmetic fingerprint of a triple (t1, t2, f):
    E = gcd(t1^2-4, f), G and R the parts of f^2-(t1^2-4)(t2^2-4) and
    t1^2-4 supported on primes dividing 2E, gamma = 16*R*G*prod(p | G),
    and the residues of the triple mod gamma.
    """

    E: int
    G: int
    R: int
    gamma: int
    residues: Tuple[int, int, int]


def local_profile(t1: int, t2: int, f: int) -> LocalProfile:
    if t1 <= 2 or t2 <= 2:
        raise ValueError("local_profile requires t1, t2 > 2")
    d1 = t1 * t1 - 4
    n = f * f - d1 * (t2 * t2 - 4)
    if n == 0:
        raise ValueError("degenerate triple: f^2 equals (t1^2-4)(t2^2-4)")
    e_part = math.gcd(d1, f)
    gg = rr = 1
    for p in factorize(2 * e_part).primes():
        gg *= p ** nu_p(p, n)
        rr *= p ** nu_p(p, d1)
    gamma = 16 * rr * gg
    for p in factorize(gg).primes():
        gamma *= p
    return LocalProfile(e_part, gg, rr, gamma, (t1 % gamma, t2 % gamma, f % gamma))


def padding_modulus(t1: int, t2: int, f: int) -> int:
    """Product over primes p | G of p^(beta_p + 1 + nu_p(16)), the modulus
    at which residues of (t1, t2, f) pin down every bad-prime factor."""
    prof = local_profile(t1, t2, f)
    n = f * f - (t1 * t1 - 4) * (t2 * t2 - 4)
    mod = 1
    for p in factorize(prof.G).primes():
        mod *= p ** (nu_p(p, n) + 1 + (4 if p == 2 else 0))
    return mod


def alpha_g(t1: int, t2: int, f: int, g_excl: int) -> int:
    """Sum of ((t1^2-4)/D) over divisors D of f^2-(t1^2-4)(t2^2-4)
    that are coprime to g_excl."""
    if t1 <= 2 or t2 <= 2:
        raise ValueError("alpha_g requires t1, t2 > 2")
    if g_excl < 1:
        raise ValueError("alpha_g requires a positive exclusion modulus")
    d1 = t1 * t1 - 4
    n = f * f - d1 * (t2 * t2 - 4)
    if n <= 0:
        raise ValueError("alpha_g requires f^2 > (t1^2-4)(t2^2-4)")
    if g_excl % 2 and n % 2 == 0:
        raise ValueError("even divisors escape the character; need 2 | G or odd argument")
    total = 0
    for dv in factorize(n).divisors():
        if math.gcd(dv, g_excl) == 1:
            total += jacobi(d1, dv)
    return total


def good_prime_factor(t1: int, p: int, beta: int) -> int:
    """sum_{j=0..beta} ((t1^2-4)/p)^j, the local factor at a prime not
    dividing t1^2-4."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    if p == 2 or not is_prime(p):
        raise ValueError("good_prime_factor requires an odd prime")
    d1 = t1 * t1 - 4
    if d1 % p == 0:
        raise ValueError(f"{p} divides t1^2-4: not a good prime")
    chi = jacobi(d1, p)
    if chi == 1:
        return beta + 1
    return 1 if beta % 2 == 0 else 0


def _check_sign_hypotheses(t1: int, t2: int, f: int, gg: int, rr: int) -> Tuple[int, int]:
    d1 = t1 * t1 - 4
    n = f * f - d1 * (t2 * t2 - 4)
    if gg % 4 != 0:
        raise ValueError("requires 4 | G")
    if set(factorize(2 * rr).primes()) != set(factorize(gg).primes()):
        raise ValueError("requires p | 2R exactly for p | G")
    if n <= 0:
        raise ValueError("requires f^2 > (t1^2-4)(t2^2-4)")
    gv = rv = 1
    for p in factorize(gg).primes():
        gv *= p ** nu_p(p, n)
        rv *= p ** nu_p(p, d1)
    if gv != gg or rv != rr:
        raise ValueError("profile of the triple does not match (G, R)")
    if set(factorize(2 * math.gcd(d1, f)).primes()) != set(factorize(gg).primes()):
        raise ValueError("primes of 2*gcd(t1^2-4, f) must be exactly those of G")
    return d1, n


def kappa(t1: int, t2: int, f: int, gg: int, rr: int) -> int:
    """The reciprocity sign relating characters at complementary divisors:
    ((t1^2-4)/D) = ((t1^2-4)/D*) * kappa for D*D = (f^2-...)/G.

    Computed from the closed formula
    kappa = (R/N) * (-1)^(((N-1)/2)((M-1)/2)) * (G/M)
    with N = (f^2-(t1^2-4)(t2^2-4))/G and M = (t1^2-4)/R, and
    cross-checked against the D = 1 specialization kappa = ((t1^2-4)/N).
    """
    d1, n = _check_sign_hypotheses(t1, t2, f, gg, rr)
    big_n = n // gg
    if d1 % rr != 0:
        raise ValueError("R must divide t1^2-4")
    big_m = d1 // rr
    val = jacobi(rr, big_n) * jacobi(gg, big_m)
    if ((big_n - 1) // 2) % 2 and ((big_m - 1) // 2) % 2:
        val = -val
    check = jacobi(d1, big_n)
    if val != check:
        raise ArithmeticError(
            f"reciprocity sign mismatch at {(t1, t2, f, gg, rr)}: {val} vs {check}"
        )
    return val


def complementary_divisor_check(t1: int, t2: int, f: int, gg: int, rr: int, dd: int) -> bool:
    """True iff ((t1^2-4)/D) = ((t1^2-4)/D*) * kappa holds at D = dd,
    with D* the complementary divisor (f^2-...)/(D*G)."""
    d1, n = _check_sign_hypotheses(t1, t2, f, gg, rr)
    if dd < 1 or n % dd != 0 or math.gcd(dd, gg) != 1:
        raise ValueError("D must be a divisor of f^2-... coprime to G")
    dstar, rem = divmod(n // dd, gg)
    if rem:
        raise ValueError("G does not divide the complementary part")
    k = kappa(t1, t2, f, gg, rr)
    return jacobi(d1, dd) == jacobi(d1, dstar) * k


@dataclass(frozen=True)
class LocalityRatio:
    value: Optional[Fraction]
    status: str  # "ok", "undefined" (alpha_G = 0), or "inconclusive"


def locality_ratio(t1: int, t2: int, f: int, budget: Budget | None = None) -> LocalityRatio:
    """h(t1^2-4, t2^2-4, f) / alpha_G(t1, t2, f): the implied product of
    bad-prime local factors.  Triples agreeing at the padding modulus
    (and in G, R) must give equal ratios."""
    prof = local_profile(t1, t2, f)
    a = alpha_g(t1, t2, f, prof.G)
    if a == 0:
        return LocalityRatio(None, "undefined")
    res = class_number(t1 * t1 - 4, t2 * t2 - 4, f, budget)
    if res.status != "ok" or res.value is None:
        return LocalityRatio(None, "inconclusive")
    return LocalityRatio(Fraction(res.value, a), "ok")

"""Exact integer and modular arithmetic kernel.

Jacobi symbols, p-adic valuations, deterministic factorization,
Hilbert symbols at a prime, and square roots modulo odd integers.
Everything here is pure and deterministic; all functions raise
ValueError on domain violations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

# Witnesses making Miller-Rabin deterministic for all n < 3.3 * 10^24,
# comfortably covering 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 10**6


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _sieve(limit: int) -> Tuple[int, ...]:
    """Primes up to ``limit`` inclusive."""
    if limit < 2:
        return ()
    flags = bytearray(b"\x01") * (limit + 1)
    flags[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start :: p] = b"\x00" * ((limit - start) // p + 1)
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(limit: int) -> Tuple[int, ...]:
    return _sieve(limit)


@dataclass(frozen=True)
class Factorization:
    """A complete factorization: value = prod p**e with primes increasing."""

    value: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e <= 0 or not is_prime(p):
                raise ValueError(f"invalid factor list for {self.value}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors do not multiply to {self.value}")

    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def divisors(self) -> List[int]:
        """All positive divisors, sorted."""
        divs = [1]
        for p, e in self.factors:
            pk = 1
            block = list(divs)
            for _ in range(e):
                pk *= p
                divs.extend(d * pk for d in block)
        return sorted(divs)


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle finding).

    The parameter sequence is fixed, so the result is deterministic.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed on {n}")  # unreachable for n < 2**64


@lru_cache(maxsize=1 << 18)
def factorize(n: int) -> Factorization:
    """Complete factorization of a positive integer.

    Trial division by sieved primes first, Pollard rho on whatever
    survives.  Results are memoized; deterministic for fixed n.
    """
    if n <= 0:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    m = n
    for p in _sieve(min(_TRIAL_LIMIT, math.isqrt(n) + 1)):
        if p * p > m:
            break
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    stack = [m] if m > 1 else []
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        if is_prime(v):
            out[v] = out.get(v, 0) + 1
            continue
        d = _pollard_rho(v)
        stack.append(d)
        stack.append(v // d)
    return Factorization(n, tuple(sorted(out.items())))


def divisors(n: int) -> List[int]:
    return factorize(n).divisors()


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n).factors:
        out -= out // p
    return out


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n; (a/1) = 1."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi requires odd positive n")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def epsilon_c(c: int) -> complex:
    """The normalized Gauss-sum sign: 1 if c = 1 (mod 4), i if c = 3 (mod 4)."""
    if c <= 0 or c % 2 == 0:
        raise ValueError("epsilon_c requires odd positive c")
    return 1 + 0j if c % 4 == 1 else 1j


def nu_p(p: int, n: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    if p < 2 or not is_prime(p):
        raise ValueError("nu_p requires a prime p")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def square_part(ns: Sequence[int]) -> int:
    """Largest k >= 1 with k**2 dividing gcd of the inputs."""
    if not ns or all(v == 0 for v in ns):
        raise ValueError("square_part requires a nonzero entry")
    g = 0
    for v in ns:
        g = math.gcd(g, v)
    k = 1
    for p, e in factorize(g).factors:
        k *= p ** (e // 2)
    return k


def hilbert_p(a: int, b: int, p: int) -> int:
    """Local Hilbert symbol (a, b)_p in {-1, +1}.

    Write a = p**alpha * u, b = p**beta * v with u, v prime to p.  For
    odd p the symbol is (-1)**(alpha*beta*(p-1)/2) * (u/p)**beta *
    (v/p)**alpha; for p = 2 it is (-1) to the exponent
    ((u-1)/2)((v-1)/2) + alpha*(v^2-1)/8 + beta*(u^2-1)/8.
    """
    if a == 0 or b == 0:
        raise ValueError("hilbert_p requires nonzero arguments")
    alpha = nu_p(p, a)
    beta = nu_p(p, b)
    u = a // p**alpha
    v = b // p**beta
    if p == 2:
        exp = ((u - 1) // 2) * ((v - 1) // 2)
        exp += alpha * ((v * v - 1) // 8) + beta * ((u * u - 1) // 8)
        return -1 if exp % 2 else 1
    exp = alpha * beta * ((p - 1) // 2)
    result = -1 if exp % 2 else 1
    if beta % 2:
        result *= jacobi(u, p)
    if alpha % 2:
        result *= jacobi(v, p)
    if result == 0:
        raise ArithmeticError("unit reduced to zero symbol")  # unreachable
    return result


def hilbert_inf(a: int, b: int) -> int:
    """Hilbert symbol at the infinite place: -1 iff both arguments negative."""
    if a == 0 or b == 0:
        raise ValueError("hilbert_inf requires nonzero arguments")
    return -1 if (a < 0 and b < 0) else 1


def _sqrt_mod_prime(a: int, p: int) -> List[int]:
    """Roots of x^2 = a modulo an odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return [0]
    if jacobi(a, p) != 1:
        return []
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks with the least quadratic nonresidue as generator.
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while jacobi(z, p) != -1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, tt = 0, t
            while tt != 1:
                tt = tt * tt % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return sorted({r, p - r})


def _sqrt_unit_mod_prime_power(u: int, p: int, e: int) -> List[int]:
    """Roots of y^2 = u modulo p**e for odd p and a unit u (Hensel lifting)."""
    base = _sqrt_mod_prime(u, p)
    if not base:
        return []
    y = base[0]
    k = 1
    while k < e:
        k = min(2 * k, e)
        mod = p**k
        y = (y - (y * y - u) * pow(2 * y, -1, mod)) % mod
    mod = p**e
    return sorted({y % mod, (mod - y) % mod})


def _sqrt_mod_prime_power(a: int, p: int, e: int) -> List[int]:
    """All roots of x^2 = a modulo p**e, p odd."""
    mod = p**e
    a %= mod
    if a == 0:
        half = (e + 1) // 2
        step = p**half
        return [k * step for k in range(p ** (e - half))]
    alpha = 0
    u = a
    while u % p == 0:
        u //= p
        alpha += 1
    if alpha % 2:
        return []
    e1 = e - alpha
    ys = _sqrt_unit_mod_prime_power(u, p, e1)
    if not ys:
        return []
    half = alpha // 2
    ph = p**half
    pe1 = p**e1
    roots = set()
    for y in ys:
        for t in range(ph):
            roots.add(ph * (y + t * pe1) % mod)
    return sorted(roots)


def sqrt_mod_factors(a: int, c: int, factors: Iterable[Tuple[int, int]]) -> List[int]:
    """Core of sqrt_mod: trusts that ``factors`` factor the odd modulus c."""
    if c == 1:
        return [0]
    roots = [0]
    mod = 1
    for p, e in factors:
        q = p**e
        local = _sqrt_mod_prime_power(a, p, e)
        if not local:
            return []
        inv_mod = pow(mod % q, -1, q) if mod > 1 else 0
        merged = []
        for r in roots:
            for s in local:
                if mod == 1:
                    merged.append(s)
                else:
                    # x = r (mod mod), x = s (mod q)
                    t = (s - r) * inv_mod % q
                    merged.append(r + mod * t)
        roots = merged
        mod *= q
    return sorted(x % mod for x in roots)


def sqrt_mod(a: int, c: int, fact: Factorization | None = None) -> List[int]:
    """All x in [0, c) with x^2 = a (mod c), for odd positive c.

    Prime-power roots are lifted and recombined by the Chinese remainder
    theorem.  Returns an empty list when there is no root.
    """
    if c <= 0 or c % 2 == 0:
        raise ValueError("sqrt_mod requires odd positive modulus")
    if fact is None:
        fact = factorize(c)
    elif fact.value != c:
        raise ValueError("factorization does not match modulus")
    return sqrt_mod_factors(a, c, fact.factors)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> Tuple[int, int]:
    """Solve x = r1 (mod m1), x = r2 (mod m2) for coprime moduli."""
    g = math.gcd(m1, m2)
    if g != 1:
        raise ValueError("crt_pair requires coprime moduli")
    m = m1 * m2
    x = (r1 + m1 * ((r2 - r1) * pow(m1 % m2, -1, m2) % m2)) % m
    return x, m

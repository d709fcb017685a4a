"""Integer kernel: factorization, prime-power valuations, multiplicative orders.

Everything here is deterministic and exact for inputs below 2**63; all
quantities appearing in the scans are far smaller.
"""

from __future__ import annotations

from math import gcd, isqrt

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_BOUND = 1 << 20


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 2**64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of composite n, deterministic seed sweep."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed on {n}")  # unreachable below 2**63


def factorize(n: int) -> list[tuple[int, int]]:
    """Exact factorization of n >= 1 as sorted (prime, exponent) pairs."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    if n >= 1 << 63:
        raise ValueError("factorize requires n < 2**63")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # wheel over 6k+-1 up to the trial bound
    d = 7
    step = 4
    while d * d <= n and d <= _TRIAL_BOUND:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += step
        step = 6 - step
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        f = _pollard_rho(m)
        stack.append(f)
        stack.append(m // f)
    return sorted(out.items())


def prime_divisors(n: int) -> list[int]:
    """Sorted set of primes dividing n."""
    return [p for p, _ in factorize(n)]


def v_r(r: int, n: int) -> int:
    """Largest e with r**e dividing n; r must be prime, n >= 1."""
    if not is_prime(r):
        raise ValueError(f"v_r requires a prime base, got {r}")
    if n < 1:
        raise ValueError(f"v_r requires n >= 1, got {n}")
    e = 0
    while n % r == 0:
        n //= r
        e += 1
    return e


def odd_part(n: int) -> int:
    """Largest odd divisor of n."""
    if n < 1:
        raise ValueError(f"odd_part requires n >= 1, got {n}")
    while n % 2 == 0:
        n //= 2
    return n


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def mult_order(b: int, n: int) -> int:
    """Order of b in the unit group mod n (least l >= 1 with n | b**l - 1)."""
    if n < 2:
        raise ValueError(f"mult_order requires modulus >= 2, got {n}")
    if gcd(b, n) != 1:
        raise ValueError(f"mult_order requires gcd(b, n) = 1, got b={b}, n={n}")
    order = euler_phi(n)
    for p, _ in factorize(order):
        while order % p == 0 and pow(b, order // p, n) == 1:
            order //= p
    return order


def gcd_pexp(p: int, a: int, b: int) -> int:
    """p**gcd(a,b) - 1, which equals gcd(p**a - 1, p**b - 1)."""
    if not is_prime(p):
        raise ValueError(f"gcd_pexp requires a prime, got {p}")
    return p ** gcd(a, b) - 1


def lift_congruence(r: int, x: int, n: int) -> tuple[int, int]:
    """Residue and modulus pinning down (1+x)**n when r divides x.

    Returns (residue, modulus) with (1+x)**n = residue (mod modulus):
    the exceptional branch 1 + n*x*(x+2)/2 mod r**v_r(n*x*(x+2)) applies
    when r = 2, v_2(x) = 1 and n is twice an odd number; otherwise
    1 + n*x mod r**(v_r(n*x)+1).  The congruence itself is re-checked by
    modular exponentiation before returning.
    """
    if not is_prime(r):
        raise ValueError(f"lift_congruence requires a prime, got {r}")
    if n < 1:
        raise ValueError(f"lift_congruence requires n >= 1, got {n}")
    if x == 0 or x % r != 0:
        raise ValueError(f"lift_congruence requires v_r(x) >= 1, got r={r}, x={x}")
    twice_odd = n % 2 == 0 and (n // 2) % 2 == 1
    if r == 2 and v_r(2, abs(x)) == 1 and twice_odd:
        modulus = 2 ** v_r(2, abs(n * x * (x + 2)))
        residue = 1 + n * x * (x + 2) // 2
    else:
        modulus = r ** (v_r(r, abs(n * x)) + 1)
        residue = 1 + n * x
    assert pow(1 + x, n, modulus) == residue % modulus
    return residue, modulus

"""Small modular-arithmetic helpers for the group recipes."""

from __future__ import annotations


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def mult_order(r: int, p: int) -> int:
    r %= p
    if r == 0:
        raise ValueError("zero has no multiplicative order")
    k, x = 1, r
    while x != 1:
        x = x * r % p
        k += 1
    return k


def primitive_root(p: int) -> int:
    for g in range(2, p):
        if mult_order(g, p) == p - 1:
            return g
    return 1


def is_square_mod(a: int, p: int) -> bool:
    a %= p
    return a == 0 or pow(a, (p - 1) // 2, p) == 1

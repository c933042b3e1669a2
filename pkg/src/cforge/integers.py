"""A deliberately small positive-integer domain.

It exists to show the knowledge-base and conjecturing layers are not
graph-specific, not to do number theory.
"""

from __future__ import annotations

from .errors import MalformedPayload, UnknownConcept
from .values import Value

MAX_INTEGER = 10**9


def validate_integer(k: int) -> int:
    if not isinstance(k, int) or isinstance(k, bool):
        raise MalformedPayload(f"integer payload must be an int, got {type(k).__name__}")
    if not (1 <= k <= MAX_INTEGER):
        raise MalformedPayload(f"integer must be in 1..{MAX_INTEGER}, got {k}")
    return k


def num_divisors(k: int) -> int:
    count = 0
    d = 1
    while d * d <= k:
        if k % d == 0:
            count += 2 if d * d != k else 1
        d += 1
    return count


def is_prime(k: int) -> bool:
    """Deterministic Miller-Rabin; exact for the supported range."""
    if k < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if k % p == 0:
            return k == p
    d = k - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, k)
        if x in (1, k - 1):
            continue
        for _ in range(r - 1):
            x = x * x % k
            if x == k - 1:
                break
        else:
            return False
    return True


def is_even(k: int) -> bool:
    return k % 2 == 0


def is_perfect_square(k: int) -> bool:
    r = int(k**0.5)
    while r * r > k:
        r -= 1
    while (r + 1) * (r + 1) <= k:
        r += 1
    return r * r == k


def num_prime_factors(k: int) -> int:
    """Count of distinct prime factors."""
    count = 0
    d = 2
    while d * d <= k:
        if k % d == 0:
            count += 1
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        count += 1
    return count


INTEGER_INVARIANTS = {
    "value": lambda k: k,
    "num_divisors": num_divisors,
    "num_prime_factors": num_prime_factors,
}

INTEGER_PROPERTIES = {
    "is_prime": is_prime,
    "is_even": is_even,
    "is_perfect_square": is_perfect_square,
}

INTEGER_CONCEPTS = {**INTEGER_INVARIANTS, **INTEGER_PROPERTIES}


def eval_integer_concept(name: str, k: int) -> Value:
    fn = INTEGER_CONCEPTS.get(name)
    if fn is None:
        raise UnknownConcept(name)
    return fn(k)

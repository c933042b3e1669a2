"""Integer domain concepts against trial-division oracles."""

import random

import pytest

from cforge.errors import MalformedPayload, UnknownConcept
from cforge.integers import (
    eval_integer_concept,
    is_perfect_square,
    is_prime,
    num_divisors,
    num_prime_factors,
    validate_integer,
)


def trial_division_is_prime(k):
    if k < 2:
        return False
    return all(k % d for d in range(2, int(k**0.5) + 1))


def test_examples():
    assert eval_integer_concept("is_prime", 7) is True
    assert eval_integer_concept("num_divisors", 12) == 6  # {1,2,3,4,6,12}
    assert eval_integer_concept("is_perfect_square", 1) is True
    assert eval_integer_concept("is_even", 10) is True
    assert eval_integer_concept("value", 9) == 9


def test_prime_oracle():
    for k in range(1, 2000):
        assert is_prime(k) == trial_division_is_prime(k), k


def test_prime_large_values():
    assert is_prime(999999937)
    assert not is_prime(999999936)


def test_divisors_oracle():
    rng = random.Random(1)
    for _ in range(200):
        k = rng.randint(1, 10000)
        assert num_divisors(k) == sum(1 for d in range(1, k + 1) if k % d == 0)


def test_prime_factors():
    assert num_prime_factors(12) == 2   # 2, 3
    assert num_prime_factors(30) == 3
    assert num_prime_factors(1) == 0
    assert num_prime_factors(64) == 1


def test_perfect_squares():
    squares = {k * k for k in range(1, 100)}
    for k in range(1, 5000):
        assert is_perfect_square(k) == (k in squares)


def test_validation():
    with pytest.raises(MalformedPayload):
        validate_integer(0)
    with pytest.raises(MalformedPayload):
        validate_integer(10**9 + 1)
    with pytest.raises(MalformedPayload):
        validate_integer("7")


def test_unknown():
    with pytest.raises(UnknownConcept):
        eval_integer_concept("totient", 5)

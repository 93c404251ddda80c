from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, TypeVar

from .errors import BudgetExceeded

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_BUDGET = 10**8


def resolve_budget(budget: int | None = None) -> int:
    """Explicit budget, else RIGX_BUDGET, else 10^8."""
    if budget is not None:
        return int(budget)
    env = os.environ.get("RIGX_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def charge(operation: str, count: int, budget: int | None) -> int:
    limit = resolve_budget(budget)
    if count > limit:
        raise BudgetExceeded(operation, count, limit)
    return count


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Order-preserving map; the worker count never changes the result."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def gaussian_binomial(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def gl_order(n: int, p: int) -> int:
    return math.prod(p**n - p**i for i in range(n))


def sparse_row_choices(k: int, t: int, p: int) -> int:
    return sum(math.comb(k, i) * (p - 1) ** i for i in range(min(t, k) + 1))

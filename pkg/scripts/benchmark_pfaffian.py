#!/usr/bin/env python3
"""Timing comparison of the Pfaffian algorithms on random rational matrices.

The congruence elimination is the workhorse for concrete matrices, the
memoized expansion for polynomial entries; the matching enumeration is the
oracle and blows up factorially.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from pfafflab.pfaffian import (SkewMatrix, pfaffian_eliminate, pfaffian_expansion,
                               pfaffian_matchings_oracle)


def random_skew(size: int, seed: int) -> SkewMatrix:
    rng = random.Random(seed)
    return SkewMatrix.from_function(
        size, lambda i, j: Fraction(rng.randint(-9, 9), rng.randint(1, 9)))


def timed(fn, m) -> float:
    start = time.perf_counter()
    fn(m)
    return time.perf_counter() - start


def main() -> None:
    print(f"{'size':>4} {'eliminate':>12} {'expansion':>12} {'matchings':>12}")
    for size in range(2, 13, 2):
        m = random_skew(size, size)
        te = timed(pfaffian_eliminate, m)
        tx = timed(pfaffian_expansion, m)
        tm = timed(pfaffian_matchings_oracle, m) if size <= 12 else float("nan")
        assert pfaffian_eliminate(m) == pfaffian_expansion(m)
        print(f"{size:>4} {te * 1e3:>10.2f}ms {tx * 1e3:>10.2f}ms {tm * 1e3:>10.2f}ms")


if __name__ == "__main__":
    main()

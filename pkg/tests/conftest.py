"""Shared brute-force oracles, deliberately independent of the library code.

Every oracle here recomputes its answer from definitions with itertools-style
enumeration, so library results are checked against a second route rather
than against themselves.
"""

from __future__ import annotations

import itertools
import random

from emcverify.core import SetFamily, elements_from_mask, mask_from_elements


def brute_lower_shadow(family: SetFamily, b: int) -> set[int]:
    out = set()
    for m in family.members:
        elems = elements_from_mask(m)
        for combo in itertools.combinations(elems, family.k - b):
            out.add(mask_from_elements(combo))
    return out


def brute_upper_shadow(family: SetFamily, u: int) -> set[int]:
    ground = range(1, family.n + 1)
    out = set()
    for m in family.members:
        elems = set(elements_from_mask(m))
        rest = [e for e in ground if e not in elems]
        for extra in itertools.combinations(rest, u - family.k):
            out.add(mask_from_elements(sorted(elems) + list(extra)))
    return out


def brute_matching_number(family: SetFamily) -> int:
    best = 0
    members = family.members

    def rec(idx: int, used: int, count: int) -> None:
        nonlocal best
        best = max(best, count)
        for i in range(idx, len(members)):
            if not members[i] & used:
                rec(i + 1, used | members[i], count + 1)

    rec(0, 0, 0)
    return best


def brute_rainbow(families) -> tuple[int, ...] | None:
    """Exhaustive product-space search for pairwise disjoint representatives."""
    for combo in itertools.product(*(f.members for f in families)):
        acc = 0
        for m in combo:
            if acc & m:
                break
            acc |= m
        else:
            return combo
    return None


def brute_hall_assignment(slice_sets: list[set[int]], blocks: list[int]):
    """Try every injective blocks-to-families assignment; None when impossible."""
    n_fam = len(slice_sets)

    def rec(i: int, used: set[int], acc: list[int]):
        if i == n_fam:
            return list(acc)
        for b in slice_sets[i]:
            if b not in used:
                used.add(b)
                acc.append(b)
                got = rec(i + 1, used, acc)
                if got is not None:
                    return got
                acc.pop()
                used.remove(b)
        return None

    return rec(0, set(), [])


def brute_matchings(n: int, first: int, block_size: int, t: int):
    """All t-sets of pairwise disjoint block_size-subsets of [first, n]."""
    blocks = [
        mask_from_elements(c)
        for c in itertools.combinations(range(first, n + 1), block_size)
    ]
    out = []
    for combo in itertools.combinations(blocks, t):
        acc = 0
        for b in combo:
            if acc & b:
                break
            acc |= b
        else:
            out.append(tuple(sorted(combo)))
    return out


def random_family(rng: random.Random, n: int, k: int, size: int) -> SetFamily:
    pool = list(itertools.combinations(range(1, n + 1), k))
    chosen = rng.sample(pool, min(size, len(pool)))
    return SetFamily.from_sets(n, k, chosen)

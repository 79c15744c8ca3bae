"""Independent brute-force reference implementations.

Everything here recomputes results from first principles with none of
the library's machinery (no scaling to a common denominator, no
feasibility memoization, no pruning), so agreement is meaningful.
Only usable at toy sizes.
"""

from fractions import Fraction


def brute_factorizations(atoms, x):
    """All multiplicity tuples over `atoms` (sorted ascending) summing
    to x, by plain nested enumeration."""
    ordered = sorted(atoms)
    found = []

    def rec(i, rest, mults):
        if i == len(ordered):
            if rest == 0:
                found.append(tuple(mults))
            return
        a = ordered[i]
        m = 0
        while m * a <= rest:
            rec(i + 1, rest - m * a, mults + [m])
            m += 1

    rec(0, Fraction(x), [])
    return sorted(found)


def brute_lengths(atoms, x):
    return sorted({sum(m) for m in brute_factorizations(atoms, x)})


def brute_elements(generators, bound):
    """All sums of generators up to bound, by breadth-first closure."""
    bound = Fraction(bound)
    seen = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for v in frontier:
            for g in generators:
                w = v + g
                if w <= bound and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(seen)


def brute_atoms(generators):
    """Generators admitting no representation of total multiplicity >= 2."""
    gens = sorted(set(Fraction(g) for g in generators))
    out = []
    for g in gens:
        if not any(sum(m) >= 2 for m in brute_factorizations(gens, g)):
            out.append(g)
    return out


def sieve(limit):
    """Primes up to limit inclusive, by Eratosthenes."""
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, int(limit ** 0.5) + 1):
        if flags[i]:
            flags[i * i:: i] = bytearray(len(flags[i * i:: i]))
    return [i for i, f in enumerate(flags) if f]


def first_primes(count, skip=()):
    """The first `count` primes, optionally skipping some, by sieve."""
    limit = 100
    while True:
        ps = [p for p in sieve(limit) if p not in skip]
        if len(ps) >= count:
            return ps[:count]
        limit *= 2


def partition_length_extremes(total, primes):
    """Min and max of sum(p_i * t_i) over t_i >= 0 with sum(i * t_i) = total.

    This is the factorization-length range of the integer `total` in a
    monoid with one atom i/p_i per index, where any factorization must
    use each atom a multiple of p_i times: an unbounded knapsack over
    part sizes i with weights p_i.
    """
    neg = float("-inf")
    pos = float("inf")
    lo = [pos] * (total + 1)
    hi = [neg] * (total + 1)
    lo[0] = hi[0] = 0
    for i, p in enumerate(primes, start=1):
        if i > total:
            break
        for s in range(i, total + 1):
            if lo[s - i] + p < lo[s]:
                lo[s] = lo[s - i] + p
            if hi[s - i] + p > hi[s]:
                hi[s] = hi[s - i] + p
    if lo[total] is pos or hi[total] == neg:
        return None
    return lo[total], hi[total]

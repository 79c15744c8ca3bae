"""Finite truncations of Puiseux monoids and their atom structure.

A TruncatedMonoid is the additive submonoid of the nonnegative
rationals generated by finitely many atoms.  All computations scale by
the lcm D of the atom denominators, turning every question into exact
integer knapsack work: x belongs to the monoid iff x*D is a
nonnegative-integer combination of the scaled atoms.

Atom reduction removes every generator that splits as a sum of two
nonzero monoid elements, re-checking survivors until a fixed point;
membership uses a depth-first search over multiplicities with gcd and
smallest-coin pruning (lengths are bounded by x / min-atom, so the
search is finite).  Element enumeration walks all multiplicity
combinations with value at most the bound, which stays desk-scale even
when D is astronomically large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ResourceCapError, SpecValidationError
from .primes import is_prime
from .rationals import INFINITY, format_rational

_DEFAULT_BUDGET = 10_000_000


class WorkBudget:
    """Shared countdown of search steps; raises when exhausted."""

    __slots__ = ("limit", "left")

    def __init__(self, limit: int):
        self.limit = limit
        self.left = limit

    def spend(self, k: int = 1):
        self.left -= k
        if self.left < 0:
            raise ResourceCapError(
                f"enumeration exceeded its work budget of {self.limit} steps")


def _as_budget(budget) -> WorkBudget:
    if budget is None:
        return WorkBudget(_DEFAULT_BUDGET)
    if isinstance(budget, int):
        return WorkBudget(budget)
    return budget


@dataclass(frozen=True)
class TruncatedMonoid:
    atoms: tuple[Fraction, ...]      # ascending, pairwise distinct
    denom_lcm: int
    scaled_gens: tuple[int, ...]     # atom * denom_lcm, parallel to atoms
    origin: tuple | None = None      # (MonoidSpec, depth) when truncated

    @property
    def min_atom(self) -> Fraction:
        return self.atoms[0]

    @property
    def max_atom(self) -> Fraction:
        return self.atoms[-1]

    def scale(self, x: Fraction) -> int | None:
        """x * denom_lcm when that is a nonnegative integer, else None."""
        t = x * self.denom_lcm
        if t.denominator != 1 or t < 0:
            return None
        return t.numerator

    def unscale(self, t: int) -> Fraction:
        return Fraction(t, self.denom_lcm)


def _suffix_gcds(coins: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(coins)
    g = 0
    for i in range(len(coins) - 1, -1, -1):
        g = math.gcd(g, coins[i])
        out[i] = g
    return tuple(out)


class Feasibility:
    """Decides whether an integer is a nonnegative combination of a
    fixed descending coin list, memoized on (level, residual).

    check(i, t) answers for the suffix coins[i:], so a factorization
    enumerator can prune dead residuals level by level.  Recursion
    depth is bounded by the number of coins; the multiplicity loop at
    each level is iterative.
    """

    def __init__(self, coins_desc: tuple[int, ...], budget: WorkBudget):
        self.coins = coins_desc
        self.gcds = _suffix_gcds(coins_desc)
        self.memo: dict = {}
        self.budget = budget

    def check(self, i: int, t: int) -> bool:
        coins = self.coins
        if t == 0:
            return True
        if i == len(coins) or t < coins[-1] or t % self.gcds[i]:
            return False
        s = coins[i]
        if i == len(coins) - 1:
            return t % s == 0
        key = (i, t)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.budget.spend()
        ok = False
        for c in range(t // s, -1, -1):
            if self.check(i + 1, t - c * s):
                ok = True
                break
        self.memo[key] = ok
        return ok

    def full(self, t: int) -> bool:
        return self.check(0, t)


def _reduce_to_atoms(values: list[Fraction], budget: WorkBudget) -> list[Fraction]:
    """Drop every generator expressible as a sum of two nonzero elements
    of the monoid the values generate; iterate until stable.

    Dropping a reducible generator never changes the monoid (its
    witnesses only involve strictly smaller generators), so the loop is
    a fixed-point re-check rather than a semantic necessity.
    """
    survivors = sorted(set(values))
    while True:
        D = math.lcm(*(v.denominator for v in survivors))
        coins = tuple(sorted((int(v * D) for v in survivors), reverse=True))
        oracle = Feasibility(coins, budget)
        keep = []
        for g in survivors:
            G = int(g * D)
            reducible = any(
                G - H > 0 and oracle.full(G - H)
                for H in coins if H < G)
            if not reducible:
                keep.append(g)
        if keep == survivors:
            return survivors
        survivors = keep


def from_generators(generators, origin=None, budget=None) -> TruncatedMonoid:
    """Monoid generated by the given positive rationals, reduced so the
    stored generating set is exactly its atom set."""
    budget = _as_budget(budget)
    gens = []
    for g in generators:
        f = g if isinstance(g, Fraction) else Fraction(g)
        if f <= 0:
            raise DomainError(f"generator {format_rational(f)} is not positive")
        gens.append(f)
    if not gens:
        raise DomainError("a monoid truncation needs at least one generator")
    atoms = _reduce_to_atoms(gens, budget)
    D = math.lcm(*(a.denominator for a in atoms))
    scaled = tuple(int(a * D) for a in atoms)
    return TruncatedMonoid(atoms=tuple(atoms), denom_lcm=D, scaled_gens=scaled,
                           origin=origin)


def _instantiate(spec, depth: int) -> list[tuple[Fraction, int]]:
    """(value, family index) pairs for all families at this depth."""
    out = []
    for fi, fam in enumerate(spec.families):
        if fam.kind == "explicit":
            out.extend((g, fi) for g in fam.generators)
        else:
            out.extend((v, fi) for (_n, _p, v) in fam.instantiate(depth))
    return out


def truncate(spec, depth: int, budget=None) -> TruncatedMonoid:
    """Instantiate each symbolic family at its first depth indices,
    union with the explicit generators, and reduce to atoms."""
    if any(f.kind == "symbolic" for f in spec.families):
        if not isinstance(depth, int) or depth < 1:
            raise DomainError(f"depth must be a positive integer, got {depth!r}")
    values = [v for (v, _fi) in _instantiate(spec, depth)]
    tm = from_generators(values, origin=(spec, depth), budget=budget)
    meta = spec.metadata
    if meta.atom_inf is not None and tm.min_atom < meta.atom_inf:
        raise SpecValidationError(
            f"atom {format_rational(tm.min_atom)} lies below the declared "
            f"bound atom_inf = {format_rational(meta.atom_inf)}")
    if (meta.atom_sup is not None and meta.atom_sup is not INFINITY
            and tm.max_atom > meta.atom_sup):
        raise SpecValidationError(
            f"atom {format_rational(tm.max_atom)} exceeds the declared "
            f"bound atom_sup = {format_rational(meta.atom_sup)}")
    return tm


def contains(tm: TruncatedMonoid, x, budget=None) -> bool:
    """Membership of x in the truncated monoid (0 always belongs)."""
    f = x if isinstance(x, Fraction) else Fraction(x)
    if f < 0:
        raise DomainError("membership is defined for nonnegative rationals")
    if f == 0:
        return True
    t = tm.scale(f)
    if t is None:
        return False
    coins = tuple(sorted(tm.scaled_gens, reverse=True))
    return Feasibility(coins, _as_budget(budget)).full(t)


def elements_up_to(tm: TruncatedMonoid, bound, budget=None) -> list[Fraction]:
    """Every monoid element <= bound, ascending, 0 included."""
    f = bound if isinstance(bound, Fraction) else Fraction(bound)
    if f < 0:
        raise DomainError("bound must be nonnegative")
    budget = _as_budget(budget)
    limit = math.floor(f * tm.denom_lcm)
    coins = tuple(sorted(tm.scaled_gens, reverse=True))
    values: set[int] = set()

    def rec(i: int, used: int):
        if i == len(coins):
            budget.spend()
            values.add(used)
            return
        s = coins[i]
        for c in range((limit - used) // s, -1, -1):
            rec(i + 1, used + c * s)

    rec(0, 0)
    return [tm.unscale(v) for v in sorted(values)]


@dataclass(frozen=True)
class PrimaryReport:
    is_primary: bool
    prime_of_atom: dict
    reason: str | None = None


def is_primary(tm: TruncatedMonoid) -> PrimaryReport:
    """Primary means: every atom has a prime denominator not dividing
    its numerator, and distinct atoms use distinct primes."""
    primes = {}
    for a in tm.atoms:
        p = a.denominator
        if not is_prime(p):
            return PrimaryReport(False, {}, f"denominator of {format_rational(a)} "
                                            "is not prime")
        if a.numerator % p == 0:
            return PrimaryReport(False, {}, f"numerator of {format_rational(a)} "
                                            f"is divisible by {p}")
        if p in primes.values():
            other = next(format_rational(b) for b, q in primes.items() if q == p)
            return PrimaryReport(False, {}, f"{format_rational(a)} and {other} "
                                            f"share the prime {p}")
        primes[a] = p
    return PrimaryReport(True, primes)


def classify_stability(spec, depth: int, budget=None) -> dict[Fraction, str]:
    """Label each truncation atom 'stable' or 'unstable'.

    Stability is decided from the symbolic description, never from the
    finite truncation: an atom is stable iff some originating family
    has an unbounded index range and a constant numerator (infinitely
    many family members then share its numerator).  Explicit and
    bounded families yield unstable atoms.
    """
    pairs = _instantiate(spec, depth)
    tm = truncate(spec, depth, budget=budget)
    stable_values = {v for (v, fi) in pairs if spec.families[fi].is_stable()}
    return {a: ("stable" if a in stable_values else "unstable") for a in tm.atoms}

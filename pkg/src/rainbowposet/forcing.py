"""Proper colorings, rainbow copies, and the rainbow-forcing decision kernel.

A host Q rainbow-forces a pattern P when every proper coloring of Q contains
an induced copy of P with pairwise-distinct colors. The decision procedure
searches proper colorings in a canonical form that kills color-renaming
symmetry, pruning any branch whose colored prefix already holds a rainbow
copy (copies survive every extension, so the prune is sound).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from ._copies import all_copies_colored, exists_copy, plan_for
from .errors import CapExceeded, ForcingTimeout, PreconditionViolated
from .poset import Poset, canonical_key, dual, linear_sum, perp_value, rank_partition
from .catalog import DEFAULT_CAP, posets_of_size

DEFAULT_BUDGET_S = 900.0


@dataclass(frozen=True)
class Coloring:
    """Color ids per element, in canonical form: scanning elements in index
    order, each first-seen color id is exactly one more than the maximum
    seen so far (starting at 0)."""

    colors: tuple

    def __post_init__(self):
        seen = -1
        for c in self.colors:
            if c > seen + 1 or c < 0:
                raise PreconditionViolated("coloring is not in canonical form")
            seen = max(seen, c)

    @classmethod
    def from_values(cls, values) -> "Coloring":
        """Relabel arbitrary hashable color values into canonical form."""
        mapping = {}
        out = []
        for v in values:
            if v not in mapping:
                mapping[v] = len(mapping)
            out.append(mapping[v])
        return cls(tuple(out))

    @property
    def num_colors(self) -> int:
        return max(self.colors) + 1 if self.colors else 0

    def __len__(self):
        return len(self.colors)


@dataclass(frozen=True)
class ForcingVerdict:
    forces: bool
    refutation: Optional[Coloring]


def is_proper(p: Poset, coloring: Coloring) -> bool:
    cols = coloring.colors
    if len(cols) != p.n:
        raise PreconditionViolated("coloring does not cover every element")
    for x in range(p.n):
        ux = p.up_mask(x)
        while ux:
            low = ux & -ux
            y = low.bit_length() - 1
            ux ^= low
            if cols[x] == cols[y]:
                return False
    return True


def has_rainbow_copy(host: Poset, coloring: Coloring, pattern: Poset) -> bool:
    return exists_copy(
        host._up, host._down, host.n, plan_for(pattern), colors=coloring.colors
    )


def find_rainbow_copy(host: Poset, coloring: Coloring, pattern: Poset):
    """Lexicographically least rainbow induced copy, or None."""
    if not is_proper(host, coloring):
        raise PreconditionViolated("coloring must be proper on the host")
    copies = all_copies_colored(
        host._up, host._down, host.n, plan_for(pattern), coloring.colors
    )
    return copies[0] if copies else None


def proper_colorings(p: Poset):
    """All proper colorings in canonical (index-scan) form, lexicographically."""
    n = p.n
    comp = [p.up_mask(x) | p.down_mask(x) for x in range(n)]
    colors = [0] * n
    classes = []  # bitmask of elements per color

    def rec(i):
        if i == n:
            yield Coloring(tuple(colors))
            return
        for c, members in enumerate(classes):
            if not members & comp[i]:
                colors[i] = c
                classes[c] |= 1 << i
                yield from rec(i + 1)
                classes[c] &= ~(1 << i)
        colors[i] = len(classes)
        classes.append(1 << i)
        yield from rec(i + 1)
        classes.pop()

    yield from rec(0)


def random_proper_coloring(p: Poset, rng) -> Coloring:
    """Color elements in random order, choosing uniformly among feasible
    existing colors plus one fresh color."""
    n = p.n
    order = list(range(n))
    rng.shuffle(order)
    comp = [p.up_mask(x) | p.down_mask(x) for x in range(n)]
    colors = [-1] * n
    class_masks = []
    for e in order:
        feasible = [c for c, m in enumerate(class_masks) if not m & comp[e]]
        pick = rng.randrange(len(feasible) + 1)
        if pick == len(feasible):
            colors[e] = len(class_masks)
            class_masks.append(1 << e)
        else:
            c = feasible[pick]
            colors[e] = c
            class_masks[c] |= 1 << e
    return Coloring.from_values(colors)


# --- the forcing search ------------------------------------------------------


def refuting_coloring(
    host: Poset, pattern: Poset, budget_s: Optional[float] = DEFAULT_BUDGET_S
) -> Optional[Coloring]:
    """First (in canonical search order) proper coloring of host without a
    rainbow induced copy of pattern; None when exhaustive search proves the
    host rainbow-forces the pattern.

    Elements are colored in rank-then-index order; a branch dies as soon as
    its colored prefix holds a rainbow copy, which only requires a search
    anchored at the element just colored.
    """
    n = host.n
    rank = rank_partition(host).rank
    order = sorted(range(n), key=lambda x: (rank[x], x))
    comp = [host.up_mask(x) | host.down_mask(x) for x in range(n)]
    plan = plan_for(pattern)
    colors = [0] * n
    class_masks = []
    assigned = 0
    deadline = time.monotonic() + budget_s if budget_s is not None else None
    ticks = 0
    host_up, host_down = host._up, host._down

    def rec(i):
        nonlocal assigned, ticks
        ticks += 1
        if deadline is not None and ticks & 255 == 0 and time.monotonic() > deadline:
            raise ForcingTimeout(
                f"forcing search exceeded its {budget_s:g}s budget"
            )
        if i == n:
            return True
        e = order[i]
        bit = 1 << e
        for c in range(len(class_masks) + 1):
            fresh = c == len(class_masks)
            if not fresh and class_masks[c] & comp[e]:
                continue
            colors[e] = c
            if fresh:
                class_masks.append(bit)
            else:
                class_masks[c] |= bit
            assigned |= bit
            if not exists_copy(
                host_up,
                host_down,
                n,
                plan,
                active=assigned,
                colors=colors,
                anchor=e,
            ):
                if rec(i + 1):
                    return True
            assigned &= ~bit
            if fresh:
                class_masks.pop()
            else:
                class_masks[c] &= ~bit
        return False

    if rec(0):
        return Coloring.from_values([colors[x] for x in range(n)])
    return None


_VERDICT_CACHE: dict = {}


def _forces(host: Poset, pattern: Poset, budget_s=DEFAULT_BUDGET_S) -> bool:
    """Cached boolean forcing decision, keyed by isomorphism classes."""
    if pattern.n > host.n or not exists_copy(
        host._up, host._down, host.n, plan_for(pattern)
    ):
        return False
    key = (canonical_key(host), canonical_key(pattern))
    hit = _VERDICT_CACHE.get(key)
    if hit is None:
        hit = refuting_coloring(host, pattern, budget_s) is None
        _VERDICT_CACHE[key] = hit
    return hit


def rainbow_forces(
    host: Poset, pattern: Poset, budget_s: Optional[float] = DEFAULT_BUDGET_S
) -> ForcingVerdict:
    """Decide forcing; when the answer is no, attach the first refuting
    coloring found in canonical search order (re-verified before returning)."""
    if _forces(host, pattern, budget_s):
        return ForcingVerdict(forces=True, refutation=None)
    refutation = refuting_coloring(host, pattern, budget_s)
    if refutation is None:  # cache said non-forcing; recompute must agree
        raise AssertionError("forcing verdict cache is inconsistent")
    assert is_proper(host, refutation)
    assert not has_rainbow_copy(host, refutation, pattern)
    return ForcingVerdict(forces=False, refutation=refutation)


def is_minimal_forcing(host: Poset, pattern: Poset, budget_s=DEFAULT_BUDGET_S) -> bool:
    """host forces pattern and no single-element deletion does."""
    if not _forces(host, pattern, budget_s):
        return False
    return all(
        not _forces(host.delete(x), pattern, budget_s) for x in range(host.n)
    )


def search_M(
    pattern: Poset,
    size_bound: int,
    cap: int = DEFAULT_CAP,
    budget_s=DEFAULT_BUDGET_S,
):
    """All posets of size <= size_bound (up to isomorphism) that minimally
    rainbow-force the pattern, in canonical-key order."""
    if size_bound > cap:
        raise CapExceeded(f"size bound {size_bound} above enumeration cap {cap}")
    out = []
    for n in range(pattern.n, size_bound + 1):
        for host in posets_of_size(n, cap):
            if is_minimal_forcing(host, pattern, budget_s):
                out.append(host)
    return sorted(out, key=canonical_key)


@dataclass(frozen=True)
class MValue:
    """Exact minimum forcing size when known, else a bracketing interval."""

    lower: int
    upper: int
    witness: Optional[Poset]

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.exact else None


def m_value(pattern: Poset, cap: int = DEFAULT_CAP, budget_s=DEFAULT_BUDGET_S) -> MValue:
    """Minimum size of a poset that rainbow-forces the pattern.

    Sizes are searched ascending; a smallest forcing host is automatically
    deletion-minimal. When the window upper end (the blow-up size) exceeds
    the enumeration cap and no forcer was found, a bracket is returned.
    """
    hi = perp_value(pattern)
    for n in range(pattern.n, min(hi, cap) + 1):
        for host in posets_of_size(n, cap):
            if _forces(host, pattern, budget_s):
                return MValue(lower=n, upper=n, witness=host)
    if hi <= cap:
        raise AssertionError("blow-up guarantees a forcer within the window")
    return MValue(lower=max(cap + 1, pattern.n), upper=hi, witness=None)


def verify_linear_sum_closure(
    q1: Poset, p1: Poset, q2: Poset, p2: Poset, budget_s=DEFAULT_BUDGET_S
) -> bool:
    """Given q1 minimally forcing p1 and q2 minimally forcing p2 (caller's
    responsibility), check both closure statements: the dual of q1 minimally
    forces the dual of p1, and the linear sum q1^q2 minimally forces p1^p2."""
    return is_minimal_forcing(dual(q1), dual(p1), budget_s) and is_minimal_forcing(
        linear_sum(q1, q2), linear_sum(p1, p2), budget_s
    )

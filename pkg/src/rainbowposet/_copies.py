"""Backtracking kernel for induced-copy existence with color and anchor filters.

Hosts are passed as bit rows so the same kernel serves posets and set
families. Patterns are preprocessed once into a plan holding, for every
possible anchor vertex, a static search order and per-step constraints.
"""

from __future__ import annotations

from functools import lru_cache

_BELOW, _ABOVE, _INCOMP = 0, 1, 2


def _order_from(pattern_up, pattern_down, m, first):
    """Vertex order starting at `first`: breadth-first over the pattern's
    comparability graph, ties broken by higher degree then index."""
    adj = [pattern_up[v] | pattern_down[v] for v in range(m)]
    deg = [adj[v].bit_count() for v in range(m)]
    order = [first] if first is not None else []
    placed = set(order)
    while len(order) < m:
        best = None
        for v in range(m):
            if v in placed:
                continue
            attached = sum(1 for w in order if adj[v] >> w & 1)
            cand = (attached, deg[v], -v)
            if best is None or cand > best[0]:
                best = (cand, v)
        order.append(best[1])
        placed.add(best[1])
    return order


class PatternPlan:
    """Precomputed search orders and constraints for one pattern poset."""

    __slots__ = ("m", "orders", "steps", "up", "down")

    def __init__(self, pattern_up, pattern_down, m):
        self.m = m
        self.up = pattern_up
        self.down = pattern_down
        self.orders = {}
        self.steps = {}
        for first in [None] + list(range(m)):
            order = _order_from(pattern_up, pattern_down, m, first)
            steps = []
            for i, v in enumerate(order):
                cons = []
                for j in range(i):
                    w = order[j]
                    if pattern_up[w] >> v & 1:
                        cons.append((j, _ABOVE))
                    elif pattern_down[w] >> v & 1:
                        cons.append((j, _BELOW))
                    else:
                        cons.append((j, _INCOMP))
                steps.append(tuple(cons))
            self.orders[first] = tuple(order)
            self.steps[first] = tuple(steps)


@lru_cache(maxsize=512)
def _plan_cached(up, down, m):
    return PatternPlan(up, down, m)


def plan_for(pattern):
    return _plan_cached(pattern._up, pattern._down, pattern.n)


def exists_copy(host_up, host_down, n, plan, *, active=None, colors=None, anchor=None):
    """True iff an induced copy of the plan's pattern exists among the active
    host elements, with pairwise-distinct colors when `colors` is given and
    containing `anchor` when given."""
    m = plan.m
    full = (1 << n) - 1 if active is None else active
    if m > full.bit_count():
        return False
    if m == 0:
        return True
    incomp = {}

    def row_incomp(x):
        r = incomp.get(x)
        if r is None:
            r = ~(host_up[x] | host_down[x] | (1 << x)) & full
            incomp[x] = r
        return r

    def search(first, pinned):
        order = plan.orders[first]
        steps = plan.steps[first]
        image = [0] * m
        start = 0
        used0 = 0
        colorbits0 = 0
        if first is not None:
            image[0] = pinned
            start = 1
            used0 = 1 << pinned
            if colors is not None:
                colorbits0 = 1 << colors[pinned]

        def rec(i, used, colorbits):
            if i == m:
                return True
            cand = full & ~used
            for j, rel in steps[i]:
                w = image[j]
                if rel == _ABOVE:
                    cand &= host_up[w]
                elif rel == _BELOW:
                    cand &= host_down[w]
                else:
                    cand &= row_incomp(w)
                if not cand:
                    return False
            while cand:
                low = cand & -cand
                x = low.bit_length() - 1
                cand ^= low
                if colors is None:
                    image[i] = x
                    if rec(i + 1, used | low, 0):
                        return True
                else:
                    cbit = 1 << colors[x]
                    if not colorbits & cbit:
                        image[i] = x
                        if rec(i + 1, used | low, colorbits | cbit):
                            return True
            return False

        return rec(start, used0, colorbits0)

    if anchor is None:
        return search(None, None)
    if not full >> anchor & 1:
        return False
    seen_roles = set()
    for v in range(m):
        role = (plan.up[v], plan.down[v])
        if role in seen_roles:
            continue
        seen_roles.add(role)
        if search(v, anchor):
            return True
    return False


def all_copies_colored(host_up, host_down, n, plan, colors, active=None):
    """All rainbow induced copies as sorted element tuples (for small hosts)."""
    m = plan.m
    full = (1 << n) - 1 if active is None else active
    out = set()
    if m == 0:
        return [()]
    order = plan.orders[None]
    steps = plan.steps[None]
    incomp = [~(host_up[x] | host_down[x] | (1 << x)) & full for x in range(n)]
    image = [0] * m

    def rec(i, used, colorbits):
        if i == m:
            out.add(tuple(sorted(image)))
            return
        cand = full & ~used
        for j, rel in steps[i]:
            w = image[j]
            if rel == _ABOVE:
                cand &= host_up[w]
            elif rel == _BELOW:
                cand &= host_down[w]
            else:
                cand &= incomp[w]
            if not cand:
                return
        while cand:
            low = cand & -cand
            x = low.bit_length() - 1
            cand ^= low
            cbit = 1 << colors[x]
            if not colorbits & cbit:
                image[i] = x
                rec(i + 1, used | low, colorbits | cbit)

    rec(0, 0, 0)
    return sorted(out)

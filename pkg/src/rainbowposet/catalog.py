"""Isomorph-free enumeration of all posets on up to `cap` elements."""

from __future__ import annotations

import hashlib
import json
import os
from functools import lru_cache
from itertools import combinations

from .errors import CapExceeded
from .poset import Poset, _bits, canonical_form, canonical_key

DEFAULT_CAP = 7


def order_ideals(p: Poset):
    """All down-closed element subsets of p, as bitmasks (including 0)."""
    out = []
    for mask in range(1 << p.n):
        ok = True
        rest = mask
        while rest:
            low = rest & -rest
            d = low.bit_length() - 1
            rest ^= low
            if p._down[d] & ~mask:
                ok = False
                break
        if ok:
            out.append(mask)
    return out


@lru_cache(maxsize=None)
def posets_of_size(n: int, cap: int = DEFAULT_CAP):
    """One canonical representative per isomorphism class, sorted by key.

    Grown by extension: every poset on n elements arises from one on n-1 by
    adding a new maximal element whose down-set is an order ideal.
    """
    if n > cap:
        raise CapExceeded(f"enumeration requested for n={n} above cap {cap}")
    if n < 1:
        raise CapExceeded("enumeration starts at n=1")
    if n == 1:
        return (Poset([0]),)
    reps = {}
    for q in posets_of_size(n - 1, cap):
        for ideal in order_ideals(q):
            rows = list(q._up)
            rows.append(0)
            for d in _bits(ideal):
                rows[d] |= 1 << (n - 1)
            cand = Poset(rows)
            key = canonical_key(cand)
            if key not in reps:
                reps[key] = canonical_form(cand)
    return tuple(reps[k] for k in sorted(reps))


def catalog_upto(max_n: int, cap: int = DEFAULT_CAP):
    """Map size -> tuple of representatives, for sizes 1..max_n."""
    return {n: posets_of_size(n, cap) for n in range(1, max_n + 1)}


def posets_by_triangular_filter(n: int):
    """Independent enumeration for cross-checks (n <= 5).

    Every poset, relabeled along a linear extension, is a transitively
    closed relation inside the strict upper triangle; filtering those
    candidates and deduplicating by canonical key reaches every class.
    """
    if n > 5:
        raise CapExceeded("triangular filter enumeration is for n <= 5")
    pairs = list(combinations(range(n), 2))
    keys = set()
    for mask in range(1 << len(pairs)):
        rows = [0] * n
        for i, (a, b) in enumerate(pairs):
            if mask >> i & 1:
                rows[a] |= 1 << b
        ok = True
        for x in range(n):
            rest = rows[x]
            while rest:
                low = rest & -rest
                y = low.bit_length() - 1
                rest ^= low
                if rows[y] & ~rows[x]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            keys.add(canonical_key(Poset(rows, validate=False)))
    return sorted(keys)


def posets_by_relation_filter(n: int):
    """Third cross-check for tiny n: filter all labeled off-diagonal relations."""
    if n > 4:
        raise CapExceeded("full relation filter enumeration is for n <= 4")
    cells = [(a, b) for a in range(n) for b in range(n) if a != b]
    keys = set()
    for mask in range(1 << len(cells)):
        rows = [0] * n
        for i, (a, b) in enumerate(cells):
            if mask >> i & 1:
                rows[a] |= 1 << b
        ok = True
        for x in range(n):
            if rows[x] >> x & 1:
                ok = False
                break
            rest = rows[x]
            while rest and ok:
                low = rest & -rest
                y = low.bit_length() - 1
                rest ^= low
                if rows[y] >> x & 1 or rows[y] & ~rows[x]:
                    ok = False
            if not ok:
                break
        if ok:
            keys.add(canonical_key(Poset(rows, validate=False)))
    return sorted(keys)


def dump_catalog(directory: str, max_n: int, cap: int = DEFAULT_CAP) -> dict:
    """Write one poset text file per class, named by canonical-key hash,
    plus a manifest listing counts per size. Returns the manifest."""
    from .poset import poset_to_text

    os.makedirs(directory, exist_ok=True)
    counts = {}
    for n in range(1, max_n + 1):
        reps = posets_of_size(n, cap)
        counts[str(n)] = len(reps)
        for p in reps:
            digest = hashlib.sha256(canonical_key(p)).hexdigest()[:16]
            path = os.path.join(directory, f"n{n}_{digest}.poset")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(poset_to_text(p))
    manifest = {"schema": 1, "counts": counts}
    with open(os.path.join(directory, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest

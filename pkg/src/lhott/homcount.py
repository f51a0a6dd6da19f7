"""Brute-force enumeration of surface-relation solutions in a finite group.

This is the one genuinely hot integer loop in the package: counting tuples
(a₁, b₁, …, a_g, b_g) ∈ G^{2g} with ∏ᵢ [aᵢ, bᵢ] = e by walking all |G|^{2g}
candidates through the multiplication table.  Everything is small machine
integers, so it gets two interchangeable backends:

* ``numpy``: chunked vectorized evaluation via fancy indexing;
* ``numba``: an ``@njit`` scalar loop over the same mixed-radix encoding.

The backend is picked by the ``LHOTT_BACKEND`` environment variable
(``auto`` | ``numpy`` | ``numba``; ``auto`` prefers numba when importable).
Both backends return bit-identical sorted solution indices; tuples are
encoded big-endian, so index order is lexicographic tuple order.

``benchmarks/bench_homcount.py`` times the two against each other.
"""

import os

import numpy as np

_CHUNK = 1 << 16
_backend = None


def _resolve_backend():
    choice = os.environ.get("LHOTT_BACKEND", "auto").lower()
    if choice not in ("auto", "numpy", "numba"):
        raise ValueError("LHOTT_BACKEND must be auto, numpy or numba")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except Exception:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


def active_backend():
    global _backend
    if _backend is None:
        _backend = _resolve_backend()
    return _backend


def encode_tuple(tup, n):
    flat = 0
    for x in tup:
        flat = flat * n + int(x)
    return flat


def decode_tuple(flat, n, length):
    out = [0] * length
    for j in range(length - 1, -1, -1):
        out[j] = flat % n
        flat //= n
    return tuple(out)


def _solutions_numpy(mult, inv, genus, total, n):
    if genus == 0:
        return np.zeros(1, dtype=np.int64)
    out = []
    slots = 2 * genus
    weights = [n ** (slots - 1 - j) for j in range(slots)]
    identity = int(np.nonzero([all(mult[e][b] == b for b in range(n))
                               for e in range(n)])[0][0])
    for lo in range(0, total, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        c = np.full(idx.shape, identity, dtype=np.int64)
        for i in range(genus):
            a = (idx // weights[2 * i]) % n
            b = (idx // weights[2 * i + 1]) % n
            c = mult[c, a]
            c = mult[c, b]
            c = mult[c, inv[a]]
            c = mult[c, inv[b]]
        out.append(idx[c == identity])
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


_numba_kernels = None


def _get_numba_kernels():
    global _numba_kernels
    if _numba_kernels is None:
        from numba import njit

        @njit(cache=False)
        def _count(mult, inv, genus, total, n, identity):
            count = 0
            for t in range(total):
                c = identity
                rest = t
                w = total
                for i in range(genus):
                    w //= n
                    a = (rest // w) % n
                    rest -= a * w
                    w //= n
                    b = (rest // w) % n
                    rest -= b * w
                    c = mult[c, a]
                    c = mult[c, b]
                    c = mult[c, inv[a]]
                    c = mult[c, inv[b]]
                if c == identity:
                    count += 1
            return count

        @njit(cache=False)
        def _collect(mult, inv, genus, total, n, identity, out):
            k = 0
            for t in range(total):
                c = identity
                rest = t
                w = total
                for i in range(genus):
                    w //= n
                    a = (rest // w) % n
                    rest -= a * w
                    w //= n
                    b = (rest // w) % n
                    rest -= b * w
                    c = mult[c, a]
                    c = mult[c, b]
                    c = mult[c, inv[a]]
                    c = mult[c, inv[b]]
                if c == identity:
                    out[k] = t
                    k += 1
            return k

        _numba_kernels = (_count, _collect)
    return _numba_kernels


def _solutions_numba(mult, inv, genus, total, n):
    if genus == 0:
        return np.zeros(1, dtype=np.int64)
    count_fn, collect_fn = _get_numba_kernels()
    identity = 0
    for e in range(n):
        if all(mult[e][b] == b for b in range(n)):
            identity = e
            break
    total_count = count_fn(mult, inv, genus, total, n, identity)
    out = np.empty(total_count, dtype=np.int64)
    collect_fn(mult, inv, genus, total, n, identity, out)
    return out


def relation_solutions(table, genus, backend=None):
    """Sorted flat indices of all 2g-tuples satisfying the surface relation."""
    n = len(table)
    total = n ** (2 * genus)
    mult = np.asarray(table, dtype=np.int64)
    inv = np.empty(n, dtype=np.int64)
    identity = None
    for e in range(n):
        if all(table[e][b] == b for b in range(n)):
            identity = e
            break
    for a in range(n):
        for b in range(n):
            if table[a][b] == identity and table[b][a] == identity:
                inv[a] = b
                break
    backend = backend or active_backend()
    if backend == "numba":
        return _solutions_numba(mult, inv, genus, total, n)
    return _solutions_numpy(mult, inv, genus, total, n)


def count_relation_solutions(table, genus, backend=None):
    return int(relation_solutions(table, genus, backend=backend).shape[0])

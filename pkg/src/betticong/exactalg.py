"""Exact linear algebra over the integers, the rationals, and prime fields.

Everything downstream (cohomology, group actions, the Borel complex) reduces
to the primitives in this module: reduced row echelon forms with kernel
bases, integer Smith normal form, p-local valuation profiles and the Jordan
block partition of a nilpotent operator.  All arithmetic is exact: Python
ints, ``fractions.Fraction`` for the rationals, canonical residues in
``[0, p)`` for prime fields.  Dense matrices are numpy arrays (``int64`` for
prime fields, ``object`` otherwise); the sparse routines work on
dict-of-rows and exist because the corpus coboundary matrices are large but
eliminate with tiny fill-in.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

# int64 products must not overflow: entries < p, p*p < 2**63.
_MAX_FIELD_PRIME = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class RationalField:
    """The field Q; elements are ints or ``Fraction`` in lowest terms."""

    char = 0
    name = "Q"

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p; elements are canonical residues in ``[0, p)``."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= _MAX_FIELD_PRIME:
            raise ValueError(f"prime {p} too large for int64 arithmetic")
        self.p = p
        self.char = p
        self.name = f"F{p}"

    def coerce(self, x):
        return int(x) % self.p

    def inv(self, a: int) -> int:
        return pow(int(a) % self.p, -1, self.p)

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_matrix(rows, field, ncols: int | None = None) -> np.ndarray:
    """Coerce a 2-D array-like into the canonical dense carrier for *field*."""
    dtype = np.int64 if isinstance(field, PrimeField) else object
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        m = rows.astype(dtype)
    elif len(rows):
        m = np.array(rows, dtype=dtype)
        if m.ndim == 1:
            m = m.reshape((1, -1))
    else:
        m = np.zeros((0, ncols or 0), dtype=dtype)
    if isinstance(field, PrimeField):
        return m % field.p
    return m


# ---------------------------------------------------------------------------
# Dense reduced row echelon form and kernels
# ---------------------------------------------------------------------------

def rref(matrix, field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over *field*; returns ``(R, pivot_columns)``.

    Deterministic: pivots are the first nonzero entry scanning down each
    column in input row order.
    """
    if isinstance(field, PrimeField):
        return _rref_modp(matrix, field.p)
    return _rref_exact(matrix)


def _rref_modp(matrix, p: int) -> tuple[np.ndarray, list[int]]:
    M = field_matrix(matrix, GF(p))
    m, n = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        piv = int(nz[0]) + r
        if piv != r:
            M[[r, piv]] = M[[piv, r]].copy()
        inv = pow(int(M[r, c]), -1, p)
        if inv != 1:
            M[r, c:] = (M[r, c:] * inv) % p
        hit = np.nonzero(M[:, c])[0]
        hit = hit[hit != r]
        if hit.size:
            f = M[hit, c]
            M[np.ix_(hit, range(c, n))] = (
                M[np.ix_(hit, range(c, n))] - np.outer(f, M[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return M, pivots


def _rref_exact(matrix) -> tuple[np.ndarray, list[int]]:
    M = field_matrix(matrix, QQ).copy()
    m, n = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        piv = None
        for i in range(r, m):
            if M[i, c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            M[[r, piv]] = M[[piv, r]].copy()
        pv = M[r, c]
        if pv != 1:
            M[r, c:] = [Fraction(x) / pv if x else x for x in M[r, c:]]
        for i in range(m):
            if i != r and M[i, c]:
                M[i, c:] = M[i, c:] - M[i, c] * M[r, c:]
        pivots.append(c)
        r += 1
    return M, pivots


def _kernel_from_rref(R: np.ndarray, pivots: list[int], n: int, field) -> list[np.ndarray]:
    piv_set = set(pivots)
    free = [j for j in range(n) if j not in piv_set]
    basis = []
    for f in free:
        if isinstance(field, PrimeField):
            v = np.zeros(n, dtype=np.int64)
            v[f] = 1
            for row_idx, pc in enumerate(pivots):
                v[pc] = (-int(R[row_idx, f])) % field.p
        else:
            v = np.zeros(n, dtype=object)
            v[f] = 1
            for row_idx, pc in enumerate(pivots):
                v[pc] = -R[row_idx, f]
        basis.append(v)
    return basis


def rank_and_kernel(matrix, field) -> tuple[int, list[np.ndarray]]:
    """Rank and a deterministic kernel basis; rank + len(kernel) = ncols.

    One kernel vector per free column: entry 1 at the free column, pivot
    entries back-substituted from the rref.
    """
    M = field_matrix(matrix, field)
    n = M.shape[1]
    R, pivots = rref(M, field)
    return len(pivots), _kernel_from_rref(R, pivots, n, field)


def kernel_basis(matrix, field) -> list[np.ndarray]:
    return rank_and_kernel(matrix, field)[1]


def rank(matrix, field) -> int:
    return len(rref(matrix, field)[1])


def matmul(A, B, field):
    """Exact matrix product in the canonical carrier of *field*."""
    if isinstance(field, PrimeField):
        A = field_matrix(A, field)
        B = field_matrix(B, field)
        return (A.astype(object) @ B.astype(object) % field.p).astype(np.int64)
    return np.array(A, dtype=object) @ np.array(B, dtype=object)


def invert(M, field) -> np.ndarray:
    """Exact inverse of a square matrix over *field*; raises if singular."""
    M = field_matrix(M, field)
    n = M.shape[0]
    if n != M.shape[1]:
        raise ValueError("invert needs a square matrix")
    ident = np.eye(n, dtype=np.int64) if isinstance(field, PrimeField) else np.eye(n, dtype=object)
    aug = np.concatenate([M, ident], axis=1)
    R, piv = rref(aug, field)
    if piv != list(range(n)):
        raise ValueError("matrix is singular")
    return R[:, n:]


# ---------------------------------------------------------------------------
# Sparse exact elimination (rank only)
# ---------------------------------------------------------------------------

def _sparse_eliminate(rows: list[dict[int, int]], p: int | None) -> int:
    """Rank by sparse elimination; ``p`` a prime for F_p, ``None`` for Q.

    Rows are dicts {column: nonzero int}.  The rational case runs
    fraction-free on integer rows with gcd normalisation, so it is exact.
    Pivot choice: sparsest active row first, then the entry whose column
    hits fewest rows (classic fill-in heuristic); ties break on indices so
    the elimination is deterministic.
    """
    work = [dict(r) for r in rows]
    col_rows: dict[int, set[int]] = {}
    for i, row in enumerate(work):
        for c in row:
            col_rows.setdefault(c, set()).add(i)
    heap = [(len(row), i) for i, row in enumerate(work) if row]
    heapq.heapify(heap)
    active = {i for i, row in enumerate(work) if row}
    rnk = 0
    while heap:
        nnz, i = heapq.heappop(heap)
        if i not in active:
            continue
        row = work[i]
        if len(row) != nnz:  # stale heap entry
            heapq.heappush(heap, (len(row), i))
            continue
        pc = min(row, key=lambda c: (len(col_rows[c] & active), c))
        pv = row[pc]
        active.discard(i)
        if p is not None:
            inv = pow(pv % p, -1, p)
            if inv != 1:
                for c in list(row):
                    row[c] = row[c] * inv % p
        targets = [j for j in col_rows[pc] if j in active]
        for j in targets:
            other = work[j]
            f = other[pc]
            if p is not None:
                for c, v in row.items():
                    nv = (other.get(c, 0) - f * v) % p
                    if nv:
                        if c not in other:
                            col_rows.setdefault(c, set()).add(j)
                        other[c] = nv
                    elif c in other:
                        del other[c]
                        col_rows[c].discard(j)
            else:
                # Fraction-free update: other <- pv*other - f*row.
                for c in list(other):
                    if c not in row:
                        other[c] = other[c] * pv
                for c, v in row.items():
                    nv = (other[c] * pv if c in other else 0) - f * v
                    if nv:
                        if c not in other:
                            col_rows.setdefault(c, set()).add(j)
                        other[c] = nv
                    elif c in other:
                        del other[c]
                        col_rows[c].discard(j)
                if other:
                    g = 0
                    for v in other.values():
                        g = math.gcd(g, v)
                        if g == 1:
                            break
                    if g > 1:
                        for c in other:
                            other[c] //= g
            if not other:
                active.discard(j)
            else:
                heapq.heappush(heap, (len(other), j))
        for c in row:
            col_rows[c].discard(i)
        rnk += 1
    return rnk


def sparse_rank_modp(rows: list[dict[int, int]], p: int) -> int:
    """Exact rank over F_p of a dict-of-rows matrix."""
    return _sparse_eliminate(rows, p)


def sparse_rank_q(rows: list[dict[int, int]]) -> int:
    """Exact rank over Q of an integer dict-of-rows matrix."""
    return _sparse_eliminate(rows, None)


def sparse_rref_q(rows: list[dict[int, int]]) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Sparse reduced echelon basis of the row space over Q.

    Returns (pivot rows as dicts with the pivot entry normalised to 1,
    pivot columns, sorted).  Pivot columns follow the fill-in heuristic,
    not the leftmost-column rule, so the basis differs from the canonical
    dense rref while spanning the same row space; each pivot column is 1 in
    its own row and 0 in every other, which is all the reducers need.
    Fraction-free elimination with gcd row normalisation keeps the
    arithmetic integral until the final scaling, so large sparse coboundary
    matrices reduce in near-linear time.  Deterministic for fixed input.
    """
    work = [dict(r) for r in rows]
    col_rows: dict[int, set[int]] = {}
    for i, row in enumerate(work):
        for c in row:
            col_rows.setdefault(c, set()).add(i)

    def eliminate(dst: int, src: int, pivot_col: int):
        """dst <- pv*dst - f*src (fraction-free), maintaining the index."""
        other, srow = work[dst], work[src]
        pv, f = srow[pivot_col], other[pivot_col]
        for c in list(other):
            if c not in srow:
                other[c] = other[c] * pv
        for c, v in srow.items():
            nv = (other[c] * pv if c in other else 0) - f * v
            if nv:
                if c not in other:
                    col_rows.setdefault(c, set()).add(dst)
                other[c] = nv
            elif c in other:
                del other[c]
                col_rows[c].discard(dst)
        if other:
            g = 0
            for v in other.values():
                g = math.gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                for c in other:
                    other[c] //= g

    heap = [(len(row), i) for i, row in enumerate(work) if row]
    heapq.heapify(heap)
    active = {i for i, row in enumerate(work) if row}
    pivots: list[tuple[int, int]] = []  # (row, col) in elimination order
    while heap:
        nnz, i = heapq.heappop(heap)
        if i not in active:
            continue
        row = work[i]
        if len(row) != nnz:
            heapq.heappush(heap, (len(row), i))
            continue
        pc = min(row, key=lambda c: (len(col_rows[c] & active), c))
        active.discard(i)
        pivots.append((i, pc))
        for j in [j for j in col_rows[pc] if j in active]:
            eliminate(j, i, pc)
            if not work[j]:
                active.discard(j)
            else:
                heapq.heappush(heap, (len(work[j]), j))
        for c in row:
            col_rows[c].discard(i)
    # Backward pass: clear pivot columns from the other pivot rows.
    pivot_rows = {i for i, _ in pivots}
    for c in list(col_rows):
        col_rows[c] &= pivot_rows
    for i, row in enumerate(work):
        if i in pivot_rows:
            for c in row:
                col_rows.setdefault(c, set()).add(i)
    for (i, pc) in reversed(pivots):
        for j in [j for j in col_rows.get(pc, ()) if j != i and j in pivot_rows]:
            eliminate(j, i, pc)
    # Normalise pivots to 1 and sort by pivot column.
    out_rows: list[dict[int, Fraction]] = []
    out_pivots: list[int] = []
    for (i, pc) in sorted(pivots, key=lambda t: t[1]):
        row = work[i]
        pv = row[pc]
        out_rows.append({c: Fraction(v, pv) for c, v in row.items()})
        out_pivots.append(pc)
    return out_rows, out_pivots


def sparse_kernel_q(rows: list[dict[int, int]], ncols: int) -> tuple[int, list[dict[int, Fraction]]]:
    """(rank, sparse kernel basis) over Q: one vector per free column."""
    rref_rows, pivots = sparse_rref_q(rows)
    piv_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in piv_set:
            continue
        v: dict[int, Fraction] = {f: Fraction(1)}
        for row, pc in zip(rref_rows, pivots):
            if f in row:
                v[pc] = -row[f]
        basis.append(v)
    return len(pivots), basis


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithForm:
    """Divisor chain of an integer matrix: d_1 | d_2 | ... , zeros last.

    ``divisors`` has length min(rows, cols); ``rank`` counts the nonzero
    entries.  When transforms are requested, ``left @ m @ right`` equals the
    diagonal matrix of ``divisors``.
    """

    divisors: tuple[int, ...]
    rank: int
    left: np.ndarray | None = None
    right: np.ndarray | None = None


def smith_normal_form(matrix, want_transforms: bool = False) -> SmithForm:
    """Smith normal form of an integer matrix, exact at any size.

    Pivot selection: smallest absolute value among the remaining nonzero
    entries, ties broken by lowest (row, col); this bounds entry growth and
    makes the reduction deterministic.  Arithmetic is arbitrary-precision.
    """
    M = np.array(matrix, dtype=object)
    if M.size == 0:
        if M.ndim == 1:
            shape = (0, 0)
        else:
            shape = M.shape
        L = np.identity(shape[0], dtype=object) if want_transforms else None
        R = np.identity(shape[1] if len(shape) > 1 else 0, dtype=object) if want_transforms else None
        return SmithForm(divisors=(), rank=0, left=L, right=R)
    if M.ndim == 1:
        M = M.reshape((1, -1))
    m, n = M.shape
    for i in range(m):
        for j in range(n):
            M[i, j] = int(M[i, j])

    rows: dict[int, dict[int, int]] = {}
    col_rows: dict[int, set[int]] = {}
    for i in range(m):
        for j in range(n):
            if M[i, j]:
                rows.setdefault(i, {})[j] = int(M[i, j])
                col_rows.setdefault(j, set()).add(i)

    L = np.identity(m, dtype=object) if want_transforms else None
    R = np.identity(n, dtype=object) if want_transforms else None

    def row_sub(dst: int, src: int, q: int):
        src_row = rows.get(src, {})
        d = rows.setdefault(dst, {})
        for c, v in src_row.items():
            nv = d.get(c, 0) - q * v
            if nv:
                d[c] = nv
                col_rows.setdefault(c, set()).add(dst)
            elif c in d:
                del d[c]
                col_rows[c].discard(dst)
        if not d:
            rows.pop(dst, None)
        if want_transforms:
            L[dst, :] -= q * L[src, :]

    def col_sub(dst: int, src: int, q: int):
        for i in list(col_rows.get(src, ())):
            row = rows[i]
            v = row[src]
            nv = row.get(dst, 0) - q * v
            if nv:
                row[dst] = nv
                col_rows.setdefault(dst, set()).add(i)
            elif dst in row:
                del row[dst]
                col_rows[dst].discard(i)
        if want_transforms:
            R[:, dst] -= q * R[:, src]

    def negate_row(i: int):
        row = rows.get(i)
        if row:
            for c in row:
                row[c] = -row[c]
        if want_transforms:
            L[i, :] = -L[i, :]

    pivot_positions: list[tuple[int, int]] = []
    divisors: list[int] = []

    while rows:
        best = None
        for i in sorted(rows):
            for c, v in rows[i].items():
                key = (abs(v), i, c)
                if best is None or key < best:
                    best = key
        _, pi, pc = best

        while True:
            if rows[pi][pc] < 0:
                negate_row(pi)
            pv = rows[pi][pc]
            # Clear the pivot column with floor-division row operations, then
            # re-select if a smaller remainder appeared.
            progress = False
            for j in sorted(col_rows.get(pc, set()) - {pi}):
                q = rows[j][pc] // pv
                if q:
                    row_sub(j, pi, q)
                    progress = True
            residual = sorted(col_rows.get(pc, set()) - {pi})
            if residual:
                # Remainders in [0, pv) became new, smaller pivot candidates.
                j = min(residual, key=lambda r: (abs(rows[r][pc]), r))
                pi = j
                continue
            # Clear the pivot row by column operations.
            pv = rows[pi][pc]
            for c in sorted(set(rows[pi]) - {pc}):
                q = rows[pi][c] // pv
                if q:
                    col_sub(c, pc, q)
            rest = sorted(set(rows[pi]) - {pc})
            if rest:
                c = min(rest, key=lambda cc: (abs(rows[pi][cc]), cc))
                # Move the smaller entry into the pivot column.
                if want_transforms:
                    R[:, pc], R[:, c] = R[:, c].copy(), R[:, pc].copy()
                for i in set(col_rows.get(pc, set())) | set(col_rows.get(c, set())):
                    row = rows[i]
                    a, b = row.get(pc), row.get(c)
                    if a is None and b is None:
                        continue
                    if b is None:
                        del row[pc]
                        col_rows[pc].discard(i)
                        row[c] = a
                        col_rows.setdefault(c, set()).add(i)
                    elif a is None:
                        del row[c]
                        col_rows[c].discard(i)
                        row[pc] = b
                        col_rows.setdefault(pc, set()).add(i)
                    else:
                        row[pc], row[c] = b, a
                continue
            # Pivot isolated; enforce that it divides every remaining entry.
            pv = rows[pi][pc]
            offender = None
            for i in sorted(rows):
                if i == pi:
                    continue
                for c, v in sorted(rows[i].items()):
                    if v % pv:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_sub(pi, offender, -1)  # add offending row, restart reduction

        divisors.append(abs(rows[pi][pc]))
        pivot_positions.append((pi, pc))
        col_rows[pc].discard(pi)
        del rows[pi]

    if want_transforms:
        # Permute recorded pivots onto the leading diagonal.
        used_r = {pi for pi, _ in pivot_positions}
        used_c = {pc for _, pc in pivot_positions}
        row_order = [pi for pi, _ in pivot_positions] + [i for i in range(m) if i not in used_r]
        col_order = [pc for _, pc in pivot_positions] + [c for c in range(n) if c not in used_c]
        L = L[row_order, :]
        R = R[:, col_order]

    divisors += [0] * (min(m, n) - len(divisors))
    return SmithForm(
        divisors=tuple(divisors),
        rank=sum(1 for d in divisors if d),
        left=L,
        right=R,
    )


def p_valuation_profile(rows: list[dict[int, int]], p: int) -> list[int]:
    """p-adic valuations of the nonzero Smith divisors, ascending.

    Works p-locally: eliminate with p-unit pivots (fraction-free, rows
    renormalised by the prime-to-p part of their gcd), then divide the fully
    p-divisible remainder by p and recurse.  The number of pivots found at
    stage k equals the number of divisors with valuation exactly k.  Much
    cheaper than a full Smith reduction on large matrices and exact.
    """
    work = [dict(r) for r in rows if r]
    vals: list[int] = []
    stage = 0
    while work:
        col_rows: dict[int, set[int]] = {}
        for i, row in enumerate(work):
            for c in row:
                col_rows.setdefault(c, set()).add(i)
        active = set(range(len(work)))
        heap = [(len(row), i) for i, row in enumerate(work)]
        heapq.heapify(heap)
        found = 0
        while heap:
            nnz, i = heapq.heappop(heap)
            if i not in active:
                continue
            row = work[i]
            if len(row) != nnz:
                heapq.heappush(heap, (len(row), i))
                continue
            unit_cols = [c for c, v in row.items() if v % p]
            if not unit_cols:
                continue  # row currently has no p-unit entry; may gain none
            pc = min(unit_cols, key=lambda c: (len(col_rows[c] & active), c))
            pv = row[pc]
            active.discard(i)
            found += 1
            for j in list(col_rows[pc]):
                if j not in active:
                    continue
                other = work[j]
                f = other[pc]
                for c in list(other):
                    other[c] = other[c] * pv
                for c, v in row.items():
                    nv = other.get(c, 0) - f * v
                    if nv:
                        if c not in other:
                            col_rows.setdefault(c, set()).add(j)
                        other[c] = nv
                    elif c in other:
                        del other[c]
                        col_rows[c].discard(j)
                if other:
                    g = 0
                    for v in other.values():
                        g = math.gcd(g, v)
                    g_unit = g
                    while g_unit % p == 0:
                        g_unit //= p
                    if g_unit > 1:
                        for c in other:
                            other[c] //= g_unit
                    heapq.heappush(heap, (len(other), j))
                else:
                    active.discard(j)
            for c in row:
                col_rows[c].discard(i)
        vals.extend([stage] * found)
        # Everything left is divisible by p: strip one factor and recurse.
        nxt = []
        for i in active:
            row = work[i]
            if row:
                nxt.append({c: v // p for c, v in row.items()})
        work = nxt
        stage += 1
    return sorted(vals)


# ---------------------------------------------------------------------------
# Nilpotent block structure
# ---------------------------------------------------------------------------

def nilpotent_block_sizes(matrix, field, bound: int) -> list[int]:
    """Jordan block size partition of a nilpotent operator, descending.

    Derived from the kernel-dimension profile: dim ker(n^k) = sum over
    blocks of min(k, size).  Rejects input with ``n**bound != 0``.
    """
    if isinstance(field, PrimeField):
        N = field_matrix(matrix, field)
    else:
        N = np.array(matrix, dtype=object)
    if N.ndim != 2 or N.shape[0] != N.shape[1]:
        raise ValueError("nilpotent_block_sizes needs a square matrix")
    dim = N.shape[0]
    if dim == 0:
        return []
    power = N
    ker_dims = [0, dim - rank(N, field)]
    k = 1
    while ker_dims[-1] < dim and k < bound:
        power = matmul(power, N, field)
        ker_dims.append(dim - rank(power, field))
        k += 1
    if ker_dims[-1] < dim:
        raise ValueError(f"matrix is not nilpotent within bound {bound}")
    # blocks of size >= k: ker_dims[k] - ker_dims[k-1]
    at_least = [ker_dims[k] - ker_dims[k - 1] for k in range(1, len(ker_dims))]
    at_least.append(0)
    sizes: list[int] = []
    for s in range(1, len(at_least)):
        sizes.extend([s] * (at_least[s - 1] - at_least[s]))
    return sorted(sizes, reverse=True)

"""Exact integer linear algebra: Smith normal form, kernels, lattice quotients.

Everything here runs on Python's arbitrary-precision integers; there is no
floating point anywhere.  Matrices are immutable tuples of row tuples, small
enough in this project that dense storage is fine.  The workhorses are

* :func:`snf` -- Smith normal form with unimodular transforms,
* :func:`kernel_basis` -- saturated basis of an integer kernel,
* :func:`quotient_invariants` -- structure of a lattice quotient L1/L2.

The elimination kernels accept an optional modulus: when the column span of
the input is known to contain N*Z^n, every entry may be reduced mod N without
changing the spanned lattice, which keeps coefficients tiny.  The finite
coefficient pipeline in the engine relies on this.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

try:
    import numpy as _np
except ImportError:  # pragma: no cover - numpy is a declared dependency
    _np = None

# int64 fast paths bail out (and the pure-int path reruns from scratch) when
# any intermediate could reach this magnitude
_INT64_GUARD = 1 << 62


class _NumericRisk(Exception):
    """An int64 fast path cannot guarantee exactness; retry with Python ints."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g.

    >>> xgcd(12, 18)
    (6, -1, 1)
    >>> xgcd(0, -5)
    (5, 0, -1)
    """
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, stored as a tuple of row tuples."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged rows")
        else:
            width = 0 if cols is None else cols
        return IntMatrix(len(data), width, data)

    @staticmethod
    def from_columns(cols: Sequence[Sequence[int]], dim: int | None = None) -> "IntMatrix":
        if not cols:
            if dim is None:
                raise ValueError("need dim for an empty column list")
            return IntMatrix(dim, 0, tuple(() for _ in range(dim)))
        dim = len(cols[0])
        return IntMatrix.from_rows(
            [[int(c[i]) for c in cols] for i in range(dim)], cols=len(cols)
        )

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[list[int]]:
        return [[r[j] for r in self.data] for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.data else ())

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        bt = list(zip(*other.data)) if other.data else [()] * other.cols
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in bt) for row in self.data
        )
        return IntMatrix(self.rows, other.cols, out)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("dimension mismatch")
        return IntMatrix(
            self.rows,
            self.cols + other.cols,
            tuple(a + b for a, b in zip(self.data, other.data)),
        )

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("dimension mismatch")
        return IntMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(c * x for x in r) for r in self.data))

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in r) for r in self.data)

    def mod(self, n: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(x % n for x in r) for r in self.data))

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in r) for r in self.data)


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = D with U, V unimodular and D = diag(d1 | d2 | ...).

    ``invariants`` lists the diagonal entries larger than 1 (units dropped,
    ascending divisibility); ``zero_entries`` counts zero diagonal positions.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    invariants: tuple[int, ...]
    zero_entries: int

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D.data[i][i] for i in range(min(self.D.rows, self.D.cols)))


@dataclass(frozen=True)
class AbelianInvariants:
    """Isomorphism type of a finitely generated abelian group.

    ``torsion`` is the invariant factor list, ascending divisibility, units
    dropped: Z^free_rank + Z/t1 + Z/t2 + ... with t1 | t2 | ...
    """

    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        prev = None
        for t in self.torsion:
            if t < 2:
                raise ValueError("torsion entries must be > 1")
            if prev is not None and t % prev:
                raise ValueError("torsion entries must form a divisibility chain")
            prev = t

    @staticmethod
    def from_diagonal(diag: Iterable[int], free_rank: int = 0) -> "AbelianInvariants":
        torsion = tuple(sorted(d for d in diag if d > 1))
        zeros = sum(1 for d in diag if d == 0)
        return AbelianInvariants(free_rank + zeros, torsion)

    @staticmethod
    def from_prime_powers(powers: Iterable[tuple[int, int]], free_rank: int = 0) -> "AbelianInvariants":
        """Invariant factors of a direct sum of Z/p^e given as (p, e) pairs."""
        by_prime: dict[int, list[int]] = {}
        for p, e in powers:
            if e > 0:
                by_prime.setdefault(p, []).append(e)
        for exps in by_prime.values():
            exps.sort(reverse=True)
        width = max((len(v) for v in by_prime.values()), default=0)
        factors = []
        for i in range(width):
            f = 1
            for p, exps in by_prime.items():
                if i < len(exps):
                    f *= p ** exps[i]
            factors.append(f)
        return AbelianInvariants(free_rank, tuple(reversed(factors)))

    def prime_powers(self) -> list[tuple[int, int]]:
        out = []
        for t in self.torsion:
            for p, e in _factorize(t):
                out.append((p, e))
        return out

    def direct_sum(self, *others: "AbelianInvariants") -> "AbelianInvariants":
        powers = self.prime_powers()
        rank = self.free_rank
        for o in others:
            powers.extend(o.prime_powers())
            rank += o.free_rank
        return AbelianInvariants.from_prime_powers(powers, rank)

    def repeated(self, n: int) -> "AbelianInvariants":
        """Invariants of a direct sum of n copies (n = rank of a free tensor factor)."""
        if n < 0:
            raise ValueError("negative multiplicity")
        if n == 0:
            return AbelianInvariants(0, ())
        return AbelianInvariants.from_prime_powers(self.prime_powers() * n, self.free_rank * n)

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def as_list(self) -> list[int]:
        return list(self.torsion)


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


# ---------------------------------------------------------------------------
# Smith normal form


def _find_pivot(a: list[list[int]], t: int, m: int, n: int) -> tuple[int, int] | None:
    # smallest absolute value, ties broken by lowest row index, then column
    best = None
    best_val = None
    for i in range(t, m):
        row = a[i]
        for j in range(t, n):
            x = row[j]
            if x:
                ax = -x if x < 0 else x
                if best_val is None or ax < best_val:
                    best_val = ax
                    best = (i, j)
                    if ax == 1:
                        return best
    return best


class _Eliminator:
    """Shared row/column operation bookkeeping for Smith elimination.

    With ``mod`` set, all entries (including transforms) are kept reduced
    mod N.  This is only sound when the caller treats the column span plus
    N*Z^m as the lattice of interest; see the module docstring.
    """

    def __init__(self, rows, m, n, mod=None, want_u=False, want_uinv=False, want_v=False):
        self.m, self.n, self.mod = m, n, mod
        if mod:
            self.a = [[x % mod for x in r] for r in rows]
        else:
            self.a = [list(r) for r in rows]
        eye = lambda k: [[int(i == j) for j in range(k)] for i in range(k)]
        self.u = eye(m) if want_u else None
        self.uinv = eye(m) if want_uinv else None
        self.v = eye(n) if want_v else None

    def _red_row(self, row):
        if self.mod:
            m = self.mod
            for k in range(len(row)):
                row[k] %= m

    def row_combine(self, i, j, q):
        # row_i -= q * row_j
        if not q:
            return
        a, mod = self.a, self.mod
        ai, aj = a[i], a[j]
        for k in range(self.n):
            ai[k] -= q * aj[k]
        self._red_row(ai)
        if self.u is not None:
            ui, uj = self.u[i], self.u[j]
            for k in range(self.m):
                ui[k] -= q * uj[k]
            self._red_row(ui)
        if self.uinv is not None:
            for r in self.uinv:
                r[j] += q * r[i]
                if mod:
                    r[j] %= mod

    def row_swap(self, i, j):
        if i == j:
            return
        a = self.a
        a[i], a[j] = a[j], a[i]
        if self.u is not None:
            self.u[i], self.u[j] = self.u[j], self.u[i]
        if self.uinv is not None:
            for r in self.uinv:
                r[i], r[j] = r[j], r[i]

    def row_negate(self, i):
        self.a[i] = [-x for x in self.a[i]]
        self._red_row(self.a[i])
        if self.u is not None:
            self.u[i] = [-x for x in self.u[i]]
            self._red_row(self.u[i])
        if self.uinv is not None:
            for r in self.uinv:
                r[i] = -r[i] if not self.mod else (-r[i]) % self.mod

    def col_combine(self, j, k, q):
        # col_j -= q * col_k
        if not q:
            return
        mod = self.mod
        for r in self.a:
            r[j] -= q * r[k]
            if mod:
                r[j] %= mod
        if self.v is not None:
            for r in self.v:
                r[j] -= q * r[k]
                if mod:
                    r[j] %= mod

    def col_swap(self, j, k):
        if j == k:
            return
        for r in self.a:
            r[j], r[k] = r[k], r[j]
        if self.v is not None:
            for r in self.v:
                r[j], r[k] = r[k], r[j]

    def col_negate(self, j):
        mod = self.mod
        for r in self.a:
            r[j] = -r[j] if not mod else (-r[j]) % mod
        if self.v is not None:
            for r in self.v:
                r[j] = -r[j] if not mod else (-r[j]) % mod


def _smith_eliminate(el: _Eliminator) -> list[int]:
    """Run Smith elimination in place; return the diagonal entries found."""
    a, m, n = el.a, el.m, el.n
    diag = []
    t = 0
    while t < min(m, n):
        piv = _find_pivot(a, t, m, n)
        if piv is None:
            break
        el.row_swap(t, piv[0])
        el.col_swap(t, piv[1])
        if a[t][t] < 0:
            el.row_negate(t)
        while True:
            p = a[t][t]
            # clear the pivot column (floor division leaves remainders in [0, p))
            dirty = False
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    el.row_combine(i, t, x // p)
                    if a[i][t]:
                        dirty = True
            if dirty:
                i0 = min(
                    (i for i in range(t + 1, m) if a[i][t]),
                    key=lambda i: (a[i][t], i),
                )
                el.row_swap(t, i0)
                continue
            # clear the pivot row; column t is untouched by these
            p = a[t][t]
            dirty = False
            for j in range(t + 1, n):
                x = a[t][j]
                if x:
                    el.col_combine(j, t, x // p)
                    if a[t][j]:
                        dirty = True
            if dirty:
                j0 = min(
                    (j for j in range(t + 1, n) if a[t][j]),
                    key=lambda j: (a[t][j], j),
                )
                el.col_swap(t, j0)
                continue
            # enforce the divisibility chain
            p = a[t][t]
            bad = None
            if p > 1:
                for i in range(t + 1, m):
                    row = a[i]
                    for j in range(t + 1, n):
                        if row[j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                break
            el.row_combine(t, bad, -1)
        diag.append(a[t][t])
        t += 1
    return diag


def snf(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form U*A*V = D over Z.

    Pivot choice is the smallest-absolute-value nonzero entry, ties broken by
    lowest row then column index, so the output is deterministic.

    >>> d = snf(IntMatrix.from_rows([[2, 4], [6, 8]]))
    >>> d.invariants
    (2, 4)
    >>> d.U.mul(IntMatrix.from_rows([[2, 4], [6, 8]])).mul(d.V) == d.D
    True
    """
    el = _Eliminator(A.data, A.rows, A.cols, want_u=True, want_v=True)
    diag = _smith_eliminate(el)
    D = IntMatrix.from_rows(el.a, cols=A.cols)
    U = IntMatrix.from_rows(el.u, cols=A.rows)
    V = IntMatrix.from_rows(el.v, cols=A.cols)
    invariants = tuple(d for d in diag if d > 1)
    zero_entries = min(A.rows, A.cols) - len(diag)
    return SmithDecomposition(U, D, V, invariants, zero_entries)


def _smith_diagonal_np(rows: Sequence[Sequence[int]], m: int, n: int, mod: int | None) -> list[int]:
    """Vectorized Smith diagonal on int64; the diagonal itself is canonical,
    so this only needs to agree with the Python path mathematically, not
    operation for operation.  Raises :class:`_NumericRisk` near overflow."""
    np = _np
    a = np.array([list(r) for r in rows], dtype=np.int64).reshape(m, n)
    if mod:
        a %= mod
    elif a.size and int(np.abs(a).max()) >= _INT64_GUARD:
        raise _NumericRisk
    big = np.iinfo(np.int64).max
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        sub = a[t:, t:]
        vals = np.where(sub != 0, np.abs(sub), big)
        flat = int(vals.argmin())
        if int(vals.reshape(-1)[flat]) == big:
            break
        pi, pj = divmod(flat, n - t)
        if pi:
            a[[t, t + pi], :] = a[[t + pi, t], :]
        if pj:
            a[:, [t, t + pj]] = a[:, [t + pj, t]]
        if a[t, t] < 0:
            a[t, :] = -a[t, :]
        while True:
            if not mod and int(np.abs(a).max()) >= (1 << 31):
                raise _NumericRisk
            p = int(a[t, t])
            qs = a[t + 1 :, t] // p
            if np.any(qs):
                a[t + 1 :, :] -= qs[:, None] * a[t, :][None, :]
                if mod:
                    a[t + 1 :, :] %= mod
            rem = a[t + 1 :, t]
            if np.any(rem):
                cand = np.where(rem != 0, rem, big)  # remainders are in [0, p)
                i0 = t + 1 + int(cand.argmin())
                a[[t, i0], :] = a[[i0, t], :]
                continue
            p = int(a[t, t])
            qs = a[t, t + 1 :] // p
            if np.any(qs):
                a[:, t + 1 :] -= a[:, t][:, None] * qs[None, :]
                if mod:
                    a[:, t + 1 :] %= mod
            rem = a[t, t + 1 :]
            if np.any(rem):
                cand = np.where(rem != 0, rem, big)
                j0 = t + 1 + int(cand.argmin())
                a[:, [t, j0]] = a[:, [j0, t]]
                continue
            p = int(a[t, t])
            if p > 1:
                badmask = (a[t + 1 :, t + 1 :] % p) != 0
                rows_bad = badmask.any(axis=1)
                if rows_bad.any():
                    i = t + 1 + int(rows_bad.argmax())
                    a[t, :] += a[i, :]
                    if mod:
                        a[t, :] %= mod
                    continue
            break
        diag.append(int(a[t, t]))
        t += 1
    return diag


def smith_diagonal(rows: Sequence[Sequence[int]], m: int, n: int, mod: int | None = None) -> list[int]:
    """Just the diagonal of the Smith form (no transforms tracked)."""
    if _np is not None and m * n >= _NP_MIN_CELLS and (not mod or mod < (1 << 31)):
        try:
            return _smith_diagonal_np(rows, m, n, mod)
        except (_NumericRisk, OverflowError):
            pass
    el = _Eliminator(rows, m, n, mod=mod)
    return _smith_eliminate(el)


# ---------------------------------------------------------------------------
# Integer row echelon / Hermite machinery


def _first_nonzero(row: Sequence[int], start: int = 0) -> int | None:
    for j in range(start, len(row)):
        if row[j]:
            return j
    return None


def _echelon_insert(pivots: dict[int, list[int]], row: list[int], mod: int | None = None) -> None:
    """Insert one row into a gcd row-echelon accumulator (span preserving)."""
    if mod:
        row = [x % mod for x in row]
    j = _first_nonzero(row)
    while j is not None:
        p = pivots.get(j)
        if p is None:
            if row[j] < 0:
                row = [-x for x in row]
            pivots[j] = row
            return
        a, b = p[j], row[j]
        if b % a == 0:
            q = b // a
            row = [x - q * y for x, y in zip(row, p)]
        else:
            g, x, y = xgcd(a, b)
            qa, qb = a // g, b // g
            new_p = [x * pa + y * rb for pa, rb in zip(p, row)]
            row = [qa * rb - qb * pa for pa, rb in zip(p, row)]
            if mod:
                new_p = [v % mod for v in new_p]
            pivots[j] = new_p
        if mod:
            row = [x % mod for x in row]
        j = _first_nonzero(row, j + 1)


def _echelon_vectors_py(
    vectors: Iterable[Sequence[int]], width: int, mod: int | None, seed_mod: bool
) -> list[list[int]]:
    pivots: dict[int, list[int]] = {}
    if seed_mod:
        for i in range(width):
            seed = [0] * width
            seed[i] = mod  # type: ignore[assignment]
            pivots[i] = seed
    for v in vectors:
        _echelon_insert(pivots, list(v), mod=mod)
    return [pivots[j] for j in sorted(pivots)]


def _np_first_nonzero(row, start: int = 0) -> int | None:
    nz = _np.nonzero(row[start:])[0]
    return None if nz.size == 0 else start + int(nz[0])


def _echelon_vectors_np(
    vectors: Sequence[Sequence[int]], width: int, mod: int | None, seed_mod: bool
) -> list[list[int]]:
    """int64 mirror of :func:`_echelon_vectors_py`, identical operation order.

    Raises :class:`_NumericRisk` if a combination could leave int64 range;
    with ``mod`` set everything stays in [0, mod) and cannot overflow for
    mod below 2^31.
    """
    np = _np
    pivots: dict[int, "_np.ndarray"] = {}
    if seed_mod:
        for i in range(width):
            seed = np.zeros(width, dtype=np.int64)
            seed[i] = mod
            pivots[i] = seed
    amax = lambda v: int(np.abs(v).max()) if v.size else 0
    for vec in vectors:
        row = np.array(vec, dtype=np.int64)
        if not mod and amax(row) >= _INT64_GUARD:
            raise _NumericRisk
        if mod:
            row %= mod
        j = _np_first_nonzero(row)
        while j is not None:
            p = pivots.get(j)
            if p is None:
                if row[j] < 0:
                    row = -row
                pivots[j] = row
                break
            a, b = int(p[j]), int(row[j])
            if b % a == 0:
                q = b // a
                if not mod and abs(q) * amax(p) + amax(row) >= _INT64_GUARD:
                    raise _NumericRisk
                row = row - q * p
            else:
                g, x, y = xgcd(a, b)
                qa, qb = a // g, b // g
                if not mod:
                    bound = (abs(x) + abs(qb)) * amax(p) + (abs(y) + abs(qa)) * amax(row)
                    if bound >= _INT64_GUARD:
                        raise _NumericRisk
                new_p = x * p + y * row
                row = qa * row - qb * p
                if mod:
                    new_p %= mod
                pivots[j] = new_p
            if mod:
                row %= mod
            j = _np_first_nonzero(row, j + 1)
    return [[int(x) for x in pivots[j]] for j in sorted(pivots)]


# below this size the numpy call overhead outweighs the vectorization win
_NP_MIN_CELLS = 4096


def _echelon_vectors(
    vectors: Iterable[Sequence[int]], width: int, mod: int | None, seed_mod: bool = False
) -> list[list[int]]:
    vlist = [v if isinstance(v, list) else list(v) for v in vectors]
    if (
        _np is not None
        and width * max(len(vlist), 1) >= _NP_MIN_CELLS
        and (not mod or mod < (1 << 31))
    ):
        try:
            return _echelon_vectors_np(vlist, width, mod, seed_mod)
        except (_NumericRisk, OverflowError):
            pass
    return _echelon_vectors_py(vlist, width, mod, seed_mod)


def echelon_rows(rows: Iterable[Sequence[int]], mod: int | None = None) -> list[list[int]]:
    """Row echelon basis (over Z) of the row span, sorted by pivot column."""
    rlist = [list(r) for r in rows]
    if not rlist:
        return []
    return _echelon_vectors(rlist, len(rlist[0]), mod)


def column_hnf(cols: Iterable[Sequence[int]], dim: int, mod: int | None = None) -> list[list[int]]:
    """Canonical column Hermite basis of the lattice spanned by ``cols``.

    With ``mod`` set the lattice is span(cols) + mod*Z^dim: the modulus
    sublattice is seeded first, so the result always has a pivot in every
    row and all entries stay in [0, mod).

    Returned columns are sorted by pivot row; pivots are positive and entries
    of earlier columns at each pivot row are reduced into [0, pivot).
    """
    ech = _echelon_vectors(cols, dim, mod, seed_mod=bool(mod))
    # canonical reduction: entries of earlier columns at later pivot rows
    piv = [(_first_nonzero(c), k) for k, c in enumerate(ech)]
    for p, k in piv:
        c = ech[k]
        for p2, k2 in piv:
            if p2 > p:
                q = ech[k2][p2]
                x = c[p2] // q if q else 0
                if x:
                    ech[k] = c = [a - x * b for a, b in zip(c, ech[k2])]
    return ech


def hermite_reduce(vec: Sequence[int], hnf_cols: Sequence[Sequence[int]]) -> list[int]:
    """Canonical residue of ``vec`` modulo the lattice with Hermite basis ``hnf_cols``."""
    v = list(vec)
    for c in hnf_cols:
        p = _first_nonzero(c)
        q = v[p] // c[p]
        if q:
            v = [a - q * b for a, b in zip(v, c)]
    return v


def solve_in_span(hnf_cols: Sequence[Sequence[int]], vec: Sequence[int]) -> list[int] | None:
    """Integer coordinates of ``vec`` in the Hermite basis, or None if outside."""
    v = list(vec)
    coords = []
    for c in hnf_cols:
        p = _first_nonzero(c)
        q, r = divmod(v[p], c[p])
        if r:
            return None
        if q:
            v = [a - q * b for a, b in zip(v, c)]
        coords.append(q)
    if any(v):
        return None
    return coords


# ---------------------------------------------------------------------------
# Kernels


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Basis of {x : A x = 0} as matrix columns.

    The spanned lattice is saturated: it is the full integer kernel, so the
    quotient of the ambient by it is torsion free.

    >>> kernel_basis(IntMatrix.from_rows([[2, 3]])).columns()
    [[3, -2]]
    """
    if A.cols == 0:
        return IntMatrix.from_columns([], dim=0)
    ech = echelon_rows(A.data)
    if not ech:
        return IntMatrix.identity(A.cols)
    el = _Eliminator(ech, len(ech), A.cols, want_v=True)
    diag = _smith_eliminate(el)
    rank = len(diag)
    vcols = [[el.v[i][j] for i in range(A.cols)] for j in range(rank, A.cols)]
    return IntMatrix.from_columns(vcols, dim=A.cols)


def _congruence_reduce_np(
    rows: Iterable[Sequence[tuple[int, int]]], n: int, N: int
) -> list[list[int]]:
    """int64 mirror of the pure congruence reduction, same operation order.

    Everything stays in [0, N); for N below 2^31 the worst intermediate is
    a sum of two products under 2^62, so int64 cannot overflow.
    """
    np = _np
    B = np.eye(n, dtype=np.int64)
    for constraint in rows:
        w = np.zeros(n, dtype=np.int64)
        for i, c in constraint:
            c %= N
            if c:
                w = (w + c * B[i]) % N
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            continue
        j0 = int(nz[0])
        for k in nz[1:]:
            k = int(k)
            a, b = int(w[j0]), int(w[k])
            if b % a == 0:
                q = b // a
                B[:, k] = (B[:, k] - q * B[:, j0]) % N
            else:
                g, x, y = xgcd(a, b)
                qa, qb = a // g, b // g
                cj = B[:, j0].copy()
                ck = B[:, k].copy()
                B[:, j0] = (x * cj + y * ck) % N
                B[:, k] = (qa * ck - qb * cj) % N
                w[j0] = g
        g = int(w[j0])
        f = N // gcd(g, N)
        if f > 1:
            B[:, j0] = (B[:, j0] * f) % N
    return [[int(B[i, j]) for i in range(n)] for j in range(n)]


def congruence_kernel_columns(
    rows: Iterable[Sequence[tuple[int, int]]], n: int, N: int
) -> list[list[int]]:
    """Generators B of {x in Z^n : A x = 0 mod N}, as span(B) + N*Z^n.

    ``rows`` yields sparse constraint rows as (index, coefficient) pairs.
    The returned list holds n columns; callers append N*e_i themselves when
    a full generating set is needed.
    """
    if _np is not None and n >= 64 and 1 < N < (1 << 31):
        return _congruence_reduce_np(rows, n, N)
    B = [[int(i == j) for j in range(n)] for i in range(n)]  # row-major state
    for constraint in rows:
        w = [0] * n
        for i, c in constraint:
            c %= N
            if not c:
                continue
            bi = B[i]
            for j in range(n):
                w[j] = (w[j] + c * bi[j]) % N
        nz = [j for j in range(n) if w[j]]
        if not nz:
            continue
        j0 = nz[0]
        for k in nz[1:]:
            a, b = w[j0], w[k]
            if b % a == 0:
                q = b // a
                for row in B:
                    row[k] = (row[k] - q * row[j0]) % N
            else:
                g, x, y = xgcd(a, b)
                qa, qb = a // g, b // g
                for row in B:
                    rj, rk = row[j0], row[k]
                    row[j0] = (x * rj + y * rk) % N
                    row[k] = (qa * rk - qb * rj) % N
                w[j0] = g
        g = w[j0]
        f = N // gcd(g, N)
        if f > 1:
            for row in B:
                row[j0] = (row[j0] * f) % N
    return [[B[i][j] for i in range(n)] for j in range(n)]


# ---------------------------------------------------------------------------
# Lattice quotients


def quotient_invariants(K: IntMatrix, I: IntMatrix) -> AbelianInvariants:
    """Structure of (column span of K) / (column span of I).

    Rejects input where span(I) is not contained in span(K).

    >>> K = IntMatrix.from_columns([[1, 1]])
    >>> quotient_invariants(K, IntMatrix.from_columns([[2, 2]]))
    AbelianInvariants(free_rank=0, torsion=(2,))
    """
    if K.rows != I.rows:
        raise ValueError("ambient dimension mismatch")
    hk = column_hnf(K.columns(), K.rows)
    coords = []
    for c in I.columns():
        y = solve_in_span(hk, c)
        if y is None:
            raise ValueError("relation columns do not lie in the spanned lattice")
        coords.append(y)
    r = len(hk)
    if r == 0:
        return AbelianInvariants(0, ())
    ech = echelon_rows(coords)  # compress the relation columns (width r)
    if not ech:
        return AbelianInvariants(r, ())
    diag = smith_diagonal(ech, len(ech), r)
    return AbelianInvariants.from_diagonal(diag, free_rank=r - len(diag))


@dataclass
class QuotientPresentation:
    """Quotient of a lattice by a sublattice, with coordinate transforms.

    The quotient is span(basis)/span(relations).  ``diagonal`` has one entry
    per basis position: d_i > 0 means a Z/d_i summand (1 = trivial), 0 means
    a free Z summand.  ``generator_column(i)`` lifts quotient generator i to
    ambient coordinates; ``coordinates`` is the inverse direction, mapping a
    lattice vector to its coordinate tuple in prod_i Z/d_i.
    """

    dim: int
    hnf_basis: list[list[int]]
    u: list[list[int]]
    uinv: list[list[int]]
    diagonal: list[int]
    mod: int | None = None

    @property
    def rank(self) -> int:
        return len(self.hnf_basis)

    def coordinates(self, vec: Sequence[int]) -> list[int]:
        y = solve_in_span(self.hnf_basis, vec)
        if y is None:
            raise ValueError("vector is not in the lattice")
        out = []
        for i, d in enumerate(self.diagonal):
            c = sum(self.u[i][k] * y[k] for k in range(self.rank))
            out.append(c % d if d else c)
        return out

    def generator_column(self, i: int) -> list[int]:
        col = [0] * self.dim
        for k, hcol in enumerate(self.hnf_basis):
            c = self.uinv[k][i]
            if c:
                for p in range(self.dim):
                    col[p] += c * hcol[p]
        if self.mod:
            col = [x % self.mod for x in col]
        return col

    def invariants(self) -> AbelianInvariants:
        return AbelianInvariants.from_diagonal(self.diagonal)


def quotient_presentation(
    basis_cols: Sequence[Sequence[int]],
    relation_cols: Sequence[Sequence[int]],
    dim: int,
    mod: int | None = None,
) -> QuotientPresentation:
    """Like :func:`quotient_invariants` but keeps transforms for generators.

    With ``mod`` set, both lattices implicitly include mod*Z^dim (neither
    generator list needs to spell that out) and all arithmetic stays reduced
    mod ``mod``; the reported diagonal then divides the modulus.
    """
    hk = column_hnf(basis_cols, dim, mod=mod)
    r = len(hk)
    coords: list[list[int]] = []
    for c in relation_cols:
        y = solve_in_span(hk, c)
        if y is None:
            raise ValueError("relation columns do not lie in the spanned lattice")
        coords.append(y)
    if mod:
        # the modulus sublattice is part of the relations; its coordinate
        # vectors are generally not mod*e_i, so add them explicitly
        for i in range(dim):
            target = [0] * dim
            target[i] = mod
            coords.append(solve_in_span(hk, target))
    ech = echelon_rows(coords, mod=mod)
    # relation matrix: r rows (coordinate space), one column per relation
    rel_cols = ech  # each echelon row is one relation vector of length r
    if rel_cols:
        x_rows = [[rc[i] for rc in rel_cols] for i in range(r)]
        el = _Eliminator(x_rows, r, len(rel_cols), mod=mod, want_u=True, want_uinv=True)
        diag = _smith_eliminate(el)
        u, uinv = el.u, el.uinv
    else:
        diag = []
        u = [[int(i == j) for j in range(r)] for i in range(r)]
        uinv = [row[:] for row in u]
    full = list(diag) + [0] * (r - len(diag))
    if mod:
        full = [gcd(d, mod) if d else mod for d in full]
    return QuotientPresentation(dim, hk, u, uinv, full, mod)


def cokernel_torsion(A: IntMatrix) -> list[int]:
    """Invariant factors (> 1) of Z^rows / colspan(A), ascending.

    The free part of the cokernel is deliberately dropped, so this is only
    meaningful when the finite piece is what the caller is after.
    """
    cols = [c for c in A.columns() if any(c)]
    if not cols:
        return []
    ech = _echelon_vectors(cols, A.rows, None)
    diag = smith_diagonal(ech, len(ech), A.rows)
    return [d for d in diag if d > 1]


def _coords_in_span_py(hnf_cols, targets) -> list[list[int]]:
    out = []
    for t in targets:
        y = solve_in_span(hnf_cols, t)
        if y is None:
            raise ValueError("relation columns do not lie in the spanned lattice")
        out.append(y)
    return out


def _coords_in_span_np(hnf_cols, targets, dim: int) -> list[list[int]]:
    """Batch :func:`solve_in_span` with the same quotient sequence per target."""
    np = _np
    H = np.array([list(c) for c in hnf_cols], dtype=np.int64)
    V = np.array([list(t) for t in targets], dtype=np.int64)
    coords = np.zeros((V.shape[0], len(hnf_cols)), dtype=np.int64)
    for k, col in enumerate(hnf_cols):
        p = _first_nonzero(col)
        q, rem = np.divmod(V[:, p], int(H[k, p]))
        if rem.any():
            raise ValueError("relation columns do not lie in the spanned lattice")
        if q.any():
            bound = int(np.abs(q).max()) * int(np.abs(H[k]).max()) + int(np.abs(V).max())
            if bound >= _INT64_GUARD:
                raise _NumericRisk
            V -= q[:, None] * H[k][None, :]
        coords[:, k] = q
    if V.any():
        raise ValueError("relation columns do not lie in the spanned lattice")
    return [[int(x) for x in row] for row in coords]


def _coords_in_span(hnf_cols, targets, dim: int) -> list[list[int]]:
    tlist = [list(t) for t in targets]
    if _np is not None and hnf_cols and tlist and dim * len(tlist) >= _NP_MIN_CELLS:
        try:
            return _coords_in_span_np(hnf_cols, tlist, dim)
        except (_NumericRisk, OverflowError):
            pass
    return _coords_in_span_py(hnf_cols, tlist)


def quotient_invariants_mod(
    basis_cols: Sequence[Sequence[int]],
    relation_cols: Sequence[Sequence[int]],
    dim: int,
    mod: int,
) -> AbelianInvariants:
    """Invariants of (span(basis)+mod*Z^dim) / (span(relations)+mod*Z^dim).

    Transform-free companion of :func:`quotient_presentation` with ``mod``
    set: same group, but no generator lifts, so large dimensions stay cheap.
    Relation columns must already be reduced into [0, mod).
    """
    hk = _echelon_vectors(basis_cols, dim, mod, seed_mod=True)
    r = len(hk)
    if r == 0:
        return AbelianInvariants(0, ())
    targets = [list(c) for c in relation_cols]
    for i in range(dim):
        t = [0] * dim
        t[i] = mod
        targets.append(t)
    coords = _coords_in_span(hk, targets, dim)
    ech = echelon_rows(coords, mod=mod)
    diag = smith_diagonal(ech, len(ech), r, mod=mod) if ech else []
    full = list(diag) + [0] * (r - len(diag))
    full = [gcd(d, mod) if d else mod for d in full]
    return AbelianInvariants.from_diagonal(full)

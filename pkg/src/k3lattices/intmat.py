"""Exact integer matrix kernel.

Everything here runs on Python's arbitrary-precision integers: no floats,
no modular shortcuts.  Gram determinants in this package reach 2**16 and
elimination intermediates grow faster, so exactness is non-negotiable.

The workhorses are the row-style Hermite normal form (with unimodular
transform), the Smith normal form ``u @ m @ v == d`` and a fraction-free
Bareiss determinant.  Pivots are chosen as the smallest nonzero absolute
value with row-major tie-breaking, which keeps the transforms reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import NonSquareError, NoSolutionError


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, entries stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        for e in self.entries:
            if not isinstance(e, int):
                raise TypeError("entries must be Python ints")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != m:
                raise ValueError("ragged rows")
        return cls(n, m, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in product")
        out = []
        orows = other.to_rows()
        for i in range(self.rows):
            srow = self.row(i)
            acc = [0] * other.cols
            for k, s in enumerate(srow):
                if s:
                    orow = orows[k]
                    for j in range(other.cols):
                        acc[j] += s * orow[j]
            out.extend(acc)
        return IntMatrix(self.rows, other.cols, tuple(out))

    def scale(self, n: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(n * e for e in self.entries))

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in stack")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.at(i, j) == self.at(j, i)
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


def block_diag(mats: Iterable[IntMatrix]) -> IntMatrix:
    """Block-diagonal assembly of several matrices."""
    mats = list(mats)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out[r0 + i][c0 : c0 + m.cols] = list(m.row(i))
        r0 += m.rows
        c0 += m.cols
    return IntMatrix.from_rows(out) if rows or cols else IntMatrix(0, 0, ())


def mat_vec(m: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    if m.cols != len(v):
        raise ValueError("dimension mismatch")
    return tuple(sum(m.at(i, j) * v[j] for j in range(m.cols)) for i in range(m.rows))


def vec_mat(v: Sequence[int], m: IntMatrix) -> tuple[int, ...]:
    if m.rows != len(v):
        raise ValueError("dimension mismatch")
    return tuple(sum(v[i] * m.at(i, j) for i in range(m.rows)) for j in range(m.cols))


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square():
        raise NonSquareError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return 1
    a = m.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                # exact division is guaranteed by the Bareiss identity
                a[i][j] = (a[i][j] * pivot - aik * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def _swap_rows(a: list[list[int]], t: list[list[int]], i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]
    t[i], t[j] = t[j], t[i]


def _add_row(a: list[list[int]], t: list[list[int]], dst: int, src: int, c: int) -> None:
    if c == 0:
        return
    arow, asrc = a[dst], a[src]
    for k in range(len(arow)):
        arow[k] += c * asrc[k]
    trow, tsrc = t[dst], t[src]
    for k in range(len(trow)):
        trow[k] += c * tsrc[k]


def _negate_row(a: list[list[int]], t: list[list[int]], i: int) -> None:
    a[i] = [-x for x in a[i]]
    t[i] = [-x for x in t[i]]


def hermite_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u @ m == h``, ``u`` unimodular, ``h`` in row
    echelon form with positive pivots and reduced entries above each pivot.
    """
    r, c = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(r).to_rows()
    prow = 0
    for col in range(c):
        if prow == r:
            break
        # euclidean sweep: leave a single nonzero at (prow, col)
        while True:
            nz = [i for i in range(prow, r) if a[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(a[i][col]), i))
            if i0 != prow:
                _swap_rows(a, u, prow, i0)
            done = True
            for i in range(prow + 1, r):
                if a[i][col] == 0:
                    continue
                q = a[i][col] // a[prow][col]
                _add_row(a, u, i, prow, -q)
                if a[i][col] != 0:
                    done = False
            if done:
                break
        if a[prow][col] == 0:
            continue
        if a[prow][col] < 0:
            _negate_row(a, u, prow)
        for i in range(prow):
            q = a[i][col] // a[prow][col]
            _add_row(a, u, i, prow, -q)
        prow += 1
    return IntMatrix.from_rows(a) if r else IntMatrix(0, c, ()), IntMatrix.from_rows(u) if r else IntMatrix(0, 0, ())


def _swap_cols(a: list[list[int]], v: list[list[int]], i: int, j: int) -> None:
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in v:
        row[i], row[j] = row[j], row[i]


def _add_col(a: list[list[int]], v: list[list[int]], dst: int, src: int, c: int) -> None:
    if c == 0:
        return
    for row in a:
        row[dst] += c * row[src]
    for row in v:
        row[dst] += c * row[src]


def _select_pivot(a: list[list[int]], t: int) -> Optional[tuple[int, int]]:
    best = None
    best_val = None
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            x = row[j]
            if x != 0 and (best_val is None or abs(x) < best_val):
                best = (i, j)
                best_val = abs(x)
    return best


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form with transforms.

    Returns ``(u, d, v)`` with ``u @ m @ v == d``, ``u`` and ``v`` square of
    determinant +-1, and ``d`` diagonal with nonnegative entries satisfying
    ``d[0] | d[1] | ...``.
    """
    r, c = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(r).to_rows()
    v = IntMatrix.identity(c).to_rows()
    t = 0
    while t < min(r, c):
        piv = _select_pivot(a, t)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            _swap_rows(a, u, t, i0)
        if j0 != t:
            _swap_cols(a, v, t, j0)
        while True:
            dirty = False
            for i in range(r):
                if i == t or a[i][t] == 0:
                    continue
                q = a[i][t] // a[t][t]
                _add_row(a, u, i, t, -q)
                if a[i][t] != 0:
                    _swap_rows(a, u, t, i)
                    dirty = True
            for j in range(c):
                if j == t or a[t][j] == 0:
                    continue
                q = a[t][j] // a[t][t]
                _add_col(a, v, j, t, -q)
                if a[t][j] != 0:
                    _swap_cols(a, v, t, j)
                    dirty = True
            if dirty:
                continue
            cross_clear = all(a[i][t] == 0 for i in range(r) if i != t) and all(
                a[t][j] == 0 for j in range(c) if j != t
            )
            if cross_clear:
                break
        # enforce the divisibility chain before moving on
        pivot = a[t][t]
        bad = None
        for i in range(t + 1, r):
            for j in range(t + 1, c):
                if a[i][j] % pivot != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            _add_row(a, u, t, bad, 1)
            continue
        t += 1
    for i in range(min(r, c)):
        if a[i][i] < 0:
            _negate_row(a, u, i)
    d = IntMatrix.from_rows(a) if r else IntMatrix(0, c, ())
    return (
        IntMatrix.from_rows(u) if r else IntMatrix(0, 0, ()),
        d,
        IntMatrix.from_rows(v) if c else IntMatrix(0, 0, ()),
    )


def invariant_factors(m: IntMatrix) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith normal form."""
    _, d, _ = smith_normal_form(m)
    out = []
    for i in range(min(d.rows, d.cols)):
        x = d.at(i, i)
        if x != 0:
            out.append(x)
    return tuple(out)


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Basis of the integer kernel ``{x : m @ x == 0}``, rows of the result.

    Computed from the HNF of the transpose; the rows of the transform that
    hit zero rows of the echelon form span the kernel, and the result is
    HNF-normalised so equal kernels compare equal.
    """
    if m.rows == 0:
        return IntMatrix.identity(m.cols)
    h, u = hermite_normal_form(m.transpose())
    zero_rows = [i for i in range(h.rows) if all(x == 0 for x in h.row(i))]
    if not zero_rows:
        return IntMatrix(0, m.cols, ())
    ker = IntMatrix.from_rows([list(u.row(i)) for i in zero_rows])
    hker, _ = hermite_normal_form(ker)
    return IntMatrix.from_rows([list(hker.row(i)) for i in range(ker.rows)])


def solve(m: IntMatrix, rhs: Sequence[int]) -> tuple[int, ...]:
    """One integer solution of ``m @ x == rhs`` or :class:`NoSolutionError`."""
    if len(rhs) != m.rows:
        raise ValueError("right-hand side length mismatch")
    u, d, v = smith_normal_form(m)
    urhs = mat_vec(u, list(rhs))
    y = [0] * m.cols
    for i in range(m.rows):
        di = d.at(i, i) if i < min(d.rows, d.cols) else 0
        if di == 0:
            if urhs[i] != 0:
                raise NoSolutionError("rhs is outside the integer column span")
        else:
            q, rem = divmod(urhs[i], di)
            if rem != 0:
                raise NoSolutionError("divisibility obstruction in diagonal solve")
            y[i] = q
    return mat_vec(v, y)


def kernel_and_solve(
    m: IntMatrix, rhs: Optional[Sequence[int]] = None
) -> tuple[IntMatrix, Optional[tuple[int, ...]]]:
    """Integer kernel basis and, when ``rhs`` is given, a particular solution."""
    ker = kernel_basis(m)
    sol = solve(m, rhs) if rhs is not None else None
    return ker, sol

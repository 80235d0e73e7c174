"""Even integral lattices presented by Gram matrices.

A lattice here is always a concrete object: a symmetric integer Gram matrix,
and, when sitting inside an ambient lattice, an integer coordinate matrix.
There is no identification "up to isometry" at this layer; saturations,
orthogonal complements and glued overlattices are coordinate computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence, Union

from .errors import (
    DegenerateError,
    NotEvenError,
    NotIntegralError,
    ZeroScaleError,
)
from .intmat import (
    IntMatrix,
    block_diag,
    determinant,
    hermite_normal_form,
    kernel_basis,
    solve,
)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class Signature:
    """Counts of positive and negative eigenvalues of the real quadratic form."""

    positive: int
    negative: int

    @property
    def rank(self) -> int:
        return self.positive + self.negative

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(self.positive + other.positive, self.negative + other.negative)

    def as_tuple(self) -> tuple[int, int]:
        return (self.positive, self.negative)


class GramLattice:
    """A nondegenerate integral lattice given by its Gram matrix.

    Even lattices are the default; ``allow_odd=True`` admits odd diagonal
    entries for oracle tests only.  Degenerate Gram matrices are rejected.
    """

    def __init__(
        self,
        gram: Union[IntMatrix, Sequence[Sequence[int]]],
        label: Optional[str] = None,
        allow_odd: bool = False,
    ) -> None:
        if not isinstance(gram, IntMatrix):
            gram = IntMatrix.from_rows(gram)
        if not gram.is_symmetric():
            raise ValueError("Gram matrix must be symmetric")
        if not allow_odd:
            for i in range(gram.rows):
                if gram.at(i, i) % 2 != 0:
                    raise NotEvenError(f"diagonal entry {gram.at(i, i)} at {i} is odd")
        det = determinant(gram)
        if det == 0:
            raise DegenerateError("degenerate Gram matrix")
        self.gram = gram
        self.label = label
        self.allow_odd = allow_odd
        self._det = det
        self._signature: Optional[Signature] = None

    @property
    def rank(self) -> int:
        return self.gram.rows

    @property
    def det(self) -> int:
        return self._det

    def is_even(self) -> bool:
        return all(self.gram.at(i, i) % 2 == 0 for i in range(self.rank))

    def signature(self) -> Signature:
        """Exact signature by rational congruent diagonalization.

        Symmetric Gaussian elimination over the rationals, with the usual
        repair step when the whole trailing diagonal vanishes (add one row
        and column to another to make a nonzero diagonal entry; the
        hyperbolic plane exercises this path).
        """
        if self._signature is None:
            self._signature = _signature_of(self.gram)
        return self._signature

    def rescale(self, n: int) -> "GramLattice":
        """Lattice with the same basis and form multiplied by ``n``."""
        if n == 0:
            raise ZeroScaleError("cannot rescale by zero")
        label = None
        if self.label is not None:
            label = self.label if n == 1 else f"{self.label}({n})"
        return GramLattice(self.gram.scale(n), label=label, allow_odd=self.allow_odd)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GramLattice) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        name = self.label or "lattice"
        return f"<{name}: rank {self.rank}, det {self.det}>"


def direct_sum(a: GramLattice, b: GramLattice, label: Optional[str] = None) -> GramLattice:
    """Orthogonal direct sum; Gram matrices placed block-diagonally."""
    gram = block_diag([a.gram, b.gram])
    if gram.rows == 0:
        gram = IntMatrix(0, 0, ())
    return GramLattice(gram, label=label, allow_odd=a.allow_odd or b.allow_odd)


def _signature_of(gram: IntMatrix) -> Signature:
    n = gram.rows
    a = [[Fraction(gram.at(i, j)) for j in range(n)] for i in range(n)]
    pos = neg = 0
    for t in range(n):
        if a[t][t] == 0:
            swap = next((i for i in range(t + 1, n) if a[i][i] != 0), None)
            if swap is not None:
                a[t], a[swap] = a[swap], a[t]
                for row in a:
                    row[t], row[swap] = row[swap], row[t]
            else:
                # all trailing diagonal entries vanish; repair with an
                # off-diagonal entry (exists, the lattice is nondegenerate)
                found = None
                for i in range(t, n):
                    for j in range(i + 1, n):
                        if a[i][j] != 0:
                            found = (i, j)
                            break
                    if found:
                        break
                if found is None:
                    raise DegenerateError("zero block during diagonalization")
                i, j = found
                for k in range(n):
                    a[i][k] += a[j][k]
                for k in range(n):
                    a[k][i] += a[k][j]
                if i != t:
                    a[t], a[i] = a[i], a[t]
                    for row in a:
                        row[t], row[i] = row[i], row[t]
        pivot = a[t][t]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        for i in range(t + 1, n):
            f = a[i][t] / pivot
            if f:
                for k in range(t, n):
                    a[i][k] -= f * a[t][k]
                for k in range(t, n):
                    a[k][i] -= f * a[k][t]
    return Signature(pos, neg)


class Embedding:
    """A sublattice inside an ambient lattice.

    ``basis`` rows hold the coordinates of the sublattice generators in the
    ambient basis.  Rows must be linearly independent; when ``expected_gram``
    is supplied the induced Gram matrix is checked against it.
    """

    def __init__(
        self,
        ambient: GramLattice,
        basis: Union[IntMatrix, Sequence[Sequence[int]]],
        expected_gram: Optional[IntMatrix] = None,
    ) -> None:
        if not isinstance(basis, IntMatrix):
            basis = IntMatrix.from_rows(basis) if len(list(basis)) else IntMatrix(0, ambient.rank, ())
        if basis.cols != ambient.rank:
            raise ValueError("basis width does not match ambient rank")
        if basis.rows:
            ker = kernel_basis(basis.transpose())
            if ker.rows != 0:
                raise ValueError("basis rows are linearly dependent")
        self.ambient = ambient
        self.basis = basis
        if expected_gram is not None and self.gram() != expected_gram:
            raise ValueError("induced Gram matrix does not match the declared one")

    @property
    def rank(self) -> int:
        return self.basis.rows

    def gram(self) -> IntMatrix:
        """Induced Gram matrix ``basis @ G @ basis^T``."""
        return self.basis @ self.ambient.gram @ self.basis.transpose()

    def __repr__(self) -> str:
        return f"<embedding: rank {self.rank} in rank {self.ambient.rank}>"


def saturation(e: Embedding) -> Embedding:
    """Primitive closure: rational span intersected with the ambient lattice.

    The saturation of the row span equals the integer kernel of the kernel,
    both computed through HNF; the result is primitive by construction.
    """
    if e.rank == 0:
        return e
    ker = kernel_basis(e.basis)
    sat = kernel_basis(ker)
    return Embedding(e.ambient, sat)


def embedding_index(e: Embedding) -> int:
    """Index of the sublattice inside its saturation."""
    if e.rank == 0:
        return 1
    sat = saturation(e)
    coords = _coordinates_in(sat.basis, e.basis)
    return abs(determinant(coords))


def is_primitive(e: Embedding) -> bool:
    return embedding_index(e) == 1


def orthogonal_complement(e: Embedding) -> Embedding:
    """Primitive sublattice of everything pairing to zero with ``e``."""
    pairings = e.basis @ e.ambient.gram
    comp = kernel_basis(pairings)
    return Embedding(e.ambient, comp)


def _coordinates_in(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix:
    """Express each row of ``vectors`` integrally in ``basis`` rows."""
    bt = basis.transpose()
    rows = []
    for i in range(vectors.rows):
        rows.append(list(solve(bt, list(vectors.row(i)))))
    return IntMatrix.from_rows(rows) if rows else IntMatrix(0, basis.rows, ())


@dataclass(frozen=True)
class Overlattice:
    """A glued overlattice together with the inclusion of the original lattice."""

    lattice: GramLattice
    inclusion: Embedding
    index: int


def overlattice_from_glue(
    l: GramLattice, glue: Sequence[Sequence[Rational]], label: Optional[str] = None
) -> Overlattice:
    """Even overlattice generated by ``l`` and rational glue vectors.

    Each glue vector must pair integrally with the lattice and with every
    other glue vector, and must have even self-pairing; violations raise
    :class:`NotIntegralError` or :class:`NotEvenError`.  The result is put
    on an integral basis via HNF and ``det(result) * index**2 == det(l)``.
    """
    n = l.rank
    g = l.gram
    vecs = [tuple(Fraction(x) for x in row) for row in glue]
    for row in vecs:
        if len(row) != n:
            raise ValueError("glue vector length does not match rank")
    pairing_with_lattice = []
    for row in vecs:
        pg = [sum(row[i] * g.at(i, j) for i in range(n)) for j in range(n)]
        for j, value in enumerate(pg):
            if value.denominator != 1:
                raise NotIntegralError(
                    f"glue vector {row} pairs to {value} with basis vector {j}"
                )
        pairing_with_lattice.append(pg)
    for a_idx, row_a in enumerate(vecs):
        for b_idx in range(a_idx, len(vecs)):
            row_b = vecs[b_idx]
            value = sum(pairing_with_lattice[a_idx][j] * row_b[j] for j in range(n))
            if a_idx == b_idx:
                if value.denominator != 1 or value.numerator % 2 != 0:
                    raise NotEvenError(f"glue vector {row_a} has self-pairing {value}")
            elif value.denominator != 1:
                raise NotIntegralError(
                    f"glue vectors {row_a} and {row_b} pair to {value}"
                )
    if not vecs:
        return Overlattice(l, Embedding(l, IntMatrix.identity(n)), 1)

    den = lcm(*[x.denominator for row in vecs for x in row], 1)
    scaled_rows = [[den if i == j else 0 for j in range(n)] for i in range(n)]
    for row in vecs:
        scaled_rows.append([int(x * den) for x in row])
    h, _ = hermite_normal_form(IntMatrix.from_rows(scaled_rows))
    basis_scaled = [list(h.row(i)) for i in range(n)]
    # Gram of the overlattice on the new basis: R G R^T / den^2
    rmat = IntMatrix.from_rows(basis_scaled)
    gram_scaled = rmat @ g @ rmat.transpose()
    new_entries = []
    for value in gram_scaled.entries:
        q, rem = divmod(value, den * den)
        if rem != 0:
            raise NotIntegralError("overlattice Gram failed to be integral")
        new_entries.append(q)
    new_gram = IntMatrix(n, n, tuple(new_entries))
    result = GramLattice(new_gram, label=label, allow_odd=l.allow_odd)
    # coordinates of the old basis inside the new one
    coords = []
    bt = rmat.transpose()
    for i in range(n):
        target = [den if j == i else 0 for j in range(n)]
        coords.append(list(solve(bt, target)))
    inclusion = Embedding(result, IntMatrix.from_rows(coords))
    index = abs(determinant(inclusion.basis))
    assert l.det == result.det * index * index
    return Overlattice(result, inclusion, index)

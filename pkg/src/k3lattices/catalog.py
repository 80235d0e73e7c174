"""Constructors for the concrete lattices of K3 surface theory.

Provides the hyperbolic plane, the negative E8 lattice, the rank-22 K3
lattice and its rank-24 extension, double-point lattices glued from
doubly-even binary codes, the rank-(k+1) Todorov lattices, and the small
numerical gadgets around Mukai vectors and moduli of sheaves on a K3.

Reference glue codes ship as text assets: one generator bitvector per
line after a "# length=L dim=D" header.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .errors import (
    GlueRejectedError,
    InconsistentInputError,
    InvalidDegreeError,
    InvalidSpecError,
    NotEvenError,
    NotIntegralError,
    OddSelfIntersectionError,
    UnknownNameError,
)
from .intmat import IntMatrix
from .lattice import (
    Embedding,
    GramLattice,
    direct_sum,
    embedding_index,
    overlattice_from_glue,
)

_E8_ROWS = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
]

_DIAG_RE = re.compile(r"^diag\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)$")


def diag_lattice(values: Sequence[int], label: Optional[str] = None) -> GramLattice:
    return GramLattice(IntMatrix.diagonal(list(values)), label=label)


def standard_lattice(name: str) -> GramLattice:
    """Catalog lattices by name: U, E8minus, A1, K3, Mukai, diag(n, ...)."""
    key = name.strip()
    lowered = key.lower()
    if lowered == "u":
        return GramLattice([[0, 1], [1, 0]], label="U")
    if lowered in ("e8minus", "e8(-1)"):
        gram = IntMatrix.from_rows(_E8_ROWS).scale(-1)
        return GramLattice(gram, label="E8(-1)")
    if lowered == "e8":
        return GramLattice(IntMatrix.from_rows(_E8_ROWS), label="E8")
    if lowered == "a1":
        return GramLattice([[2]], label="A1")
    if lowered == "k3":
        u = standard_lattice("U")
        e8m = standard_lattice("E8minus")
        out = direct_sum(direct_sum(direct_sum(u, u), u), direct_sum(e8m, e8m))
        return GramLattice(out.gram, label="K3")
    if lowered == "mukai":
        out = direct_sum(standard_lattice("K3"), standard_lattice("U"))
        return GramLattice(out.gram, label="Mukai")
    match = _DIAG_RE.match(lowered)
    if match:
        values = [int(x) for x in match.group(1).split(",")]
        return diag_lattice(values, label=key)
    raise UnknownNameError(f"unknown lattice name: {name!r}")


def admissible_todorov_pairs() -> list[tuple[int, int]]:
    """All (alpha, k) satisfying the double-point admissibility condition."""
    out = []
    for alpha in range(0, 5):
        for k in range(9, alpha + 12):
            if 2 ** (4 - alpha) * (2**alpha - 1) <= k and (alpha, k) != (1, 9):
                out.append((alpha, k))
    return sorted(out)


def _parse_code_text(text: str) -> tuple[tuple[int, ...], ...]:
    words = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if not set(line) <= {"0", "1"}:
            raise InvalidSpecError(f"bad code line: {line!r}")
        words.append(tuple(int(ch) for ch in line))
    return tuple(words)


def shipped_code(name: str) -> tuple[tuple[int, ...], ...]:
    """Load a reference glue code asset, e.g. '16_5' or '15_4'."""
    text = resources.files("k3lattices.assets").joinpath(f"code_{name}.txt").read_text()
    return _parse_code_text(text)


def _code_dimension(code: Sequence[Sequence[int]], length: int) -> int:
    rows = [list(w) for w in code]
    rank = 0
    col = 0
    r = 0
    while r < len(rows) and col < length:
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
        rank += 1
        r += 1
        col += 1
    return rank


@dataclass(frozen=True)
class TodorovSpec:
    """An admissible double-point pair with its glue code.

    The code is given by generator bitvectors of length k; its dimension
    must equal alpha and every codeword must have weight divisible by 4
    (the glue evenness condition enforces the latter during construction).
    """

    alpha: int
    k: int
    code: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if (self.alpha, self.k) not in set(admissible_todorov_pairs()):
            raise InvalidSpecError(f"pair ({self.alpha}, {self.k}) is not admissible")
        code = tuple(tuple(int(x) for x in w) for w in self.code)
        object.__setattr__(self, "code", code)
        for w in code:
            if len(w) != self.k or not set(w) <= {0, 1}:
                raise InvalidSpecError("code words must be 0/1 vectors of length k")
        if _code_dimension(code, self.k) != self.alpha or len(code) != self.alpha:
            raise InvalidSpecError(
                f"code must consist of {self.alpha} independent generators"
            )

    @property
    def lambda_sq(self) -> int:
        return 2 * self.k - 16


def default_code(alpha: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Reference code for a pair, where one is shipped (alpha 0 or (4,15))."""
    if alpha == 0:
        return ()
    if (alpha, k) == (4, 15):
        return shipped_code("15_4")
    raise InvalidSpecError(
        f"no reference code shipped for ({alpha}, {k}); supply the glue code"
    )


@dataclass(frozen=True)
class DoublePointLattice:
    """Even overlattice of <-2>^k determined by a doubly-even binary code."""

    lattice: GramLattice
    e_frame: Embedding  # the k pairwise-orthogonal (-2)-vectors inside
    alpha: int
    k: int


def build_double_point_lattice(
    k: int, code: Sequence[Sequence[int]] = (), label: Optional[str] = None
) -> DoublePointLattice:
    """Overlattice of <-2>^k glued along half-sums over code generators.

    A non-doubly-even code surfaces as the NotEven/NotIntegral error of the
    glue validation.  The index over the (-2)-frame is 2**dim(code).
    """
    frame = diag_lattice([-2] * k)
    glue = [
        [Fraction(int(w[i]), 2) for i in range(k)] for w in code
    ]
    over = overlattice_from_glue(frame, glue, label=label)
    alpha = _code_dimension(list(code), k)
    dp = DoublePointLattice(
        lattice=over.lattice, e_frame=over.inclusion, alpha=alpha, k=k
    )
    assert embedding_index(Embedding(over.lattice, over.inclusion.basis)) == 2**alpha
    return dp


def kummer_double_point_lattice() -> DoublePointLattice:
    """The rank-16 double-point lattice of the sixteen-node configuration."""
    return build_double_point_lattice(16, shipped_code("16_5"), label="Kummer")


@dataclass(frozen=True)
class TodorovLattice:
    """A Todorov lattice with its construction records.

    ``lattice`` is the rank-(k+1) result; ``mu_coords`` / ``lambda_coords``
    express the glue class and the polarization class on the final basis;
    ``double_point`` and ``e_frame`` are the sublattice embeddings.
    """

    spec: TodorovSpec
    lattice: GramLattice
    double_point: Embedding
    e_frame: Embedding
    mu_coords: tuple[int, ...]
    lambda_coords: tuple[int, ...]
    mu_sq: int
    lambda_sq: int


def _extend_by_polarization(
    dp: DoublePointLattice, label: Optional[str]
) -> tuple[GramLattice, Embedding, tuple[int, ...], tuple[int, ...], int, int]:
    """Adjoin an orthogonal class of square 2k-16 and glue mu = (lambda + sum e_i)/2."""
    k = dp.k
    lam_sq = 2 * k - 16
    amb = direct_sum(dp.lattice, diag_lattice([lam_sq]))
    rank = amb.rank
    e_sum = [0] * rank
    for i in range(dp.e_frame.rank):
        row = dp.e_frame.basis.row(i)
        for j, x in enumerate(row):
            e_sum[j] += x
    mu = [Fraction(x, 2) for x in e_sum]
    mu[rank - 1] = Fraction(1, 2)
    try:
        over = overlattice_from_glue(amb, [mu], label=label)
    except (NotEvenError, NotIntegralError) as exc:
        raise GlueRejectedError(f"glue class rejected: {exc}") from exc
    incl = over.inclusion
    mu_new = []
    for j in range(rank):
        total = sum(mu[i] * incl.basis.at(i, j) for i in range(rank))
        if total.denominator != 1:
            raise AssertionError("glue class missing from the glued lattice")
        mu_new.append(int(total))
    lam_new = list(incl.basis.row(rank - 1))
    g = over.lattice.gram
    mu_sq = sum(g.at(i, j) * mu_new[i] * mu_new[j] for i in range(rank) for j in range(rank))
    dp_in_new = IntMatrix.from_rows(
        [list(incl.basis.row(i)) for i in range(rank - 1)]
    )
    for i in range(rank - 1):
        pairing = sum(
            g.at(a, b) * lam_new[a] * dp_in_new.at(i, b)
            for a in range(rank)
            for b in range(rank)
        )
        assert pairing == 0
    assert mu_sq == -4
    dp_embedding = Embedding(over.lattice, dp_in_new)
    return over.lattice, dp_embedding, tuple(mu_new), tuple(lam_new), mu_sq, lam_sq


def build_todorov_lattice(spec: TodorovSpec) -> TodorovLattice:
    """The Todorov lattice of the given admissible pair and glue code."""
    dp = build_double_point_lattice(spec.k, spec.code)
    label = f"M({spec.alpha},{spec.k})"
    lattice, dp_embedding, mu_new, lam_new, mu_sq, lam_sq = _extend_by_polarization(
        dp, label
    )
    e_in_m = dp.e_frame.basis @ IntMatrix.from_rows(
        [list(dp_embedding.basis.row(i)) for i in range(dp_embedding.rank)]
    )
    return TodorovLattice(
        spec=spec,
        lattice=lattice,
        double_point=dp_embedding,
        e_frame=Embedding(lattice, e_in_m),
        mu_coords=mu_new,
        lambda_coords=lam_new,
        mu_sq=mu_sq,
        lambda_sq=lam_sq,
    )


def kummer_rank17_extension() -> tuple[GramLattice, GramLattice]:
    """The rank-16 sixteen-node lattice and its rank-17 polarized extension.

    Returned as (rank16, rank17); their determinants are 2**6 and 2**8.
    Which of the two deserves the name is a bookkeeping choice we do not
    make; both are reported.
    """
    dp = kummer_double_point_lattice()
    lattice, *_ = _extend_by_polarization(dp, "Kummer+polarization")
    return dp.lattice, lattice


@dataclass(frozen=True)
class MukaiVector:
    """(rank, degree-component self-intersection, Euler component)."""

    v0: int
    v1_selfint: int
    v2: int

    def __post_init__(self) -> None:
        if self.v1_selfint % 2 != 0:
            raise OddSelfIntersectionError(
                f"divisor self-intersection {self.v1_selfint} must be even"
            )


def mukai_pairing(v: MukaiVector, w: MukaiVector, cross_int: Optional[int] = None) -> int:
    """v1.w1 - v0*w2 - v2*w0, with the degree cross term supplied by the caller."""
    if cross_int is None:
        if v != w:
            raise InconsistentInputError(
                "cross intersection number required for distinct vectors"
            )
        cross_int = v.v1_selfint
    return cross_int - v.v0 * w.v2 - v.v2 * w.v0


@dataclass(frozen=True)
class SheafNumerics:
    vector: MukaiVector
    euler: int
    moduli_dim: int


def sheaf_numerics(r: int, c1_sq: int, c2: int) -> SheafNumerics:
    """Mukai vector, Euler characteristic and moduli dimension of a sheaf."""
    if c1_sq % 2 != 0:
        raise OddSelfIntersectionError(f"c1^2 = {c1_sq} must be even")
    v = MukaiVector(r, c1_sq, r + c1_sq // 2 - c2)
    euler = v.v0 + v.v2
    moduli_dim = mukai_pairing(v, v) + 2
    return SheafNumerics(vector=v, euler=euler, moduli_dim=moduli_dim)


def polarization_genus(degree: int) -> int:
    """Genus of a polarized K3 of the given even positive degree."""
    if degree <= 0 or degree % 2 != 0:
        raise InvalidDegreeError(f"degree must be even and positive, got {degree}")
    return degree // 2 + 1


def discriminant_hypersurface_degree(ambient_dim: int) -> int:
    """Degree of the singular-quadric locus in the quadrics of P^n."""
    if ambient_dim < 1:
        raise ValueError("projective dimension must be at least 1")
    return ambient_dim + 1

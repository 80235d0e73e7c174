"""Short vectors and isometries of definite lattices.

Short vectors come from Fincke-Pohst enumeration on an exact rational
quadratic completion; no floating point enters the bounds.  Automorphism
groups are found by backtracking basis vectors onto same-norm, same-pairing
short vectors, with the group order accumulated along an orbit-stabilizer
chain.  Indefinite lattices are rejected here: their isometry groups are
infinite and the criteria module covers what the package needs from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from .discform import (
    DEFAULT_ENUM_BOUND,
    DEFAULT_NODE_BUDGET,
    DiscAutomorphism,
    closure,
    disc_automorphism_group,
    discriminant_data,
)
from .errors import BudgetExceededError, NotDefiniteError
from .intmat import IntMatrix
from .lattice import GramLattice

SURJECTIVE = "surjective"
NOT_SURJECTIVE = "not-surjective"
BUDGET_EXCEEDED = "budget-exceeded"

DEFAULT_MAX_RANK = 16
DEFAULT_MAX_POOL = 5000


@dataclass(frozen=True)
class Isometry:
    """An integer matrix m with m^T @ gram @ m == gram (column action)."""

    matrix: IntMatrix

    def image_rows(self) -> IntMatrix:
        """Rows are the images of the basis vectors (row action)."""
        return self.matrix.transpose()


def is_isometry(l: GramLattice, m: IntMatrix) -> bool:
    if not m.is_square() or m.rows != l.rank:
        return False
    return m.transpose() @ l.gram @ m == l.gram


def _definite_sign(l: GramLattice) -> int:
    sig = l.signature()
    if sig.negative == 0 and sig.positive > 0:
        return 1
    if sig.positive == 0 and sig.negative > 0:
        return -1
    raise NotDefiniteError(f"lattice has signature {sig.as_tuple()}")


def _quadratic_completion(gram: IntMatrix) -> list[list[Fraction]]:
    """Coefficients q with x^T gram x = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2."""
    n = gram.rows
    q = [[Fraction(gram.at(i, j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for k in range(i):
            q[i][i] -= q[k][k] * q[k][i] * q[k][i]
        if q[i][i] <= 0:
            raise NotDefiniteError("quadratic completion hit a nonpositive pivot")
        for j in range(i + 1, n):
            for k in range(i):
                q[i][j] -= q[k][k] * q[k][i] * q[k][j]
            q[i][j] /= q[i][i]
    return q


def _floor_sqrt(x: Fraction) -> int:
    """Largest integer r with r*r <= x, for x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    r = isqrt(x.numerator // x.denominator)
    while Fraction((r + 1) * (r + 1)) <= x:
        r += 1
    while Fraction(r * r) > x:
        r -= 1
    return r


def _coordinate_range(q_ii: Fraction, center: Fraction, budget: Fraction) -> range:
    """Integers x with q_ii * (x + center)^2 <= budget."""
    if budget < 0:
        return range(0)
    bound = budget / q_ii
    s = _floor_sqrt(bound)
    c_floor = center.numerator // center.denominator
    # conservative window containing every solution, then tighten exactly;
    # the window overshoots by at most a few units on each side
    lo = -s - c_floor - 2
    hi = s - c_floor + 2
    while lo <= hi and (Fraction(lo) + center) ** 2 > bound:
        lo += 1
    while hi >= lo and (Fraction(hi) + center) ** 2 > bound:
        hi -= 1
    return range(lo, hi + 1)


def short_vectors(
    l: GramLattice, norm_bound: int, max_count: Optional[int] = None
) -> list[tuple[tuple[int, ...], int]]:
    """All vectors with |v.v| <= norm_bound, one per +-pair, with their norms.

    Enumeration is Fincke-Pohst with exact rational interval bounds; the
    output is sorted lexicographically by coordinates, the representative of
    each +-pair being the one whose first nonzero coordinate is positive.
    """
    sign = _definite_sign(l)
    n = l.rank
    if n == 0 or norm_bound < 0:
        return []
    gram = l.gram if sign > 0 else l.gram.scale(-1)
    q = _quadratic_completion(gram)
    found: list[tuple[tuple[int, ...], int]] = []
    x = [0] * n

    def enumerate_level(i: int, remaining: Fraction) -> None:
        if i < 0:
            if any(x):
                vec = tuple(x)
                norm = sum(
                    gram.at(a, b) * vec[a] * vec[b] for a in range(n) for b in range(n)
                )
                first = next(v for v in vec if v)
                if first > 0:
                    found.append((vec, sign * norm))
                    if max_count is not None and len(found) > max_count:
                        raise BudgetExceededError("short vector pool cap exceeded")
            return
        center = sum(q[i][j] * x[j] for j in range(i + 1, n))
        for xi in _coordinate_range(q[i][i], center, remaining):
            x[i] = xi
            used = q[i][i] * (Fraction(xi) + center) * (Fraction(xi) + center)
            enumerate_level(i - 1, remaining - used)
        x[i] = 0

    enumerate_level(n - 1, Fraction(norm_bound))
    found.sort(key=lambda item: item[0])
    return found


@dataclass(frozen=True)
class AutomorphismGroup:
    generators: tuple[Isometry, ...]
    order: int


class _Nodes:
    __slots__ = ("left",)

    def __init__(self, n: int) -> None:
        self.left = n

    def spend(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise BudgetExceededError("automorphism search budget exhausted")


def automorphism_group(
    l: GramLattice,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_rank: int = DEFAULT_MAX_RANK,
    max_pool: int = DEFAULT_MAX_POOL,
) -> AutomorphismGroup:
    """Generators and order of the isometry group of a definite lattice.

    Basis vectors are matched against same-norm short vectors with the same
    pairings; the order is the product of orbit sizes along the stabilizer
    chain.  Raises :class:`BudgetExceededError` when pools or the node
    budget blow past their caps.
    """
    _definite_sign(l)
    n = l.rank
    if n > max_rank:
        raise BudgetExceededError(f"rank {n} above configured bound {max_rank}")
    if n == 0:
        return AutomorphismGroup((), 1)
    gram = l.gram
    bound = max(abs(gram.at(i, i)) for i in range(n))
    pool = short_vectors(l, bound, max_count=max_pool)
    by_norm: dict[int, list[tuple[int, ...]]] = {}
    for vec, norm in pool:
        by_norm.setdefault(norm, []).append(vec)
        by_norm[norm].append(tuple(-x for x in vec))
    for norm in by_norm:
        by_norm[norm].sort()
    basis = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    norms = [gram.at(i, i) for i in range(n)]

    def pairing(v: Sequence[int], w: Sequence[int]) -> int:
        return sum(gram.at(a, b) * v[a] * w[b] for a in range(n) for b in range(n))

    pairing_cache: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}

    def pair(v: tuple[int, ...], w: tuple[int, ...]) -> int:
        key = (v, w)
        got = pairing_cache.get(key)
        if got is None:
            got = pairing(v, w)
            pairing_cache[key] = got
        return got

    nodes = _Nodes(node_budget)

    def extend(images: list[tuple[int, ...]]) -> Optional[list[tuple[int, ...]]]:
        level = len(images)
        if level == n:
            return list(images)
        for cand in by_norm.get(norms[level], []):
            nodes.spend()
            if all(
                pair(images[j], cand) == gram.at(j, level) for j in range(level)
            ):
                images.append(cand)
                got = extend(images)
                if got is not None:
                    return got
                images.pop()
        return None

    generators: list[IntMatrix] = []
    order = 1
    for level in range(n):
        prefix = basis[:level]
        cands = [
            w
            for w in by_norm.get(norms[level], [])
            if all(pair(prefix[j], w) == gram.at(j, level) for j in range(level))
        ]
        # isometries found so far that fix the prefix pointwise
        stab = [
            g
            for g in generators
            if all(tuple(g.row(j)) == prefix[j] for j in range(level))
        ]
        orbit = _vector_orbit(basis[level], stab)
        extendable = 0
        for w in cands:
            if w in orbit:
                extendable += 1
                continue
            got = extend(prefix + [w])
            if got is not None:
                mat = IntMatrix.from_rows([list(r) for r in got])
                assert mat @ gram @ mat.transpose() == gram
                generators.append(mat)
                stab.append(mat)
                orbit = _vector_orbit(basis[level], stab)
                extendable += 1
        order *= extendable
    gens = sorted(
        (g.transpose() for g in generators), key=lambda m: m.entries
    )
    return AutomorphismGroup(tuple(Isometry(g) for g in gens), order)


def _vector_orbit(
    start: tuple[int, ...], row_action: Sequence[IntMatrix]
) -> set[tuple[int, ...]]:
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for m in row_action:
                w = tuple(
                    sum(v[i] * m.at(i, j) for i in range(m.rows)) for j in range(m.cols)
                )
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def induced_disc_action(iso: Isometry, l: GramLattice) -> DiscAutomorphism:
    """Action of an isometry on the discriminant group, in SNF generators."""
    if not is_isometry(l, iso.matrix):
        raise ValueError("matrix does not preserve the Gram matrix")
    data = discriminant_data(l)
    fqf = data.fqf
    row_action = iso.image_rows()
    images = []
    for gen in data.gens:
        moved = [
            sum(gen[i] * row_action.at(i, j) for i in range(l.rank))
            for j in range(l.rank)
        ]
        images.append(data.coordinates(moved))
    action = DiscAutomorphism(fqf.factors, tuple(images))
    for i in range(fqf.ngens):
        unit = tuple(1 if j == i else 0 for j in range(fqf.ngens))
        if fqf._q_int(action.apply(unit)) != fqf._q_int(unit):
            raise AssertionError("induced action failed to preserve q")
    return action


def surjectivity_onto_disc(
    l: GramLattice,
    node_budget: int = DEFAULT_NODE_BUDGET,
    disc_bound: int = DEFAULT_ENUM_BOUND,
    max_rank: int = DEFAULT_MAX_RANK,
    max_pool: int = DEFAULT_MAX_POOL,
) -> str:
    """Whether every q-preserving automorphism of the discriminant lifts.

    Compares the image of the isometry group against the full automorphism
    group of the discriminant form.  Budget verdicts are values, not faults.
    """
    data = discriminant_data(l)
    fqf = data.fqf
    if fqf.ngens == 0:
        return SURJECTIVE
    if fqf.order > disc_bound:
        return BUDGET_EXCEEDED
    try:
        ag = automorphism_group(
            l, node_budget=node_budget, max_rank=max_rank, max_pool=max_pool
        )
        full = disc_automorphism_group(fqf, node_budget=node_budget, enum_bound=disc_bound)
    except BudgetExceededError:
        return BUDGET_EXCEEDED
    induced = [induced_disc_action(g, l) for g in ag.generators]
    image = closure(fqf.factors, induced)
    return SURJECTIVE if len(image) == len(full) else NOT_SURJECTIVE

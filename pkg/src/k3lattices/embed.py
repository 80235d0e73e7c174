"""Primitive-embedding search by constraint backtracking.

The ambient lattice must be definite or an orthogonal direct sum of
definite blocks and rank-2 hyperbolic blocks [[0,a],[a,0]]; that covers the
K3 lattice and everything else this package embeds into.  Candidate images
for each basis vector of the sublattice are assembled per ambient block:
hyperbolic blocks contribute the pairs x*e + y*f with bounded coefficients,
definite blocks contribute short vectors, and candidates may mix components
from a small number of blocks.  The search assigns basis vectors most
constrained first, filters candidate pools by exact pairing conditions
(numpy integer arithmetic on small entries), and returns the first image
that reproduces the Gram matrix and is primitive.

Exactness note: candidate filtering uses int64 numpy products of small
integers; the found basis is re-verified with arbitrary-precision
arithmetic before an embedding is returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceededError, SignatureObstructionError
from .intmat import IntMatrix
from .lattice import Embedding, GramLattice, is_primitive
from .isometry import short_vectors

DEFAULT_COEFF_BOUND = 4
DEFAULT_MAX_SUPPORT = 2
DEFAULT_EMBED_NODES = 10**6
_POOL_CAP = 500_000

_cache: dict[tuple, Optional[tuple[tuple[int, ...], ...]]] = {}


@dataclass(frozen=True)
class _Block:
    indices: tuple[int, ...]
    gram: IntMatrix
    kind: str  # "definite" | "hyperbolic"
    hyper_scale: int = 0


def _split_blocks(gram: IntMatrix) -> list[_Block]:
    n = gram.rows
    seen = [False] * n
    blocks = []
    for start in range(n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        frontier = [start]
        while frontier:
            i = frontier.pop()
            for j in range(n):
                if not seen[j] and gram.at(i, j) != 0:
                    seen[j] = True
                    comp.append(j)
                    frontier.append(j)
        comp.sort()
        sub = IntMatrix.from_rows([[gram.at(i, j) for j in comp] for i in comp])
        blocks.append(_classify_block(tuple(comp), sub))
    return blocks


def _classify_block(indices: tuple[int, ...], sub: IntMatrix) -> _Block:
    if (
        sub.rows == 2
        and sub.at(0, 0) == 0
        and sub.at(1, 1) == 0
        and sub.at(0, 1) != 0
    ):
        return _Block(indices, sub, "hyperbolic", hyper_scale=sub.at(0, 1))
    lat = GramLattice(sub, allow_odd=True)
    sig = lat.signature()
    if sig.positive == 0 or sig.negative == 0:
        return _Block(indices, sub, "definite")
    raise ValueError(
        "ambient block is neither definite nor a rank-2 hyperbolic plane"
    )


def _hyper_components(scale: int, bound: int) -> dict[int, list[tuple[int, int]]]:
    out: dict[int, list[tuple[int, int]]] = {}
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            if x == 0 and y == 0:
                continue
            out.setdefault(2 * scale * x * y, []).append((x, y))
    return out


def _definite_components(
    block: _Block, norm_bound: int
) -> dict[int, list[tuple[int, ...]]]:
    lat = GramLattice(block.gram, allow_odd=True)
    out: dict[int, list[tuple[int, ...]]] = {}
    for vec, norm in short_vectors(lat, norm_bound):
        out.setdefault(norm, []).append(vec)
        out[norm].append(tuple(-x for x in vec))
    return out


def _candidate_pool(
    blocks: list[_Block],
    n: int,
    target_norm: int,
    comp_pools: list[list[dict[int, list[tuple[int, ...]]]]],
    max_support: int,
) -> list[tuple[int, ...]]:
    """All vectors of the target norm supported on <= max_support blocks."""
    found: list[tuple[tuple[int, int, tuple[int, ...]], tuple[int, ...]]] = []
    nblocks = len(blocks)
    for support in range(1, max_support + 1):
        tier = support - 1
        for combo in itertools.combinations(range(nblocks), support):
            pools = [comp_pools[b][tier] for b in combo]
            for norms in _norm_splits([sorted(p) for p in pools], target_norm):
                lists = [pools[i][norms[i]] for i in range(support)]
                total = 1
                for lst in lists:
                    total *= len(lst)
                if len(found) + total > _POOL_CAP:
                    continue
                for parts in itertools.product(*lists):
                    vec = [0] * n
                    for b_idx, comp in zip(combo, parts):
                        for pos, val in zip(blocks[b_idx].indices, comp):
                            vec[pos] = val
                    tvec = tuple(vec)
                    maxabs = max(abs(v) for v in tvec)
                    found.append(((support, maxabs, tvec), tvec))
    found.sort(key=lambda item: item[0])
    seen = set()
    out = []
    for _, vec in found:
        if vec not in seen:
            seen.add(vec)
            out.append(vec)
    return out


def _norm_splits(norm_sets: list[list[int]], target: int):
    """Assignments of one norm per block summing to the target."""
    k = len(norm_sets)

    def rec(i: int, remaining: int, acc: list[int]):
        if i == k:
            if remaining == 0:
                yield tuple(acc)
            return
        for nv in norm_sets[i]:
            acc.append(nv)
            yield from rec(i + 1, remaining - nv, acc)
            acc.pop()

    yield from rec(0, target, [])


def find_primitive_embedding(
    sub: GramLattice,
    ambient: GramLattice,
    node_budget: int = DEFAULT_EMBED_NODES,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
    max_support: int = DEFAULT_MAX_SUPPORT,
) -> Optional[Embedding]:
    """Search for a primitive isometric copy of ``sub`` inside ``ambient``.

    Returns the embedding, or None when the budgeted search finds nothing
    (a verdict, not a fault).  A signature that cannot fit raises
    :class:`SignatureObstructionError`, which is definitive.
    """
    ssig = sub.signature()
    asig = ambient.signature()
    if (
        sub.rank > ambient.rank
        or ssig.positive > asig.positive
        or ssig.negative > asig.negative
    ):
        raise SignatureObstructionError(
            f"signature {ssig.as_tuple()} does not fit into {asig.as_tuple()}"
        )
    if sub.rank == 0:
        return Embedding(ambient, IntMatrix(0, ambient.rank, ()))
    key = (
        sub.gram.entries,
        ambient.gram.entries,
        node_budget,
        coeff_bound,
        max_support,
    )
    if key in _cache:
        basis = _cache[key]
        return None if basis is None else Embedding(ambient, IntMatrix.from_rows([list(r) for r in basis]))
    basis = _run_search(sub, ambient, node_budget, coeff_bound, max_support)
    _cache[key] = basis
    if basis is None:
        return None
    embedding = Embedding(ambient, IntMatrix.from_rows([list(r) for r in basis]))
    return embedding


def _run_search(
    sub: GramLattice,
    ambient: GramLattice,
    node_budget: int,
    coeff_bound: int,
    max_support: int,
) -> Optional[tuple[tuple[int, ...], ...]]:
    n = ambient.rank
    r = sub.rank
    target = sub.gram
    needed_norms = sorted({target.at(i, i) for i in range(r)})
    norm_bound = max(abs(x) for x in needed_norms)

    blocks = _split_blocks(ambient.gram)
    # tiered component pools: wide coefficients for single-block vectors,
    # narrow ones as the support grows
    tier_bounds = [coeff_bound, min(coeff_bound, 2), 1][:max_support]
    comp_pools: list[list[dict[int, list[tuple[int, ...]]]]] = []
    for block in blocks:
        if block.kind == "hyperbolic":
            per_tier = [_hyper_components(block.hyper_scale, tb) for tb in tier_bounds]
        else:
            shared = _definite_components(block, norm_bound)
            per_tier = [shared] * len(tier_bounds)
        comp_pools.append(per_tier)

    pools_np: dict[int, np.ndarray] = {}
    for norm in needed_norms:
        vectors = _candidate_pool(blocks, n, norm, comp_pools, max_support)
        pools_np[norm] = (
            np.array(vectors, dtype=np.int64)
            if vectors
            else np.zeros((0, n), dtype=np.int64)
        )
    gram_np = np.array(ambient.gram.to_rows(), dtype=np.int64)
    target_np = [[target.at(i, j) for j in range(r)] for i in range(r)]
    var_norm = [target.at(i, i) for i in range(r)]

    masks = {v: np.ones(len(pools_np[var_norm[v]]), dtype=bool) for v in range(r)}
    if any(not masks[v].any() for v in range(r)):
        return None
    assigned: dict[int, np.ndarray] = {}
    nodes = [node_budget]
    result: list[Optional[tuple[tuple[int, ...], ...]]] = [None]

    def search() -> bool:
        if len(assigned) == r:
            rows = tuple(tuple(int(x) for x in assigned[v]) for v in range(r))
            mat = IntMatrix.from_rows([list(row) for row in rows])
            if mat @ ambient.gram @ mat.transpose() != target:
                raise AssertionError("candidate filtering failed to enforce the Gram")
            emb = Embedding(ambient, mat)
            if is_primitive(emb):
                result[0] = rows
                return True
            return False
        var = min(
            (v for v in range(r) if v not in assigned),
            key=lambda v: (int(masks[v].sum()), v),
        )
        pool = pools_np[var_norm[var]]
        for idx in np.flatnonzero(masks[var]):
            nodes[0] -= 1
            if nodes[0] < 0:
                raise BudgetExceededError("embedding search budget exhausted")
            w = pool[idx]
            gw = gram_np @ w
            prods = {nm: pools_np[nm] @ gw for nm in pools_np}
            saved = {}
            ok = True
            for other in range(r):
                if other == var or other in assigned:
                    continue
                newmask = masks[other] & (
                    prods[var_norm[other]] == target_np[var][other]
                )
                if not newmask.any():
                    ok = False
                    break
                saved[other] = masks[other]
                masks[other] = newmask
            if ok:
                assigned[var] = w
                if search():
                    return True
                del assigned[var]
            for other, old in saved.items():
                masks[other] = old
        return False

    try:
        search()
    except BudgetExceededError:
        return None
    return result[0]

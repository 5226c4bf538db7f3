"""Bichromatic Hamming closest pair and batch nearest neighbors.

The decision pipeline groups both sides, samples a batch of group-predicate
polynomials, evaluates every polynomial on all group pairs through the
packed matrix product, majority-votes per group pair, and brute-forces
inside flagged pairs.  Every positive is verified by recomputing the
distance, so reported pairs are unconditionally sound; completeness is the
with-high-probability side.

When the projected polynomial size exceeds the monomial budget (the common
case beyond a dozen dimensions) the group size is halved until it fits, and
below that the same contracts are served by exact bit-packed brute force.
Distance search uses a shrinking binary search over the decision oracle;
the batch solver follows the descending-distance retirement scheme, one
close-pair oracle call at a time per group pair.

Ties everywhere resolve to the smallest red/database index, then the
smallest blue/query index, matching the brute-force oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EmptyInputError, InvalidParametersError, ResourceBudgetError
from .hammingpoly import (
    GroupPredicateSpec,
    expand_hamming_masks,
    expand_hamming_poly,
    meets_dimension_advisory,
    projected_expansion_size,
    sample_hamming_poly,
)
from .paireval import PairEvalConfig, eval_all_pairs_bits, eval_all_pairs_masks
from .vectors import (
    BitVector,
    Dataset,
    bit_matrix,
    hamming_distance,
    pack_vectors,
    packed_distance_matrix,
)

__all__ = [
    "ClosestPairConfig",
    "NNResult",
    "closest_pair_bruteforce",
    "batch_nn_bruteforce",
    "bichromatic_close_pair",
    "closest_pair",
    "batch_nn",
]

MONOMIAL_BUDGET_DEFAULT = 1 << 20


@dataclass(frozen=True)
class ClosestPairConfig:
    """Tuning for the probabilistic pipeline.

    s: group size, or "auto" for n**(1/(u*c*log2(c)^2)) with c = dim/log2(n)
       clamped to >= 2.  An auto group size is halved until the projected
       polynomial fits the monomial budget; s = 1 still over budget means
       pure brute force.  An explicit s is honored or brute-forced, never
       silently halved.
    rounds: amplification rounds, or "auto" for ceil(10*log2(n)).
    monomial_budget: cap on expanded polynomial size (0 forces brute force).
    seed: recorded in result metadata; the rng passed to operations rules.
    """

    s: int | str = "auto"
    u_param: float = 16.0
    rounds: int | str = "auto"
    monomial_budget: int = MONOMIAL_BUDGET_DEFAULT
    seed: int | None = None
    use_four_russians: bool = False
    threads: int = 1
    tile_size: int = 256

    def __post_init__(self):
        if isinstance(self.s, int) and self.s < 1:
            raise InvalidParametersError(f"group size must be >= 1, got {self.s}")
        if isinstance(self.rounds, int) and self.rounds < 1:
            raise InvalidParametersError(f"rounds must be >= 1, got {self.rounds}")

    def pair_eval_config(self) -> PairEvalConfig:
        return PairEvalConfig(
            tile_size=self.tile_size,
            use_four_russians=self.use_four_russians,
            threads=self.threads,
            monomial_budget=self.monomial_budget,
        )


@dataclass(frozen=True)
class NNResult:
    """Per-query nearest-neighbor table plus run metadata.

    Each entry is (query index, database index, distance); the distance is
    always the recomputed distance of the reported pair.
    """

    entries: tuple[tuple[int, int, int], ...]
    meta: dict = field(compare=False)

    def distances(self) -> list[int]:
        return [d for _, _, d in self.entries]


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------

_BLOCK = 512


def closest_pair_bruteforce(ds: Dataset) -> tuple[int, int, int]:
    """Exact minimum-distance red-blue pair, smallest indices on ties."""
    if not ds.red or not ds.blue:
        raise EmptyInputError("closest pair needs both colors nonempty")
    rp = pack_vectors(ds.red, ds.dim)
    bp = pack_vectors(ds.blue, ds.dim)
    best = (ds.dim + 1, -1, -1)
    for i0 in range(0, len(ds.red), _BLOCK):
        dmat = packed_distance_matrix(rp[i0 : i0 + _BLOCK], bp)
        flat = int(np.argmin(dmat))
        i, j = divmod(flat, dmat.shape[1])
        d = int(dmat[i, j])
        if d < best[0]:
            best = (d, i0 + i, j)
    return best[1], best[2], best[0]


def batch_nn_bruteforce(
    db: Sequence[BitVector], queries: Sequence[BitVector]
) -> NNResult:
    """Exact nearest database vector per query (smallest index on ties)."""
    if not db:
        raise EmptyInputError("batch NN needs a nonempty database")
    dim = db[0].dim
    dbp = pack_vectors(db, dim)
    entries = []
    for q0 in range(0, len(queries), _BLOCK):
        qp = pack_vectors(queries[q0 : q0 + _BLOCK], dim)
        dmat = packed_distance_matrix(dbp, qp)
        nn = np.argmin(dmat, axis=0)
        for lj in range(dmat.shape[1]):
            i = int(nn[lj])
            entries.append((q0 + lj, i, int(dmat[i, lj])))
    return NNResult(tuple(entries), {"mode": "bruteforce"})


def _brute_close_pair(
    red_packed: np.ndarray, blue_packed: np.ndarray, k: int
) -> tuple[int, int, int] | None:
    """Best pair at distance <= k, or None; (dist, red, blue) lexicographic."""
    best = None
    for i0 in range(0, red_packed.shape[0], _BLOCK):
        dmat = packed_distance_matrix(red_packed[i0 : i0 + _BLOCK], blue_packed)
        flat = int(np.argmin(dmat))
        i, j = divmod(flat, dmat.shape[1])
        d = int(dmat[i, j])
        if d <= k and (best is None or d < best[2]):
            best = (i0 + i, j, d)
    return best


# ---------------------------------------------------------------------------
# Pipeline configuration resolution
# ---------------------------------------------------------------------------


def _auto_group_size(n: int, dim: int, u: float) -> int:
    if n < 4:
        return 2
    c = max(2.0, dim / math.log2(n))
    exponent = 1.0 / (u * c * math.log2(c) ** 2)
    return max(2, int(n**exponent))


def _fits_budget(s: int, dim: int, budget: int) -> bool:
    spec = GroupPredicateSpec(s, dim, 0)  # projection does not depend on k
    return projected_expansion_size(spec) <= budget


def _resolve_group_size(n: int, dim: int, cfg: ClosestPairConfig) -> tuple[int, bool]:
    """Group size plus whether the polynomial pipeline engages at all."""
    if isinstance(cfg.s, int):
        return cfg.s, _fits_budget(cfg.s, dim, cfg.monomial_budget)
    s = _auto_group_size(n, dim, cfg.u_param)
    while True:
        if _fits_budget(s, dim, cfg.monomial_budget):
            return s, True
        if s <= 1:
            return 1, False
        s //= 2


def _resolve_rounds(n: int, cfg: ClosestPairConfig) -> int:
    if isinstance(cfg.rounds, int):
        return cfg.rounds
    return max(1, math.ceil(10 * math.log2(max(n, 2))))


def pipeline_info(n: int, dim: int, cfg: ClosestPairConfig) -> dict:
    """How the pipeline would configure itself for an instance (advisory).

    The dimension advisory flags instances where the asymptotic monomial
    bound's precondition (dimension exceeding e^2*log2(group size)) fails;
    correctness does not depend on it.
    """
    s, engaged = _resolve_group_size(n, dim, cfg)
    info = {
        "group_size": s,
        "engaged": engaged,
        "rounds": _resolve_rounds(n, cfg) if engaged else None,
        "monomial_budget": cfg.monomial_budget,
    }
    if engaged:
        info["dimension_advisory_ok"] = meets_dimension_advisory(
            GroupPredicateSpec(s, dim, 0)
        )
    return info


# ---------------------------------------------------------------------------
# The probabilistic decision pipeline
# ---------------------------------------------------------------------------


def _group_point_bits(bits: np.ndarray, n: int, s: int) -> np.ndarray:
    """Concatenate each size-s group's coordinates into one point row.

    The last group is padded with copies of its final member, which adds no
    new pairs and never changes the answer.
    """
    n_groups = (n + s - 1) // s
    idx = np.minimum(
        np.arange(n_groups)[:, None] * s + np.arange(s)[None, :], n - 1
    )
    return bits[idx].reshape(n_groups, s * bits.shape[1])


def _poly_close_pair(
    red: Sequence[BitVector],
    blue: Sequence[BitVector],
    dim: int,
    k: int,
    s: int,
    rounds: int,
    cfg: ClosestPairConfig,
    rng: np.random.Generator,
    stats: dict | None = None,
) -> tuple[int, int, int] | None:
    """Grouped majority-vote pipeline; returns a verified best pair or None."""
    nr, nb = len(red), len(blue)
    spec = GroupPredicateSpec(s, dim, k)
    red_bits = bit_matrix(red, dim)
    blue_bits = bit_matrix(blue, dim)
    a_bits = _group_point_bits(red_bits, nr, s)
    b_bits = _group_point_bits(blue_bits, nb, s)
    n_rg, n_bg = a_bits.shape[0], b_bits.shape[0]
    votes = np.zeros((n_rg, n_bg), dtype=np.int32)
    pe_cfg = cfg.pair_eval_config()
    for _ in range(rounds):
        hp = sample_hamming_poly(spec, rng)
        try:
            if spec.nvars <= 64:
                masks = expand_hamming_masks(hp, budget=cfg.monomial_budget)
                votes += eval_all_pairs_masks(masks, s * dim, a_bits, b_bits, pe_cfg)
            else:
                q = expand_hamming_poly(hp, budget=cfg.monomial_budget)
                votes += eval_all_pairs_bits(q, a_bits, b_bits, pe_cfg)
        except ResourceBudgetError:
            # projection admitted this size; an overflowing draw falls back
            if stats is not None:
                stats["fallback_calls"] = stats.get("fallback_calls", 0) + 1
            return _brute_close_pair(
                pack_vectors(red, dim), pack_vectors(blue, dim), k
            )

    flagged = 2 * votes > rounds
    if not flagged.any():
        return None
    red_packed = pack_vectors(red, dim)
    blue_packed = pack_vectors(blue, dim)
    best = None
    for gi, gj in np.argwhere(flagged):
        r0, r1 = gi * s, min(nr, (gi + 1) * s)
        b0, b1 = gj * s, min(nb, (gj + 1) * s)
        dmat = packed_distance_matrix(red_packed[r0:r1], blue_packed[b0:b1])
        flat = int(np.argmin(dmat))
        li, lj = divmod(flat, dmat.shape[1])
        d = int(dmat[li, lj])
        if d > k:
            continue  # unverified flag, discard
        cand = (d, int(r0 + li), int(b0 + lj))
        if best is None or cand < best:
            best = cand
    if best is None:
        return None
    return best[1], best[2], best[0]


def _decide(
    red: Sequence[BitVector],
    blue: Sequence[BitVector],
    dim: int,
    k: int,
    engaged: bool,
    s: int,
    rounds: int,
    cfg: ClosestPairConfig,
    rng: np.random.Generator,
) -> tuple[int, int, int] | None:
    if not red or not blue:
        return None
    if engaged:
        return _poly_close_pair(red, blue, dim, k, s, rounds, cfg, rng)
    return _brute_close_pair(pack_vectors(red, dim), pack_vectors(blue, dim), k)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def bichromatic_close_pair(
    ds: Dataset,
    k: int,
    cfg: ClosestPairConfig = ClosestPairConfig(),
    rng: np.random.Generator | None = None,
) -> tuple[int, int] | None:
    """Some verified red-blue pair at distance <= k, or None.

    Positives are sound (the pair's distance is recomputed); a None can be a
    with-high-probability miss when the polynomial pipeline is engaged.
    """
    if not 0 <= k < ds.dim:
        raise InvalidParametersError(f"need 0 <= k < dim, got k={k}, dim={ds.dim}")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    n = max(len(ds.red), len(ds.blue))
    s, engaged = _resolve_group_size(n, ds.dim, cfg)
    rounds = _resolve_rounds(n, cfg)
    res = _decide(ds.red, ds.blue, ds.dim, k, engaged, s, rounds, cfg, rng)
    if res is None:
        return None
    return res[0], res[1]


def closest_pair(
    ds: Dataset,
    cfg: ClosestPairConfig = ClosestPairConfig(),
    rng: np.random.Generator | None = None,
) -> tuple[int, int, int]:
    """Minimum-distance pair (red, blue, distance), equal to brute force whp.

    Locates the distance with a shrinking binary search over the decision
    oracle, then returns the verified witness.
    """
    if not ds.red or not ds.blue:
        raise EmptyInputError("closest pair needs both colors nonempty")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if len(ds.red) == 1 and len(ds.blue) == 1:
        return 0, 0, hamming_distance(ds.red[0], ds.blue[0])
    n = max(len(ds.red), len(ds.blue))
    s, engaged = _resolve_group_size(n, ds.dim, cfg)
    if not engaged:
        return closest_pair_bruteforce(ds)
    rounds = _resolve_rounds(n, cfg)
    hi = hamming_distance(ds.red[0], ds.blue[0])
    best = (0, 0, hi)
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        res = _decide(ds.red, ds.blue, ds.dim, mid, True, s, rounds, cfg, rng)
        if res is not None:
            best = res
            hi = res[2]
        else:
            lo = mid + 1
    return best


def batch_nn(
    db: Sequence[BitVector],
    queries: Sequence[BitVector],
    cfg: ClosestPairConfig = ClosestPairConfig(),
    rng: np.random.Generator | None = None,
) -> NNResult:
    """Nearest database vector for every query, whp, with verified witnesses.

    Both sides split into groups of ceil(sqrt(n)); distance levels run from
    dim-1 down to 0, and at each level the close-pair oracle is called per
    group pair until exhausted, retiring each matched query for the rest of
    the level.  A query's final table value is the verified distance of its
    last (smallest-level) match.  Queries never matched anywhere get an
    exact scan so that every reported distance is the distance of the
    reported pair.
    """
    if not db:
        raise EmptyInputError("batch NN needs a nonempty database")
    dim = db[0].dim
    for v in list(db) + list(queries):
        if v.dim != dim:
            raise InvalidParametersError("database and queries must share one dimension")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    nd, nq = len(db), len(queries)
    n = max(nd, nq)
    s_group = max(1, math.ceil(math.sqrt(n)))
    n_dg = (nd + s_group - 1) // s_group
    n_qg = (nq + s_group - 1) // s_group
    s_inner, engaged = _resolve_group_size(s_group, dim, cfg)
    rounds = _resolve_rounds(s_group, cfg)
    max_dist = dim

    table = [max_dist] * nq
    witness = [-1] * nq
    meta = {
        "mode": "poly" if engaged else "bruteforce-fallback",
        "group_size": s_group,
        "inner_group_size": s_inner if engaged else None,
        "rounds": rounds if engaged else None,
        "seed": cfg.seed,
        "max_distance": max_dist,
    }
    if engaged:
        meta["dimension_advisory_ok"] = meets_dimension_advisory(
            GroupPredicateSpec(s_inner, dim, 0)
        )
        meta["fallback_calls"] = 0
    db_groups = [
        list(range(g * s_group, min(nd, (g + 1) * s_group))) for g in range(n_dg)
    ]
    q_groups = [
        list(range(g * s_group, min(nq, (g + 1) * s_group))) for g in range(n_qg)
    ]

    if engaged:
        for k in range(max_dist - 1, -1, -1):
            alive = [True] * nq
            for dgi in db_groups:
                group_vecs = [db[i] for i in dgi]
                for qgj in q_groups:
                    while True:
                        act = [j for j in qgj if alive[j]]
                        if not act:
                            break
                        res = _poly_close_pair(
                            group_vecs,
                            [queries[j] for j in act],
                            dim,
                            k,
                            s_inner,
                            rounds,
                            cfg,
                            rng,
                            stats=meta,
                        )
                        if res is None:
                            break
                        li, lj, dist = res
                        j = act[lj]
                        table[j] = dist
                        witness[j] = dgi[li]
                        alive[j] = False
    else:
        # Exact oracle: its answers per group pair are a deterministic
        # function of the pair's distance matrix, so the per-level oracle
        # call sequence collapses to column minima computed once per pair.
        db_packed = pack_vectors(db, dim)
        q_packed = pack_vectors(queries, dim) if queries else None
        colmin: dict[tuple[int, int], np.ndarray] = {}
        argfirst: dict[tuple[int, int], np.ndarray] = {}
        for dg in range(n_dg):
            rows = db_packed[db_groups[dg][0] : db_groups[dg][-1] + 1]
            for qg in range(n_qg):
                if not q_groups[qg]:
                    continue
                cols = q_packed[q_groups[qg][0] : q_groups[qg][-1] + 1]
                dmat = packed_distance_matrix(rows, cols)
                colmin[dg, qg] = dmat.min(axis=0)
                argfirst[dg, qg] = np.argmin(dmat, axis=0)
        for k in range(max_dist - 1, -1, -1):
            alive = np.ones(nq, dtype=bool)
            for dg in range(n_dg):
                base = db_groups[dg][0]
                for qg in range(n_qg):
                    qidx = q_groups[qg]
                    if not qidx:
                        continue
                    cm = colmin[dg, qg]
                    qual = alive[qidx] & (cm <= k)
                    if not qual.any():
                        continue
                    af = argfirst[dg, qg]
                    for loc in np.nonzero(qual)[0]:
                        j = qidx[int(loc)]
                        table[j] = int(cm[loc])
                        witness[j] = base + int(af[loc])
                        alive[j] = False

    unmatched = [j for j in range(nq) if witness[j] < 0]
    if unmatched:
        db_packed = pack_vectors(db, dim)
        for j in unmatched:
            qrow = pack_vectors([queries[j]], dim)
            dmat = packed_distance_matrix(db_packed, qrow)[:, 0]
            i = int(np.argmin(dmat))
            witness[j] = i
            table[j] = int(dmat[i])
    meta["unmatched_scans"] = len(unmatched)

    entries = tuple((j, witness[j], table[j]) for j in range(nq))
    return NNResult(entries, meta)

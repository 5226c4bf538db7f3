"""Sampled probabilistic polynomials for thresholds and symmetric functions.

A threshold circuit is either an exact weight interpolation (base case) or a
recursive combination

    M(x) = A(x) * S(x~) + M_inner(x~) * (1 - S(x~)),
    S    = (1 - near_hi) * near_lo,

where x~ keeps a 1/10 random sample of the coordinates and near_hi/near_lo
are circuits for slightly shifted thresholds with a quarter of the error
budget.  The sampled coordinate map is drawn once per recursion level and
shared by all three children (and, in a symmetric-function combination, by
every threshold circuit), so a circuit is a *skeleton* of per-level maps
plus a parameter tree.

Evaluation never expands polynomials.  All interpolations here prescribe a
0/1 step over a weight window, and their forward-difference coefficients
have a closed form, so window values are exact weight comparisons and
off-window values are short Newton sums of big integers on demand.

Explicit expansion (for the small-n equivalence tests and GF(2) reduction)
is available behind a monomial budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatchError, InvalidParametersError, ResourceBudgetError
from .polyalg import IntPolynomial, binom_int, eval_newton, newton_to_symmetric
from .vectors import BitVector, bit_matrix

__all__ = [
    "DEGREE_CONSTANT",
    "ThresholdSpec",
    "SymmetricFunctionSpec",
    "SampledThresholdCircuit",
    "SymmetricCombination",
    "SampleSkeleton",
    "degree_bound",
    "threshold_index",
    "threshold_value",
    "sample_threshold",
    "eval_circuit",
    "expand_circuit",
    "sample_symmetric",
    "jump_sets",
    "measure_error",
    "measure_threshold_error",
    "measure_symmetric_error",
    "boundary_inputs",
    "AgreementReport",
]

DEGREE_CONSTANT = 41
BASE_SIZE_LIMIT = 10
SHRINK = 10
EXPANSION_BUDGET_DEFAULT = 1 << 20


def degree_bound(n: int, eps: Fraction | float) -> float:
    """The asserted degree bound 41*sqrt(n*ln(1/eps))."""
    return DEGREE_CONSTANT * math.sqrt(n * math.log(1.0 / float(eps)))


def threshold_index(theta: Fraction, n: int) -> int:
    """Smallest weight w with w/n >= theta (so the function is [w >= index])."""
    return math.ceil(theta * n)


def threshold_value(theta: Fraction, n: int, weight: int) -> int:
    return int(weight >= threshold_index(theta, n))


@dataclass(frozen=True)
class ThresholdSpec:
    """Threshold function [|x|/n >= theta] with an error budget.

    The correctness guarantee of the sampled circuit is documented for
    eps < 1/4; larger eps is accepted (it forces recursion at small n,
    which the equivalence tests rely on) but the guarantee degrades.
    """

    n: int
    theta: Fraction
    eps: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParametersError(f"n must be positive, got {self.n}")
        if not 0 <= self.theta <= 1:
            raise InvalidParametersError(f"theta must be in [0,1], got {self.theta}")
        if not 0 < self.eps < 1:
            raise InvalidParametersError(f"eps must be in (0,1), got {self.eps}")

    def truth(self, x: BitVector) -> int:
        return threshold_value(self.theta, self.n, x.weight())


@dataclass(frozen=True)
class SymmetricFunctionSpec:
    """A symmetric Boolean function given by its value at each weight."""

    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.n + 1:
            raise InvalidParametersError(
                f"need {self.n + 1} weight values, got {len(self.values)}"
            )
        if set(self.values) - {0, 1}:
            raise InvalidParametersError("weight values must be 0/1")

    def truth(self, x: BitVector) -> int:
        return self.values[x.weight()]


# ---------------------------------------------------------------------------
# Step interpolations over a weight window
# ---------------------------------------------------------------------------


class StepWindow:
    """Exact integer polynomial prescribing [w >= t] on weights lo..hi.

    Values inside the window are literal comparisons; values outside are the
    interpolation's extrapolation, evaluated lazily from the closed-form
    forward differences d_j = (-1)^(j-tau) * C(j-1, tau-1), tau = t - lo.
    """

    __slots__ = ("n", "lo", "hi", "t", "_off_cache")

    def __init__(self, n: int, lo: int, hi: int, t: int):
        if not 0 <= lo <= hi <= n:
            raise InvalidParametersError(f"bad window [{lo},{hi}] for n={n}")
        self.n = n
        self.lo = lo
        self.hi = hi
        self.t = t
        self._off_cache: dict[int, int] = {}

    def is_constant(self) -> bool:
        return self.t <= self.lo or self.t > self.hi

    def newton_diffs(self) -> list[int]:
        """Forward differences of the window values, start at lo."""
        if self.t <= self.lo:
            return [1]
        if self.t > self.hi:
            return [0]
        tau = self.t - self.lo
        r = self.hi - self.lo + 1
        d = [0] * r
        for j in range(tau, r):
            d[j] = (-1) ** (j - tau) * binom_int(j - 1, tau - 1)
        return d

    def value(self, w: int) -> int:
        if self.is_constant():
            return int(self.t <= self.lo)
        if self.lo <= w <= self.hi:
            return int(w >= self.t)
        cached = self._off_cache.get(w)
        if cached is None:
            cached = eval_newton(self.newton_diffs(), self.lo, w)
            self._off_cache[w] = cached
        return cached

    def degree_cap(self) -> int:
        """Window width, an upper bound on the interpolation degree."""
        return 0 if self.is_constant() else self.hi - self.lo

    def to_int_polynomial(self) -> IntPolynomial:
        """Symmetric-mode polynomial (coefficients on the degree-i monomial sums)."""
        return IntPolynomial.symmetric(
            self.n, newton_to_symmetric(self.newton_diffs(), self.lo)
        )


_window_cache: dict[tuple[int, int, int, int], StepWindow] = {}


def _step_window(n: int, lo: int, hi: int, t: int) -> StepWindow:
    key = (n, lo, hi, t)
    win = _window_cache.get(key)
    if win is None:
        win = _window_cache.setdefault(key, StepWindow(n, lo, hi, t))
    return win


# ---------------------------------------------------------------------------
# Sampling skeleton and circuits
# ---------------------------------------------------------------------------


class SampleSkeleton:
    """The per-level coordinate samples shared across a whole circuit.

    maps[l] holds sizes[l+1] indices into [0, sizes[l]): entry j says which
    level-l coordinate feeds coordinate j of the level-(l+1) sampled vector.
    """

    __slots__ = ("sizes", "maps")

    def __init__(self, sizes: Sequence[int], maps: Sequence[np.ndarray]):
        self.sizes = tuple(sizes)
        self.maps = tuple(maps)

    @property
    def depth(self) -> int:
        return len(self.maps)

    def weight_profile(self, bits: np.ndarray) -> list[int]:
        """Weights of the input and of each successive sampled vector."""
        profile = [int(bits.sum())]
        cur = bits
        for mp in self.maps:
            cur = cur[mp]
            profile.append(int(cur.sum()))
        return profile


def _is_base(n: int, eps: Fraction) -> bool:
    return n <= BASE_SIZE_LIMIT or degree_bound(n, eps) >= n


def _child_size(n: int) -> int:
    return max(1, n // SHRINK)


def _level_sizes(n: int, eps: Fraction) -> list[int]:
    """Sizes per level down to (and including) the base level."""
    sizes = [n]
    cur_eps = eps
    while not _is_base(sizes[-1], cur_eps):
        sizes.append(_child_size(sizes[-1]))
        cur_eps = cur_eps / 4
    return sizes


def _draw_skeleton(n: int, eps: Fraction, rng: np.random.Generator) -> SampleSkeleton:
    sizes = _level_sizes(n, eps)
    maps = [
        rng.integers(0, sizes[l], size=sizes[l + 1]).astype(np.int64)
        for l in range(len(sizes) - 1)
    ]
    return SampleSkeleton(sizes, maps)


class SampledThresholdCircuit:
    """One draw from the probabilistic-polynomial distribution for a threshold.

    kind == "exact_base": the circuit is the exact interpolation over all
    weights 0..n and ``window`` covers the full range.

    kind == "recursive": ``window`` is the exact band around theta*n of
    half-width 2*a_param*sqrt(n); near_hi/near_lo/inner are the children on
    the sampled vector, all sharing ``sample_map``.
    """

    __slots__ = ("spec", "kind", "level", "skeleton", "window", "a_param",
                 "near_hi", "near_lo", "inner")

    def __init__(self, spec, kind, level, skeleton, window, a_param=None,
                 near_hi=None, near_lo=None, inner=None):
        self.spec = spec
        self.kind = kind
        self.level = level
        self.skeleton = skeleton
        self.window = window
        self.a_param = a_param
        self.near_hi = near_hi
        self.near_lo = near_lo
        self.inner = inner

    @property
    def sample_map(self) -> np.ndarray | None:
        if self.kind != "recursive":
            return None
        return self.skeleton.maps[self.level]

    @property
    def band_poly(self) -> IntPolynomial:
        """The exact window interpolation as a symmetric-mode polynomial."""
        return self.window.to_int_polynomial()

    def depth(self) -> int:
        if self.kind == "exact_base":
            return 0
        return 1 + self.inner.depth()

    def structural_degree(self) -> int:
        """Degree bound from the construction, without expanding anything."""
        if self.kind == "exact_base":
            if self.window.is_constant():
                return 0
            return self.spec.n  # step interpolation over 0..n has full degree
        ds = self.near_hi.structural_degree() + self.near_lo.structural_degree()
        return ds + max(self.window.degree_cap(), self.inner.structural_degree())

    def eval_weights(self, profile: Sequence[int]) -> int:
        w = profile[self.level]
        if self.kind == "exact_base":
            return self.window.value(w)
        hi = self.near_hi.eval_weights(profile)
        lo = self.near_lo.eval_weights(profile)
        inner = self.inner.eval_weights(profile)
        s = (1 - hi) * lo
        if s == 0:  # skip the window value; off-window extrapolation is costly
            return inner
        return self.window.value(w) * s + inner * (1 - s)

    def eval_bits(self, bits: np.ndarray) -> int:
        if self.skeleton is None:
            return self.window.value(int(bits.sum()))
        return self.eval_weights(self.skeleton.weight_profile(bits))

    def __repr__(self) -> str:
        return (
            f"SampledThresholdCircuit(n={self.spec.n}, theta={self.spec.theta}, "
            f"eps={self.spec.eps}, kind={self.kind}, depth={self.depth()})"
        )


def _band_bounds(n: int, theta: Fraction, a: float) -> tuple[int, int]:
    """Integer weights within 2*a*sqrt(n) of theta*n, rounded per design."""
    center = float(theta * n)
    half = 2.0 * a * math.sqrt(n)
    lo = max(0, math.ceil(center - half))
    hi = min(n, math.floor(center + half))
    if lo > hi:
        # degenerate window (only possible for eps extremely close to 1):
        # keep the single nearest weight so the product structure stands.
        mid = min(n, max(0, round(center)))
        lo = hi = mid
    return lo, hi


def _build_node(
    n: int,
    theta: Fraction,
    eps: Fraction,
    level: int,
    skeleton: SampleSkeleton | None,
) -> SampledThresholdCircuit:
    spec = ThresholdSpec(n, theta, eps)
    t = threshold_index(theta, n)
    if _is_base(n, eps):
        window = _step_window(n, 0, n, t)
        return SampledThresholdCircuit(spec, "exact_base", level, skeleton, window)
    a = math.sqrt(SHRINK * math.log(1.0 / float(eps)))
    lo, hi = _band_bounds(n, theta, a)
    window = _step_window(n, lo, hi, t)
    delta = Fraction(a / math.sqrt(n))
    m = _child_size(n)
    child_eps = eps / 4
    theta_hi = min(Fraction(1), theta + delta)
    theta_lo = max(Fraction(0), theta - delta)
    return SampledThresholdCircuit(
        spec,
        "recursive",
        level,
        skeleton,
        window,
        a_param=a,
        near_hi=_build_node(m, theta_hi, child_eps, level + 1, skeleton),
        near_lo=_build_node(m, theta_lo, child_eps, level + 1, skeleton),
        inner=_build_node(m, theta, child_eps, level + 1, skeleton),
    )


def sample_threshold(
    spec: ThresholdSpec, rng: np.random.Generator
) -> SampledThresholdCircuit:
    """Draw one circuit from the distribution for TH_theta.

    On each fixed input the circuit equals the threshold with probability at
    least 1 - eps over the draw (documented for eps < 1/4); it is
    deterministic given the rng state.
    """
    if _is_base(spec.n, spec.eps):
        return _build_node(spec.n, spec.theta, spec.eps, 0, None)
    skeleton = _draw_skeleton(spec.n, spec.eps, rng)
    return _build_node(spec.n, spec.theta, spec.eps, 0, skeleton)


def eval_circuit(c: SampledThresholdCircuit, x: BitVector) -> int:
    """Evaluate the sampled polynomial without expanding it."""
    if x.dim != c.spec.n:
        raise DimensionMismatchError(f"input dim {x.dim} != circuit n {c.spec.n}")
    return c.eval_bits(bit_matrix([x])[0])


# ---------------------------------------------------------------------------
# Explicit expansion
# ---------------------------------------------------------------------------


def _substitute(p: IntPolynomial, mapping: np.ndarray, nvars: int) -> IntPolynomial:
    """Rename variables through a (possibly repeating) coordinate map."""
    out: dict[tuple[int, ...], int] = {}
    for m, coeff in p.expand().terms.items():
        target = tuple(sorted({int(mapping[j]) for j in m}))
        c = out.get(target, 0) + coeff
        if c:
            out[target] = c
        elif target in out:
            del out[target]
    return IntPolynomial(nvars, terms=out)


def _check_budget(p: IntPolynomial, budget: int) -> IntPolynomial:
    count = p.monomial_count()
    if count > budget:
        raise ResourceBudgetError("circuit expansion too large", projected=count, budget=budget)
    return p


def expand_circuit(
    c: SampledThresholdCircuit, budget: int = EXPANSION_BUDGET_DEFAULT
) -> IntPolynomial:
    """Expand the sampled circuit into an explicit multilinear IntPolynomial.

    Raises:
        ResourceBudgetError: when the projected or any intermediate's
            monomial count exceeds the budget (the error names the count).
    """
    n = c.spec.n
    # cheap projection before any basis conversion: the window interpolation
    # alone touches every monomial of degree <= its width
    projected = sum(binom_int(n, deg) for deg in range(c.window.degree_cap() + 1))
    if projected > budget:
        raise ResourceBudgetError(
            "circuit expansion too large", projected=projected, budget=budget
        )
    window_poly = c.window.to_int_polynomial()
    if c.kind == "exact_base":
        return _check_budget(window_poly, budget).expand(budget=budget)
    mapping = c.sample_map
    hi = _substitute(expand_circuit(c.near_hi, budget), mapping, n)
    lo = _substitute(expand_circuit(c.near_lo, budget), mapping, n)
    inner = _substitute(expand_circuit(c.inner, budget), mapping, n)
    s = _check_budget((1 - hi) * lo, budget)
    a_expl = _check_budget(window_poly, budget).expand(budget=budget)
    out = _check_budget(a_expl * s + inner * (1 - s), budget)
    bound = min(n, degree_bound(n, c.spec.eps))
    if out.degree() > bound:
        raise AssertionError(
            f"expanded degree {out.degree()} exceeds bound {bound}"
        )
    return out


# ---------------------------------------------------------------------------
# Symmetric functions via the jump-set decomposition
# ---------------------------------------------------------------------------


def jump_sets(values: Sequence[int]) -> tuple[list[int], list[int]]:
    """Weights where the function jumps up (0->1) and down (1->0)."""
    ups = [i for i in range(1, len(values)) if values[i] == 1 and values[i - 1] == 0]
    downs = [i for i in range(1, len(values)) if values[i] == 0 and values[i - 1] == 1]
    return ups, downs


class SymmetricCombination:
    """Signed combination f0 + sum(up circuits) - sum(down circuits).

    All member circuits share one skeleton, so the per-level sampled vectors
    coincide across thresholds; per-input error of the whole combination is
    below the requested eps.  The circuit objects materialize lazily: for a
    depth-1 draw (recursive top, exact-base children, the common desk-scale
    shape) evaluation runs on vectorized per-threshold index arrays instead.
    """

    __slots__ = (
        "spec", "eps", "f0", "up_jumps", "down_jumps", "threshold_eps",
        "skeleton", "_fast", "_ups", "_downs",
    )

    def __init__(self, spec, eps, up_jumps, down_jumps, threshold_eps, skeleton):
        self.spec = spec
        self.eps = eps
        self.f0 = spec.values[0]
        self.up_jumps = list(up_jumps)
        self.down_jumps = list(down_jumps)
        self.threshold_eps = threshold_eps
        self.skeleton = skeleton
        self._fast = None
        self._ups = None
        self._downs = None

    def _build(self, jumps: list[int]) -> list[SampledThresholdCircuit]:
        n = self.spec.n
        return [
            _build_node(n, Fraction(i, n), self.threshold_eps, 0, self.skeleton)
            for i in jumps
        ]

    @property
    def ups(self) -> list[SampledThresholdCircuit]:
        if self._ups is None:
            self._ups = self._build(self.up_jumps)
        return self._ups

    @property
    def downs(self) -> list[SampledThresholdCircuit]:
        if self._downs is None:
            self._downs = self._build(self.down_jumps)
        return self._downs

    def circuits(self) -> list[SampledThresholdCircuit]:
        return list(self.ups) + list(self.downs)

    def eval_bits(self, bits: np.ndarray) -> int:
        has_jumps = bool(self.up_jumps or self.down_jumps)
        if self.skeleton is not None and self.skeleton.depth == 1 and has_jumps:
            if self._fast is None:
                # the index arrays depend only on (spec, eps), not the draw
                key = (self.spec, self.threshold_eps)
                fast = _fast_comb_cache.get(key)
                if fast is None:
                    fast = _fast_comb_cache.setdefault(key, _FastDepth1Combination(self))
                self._fast = fast
            profile = self.skeleton.weight_profile(bits)
            return self._fast.eval(profile[0], profile[1])
        profile = (
            self.skeleton.weight_profile(bits)
            if self.skeleton is not None
            else [int(bits.sum())]
        )
        total = self.f0
        for c in self.ups:
            total += c.eval_weights(profile)
        for c in self.downs:
            total -= c.eval_weights(profile)
        return total

    def eval(self, x: BitVector) -> int:
        if x.dim != self.spec.n:
            raise DimensionMismatchError(f"input dim {x.dim} != n {self.spec.n}")
        return self.eval_bits(bit_matrix([x])[0])


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


_fast_comb_cache: dict[tuple, "_FastDepth1Combination"] = {}


class _FastDepth1Combination:
    """Vectorized evaluation across all thresholds of a depth-1 combination.

    Rebuilds, per threshold j/n, the top-level window bounds and the three
    exact-child threshold indices by the same arithmetic the node builder
    uses (integer ceilings of theta*m with theta shifted by the rationalized
    sampling tolerance), skipping per-threshold Fraction objects.  An
    evaluation is then a handful of array comparisons; off-window
    interpolation values (only reachable when the sampled weight disagrees
    with the true weight about nearness) are computed per offending
    threshold.
    """

    def __init__(self, comb: SymmetricCombination):
        n = comb.spec.n
        eps = comb.threshold_eps
        jumps = np.array(comb.up_jumps + comb.down_jumps, dtype=np.int64)
        self.n = n
        self.f0 = comb.f0
        self.sign = np.array(
            [1] * len(comb.up_jumps) + [-1] * len(comb.down_jumps), dtype=np.int64
        )
        a = math.sqrt(SHRINK * math.log(1.0 / float(eps)))
        m = _child_size(n)
        half = 2.0 * a * math.sqrt(n)
        centers = jumps.astype(np.float64)  # theta*n is exactly the jump weight
        self.lo = np.maximum(0, np.ceil(centers - half)).astype(np.int64)
        self.hi = np.minimum(n, np.floor(centers + half)).astype(np.int64)
        self.t_top = jumps  # ceil((j/n)*n) = j
        delta = Fraction(a / math.sqrt(n))
        p, q = delta.numerator, delta.denominator
        den = n * q
        self.t_hi = np.array(
            [min(m, _ceil_div((j * q + p * n) * m, den)) for j in jumps.tolist()],
            dtype=np.int64,
        )
        self.t_lo = np.array(
            [max(0, _ceil_div((j * q - p * n) * m, den)) for j in jumps.tolist()],
            dtype=np.int64,
        )
        self.t_in = (jumps * m + n - 1) // n

    def eval(self, w0: int, w1: int) -> int:
        v_hi = (w1 >= self.t_hi).astype(np.int64)
        v_lo = (w1 >= self.t_lo).astype(np.int64)
        v_in = (w1 >= self.t_in).astype(np.int64)
        s = (1 - v_hi) * v_lo
        in_window = (self.lo <= w0) & (w0 <= self.hi)
        a_val = (w0 >= self.t_top).astype(np.int64)
        need_off = (~in_window) & (s != 0)
        vals = a_val * s + v_in * (1 - s)
        total = self.f0 + int(self.sign[~need_off] @ vals[~need_off])
        if need_off.any():
            for i in np.nonzero(need_off)[0]:
                win = _step_window(
                    self.n, int(self.lo[i]), int(self.hi[i]), int(self.t_top[i])
                )
                m_val = win.value(w0) * int(s[i]) + int(v_in[i]) * (1 - int(s[i]))
                total += int(self.sign[i]) * m_val
        return total


def sample_symmetric(
    spec: SymmetricFunctionSpec, eps: Fraction, rng: np.random.Generator
) -> SymmetricCombination:
    """Sample a probabilistic polynomial for an arbitrary symmetric function.

    Each jump threshold is sampled with error eps/2, with the same per-level
    coordinate samples shared across every threshold; on any fixed input the
    combination equals the function with probability at least 1 - eps.
    """
    if not 0 < eps < 1:
        raise InvalidParametersError(f"eps must be in (0,1), got {eps}")
    ups, downs = jump_sets(spec.values)
    delta = Fraction(eps) / 2
    skeleton = None
    if (ups or downs) and not _is_base(spec.n, delta):
        skeleton = _draw_skeleton(spec.n, delta, rng)
    return SymmetricCombination(spec, eps, ups, downs, delta, skeleton)


# ---------------------------------------------------------------------------
# Statistical verification harness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AgreementReport:
    weight: int
    agreement: float
    trials: int


def measure_error(
    sampler: Callable[[np.random.Generator], object],
    reference: Callable[[BitVector], int],
    inputs: Sequence[BitVector],
    trials: int,
    rng: np.random.Generator,
) -> list[AgreementReport]:
    """Fraction of independently sampled circuits agreeing with the reference.

    Args:
        sampler: draws a fresh circuit (anything with ``eval_bits``).
        reference: the exact function the circuits are supposed to compute.
        inputs: evaluation points (each gets its own agreement rate).
        trials: number of independent circuit draws.
        rng: seeded random stream; results are deterministic given it.
    """
    if trials < 1:
        raise InvalidParametersError("trials must be >= 1")
    bits_rows = [bit_matrix([x])[0] for x in inputs]
    ref = [reference(x) for x in inputs]
    hits = [0] * len(inputs)
    for _ in range(trials):
        circ = sampler(rng)
        for idx, row in enumerate(bits_rows):
            if circ.eval_bits(row) == ref[idx]:
                hits[idx] += 1
    return [
        AgreementReport(inputs[i].weight(), hits[i] / trials, trials)
        for i in range(len(inputs))
    ]


def boundary_inputs(n: int, theta: Fraction) -> list[BitVector]:
    """Representative inputs at the boundary weights of the threshold."""
    t = threshold_index(theta, n)
    weights = sorted({w for w in (t, t - 1) if 0 <= w <= n})
    return [BitVector(n, (1 << w) - 1) for w in weights]


def measure_threshold_error(
    spec: ThresholdSpec,
    inputs: Sequence[BitVector],
    trials: int,
    rng: np.random.Generator,
) -> list[AgreementReport]:
    return measure_error(
        lambda r: sample_threshold(spec, r), spec.truth, inputs, trials, rng
    )


def measure_symmetric_error(
    spec: SymmetricFunctionSpec,
    eps: Fraction,
    inputs: Sequence[BitVector],
    trials: int,
    rng: np.random.Generator,
) -> list[AgreementReport]:
    return measure_error(
        lambda r: sample_symmetric(spec, eps, r), spec.truth, inputs, trials, rng
    )

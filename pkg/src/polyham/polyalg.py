"""Exact multilinear polynomial algebra over the integers and GF(2).

Monomials are strictly increasing tuples of 0-based variable indices; the
empty tuple is the constant monomial.  All arithmetic is multilinear: x_i^2
reduces to x_i on the fly, which is sound because every evaluation point is
Boolean.

Integer polynomials come in two storage modes:

  explicit   -- map monomial -> nonzero arbitrary-precision coefficient.
  symmetric  -- map degree i -> coefficient a_i, standing for a_i times the
               sum of all degree-i monomials.  Evaluation uses
               p(x) = sum_i a_i * C(|x|, i), and expansion to explicit
               monomials is lazy (the degree-i slice alone has C(n, i)
               monomials, so symmetric construction must never expand).

``interpolate_weights`` builds the integer polynomial that takes prescribed
values on prescribed consecutive Hamming weights.  The underlying binomial
linear system is unimodular (``binomial_matrix_det`` returns 1 for every
k, r), so the coefficients are integers; we solve it by structured
elimination with finite differences, which is exact and O(r^2), and keep a
dense fraction-free solver as an independent oracle for tests.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatchError, InvalidParametersError, ResourceBudgetError

Monomial = tuple[int, ...]

__all__ = [
    "Monomial",
    "make_monomial",
    "monomial_mul",
    "binom_int",
    "IntPolynomial",
    "Gf2Polynomial",
    "interpolate_weights",
    "binomial_matrix_det",
    "newton_coeffs",
    "eval_newton",
    "newton_to_symmetric",
]


def make_monomial(indices: Iterable[int]) -> Monomial:
    """Canonicalize a set of variable indices into a monomial."""
    t = tuple(sorted(set(indices)))
    for i in t:
        if i < 0:
            raise ValueError(f"negative variable index {i}")
    return t


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    """Multilinear product: union of index sets."""
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(set(a) | set(b)))


def _mono_mask(m: Monomial) -> int:
    mask = 0
    for i in m:
        mask |= 1 << i
    return mask


def binom_int(n: int, k: int) -> int:
    """C(n, k) for any integer n and k >= 0 (generalized to negative n)."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k)
    return (-1) ** k * comb(k - n - 1, k)


# ---------------------------------------------------------------------------
# Integer polynomials
# ---------------------------------------------------------------------------


class IntPolynomial:
    """Multilinear polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("nvars", "terms", "sym_coeffs", "_masks")

    def __init__(
        self,
        nvars: int,
        terms: Mapping[Monomial, int] | None = None,
        sym_coeffs: Mapping[int, int] | None = None,
    ):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        if (terms is None) == (sym_coeffs is None):
            raise ValueError("exactly one of terms / sym_coeffs must be given")
        object.__setattr__(self, "nvars", nvars)
        if terms is not None:
            clean = {}
            for m, c in terms.items():
                if c == 0:
                    continue
                if m and (m[-1] >= nvars or len(set(m)) != len(m) or list(m) != sorted(m)):
                    raise ValueError(f"bad monomial {m} for nvars={nvars}")
                clean[m] = c
            object.__setattr__(self, "terms", clean)
            object.__setattr__(self, "sym_coeffs", None)
        else:
            clean = {d: c for d, c in sym_coeffs.items() if c != 0}
            for d in clean:
                if not 0 <= d <= nvars:
                    raise ValueError(f"symmetric degree {d} out of range for nvars={nvars}")
            object.__setattr__(self, "terms", None)
            object.__setattr__(self, "sym_coeffs", clean)
        object.__setattr__(self, "_masks", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("IntPolynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "IntPolynomial":
        return cls(nvars, terms={})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "IntPolynomial":
        return cls(nvars, terms={(): c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "IntPolynomial":
        return cls(nvars, terms={(i,): 1})

    @classmethod
    def symmetric(cls, nvars: int, coeffs: Mapping[int, int]) -> "IntPolynomial":
        return cls(nvars, sym_coeffs=coeffs)

    # -- inspection --------------------------------------------------------

    @property
    def is_symmetric_mode(self) -> bool:
        return self.sym_coeffs is not None

    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        if self.sym_coeffs is not None:
            return max(self.sym_coeffs, default=-1)
        return max((len(m) for m in self.terms), default=-1)

    def monomial_count(self) -> int:
        """Number of distinct monomials (counted without expanding)."""
        if self.sym_coeffs is not None:
            return sum(comb(self.nvars, d) for d in self.sym_coeffs)
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntPolynomial) or self.nvars != other.nvars:
            return NotImplemented if not isinstance(other, IntPolynomial) else False
        if self.is_symmetric_mode == other.is_symmetric_mode:
            return (self.terms, self.sym_coeffs) == (other.terms, other.sym_coeffs)
        return self.expand().terms == other.expand().terms

    def __hash__(self):
        if self.sym_coeffs is not None:
            return hash((self.nvars, tuple(sorted(self.sym_coeffs.items()))))
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:
        kind = "sym" if self.is_symmetric_mode else "explicit"
        return f"IntPolynomial(nvars={self.nvars}, {kind}, {self.monomial_count()} monomials)"

    # -- evaluation --------------------------------------------------------

    def eval_mask(self, mask: int, weight: int | None = None) -> int:
        """Evaluate at the Boolean point whose support is the given bitmask."""
        if self.sym_coeffs is not None:
            w = mask.bit_count() if weight is None else weight
            return sum(a * comb(w, i) for i, a in self.sym_coeffs.items())
        masks = self._mono_masks()
        return sum(c for mm, c in masks if mm & mask == mm)

    def _mono_masks(self):
        cached = self._masks
        if cached is None:
            cached = [(_mono_mask(m), c) for m, c in self.terms.items()]
            object.__setattr__(self, "_masks", cached)
        return cached

    # -- ring operations ---------------------------------------------------

    def _require_same_nvars(self, other: "IntPolynomial") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatchError(
                f"variable count mismatch: {self.nvars} != {other.nvars}"
            )

    def expand(self, budget: int | None = None) -> "IntPolynomial":
        """Explicit-mode copy; expands a symmetric polynomial monomial by monomial."""
        if self.sym_coeffs is None:
            return self
        from itertools import combinations

        projected = self.monomial_count()
        if budget is not None and projected > budget:
            raise ResourceBudgetError(
                "symmetric expansion too large", projected=projected, budget=budget
            )
        terms: dict[Monomial, int] = {}
        for d, a in sorted(self.sym_coeffs.items()):
            for m in combinations(range(self.nvars), d):
                terms[m] = a
        return IntPolynomial(self.nvars, terms=terms)

    def __neg__(self) -> "IntPolynomial":
        if self.sym_coeffs is not None:
            return IntPolynomial(self.nvars, sym_coeffs={d: -c for d, c in self.sym_coeffs.items()})
        return IntPolynomial(self.nvars, terms={m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            other = IntPolynomial.constant(self.nvars, other)
        self._require_same_nvars(other)
        if self.sym_coeffs is not None and other.sym_coeffs is not None:
            out = dict(self.sym_coeffs)
            for d, c in other.sym_coeffs.items():
                out[d] = out.get(d, 0) + c
            return IntPolynomial(self.nvars, sym_coeffs=out)
        a, b = self.expand(), other.expand()
        out = dict(a.terms)
        for m, c in b.terms.items():
            out[m] = out.get(m, 0) + c
        return IntPolynomial(self.nvars, terms=out)

    __radd__ = __add__

    def __sub__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            other = IntPolynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other) -> "IntPolynomial":
        return (-self) + other

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            if self.sym_coeffs is not None:
                return IntPolynomial(
                    self.nvars, sym_coeffs={d: c * other for d, c in self.sym_coeffs.items()}
                )
            return IntPolynomial(self.nvars, terms={m: c * other for m, c in self.terms.items()})
        self._require_same_nvars(other)
        a, b = self.expand(), other.expand()
        out: dict[Monomial, int] = {}
        for m1, c1 in a.terms.items():
            s1 = set(m1)
            for m2, c2 in b.terms.items():
                m = m1 if not m2 else (m2 if not m1 else tuple(sorted(s1 | set(m2))))
                c = out.get(m, 0) + c1 * c2
                if c:
                    out[m] = c
                elif m in out:
                    del out[m]
        return IntPolynomial(self.nvars, terms=out)

    __rmul__ = __mul__

    # -- serialization -----------------------------------------------------

    def dump_lines(self) -> list[str]:
        """Debug serialization: one ``<coeff> : i1,i2,...`` line per term,
        or ``sym <degree> <coeff>`` lines in symmetric mode."""
        if self.sym_coeffs is not None:
            return [f"sym {d} {c}" for d, c in sorted(self.sym_coeffs.items())]
        return [
            f"{c} : {','.join(map(str, m))}"
            for m, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        ]


# ---------------------------------------------------------------------------
# GF(2) polynomials
# ---------------------------------------------------------------------------


class Gf2Polynomial:
    """Multilinear polynomial over GF(2): a set of monomials, coefficient 1 each."""

    __slots__ = ("nvars", "terms", "_masks")

    def __init__(self, nvars: int, terms: Iterable[Monomial] = ()):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        tset = frozenset(terms)
        for m in tset:
            if m and (m[-1] >= nvars or list(m) != sorted(set(m))):
                raise ValueError(f"bad monomial {m} for nvars={nvars}")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", tset)
        object.__setattr__(self, "_masks", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Gf2Polynomial is immutable")

    @classmethod
    def zero(cls, nvars: int) -> "Gf2Polynomial":
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int) -> "Gf2Polynomial":
        return cls(nvars, [()])

    @classmethod
    def from_int_polynomial(cls, p: IntPolynomial, budget: int | None = None) -> "Gf2Polynomial":
        """Reduce coefficients mod 2 (drops even-coefficient monomials)."""
        exp = p.expand(budget=budget)
        return cls(p.nvars, [m for m, c in exp.terms.items() if c % 2])

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def monomial_count(self) -> int:
        return len(self.terms)

    def eval_mask(self, mask: int) -> int:
        masks = self._masks
        if masks is None:
            masks = [_mono_mask(m) for m in self.terms]
            object.__setattr__(self, "_masks", masks)
        return sum(1 for mm in masks if mm & mask == mm) & 1

    def _require_same_nvars(self, other: "Gf2Polynomial") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatchError(
                f"variable count mismatch: {self.nvars} != {other.nvars}"
            )

    def __add__(self, other: "Gf2Polynomial") -> "Gf2Polynomial":
        self._require_same_nvars(other)
        return Gf2Polynomial(self.nvars, self.terms ^ other.terms)

    __xor__ = __add__
    __sub__ = __add__

    def __mul__(self, other: "Gf2Polynomial") -> "Gf2Polynomial":
        self._require_same_nvars(other)
        if self.terms == other.terms:
            # p*p = p for multilinear GF(2): cross terms cancel in pairs.
            return self
        counts: dict[Monomial, int] = {}
        small, large = sorted((self.terms, other.terms), key=len)
        for m1 in small:
            s1 = set(m1)
            for m2 in large:
                m = m1 if not m2 else (m2 if not m1 else tuple(sorted(s1 | set(m2))))
                counts[m] = counts.get(m, 0) ^ 1
        return Gf2Polynomial(self.nvars, [m for m, c in counts.items() if c])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Gf2Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.terms))

    def __repr__(self) -> str:
        return f"Gf2Polynomial(nvars={self.nvars}, {len(self.terms)} monomials)"

    def dump_lines(self) -> list[str]:
        return [",".join(map(str, m)) for m in sorted(self.terms, key=lambda m: (len(m), m))]


# ---------------------------------------------------------------------------
# Weight interpolation (the unimodular binomial system)
# ---------------------------------------------------------------------------


def newton_coeffs(values: Sequence[int]) -> list[int]:
    """Forward-difference coefficients d_j of a sequence sampled at unit steps.

    The unique degree-(r-1) polynomial through (start + i, values[i]) is
    sum_j d_j * C(w - start, j).
    """
    diffs = list(values)
    out = []
    while diffs:
        out.append(diffs[0])
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    return out


def eval_newton(d: Sequence[int], start: int, w: int) -> int:
    """Evaluate sum_j d[j] * C(w - start, j) exactly (any integer w)."""
    x = w - start
    total = 0
    binom = 1  # C(x, 0)
    for j, dj in enumerate(d):
        if j > 0:
            binom = binom * (x - j + 1) // j
        if dj:
            total += dj * binom
    return total


def newton_to_symmetric(d: Sequence[int], start: int) -> dict[int, int]:
    """Rewrite sum_j d_j*C(w - start, j) in the basis C(w, m).

    Uses Vandermonde convolution C(w - start, j) = sum_m C(-start, j-m)*C(w, m).
    """
    if start == 0:
        return {m: dm for m, dm in enumerate(d) if dm}
    r = len(d)
    shift = [binom_int(-start, t) for t in range(r)]
    out: dict[int, int] = {}
    for m in range(r):
        a = sum(d[j] * shift[j - m] for j in range(m, r))
        if a:
            out[m] = a
    return out


def interpolate_weights(n: int, k: int, r: int, c: Sequence[int]) -> IntPolynomial:
    """Integer polynomial taking value c[i-1] on every point of weight k+i.

    Builds the degree <= r-1 symmetric polynomial p with p(x) = c_i for all
    x in {0,1}^n of Hamming weight k+i, 1 <= i <= r.  The binomial system
    M a = c has determinant 1, so the coefficients a_i (on the sums of
    degree-i monomials) are integers; they are computed by exact structured
    elimination (finite differences plus a basis shift).

    Args:
        n: Number of variables; must satisfy n >= k + r.
        k: Weight offset (k >= -1 is typical; any int with k + 1 >= 0 works).
        r: Number of prescribed weights.
        c: The r prescribed integer values.

    Returns:
        IntPolynomial in symmetric mode.
    """
    if r < 1:
        raise InvalidParametersError(f"r must be >= 1, got {r}")
    if len(c) != r:
        raise InvalidParametersError(f"expected {r} target values, got {len(c)}")
    if n < k + r:
        raise InvalidParametersError(f"need n >= k + r, got n={n}, k={k}, r={r}")
    if k + 1 < 0:
        raise InvalidParametersError(f"lowest prescribed weight k+1 must be >= 0, got {k + 1}")
    d = newton_coeffs(list(c))
    return IntPolynomial.symmetric(n, newton_to_symmetric(d, k + 1))


def binomial_matrix_det(k: int, r: int) -> int:
    """Exact determinant of the r x r matrix M[i][j] = C(k+1+i, j).

    Computed by dense Bareiss (fraction-free) elimination; serves as the
    oracle for the unimodularity of the interpolation system.
    """
    if r < 1:
        raise InvalidParametersError(f"r must be >= 1, got {r}")
    m = [[binom_int(k + 1 + i, j) for j in range(r)] for i in range(r)]
    sign = 1
    prev = 1
    for col in range(r - 1):
        if m[col][col] == 0:
            for row in range(col + 1, r):
                if m[row][col] != 0:
                    m[col], m[row] = m[row], m[col]
                    sign = -sign
                    break
            else:
                return 0
        for row in range(col + 1, r):
            for j in range(col + 1, r):
                m[row][j] = (m[row][j] * m[col][col] - m[row][col] * m[col][j]) // prev
            m[row][col] = 0
        prev = m[col][col]
    return sign * m[r - 1][r - 1]

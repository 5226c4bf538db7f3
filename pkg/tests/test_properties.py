"""Hypothesis property tests for the core invariants."""

from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from polyham.polyalg import Gf2Polynomial, IntPolynomial, interpolate_weights
from polyham.probpoly import ThresholdSpec, eval_circuit, expand_circuit, sample_threshold
from polyham.reductions import IntVector, l1_distance, unary_encode
from polyham.vectors import (
    BitVector,
    Dataset,
    dump_dataset,
    hamming_distance,
    inner_product,
    load_dataset,
)

bits_lists = st.lists(st.integers(0, 1), min_size=1, max_size=96)


@st.composite
def bit_vector_pairs(draw):
    n = draw(st.integers(1, 96))
    a = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    b = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    return BitVector.from_bits(a), BitVector.from_bits(b)


@given(bit_vector_pairs())
def test_distance_weight_identity(pair):
    u, v = pair
    assert hamming_distance(u, v) == u.weight() + v.weight() - 2 * inner_product(u, v)


@given(bit_vector_pairs())
def test_string_roundtrip_and_symmetry(pair):
    u, v = pair
    assert BitVector.from_string(u.to_string()) == u
    assert hamming_distance(u, v) == hamming_distance(v, u)


@st.composite
def datasets(draw):
    dim = draw(st.integers(1, 40))
    n_red = draw(st.integers(1, 6))
    n_blue = draw(st.integers(0, 6))
    mk = lambda: BitVector.from_bits(
        draw(st.lists(st.integers(0, 1), min_size=dim, max_size=dim))
    )
    return Dataset(dim, tuple(mk() for _ in range(n_red)), tuple(mk() for _ in range(n_blue)))


@given(datasets(), st.sampled_from(["text01", "hex"]))
def test_dataset_roundtrip(ds, fmt):
    assert load_dataset(dump_dataset(ds, fmt), fmt) == ds


@st.composite
def small_gf2_pairs(draw):
    nvars = draw(st.integers(1, 8))
    def poly():
        monos = draw(
            st.lists(
                st.lists(st.integers(0, nvars - 1), max_size=nvars).map(
                    lambda ids: tuple(sorted(set(ids)))
                ),
                max_size=12,
            )
        )
        return Gf2Polynomial(nvars, monos)
    return nvars, poly(), poly()


@given(small_gf2_pairs())
@settings(max_examples=60)
def test_gf2_ops_pointwise(case):
    nvars, p, q = case
    s, prod = p + q, p * q
    for mask in range(1 << nvars):
        assert s.eval_mask(mask) == p.eval_mask(mask) ^ q.eval_mask(mask)
        assert prod.eval_mask(mask) == p.eval_mask(mask) & q.eval_mask(mask)
    assert p * p == p


@given(st.data())
@settings(max_examples=50)
def test_interpolation_hits_prescribed_values(data):
    n = data.draw(st.integers(1, 14))
    k = data.draw(st.integers(-1, n - 1))
    r = data.draw(st.integers(1, n - k))
    c = data.draw(st.lists(st.integers(-30, 30), min_size=r, max_size=r))
    p = interpolate_weights(n, k, r, c)
    assert p.degree() <= r - 1
    for i in range(1, r + 1):
        assert p.eval_mask((1 << (k + i)) - 1) == c[i - 1]


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_unary_encoding_preserves_l1(data):
    dim = data.draw(st.integers(1, 6))
    m = data.draw(st.integers(1, 5))
    xs = data.draw(st.lists(st.integers(0, m), min_size=dim, max_size=dim))
    ys = data.draw(st.lists(st.integers(0, m), min_size=dim, max_size=dim))
    x, y = IntVector(tuple(xs), m), IntVector(tuple(ys), m)
    assert hamming_distance(unary_encode(x), unary_encode(y)) == l1_distance(x, y)


@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_base_circuit_is_exact_everywhere(n, seed):
    spec = ThresholdSpec(n, Fraction(1, 2), Fraction(1, 10))
    c = sample_threshold(spec, np.random.default_rng(seed))
    assert c.kind == "exact_base"
    poly = expand_circuit(c)
    for mask in range(1 << n):
        x = BitVector(n, mask)
        assert eval_circuit(c, x) == spec.truth(x) == poly.eval_mask(mask)

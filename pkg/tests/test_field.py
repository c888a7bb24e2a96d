import itertools
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsymbol.errors import (
    DegreeMismatchError,
    NonDivisorError,
    NonPrimePError,
    NonPrimitivePolynomialError,
    NotCoprimeError,
    ZeroElementError,
)
from bsymbol.field import (
    FieldSpec,
    build_field,
    class_index,
    default_spec,
    factorize,
    is_prime,
    mult_order,
    trace_to,
)

from conftest import SPEC_1B, SPEC_1C


# plain GF(2)[x] arithmetic as an independent model of F_16 = F_2[x]/(x^4+x+1)
def gf2_mulmod(a, b, mod=0b10011, deg=4):
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a >> deg:
            a ^= mod
    return acc


def gf2_pow(a, e):
    out = 1
    for _ in range(e):
        out = gf2_mulmod(out, a)
    return out


# small towers used by exhaustive property checks (all q^r <= 2^12)
SMALL_SPECS = [default_spec(*ptr) for ptr in
               [(2, 1, 4), (2, 2, 3), (3, 1, 4), (3, 2, 2), (5, 1, 3), (2, 3, 2), (7, 1, 2), (2, 1, 12),
                (2, 4, 3), (3, 1, 7)]] + [SPEC_1B, SPEC_1C]


class TestBuild:
    def test_example_1b_tower(self):
        F = build_field(SPEC_1B)
        assert F.gamma(4) == F.add(F.gamma(1), 1)
        assert F.log(F.add(1, F.gamma(3))) == 14

    def test_prime_field_f2(self):
        F = build_field(FieldSpec(2, 1, 1, (1, 1), (1, 1)))
        assert F.antilog.tolist() == [1]

    def test_example_1c_tower(self):
        F = build_field(SPEC_1C)
        alpha = F.fq.exp(1)
        assert F.log(F.add(1, F.mul(alpha, F.gamma(9)))) == 5
        assert F.log(F.add(1, F.mul(F.mul(alpha, alpha), F.gamma(9)))) == 40
        assert F.log(F.add(1, F.gamma(9))) == 27

    def test_matches_independent_gf16_model(self):
        F = build_field(SPEC_1B)
        for k in range(15):
            assert F.gamma(k) == gf2_pow(0b10, k)

    def test_rejects_non_prime(self):
        with pytest.raises(NonPrimePError):
            build_field(FieldSpec(4, 1, 2, (1, 1), (1, 1, 1)))

    def test_rejects_irreducible_but_not_primitive(self):
        # x^4 + x^3 + x^2 + x + 1 divides x^5 - 1
        with pytest.raises(NonPrimitivePolynomialError):
            build_field(FieldSpec(2, 1, 4, (1, 1), (1, 1, 1, 1, 1)))

    def test_rejects_reducible(self):
        with pytest.raises(NonPrimitivePolynomialError):
            build_field(FieldSpec(2, 1, 2, (1, 1), (1, 0, 1)))   # (x+1)^2

    def test_rejects_zero_constant(self):
        with pytest.raises(NonPrimitivePolynomialError):
            build_field(FieldSpec(3, 1, 2, (1, 1), (0, 1, 1)))

    @pytest.mark.parametrize("poly_qr", [(1, 1, 0, 1), (1, 1, 0, 0, 2), (1, 1, 0, 0, 0, 1)])
    def test_rejects_degree_or_monic_mismatch(self, poly_qr):
        with pytest.raises(DegreeMismatchError):
            build_field(FieldSpec(2, 1, 4, (1, 1), poly_qr))

    def test_default_is_lexicographically_smallest(self):
        spec = default_spec(2, 1, 4)
        # compared from the constant term, x^4 + x^3 + 1 precedes x^4 + x + 1
        assert spec.poly_qr == (1, 0, 0, 1, 1)
        build_field(FieldSpec(2, 1, 4, (1, 1), (1, 1, 0, 0, 1)))
        for tail in itertools.product(range(2), repeat=4):
            if tail >= (1, 0, 0, 1):
                break
            with pytest.raises((NonPrimitivePolynomialError, DegreeMismatchError)):
                build_field(FieldSpec(2, 1, 4, (1, 1), tail + (1,)))

    def test_default_is_deterministic(self):
        assert default_spec(3, 2, 2) == default_spec(3, 2, 2)
        assert build_field(default_spec(3, 2, 2)) is build_field(default_spec(3, 2, 2))


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: f"p{s.p}t{s.t}r{s.r}")
class TestTableProperties:
    def test_log_antilog_bijection(self, spec):
        F = build_field(spec)
        m = F.order - 1
        assert sorted(F.antilog.tolist()) == list(range(1, F.order))
        assert np.array_equal(F.field.log_table[F.antilog], np.arange(m))
        assert F.antilog[0] == 1

    def test_gamma_delta_generates_fq(self, spec):
        F = build_field(spec)
        sub = {F.pow(F.gamma(F.Delta), j) for j in range(F.q - 1)}
        assert sub == set(range(1, F.q))

    def test_trace_transitivity(self, spec):
        F = build_field(spec)
        for x in range(1, F.order):
            assert trace_to(F, x, "p") == F.fq.absolute_trace(trace_to(F, x, "q"))

    def test_trace_surjective_and_balanced(self, spec):
        F = build_field(spec)
        tq = np.bincount(np.append(F.trace_q, 0), minlength=F.q)
        tp = np.bincount(np.append(F.trace_p, 0), minlength=F.p)
        assert set(tq.tolist()) == {F.order // F.q}
        assert set(tp.tolist()) == {F.order // F.p}

    def test_trace_is_additive(self, spec):
        F = build_field(spec)
        rng = np.random.default_rng(1)
        for x, y in rng.integers(0, F.order, size=(200, 2)).tolist():
            assert trace_to(F, F.add(x, y)) == F.fq.add(trace_to(F, x), trace_to(F, y))

    def test_class_sizes(self, spec):
        F = build_field(spec)
        m = F.order - 1
        for u in (d for d in range(1, min(m, 30) + 1) if m % d == 0):
            sizes = np.bincount(np.arange(m) % u)
            assert set(sizes.tolist()) == {m // u}
            assert all(class_index(F, F.gamma(k), u) == k % u for k in range(0, m, max(1, m // 50)))


class TestTrace:
    def test_trace_of_zero(self):
        F = build_field(SPEC_1C)
        assert trace_to(F, 0, "q") == 0
        assert trace_to(F, 0, "p") == 0

    def test_trace_gamma3_over_f2(self):
        # oracle: gamma^3 + gamma^6 + gamma^12 + gamma^24 in the GF(2)[x] model
        expected = 0
        for j in range(4):
            expected ^= gf2_pow(0b10, (3 * 2 ** j) % 15)
        assert expected == 1
        F = build_field(SPEC_1B)
        assert trace_to(F, F.gamma(3), "p") == 1

    def test_trace_gamma9_over_f4(self):
        # oracle: Galois orbit gamma^9 + gamma^36 + gamma^144 with scalar table arithmetic
        F = build_field(SPEC_1C)
        acc = 0
        for e in (9, 36, 144):
            acc = F.add(acc, F.gamma(e))
        assert acc < F.q
        assert trace_to(F, F.gamma(9), "q") == acc == 0

    def test_bad_target(self):
        F = build_field(SPEC_1B)
        with pytest.raises(ValueError):
            trace_to(F, 1, "x")


class TestClassIndex:
    def test_identity(self):
        F = build_field(SPEC_1B)
        assert all(class_index(F, 1, u) == 0 for u in (1, 3, 5, 15))

    def test_example_1b(self):
        F = build_field(SPEC_1B)
        assert class_index(F, F.gamma(14), 3) == 2
        assert class_index(F, F.gamma(3), 3) == 0

    def test_errors(self):
        F = build_field(SPEC_1B)
        with pytest.raises(ZeroElementError):
            class_index(F, 0, 3)
        with pytest.raises(NonDivisorError):
            class_index(F, 1, 4)

    @given(st.integers(1, 80), st.integers(1, 80), st.sampled_from([1, 2, 4, 5, 8, 10, 16, 20, 40, 80]))
    def test_homomorphism(self, x, y, u):
        F = build_field(default_spec(3, 1, 4))
        assert class_index(F, F.mul(x, y), u) == (class_index(F, x, u) + class_index(F, y, u)) % u


class TestMultOrder:
    def test_examples(self):
        assert mult_order(3, 40) == 4
        assert mult_order(5, 781) == 5
        assert mult_order(17, 1) == 1

    def test_not_coprime(self):
        with pytest.raises(NotCoprimeError):
            mult_order(4, 6)

    @given(st.integers(1, 500), st.integers(1, 500))
    def test_against_brute_force(self, w, v):
        if gcd(w, v) != 1:
            return
        e = 1
        while pow(w, e, v) != 1 % v:
            e += 1
        assert mult_order(w, v) == e


@given(st.integers(1, 10 ** 6))
@settings(max_examples=200)
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert all(is_prime(p) for p in f)
    prod = 1
    for p, e in f.items():
        prod *= p ** e
    assert prod == n


@given(st.integers(0, 255), st.integers(0, 255))
def test_field_arithmetic_axioms(x, y):
    F = build_field(default_spec(2, 2, 4))
    assert F.add(x, y) == F.add(y, x)
    assert F.add(x, F.neg(x)) == 0
    assert F.mul(x, y) == F.mul(y, x)
    if x:
        assert F.mul(x, F.inv(x)) == 1
    z = 0x2d
    assert F.mul(z, F.add(x, y)) == F.add(F.mul(z, x), F.mul(z, y))


@given(st.integers(0, 242), st.integers(0, 242), st.integers(0, 242))
def test_odd_characteristic_distributivity(x, y, z):
    F = build_field(default_spec(3, 1, 5))
    assert F.mul(z, F.add(x, y)) == F.add(F.mul(z, x), F.mul(z, y))
    assert F.sub(F.add(x, y), y) == x

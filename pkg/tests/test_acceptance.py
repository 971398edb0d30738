"""Exit criteria. Each test prints one PASS/FAIL line, visible even under capture.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import contextlib
import math
import random
import time

import pytest

from sumnet.coding import all_ones_decoder, identity_code, propagate, random_code, transfer, verify_sum_code, dump_code, load_code
from sumnet.feasibility import (
    FULL,
    NORMALIZED,
    BudgetExceeded,
    analytic_charset,
    brute_force_feasible,
    prime_factors,
)
from sumnet.field import FieldMatrix, field_make
from sumnet.network import build_complete_bipartite, build_s_network, crisscross, deserialize, realize, serialize


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def check(label):
        start = time.perf_counter()
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\n[FAIL] {label}")
            raise
        with capsys.disabled():
            print(f"\n[PASS] {label} ({time.perf_counter() - start:.1f}s)")

    return check


def gf(q):
    return {2: field_make(2), 3: field_make(3), 4: field_make(2, 2), 5: field_make(5), 7: field_make(7)}[q]


def test_1_s3_infeasible_over_every_small_field(criterion):
    with criterion("1 S_3 infeasible over GF(2), GF(3) full and GF(4), GF(5) normalized"):
        start = time.perf_counter()
        net = build_s_network(3)
        runs = [(2, FULL), (3, FULL), (4, NORMALIZED), (5, NORMALIZED)]
        for q, mode in runs:
            v = brute_force_feasible(net, gf(q), mode)
            assert not v.feasible, (q, mode)
            # 6 source coefficients + 8 relay adjacencies; normalized leaves the 4 at u_i
            assert v.search_space == v.examined == q ** (14 if mode == FULL else 4)
        assert time.perf_counter() - start < 120


@pytest.mark.parametrize(
    "m,q",
    [(4, 2), (4, 4), (4, 3), (5, 3), (5, 2), (5, 5)],
)
def test_2_s_m_oracle_matches_divisibility(criterion, m, q):
    f = gf(q)
    expected = (m - 2) % f.p == 0
    with criterion(f"2 S_{m} over GF({q}) normalized: {'feasible' if expected else 'infeasible'}"):
        start = time.perf_counter()
        v = brute_force_feasible(build_s_network(m), f, NORMALIZED)
        assert v.feasible == expected
        if v.feasible:
            assert verify_sum_code(build_s_network(m), v.code, v.decoders, trials=100, seed=0)
        assert time.perf_counter() - start < 300


def test_3_identity_code_achieves_sum_iff_char_divides(criterion):
    with criterion("3 identity code + all-ones decoder works iff char | m-2, m in 3..12, 5 fields"):
        for m in range(3, 13):
            net = build_s_network(m)
            for q in (2, 3, 4, 5, 7):
                f = gf(q)
                got = verify_sum_code(net, identity_code(net, f), all_ones_decoder(net, f), trials=100, seed=m * 100 + q)
                assert got == ((m - 2) % f.p == 0), (m, q)


def test_4_crisscross_with_k11(criterion):
    with criterion("4 S_3 x K(1,1) infeasible, S_4 x K(1,1) feasible over GF(2), matching the analytic sets"):
        k11 = build_complete_bipartite(1, 1)
        f = gf(2)
        for m, expected in ((3, False), (4, True)):
            net = crisscross(build_s_network(m), k11)
            v = brute_force_feasible(net, f, NORMALIZED)
            assert v.feasible is expected
            assert (f.p in analytic_charset(f"X(S({m}),K(1,1))")) is expected


def test_5_corollary_gcd_arithmetic(criterion):
    with criterion("5 charset of X(S(m),S(n)) = prime factors of gcd(m-2, n-2), 3 <= m, n <= 30"):
        for m in range(3, 31):
            for n in range(3, 31):
                g = math.gcd(m - 2, n - 2)
                want = {p for p in range(2, g + 1) if g % p == 0 and all(p % d for d in range(2, p))}
                got = analytic_charset(f"X(S({m}),S({n}))")
                assert set(got.primes) == want, (m, n)
                assert got == prime_factors(g)


def test_6a_field_axioms(criterion):
    with criterion("6a field axioms on 1000 random triples per field"):
        rng = random.Random(2024)
        for pk in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]:
            f = field_make(*pk)
            z, o = f.zero, f.one
            for _ in range(1000):
                a, b, c = (f.element(rng.randrange(f.order)) for _ in range(3))
                assert (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
                assert a + b == b + a and a * b == b * a
                assert a * (b + c) == a * b + a * c
                assert a + z == a and a * o == a and a + (-a) == z
                if a:
                    assert a * a.inverse() == o


def test_6b_transfer_propagate_agreement(criterion):
    with criterion("6b transfer/propagate agree on 100 codes x 100 inputs over S_3 and K(2,3)"):
        f = gf(4)
        rng = random.Random(7)
        for net in (build_s_network(3), build_complete_bipartite(2, 3)):
            for _ in range(100):
                code = random_code(net, f, 1, rng)
                tv = transfer(net, code)
                for _ in range(100):
                    x = {s: FieldMatrix(f, 1, 1, (rng.randrange(4),)) for s in net.sources}
                    y = propagate(net, code, x)
                    for e in range(len(net.edges)):
                        assert y[e] == tv.apply(e, x)


def test_6c_normalization_soundness(criterion):
    with criterion("6c full and normalized verdicts agree wherever both complete"):
        instances = [(3, 2), (3, 3), (3, 4), (3, 5), (4, 2), (4, 4), (4, 3), (5, 3), (5, 2), (5, 5)]
        compared = 0
        for m, q in instances:
            net = build_s_network(m)
            try:
                full = brute_force_feasible(net, gf(q), FULL)
            except BudgetExceeded:
                continue
            assert full.feasible == brute_force_feasible(net, gf(q), NORMALIZED).feasible, (m, q)
            compared += 1
        # S_3 over GF(2), GF(3) and S_4 over GF(2) fit the default budget
        assert compared == 3


def test_6d_serialization_round_trips(criterion):
    with criterion("6d network, code and verdict files round-trip byte-exact"):
        rng = random.Random(1)
        for spec in ["S(2)", "S(3)", "S(7)", "K(2,3)", "X(S(4),K(2,3))", "X(X(S(3),S(4)),K(1,1))"]:
            net = realize(spec)
            text = serialize(net)
            assert serialize(deserialize(text)) == text
            for f in (gf(2), gf(4)):
                code = random_code(net, f, 2, rng)
                ctext = dump_code(code)
                assert dump_code(load_code(ctext, net)) == ctext
        v1 = brute_force_feasible(build_s_network(4), gf(4), NORMALIZED, seed=3)
        v2 = brute_force_feasible(build_s_network(4), gf(4), NORMALIZED, seed=3)
        assert v1.to_json() == v2.to_json()

import math
from fractions import Fraction

import pytest

from hlsums.arith import factorize
from hlsums.quadpairs import (
    Budget,
    QuadForm,
    act,
    alpha_g,
    class_number,
    codiscriminant,
    complementary_divisor_check,
    default_budget,
    forms_with_disc,
    good_prime_factor,
    kappa,
    local_profile,
    locality_ratio,
    padding_modulus,
    write_class_table,
)
from hlsums.rng import Stream

# Values frozen from the enumeration oracle (box-doubling stable).
REGRESSION = {
    (5, 5, 3): 2,
    (5, 5, 6): 0,
    (5, 5, 7): 0,
    (-3, -3, 5): 2,
    (-3, -4, 4): 2,
    (-3, -4, 8): 4,
    (-4, -4, 6): 4,
    (8, 8, 0): 4,
    (8, 8, 6): 4,
    (5, 8, 2): 2,
    (5, 8, 6): 2,
    (5, 13, 1): 2,
    (5, 13, 7): 2,
    (12, 12, 4): 4,
    (13, 13, 5): 6,
    (17, 17, 1): 8,
    (21, 21, 3): 4,
}


def test_codiscriminant_examples():
    q = QuadForm(0, 1, 0)
    assert codiscriminant(q, q) == 1
    p = QuadForm(1, 0, -1)
    assert codiscriminant(p, p) == 4
    assert codiscriminant(QuadForm(1, 1, -1), QuadForm(1, -1, -1)) == 3


def test_act_examples():
    q = QuadForm(1, 0, -1)
    assert act((1, 0, 0, 1), q) == q
    assert act((1, 1, 0, 1), q) == QuadForm(1, 2, 0)
    with pytest.raises(ValueError):
        act((1, 0, 0, 2), q)


def _random_unimodular(rs: Stream):
    # random word in the standard generators
    mats = [(0, -1, 1, 0), (1, 1, 0, 1), (1, -1, 0, 1)]
    a, b, c, d = 1, 0, 0, 1
    for _ in range(rs.randint(1, 12)):
        e, f, g, h = rs.choice(mats)
        a, b, c, d = a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h
    return (a, b, c, d)


def test_invariance_under_action():
    rs = Stream(9001)
    for _ in range(2000):
        q1 = QuadForm(rs.randint(-9, 9), rs.randint(-9, 9), rs.randint(-9, 9))
        q2 = QuadForm(rs.randint(-9, 9), rs.randint(-9, 9), rs.randint(-9, 9))
        tau = _random_unimodular(rs)
        assert act(tau, q1).disc == q1.disc
        assert codiscriminant(act(tau, q1), act(tau, q2)) == codiscriminant(q1, q2)


def test_forms_with_disc_complete_small():
    # brute force cross-check of the vectorized enumeration
    for d in (-4, -3, 0, 1, 5, 8, 9):
        box = 6
        got = {tuple(r) for r in forms_with_disc(d, box).tolist()}
        want = {
            (a, b, c)
            for a in range(-box, box + 1)
            for b in range(-box, box + 1)
            for c in range(-box, box + 1)
            if b * b - 4 * a * c == d
        }
        assert got == want, d


def test_class_number_regression_frozen():
    for (d1, d2, t), want in REGRESSION.items():
        res = class_number(d1, d2, t)
        assert res.status == "ok", (d1, d2, t)
        assert res.value == want, (d1, d2, t)


def test_class_number_symmetries():
    for (d1, d2, t), want in list(REGRESSION.items())[:8]:
        assert class_number(d2, d1, t).value == want
        assert class_number(d1, d2, -t).value == want


def test_class_number_budget_doubling_stable():
    for (d1, d2, t) in [(5, 5, 3), (5, 8, 2), (13, 13, 5)]:
        base = default_budget(d1, d2, t)
        doubled = Budget(box=2 * base.box)
        assert class_number(d1, d2, t, base).value == class_number(d1, d2, t, doubled).value


def test_class_number_degenerate_rejected():
    with pytest.raises(ValueError):
        class_number(-3, -3, 3)
    with pytest.raises(ValueError):
        class_number(4, 1, 2)


def test_class_number_inconclusive_on_tiny_node_budget():
    res = class_number(13, 13, 5, Budget(box=52, max_nodes=10))
    assert res.status == "inconclusive"


def test_class_table_csv(tmp_path):
    rows = [(5, 5, 3, class_number(5, 5, 3)), (5, 5, 6, class_number(5, 5, 6))]
    path = tmp_path / "table.csv"
    write_class_table(rows, str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "d1,d2,t,h,status,box"
    assert lines[1] == "5,5,3,2,ok,32"


def test_alpha_g_examples():
    assert alpha_g(3, 14, 31, 4) == 1  # 31^2 - 5*192 = 1: only D = 1
    assert alpha_g(3, 3, 6, 4) == 2  # divisors of 11 coprime to 4: {1, 11}
    assert alpha_g(3, 4, 8, 4) == 1  # divisors of 4 coprime to 4: {1}


def test_alpha_g_domain():
    # t1=3, t2=3, f=5 gives n = 0: domain error
    with pytest.raises(ValueError):
        alpha_g(3, 3, 5, 4)
    assert alpha_g(3, 3, 6, 1000000007 * 2) == 2  # coprimality with big even G keeps {1,11}


def test_alpha_g_multiplicative_over_good_primes():
    rs = Stream(5150)
    done = 0
    while done < 60:
        t1 = 2 * rs.randint(1, 12) + 1
        t2 = 2 * rs.randint(1, 12) + 1
        f = 2 * rs.randint(5, 300) + 1
        d1 = t1 * t1 - 4
        n = f * f - d1 * (t2 * t2 - 4)
        if n <= 0:
            continue
        try:
            prof = local_profile(t1, t2, f)
        except ValueError:
            continue
        a = alpha_g(t1, t2, f, prof.G)
        prod = 1
        for p, e in factorize(n).factors:
            if prof.G % p == 0:
                continue
            prod *= good_prime_factor(t1, p, e)
        assert a == prod, (t1, t2, f)
        done += 1


def test_local_profile_examples():
    p = local_profile(3, 3, 7)
    assert (p.E, p.G, p.R) == (1, 8, 1)
    p2 = local_profile(3, 3, 10)
    assert (p2.E, p2.G, p2.R) == (5, 25, 5)
    assert p2.gamma == 16 * 5 * 25 * 5
    p3 = local_profile(3, 6, 14)
    assert (p3.E, p3.G, p3.R, p3.gamma) == (1, 4, 1, 128)  # gamma(4,1) = 16*1*4*2
    with pytest.raises(ValueError):
        local_profile(3, 3, 5)  # degenerate f^2 = product


def test_good_prime_factor():
    assert good_prime_factor(5, 11, 0) == 1
    assert good_prime_factor(3, 11, 2) == 3  # (5/11) = 1
    assert good_prime_factor(3, 7, 1) == 0  # (5/7) = -1
    with pytest.raises(ValueError):
        good_prime_factor(3, 5, 1)  # 5 | t1^2-4
    with pytest.raises(ValueError):
        good_prime_factor(3, 2, 1)


def test_kappa_frozen_and_range():
    assert kappa(3, 3, 7, 8, 1) == -1  # fixed via the D = 1 identity
    rs = Stream(31337)
    seen = set()
    while len(seen) < 40:
        t1 = 2 * rs.randint(1, 25) + 1
        t2 = 2 * rs.randint(1, 25) + 1
        f = 2 * rs.randint(3, 500) + 1
        if f * f <= (t1 * t1 - 4) * (t2 * t2 - 4):
            continue
        try:
            prof = local_profile(t1, t2, f)
            k = kappa(t1, t2, f, prof.G, prof.R)
        except ValueError:
            continue
        assert k in (-1, 1)
        seen.add((t1, t2, f))


def test_kappa_hypothesis_violations():
    with pytest.raises(ValueError):
        kappa(3, 3, 7, 2, 1)  # 4 does not divide G
    with pytest.raises(ValueError):
        kappa(3, 3, 7, 8, 3)  # wrong R


def test_complementary_divisor_chain_small():
    n = 7 * 7 - 25
    for dv in factorize(n).divisors():
        if math.gcd(dv, 8) == 1:
            assert complementary_divisor_check(3, 3, 7, 8, 1, dv)
    # swapping D and D* keeps the truth value
    assert complementary_divisor_check(3, 3, 7, 8, 1, 1)
    assert complementary_divisor_check(3, 3, 7, 8, 1, 3)


def test_locality_ratio_matched_pair():
    a = locality_ratio(3, 6, 14)
    b = locality_ratio(3, 6, -114)
    assert a.status == b.status == "ok"
    assert a.value == b.value == Fraction(2, 1)
    assert padding_modulus(3, 6, 14) == 128
    assert local_profile(3, 6, 14).residues == local_profile(3, 6, -114).residues


def test_locality_ratio_undefined_marker():
    assert locality_ratio(3, 3, 7).status == "undefined"

"""Finite groups, regular representations, exact determinants."""

import math
import random
from fractions import Fraction

import pytest

from fkdet.exact_linalg import det_exact, rank_exact
from fkdet.fk_finite import (
    FiniteGroup,
    FiniteGroupRingElement,
    FiniteGroupRingMatrix,
    direct_product,
    fk_det_2x2_trivial,
    fk_det_finite,
    format_element,
    induce,
    make_cyclic,
    make_cyclic_product,
    norm_element,
    parse_element,
    regular_rep,
    restrict,
    vn_dim_kernel_finite,
)
from fkdet.values import Radical

# a Latin square with two-sided identity 0 that is not a group
NON_ASSOCIATIVE_LOOP = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 3, 4, 0, 1],
    [3, 4, 1, 2, 0],
    [4, 2, 0, 1, 3],
]


def scalar_matrix(group, rows):
    return FiniteGroupRingMatrix(
        group,
        [
            [
                FiniteGroupRingElement.unit(group, coeff=c)
                for c in row
            ]
            for row in rows
        ],
    )


def rand_element(rng, group, bound=2):
    return FiniteGroupRingElement(
        group,
        tuple(rng.randrange(-bound, bound + 1) for _ in range(group.order)),
    )


def rand_matrix(rng, group, r, s, bound=2):
    return FiniteGroupRingMatrix(
        group, [[rand_element(rng, group, bound) for _ in range(s)] for _ in range(r)]
    )


# ---------------------------------------------------------------------------
# groups


def test_make_cyclic_tables():
    assert make_cyclic(1).order == 1
    z2 = make_cyclic(2)
    assert z2.table == ((0, 1), (1, 0))
    z3 = make_cyclic(3)
    assert z3.mul(1, 1) == 2
    assert z3.mul(2, 1) == 0
    assert z3.inv(1) == 2
    with pytest.raises(ValueError):
        make_cyclic(0)


def test_group_validation_rejects_bad_tables():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 0], [1, 1]], 0)
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [1, 0]], 1)
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [1, 2]], 0)
    with pytest.raises(ValueError, match="associative"):
        FiniteGroup(NON_ASSOCIATIVE_LOOP, 0)


def test_direct_product_klein_four():
    v4 = direct_product(make_cyclic(2), make_cyclic(2))
    assert v4.order == 4
    for g in range(4):
        assert v4.mul(g, g) == v4.identity
    assert v4.names[3] == "(t,t)"


def test_cyclic_product_matches_modular_arithmetic():
    g = make_cyclic_product([2, 3])
    # index (a, b) -> 3a + b
    for a1 in range(2):
        for b1 in range(3):
            for a2 in range(2):
                for b2 in range(3):
                    lhs = g.mul(a1 * 3 + b1, a2 * 3 + b2)
                    rhs = ((a1 + a2) % 2) * 3 + (b1 + b2) % 3
                    assert lhs == rhs


def test_group_json_round_trip():
    g = make_cyclic(4)
    blob = g.as_json()
    back = FiniteGroup.from_json(blob)
    assert back.table == g.table
    assert back.identity == g.identity
    with pytest.raises(ValueError):
        FiniteGroup.from_json({"order": 2, "identity": 0, "table": [[0, 1]]})
    with pytest.raises(ValueError):
        FiniteGroup.from_json({"table": [[0]]})


# ---------------------------------------------------------------------------
# elements


def test_parse_and_format_element():
    z2 = make_cyclic(2)
    x = parse_element(z2, "t + 2")
    assert x.coeffs == (2, 1)
    assert format_element(x) == "t + 2"
    y = parse_element(make_cyclic(3), "t^5")
    assert y.coeffs == (0, 0, 1)
    neg = parse_element(make_cyclic(3), "t^-1")
    assert neg.coeffs == (0, 0, 1)
    merged = parse_element(make_cyclic(2), "t^2 + 1")
    assert merged.coeffs == (2, 0)
    assert format_element(FiniteGroupRingElement.zero(z2)) == "0"
    assert format_element(parse_element(z2, "-t")) == "-t"
    assert format_element(parse_element(make_cyclic(3), "t^2 - t")) == "t^2 - t"


def test_parse_element_needs_cyclic_group():
    v4 = direct_product(make_cyclic(2), make_cyclic(2))
    with pytest.raises(ValueError):
        parse_element(v4, "t + 1")


def test_element_arithmetic():
    z2 = make_cyclic(2)
    t = FiniteGroupRingElement.unit(z2, 1)
    e = FiniteGroupRingElement.unit(z2)
    x = t + e
    assert (x * x).coeffs == (2, 2)
    assert (x - x).is_zero()
    assert x.scale(3).coeffs == (3, 3)
    assert x.identity_coefficient() == 1


def test_element_adjoint():
    z3 = make_cyclic(3)
    x = parse_element(z3, "1 + 2*t")
    assert x.adjoint().coeffs == (1, 0, 2)
    rng = random.Random(3)
    for _ in range(50):
        a = rand_element(rng, z3)
        b = rand_element(rng, z3)
        assert (a * b).adjoint() == b.adjoint() * a.adjoint()
        assert a.adjoint().adjoint() == a


def test_element_ring_axioms():
    rng = random.Random(5)
    groups = [make_cyclic(4), direct_product(make_cyclic(2), make_cyclic(2))]
    for g in groups:
        for _ in range(40):
            a, b, c = (rand_element(rng, g) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c


def test_norm_element():
    assert norm_element(make_cyclic(1)).coeffs == (1,)
    assert norm_element(make_cyclic(3)).coeffs == (1, 1, 1)


# ---------------------------------------------------------------------------
# regular representation


def test_regular_rep_golden():
    z2 = make_cyclic(2)
    assert regular_rep(parse_element(z2, "t + 1")) == [[1, 1], [1, 1]]
    z4 = make_cyclic(4)
    e = FiniteGroupRingElement.unit(z4)
    rep = regular_rep(e)
    assert rep == [[1 if i == j else 0 for j in range(4)] for i in range(4)]


def test_regular_rep_generator_is_shift():
    z3 = make_cyclic(3)
    t = FiniteGroupRingElement.unit(z3, 1)
    rep = regular_rep(t)
    # column g holds t*g: entry [t*g, g] = 1
    for g in range(3):
        assert rep[(g + 1) % 3][g] == 1
    assert sum(sum(row) for row in rep) == 3


def test_regular_rep_multiplicative():
    rng = random.Random(7)
    z3 = make_cyclic(3)
    for _ in range(40):
        a = rand_element(rng, z3)
        b = rand_element(rng, z3)
        ra = regular_rep(a)
        rb = regular_rep(b)
        rab = regular_rep(a * b)
        prod = [
            [sum(ra[i][k] * rb[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)
        ]
        assert prod == rab


def test_regular_rep_adjoint_is_transpose():
    rng = random.Random(11)
    z4 = make_cyclic(4)
    for _ in range(30):
        a = rand_element(rng, z4)
        rep = regular_rep(a)
        rep_star = regular_rep(a.adjoint())
        assert rep_star == [list(col) for col in zip(*rep)]


def test_regular_rep_matrix_blocks():
    z2 = make_cyclic(2)
    a = FiniteGroupRingMatrix(
        z2, [[parse_element(z2, "t + 1"), FiniteGroupRingElement.unit(z2)]]
    )
    rep = regular_rep(a)
    assert len(rep) == 2 and len(rep[0]) == 4
    assert rep == [[1, 1, 1, 0], [1, 1, 0, 1]]


# ---------------------------------------------------------------------------
# determinants: golden values


def test_det_trivial_group_degenerate_matrix():
    triv = make_cyclic(1)
    a = scalar_matrix(triv, [[1, 1], [0, 0]])
    got = fk_det_finite(a)
    assert got.exact == Radical(2, Fraction(1, 2))
    assert math.isclose(got.value, math.sqrt(2))


def test_det_t_plus_1_mod_2():
    got = fk_det_finite(parse_element(make_cyclic(2), "t + 1"))
    assert got.exact == Radical(2, Fraction(1, 2))


def test_det_t_plus_2_mod_2():
    got = fk_det_finite(parse_element(make_cyclic(2), "t + 2"))
    assert got.exact == Radical(3, Fraction(1, 2))


def test_det_t_plus_1_odd_orders():
    for n in (3, 5, 7, 9):
        got = fk_det_finite(parse_element(make_cyclic(n), "t + 1"))
        assert got.exact == Radical(2, Fraction(1, n))


def test_det_norm_minus_identity():
    for n in (3, 4, 5):
        g = make_cyclic(n)
        x = norm_element(g) - FiniteGroupRingElement.unit(g)
        got = fk_det_finite(x)
        assert got.exact == Radical(n - 1, Fraction(1, n))


def test_det_zero_operator_convention():
    z3 = make_cyclic(3)
    got = fk_det_finite(FiniteGroupRingElement.zero(z3))
    assert got.exact == Radical(1)
    assert got.value == 1.0
    wide = FiniteGroupRingMatrix.zero(z3, 2, 3)
    assert fk_det_finite(wide).exact == Radical(1)


def test_det_rectangular_gram_route():
    z2 = make_cyclic(2)
    a = FiniteGroupRingMatrix(
        z2, [[parse_element(z2, "t + 1"), FiniteGroupRingElement.unit(z2)]]
    )
    got = fk_det_finite(a)
    assert got.exact == Radical(5, Fraction(1, 4))


def test_det_squares_to_gram_determinant():
    rng = random.Random(13)
    z3 = make_cyclic(3)
    for _ in range(25):
        r = rng.randrange(1, 3)
        s = rng.randrange(1, 3)
        a = rand_matrix(rng, z3, r, s)
        lhs = fk_det_finite(a)
        rhs = fk_det_finite(a @ a.adjoint())
        if lhs.exact is not None and rhs.exact is not None:
            assert lhs.exact ** 2 == rhs.exact
        else:
            assert math.isclose(lhs.value ** 2, rhs.value, rel_tol=1e-9)


def test_det_rational_coefficients_float_path():
    triv = make_cyclic(1)
    half = FiniteGroupRingElement(triv, (Fraction(1, 2),))
    got = fk_det_finite(half)
    assert got.exact is None
    assert math.isclose(got.value, 0.5)


def test_det_adjoint_symmetry():
    rng = random.Random(17)
    z4 = make_cyclic(4)
    for _ in range(30):
        a = rand_matrix(rng, z4, 2, 2)
        assert fk_det_finite(a).exact == fk_det_finite(a.adjoint()).exact


def test_det_multiplicative_on_invertibles():
    rng = random.Random(19)
    z3 = make_cyclic(3)
    done = 0
    while done < 20:
        a = rand_matrix(rng, z3, 2, 2)
        b = rand_matrix(rng, z3, 2, 2)
        da = det_exact(regular_rep(a))
        db = det_exact(regular_rep(b))
        if da == 0 or db == 0:
            continue
        assert fk_det_finite(a @ b).exact == fk_det_finite(a).exact * fk_det_finite(b).exact
        done += 1


def test_det_block_triangular():
    rng = random.Random(23)
    z2 = make_cyclic(2)
    done = 0
    while done < 20:
        a = rand_matrix(rng, z2, 2, 2)
        b = rand_matrix(rng, z2, 2, 2)
        if det_exact(regular_rep(a)) == 0 or det_exact(regular_rep(b)) == 0:
            continue
        c = rand_matrix(rng, z2, 2, 2)
        z = FiniteGroupRingElement.zero(z2)
        block = FiniteGroupRingMatrix(
            z2,
            [
                list(a.entries[0]) + list(c.entries[0]),
                list(a.entries[1]) + list(c.entries[1]),
                [z, z] + list(b.entries[0]),
                [z, z] + list(b.entries[1]),
            ],
        )
        assert (
            fk_det_finite(block).exact
            == fk_det_finite(a).exact * fk_det_finite(b).exact
        )
        done += 1


def test_det_conjecture_lower_bound_samples():
    rng = random.Random(29)
    for _ in range(60):
        g = make_cyclic(rng.randrange(1, 6))
        a = rand_matrix(rng, g, rng.randrange(1, 3), rng.randrange(1, 3))
        if not a.is_integral():
            continue
        assert fk_det_finite(a).value >= 1.0 - 1e-12


# ---------------------------------------------------------------------------
# trivial-group 2x2 closed form


def test_2x2_trivial_three_cases():
    got = fk_det_2x2_trivial([[1, 1], [0, 0]])
    assert got.exact == Radical(2, Fraction(1, 2))
    assert fk_det_2x2_trivial([[2, 0], [0, 3]]).exact == Radical(6)
    assert fk_det_2x2_trivial([[0, 0], [0, 0]]).exact == Radical(1)
    frac = fk_det_2x2_trivial([[Fraction(1, 2), 0], [0, 1]])
    assert frac.exact is None
    assert math.isclose(frac.value, 0.5)


def test_2x2_trivial_matches_regular_rep():
    rng = random.Random(31)
    triv = make_cyclic(1)
    for _ in range(80):
        rows = [[rng.randrange(-3, 4) for _ in range(2)] for _ in range(2)]
        lhs = fk_det_2x2_trivial(rows)
        rhs = fk_det_finite(scalar_matrix(triv, rows))
        assert lhs.exact == rhs.exact
        assert math.isclose(lhs.value, rhs.value, rel_tol=1e-12)


# ---------------------------------------------------------------------------
# dimensions


def test_vn_dim_examples():
    z3 = make_cyclic(3)
    assert vn_dim_kernel_finite(FiniteGroupRingElement.zero(z3)) == 1
    assert vn_dim_kernel_finite(FiniteGroupRingElement.unit(z3)) == 0
    z2 = make_cyclic(2)
    assert vn_dim_kernel_finite(norm_element(z2)) == Fraction(1, 2)


def test_vn_dim_denominator_divides_order():
    rng = random.Random(37)
    for _ in range(40):
        n = rng.randrange(1, 6)
        g = make_cyclic(n)
        a = rand_matrix(rng, g, rng.randrange(1, 3), rng.randrange(1, 3))
        dim = vn_dim_kernel_finite(a)
        assert n % dim.denominator == 0
        assert 0 <= dim <= a.rows


# ---------------------------------------------------------------------------
# induction and restriction


def test_induce_identity_embedding():
    z2 = make_cyclic(2)
    x = parse_element(z2, "t + 1")
    same = induce(x, z2, [0, 1])
    assert same.entries[0][0] == x


def test_induce_preserves_determinant():
    z2 = make_cyclic(2)
    z4 = make_cyclic(4)
    x = parse_element(z2, "t + 1")
    pushed = induce(x, z4, [0, 2])
    assert pushed.entries[0][0].coeffs == (1, 0, 1, 0)
    assert fk_det_finite(pushed).exact == fk_det_finite(x).exact
    triv = make_cyclic(1)
    a = scalar_matrix(triv, [[1, 1], [0, 0]])
    lifted = induce(a, z2, [0])
    assert fk_det_finite(lifted).exact == Radical(2, Fraction(1, 2))


def test_induce_validates_embedding():
    z2 = make_cyclic(2)
    z4 = make_cyclic(4)
    x = parse_element(z2, "t + 1")
    with pytest.raises(ValueError, match="injective"):
        induce(x, z4, [0, 0])
    with pytest.raises(ValueError, match="homomorphism"):
        induce(x, z4, [0, 1])


def test_restrict_to_trivial_subgroup_is_regular_rep():
    rng = random.Random(41)
    triv = make_cyclic(1)
    for n in (2, 3, 4):
        g = make_cyclic(n)
        a = rand_matrix(rng, g, 2, 1)
        res = restrict(a, triv, [g.identity])
        rep = regular_rep(a)
        assert res.rows == 2 * n and res.cols == n
        for i in range(res.rows):
            for j in range(res.cols):
                assert res.entries[i][j].coeffs == (rep[i][j],)


def test_restrict_index_two_chain():
    z4 = make_cyclic(4)
    z2 = make_cyclic(2)
    x = parse_element(z4, "t + 1")
    res = restrict(x, z2, [0, 2])
    got = fk_det_finite(res)
    top = fk_det_finite(x)
    assert got.exact == top.exact ** 2
    assert got.exact == Radical(2)


def test_restrict_determinant_power_randomized():
    rng = random.Random(43)
    z4 = make_cyclic(4)
    z2 = make_cyclic(2)
    triv = make_cyclic(1)
    for _ in range(15):
        a = rand_matrix(rng, z4, 2, 2, bound=1)
        top = fk_det_finite(a)
        mid = fk_det_finite(restrict(a, z2, [0, 2]))
        bot = fk_det_finite(restrict(a, triv, [0]))
        assert mid.exact == top.exact ** 2
        assert bot.exact == top.exact ** 4


def test_restrict_preserves_kernel_dimension_scaling():
    z2 = make_cyclic(2)
    triv = make_cyclic(1)
    x = norm_element(z2)
    assert vn_dim_kernel_finite(x) == Fraction(1, 2)
    res = restrict(x, triv, [0])
    assert vn_dim_kernel_finite(res) == 1


# ---------------------------------------------------------------------------
# arithmetic of the representation integers


def test_integrality_mod_2_spot_checks():
    z2 = make_cyclic(2)
    rng = random.Random(47)
    for _ in range(60):
        a = rand_element(rng, z2, bound=2)
        rep = regular_rep(a)
        if rank_exact(rep) < 2:
            continue
        d = abs(det_exact(rep))
        assert d % 2 == 1 or d % 4 == 0

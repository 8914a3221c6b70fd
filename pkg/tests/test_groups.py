import random
from fractions import Fraction
from functools import lru_cache

import pytest

from equimap.errors import (
    ClosureExplosion,
    NonAbelianQuotient,
    NotDividing,
    RankExceedsDimension,
    UnknownKind,
)
from equimap.groups import (
    GroupTable,
    Mat,
    MatrixGroup,
    abelian_table,
    build_group,
    characters_from_quotient,
    chi_stabilizer_characters,
    cyclic_table,
    diagonal_coset_decomposition,
    direct_product,
    linear_characters,
    mat_from_json,
    mat_to_json,
    quotient_table,
    subgroup_closure_indices,
    symmetric_table,
    tn_group,
    to_table,
)
from equimap.scalars import CycNum, one, zero, zeta


@lru_cache(maxsize=None)
def grp(kind, ell=None):
    return build_group(kind, ell)


def rat(q, n):
    return CycNum.from_rational(Fraction(q), n)


def int_mat(rows, n=4):
    return Mat([[rat(x, n) for x in r] for r in rows])


class TestMat:
    def test_matmul_oracle(self):
        a = int_mat([[1, 2], [3, 4]])
        b = int_mat([[5, 6], [7, 8]])
        assert a @ b == int_mat([[19, 22], [43, 50]])

    def test_identity_neutral(self):
        i = Mat.identity(2, 4)
        a = int_mat([[1, 2], [3, 4]])
        assert i @ a == a and a @ i == a

    def test_inverse_2x2(self):
        a = int_mat([[2, 1], [5, 3]])
        assert a @ a.inverse() == Mat.identity(2, 4)
        assert a.inverse() @ a == Mat.identity(2, 4)

    def test_inverse_3x3_and_det(self):
        rng = random.Random(20260817)
        for _ in range(5):
            rows = [[rat(rng.randint(-3, 3), 12) for _ in range(3)] for _ in range(3)]
            m = Mat(rows)
            if m.det().is_zero():
                continue
            assert m @ m.inverse() == Mat.identity(3, 12)

    def test_det_multiplicative(self):
        rng = random.Random(7)
        for _ in range(10):
            a = int_mat([[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)])
            b = int_mat([[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)])
            assert (a @ b).det() == a.det() * b.det()

    def test_singular_inverse_raises(self):
        with pytest.raises(ZeroDivisionError):
            int_mat([[1, 2], [2, 4]]).inverse()

    def test_hash_consistent(self):
        a = int_mat([[0, 1], [-1, 0]])
        b = int_mat([[0, 1], [-1, 0]])
        assert a == b and hash(a) == hash(b)
        assert a != int_mat([[0, 1], [1, 0]])

    def test_apply(self):
        a = int_mat([[1, 2], [3, 4]])
        v = a.apply([rat(1, 4), rat(1, 4)])
        assert [x.to_fraction() for x in v] == [Fraction(3), Fraction(7)]


EXPECTED_ORDERS = [
    ("cyclic", 2, 4),
    ("cyclic", 3, 6),
    ("cyclic", 5, 10),
    ("binary-dihedral", 2, 8),
    ("binary-dihedral", 3, 12),
    ("binary-dihedral", 5, 20),
    ("binary-tetrahedral", None, 24),
    ("binary-octahedral", None, 48),
    ("binary-icosahedral", None, 120),
]


class TestCatalog:
    def test_quaternion_element_set(self):
        # closure from the two generators must give exactly the eight units
        g = grp("binary-dihedral", 2)
        assert g.conductor == 4
        i4 = zeta(4)
        o, z = one(4), zero(4)
        expected = set()
        for m in [
            Mat.identity(2, 4),
            Mat.diagonal([i4, -i4]),
            Mat([[z, o], [-o, z]]),
            Mat([[z, i4], [i4, z]]),
        ]:
            expected.add(m)
            expected.add(-m)
        assert set(g.elements) == expected

    @pytest.mark.parametrize("kind,ell,order", EXPECTED_ORDERS)
    def test_orders(self, kind, ell, order):
        g = grp(kind, ell)
        assert g.order == order
        assert g.elements[0] == Mat.identity(2, g.conductor)

    @pytest.mark.parametrize("kind,ell,order", EXPECTED_ORDERS)
    def test_det_one_and_minus_identity(self, kind, ell, order):
        g = grp(kind, ell)
        o = one(g.conductor)
        assert all(m.det() == o for m in g.elements)
        assert g.contains_minus_identity()

    def test_cyclic3_generator(self):
        g = grp("cyclic", 3)
        assert g.generators[0] == Mat.diagonal([zeta(6), zeta(6, 5)])
        assert g.conductor == 6

    def test_closure_idempotent(self):
        for kind, ell in [("binary-dihedral", 2), ("binary-tetrahedral", None)]:
            g = grp(kind, ell)
            reclosed = MatrixGroup(g.elements)
            assert set(reclosed.elements) == set(g.elements)

    def test_unique_involution(self):
        # binary dihedral groups have -I as their only order-2 element
        for ell in (2, 3, 4):
            t = to_table(grp("binary-dihedral", ell))
            assert sum(1 for x in range(t.order) if t.element_order(x) == 2) == 1

    def test_aliases(self):
        assert build_group("tetrahedral").order == 24
        assert build_group("2i").order == 120

    def test_bad_kind(self):
        with pytest.raises(UnknownKind):
            build_group("heptagonal")

    def test_ell_required(self):
        with pytest.raises(ValueError):
            build_group("cyclic", 1)
        with pytest.raises(ValueError):
            build_group("binary-dihedral")

    def test_closure_cap(self):
        with pytest.raises(ClosureExplosion):
            MatrixGroup([Mat.diagonal([rat(2, 4), rat(1, 4)])])

    @pytest.mark.parametrize("kind,ell,half", [
        ("binary-dihedral", 2, 4),
        ("binary-dihedral", 3, 6),
        ("binary-tetrahedral", None, 12),
    ])
    def test_rotation_image_order(self, kind, ell, half):
        g = grp(kind, ell)
        t = to_table(g)
        minus = g.element_index(-Mat.identity(2, g.conductor))
        q, _ = quotient_table(t, (t.id, minus))
        assert q.order == half
        q.validate()


class TestTn:
    def test_order4_diagonal(self):
        g = tn_group(2, (2, 2))
        assert g.order == 4
        assert all(m.is_diagonal() for m in g.elements)
        vals = {
            tuple(m.rows[i][i].to_fraction() for i in range(2)) for m in g.elements
        }
        assert vals == {(1, 1), (1, -1), (-1, 1), (-1, -1)}

    def test_single_factor_cyclic(self):
        assert tn_group(1, (5,)).order == 5

    def test_padded_dimension(self):
        g = tn_group(3, (2, 4))
        assert g.order == 8
        assert g.conductor == 4
        for m in g.elements:
            assert m.size == 3
            assert m.rows[2][2].is_one()
            assert m.rows[0][0] ** 2 == one(4)

    def test_rank_exceeds_dimension(self):
        with pytest.raises(RankExceedsDimension):
            tn_group(1, (2, 2))

    def test_not_dividing(self):
        with pytest.raises(NotDividing):
            tn_group(2, (2, 3))

    def test_small_factor(self):
        with pytest.raises(ValueError):
            tn_group(2, (1, 2))


def order_multiset(t):
    return sorted(t.element_order(x) for x in range(t.order))


class TestTables:
    def test_cyclic2_is_z4(self):
        t = to_table(grp("cyclic", 2))
        t.validate()
        assert t.order == 4 and t.is_abelian()
        assert order_multiset(t) == [1, 2, 4, 4]

    def test_q8_table(self):
        t = to_table(grp("binary-dihedral", 2))
        t.validate()
        assert order_multiset(t) == [1, 2, 4, 4, 4, 4, 4, 4]
        assert len(t.center()) == 2

    def test_tetrahedral_center(self):
        t = to_table(grp("binary-tetrahedral"))
        assert t.order == 24
        assert len(t.center()) == 2

    def test_q8_times_z3_center(self):
        t = direct_product(to_table(grp("binary-dihedral", 2)), cyclic_table(3))
        assert t.order == 24
        assert len(t.center()) == 6

    def test_klein(self):
        t = direct_product(cyclic_table(2), cyclic_table(2))
        assert t.is_abelian() and order_multiset(t) == [1, 2, 2, 2]
        assert abelian_table((2, 2)).mul == t.mul

    def test_symmetric_3(self):
        t = symmetric_table(3)
        t.validate()
        assert t.order == 6 and not t.is_abelian()
        assert len(t.center()) == 1
        assert order_multiset(t) == [1, 2, 2, 2, 3, 3]

    def test_symmetric_4(self):
        t = symmetric_table(4)
        t.validate()
        assert t.order == 24
        assert order_multiset(t).count(4) == 6

    def test_validate_sampled_branch(self):
        symmetric_table(5).validate(rng=random.Random(0))

    def test_product_associative_up_to_iso(self):
        a, b, c = cyclic_table(4), cyclic_table(2), symmetric_table(3)
        left = direct_product(direct_product(a, b), c)
        right = direct_product(a, direct_product(b, c))
        assert order_multiset(left) == order_multiset(right)

    def test_table_json_roundtrip(self):
        t = symmetric_table(3)
        t2 = GroupTable.from_json(t.to_json())
        assert t2.mul == t.mul and t2.names == t.names

    def test_subgroup_closure(self):
        t = to_table(grp("binary-dihedral", 3))
        assert subgroup_closure_indices(grp("binary-dihedral", 3), []) == (t.id,)
        full = subgroup_closure_indices(
            grp("binary-dihedral", 3), range(t.order)
        )
        assert full == tuple(range(t.order))

    def test_quotient_rejects_non_normal(self):
        t = symmetric_table(3)
        two = next(x for x in range(t.order) if t.element_order(x) == 2)
        with pytest.raises(ValueError):
            quotient_table(t, (t.id, two))


class TestCharacters:
    @pytest.mark.parametrize("kind", [
        "binary-tetrahedral", "binary-octahedral", "binary-icosahedral",
    ])
    def test_primitive_kinds_trivial_only(self, kind):
        chars = chi_stabilizer_characters(grp(kind))
        assert len(chars) == 1 and chars[0].is_trivial()

    @pytest.mark.parametrize("ell", [3, 4, 5])
    def test_dihedral_pair(self, ell):
        chars = chi_stabilizer_characters(grp("binary-dihedral", ell))
        assert len(chars) == 2
        assert chars[0].is_trivial()
        assert chars[1].order() == 2

    def test_quaternion_four(self):
        g = grp("binary-dihedral", 2)
        chars = chi_stabilizer_characters(g)
        assert len(chars) == 4
        assert chars[0].is_trivial()
        assert all(c.order() == 2 for c in chars[1:])
        # closed under products: the Klein group of characters
        vals = {tuple(v.raw for v in c.values) for c in chars}
        for c1 in chars:
            for c2 in chars:
                prod = tuple((a * b).raw for a, b in zip(c1.values, c2.values))
                assert prod in vals

    @pytest.mark.parametrize("kind,ell", [
        ("binary-dihedral", 2),
        ("binary-dihedral", 3),
        ("binary-dihedral", 4),
        ("binary-tetrahedral", None),
        ("binary-octahedral", None),
        ("binary-icosahedral", None),
    ])
    def test_stabilizer_identity(self, kind, ell):
        # the defining property: gamma(g) tr(g) = tr(g) everywhere
        g = grp(kind, ell)
        traces = g.traces()
        for c in chi_stabilizer_characters(g):
            for i, tr in enumerate(traces):
                assert c(i) * tr == tr

    @pytest.mark.parametrize("kind,ell", [
        ("binary-dihedral", 2),
        ("binary-dihedral", 3),
        ("binary-tetrahedral", None),
    ])
    def test_multiplicative(self, kind, ell):
        g = grp(kind, ell)
        t = to_table(g)
        for c in chi_stabilizer_characters(g):
            assert c(t.id).is_one()
            for a in range(t.order):
                for b in range(t.order):
                    assert c(t.mul[a][b]) == c(a) * c(b)

    def test_value_at_inverse(self):
        g = grp("binary-dihedral", 3)
        t = to_table(g)
        for c in chi_stabilizer_characters(g):
            for i in range(g.order):
                assert c.value_at_inverse(i) == c(t.inv[i])

    @pytest.mark.parametrize("kind,ell,count", [
        ("cyclic", 3, 6),
        ("binary-dihedral", 2, 4),
        ("binary-dihedral", 3, 4),
        ("binary-dihedral", 4, 4),
        ("binary-tetrahedral", None, 3),
        ("binary-octahedral", None, 2),
        ("binary-icosahedral", None, 1),
    ])
    def test_linear_character_counts(self, kind, ell, count):
        chars = linear_characters(grp(kind, ell))
        assert len(chars) == count
        assert len(set(chars)) == count
        assert chars[0].is_trivial()

    def test_cyclic_characters_complete(self):
        # element k of cyclic(3) is g^k, so each character is k -> zeta_6^(jk)
        # for a distinct j; together they exhaust j = 0..5
        g = grp("cyclic", 3)
        powers = [zeta(6) ** k for k in range(6)]
        seen = set()
        for c in linear_characters(g):
            j = powers.index(c(1))
            for k in range(6):
                assert c(k) == powers[(j * k) % 6]
            seen.add(j)
        assert seen == set(range(6))

    def test_nonabelian_quotient_guard(self):
        g = grp("binary-dihedral", 3)
        with pytest.raises(NonAbelianQuotient):
            characters_from_quotient(g, (to_table(g).id,))


class TestCosets:
    @pytest.mark.parametrize("kind,ell,diag_order", [
        ("binary-dihedral", 2, 4),
        ("binary-tetrahedral", None, 4),
        ("binary-octahedral", None, 8),
        ("binary-icosahedral", None, 10),
    ])
    def test_diagonal_subgroup_order(self, kind, ell, diag_order):
        g = grp(kind, ell)
        diag, reps = diagonal_coset_decomposition(g)
        assert len(diag) == diag_order
        assert len(diag) * len(reps) == g.order

    def test_cosets_partition(self):
        g = grp("binary-tetrahedral")
        diag, reps = diagonal_coset_decomposition(g)
        seen = set()
        for r in reps:
            for c in diag:
                seen.add(g.index[g.elements[r] @ g.elements[c]])
        assert seen == set(range(g.order))


class TestJson:
    def test_mat_roundtrip(self):
        m = grp("binary-icosahedral").generators[1]
        assert mat_from_json(mat_to_json(m)) == m

    def test_catalog_group_roundtrip(self):
        g = grp("binary-dihedral", 3)
        g2 = MatrixGroup.from_json(g.to_json())
        assert g2.kind == g.kind and g2.ell == 3 and g2.order == g.order

    def test_custom_group_roundtrip(self):
        g = grp("binary-dihedral", 2)
        blob = g.to_json()
        blob["kind"] = "custom"
        g2 = MatrixGroup.from_json(blob)
        assert set(g2.elements) == set(g.elements)

import json
import random
from fractions import Fraction

import pytest

from equimap.compress import (
    CompressionCertificate,
    Moebius,
    SeriesTable,
    construct_self_compression,
    descent_rational,
    invariant_form,
    linear_self_compression,
    series,
    series_consistency,
    verify_descent,
    verify_equivariance,
    verify_functional_equation,
)
from equimap.errors import (
    DegreeMismatch,
    InfeasibleDegree,
    NotInvariant,
    UnknownKind,
    ZeroDenominator,
    ZeroForm,
)
from equimap.forms import (
    Form,
    canonical_span,
    equivariant_basis,
    form_gcd,
    isotypic_dimension,
    multiplicity_chi,
    substitute,
)
from equimap.groups import Mat, MatrixGroup, build_group, mat_from_json, tn_group
from equimap.scalars import CycNum, cyc_from_json, one, zero, zeta


def spans_equal(fs, gs):
    ra, pa, ma = canonical_span(fs)
    rb, pb, mb = canonical_span(gs)
    return ma == mb and pa == pb and ra == rb


def icosa_degree11_pair(n=5):
    p = (Form.monomial(2, (11, 0), n)
         + 66 * Form.monomial(2, (6, 5), n)
         - 11 * Form.monomial(2, (1, 10), n))
    q = (-11 * Form.monomial(2, (10, 1), n)
         - 66 * Form.monomial(2, (5, 6), n)
         + Form.monomial(2, (0, 11), n))
    return p, q


class TestSeries:
    def test_tetra_sg_spot_values(self):
        s = series("tetrahedral", None, "S_G", 12)
        assert s.coeffs == (0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 2, 0)

    def test_first_nonzero_primitive(self):
        for kind, want in (("tetrahedral", 5), ("octahedral", 7), ("icosahedral", 11)):
            assert series(kind, None, "S_G", 24).first_nonzero() == want

    def test_first_nonzero_dihedral_and_cyclic(self):
        for ell in range(2, 9):
            for gk in ("dihedral", "cyclic"):
                s = series(gk, ell, "S_G", 2 * ell + 2)
                assert s.first_nonzero() == 2 * ell - 1

    def test_dihedral_sg_is_indicator(self):
        s = series("dihedral", 3, "S_G", 40)
        for d in range(41):
            assert s[d] == (1 if (d + 1) % 6 == 0 else 0)

    def test_q8_p1_coefficient_of_t4(self):
        assert series("dihedral", 2, "P_1", 6)[4] == 2

    def test_ell2_pchi_numerator_accumulates(self):
        # the degree-3 numerator term appears twice when ell = 2
        assert series("dihedral", 2, "P_chi", 3).coeffs == (0, 1, 0, 2)

    def test_entries_nonnegative(self):
        rng = random.Random(0x5e41e5)
        kinds = [("tetrahedral", None), ("octahedral", None), ("icosahedral", None),
                 ("dihedral", 4), ("cyclic", 5)]
        for _ in range(20):
            gk, ell = rng.choice(kinds)
            kind = rng.choice(["S_G", "P_chi", "P_1", "P_theta"])
            try:
                s = series(gk, ell, kind, rng.randrange(1, 50))
            except UnknownKind:
                continue
            assert min(s.coeffs) >= 0

    def test_theta_rejected_for_primitive(self):
        with pytest.raises(UnknownKind):
            series("tetrahedral", None, "P_theta", 10)

    def test_character_series_rejected_for_cyclic(self):
        for kind in ("P_chi", "P_1", "P_theta"):
            with pytest.raises(UnknownKind):
                series("cyclic", 3, kind, 10)

    def test_bad_inputs(self):
        with pytest.raises(UnknownKind):
            series("simple", None, "S_G", 10)
        with pytest.raises(UnknownKind):
            series("tetrahedral", None, "molien", 10)
        with pytest.raises(ValueError):
            series("tetrahedral", None, "S_G", 0)
        with pytest.raises(ValueError):
            series("dihedral", 1, "S_G", 10)

    def test_json_roundtrip(self):
        s = series("icosahedral", None, "P_1", 31)
        t = SeriesTable.from_json(json.loads(json.dumps(s.to_json())))
        assert t.coeffs == s.coeffs and t.kind == s.kind
        assert t.group_kind == s.group_kind


class TestSeriesConsistency:
    def test_tetrahedral(self):
        rep = series_consistency(build_group("tetrahedral"), 20)
        assert rep["equality_holds"] and rep["series_match"]

    def test_octahedral(self):
        assert series_consistency(build_group("octahedral"), 16)["equality_holds"]

    def test_icosahedral(self):
        assert series_consistency(build_group("icosahedral"), 16)["equality_holds"]

    def test_binary_dihedral_3(self):
        g = build_group("dihedral", 3)
        rep = series_consistency(g, 20)
        assert rep["equality_holds"] and rep["inequality_holds"]
        # the degree-5 count decomposes through the character side
        from equimap.groups import chi_stabilizer_characters
        chars = chi_stabilizer_characters(g)
        lhs = series("dihedral", 3, "S_G", 5)[5]
        rhs = (multiplicity_chi(g, 5)
               - isotypic_dimension(g, chars[0], 4)
               - isotypic_dimension(g, chars[1], 4))
        assert lhs == rhs == 1

    def test_q8_three_theta(self):
        rep = series_consistency(build_group("dihedral", 2), 12)
        assert rep["theta_dims_equal"] is True

    def test_larger_ells(self):
        for ell in (4, 6, 8):
            assert series_consistency(build_group("dihedral", ell), 18)["equality_holds"]

    def test_cyclic_rejected(self):
        with pytest.raises(ValueError):
            series_consistency(build_group("cyclic", 3), 10)


class TestConstruct:
    def test_q8_degree3(self):
        g = build_group("dihedral", 2)
        cert = construct_self_compression(g, 3)
        assert cert.alpha == (0, -1)
        assert cert.gcd_degree == 0 and cert.descent_degree == 3
        assert cert.checks == {"equivariant": True, "jacobian_nonzero": True,
                               "descent_nontrivial": True}
        want1 = Form.monomial(2, (0, 3), 4)
        want2 = -Form.monomial(2, (3, 0), 4)
        assert spans_equal([cert.phi1, cert.phi2], [want1, want2])

    def test_q8_infeasible_degrees(self):
        g = build_group("dihedral", 2)
        for d in (1, 2, 4, 5, 6):
            with pytest.raises(InfeasibleDegree):
                construct_self_compression(g, d)

    def test_cyclic2_descent_is_inverse_cube(self):
        g = build_group("cyclic", 2)
        cert = construct_self_compression(g, 3)
        assert cert.group.kind == "cyclic"
        assert cert.checks["equivariant"] is True
        num, den = descent_rational(cert)
        # projectively z -> z^(-3): constant over cube
        assert len(num) == 1 and not num[0].is_zero()
        assert len(den) == 4 and not den[3].is_zero()
        assert all(den[i].is_zero() for i in range(3))
        rep = verify_functional_equation((num, den), [Moebius(-1, 0, 0, 1)])
        assert rep["pass"] and rep["degree"] == 3 and rep["nontrivial"]

    def test_icosahedral_degree11(self):
        cert = construct_self_compression(build_group("icosahedral"), 11)
        assert cert.gcd_degree == 0 and cert.descent_degree == 11
        assert all(cert.checks.values())

    def test_octahedral_degree7(self):
        cert = construct_self_compression(build_group("octahedral"), 7)
        assert all(cert.checks.values())
        assert cert.descent_degree >= 2

    def test_dihedral5_degree9(self):
        cert = construct_self_compression(build_group("dihedral", 5), 9)
        assert all(cert.checks.values())
        assert cert.gcd_degree <= 7

    def test_descent_invariant_ties_fields(self):
        cert = construct_self_compression(build_group("tetrahedral"), 5)
        assert cert.checks["descent_nontrivial"] == (cert.gcd_degree <= cert.d - 2)
        assert cert.descent_degree == cert.d - cert.gcd_degree >= 2

    def test_json_deterministic_and_roundtrips(self):
        a = construct_self_compression(build_group("dihedral", 3), 5)
        b = construct_self_compression(build_group("dihedral", 3), 5)
        sa = json.dumps(a.to_json(), sort_keys=True)
        sb = json.dumps(b.to_json(), sort_keys=True)
        assert sa == sb
        c = CompressionCertificate.from_json(json.loads(sa))
        assert c.phi1 == a.phi1 and c.phi2 == a.phi2
        assert c.alpha == a.alpha and c.d == a.d
        assert c.group.kind == "binary-dihedral" and c.group.ell == 3


class TestVerifyEquivariance:
    def test_identity_pair_passes(self):
        for g in (build_group("dihedral", 2), build_group("tetrahedral")):
            f1 = Form.monomial(2, (1, 0), g.conductor)
            f2 = Form.monomial(2, (0, 1), g.conductor)
            rep = verify_equivariance(g, f1, f2, "linear")
            assert rep["pass"] and rep["checked"] == g.order

    def test_cubes_fail_linear_at_diagonal(self):
        g = build_group("dihedral", 2)
        rep = verify_equivariance(g, Form.monomial(2, (3, 0), 4),
                                  Form.monomial(2, (0, 3), 4), "linear")
        assert not rep["pass"]
        bad = mat_from_json(rep["failing"]["matrix"])
        i4 = zeta(4)
        assert bad == Mat([[i4, zero(4)], [zero(4), -i4]])

    def test_cubes_pass_projective(self):
        g = build_group("dihedral", 2)
        rep = verify_equivariance(g, Form.monomial(2, (3, 0), 4),
                                  Form.monomial(2, (0, 3), 4), "projective")
        assert rep["pass"] and rep["checked"] == 8

    def test_icosahedral_degree11_pair(self):
        p, q = icosa_degree11_pair()
        w5 = zeta(5)
        t = w5 + w5 ** 4
        g1 = Mat([[w5, zero(5)], [zero(5), one(5)]])
        g2 = Mat([[t, one(5)], [one(5), -t]])
        rep = verify_equivariance([g1, g2], p, q, "projective")
        assert rep["pass"] and rep["checked"] == 2
        # the diagonal generator matches on the nose: (w5 P : Q)
        assert cyc_from_json(rep["scalars"][0]) == one(5)
        assert substitute(g1, p) == w5 * p and substitute(g1, q) == q
        lin = verify_equivariance([g1, g2], p, q, "linear")
        assert not lin["pass"]

    def test_group_and_generator_list_agree(self):
        g = build_group("dihedral", 2)
        cert = construct_self_compression(g, 3)
        full = verify_equivariance(g, cert.phi1, cert.phi2, "linear")
        gens = verify_equivariance(list(g.generators), cert.phi1, cert.phi2, "linear")
        assert full["pass"] and gens["pass"]
        assert gens["checked"] == len(g.generators)

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatch):
            verify_equivariance(build_group("dihedral", 2),
                                Form.monomial(2, (1, 0), 4),
                                Form.monomial(2, (0, 2), 4))

    def test_stops_at_first_failure(self):
        g = build_group("dihedral", 2)
        rep = verify_equivariance(g, Form.monomial(2, (2, 1), 4),
                                  Form.monomial(2, (1, 2), 4), "linear")
        assert not rep["pass"]
        assert rep["checked"] <= g.order
        assert rep["failing"]["index"] is not None


class TestVerifyDescent:
    def test_q8_certificate(self):
        cert = construct_self_compression(build_group("dihedral", 2), 3)
        rep = verify_descent(cert)
        assert rep["nontrivial"] and rep["descent_degree"] == 3
        assert rep["containment"] == {"gamma0": False, "gamma1": False,
                                      "gamma2": False, "gamma3": False}
        assert rep["criteria_agree"]

    def test_trivial_pair(self):
        # x1 x2 * (x1, x2): the descent is the identity
        g = build_group("cyclic", 2)
        phi1 = Form.monomial(2, (2, 1), 4)
        phi2 = Form.monomial(2, (1, 2), 4)
        cert = CompressionCertificate(g, 3, phi1, phi2, (), 2, {})
        rep = verify_descent(cert)
        assert rep["gcd_degree"] == 2 and not rep["nontrivial"]
        assert sum(rep["containment"].values()) == 1
        assert rep["criteria_agree"]

    def test_icosahedral_degree11_pair(self):
        p, q = icosa_degree11_pair()
        cert = CompressionCertificate(build_group("icosahedral"), 11,
                                      p.embed(20), q.embed(20), (), 0, {})
        rep = verify_descent(cert)
        assert rep["gcd_degree"] == 0 and rep["descent_degree"] == 11
        assert rep["nontrivial"]

    def test_zero_form_rejected(self):
        g = build_group("cyclic", 2)
        cert = CompressionCertificate(g, 3, Form.zero(2, 3, 4),
                                      Form.monomial(2, (3, 0), 4), (), 0, {})
        with pytest.raises(ZeroForm):
            verify_descent(cert)

    def test_gcd_and_containment_agree_on_samples(self):
        rng = random.Random(0xa16eb)
        combos = [("dihedral", 2, 7), ("dihedral", 4, 7),
                  ("tetrahedral", None, 11), ("cyclic", 3, 11)]
        for kind, ell, d in combos:
            g = build_group(kind, ell)
            h = build_group("binary-dihedral", ell) if kind == "cyclic" else g
            basis = equivariant_basis(h, d)
            n = h.conductor
            for _ in range(20):
                alpha = [rng.randint(-4, 4) for _ in basis]
                phi1 = Form.zero(2, d, n)
                phi2 = Form.zero(2, d, n)
                for a, (b1, b2) in zip(alpha, basis):
                    if a:
                        c = CycNum.from_rational(Fraction(a), n)
                        phi1 = phi1 + c * b1
                        phi2 = phi2 + c * b2
                if phi1.is_zero() or phi2.is_zero():
                    continue
                cert = CompressionCertificate(g, d, phi1, phi2, alpha,
                                              form_gcd(phi1, phi2).degree, {})
                assert verify_descent(cert)["criteria_agree"]


class TestMoebius:
    def test_zero_determinant_rejected(self):
        with pytest.raises(ZeroDenominator):
            Moebius(1, 2, 2, 4)

    def test_projective_equality(self):
        assert Moebius(1, 0, 0, 1) == Moebius(2, 0, 0, 2)
        assert Moebius(1, 1, 0, 1) != Moebius(1, 0, 0, 1)
        w = zeta(5)
        assert Moebius(w, 0, 0, 1) == Moebius(w * w, 0, 0, w)

    def test_apply(self):
        m = Moebius(1, 1, 0, 1)
        assert m.apply(Fraction(1, 2)).to_fraction() == Fraction(3, 2)
        inv = Moebius(0, 1, 1, 0)
        assert inv.apply(Fraction(4)).to_fraction() == Fraction(1, 4)

    def test_matrix_roundtrip(self):
        w = zeta(8)
        m = Moebius(w, 1, 0, w ** 3)
        again = Moebius.from_matrix(m.to_matrix())
        assert again == m

    def test_json_roundtrip(self):
        m = Moebius(zeta(5), 2, Fraction(1, 3), 1)
        again = Moebius.from_json(json.loads(json.dumps(m.to_json())))
        assert again == m


class TestFunctionalEquation:
    def test_cube_against_order_two(self):
        rep = verify_functional_equation(([0, 0, 0, 1], [1]),
                                         [Moebius(1, 0, 0, 1), Moebius(-1, 0, 0, 1)])
        assert rep["pass"] and rep["degree"] == 3 and rep["nontrivial"]

    def test_shift_fails(self):
        rep = verify_functional_equation(([1, 1], [1]), [Moebius(-1, 0, 0, 1)])
        assert not rep["pass"] and rep["failing_generator"] == 0

    def test_icosahedral_formulas(self):
        w5 = zeta(5)
        t = w5 + w5 ** 4
        pz = [0, -11, 0, 0, 0, 0, 66, 0, 0, 0, 0, 1]
        qz = [1, 0, 0, 0, 0, -66, 0, 0, 0, 0, -11]
        rep = verify_functional_equation(
            (pz, qz), [Moebius(w5, 0, 0, 1), Moebius(t, 1, 1, -t)]
        )
        assert rep["pass"] and rep["degree"] == 11 and rep["nontrivial"]

    def test_common_factor_cancelled(self):
        # z^2 (z+1) / z^2 reduces to degree 1
        rep = verify_functional_equation(([0, 0, 1, 1], [0, 0, 1]),
                                         [Moebius(1, 0, 0, 1)])
        assert rep["pass"] and rep["degree"] == 1 and not rep["nontrivial"]

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDenominator):
            verify_functional_equation(([1], [0, 0]), [Moebius(1, 0, 0, 1)])

    def test_zero_function(self):
        rep = verify_functional_equation(([0], [0, 1]),
                                         [Moebius(-1, 0, 0, 1)])
        assert rep["pass"] and rep["degree"] == 0

    def test_matrices_accepted(self):
        i4 = zeta(4)
        m = Mat([[i4, zero(4)], [zero(4), -i4]])
        rep = verify_functional_equation(([0, 0, 0, 1], [1]), [m])
        assert rep["pass"] and rep["degree"] == 3


class TestInvariantForm:
    def test_trivial_group(self):
        g = MatrixGroup((Mat.identity(1, 1),), kind="custom")
        assert invariant_form(g, 1) == Form.monomial(1, (1,), 1)

    def test_plus_minus_one(self):
        g = tn_group(1, (2,))
        assert invariant_form(g, 2) == Form.monomial(1, (2,), g.conductor)
        assert invariant_form(g, 1) is None
        assert invariant_form(g, 3) is None

    def test_icosahedral_gap(self):
        g = build_group("icosahedral")
        for d in range(1, 12):
            assert invariant_form(g, d) is None
        f = invariant_form(g, 12)
        assert f is not None and f.degree == 12
        for m in g.generators:
            assert substitute(m, f) == f

    def test_q8_first_invariant(self):
        g = build_group("dihedral", 2)
        for d in (1, 2, 3):
            assert invariant_form(g, d) is None
        f = invariant_form(g, 4)
        assert f == Form.monomial(2, (4, 0), 4) + Form.monomial(2, (0, 4), 4)

    def test_rank_matches_molien_series(self):
        for kind, ell in (("tetrahedral", None), ("dihedral", 3)):
            g = build_group(kind, ell)
            p1 = series(kind, ell, "P_1", 16)
            for d in range(1, 17):
                assert (invariant_form(g, d) is None) == (p1[d] == 0)

    def test_degree_zero(self):
        g = build_group("dihedral", 2)
        f = invariant_form(g, 0)
        assert f.degree == 0 and not f.is_zero()

    def test_orbit_route(self):
        g = build_group("cyclic", 2)
        f = invariant_form(g, 8, method="orbit")
        assert f.degree == 8 and not f.is_zero()
        for m in g.generators:
            assert substitute(m, f) == f
        with pytest.raises(ValueError):
            invariant_form(g, 6, method="orbit")

    def test_divisible_degree_always_succeeds(self):
        for g in (build_group("cyclic", 3), tn_group(2, (2, 2))):
            d = g.order
            f = invariant_form(g, d, method="orbit")
            assert f is not None and f.degree == d

    def test_diagonal_groups(self):
        g = tn_group(2, (2, 2))
        assert invariant_form(g, 1) is None
        assert invariant_form(g, 2) == Form.monomial(2, (2, 0), g.conductor)

    def test_nondiagonal_custom_group(self):
        o = one(1)
        z = zero(1)
        swap = Mat([[z, o], [o, z]])
        g = MatrixGroup((swap,), kind="custom")
        f = invariant_form(g, 1)
        assert f == Form.monomial(2, (1, 0), 1) + Form.monomial(2, (0, 1), 1)
        assert substitute(swap, f) == f


class TestLinearSelfCompression:
    def test_trivial_group_squaring(self):
        g = MatrixGroup((Mat.identity(1, 1),), kind="custom")
        rep = linear_self_compression(g, Form.monomial(1, (1,), 1))
        assert [str(m) for m in rep["maps"]] == ["x1^2"]
        assert rep["degree"] == 2 and rep["nontrivial"]

    def test_plus_minus_one_cube(self):
        g = tn_group(1, (2,))
        rep = linear_self_compression(g, Form.monomial(1, (2,), g.conductor))
        assert rep["maps"][0] == Form.monomial(1, (3,), g.conductor)
        assert rep["equivariant"]

    def test_t22_example(self):
        g = tn_group(2, (2, 2))
        rep = linear_self_compression(g, Form.monomial(2, (2, 2), g.conductor))
        assert rep["maps"][0] == Form.monomial(2, (3, 2), g.conductor)
        assert rep["maps"][1] == Form.monomial(2, (2, 3), g.conductor)
        assert rep["degree"] == 5 and rep["equivariant"] and rep["nontrivial"]
        assert rep["line_degree"] == 5

    def test_catalog_group(self):
        g = build_group("tetrahedral")
        f = invariant_form(g, 6)
        rep = linear_self_compression(g, f)
        assert rep["degree"] == 7 and rep["equivariant"]
        assert rep["line_degree"] == 7

    def test_line_restriction_degree(self):
        g = build_group("dihedral", 2)
        f = invariant_form(g, 8)
        rep = linear_self_compression(g, f)
        assert rep["line_degree"] == 9 == f.degree + 1

    def test_not_invariant_rejected(self):
        g = tn_group(1, (2,))
        with pytest.raises(NotInvariant):
            linear_self_compression(g, Form.monomial(1, (1,), g.conductor))


class TestCatalogSweep:
    # every feasible degree in a small window yields a verified certificate
    def test_small_feasible_degrees(self):
        jobs = [("dihedral", 2, 7), ("dihedral", 3, 11), ("cyclic", 4, 7),
                ("tetrahedral", None, 7), ("octahedral", None, 15),
                ("icosahedral", None, 19)]
        for kind, ell, d in jobs:
            g = build_group(kind, ell)
            cert = construct_self_compression(g, d)
            assert all(cert.checks.values()), (kind, ell, d)
            rep = verify_descent(cert)
            assert rep["nontrivial"] and rep["criteria_agree"], (kind, ell, d)

    def test_descent_chart_consistency(self):
        # the reduced fraction passes the functional equation for the
        # Moebius images of the group generators
        g = build_group("cyclic", 3)
        cert = construct_self_compression(g, 5)
        num, den = descent_rational(cert)
        gens = [Moebius.from_matrix(m) for m in g.generators]
        rep = verify_functional_equation((num, den), gens)
        assert rep["pass"] and rep["degree"] == cert.descent_degree

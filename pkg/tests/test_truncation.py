import numpy as np
import pytest

from heunvar.truncation import (QuadraticRoots, RealPolynomial,
                                assemble_solution, grouped_roots, heun_cubic,
                                heun_quadratic_roots,
                                heun_truncation_general,
                                heun_truncation_polynomial, real_roots,
                                truncation_energy, truncation_family,
                                truncation_polynomial_in_a)


class TestTruncationEnergy:
    def test_reference_values(self):
        assert truncation_energy(0, 0.0, 1.0) == 1.75
        assert truncation_energy(1, 0.0, 1.0) == 3.75
        assert truncation_energy(0, 0.0, 0.0) == 2.0
        assert truncation_energy(3, 0.5, 2.0) == 2 * (3 + 0.5 + 1) - 1.0

    def test_guards(self):
        with pytest.raises(ValueError):
            truncation_energy(-1, 0.0, 1.0)
        with pytest.raises(ValueError):
            truncation_energy(0, -0.5, 1.0)


class TestPolynomialInA:
    def test_degree_is_n_plus_one(self):
        for n in range(0, 8):
            assert truncation_polynomial_in_a(n, 0.0, 1.0).degree == n + 1

    def test_one_node_coefficients(self):
        # 16 * c_2(a) = 4a^2 + 8a - 5 at s=0, b=1
        p = truncation_polynomial_in_a(1, 0.0, 1.0)
        assert p.as_float() * 16 == pytest.approx([-5.0, 8.0, 4.0], rel=1e-14)

    def test_zero_node_root(self):
        # c_1(a) has the single root a = -b(2s+1)/2
        for s, b in ((0.0, 1.0), (1.5, 2.0), (0.5, 0.0)):
            roots = real_roots(truncation_polynomial_in_a(0, s, b))
            assert roots == pytest.approx([-b * (2 * s + 1) / 2], abs=1e-14)

    def test_known_roots(self):
        p = truncation_polynomial_in_a(1, 0.0, 1.0)
        assert real_roots(p) == pytest.approx([0.5, -2.5], rel=1e-12)


class TestRealRoots:
    def test_guards(self):
        with pytest.raises(ValueError):
            real_roots(RealPolynomial([0.0, 0.0]))
        with pytest.raises(ValueError):
            real_roots(RealPolynomial([3.0]))

    def test_complex_pair_excluded(self):
        # x^2 + 1: no real roots
        assert real_roots(RealPolynomial([1.0, 0.0, 1.0])).size == 0

    def test_double_root_reported_twice(self):
        # (x + 1)^2 (x - 2)
        p = RealPolynomial(np.convolve([1, 2, 1], [-2, 1]))
        roots = real_roots(p)
        assert roots == pytest.approx([2.0, -1.0, -1.0], abs=1e-7)
        assert grouped_roots(roots) == [
            (pytest.approx(2.0, abs=1e-12), 1),
            (pytest.approx(-1.0, abs=1e-7), 2),
        ]

    def test_descending_order_and_polish_accuracy(self):
        p = truncation_polynomial_in_a(5, 0.0, 1.0)
        roots = real_roots(p)
        assert np.all(np.diff(roots) < 0)
        for r in roots:
            assert abs(p(r)) <= 1e-12 * max(1.0, abs(r)) ** p.degree


class TestClosedForms:
    def test_quadratic_reference(self):
        q = heun_quadratic_roots(1.0, 0.0)
        assert q.is_real
        assert q.plus.real == pytest.approx(5.0, rel=1e-15)
        assert q.minus.real == pytest.approx(-1.0, rel=1e-15)

    def test_quadratic_double_root(self):
        q = heun_quadratic_roots(2.0, 0.0)
        assert q.discriminant == 0.0
        assert q.plus == q.minus == pytest.approx(-1.0)

    def test_quadratic_complex_flagged(self):
        q = heun_quadratic_roots(1.0, 20.0)
        assert not q.is_real
        assert q.plus.imag != 0.0
        assert q.plus == pytest.approx(q.minus.conjugate())

    def test_quadratic_rejects_b_zero(self):
        with pytest.raises(ValueError):
            heun_quadratic_roots(0.0, 1.0)

    def test_cubic_coefficients(self):
        assert heun_cubic(1.0, 0.0).as_float() == pytest.approx(
            [-97.0, -121.0, -23.0, 1.0], abs=0)
        assert heun_cubic(1.0, 1.0).as_float() == pytest.approx(
            [-112.0, -132.0, -20.0, 1.0], abs=0)

    def test_cubic_degenerates_at_b_zero(self):
        # leading coefficients vanish; polynomial trims to degree 1
        p = heun_cubic(0.0, 1.0)
        assert p.degree == 1
        assert p.as_float() == pytest.approx([-47.0, -32.0], abs=0)


class TestGeneralRoute:
    def test_matches_quadratic(self):
        gen = heun_truncation_general(1, 1.0, 0.0)
        assert gen == pytest.approx([5.0, -1.0], rel=1e-12)

    def test_matches_quadratic_double_root(self):
        p = heun_truncation_polynomial(1, 2.0, 0.0)
        assert p.as_float() == pytest.approx([4.0, 8.0, 4.0], abs=0)
        gen = heun_truncation_general(1, 2.0, 0.0)
        assert gen == pytest.approx([-1.0, -1.0], abs=1e-7)

    def test_matches_cubic_roots(self):
        gen = heun_truncation_general(2, 1.0, 0.0)
        ref = real_roots(heun_cubic(1.0, 0.0))
        assert np.max(np.abs(gen - ref)) < 1e-10 * max(1, np.abs(ref).max())

    def test_b_zero_general_route_still_works(self):
        # n0=1, b=0: c_2 is linear in a with root (d^2 - 8) / 8
        gen = heun_truncation_general(1, 0.0, 3.0)
        assert gen == pytest.approx([(9.0 - 8.0) / 8.0], rel=1e-14)

    def test_single_term_factor(self):
        # n0=0: c_1 is linear in a with root -(b+d)/b
        for b, d in [(1.0, 0.0), (2.0, 3.0), (0.5, -1.25)]:
            gen = heun_truncation_general(0, b, d)
            assert gen == pytest.approx([-(b + d) / b], rel=1e-14)

    def test_complex_roots_returned_sorted(self):
        roots = heun_truncation_general(1, 1.0, 20.0)
        assert roots.dtype == complex
        assert roots[0].imag >= roots[1].imag
        assert roots[0] == pytest.approx(roots[1].conjugate())

    def test_guard(self):
        with pytest.raises(ValueError):
            heun_truncation_polynomial(-1, 1.0, 0.0)


class TestAssembly:
    def test_family_sizes_and_order(self):
        for n in range(0, 6):
            fam = truncation_family(n, 0.0, 1.0)
            assert len(fam) == n + 1
            assert [sol.i for sol in fam] == list(range(1, n + 2))
            roots = [sol.a_root for sol in fam]
            assert roots == sorted(roots, reverse=True)
            assert all(sol.w == truncation_energy(n, 0.0, 1.0) for sol in fam)
            assert all(len(sol.coeffs) == n + 1 for sol in fam)

    def test_known_polynomials(self):
        fam = truncation_family(1, 0.0, 1.0)
        assert fam[0].a_root == pytest.approx(0.5, rel=1e-13)
        assert fam[0].coeffs == pytest.approx([1.0, 1.0], rel=1e-13)
        assert fam[1].a_root == pytest.approx(-2.5, rel=1e-13)
        assert fam[1].coeffs == pytest.approx([1.0, -2.0], rel=1e-13)

    def test_assemble_rejects_non_root(self):
        with pytest.raises(ValueError, match="terminate"):
            assemble_solution(2, 0.0, 1.0, a_root=0.123)

    def test_square_integrability_by_quadrature(self):
        # |u|^2 x dx must be finite and the tail negligible: compare the
        # quadrature on [eps, 8] with the one on [eps, 12]
        from heunvar.model import RadialModel
        from heunvar.series import eval_wavefunction
        sol = truncation_family(3, 0.5, 1.0)[1]
        m = RadialModel(0.5, sol.a_root, 1.0)

        def norm(upper):
            x = np.linspace(1e-6, upper, 4001)
            u = np.array([eval_wavefunction(m, sol.coeffs, xi) for xi in x])
            return np.trapezoid(u * u * x, x)

        n8, n12 = norm(8.0), norm(12.0)
        assert np.isfinite(n12) and n12 > 0
        # difference is quadrature resolution, not tail mass
        assert abs(n12 - n8) <= 1e-10 * n12

    def test_heun_route_positivity_of_physical_roots(self):
        # on the Heun side only a > 0 parameterizations are physical; the
        # assembled record keeps the sign information for filtering
        fam = truncation_family(2, 1.0, 1.0)
        physical = [sol for sol in fam if sol.a_root > 0]
        assert physical and all(np.isreal(sol.a_root) for sol in physical)

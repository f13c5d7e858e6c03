import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from learncap.capacity import (
    bernoulli_affinity_closed,
    binomial_md_closed,
    capacity_search,
    classification_bound,
    de_moivre_mad,
    deterministic_capacity_asymptotic,
    entropy_capacity_bounds,
    lazy_affinity,
    machine_affinity,
    majority_affinity_closed,
    randomized_capacity_closed,
    sqrt_law_bound,
)
from learncap.errors import BudgetExceededError
from learncap.machines import (
    make_constant_machine,
    make_empirical_average_machine,
    make_lazy_learner,
    make_majority_machine,
    make_randomized_label_machine,
)
from learncap.pmf import Pmf
from oracles import exact_md, exact_md_half

PHIS = [0.0, 0.05, 0.2, 0.3, 0.5, 0.61, 0.9, 1.0]


class TestBernoulliClosedForm:
    @pytest.mark.parametrize("m", [10, 25, 50, 100, 200])
    def test_fair_coin_matches_exact_fraction(self, m):
        assert bernoulli_affinity_closed(0.5, m) == pytest.approx(float(exact_md_half(m)), rel=1e-13)

    def test_frozen_values(self):
        assert bernoulli_affinity_closed(0.5, 10) == pytest.approx(63 / 512, rel=1e-14)
        assert bernoulli_affinity_closed(0.5, 25) == pytest.approx(676039 / 8388608, rel=1e-14)

    @pytest.mark.parametrize("m", range(1, 13))
    def test_equals_enumeration(self, m):
        machine = make_empirical_average_machine()
        for phi in PHIS:
            assert abs(bernoulli_affinity_closed(phi, m) - machine_affinity(machine, Pmf.bernoulli(phi), m)) <= 1e-10

    @given(st.floats(0, 1), st.integers(1, 300))
    def test_de_moivre_agrees(self, phi, m):
        assert abs(bernoulli_affinity_closed(phi, m) - de_moivre_mad(phi, m)) <= 1e-12

    @pytest.mark.parametrize("m,k", [(10, 3), (10, 5), (20, 1), (40, 17), (200, 100)])
    def test_integer_mean_closed_form(self, m, k):
        assert binomial_md_closed(k / m, m) == pytest.approx(bernoulli_affinity_closed(k / m, m), rel=1e-12)

    def test_integer_mean_closed_form_edges(self):
        assert binomial_md_closed(0.0, 7) == 0.0 and binomial_md_closed(1.0, 7) == 0.0

    def test_integer_mean_required(self):
        with pytest.raises(ValueError):
            binomial_md_closed(0.33, 10)

    @pytest.mark.parametrize("m", [100, 150, 200, 400])
    def test_asymptotic(self, m):
        assert abs(bernoulli_affinity_closed(0.5, m) / deterministic_capacity_asymptotic(m) - 1) <= 0.03

    def test_phi_range(self):
        with pytest.raises(ValueError):
            bernoulli_affinity_closed(1.2, 5)


class TestMajorityClosedForm:
    @pytest.mark.parametrize("m", [1, 3, 5, 7, 9, 11])
    def test_equals_enumeration(self, m):
        machine = make_majority_machine()
        for phi in PHIS:
            assert abs(majority_affinity_closed(phi, m) - machine_affinity(machine, Pmf.bernoulli(phi), m)) <= 1e-10

    def test_even_m_rejected(self):
        with pytest.raises(ValueError):
            majority_affinity_closed(0.5, 10)

    @pytest.mark.parametrize("m", [11, 51])
    def test_below_average_machine(self, m):
        for phi in np.linspace(0, 1, 201):
            assert majority_affinity_closed(float(phi), m) <= bernoulli_affinity_closed(float(phi), m) + 1e-12

    def test_fair_coin_equals_average_machine(self):
        # At phi = 1/2 the deviations keep one sign on each side of the threshold.
        for m in (3, 11, 51):
            assert majority_affinity_closed(0.5, m) == pytest.approx(bernoulli_affinity_closed(0.5, m), abs=1e-14)


class TestRandomizedAndLazy:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("m", range(1, 7))
    def test_randomized_closed_form(self, n, m):
        got = machine_affinity(make_randomized_label_machine(n), Pmf.uniform(n), m)
        assert abs(got - randomized_capacity_closed(m, n)) <= 1e-10

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("m", range(1, 7))
    def test_lazy_closed_form(self, n, m):
        for p in (Pmf.uniform(n), Pmf.from_weights(np.arange(1, n + 1)), Pmf.delta(n)):
            assert abs(lazy_affinity(p, m) - machine_affinity(make_lazy_learner(n), p, m)) <= 1e-10

    def test_lazy_exact_fraction(self):
        want = Fraction(1, 2) * (2 * exact_md(Fraction(1, 4), 3) + exact_md(Fraction(1, 2), 3))
        assert want == Fraction(43, 128)
        assert lazy_affinity(Pmf([0.25, 0.25, 0.5]), 3) == pytest.approx(float(want), abs=1e-15)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_sqrt_law_uniform(self, n):
        m = 200
        ratio = lazy_affinity(Pmf.uniform(n), m) * math.sqrt(2 * math.pi * m / (n - 1))
        assert 0.95 <= ratio <= 1.05

    def test_sqrt_law_bound_formula(self):
        assert sqrt_law_bound(Pmf.uniform(3), 100) == pytest.approx(math.sqrt(2 / (200 * math.pi)), rel=1e-14)
        assert sqrt_law_bound(Pmf.delta(3), 100) == 0.0

    def test_classification_bound(self):
        assert classification_bound(3, 2, 50) == pytest.approx(math.sqrt(5 / (100 * math.pi)), rel=1e-14)


class TestCapacitySearch:
    def test_randomized_uniform(self):
        rep = capacity_search(make_randomized_label_machine(3), 3)
        assert rep.capacity_estimate == pytest.approx(2 / 9, abs=1e-12)
        np.testing.assert_allclose(rep.argmax_distribution.mass, 1 / 3, atol=1e-12)

    def test_constant_machine(self):
        rep = capacity_search(make_constant_machine(2, Pmf([0.3, 0.7])), 6)
        assert rep.capacity_estimate == pytest.approx(0.0, abs=1e-13)

    @pytest.mark.parametrize("m", [3, 11, 25])
    def test_odd_m_argmax_half(self, m):
        for machine in (make_empirical_average_machine(), make_majority_machine()):
            rep = capacity_search(machine, m)
            assert rep.argmax_distribution.mass[1] == pytest.approx(0.5, abs=1e-12)
            assert rep.capacity_estimate == pytest.approx(bernoulli_affinity_closed(0.5, m), abs=1e-13)

    @pytest.mark.parametrize("m", [4, 10, 50])
    def test_even_m_argmax_off_half(self, m):
        # The mean deviation peaks at phi = k/(m+1) on each piece; for even m
        # the top pieces sit either side of 1/2 and beat phi = 1/2.
        k = m // 2
        peak = float(exact_md(Fraction(k, m + 1), m))
        rep = capacity_search(make_empirical_average_machine(), m)
        phi = rep.argmax_distribution.mass[1]
        assert min(abs(phi - k / (m + 1)), abs(phi - (k + 1) / (m + 1))) <= rep.grid_resolution / 10
        assert peak - 1e-6 <= rep.capacity_estimate <= peak + 1e-13
        assert rep.capacity_estimate > bernoulli_affinity_closed(0.5, m) + 1e-4

    def test_even_m_frozen_peak(self):
        assert exact_md(Fraction(5, 11), 10) == Fraction(36741600000, 285311670611)
        assert exact_md(Fraction(2, 5), 4) == Fraction(648, 3125)

    def test_lazy_uniform_not_always_argmax(self):
        rep = capacity_search(make_lazy_learner(3), 3)
        assert rep.capacity_estimate >= 43 / 128 - 1e-12
        assert rep.capacity_estimate > machine_affinity(make_lazy_learner(3), Pmf.uniform(3), 3) + 0.03

    def test_lazy_uniform_argmax_cases(self):
        for m in (2, 4, 5):
            rep = capacity_search(make_lazy_learner(3), m)
            np.testing.assert_allclose(rep.argmax_distribution.mass, 1 / 3, atol=1e-12)

    def test_capacity_decreases_with_m(self):
        machines = [
            make_empirical_average_machine(),
            make_majority_machine(),
            make_randomized_label_machine(2),
            make_lazy_learner(2),
        ]
        for machine in machines:
            caps = [capacity_search(machine, m).capacity_estimate for m in (10, 25, 50, 100, 200)]
            assert all(a > b for a, b in zip(caps, caps[1:])), (machine.name, caps)

    def test_bad_resolution(self):
        with pytest.raises(ValueError):
            capacity_search(make_majority_machine(), 5, grid_resolution=0.3)

    def test_budgets(self):
        with pytest.raises(BudgetExceededError):
            capacity_search(make_lazy_learner(4), 200)
        with pytest.raises(BudgetExceededError):
            capacity_search(make_majority_machine(), 5, grid_resolution=1e-6)

    def test_deterministic(self):
        a = capacity_search(make_lazy_learner(3), 4)
        b = capacity_search(make_lazy_learner(3), 4)
        assert a.capacity_estimate == b.capacity_estimate
        assert a.argmax_distribution == b.argmax_distribution


class TestEntropyBounds:
    def test_constant_machine(self):
        b = entropy_capacity_bounds(make_constant_machine(2), Pmf.uniform(2), 5)
        assert b.affinity == pytest.approx(0.0, abs=1e-13)
        assert b.h_of_h == 0.0 and b.bound_cor5 == 0.0 and b.bound_thm6 == 0.0

    def test_average_machine_fair_coin(self):
        b = entropy_capacity_bounds(make_empirical_average_machine(), Pmf.uniform(2), 10)
        assert b.affinity == pytest.approx(0.123046875, abs=1e-13)
        assert b.bound_cor5_size == pytest.approx(0.3462582325951522, rel=1e-13)
        assert b.holds()

    def test_lazy_type_count_bound(self):
        b = entropy_capacity_bounds(make_lazy_learner(2), Pmf.uniform(2), 10)
        assert b.bound_cor6 == pytest.approx(0.48968308861940196, rel=1e-13)
        assert b.affinity <= b.bound_cor6 and b.holds()

    def test_lazy_mi_is_type_entropy(self):
        b = entropy_capacity_bounds(make_lazy_learner(3), Pmf([0.2, 0.3, 0.5]), 4)
        assert b.mi_type_h == pytest.approx(b.h_of_h, abs=1e-13)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_machines(self, seed):
        from learncap.checks import random_pmf, random_tabular_machine

        rng = np.random.default_rng(seed)
        for _ in range(40):
            machine, n, m = random_tabular_machine(rng)
            assert entropy_capacity_bounds(machine, random_pmf(rng, n), m).holds()

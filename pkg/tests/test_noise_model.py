import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lloqkd.errors import ValidationError
from lloqkd.noise_model import (
    adc_noise,
    assemble_components,
    conventional_budget,
    detection_noise,
    leakage_noise,
    modulation_noise,
    phase_error_noise,
    reference_chi,
    trusted_budget,
)
from lloqkd.params import (
    AdcVariant,
    LeakageVariant,
    RefPoint,
    SystemParams,
    transmittance,
)

T30 = 10 ** -0.6  # transmittance of 30 km at 0.2 dB/km


def random_params(rng: random.Random) -> SystemParams:
    return SystemParams(
        V_A=rng.uniform(0.5, 20.0),
        beta=rng.uniform(0.5, 1.0),
        eta=rng.uniform(0.2, 1.0),
        v_el=rng.uniform(0.0, 0.5),
        xi_0=rng.uniform(0.0, 0.1),
        eps_0=rng.uniform(0.0, 0.1),
        n_adc=rng.randint(6, 16),
        d_dB=rng.uniform(20.0, 60.0),
        R_e_dB=rng.uniform(20.0, 60.0),
        R_p_dB=rng.uniform(20.0, 60.0),
        E_R2=rng.uniform(100.0, 1e5),
        alpha=rng.uniform(0.15, 0.3),
        leakage_variant=rng.choice(list(LeakageVariant)),
        adc_variant=rng.choice(list(AdcVariant)),
        ref_point=rng.choice(list(RefPoint)),
    ).validate()


class TestModulationNoise:
    def test_reference_value(self):
        assert modulation_noise(4.0, 40.0) == pytest.approx(0.004, rel=1e-12)

    def test_zero_modulation(self):
        assert modulation_noise(0.0, 40.0) == 0.0

    def test_perfect_modulator_limit(self):
        assert modulation_noise(4.0, 300.0) < 1e-25

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            modulation_noise(-1.0, 40.0)
        with pytest.raises(ValidationError):
            modulation_noise(4.0, -1.0)


class TestLeakageNoise:
    def test_sum_variant(self):
        got = leakage_noise(1000.0, 1e4, 1e3, LeakageVariant.SUM)
        assert got == pytest.approx(2000.0 / 11000.0, rel=1e-12)
        assert got == pytest.approx(0.181818, abs=1e-6)

    def test_product_variant(self):
        got = leakage_noise(1000.0, 1e4, 1e3, LeakageVariant.PRODUCT)
        assert got == pytest.approx(2.0e-4, rel=1e-12)

    def test_no_reference_light(self):
        for variant in LeakageVariant:
            assert leakage_noise(0.0, 1e4, 1e3, variant) == 0.0

    def test_zero_denominator_rejected(self):
        with pytest.raises(ValidationError):
            leakage_noise(1000.0, 0.0, 1e3, LeakageVariant.SUM)


class TestAdcNoise:
    def test_single_exponent(self):
        assert adc_noise(4.0, 10, AdcVariant.TWO_POW_N) == pytest.approx(
            40.0 / 12288.0, rel=1e-12
        )

    def test_double_exponent(self):
        assert adc_noise(4.0, 10, AdcVariant.TWO_POW_2N) == pytest.approx(
            40.0 / (12.0 * 2**20), rel=1e-12
        )
        assert adc_noise(4.0, 10, AdcVariant.TWO_POW_2N) == pytest.approx(
            3.17891e-6, abs=1e-10
        )

    def test_zero_signal(self):
        assert adc_noise(0.0, 10) == 0.0

    def test_invalid_bits(self):
        with pytest.raises(ValidationError):
            adc_noise(4.0, 0)


class TestReferenceChi:
    def test_30km_reference_values(self):
        chi_ref, chi_U, chi_T = reference_chi(T30, 0.01, 0.5, 0.1)
        assert chi_T == pytest.approx(3.4, rel=1e-12)
        assert chi_U == pytest.approx(1.0 / T30 - 1.0 + 0.01, rel=1e-12)
        assert chi_U == pytest.approx(2.99107, abs=1e-5)
        assert chi_ref == pytest.approx(chi_U + chi_T / T30, rel=1e-12)
        assert chi_ref == pytest.approx(16.5267, abs=1e-4)

    def test_ideal_heterodyne_vacuum_unit(self):
        chi_ref, chi_U, chi_T = reference_chi(1.0, 0.0, 1.0, 0.0)
        assert chi_U == 0.0
        assert chi_T == 1.0
        assert chi_ref == 1.0

    def test_lossless_channel(self):
        chi_ref, chi_U, chi_T = reference_chi(1.0, 0.0, 0.5, 0.1)
        assert chi_U == 0.0
        assert chi_T == pytest.approx(3.4, rel=1e-12)
        assert chi_ref == pytest.approx(3.4, rel=1e-12)

    def test_zero_transmittance_rejected(self):
        with pytest.raises(ValidationError):
            reference_chi(0.0, 0.01, 0.5, 0.1)


class TestPhaseErrorNoise:
    def test_30km_reference_values(self):
        chi_ref, _, chi_T = reference_chi(T30, 0.01, 0.5, 0.1)
        xi_error, xi_error_U, xi_error_T = phase_error_noise(
            4.0, chi_ref, chi_T, T30, 1000.0
        )
        assert xi_error == pytest.approx(0.0701069, abs=1e-7)
        assert xi_error_T == pytest.approx(0.0136, rel=1e-12)
        assert xi_error_U == pytest.approx(0.0159643, abs=1e-7)

    def test_split_identity(self):
        rng = random.Random(1)
        for _ in range(200):
            T = rng.uniform(0.01, 1.0)
            chi_ref, _, chi_T = reference_chi(
                T, rng.uniform(0, 0.2), rng.uniform(0.1, 1.0), rng.uniform(0, 0.5)
            )
            xi_error, xi_error_U, xi_error_T = phase_error_noise(
                rng.uniform(0.1, 20), chi_ref, chi_T, T, rng.uniform(10, 1e6)
            )
            assert xi_error == pytest.approx(
                xi_error_U + xi_error_T / T, rel=1e-12
            )

    def test_no_modulation(self):
        chi_ref, _, chi_T = reference_chi(T30, 0.01, 0.5, 0.1)
        assert phase_error_noise(0.0, chi_ref, chi_T, T30, 1000.0) == (0.0, 0.0, 0.0)

    def test_bright_reference_limit(self):
        chi_ref, _, chi_T = reference_chi(T30, 0.01, 0.5, 0.1)
        xi_error, xi_error_U, xi_error_T = phase_error_noise(
            4.0, chi_ref, chi_T, T30, 1e12
        )
        assert xi_error < 1e-10
        assert xi_error_U < 1e-10
        assert xi_error_T < 1e-10

    def test_invalid_reference_intensity(self):
        with pytest.raises(ValidationError):
            phase_error_noise(4.0, 16.5, 3.4, T30, 0.0)

    def test_monotone_in_reference_intensity(self):
        chi_ref, _, chi_T = reference_chi(T30, 0.01, 0.5, 0.1)
        values = [
            phase_error_noise(4.0, chi_ref, chi_T, T30, e2)[0]
            for e2 in (100.0, 500.0, 1000.0, 5e3, 1e5)
        ]
        assert all(a > b for a, b in zip(values, values[1:]))


class TestAssembleComponents:
    def test_canonical_30km_total(self):
        # frozen from a 60-digit evaluation of the component formulas
        params = SystemParams(
            leakage_variant=LeakageVariant.PRODUCT,
            ref_point=RefPoint.AT_ALICE,
            adc_variant=AdcVariant.TWO_POW_2N,
        )
        c = assemble_components(params, T30)
        assert c.xi_tot == pytest.approx(0.0843100409318, rel=1e-10)
        assert c.xi_AM == pytest.approx(0.004, rel=1e-12)
        assert c.xi_LE == pytest.approx(2.0e-4, rel=1e-12)
        assert c.xi_error == pytest.approx(0.0701068620174, rel=1e-10)

    def test_back_propagated_reference(self):
        at_bob = SystemParams(
            leakage_variant=LeakageVariant.PRODUCT, ref_point=RefPoint.AT_BOB
        )
        c = assemble_components(at_bob, T30)
        expected = 2.0 * (1000.0 / (T30 * 0.5)) / 1e7
        assert c.xi_LE == pytest.approx(expected, rel=1e-12)

    def test_resummation_oracle(self):
        rng = random.Random(42)
        for _ in range(100):
            params = random_params(rng)
            T = transmittance(rng.uniform(0.0, 80.0), params.alpha)
            c = assemble_components(params, T)
            total = c.xi_0 + c.xi_AM + c.xi_LE + c.xi_ADC + c.xi_error
            assert c.xi_tot == total  # assembled exactly as the sum
            assert c.xi_drift == 0.0 and c.xi_channel == 0.0

    def test_noiseless_limit(self):
        params = SystemParams(
            xi_0=0.0,
            eps_0=0.0,
            d_dB=300.0,
            n_adc=60,
            R_e_dB=300.0,
            R_p_dB=300.0,
            E_R2=1e12,
            adc_variant=AdcVariant.TWO_POW_2N,
        )
        c = assemble_components(params, 1.0)
        assert c.xi_tot < 1e-9

    def test_all_components_nonnegative(self):
        rng = random.Random(7)
        for _ in range(100):
            params = random_params(rng)
            c = assemble_components(params, transmittance(rng.uniform(0, 100), params.alpha))
            for name in ("xi_AM", "xi_LE", "xi_ADC", "xi_0", "xi_error",
                         "xi_error_U", "xi_error_T", "xi_tot", "chi_U", "chi_T"):
                assert getattr(c, name) >= 0, name


class TestBudgets:
    def test_ideal_system(self):
        from lloqkd.noise_model import NoiseComponents

        params = SystemParams(eta=1.0, v_el=0.0)
        zeros = NoiseComponents(
            xi_AM=0.0, xi_LE=0.0, xi_ADC=0.0, xi_0=0.0, xi_error=0.0,
            xi_error_U=0.0, xi_error_T=0.0, chi_ref=1.0, chi_U=0.0, chi_T=1.0,
            xi_tot=0.0,
        )
        budget = conventional_budget(zeros, params, 1.0)
        assert budget.chi_line == 0.0
        assert budget.chi_het == 1.0
        assert budget.chi_tot == 1.0

    def test_30km_conventional(self):
        params = SystemParams(
            leakage_variant=LeakageVariant.PRODUCT,
            ref_point=RefPoint.AT_ALICE,
            adc_variant=AdcVariant.TWO_POW_2N,
        )
        c = assemble_components(params, T30)
        budget = conventional_budget(c, params, T30)
        assert budget.chi_het == pytest.approx(3.4, rel=1e-12)
        assert budget.chi_line == pytest.approx(1.0 / T30 - 1.0 + c.xi_tot, rel=1e-12)
        assert budget.chi_tot == pytest.approx(
            budget.chi_line + budget.chi_het / T30, rel=1e-12
        )

    def test_30km_trusted_detection_noise(self):
        params = SystemParams(
            leakage_variant=LeakageVariant.PRODUCT,
            ref_point=RefPoint.AT_ALICE,
            adc_variant=AdcVariant.TWO_POW_2N,
        )
        c = assemble_components(params, T30)
        budget = trusted_budget(c, params, T30)
        assert budget.chi_het == pytest.approx(3.4136, rel=1e-12)

    def test_no_trusted_noise_collapses_to_conventional(self):
        params = SystemParams(V_A=0.0)  # no modulation -> xi_error_T = 0
        c = assemble_components(params, T30)
        conv = conventional_budget(c, params, T30)
        tr = trusted_budget(c, params, T30)
        assert tr.chi_line == conv.chi_line
        assert tr.chi_het == conv.chi_het

    def test_reclassification_invariance(self):
        rng = random.Random(3)
        for _ in range(200):
            params = random_params(rng)
            T = transmittance(rng.uniform(0.0, 80.0), params.alpha)
            c = assemble_components(params, T)
            conv = conventional_budget(c, params, T)
            tr = trusted_budget(c, params, T)
            assert tr.chi_tot == pytest.approx(conv.chi_tot, rel=1e-12)


@given(
    eta=st.floats(min_value=0.05, max_value=1.0),
    v_el=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=100, deadline=None)
def test_detection_noise_at_least_vacuum(eta, v_el):
    # heterodyne always pays at least the one-unit vacuum penalty
    assert detection_noise(eta, v_el) >= 1.0

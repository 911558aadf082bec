import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lloqkd.errors import ValidationError
from lloqkd.params import (
    ChannelPoint,
    SystemParams,
    db_to_linear,
    parse_overrides,
    transmittance,
)


class TestDbToLinear:
    def test_identity(self):
        assert db_to_linear(0.0) == 1.0

    def test_powers_of_ten(self):
        assert db_to_linear(40.0) == pytest.approx(10000.0, rel=1e-12)
        assert db_to_linear(30.0) == pytest.approx(1000.0, rel=1e-12)

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError):
            db_to_linear(float("nan"))
        with pytest.raises(ValidationError):
            db_to_linear(float("inf"))

    @given(
        st.floats(min_value=-100, max_value=100),
        st.floats(min_value=-100, max_value=100),
    )
    @settings(max_examples=200, deadline=None)
    def test_additive_in_db(self, a, b):
        assert db_to_linear(a + b) == pytest.approx(
            db_to_linear(a) * db_to_linear(b), rel=1e-12
        )


class TestTransmittance:
    def test_zero_distance(self):
        assert transmittance(0.0, 0.2) == 1.0

    def test_30km(self):
        assert transmittance(30.0, 0.2) == pytest.approx(10 ** -0.6, rel=1e-15)
        assert transmittance(30.0, 0.2) == pytest.approx(0.251189, abs=1e-6)

    def test_50km(self):
        assert transmittance(50.0, 0.2) == pytest.approx(0.1, rel=1e-12)

    def test_negative_rejected(self):
        with pytest.raises(ValidationError) as exc:
            transmittance(-1.0, 0.2)
        assert "distance_km" in exc.value.fields
        with pytest.raises(ValidationError):
            transmittance(10.0, -0.2)

    def test_strictly_decreasing(self):
        values = [transmittance(d, 0.2) for d in range(0, 120, 5)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert all(0 < v <= 1 for v in values)


class TestSystemParams:
    def test_defaults_are_valid(self):
        params = SystemParams().validate()
        assert params.V_A == 4.0
        assert params.beta == 0.95
        assert params.eta == 0.5
        assert params.v_el == 0.1
        assert params.xi_0 == 0.01
        assert params.n_adc == 10
        assert params.d_dB == 40.0
        assert params.R_e_dB == 40.0
        assert params.R_p_dB == 30.0
        assert params.E_R2 == 1000.0
        assert params.alpha == 0.2

    def test_out_of_range_named(self):
        with pytest.raises(ValidationError) as exc:
            SystemParams(eta=1.5).validate()
        assert exc.value.fields == ["eta"]

    def test_zero_reference_intensity_named(self):
        with pytest.raises(ValidationError) as exc:
            SystemParams(E_R2=0.0).validate()
        assert exc.value.fields == ["E_R2"]

    def test_all_violations_reported(self):
        with pytest.raises(ValidationError) as exc:
            SystemParams(eta=0.0, beta=2.0, v_el=-1.0).validate()
        assert set(exc.value.fields) == {"eta", "beta", "v_el"}

    def test_n_adc_must_be_positive_integer(self):
        with pytest.raises(ValidationError):
            SystemParams(n_adc=0).validate()
        SystemParams(n_adc=1).validate()

    def test_dict_round_trip(self):
        params = SystemParams().validate()
        assert SystemParams.from_dict(params.to_dict()) == params

    def test_json_round_trip(self, tmp_path):
        params = SystemParams(V_A=6.0, alpha=0.18).validate()
        path = tmp_path / "params.json"
        params.to_json(path)
        assert SystemParams.from_json(path) == params

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValidationError) as exc:
            SystemParams.from_dict({"V_A": 4.0, "bogus": 1, "extra": 2})
        assert exc.value.fields == ["bogus", "extra"]

    def test_replace_coerces_enum_strings(self):
        params = SystemParams().replace(leakage_variant="product", V_A="5")
        assert params.leakage_variant.value == "PRODUCT"
        assert params.V_A == 5.0

    def test_config_must_be_object(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(ValidationError):
            SystemParams.from_json(path)


class TestParseOverrides:
    def test_basic(self):
        out = parse_overrides(["V_A=5", "n_adc=12", "ref_point=at_alice"])
        assert out["V_A"] == 5.0
        assert out["n_adc"] == 12
        assert out["ref_point"].value == "AT_ALICE"

    def test_malformed(self):
        with pytest.raises(ValidationError):
            parse_overrides(["V_A"])

    def test_unknown_field(self):
        with pytest.raises(ValidationError):
            parse_overrides(["nope=3"])

    def test_bad_number(self):
        with pytest.raises(ValidationError):
            parse_overrides(["V_A=abc"])

    def test_bad_enum_value(self):
        with pytest.raises(ValidationError):
            parse_overrides(["adc_variant=WRONG"])

    def test_non_integer_n_adc(self):
        with pytest.raises(ValidationError):
            parse_overrides(["n_adc=10.5"])


class TestChannelPoint:
    def test_from_distance(self):
        point = ChannelPoint.from_distance(30.0, 0.2)
        assert point.T == pytest.approx(10 ** -0.6, rel=1e-15)

    def test_invalid(self):
        with pytest.raises(ValidationError):
            ChannelPoint(distance_km=-1.0, T=0.5)
        with pytest.raises(ValidationError):
            ChannelPoint(distance_km=1.0, T=0.0)
        with pytest.raises(ValidationError):
            ChannelPoint(distance_km=1.0, T=1.5)

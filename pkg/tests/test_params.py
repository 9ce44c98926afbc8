import math

import pytest
from hypothesis import given, strategies as st

from bandpart import (
    EBN0_INFINITE,
    EbN0,
    InfeasibleError,
    LinkBudget,
    b_of_partition,
    beta_of_b,
    eb_n0_of,
    integer_partition_of_b,
)


def make_budget(**kw):
    base = dict(
        rate_R=1e6, bandwidth_W=10e6, power_rho=1e-2,
        noise_density_N0=1e-6, distance_d=10.0,
        pathloss_alpha=4.0, outage_eps=0.1,
    )
    base.update(kw)
    return LinkBudget(**base)


class TestLinkBudget:
    def test_received_power(self):
        b = make_budget()
        assert b.received_power == pytest.approx(1e-2 * 10.0 ** -4)

    @pytest.mark.parametrize("field,value", [
        ("rate_R", 0.0), ("bandwidth_W", -1.0), ("power_rho", 0.0),
        ("noise_density_N0", -1e-9), ("distance_d", 0.0),
        ("pathloss_alpha", 2.0), ("outage_eps", 0.0), ("outage_eps", 1.0),
    ])
    def test_rejects_bad_fields(self, field, value):
        with pytest.raises(ValueError):
            make_budget(**{field: value})


class TestEbN0:
    def test_db_round_trip(self):
        assert EbN0.from_db(10.0).value_linear == pytest.approx(10.0)
        assert EbN0.from_db(0.0).value_db == pytest.approx(0.0)

    @given(st.floats(min_value=-30.0, max_value=60.0))
    def test_db_linear_inverse(self, db):
        assert EbN0.from_db(db).value_db == pytest.approx(db, abs=1e-9)

    def test_noiseless_budget_is_infinite(self):
        eb = eb_n0_of(make_budget(noise_density_N0=0.0))
        assert eb.is_infinite
        assert eb is not None and eb.value_linear == EBN0_INFINITE.value_linear

    def test_of_budget_matches_definition(self):
        b = make_budget()
        expected = b.received_power / (b.noise_density_N0 * b.rate_R)
        assert eb_n0_of(b).value_linear == pytest.approx(expected)

    def test_feasibility_floor(self):
        EbN0(math.log(2.0) * 1.01).require_feasible()
        with pytest.raises(InfeasibleError):
            EbN0(math.log(2.0)).require_feasible()
        # the floor sits at -1.59 dB
        assert EbN0(math.log(2.0)).value_db == pytest.approx(-1.59, abs=0.01)


class TestSpectralEfficiency:
    def test_threshold_values(self):
        assert beta_of_b(1.0) == pytest.approx(1.0)
        assert beta_of_b(2.0) == pytest.approx(3.0)

    @given(st.floats(min_value=1e-6, max_value=30.0))
    def test_threshold_is_exp_minus_one(self, b):
        assert beta_of_b(b) == pytest.approx(2.0 ** b - 1.0, rel=1e-12)

    def test_partition_to_b(self):
        # 60 MHz / 10 Mbps split eight ways concentrates to 4/3 bps/Hz
        budget = make_budget(rate_R=10e6, bandwidth_W=60e6)
        assert b_of_partition(budget, 8) == pytest.approx(4.0 / 3.0)

    def test_integer_partition_rounds_to_denser_side(self):
        # b* = 0.5 at R/W = 0.1 lands exactly on N = 5
        budget = make_budget(power_rho=1e4)  # Eb/N0 = 0 dB
        assert integer_partition_of_b(budget, 0.5) == 5

    def test_integer_partition_interior(self):
        budget = make_budget(noise_density_N0=0.0)
        assert integer_partition_of_b(budget, 2.2991138170001095) == 23

import math

import numpy as np
import pytest

from qel.constants import CODATA
from qel.decoherence import (
    Channel,
    ChannelParams,
    RatePair,
    channel_rates,
    coherence_decay,
    crossover_length,
    gamma_of_separation,
)
from qel.errors import DomainError


def lab_params(**overrides):
    base = dict(
        pressure=1e-8,
        gas_particle_mass=4.8e-26,
        mean_velocity=500.0,
        radius=1e-7,
        temperature_internal=300.0,
        temperature_external=300.0,
        dielectric=2.1 + 0.25j,
    )
    base.update(overrides)
    return ChannelParams(**base)


# Frozen outputs of an independent 50-digit mpmath evaluation of the same
# closed forms (CODATA hbar/k_B/c, P=1e-8, m_p=4.8e-26, v=500, R=1e-7,
# T=300, eps=2.1+0.25j).
ORACLE = {
    Channel.COLLISIONS: (8.3283114641677993329e23, 303.10138472648154218),
    Channel.BLACKBODY_SCATTERING: (2861724394679414.9804, 767147.6443129923869),
    Channel.BLACKBODY_ABSORPTION: (1745645735612917543.3, 467958415.69170076305),
    Channel.BLACKBODY_EMISSION: (1745645735612917543.3, 467958415.69170076305),
}


def mpmath_rates(channel, params):
    """Recompute the Table closed forms in 50-digit arithmetic."""
    from mpmath import factorial, im, mp, mpc, mpf, pi, re, sqrt, zeta

    mp.dps = 50
    hbar = mpf("6.62607015e-34") / (2 * pi)
    kB = mpf("1.380649e-23")
    c = mpf("299792458.0")
    R = mpf(repr(params.radius))
    if channel is Channel.COLLISIONS:
        P = mpf(repr(params.pressure))
        m_p = mpf(repr(params.gas_particle_mass))
        v = mpf(repr(params.mean_velocity))
        lam = 8 * sqrt(2 * pi) * m_p * v * P * R**2 / (3 * sqrt(3) * hbar**2)
        gam = 16 * pi * sqrt(2 * pi) * P * R**2 / (sqrt(3) * v * m_p)
        return float(lam), float(gam)
    eps = mpc(repr(params.dielectric.real), repr(params.dielectric.imag))
    cm = (eps - 1) / (eps + 2)
    if channel is Channel.BLACKBODY_SCATTERING:
        th = kB * mpf(repr(params.temperature_external)) / (hbar * c)
        lam = factorial(8) * (8 * zeta(9) / (9 * pi)) * R**6 * c * re(cm) ** 2 * th**9
        gam = factorial(8) * (8 * zeta(9) * pi ** (mpf(1) / 3) / 9) * R**6 * c * re(cm) ** 2 * th**7
        return float(lam), float(gam)
    T = (
        params.temperature_external
        if channel is Channel.BLACKBODY_ABSORPTION
        else params.temperature_internal
    )
    th = kB * mpf(repr(T)) / (hbar * c)
    lam = (16 * pi**5 / 189) * R**3 * c * im(cm) * th**6
    gam = (16 * pi**6 * pi ** (mpf(1) / 3) / 189) * R**3 * c * im(cm) * th**4
    return float(lam), float(gam)


class TestChannelRates:
    def test_collisions_off_at_zero_pressure(self):
        rates = channel_rates(Channel.COLLISIONS, lab_params(pressure=0.0))
        assert rates.Lambda == 0.0 and rates.gamma == 0.0

    @pytest.mark.parametrize("channel", list(Channel))
    def test_matches_frozen_high_precision_oracle(self, channel):
        rates = channel_rates(channel, lab_params())
        lam_ref, gam_ref = ORACLE[channel]
        assert rates.Lambda == pytest.approx(lam_ref, rel=1e-10)
        assert rates.gamma == pytest.approx(gam_ref, rel=1e-10)

    @pytest.mark.parametrize("channel", list(Channel))
    def test_matches_live_mpmath_oracle(self, channel):
        rates = channel_rates(channel, lab_params())
        lam_ref, gam_ref = mpmath_rates(channel, lab_params())
        assert rates.Lambda == pytest.approx(lam_ref, rel=1e-10)
        assert rates.gamma == pytest.approx(gam_ref, rel=1e-10)

    def test_scattering_temperature_ninth_power(self):
        hot = channel_rates(Channel.BLACKBODY_SCATTERING, lab_params(temperature_external=300.0))
        cold = channel_rates(Channel.BLACKBODY_SCATTERING, lab_params(temperature_external=150.0))
        assert hot.Lambda / cold.Lambda == pytest.approx(2**9, rel=1e-12)

    @pytest.mark.parametrize(
        "channel, field, exponent",
        [
            (Channel.BLACKBODY_SCATTERING, "Lambda", 9),
            (Channel.BLACKBODY_SCATTERING, "gamma", 7),
            (Channel.BLACKBODY_ABSORPTION, "Lambda", 6),
            (Channel.BLACKBODY_ABSORPTION, "gamma", 4),
        ],
    )
    def test_temperature_scaling_exponents(self, channel, field, exponent):
        hot = channel_rates(channel, lab_params(temperature_external=600.0, temperature_internal=600.0))
        cold = channel_rates(channel, lab_params())
        assert getattr(hot, field) / getattr(cold, field) == pytest.approx(2**exponent, rel=1e-12)

    def test_geometry_scaling(self):
        base = lab_params()
        big = lab_params(radius=2e-7)
        coll = channel_rates(Channel.COLLISIONS, base)
        coll_big = channel_rates(Channel.COLLISIONS, big)
        assert coll_big.Lambda / coll.Lambda == pytest.approx(4.0, rel=1e-12)
        sc = channel_rates(Channel.BLACKBODY_SCATTERING, base)
        sc_big = channel_rates(Channel.BLACKBODY_SCATTERING, big)
        assert sc_big.Lambda / sc.Lambda == pytest.approx(2**6, rel=1e-12)
        ae = channel_rates(Channel.BLACKBODY_EMISSION, base)
        ae_big = channel_rates(Channel.BLACKBODY_EMISSION, big)
        assert ae_big.Lambda / ae.Lambda == pytest.approx(2**3, rel=1e-12)

    def test_pressure_scaling_is_linear(self):
        low = channel_rates(Channel.COLLISIONS, lab_params())
        high = channel_rates(Channel.COLLISIONS, lab_params(pressure=2e-8))
        assert high.Lambda / low.Lambda == pytest.approx(2.0, rel=1e-12)
        assert high.gamma / low.gamma == pytest.approx(2.0, rel=1e-12)

    def test_emission_uses_internal_temperature(self):
        params = lab_params(temperature_internal=100.0, temperature_external=300.0)
        emis = channel_rates(Channel.BLACKBODY_EMISSION, params)
        absn = channel_rates(Channel.BLACKBODY_ABSORPTION, params)
        assert absn.Lambda / emis.Lambda == pytest.approx(3**6, rel=1e-12)

    def test_invalid_params_name_invariant(self):
        with pytest.raises(DomainError, match="pressure"):
            lab_params(pressure=-1.0)
        with pytest.raises(DomainError, match="radius"):
            lab_params(radius=0.0)
        with pytest.raises(DomainError, match="eps != -2"):
            lab_params(dielectric=-2.0 + 0.0j)

    def test_negative_absorptive_response_rejected(self):
        with pytest.raises(DomainError, match="Im"):
            channel_rates(Channel.BLACKBODY_ABSORPTION, lab_params(dielectric=2.1 - 0.25j))


class TestGammaOfSeparation:
    def setup_method(self):
        self.rates = channel_rates(Channel.COLLISIONS, lab_params())

    def test_zero_separation(self):
        assert gamma_of_separation(self.rates, 0.0) == 0.0

    def test_crossover_value(self):
        xc = crossover_length(self.rates)
        expected = self.rates.gamma * (1.0 - math.exp(-1.0))
        assert gamma_of_separation(self.rates, xc) == pytest.approx(expected, rel=1e-12)

    def test_saturation(self):
        xc = crossover_length(self.rates)
        assert gamma_of_separation(self.rates, 1e3 * xc) == pytest.approx(
            self.rates.gamma, rel=1e-12
        )

    def test_negative_separation_rejected(self):
        with pytest.raises(DomainError, match="dx >= 0"):
            gamma_of_separation(self.rates, -1e-9)

    def test_switched_off_rates_give_zero(self):
        assert gamma_of_separation(RatePair(0.0, 1.0), 1.0) == 0.0
        assert gamma_of_separation(RatePair(1.0, 0.0), 1.0) == 0.0

    def test_monotone_in_separation(self):
        xc = crossover_length(self.rates)
        seps = np.geomspace(1e-4 * xc, 1e4 * xc, 200)
        values = [gamma_of_separation(self.rates, dx) for dx in seps]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert all(v <= self.rates.gamma for v in values)

    def test_quadratic_asymptote(self):
        xc = crossover_length(self.rates)
        for dx in np.geomspace(1e-6 * xc, 1e-2 * xc, 20):
            ratio = gamma_of_separation(self.rates, dx) / (self.rates.Lambda * dx * dx)
            assert abs(ratio - 1.0) < 1e-3


class TestCoherenceDecay:
    def test_no_evolution(self):
        rates = RatePair(1.0, 1.0)
        assert coherence_decay(rates, 1.0, 0.0) == 1.0

    def test_diagonal_preserved(self):
        rates = RatePair(1.0, 1.0)
        assert coherence_decay(rates, 0.0, 123.0) == 1.0

    def test_direct_exponentiation(self):
        # Gamma(dx) = 2 at saturation: gamma = 2, dx far beyond crossover
        rates = RatePair(Lambda=1e12, gamma=2.0)
        assert coherence_decay(rates, 1.0, 0.5) == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_semigroup_property(self):
        rates = channel_rates(Channel.COLLISIONS, lab_params())
        dx = crossover_length(rates)
        t1, t2 = 0.37, 1.21
        assert coherence_decay(rates, dx, t1 + t2) == pytest.approx(
            coherence_decay(rates, dx, t1) * coherence_decay(rates, dx, t2), rel=1e-12
        )

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError, match="t >= 0"):
            coherence_decay(RatePair(1.0, 1.0), 1.0, -0.1)


class TestCrossoverLength:
    def test_unit_rates(self):
        assert crossover_length(RatePair(1.0, 1.0)) == 1.0

    def test_square_root_scaling(self):
        assert crossover_length(RatePair(4.0, 1.0)) == 0.5

    def test_matches_gas_thermal_wavelength(self):
        # with v = sqrt(3 k_B T / m_p) the collisional crossover reproduces
        # the thermal length scale 2 pi hbar / sqrt(2 pi m_p k_B T)
        T = 300.0
        m_p = 4.8e-26
        v = math.sqrt(3.0 * CODATA.k_B * T / m_p)
        rates = channel_rates(Channel.COLLISIONS, lab_params(mean_velocity=v))
        reference = 2.0 * math.pi * CODATA.hbar / math.sqrt(2.0 * math.pi * m_p * CODATA.k_B * T)
        ratio = crossover_length(rates) / reference
        assert 0.1 < ratio < 10.0

    def test_no_crossover_error(self):
        with pytest.raises(DomainError, match="no crossover"):
            crossover_length(RatePair(0.0, 1.0))
        with pytest.raises(DomainError, match="no crossover"):
            crossover_length(RatePair(1.0, 0.0))

"""Channel model tests: geometry, field responses, assembly, rate bound."""

import math

import numpy as np
import pytest

from fluidmimo import (
    AntennaLayout,
    PathAngles,
    SystemParams,
    TransmitCovariance,
    assemble_channel,
    field_matrices,
    jensen_expectation,
    propagation_delta,
    rx_field_vector,
    tx_field_vector,
    upper_bound_rate,
)
from fluidmimo.channel import bound_coefficient


def make_params(wavelength=1.5, lt=3, lr=3, alpha2=None, p_dbm=30.0, n_dbm=15.0):
    return SystemParams.from_dbm(wavelength, n_dbm, p_dbm, lt, lr, alpha2)


def random_angles(rng, lt=3, lr=3):
    return PathAngles.random(lt, lr, rng)


def layout_at_origin(n, m, half_width=2.25):
    return AntennaLayout(
        tx_positions=np.zeros((n, 2)),
        rx_positions=np.zeros((m, 2)),
        tx_region_half_width=half_width,
        rx_region_half_width=half_width,
        min_spacing=0.0,
    )


def random_layout(rng, n, m, half_width=2.25, spacing=0.0):
    return AntennaLayout(
        tx_positions=rng.uniform(-half_width, half_width, (n, 2)),
        rx_positions=rng.uniform(-half_width, half_width, (m, 2)),
        tx_region_half_width=half_width,
        rx_region_half_width=half_width,
        min_spacing=spacing,
    )


class TestPropagationDelta:
    def test_origin_is_reference(self):
        assert propagation_delta((0.0, 0.0), 0.7, 2.1) == 0.0

    def test_unit_x_broadside(self):
        assert propagation_delta((1.0, 0.0), np.pi / 2, 0.0) == pytest.approx(1.0)

    def test_frozen_value(self):
        # 0.3*sin(1)*cos(2) - 0.4*cos(1), high-precision reference
        got = propagation_delta((0.3, -0.4), 1.0, 2.0)
        assert got == pytest.approx(-0.32117356885946028, abs=1e-15)

    def test_magnitude_bound(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            pos = rng.uniform(-3, 3, 2)
            theta, phi = rng.uniform(0, np.pi, 2)
            value = propagation_delta(pos, theta, phi)
            assert abs(value) <= np.linalg.norm(pos) * np.sqrt(2) + 1e-12


class TestFieldVectors:
    def test_origin_gives_all_ones(self):
        rng = np.random.default_rng(2)
        params = make_params()
        angles = random_angles(rng)
        np.testing.assert_allclose(
            tx_field_vector((0, 0), angles, params), np.ones(3), atol=1e-15
        )
        np.testing.assert_allclose(
            rx_field_vector((0, 0), angles, params), np.ones(3), atol=1e-15
        )

    def test_half_wavelength_phase(self):
        # single path straight along +x; at x = lambda/2 the phase is pi
        params = make_params(lt=1, lr=1)
        angles = PathAngles(
            tx_elevation=[np.pi / 2],
            tx_azimuth=[0.0],
            rx_elevation=[np.pi / 2],
            rx_azimuth=[0.0],
        )
        g = tx_field_vector((params.wavelength / 2, 0.0), angles, params)
        assert g[0] == pytest.approx(-1.0, abs=1e-12)
        f = rx_field_vector((params.wavelength / 4, 0.0), angles, params)
        assert f[0] == pytest.approx(1j, abs=1e-12)

    def test_matches_scalar_phase_recomputation(self):
        rng = np.random.default_rng(3)
        params = make_params()
        angles = random_angles(rng)
        pos = rng.uniform(-2, 2, 2)
        got = tx_field_vector(pos, angles, params)
        for p in range(3):
            rho = propagation_delta(pos, angles.tx_elevation[p], angles.tx_azimuth[p])
            expected = np.exp(1j * 2 * np.pi / params.wavelength * rho)
            assert got[p] == pytest.approx(expected, abs=1e-12)

    def test_unit_modulus_everywhere(self):
        rng = np.random.default_rng(4)
        params = make_params()
        for _ in range(50):
            angles = random_angles(rng)
            layout = random_layout(rng, 4, 4)
            g, f = field_matrices(layout, angles, params)
            np.testing.assert_allclose(np.abs(g), 1.0, atol=1e-12)
            np.testing.assert_allclose(np.abs(f), 1.0, atol=1e-12)


class TestFieldMatrices:
    def test_all_origin_all_ones(self):
        rng = np.random.default_rng(5)
        params = make_params()
        angles = random_angles(rng)
        g, f = field_matrices(layout_at_origin(4, 5), angles, params)
        np.testing.assert_allclose(g, np.ones((3, 4)), atol=1e-15)
        np.testing.assert_allclose(f, np.ones((3, 5)), atol=1e-15)

    def test_columns_match_per_antenna_vectors(self):
        rng = np.random.default_rng(6)
        params = make_params()
        angles = random_angles(rng)
        layout = random_layout(rng, 4, 3)
        g, f = field_matrices(layout, angles, params)
        assert g.shape == (3, 4) and f.shape == (3, 3)
        for n in range(4):
            np.testing.assert_allclose(
                g[:, n], tx_field_vector(layout.tx_positions[n], angles, params)
            )
        for m in range(3):
            np.testing.assert_allclose(
                f[:, m], rx_field_vector(layout.rx_positions[m], angles, params)
            )

    def test_single_antenna_column(self):
        rng = np.random.default_rng(7)
        params = make_params()
        angles = random_angles(rng)
        layout = random_layout(rng, 1, 1)
        g, _ = field_matrices(layout, angles, params)
        np.testing.assert_allclose(
            g[:, 0], tx_field_vector(layout.tx_positions[0], angles, params)
        )


class TestAssembleChannel:
    def test_zero_path_matrix(self):
        rng = np.random.default_rng(8)
        params = make_params()
        angles = random_angles(rng)
        g, f = field_matrices(random_layout(rng, 4, 4), angles, params)
        np.testing.assert_array_equal(
            assemble_channel(g, f, np.zeros((3, 3))), np.zeros((4, 4))
        )

    def test_all_ones_case(self):
        params = make_params(lt=1, lr=1)
        rng = np.random.default_rng(9)
        angles = random_angles(rng, lt=1, lr=1)
        g, f = field_matrices(layout_at_origin(4, 3), angles, params)
        h = assemble_channel(g, f, np.array([[1.0 + 0j]]))
        np.testing.assert_allclose(h, np.ones((3, 4)), atol=1e-15)

    def test_matches_triple_loop(self):
        rng = np.random.default_rng(10)
        params = make_params()
        angles = random_angles(rng)
        g, f = field_matrices(random_layout(rng, 4, 5), angles, params)
        sigma = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        h = assemble_channel(g, f, sigma)
        expected = np.zeros((5, 4), dtype=complex)
        for m in range(5):
            for n in range(4):
                for q in range(3):
                    for p in range(3):
                        expected[m, n] += f[q, m].conj() * sigma[q, p] * g[p, n]
        np.testing.assert_allclose(h, expected, atol=1e-12)

    def test_dimension_mismatch_raises(self):
        with pytest.raises(ValueError):
            assemble_channel(np.ones((3, 4)), np.ones((3, 4)), np.ones((3, 2)))
        with pytest.raises(ValueError):
            assemble_channel(np.ones((3, 4)), np.ones((2, 4)), np.ones((3, 3)))


class TestJensenExpectation:
    def test_identity_input(self):
        np.testing.assert_allclose(
            jensen_expectation(np.eye(4), 1.0, 3), 4.0 * np.eye(3)
        )

    def test_zero_input(self):
        np.testing.assert_array_equal(
            jensen_expectation(np.zeros((4, 4)), 0.7, 3), np.zeros((3, 3))
        )

    def test_monte_carlo_agreement(self):
        # sampled average of Sigma P Sigma^H against the closed form
        rng = np.random.default_rng(11)
        params = make_params(alpha2=1.0 / 3.0)
        x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        p = x @ x.conj().T
        draws = 100_000
        scale = math.sqrt(params.path_gain_variance / 2.0)
        sigmas = scale * (
            rng.standard_normal((draws, 3, 4)) + 1j * rng.standard_normal((draws, 3, 4))
        )
        avg = np.einsum("sqp,pk,srk->qr", sigmas, p, sigmas.conj()) / draws
        expected = jensen_expectation(p, params.path_gain_variance, 3)
        rel = np.linalg.norm(avg - expected) / np.linalg.norm(expected)
        assert rel < 0.02


class TestUpperBoundRate:
    def test_zero_covariance_gives_zero(self):
        rng = np.random.default_rng(12)
        params = make_params()
        angles = random_angles(rng)
        layout = random_layout(rng, 4, 4)
        assert upper_bound_rate(layout, angles, np.zeros((4, 4)), params) == 0.0

    def test_all_origin_closed_form(self):
        # every antenna at the origin makes the bound a rank-one log:
        # log2(1 + alpha2/sigma2 * P * L_t * N * M * L_r)
        rng = np.random.default_rng(13)
        params = make_params(alpha2=1.0 / 3.0)
        angles = random_angles(rng)
        layout = layout_at_origin(4, 4)
        n = 4
        q = TransmitCovariance(
            params.power_budget / n * np.ones((n, n)), params.power_budget
        )
        got = upper_bound_rate(layout, angles, q, params)
        assert got == pytest.approx(10.568804788916912, rel=1e-12)
        expected = math.log2(
            1.0
            + params.path_gain_variance
            / params.noise_power
            * params.power_budget
            * 3
            * 4
            * 4
            * 3
        )
        assert got == pytest.approx(expected, rel=1e-12)

    def test_matches_eigenvalue_evaluation(self):
        rng = np.random.default_rng(14)
        params = make_params()
        for _ in range(20):
            angles = random_angles(rng)
            layout = random_layout(rng, 4, 4)
            x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            q = x @ x.conj().T
            q *= params.power_budget / np.trace(q).real
            got = upper_bound_rate(layout, angles, q, params)
            g, f = field_matrices(layout, angles, params)
            a = bound_coefficient(g, q, params)
            eig = np.linalg.eigvalsh(np.eye(4) + a * (f.conj().T @ f))
            expected = float(np.sum(np.log2(eig)))
            assert got == pytest.approx(expected, rel=1e-9)
            assert got >= 0.0

    def test_invariant_under_antenna_relabeling(self):
        rng = np.random.default_rng(15)
        params = make_params()
        angles = random_angles(rng)
        layout = random_layout(rng, 4, 4)
        x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        q = x @ x.conj().T
        q *= params.power_budget / np.trace(q).real
        base = upper_bound_rate(layout, angles, q, params)
        perm = np.random.default_rng(16).permutation(4)
        permuted = layout.replace_positions(
            tx_positions=layout.tx_positions[perm],
            rx_positions=layout.rx_positions[np.roll(np.arange(4), 1)],
        )
        q_perm = q[np.ix_(perm, perm)]
        assert upper_bound_rate(permuted, angles, q_perm, params) == pytest.approx(
            base, rel=1e-12
        )

    def test_non_finite_input_rejected(self):
        rng = np.random.default_rng(17)
        params = make_params()
        angles = random_angles(rng)
        layout = random_layout(rng, 4, 4)
        q = np.zeros((4, 4))
        q[0, 0] = np.nan
        with pytest.raises(ValueError):
            upper_bound_rate(layout, angles, q, params)


class TestCovarianceContainer:
    def test_rejects_non_hermitian(self):
        q = np.eye(4, dtype=complex)
        q[0, 1] = 1e-6
        with pytest.raises(ValueError, match="Hermitian"):
            TransmitCovariance(q, 10.0)

    def test_rejects_indefinite(self):
        q = np.diag([1.0, -0.5, 0.2, 0.1]).astype(complex)
        with pytest.raises(ValueError, match="PSD"):
            TransmitCovariance(q, 10.0)

    def test_rejects_trace_over_budget(self):
        with pytest.raises(ValueError, match="trace"):
            TransmitCovariance(np.eye(4, dtype=complex), 3.9)

    def test_accepts_valid(self):
        q = TransmitCovariance(np.eye(4, dtype=complex), 4.0)
        assert q.trace == pytest.approx(4.0)
        assert q.num_tx == 4

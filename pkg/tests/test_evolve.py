"""Solver tests: config validation, the exact Galerkin cubic, tendency
algebra, conservation and fixed points, local step order, snapshot
bookkeeping, blow-up reporting, and the gauge maps."""
import numpy as np
import pytest

from remkdv.evolve import (
    BlowUpError,
    ModelConfig,
    SimulationState,
    cubic_coefficients,
    gauge_backward,
    gauge_forward,
    rhs,
    rhs_split,
    simulate,
    step,
)
from remkdv.fields import FourierField, deriv_multiplier


def _random_real(K, seed=0, scale=0.1):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(2 * K + 1) + 1j * rng.standard_normal(2 * K + 1)
    return FourierField(scale * c).hermitized()


def _single_mode(K, eps, k=1):
    c = np.zeros(2 * K + 1, dtype=np.complex128)
    c[K + k] = eps / 2.0
    c[K - k] = eps / 2.0
    return FourierField(c)


def _cfg(**kw):
    base = dict(max_mode=32, dt=1e-3, t_final=1e-2)
    base.update(kw)
    return ModelConfig(**base)


class TestModelConfig:
    @pytest.mark.parametrize("bad", [
        dict(max_mode=0),
        dict(max_mode=-4),
        dict(dt=0.0),
        dict(dt=-1e-3),
        dict(t_final=-0.1),
        dict(sign=0),
        dict(sign=2),
        dict(integrator="euler"),
    ])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            _cfg(**bad)

    def test_integrator_case_insensitive(self):
        assert _cfg(integrator="IFRK4").integrator == "IFRK4"

    def test_frozen(self):
        cfg = _cfg()
        with pytest.raises(Exception):
            cfg.dt = 2e-3


class TestCubic:
    def test_matches_triple_convolution(self):
        K = 6
        u = _random_real(K, seed=3, scale=1.0)
        got = cubic_coefficients(u)
        ks = np.arange(-K, K + 1)
        want = np.zeros(2 * K + 1, dtype=np.complex128)
        for i, k1 in enumerate(ks):
            for j, k2 in enumerate(ks):
                for l, k3 in enumerate(ks):
                    k = k1 + k2 + k3
                    if abs(k) <= K:
                        want[K + k] += u.coeffs[i] * u.coeffs[j] * u.coeffs[l]
        assert np.max(np.abs(got.coeffs - want)) <= 1e-12 * np.max(np.abs(want))

    def test_single_cosine_closed_form(self):
        # cos^3 = (3 cos + cos 3.)/4, so modes +-1 carry 3/8 and +-3 carry 1/8
        K = 8
        u = _single_mode(K, 1.0)
        got = cubic_coefficients(u)
        want = np.zeros(2 * K + 1, dtype=np.complex128)
        want[K + 1] = want[K - 1] = 3.0 / 8.0
        want[K + 3] = want[K - 3] = 1.0 / 8.0
        assert np.max(np.abs(got.coeffs - want)) <= 1e-14

    def test_dealias_false_aliases(self):
        # on the short 2K+1 grid the cube wraps around; a generic field must
        # come out different from the exact Galerkin truncation
        K = 8
        u = _random_real(K, seed=1, scale=1.0)
        exact = cubic_coefficients(u, dealias=True)
        aliased = cubic_coefficients(u, dealias=False)
        assert np.max(np.abs(exact.coeffs - aliased.coeffs)) > 1e-3

    def test_real_in_real_out(self):
        u = _random_real(12, seed=5, scale=1.0)
        cubic_coefficients(u).require_real()


class TestRhsSplit:
    def test_b_is_resonant_diagonal(self):
        u = _random_real(16, seed=2)
        _, b = rhs_split(u)
        d = deriv_multiplier(u.modes)
        want = -3.0 * d * np.abs(u.coeffs) ** 2 * u.coeffs
        assert np.max(np.abs(b.coeffs - want)) <= 1e-15

    def test_split_reassembles_transport(self):
        # A + B = d/dx (u^3 - 3 P0(u^2) u), the renormalized transport term
        u = _random_real(16, seed=4)
        a, b = rhs_split(u)
        d = deriv_multiplier(u.modes)
        cub = cubic_coefficients(u)
        want = d * (cub.coeffs - 3.0 * u.mass() * u.coeffs)
        got = a.coeffs + b.coeffs
        assert np.max(np.abs(got - want)) <= 1e-14 * max(np.max(np.abs(want)), 1.0)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_rhs_is_dispersion_minus_signed_transport(self, sign):
        u = _random_real(16, seed=6)
        cfg = _cfg(max_mode=16, sign=sign)
        a, b = rhs_split(u)
        d = deriv_multiplier(u.modes)
        lin = -(d ** 3) * u.coeffs
        want = lin - sign * (a.coeffs + b.coeffs)
        got = rhs(u, cfg).coeffs
        assert np.max(np.abs(got - want)) <= 1e-12 * np.max(np.abs(want))

    @pytest.mark.parametrize("sign", [1, -1])
    def test_plain_vs_renormalized_offset(self, sign):
        # dropping the mean-correction changes the tendency by
        # +3 sign P0(u^2) d/dx u exactly
        u = _random_real(16, seed=7)
        plain = rhs(u, _cfg(max_mode=16, sign=sign, renormalized=False))
        renorm = rhs(u, _cfg(max_mode=16, sign=sign, renormalized=True))
        d = deriv_multiplier(u.modes)
        diff = plain.coeffs - renorm.coeffs
        want = -3.0 * sign * u.mass() * d * u.coeffs
        assert np.max(np.abs(diff - want)) <= 1e-12 * np.max(np.abs(want))

    def test_constant_field_zero_tendency(self):
        # FFT roundoff leaves ~1e-16 in the off-diagonal modes of the cube
        c = np.zeros(2 * 8 + 1, dtype=np.complex128)
        c[8] = 0.7
        u = FourierField(c)
        a, b = rhs_split(u)
        assert np.max(np.abs(a.coeffs)) <= 1e-13
        assert np.all(b.coeffs == 0.0)
        assert np.max(np.abs(rhs(u, _cfg(max_mode=8)).coeffs)) <= 1e-13

    def test_rhs_real_in_real_out(self):
        u = _random_real(16, seed=8)
        rhs(u, _cfg(max_mode=16)).require_real()


class TestStep:
    def test_max_mode_mismatch(self):
        state = SimulationState(0.0, _random_real(8))
        with pytest.raises(ValueError):
            step(state, _cfg(max_mode=16))

    def test_constant_field_is_fixed_point(self):
        # the mean is pinned bitwise; the zero modes may collect FFT
        # roundoff from the cube of the constant, nothing more
        c = np.zeros(2 * 16 + 1, dtype=np.complex128)
        c[16] = 0.3
        u = FourierField(c)
        res = simulate(u, _cfg(max_mode=16, dt=1e-2, t_final=0.1))
        assert res.final.field.mode(0) == 0.3
        assert np.max(np.abs(res.final.field.coeffs - u.coeffs)) <= 1e-15

    def test_mean_pinned_exactly(self):
        u = _random_real(32, seed=9) + _single_mode(32, 0.0)  # keep real
        c = u.coeffs.copy()
        c[32] = 0.25
        u = FourierField(c)
        res = simulate(u, _cfg(max_mode=32, dt=1e-3, t_final=0.01))
        assert res.final.field.mode(0) == u.mode(0)

    def test_l2_drift_small(self):
        u = _single_mode(32, 0.1)
        res = simulate(u, _cfg(max_mode=32, dt=2e-4, t_final=0.05))
        assert abs(res.final.field.l2_norm() - u.l2_norm()) <= 1e-9

    def test_reality_preserved(self):
        u = _random_real(32, seed=10)
        res = simulate(u, _cfg(max_mode=32, dt=1e-3, t_final=0.01))
        res.final.field.require_real()

    def test_local_order_is_five(self):
        # one step of size dt against two of size dt/2: the difference decays
        # like dt^5 for a fourth-order method
        u = _single_mode(32, 2.0)

        def local_diff(dt):
            one = step(SimulationState(0.0, u.copy()),
                       _cfg(max_mode=32, dt=dt, t_final=dt))
            s = SimulationState(0.0, u.copy())
            half = _cfg(max_mode=32, dt=dt / 2, t_final=dt)
            s = step(step(s, half), half)
            return float(np.linalg.norm(one.field.coeffs - s.field.coeffs))

        e1, e2 = local_diff(2e-4), local_diff(1e-4)
        exponent = np.log2(e1 / e2)
        assert 4.5 <= exponent <= 5.5

    def test_blowup_carries_last_good(self):
        u = _single_mode(16, 100.0)
        cfg = _cfg(max_mode=16, dt=1.0, t_final=10.0)
        with np.errstate(all="ignore"):
            with pytest.raises(BlowUpError) as info:
                simulate(u, cfg)
        last = info.value.last_good
        assert np.all(np.isfinite(last.field.coeffs))
        assert last.t < 10.0


class TestSimulate:
    def test_t_final_must_divide(self):
        u = _single_mode(8, 0.1)
        with pytest.raises(ValueError, match="integer multiple"):
            simulate(u, _cfg(max_mode=8, dt=0.3, t_final=1.0))

    def test_rejects_complex_initial_data(self):
        c = np.zeros(2 * 8 + 1, dtype=np.complex128)
        c[8 + 1] = 1.0  # no conjugate partner
        with pytest.raises(ValueError):
            simulate(FourierField(c), _cfg(max_mode=8))

    def test_rejects_mismatched_max_mode(self):
        with pytest.raises(ValueError):
            simulate(_single_mode(8, 0.1), _cfg(max_mode=16))

    def test_snapshot_layout(self):
        u = _single_mode(8, 0.01)
        cfg = _cfg(max_mode=8, dt=1e-3, t_final=1e-2)
        res = simulate(u, cfg, sample_every=3)
        # initial state, every third step, and the final step
        want = np.array([0.0, 3e-3, 6e-3, 9e-3, 1e-2])
        assert np.allclose(res.times, want, atol=1e-15)
        assert len(res.snapshots) == 5
        assert res.snapshots[0].t == 0.0
        assert res.snapshots[-1].t == res.final.t

    def test_snapshot_endpoints_only(self):
        u = _single_mode(8, 0.01)
        res = simulate(u, _cfg(max_mode=8, dt=1e-3, t_final=1e-2))
        assert len(res.snapshots) == 2
        assert res.times[0] == 0.0 and res.times[-1] == pytest.approx(1e-2)

    def test_zero_time_run(self):
        u = _single_mode(8, 0.01)
        res = simulate(u, _cfg(max_mode=8, t_final=0.0))
        assert len(res.snapshots) == 1
        assert res.final.t == 0.0
        assert np.array_equal(res.final.field.coeffs, u.coeffs)

    def test_initial_snapshot_is_a_copy(self):
        u = _single_mode(8, 0.05)
        res = simulate(u, _cfg(max_mode=8, dt=1e-3, t_final=5e-3),
                       sample_every=1)
        assert np.array_equal(res.snapshots[0].field.coeffs, u.coeffs)
        assert res.snapshots[0].field.coeffs is not u.coeffs

    def test_alpha_accum_tracks_mass_integral(self):
        u = _single_mode(32, 0.1)
        T = 0.05
        res = simulate(u, _cfg(max_mode=32, dt=2e-4, t_final=T))
        # mass is conserved to time-stepping error, so the accumulated
        # integral of P0(u^2) is T * mass to the same accuracy
        assert res.final.alpha_accum == pytest.approx(T * u.mass(), rel=1e-8)

    def test_translation_equivariance(self):
        K = 24
        u = _random_real(K, seed=11, scale=0.1)
        x0 = 0.3127
        phase = np.exp(-2j * np.pi * np.arange(-K, K + 1) * x0)
        cfg = _cfg(max_mode=K, dt=1e-3, t_final=0.02)
        moved_first = simulate(u.multiplied(phase), cfg).final.field
        moved_last = simulate(u, cfg).final.field.multiplied(phase)
        scale = np.max(np.abs(moved_last.coeffs))
        assert np.max(np.abs(moved_first.coeffs - moved_last.coeffs)) <= 1e-12 * scale


class TestGauge:
    def test_roundtrip_identity(self):
        u = _random_real(16, seed=12)
        state = SimulationState(0.4, u, alpha_accum=0.0137)
        cfg = _cfg(max_mode=16)
        back = gauge_backward(gauge_forward(state, cfg), cfg)
        assert np.max(np.abs(back.field.coeffs - u.coeffs)) <= 1e-12
        assert back.t == state.t and back.alpha_accum == state.alpha_accum

    def test_noop_at_zero_alpha(self):
        u = _random_real(16, seed=13)
        state = SimulationState(0.0, u, alpha_accum=0.0)
        out = gauge_forward(state, _cfg(max_mode=16))
        assert np.array_equal(out.field.coeffs, u.coeffs)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_gauge_links_plain_and_renormalized(self, sign):
        # the renormalized flow is the plain flow composed with the mean-drift
        # translation; push the plain endpoint forward and compare fields
        u = _single_mode(32, 0.1)
        plain_cfg = _cfg(max_mode=32, dt=1e-3, t_final=0.05, sign=sign,
                         renormalized=False)
        renorm_cfg = _cfg(max_mode=32, dt=1e-3, t_final=0.05, sign=sign,
                          renormalized=True)
        plain = simulate(u, plain_cfg).final
        renorm = simulate(u, renorm_cfg).final
        gauged = gauge_forward(plain, plain_cfg)
        scale = np.max(np.abs(renorm.field.coeffs))
        assert np.max(np.abs(gauged.field.coeffs - renorm.field.coeffs)) <= 1e-10 * scale

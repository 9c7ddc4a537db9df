import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dipolar_gpe.spectral import (
    forward_transform,
    grad_norm_sq,
    inner,
    inverse_transform,
    l2_norm_sq,
    make_grid,
    sigma_norm_sq,
    xweighted_norm_sq,
)
from dipolar_gpe.groundstate import gaussian_state

from conftest import smooth_random_field


class TestMakeGrid:
    def test_cubic(self):
        g = make_grid((8, 8, 8), (4, 4, 4))
        assert g.spacing == (1.0, 1.0, 1.0)
        for xi in g.frequencies:
            assert np.allclose(np.diff(xi), np.pi / 4)

    def test_anisotropic(self):
        g = make_grid((16, 8, 8), (8, 4, 4))
        assert g.spacing == (1.0, 1.0, 1.0)
        assert g.shape == (16, 8, 8)

    @pytest.mark.parametrize("dims, L", [((7, 8, 8), 4), ((6, 8, 8), 4), ((8, 8, 8), 0.0),
                                         ((8, 8, 8), (1, -1, 1))])
    def test_rejects(self, dims, L):
        with pytest.raises(ValueError):
            make_grid(dims, L)

    def test_invariants(self):
        g = make_grid((8, 12, 10), (1.0, 2.0, 3.0))
        for n, x, xi in zip(g.dims, g.axes, g.frequencies):
            assert len(x) == len(xi) == n
            assert 0.0 in xi
        assert g.axes[0][0] == -1.0


class TestTransform:
    def test_single_mode(self):
        g = make_grid((8, 10, 12), (1.5, 2.0, 2.5))
        m = (2, -3, 5)
        xi0 = [np.pi * mj / L for mj, L in zip(m, g.box_half_lengths)]
        x1, x2, x3 = g.axes
        f = (np.exp(1j * xi0[0] * x1)[:, None, None] * np.exp(1j * xi0[1] * x2)[None, :, None]
             * np.exp(1j * xi0[2] * x3)[None, None, :])
        fh = forward_transform(g, f)
        idx = tuple(mj + n // 2 for mj, n in zip(m, g.dims))
        expected = np.prod([2 * L for L in g.box_half_lengths])
        assert fh[idx] == pytest.approx(expected, rel=1e-12)
        fh[idx] = 0
        assert np.max(np.abs(fh)) < 1e-12 * expected

    def test_gaussian_closed_form(self):
        g = make_grid(64, 8.0)
        f = np.exp(-g.r_squared / 2)
        fh = forward_transform(g, f)
        k1, k2, k3 = g.frequencies
        xi2 = k1[:, None, None] ** 2 + k2[None, :, None] ** 2 + k3[None, None, :] ** 2
        exact = (2 * np.pi) ** 1.5 * np.exp(-xi2 / 2)
        resolved = xi2 <= 16.0
        rel = np.abs(fh[resolved] - exact[resolved]) / exact[resolved]
        assert rel.max() < 1e-8

    def test_round_trip(self, rng):
        g = make_grid((16, 8, 12), (3.0, 2.0, 1.0))
        f = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
        back = inverse_transform(g, forward_transform(g, f))
        assert np.max(np.abs(back - f)) <= 1e-12 * np.max(np.abs(f))

    def test_real_field_hermitian(self, rng):
        g = make_grid((8, 10, 12), 2.0)
        fh = forward_transform(g, rng.standard_normal(g.shape))
        flipped = fh[np.ix_(*[(-np.arange(n)) % n for n in g.dims])]
        assert np.max(np.abs(flipped - np.conj(fh))) <= 1e-12 * np.max(np.abs(fh))


class TestNorms:
    def test_gaussian_moments(self):
        g = make_grid(64, 8.0)
        c = 1.7
        u = gaussian_state(g, c)
        assert l2_norm_sq(g, u) == pytest.approx(c * c, rel=1e-6)
        assert grad_norm_sq(g, u) == pytest.approx(1.5 * c * c, rel=1e-6)
        assert xweighted_norm_sq(g, u) == pytest.approx(1.5 * c * c, rel=1e-6)

    def test_zero(self):
        g = make_grid(8, 2.0)
        z = np.zeros(g.shape)
        assert l2_norm_sq(g, z) == grad_norm_sq(g, z) == xweighted_norm_sq(g, z) == 0.0
        assert sigma_norm_sq(g, z) == 0.0

    def test_sigma_is_sum(self, rng):
        g = make_grid(16, 4.0)
        f = smooth_random_field(g, rng)
        parts = [xweighted_norm_sq(g, f), grad_norm_sq(g, f), l2_norm_sq(g, f)]
        assert all(p >= 0 for p in parts)
        assert sigma_norm_sq(g, f) == parts[0] + parts[1] + parts[2]

    def test_grad_matches_finite_differences(self):
        # second-order central differences converge to the spectral value as h^2
        rng = np.random.default_rng(3)
        errors = []
        for n in (32, 64, 128):
            g = make_grid(n, 8.0)
            f = smooth_random_field(g, np.random.default_rng(3))
            fd = 0.0
            for axis, h in enumerate(g.spacing):
                d = (np.roll(f, -1, axis) - np.roll(f, 1, axis)) / (2 * h)
                fd += np.sum(np.abs(d) ** 2) * g.cell_volume
            errors.append(abs(fd - grad_norm_sq(g, f)))
        assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.1)
        assert errors[1] / errors[2] == pytest.approx(4.0, rel=0.1)
        del rng

    def test_grid_mismatch(self):
        g = make_grid(8, 1.0)
        with pytest.raises(ValueError):
            l2_norm_sq(g, np.zeros((8, 8, 10)))
        with pytest.raises(ValueError):
            inner(g, np.zeros(g.shape), np.zeros((10, 8, 8)))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), scale=st.floats(0.1, 10.0))
def test_plancherel(seed, scale):
    g = make_grid((8, 10, 12), (1.0, 2.0, 1.5))
    r = np.random.default_rng(seed)
    f = scale * (r.standard_normal(g.shape) + 1j * r.standard_normal(g.shape))
    fh = forward_transform(g, f)
    dxi = np.prod([np.pi / L for L in g.box_half_lengths])
    freq_side = np.sum(np.abs(fh) ** 2) * dxi / (2 * np.pi) ** 3
    assert l2_norm_sq(g, f) == pytest.approx(freq_side, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1),
       a=st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_inner_sesquilinear(seed, a):
    g = make_grid(8, 1.0)
    r = np.random.default_rng(seed)
    f, g1, g2 = (r.standard_normal(g.shape) + 1j * r.standard_normal(g.shape) for _ in range(3))
    lhs = inner(g, f, a * g1 + g2)
    rhs = a * inner(g, f, g1) + inner(g, f, g2)
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))
    assert inner(g, g1, f) == pytest.approx(np.conj(inner(g, f, g1)), rel=1e-12)
    ff = inner(g, f, f)
    assert ff.imag == 0.0 and ff.real >= 0

import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from besovlab import (
    BesovParams,
    Grid,
    SampledPath,
    besov_norm,
    generate_bm,
    lp_norm,
    modulus,
    path_of,
)
from besovlab.besov import modulus_curve
from besovlab.errors import ParameterError, ResolutionError

FIXTURES = Path(__file__).parent / "fixtures"


def ramp(J, a=0.0, b=1.0):
    g = Grid(a, b, J)
    return SampledPath(g, g.points())


def const(J, c):
    g = Grid(0.0, 1.0, J)
    return SampledPath(g, np.full(g.n_points, c))


class TestLpNorm:
    def test_constant(self):
        assert lp_norm(const(6, -2.5), 3.0) == pytest.approx(2.5, rel=1e-12)

    def test_ramp_p2(self):
        assert lp_norm(ramp(8), 2.0) == pytest.approx(3.0**-0.5, rel=1e-10)

    def test_ramp_p4(self):
        assert lp_norm(ramp(8), 4.0) == pytest.approx(5.0**-0.25, rel=1e-10)

    def test_p_below_one(self):
        with pytest.raises(ParameterError):
            lp_norm(ramp(4), 0.5)


class TestModulus:
    def test_constant_zero(self):
        assert modulus(const(8, 4.0), 0.25, 2.0) == 0.0

    def test_ramp_closed_form(self):
        # sup_{h<=1/4} h sqrt(1-h); objective increasing below h = 2/3
        got = modulus(ramp(12), 0.25, 2.0)
        assert got == pytest.approx(0.25 * 0.75**0.5, rel=1e-6)

    def test_monotone_in_t(self):
        path = path_of(generate_bm(Grid(0.0, 1.0, 10), 3))
        assert modulus(path, 0.5, 2.0) >= modulus(path, 0.25, 2.0)

    def test_below_resolution(self):
        with pytest.raises(ResolutionError):
            modulus(ramp(6), 2.0**-10, 2.0)

    def test_curve_nondecreasing(self):
        path = path_of(generate_bm(Grid(0.0, 1.0, 10), 9))
        curve = modulus_curve(path, 2.0)
        assert np.all(np.diff(curve.w_values) >= 0.0)
        assert np.all(curve.w_values >= 0.0)
        assert curve.t_grid[0] == pytest.approx(path.grid.dx)
        assert curve.t_grid[-1] == pytest.approx(1.0)


class TestBesovNorm:
    def test_constant_path(self):
        rep = besov_norm(const(8, 3.0), BesovParams(0.4, 2.0, 2.0))
        assert rep.seminorm_truncated == 0.0
        assert rep.norm_total == rep.lp_norm == pytest.approx(3.0, rel=1e-12)

    def test_ramp_matches_frozen_oracle(self):
        oracle = json.loads((FIXTURES / "besov_ramp_oracle.json").read_text())
        rep = besov_norm(ramp(12), BesovParams(0.3, 2.0, 2.0))
        assert rep.truncation_floor == oracle["truncation_floor"]
        assert rep.seminorm_truncated == pytest.approx(
            oracle["seminorm_truncated"], rel=0.01
        )
        assert rep.lp_norm == pytest.approx(oracle["lp_norm"], rel=1e-9)

    def test_refinement_stability_smooth_path(self):
        vals = []
        for J in (10, 12):
            g = Grid(0.0, 1.0, J)
            path = SampledPath(g, np.sin(2 * np.pi * g.points()))
            vals.append(besov_norm(path, BesovParams(0.3, 2.0, 2.0)).seminorm_truncated)
        assert vals[1] == pytest.approx(vals[0], rel=0.02)

    @given(st.floats(0.1, 10.0), st.integers(0, 2**32 - 1))
    @settings(max_examples=10, deadline=None)
    def test_homogeneity(self, c, seed):
        g = Grid(0.0, 1.0, 7)
        v = np.random.default_rng(seed).standard_normal(g.n_points)
        params = BesovParams(0.35, 2.0, 2.0)
        r1 = besov_norm(SampledPath(g, v), params)
        r2 = besov_norm(SampledPath(g, c * v), params)
        assert r2.lp_norm == pytest.approx(c * r1.lp_norm, rel=1e-10)
        assert r2.seminorm_truncated == pytest.approx(
            c * r1.seminorm_truncated, rel=1e-10
        )
        assert r2.norm_total == pytest.approx(c * r1.norm_total, rel=1e-10)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=10, deadline=None)
    def test_triangle_inequality(self, seed):
        g = Grid(0.0, 1.0, 7)
        rng = np.random.default_rng(seed)
        f = rng.standard_normal(g.n_points)
        h = rng.standard_normal(g.n_points)
        params = BesovParams(0.3, 2.0, 2.0)
        nf = besov_norm(SampledPath(g, f), params).norm_total
        nh = besov_norm(SampledPath(g, h), params).norm_total
        nfh = besov_norm(SampledPath(g, f + h), params).norm_total
        assert nfh <= nf + nh + 1e-9

    def test_seminorm_zero_iff_constant(self):
        assert besov_norm(const(7, 1.0), BesovParams(0.3, 2, 2)).seminorm_truncated < 1e-12
        g = Grid(0.0, 1.0, 7)
        v = np.zeros(g.n_points)
        v[64] = 1e-6
        rep = besov_norm(SampledPath(g, v), BesovParams(0.3, 2, 2))
        assert rep.seminorm_truncated > 1e-12

    def test_extrapolation_ramp(self):
        rep = besov_norm(ramp(10), BesovParams(0.3, 2.0, 2.0), extrapolate=True)
        # ramp modulus ~ t near 0: beta ~ 1 > alpha, tail converges
        assert not rep.tail_diverges
        assert rep.extrapolated_seminorm is not None
        assert rep.extrapolated_seminorm >= rep.seminorm_truncated

    def test_extrapolation_divergence_flag(self):
        # rough path: fitted small-scale exponent ~1/2 < alpha = 0.8
        path = path_of(generate_bm(Grid(0.0, 1.0, 12), 5))
        rep = besov_norm(path, BesovParams(0.8, 2.0, 2.0), extrapolate=True)
        assert rep.tail_diverges
        assert rep.extrapolated_seminorm is None

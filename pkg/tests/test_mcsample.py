"""Monte Carlo sampler: distributional checks against the exact evaluator,
determinism contracts, and the dump format."""
import io
import math

import numpy as np
import pytest

from luemax.errors import DomainError
from luemax.exactprob import EnsembleParams, phat_projection
from luemax.mcsample import (EmpiricalCDF, SamplerConfig, Scaling,
                             dump_samples, ks_distance, sample_largest)


def test_config_validation():
    params = EnsembleParams(2, 0.0)
    with pytest.raises(DomainError):
        SamplerConfig(params, 0, seed=1)
    with pytest.raises(DomainError):
        SamplerConfig(params, 10, seed=2 ** 64)
    with pytest.raises(DomainError):
        SamplerConfig(params, 10, seed=1, scaling="half")
    cfg = SamplerConfig(params, 10, seed=1, scaling="scaled")
    assert cfg.scaling is Scaling.SCALED


def test_rank_one_samples_are_exponential():
    cfg = SamplerConfig(EnsembleParams(1, 0.0), 100_000, seed=42)
    ecdf = sample_largest(cfg)
    mean = float(ecdf.samples.mean())
    assert abs(mean - 1.0) < 3.0 / math.sqrt(cfg.sample_count)


def test_rank_one_scaled_cdf_value():
    cfg = SamplerConfig(EnsembleParams(1, 0.0), 100_000, seed=42,
                        scaling="scaled")
    ecdf = sample_largest(cfg)
    p_true = 1.0 - math.exp(-1.0)  # P(lambda <= 1/4) under weight e^{-4x}
    band = 3.0 * math.sqrt(p_true * (1.0 - p_true) / cfg.sample_count)
    assert abs(ecdf(0.25) - p_true) < band


def test_seed_determinism_and_scaling_contract():
    base = SamplerConfig(EnsembleParams(1, 0.0), 50_000, seed=42)
    ecdf = sample_largest(base)
    again = sample_largest(SamplerConfig(EnsembleParams(1, 0.0), 50_000,
                                         seed=42))
    assert np.array_equal(again.samples, ecdf.samples)
    scaled = sample_largest(SamplerConfig(EnsembleParams(1, 0.0), 50_000,
                                          seed=42, scaling=Scaling.SCALED))
    assert np.array_equal(scaled.samples, ecdf.samples / 4.0)
    other = sample_largest(SamplerConfig(EnsembleParams(1, 0.0), 50_000,
                                         seed=43))
    assert not np.array_equal(other.samples, ecdf.samples)


def test_sample_prefix_is_independent_of_total():
    small = sample_largest(SamplerConfig(EnsembleParams(4, 0.5), 3_000,
                                         seed=9)).samples
    large = sample_largest(SamplerConfig(EnsembleParams(4, 0.5), 10_000,
                                         seed=9)).samples
    assert np.isin(small, large).all()


def test_empirical_cdf_shape():
    ecdf = EmpiricalCDF(np.array([3.0, 1.0, 2.0, 2.0]))
    assert ecdf(0.5) == 0.0
    assert ecdf(1.0) == 0.25
    assert ecdf(2.0) == 0.75
    assert ecdf.left_limit(2.0) == 0.25
    assert ecdf(10.0) == 1.0
    grid = np.linspace(0.0, 4.0, 33)
    vals = [ecdf(float(x)) for x in grid]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_ks_distance_trivia_and_guards():
    cfg = SamplerConfig(EnsembleParams(1, 0.0), 10_000, seed=5)
    ecdf = sample_largest(cfg)
    grid = np.linspace(0.05, 3.95, 101)  # generic points, away from samples
    assert ks_distance(ecdf, ecdf, grid) == 0.0
    with pytest.raises(DomainError):
        ks_distance(ecdf, ecdf, [])
    with pytest.raises(DomainError):
        ks_distance(ecdf, ecdf, [1.0, 0.5])


def test_ks_distance_sees_sample_jumps():
    ecdf = EmpiricalCDF(np.array([1.0, 2.0]))
    # at a grid point sitting on a sample the jump correction must count
    assert ks_distance(ecdf, lambda t: 0.5, [1.0]) == 0.5


def test_sampler_matches_exact_cdf():
    params = EnsembleParams(3, 0.7)
    cfg = SamplerConfig(params, 20_000, seed=11)
    ecdf = sample_largest(cfg)
    exact = lambda t: math.exp(phat_projection(params, t).log_value)
    grid = np.linspace(ecdf.samples[60], ecdf.samples[-60], 201)
    assert ks_distance(ecdf, exact, grid) <= 1.63 / math.sqrt(cfg.sample_count)


def test_scaled_extreme_quantile_sits_at_soft_edge():
    cfg = SamplerConfig(EnsembleParams(20, 0.0), 20_000, seed=3,
                        scaling=Scaling.SCALED)
    ecdf = sample_largest(cfg)
    q = float(np.quantile(ecdf.samples, 0.999))
    assert 0.9 < q < 1.25


def test_dump_round_trip(tmp_path):
    params = EnsembleParams(3, 0.7)
    cfg = SamplerConfig(params, 2_000, seed=11)
    ecdf = sample_largest(cfg)
    buf = io.StringIO()
    dump_samples(ecdf, cfg, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("# n=3 gamma=0.69999999999999996 "
                               "sample_count=2000 seed=11")
    assert lines[1] == "largest_eigenvalue"
    values = np.array([float(v) for v in lines[2:]])
    assert np.array_equal(values, ecdf.samples)

    target = tmp_path / "draws.csv"
    dump_samples(ecdf, cfg, target)
    assert target.read_text() == buf.getvalue()

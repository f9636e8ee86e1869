import numpy as np
import pytest

from noscodec import awgn, derive_rng, ebn0_to_n0, new_params
from noscodec.channel import STREAM_TRIAL


def test_ebn0_conversion_known_values():
    p = new_params(3, 2048, 128, 11)  # m = 11, all 33 bits count toward Eb
    assert ebn0_to_n0(0.0, p) == pytest.approx(128 / 33, rel=1e-12)
    assert ebn0_to_n0(-1.5, p) == pytest.approx((128 / 33) * 10**0.15, rel=1e-12)
    assert ebn0_to_n0(200.0, p) < 1e-18


def test_ebn0_info_only_convention():
    p = new_params(3, 2048, 128, 11)
    assert ebn0_to_n0(0.0, p, "info-only") == pytest.approx(128 / 22, rel=1e-12)
    with pytest.raises(ValueError, match="convention"):
        ebn0_to_n0(0.0, p, "bogus")


def test_awgn_noiseless_and_negative():
    sig = np.array([1 + 2j, -3 + 0.5j])
    rng = derive_rng(0, STREAM_TRIAL, 0)
    out = awgn(sig, 0.0, rng)
    assert np.array_equal(out, sig)
    with pytest.raises(ValueError, match=">= 0"):
        awgn(sig, -1.0, rng)


def test_awgn_statistics():
    n = 10**6
    rng = derive_rng(123, STREAM_TRIAL, 0)
    noise = awgn(np.zeros(n, dtype=complex), 2.0, rng)
    var = np.mean(np.abs(noise) ** 2)
    assert abs(var - 2.0) < 0.04  # within 2%
    # zero mean within 4 standard errors (se of each part is sqrt(1/n))
    se = np.sqrt(1.0 / n)
    assert abs(noise.real.mean()) < 4 * se
    assert abs(noise.imag.mean()) < 4 * se
    corr = np.corrcoef(noise.real, noise.imag)[0, 1]
    assert abs(corr) < 0.01


def test_streams_deterministic_and_distinct():
    a = derive_rng(7, STREAM_TRIAL, 42).standard_normal(8)
    b = derive_rng(7, STREAM_TRIAL, 42).standard_normal(8)
    c = derive_rng(7, STREAM_TRIAL, 43).standard_normal(8)
    d = derive_rng(8, STREAM_TRIAL, 42).standard_normal(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_stream_index_bounds():
    with pytest.raises(ValueError, match="out of range"):
        derive_rng(0, STREAM_TRIAL, -1)
    with pytest.raises(ValueError, match="out of range"):
        derive_rng(0, STREAM_TRIAL, 1 << 56)

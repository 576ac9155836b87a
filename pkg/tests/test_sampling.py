import statistics

import pytest
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from vhss.errors import ParameterError
from vhss.ring import inf_norm, support_size
from vhss.sampling import (RngHandle, fresh_prf_key, prf_expand, sample_err, sample_sk,
                           sample_uniform_ring)


def test_rng_matches_aes256_zero_vector():
    # AES-256 encryption of the zero block under the zero key
    assert RngHandle(bytes(32)).read(16).hex() == "dc95c078a2408989ad48a21492842087"


def test_rng_determinism_and_seed_parsing():
    a = RngHandle.from_string("seed")
    b = RngHandle.from_string("seed")
    assert a.read(100) == b.read(100)
    hexseed = "ab" * 32
    assert RngHandle.from_string(hexseed).seed == bytes.fromhex(hexseed)
    with pytest.raises(ParameterError):
        RngHandle(b"short")


def test_rng_read_crosses_buffer_boundary():
    a = RngHandle.from_string("buf")
    b = RngHandle.from_string("buf")
    chunks = b"".join(a.read(n) for n in (1, 70000, 5, 65536, 3))
    assert chunks == b.read(len(chunks))


def test_uniform_golden():
    assert sample_uniform_ring(4, 17, RngHandle.from_string("golden")).coeffs == (3, 0, 12, 11)


def test_uniform_mean():
    rng = RngHandle.from_string("mean")
    vals = [c for _ in range(10000) for c in sample_uniform_ring(4, 17, rng).coeffs[:1]]
    mean = statistics.fmean(vals)
    sd = (((17**2 - 1) / 12) / len(vals)) ** 0.5
    assert abs(mean - 8) < 3 * sd


def test_uniform_distinct_seeds():
    a = sample_uniform_ring(64, 2**61 - 1, RngHandle.from_string("a"))
    b = sample_uniform_ring(64, 2**61 - 1, RngHandle.from_string("b"))
    assert a != b


def test_sk_shape():
    rng = RngHandle.from_string("sk")
    for _ in range(200):
        s = sample_sk(8, 4, 17, rng)
        assert support_size(s) == 4
        assert set(s.coeffs) <= {0, 1, 16}
        assert inf_norm(s) == 1
    assert support_size(sample_sk(8, 8, 17, rng)) == 8
    with pytest.raises(ParameterError):
        sample_sk(8, 9, 17, rng)
    assert sample_sk(8, 4, 17, RngHandle.from_string("golden-sk")).centered() == \
        [0, 1, -1, 1, 0, -1, 0, 0]


def test_sk_position_and_sign_frequencies():
    rng = RngHandle.from_string("freq")
    trials = 10000
    hits = [0] * 8
    plus = 0
    for _ in range(trials):
        s = sample_sk(8, 4, 17, rng)
        for i, c in enumerate(s.coeffs):
            if c:
                hits[i] += 1
                plus += c == 1
    sd = (trials * 0.25) ** 0.5
    assert all(abs(h - trials / 2) < 3 * sd for h in hits)
    total = 4 * trials
    assert abs(plus - total / 2) < 3 * (total * 0.25) ** 0.5


def test_err_bound_and_moments():
    rng = RngHandle.from_string("err")
    vals = []
    for _ in range(100000 // 1024):
        e = sample_err(1024, 8, 2**30, rng)
        assert inf_norm(e) <= 64
        vals.extend(e.centered())
    var = statistics.pvariance(vals)
    # rounding adds 1/12 to the continuous variance
    assert abs(var - 64) < 0.05 * 64
    assert abs(statistics.fmean(vals)) < 0.1


def test_err_degenerate_and_golden():
    assert sample_err(8, 1e-9, 17, RngHandle.from_string("z")).is_zero()
    assert sample_err(8, 8, 2**30, RngHandle.from_string("golden-err")).centered() == \
        [8, 2, 10, -10, 1, -9, 20, -15]
    with pytest.raises(ParameterError):
        sample_err(8, 0, 17, RngHandle.from_string("z"))


def test_prf_matches_independent_aes_ctr():
    key = bytes(range(16))
    q = 2**61 - 1
    width = (q.bit_length() + 64 + 7) // 8
    # counter blocks id||0..0, id||0..1, ... encrypted one by one in ECB mode
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    blocks = -(-4 * width // 16)
    stream = b"".join(enc.update((7).to_bytes(8, "big") + i.to_bytes(8, "big"))
                      for i in range(blocks))
    vals = [int.from_bytes(stream[i * width:(i + 1) * width], "little") % q for i in range(4)]
    a, b = prf_expand(key, 7, 2, q)
    assert list(a.coeffs) + list(b.coeffs) == vals


def test_prf_golden_and_separation():
    key = bytes(range(16))
    a, b = prf_expand(key, 7, 4, 17)
    assert (a.coeffs, b.coeffs) == ((1, 14, 13, 8), (10, 1, 1, 8))
    assert prf_expand(key, 7, 4, 17) == (a, b)
    assert prf_expand(key, 8, 64, 2**61 - 1) != prf_expand(key, 7, 64, 2**61 - 1)
    assert prf_expand(key, 7, 2, 2**61 - 1)[0].coeffs == (1490732300713464937, 1674761401753037181)
    with pytest.raises(ParameterError):
        prf_expand(b"k", 0, 4, 17)


def test_fresh_prf_key_length():
    assert len(fresh_prf_key(RngHandle.from_string("k"))) == 16

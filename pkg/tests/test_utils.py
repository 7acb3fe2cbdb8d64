import pandas as pd
import pytest

from utils import (
    ENV_PREFIX,
    env_int,
    env_value,
    fmt_ms,
    fmt_verdict,
    frame_to_markdown,
    hilbert_dim,
    is_prime,
    parse_primes,
    validate_in,
    validate_positive,
    validate_prime,
    validate_range,
    xor_label,
)


def test_validators_pass_values_through():
    assert validate_positive(3) == 3
    assert validate_in("a", {"a", "b"}) == "a"
    assert validate_range(4, 2, 7) == 4


@pytest.mark.parametrize("call", [
    lambda: validate_positive(0),
    lambda: validate_in("c", {"a", "b"}),
    lambda: validate_range(8, 2, 7),
])
def test_validators_reject(call):
    with pytest.raises(ValueError):
        call()


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_validate_prime_bounds():
    assert validate_prime(7) == 7
    assert validate_prime(29) == 29
    with pytest.raises(ValueError, match="odd prime"):
        validate_prime(2)
    with pytest.raises(ValueError, match="odd prime"):
        validate_prime(9)
    with pytest.raises(ValueError, match="p\\^2"):
        validate_prime(31)


def test_parse_primes():
    assert parse_primes("7, 11") == (7, 11)
    assert parse_primes("13") == (13,)
    with pytest.raises(ValueError):
        parse_primes(" , ")
    with pytest.raises(ValueError):
        parse_primes("7,x")


def test_env_helpers(monkeypatch):
    monkeypatch.setenv(ENV_PREFIX + "SEED", " 5 ")
    monkeypatch.setenv(ENV_PREFIX + "MODE", "")
    assert env_value("seed") == "5"
    assert env_int("seed") == 5
    assert env_value("mode", "specialized") == "specialized"
    monkeypatch.setenv(ENV_PREFIX + "JOBS", "two")
    with pytest.raises(ValueError, match="SKLY_JOBS"):
        env_int("jobs")


def test_hilbert_dim_is_binomial():
    assert [hilbert_dim(n) for n in range(6)] == [1, 4, 10, 20, 35, 56]


def test_xor_label():
    assert xor_label(1, 2) == 3
    assert xor_label(3, 3) == 0


def test_formatting():
    assert fmt_verdict(True) == "PASS"
    assert fmt_verdict(False) == "FAIL"
    assert fmt_ms(0.0125) == "12.5 ms"
    df = pd.DataFrame([{"a": 1, "b": "x"}])
    assert frame_to_markdown(df).splitlines() == ["| a | b |", "|---|---|", "| 1 | x |"]

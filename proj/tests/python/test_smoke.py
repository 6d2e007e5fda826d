import math

import pytest

import diqpq

ANGLES = diqpq.BellAngles(math.pi / 2, math.pi / 4, 3 * math.pi / 4)

CONFIG = """
version = 1
theta_rad = 1.5707963267948966
psi1_rad = 0.7853981633974483
psi2_rad = 2.356194490192345
gamma = 0.5
pairs = 20000
eta = 1.0
seed = 7
method = test
"""


def test_ideal_values():
    assert diqpq.chsh_ideal(ANGLES) == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert diqpq.game_threshold(ANGLES) == pytest.approx(0.8535533905932737, abs=1e-12)
    assert diqpq.threshold_with_eta(ANGLES, 1.0) == pytest.approx(
        diqpq.chsh_ideal(ANGLES), abs=1e-12
    )


def test_bias_strictly_hurts():
    for eps in (0.05, 0.2, 0.4):
        assert diqpq.biased_chsh_value(ANGLES, eps) < diqpq.chsh_ideal(ANGLES)
        assert diqpq.biased_game_value(ANGLES, eps) < diqpq.game_threshold(ANGLES)


def test_attack_region_classifier():
    assert diqpq.classify_attack_region(ANGLES, 1.0, 0.2) == "none"
    low = diqpq.BellAngles(math.pi / 12, math.pi / 4, 3 * math.pi / 4)
    assert diqpq.classify_attack_region(low, 0.833, 0.3) == "case1"


def test_finite_stats():
    assert diqpq.xi(0.5, 10**6, 1e-9) == pytest.approx(0.004552281388155439, rel=1e-12)
    assert diqpq.nu(0.5, 10**6, 1e-9) == pytest.approx(0.0016094761291907255, rel=1e-12)


def test_full_protocol_roundtrip():
    db = "0110100110001011"
    out = diqpq.run_protocol(CONFIG, db, 5)
    assert out["verdict"] == "proceed"
    assert out["retrieved_bit"] == int(db[5])
    again = diqpq.run_protocol(CONFIG, db, 5)
    assert again["transcript"] == out["transcript"]
    parsed = diqpq.parse_transcript(out["transcript"])
    assert parsed["transcript"] == out["transcript"]


def test_figures():
    csv = diqpq.figure_csv(4)
    assert csv.splitlines()[0] == "theta_rad,psi1_rad,psi2_rad,threshold"
    assert len(csv.splitlines()) == 1 + 3 * 128

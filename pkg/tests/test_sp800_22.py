"""Battery tests pinned to the standard's published worked examples."""

import numpy as np
import pytest
from scipy.stats import kstest

from vsc.analysis import sp800_22 as sp

B = sp.bits_from_string

# 100-bit binary expansion of pi used by several worked examples
PI_100 = ("11001001000011111101101010100010001000010110100011"
          "00001000110100110001001100011001100010100010111000")

EPS_128 = ("11001100000101010110110001001100111000000000001001"
           "00110101010001000100111101011010000000110101111100"
           "1100111001101101100010110010")


class TestWorkedExamples:
    def test_monobit_small(self):
        r = sp.monobit(B("1011010101"))[0]
        assert r.p_value == pytest.approx(0.527089, abs=1e-6)
        assert r.passed

    def test_monobit_pi(self):
        r = sp.monobit(B(PI_100))[0]
        assert r.p_value == pytest.approx(0.109599, abs=1e-6)

    def test_block_frequency_small(self):
        r = sp.block_frequency(B("0110011010"), block_size=3)[0]
        assert r.p_value == pytest.approx(0.801252, abs=1e-6)
        assert r.parameters == {"M": 3, "N": 3}

    def test_runs_small(self):
        r = sp.runs(B("1001101011"))[0]
        assert r.p_value == pytest.approx(0.147232, abs=1e-6)

    def test_runs_pi(self):
        r = sp.runs(B(PI_100))[0]
        assert r.p_value == pytest.approx(0.500798, abs=1e-6)

    def test_longest_run_128(self):
        r = sp.longest_run_of_ones(B(EPS_128))[0]
        assert r.parameters["nu"] == [4, 9, 3, 0]
        assert r.p_value == pytest.approx(0.180609, abs=5e-4)

    def test_cusum_small(self):
        fwd, rev = sp.cumulative_sums(B("1011010111"))
        assert fwd.parameters["z"] == 4
        assert fwd.p_value == pytest.approx(0.4116588, abs=1e-6)

    def test_serial_small(self):
        p1, p2 = sp.serial(B("0011011101"), m=3)
        assert p1.p_value == pytest.approx(0.808792, abs=1e-6)
        assert p2.p_value == pytest.approx(0.670320, abs=1e-6)

    def test_approximate_entropy_small(self):
        r = sp.approximate_entropy(B("0100110101"), m=3)[0]
        assert r.p_value == pytest.approx(0.261961, abs=1e-5)


class TestDegenerateSequences:
    def test_all_zero_fails_monobit(self):
        bits = np.zeros(1_000_000, dtype=np.uint8)
        r = sp.monobit(bits)[0]
        assert r.p_value == pytest.approx(0.0, abs=1e-12)
        assert not r.passed

    def test_alternating_passes_monobit_fails_runs(self):
        bits = np.tile(np.array([0, 1], dtype=np.uint8), 500_000)
        assert sp.monobit(bits)[0].p_value == pytest.approx(1.0)
        # exactly 10^6 runs where ~5*10^5 are expected
        r = sp.runs(bits)[0]
        assert r.p_value == pytest.approx(0.0, abs=1e-12)
        assert not r.passed


class TestApplicability:
    def test_longest_run_too_short(self):
        r = sp.longest_run_of_ones(np.ones(100, dtype=np.uint8))[0]
        assert not r.applicable and r.p_value is None

    def test_battery_never_fabricates(self):
        results = sp.randomness_battery(B("1011"))
        for r in results:
            assert r.applicable or r.p_value is None

    def test_battery_selection(self):
        results = sp.randomness_battery(B(PI_100), tests=["monobit", "runs"])
        assert [r.test_name for r in results] == ["monobit", "runs"]
        with pytest.raises(ValueError):
            sp.randomness_battery(B(PI_100), tests=["nonsense"])

    def test_battery_item_order(self):
        bits = np.random.default_rng(1).integers(
            0, 2, size=1_000_000).astype(np.uint8)
        results = sp.randomness_battery(bits)
        assert tuple(r.test_name for r in results) == sp.BATTERY_ITEM_NAMES


class TestUniformity:
    def test_p_values_uniform_on_reference_generator(self):
        # KS statistic below the 1% critical value on 100 p-values per item
        rng = np.random.Generator(np.random.Philox(key=99))
        per_item = {name: [] for name in sp.BATTERY_ITEM_NAMES}
        for _ in range(100):
            bits = rng.integers(0, 2, size=1_000_000,
                                endpoint=False).astype(np.uint8)
            for r in sp.randomness_battery(bits):
                per_item[r.test_name].append(r.p_value)
        critical = 1.628 / np.sqrt(100)
        for name, ps in per_item.items():
            stat = kstest(ps, "uniform").statistic
            assert stat < critical, (name, stat)

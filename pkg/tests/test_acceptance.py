"""Exit criteria for the package, each at its pinned tolerance.

Run ``pytest tests/test_acceptance.py`` to get one PASS/FAIL line per
criterion in the terminal summary.
"""

import json
import math
import time

import numpy as np

from densecoding import cli
from densecoding.capacity import dc_capacity, dc_quantum_part, holevo_oracle
from densecoding.correlations import koashi_winter_residual
from densecoding.entropy import entropy, q_functional
from densecoding.states import RandomSpec, named_state, sample
from densecoding.theorems import (
    check_cor1,
    check_cor5,
    check_exclusion,
    check_multiport_monogamy,
    check_noise_monotonicity,
    check_receiver_monogamy,
)

PAGE_2X2_BITS = (1 / 3 + 1 / 4 - 1 / 4) / math.log(2)


def test_c1_oracle_equivalence(criterion):
    start = time.perf_counter()
    worst = 0.0
    count = 0
    for da in (2, 3):
        for db in (2, 3):
            spec = RandomSpec((da, db), "induced_mixed", 0xC1 + 10 * da + db)
            for k in range(50):
                s = sample(spec, k)
                worst = max(worst, abs(holevo_oracle(s, [0], 1) - dc_quantum_part(s, [0], 1)))
                count += 1
    elapsed = time.perf_counter() - start
    ok = count == 200 and worst <= 1e-9 and elapsed < 30
    criterion(1, ok, f"Holevo oracle vs closed form on {count} states: max|diff| = {worst:.2e} (<= 1e-9), {elapsed:.1f}s (< 30s)")
    assert ok


def test_c2_exclusion_sweep(criterion):
    start = time.perf_counter()
    doubles = 0
    worst_excess = -np.inf
    for dims in ((2, 2, 2), (2, 3, 2)):
        spec = RandomSpec(dims, "induced_mixed", 0xC2)
        bound = 2 * math.log2(dims[0])
        for k in range(1000):
            s = sample(spec, k)
            ab, ac = dc_capacity(s, [0], 1), dc_capacity(s, [0], 2)
            doubles += ab.advantage and ac.advantage
            worst_excess = max(worst_excess, ab.quantum_part + ac.quantum_part - bound)
            assert check_exclusion(s).holds
    elapsed = time.perf_counter() - start
    ok = doubles == 0 and worst_excess <= 1e-8 and elapsed < 60
    criterion(2, ok, f"2000 mixed states: {doubles} double advantages, max excess over 2 log2 d_A = {worst_excess:.3e}, {elapsed:.1f}s (< 60s)")
    assert ok


def test_c3_pure_saturation(criterion):
    spec = RandomSpec((2, 2, 2), "haar_pure", 0xC3)
    worst = max(
        abs(dc_quantum_part(s, [0], 1) + dc_quantum_part(s, [0], 2) - 2)
        for s in (sample(spec, k) for k in range(1000))
    )
    ok = worst <= 1e-8
    criterion(3, ok, f"1000 pure states: max|C_AB + C_AC - 2| = {worst:.2e} (<= 1e-8)")
    assert ok


def test_c4_golden_values(criterion):
    bell = named_state("bell", (2, 2))
    w = named_state("w", (2, 2, 2))
    ghz4 = named_state("ghz", (2, 2, 2, 2))
    bp = named_state("bell_times_pure", (2, 2, 2))
    errors = {
        "Bell A->B = 2": abs(dc_quantum_part(bell, [0], 1) - 2),
        "W A->B = 1": abs(dc_quantum_part(w, [0], 1) - 1),
        "W A->C = 1": abs(dc_quantum_part(w, [0], 2) - 1),
        "GHZ4 A1A2->A3 = 2": abs(dc_quantum_part(ghz4, [0, 1], 2) - 2),
        "Bell x pure C1 sum = 3": abs(check_cor1(bp).lhs - 3),
    }
    worst = max(errors.values())
    ok = worst <= 1e-9 and check_cor1(bp).rhs == 3.0
    criterion(4, ok, "golden values " + ", ".join(f"{k} (err {v:.1e})" for k, v in errors.items()))
    assert ok


def test_c5_receiver_and_multiport_monogamy(criterion):
    spec3 = RandomSpec((2, 2, 2), "induced_mixed", 0xC5)
    spec4 = RandomSpec((2, 2, 2, 2), "induced_mixed", 0xC5)
    t3_verdicts = [check_receiver_monogamy(sample(spec3, k)) for k in range(1000)]
    t3 = min(v.slack for v in t3_verdicts)
    t4_verdicts = [check_multiport_monogamy(sample(spec4, k)) for k in range(500)]
    t4 = min(v.slack for v in t4_verdicts)
    holds = all(v.holds for v in t3_verdicts + t4_verdicts)
    pure4 = RandomSpec((2, 2, 2, 2), "haar_pure", 0xC5)
    q = max(abs(q_functional(sample(pure4, k))) for k in range(500))
    ok = t3 >= -1e-8 and t4 >= -1e-8 and holds and q <= 1e-9
    criterion(5, ok, f"all hold = {holds}, min slack T3 = {t3:.3e}, T4 = {t4:.3e} (>= -1e-8); max|Q| on 500 pure 4-qubit states = {q:.2e} (<= 1e-9)")
    assert ok


def test_c6_discord_bound_koashi_winter(criterion):
    start = time.perf_counter()
    spec = RandomSpec((2, 2, 2), "haar_pure", 0xC6)
    gap_lo, gap_eq, kw_lo, kw_hi = np.inf, 0.0, np.inf, -np.inf
    for k in range(200):
        s = sample(spec, k)
        v = check_cor5(s)
        d_sum = v.details["D_AB"] + v.details["D_AC"]
        e_sum = v.details["E_AB"] + v.details["E_AC"]
        gap_lo = min(gap_lo, v.rhs - (d_sum - 2e-3))
        gap_eq = max(gap_eq, abs(d_sum - e_sum))
        r = koashi_winter_residual(s)
        kw_lo, kw_hi = min(kw_lo, r), max(kw_hi, r)
    elapsed = time.perf_counter() - start
    ok = gap_lo >= 0 and gap_eq <= 2e-3 and kw_lo >= -1e-3 and kw_hi <= 1e-6 and elapsed < 300
    criterion(
        6,
        ok,
        f"200 pure 3-qubit states: min(C sum - D sum + 2e-3) = {gap_lo:.3e} (>= 0), "
        f"max|D sum - E sum| = {gap_eq:.2e} (<= 2e-3), KW residual in [{kw_lo:.2e}, {kw_hi:.2e}] "
        f"(within [-1e-3, 1e-6]), {elapsed:.1f}s (< 300s)",
    )
    assert ok


def test_c7_noise_monotonicity(criterion):
    spec = RandomSpec((2, 2, 2), "induced_mixed", 0xC7)
    verdicts = [check_noise_monotonicity(sample(spec, k), (0, 0.25, 0.5, 0.75, 1)) for k in range(200)]
    worst_rise = max(v.details["worst_rise"] for v in verdicts)
    ok = all(v.holds for v in verdicts) and worst_rise <= 1e-9
    criterion(7, ok, f"200 states x 5 noise levels: all exclusion checks hold, max capacity rise = {worst_rise:.2e} (<= 1e-9)")
    assert ok


def test_c8_determinism(tmp_path, criterion):
    args = ["sweep", "--dims", "2,2,2", "--kind", "mixed", "--samples", "1000", "--seed", "42", "--theorems", "T1,T3,C4"]
    paths = [tmp_path / "one.json", tmp_path / "two.json"]
    codes = [
        cli.main(args + ["--workers", "1", "--output", str(paths[0])]),
        cli.main(args + ["--workers", "2", "--output", str(paths[1])]),
    ]
    same = paths[0].read_bytes() == paths[1].read_bytes()
    report = json.loads(paths[0].read_text())
    n = len(report["verdicts"])
    all_hold = all(v["holds"] for v in report["verdicts"])
    ok = codes == [0, 0] and same and n == 3000 and all_hold
    criterion(8, ok, f"sweep --seed 42 with 1 and 2 workers: byte-identical = {same}, {n} verdicts, all hold = {all_hold}")
    assert ok


def test_c9_page_average(criterion):
    spec = RandomSpec((2, 2), "haar_pure", 0xC9)
    mean = float(np.mean([entropy(sample(spec, k), {0}) for k in range(10_000)]))
    ok = abs(mean - 0.4809) <= 0.01
    criterion(9, ok, f"mean single-qubit entropy over 10^4 pure 2-qubit states = {mean:.4f} (0.4809 +- 0.01; exact {PAGE_2X2_BITS:.4f})")
    assert ok

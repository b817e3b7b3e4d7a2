"""Tests for the MCS catalogue, blocklength solvers and selection thresholds."""

import io
import math

import pytest

from urllc_admission.fbl_rate import Snr, fit_for
from urllc_admission.mcs import (
    McsCatalogue,
    McsConfig,
    blocklength_bound,
    build_threshold_table,
    default_catalogue,
    full_catalogue,
    load_catalogue,
    min_blocklength,
    practical_blocklength,
    select_mcs,
    snr_threshold,
    _carried_bits,
)

K = 256

# Published five-entry subset: (index, M, binary rate, overall rate).
SUBSET_ROWS = (
    (0, 4, 0.11719, 0.2344),
    (5, 16, 0.36914, 1.4766),
    (11, 64, 0.45508, 2.7305),
    (20, 256, 0.66650, 5.3320),
    (27, 256, 0.92578, 7.4063),
)

# Solver outputs frozen at the default 1e-3 dB tolerance; regression anchors.
THRESHOLDS_1E5 = {0: -5.75237, 5: 4.58866, 11: 10.06634, 20: 19.11999, 27: None}
THRESHOLDS_1E3 = {0: -6.27773, 5: 4.01211, 11: 9.41845, 20: 18.34034, 27: 27.36042}


def brute_force_min_blocklength(k, snr, epsilon, fit, n_max=2500):
    """Independent oracle: exhaustive integer scan."""
    for n in range(1, n_max + 1):
        if _carried_bits(n, snr, epsilon, fit) >= k:
            return n
    return None


class TestCatalogues:
    def test_default_rows_verbatim(self):
        rows = [
            (e.index, e.modulation_order, e.binary_code_rate, e.overall_code_rate)
            for e in default_catalogue()
        ]
        assert rows == list(SUBSET_ROWS)

    def test_full_table_shape(self):
        table = full_catalogue()
        assert len(table) == 28
        assert [e.index for e in table] == list(range(28))
        rates = [e.overall_code_rate for e in table]
        assert all(b > a for a, b in zip(rates, rates[1:]))

    def test_full_table_contains_subset(self):
        table = full_catalogue()
        for index, order, binary, overall in SUBSET_ROWS:
            entry = table.by_index(index)
            assert entry.modulation_order == order
            assert entry.binary_code_rate == pytest.approx(binary, abs=1e-5)
            assert entry.overall_code_rate == pytest.approx(overall, abs=1e-4)

    def test_overall_rate_consistency(self):
        for entry in full_catalogue():
            derived = entry.binary_code_rate * math.log2(entry.modulation_order)
            assert entry.overall_code_rate == pytest.approx(derived, abs=1e-4)

    def test_subset_selection(self):
        sub = full_catalogue().subset([27, 0, 11])
        assert [e.index for e in sub] == [0, 11, 27]
        with pytest.raises(KeyError):
            full_catalogue().subset([99])

    def test_config_validation(self):
        with pytest.raises(ValueError):
            McsConfig(index=0, modulation_order=4, binary_code_rate=1.5)
        with pytest.raises(ValueError):
            McsConfig(index=0, modulation_order=4, binary_code_rate=0.5, overall_code_rate=1.2)
        derived = McsConfig(index=0, modulation_order=4, binary_code_rate=0.5)
        assert derived.overall_code_rate == 1.0

    def test_catalogue_validation(self):
        a = McsConfig(index=0, modulation_order=4, binary_code_rate=0.5)
        b = McsConfig(index=1, modulation_order=4, binary_code_rate=0.25)
        with pytest.raises(ValueError):
            McsCatalogue(entries=(a, b))
        with pytest.raises(ValueError):
            McsCatalogue(entries=())

    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text(
            "index,modulation_order,binary_code_rate\n0,4,0.5\n1,16,0.5\n"
        )
        table = load_catalogue(str(path))
        assert [e.overall_code_rate for e in table] == [1.0, 2.0]

    def test_csv_rejects_bad_header_and_rows(self):
        with pytest.raises(ValueError):
            load_catalogue(io.StringIO("idx,m,rate\n0,4,0.5\n"))
        with pytest.raises(ValueError):
            load_catalogue(
                io.StringIO("index,modulation_order,binary_code_rate\n0,4,fast\n")
            )


class TestPracticalBlocklength:
    def test_reference_payload(self):
        # Ceiling of k / r_c; the mid-rate 256-QAM entry lands at 49 because
        # 256 / 5.3320 = 48.01 still needs a 49th symbol.
        expected = {0: 1093, 5: 174, 11: 94, 20: 49, 27: 35}
        for entry in default_catalogue():
            assert practical_blocklength(K, entry) == expected[entry.index]

    def test_full_table_agrees_with_subset(self):
        subset = {e.index: practical_blocklength(K, e) for e in default_catalogue()}
        full = {e.index: practical_blocklength(K, e) for e in full_catalogue()}
        for index, n_hat in subset.items():
            assert full[index] == n_hat

    def test_exact_division_has_no_spare_symbol(self):
        entry = McsConfig(index=0, modulation_order=4, binary_code_rate=0.5)
        assert practical_blocklength(256, entry) == 256

    def test_rejects_empty_payload(self):
        with pytest.raises(ValueError):
            practical_blocklength(0, default_catalogue().by_index(0))


class TestMinBlocklength:
    def test_high_snr_256qam_anchor(self):
        assert min_blocklength(K, Snr.from_db(30.0), 1e-5, fit_for(256)) == 36

    def test_real_valued_bound_anchor(self):
        bound = blocklength_bound(K, Snr.from_db(30.0), 1e-5, fit_for(256))
        assert 35.9 <= bound <= 36.1

    def test_qpsk_threshold_anchor(self):
        n = min_blocklength(K, Snr.from_db(-5.751), 1e-5, fit_for(4))
        assert abs(n - 1093) <= 1

    def test_tiny_payload(self):
        n = min_blocklength(8, Snr.from_db(60.0), 1e-3, fit_for(256))
        assert n == brute_force_min_blocklength(8, Snr.from_db(60.0), 1e-3, fit_for(256))
        assert _carried_bits(n, Snr.from_db(60.0), 1e-3, fit_for(256)) >= 8

    def test_infeasible_against_cap(self):
        assert min_blocklength(K, Snr.from_db(30.0), 1e-5, fit_for(256), n_max=35) is None

    def test_infeasible_against_asymptotic_ceiling(self):
        # k / n_max above log2(M): rejected without searching.
        assert min_blocklength(10**7, Snr.from_db(30.0), 1e-3, fit_for(4), n_max=10**6) is None

    def test_matches_exhaustive_scan(self):
        for db in range(-6, 31, 4):
            for epsilon in (1e-3, 1e-5):
                for order in (4, 16, 64, 256):
                    fit = fit_for(order)
                    snr = Snr.from_db(db)
                    assert min_blocklength(K, snr, epsilon, fit) == (
                        brute_force_min_blocklength(K, snr, epsilon, fit)
                    ), (db, epsilon, order)

    def test_bound_sits_just_under_integer_answer(self):
        for db in (-4, 2, 10, 24):
            for order in (16, 256):
                fit = fit_for(order)
                snr = Snr.from_db(db)
                n = min_blocklength(K, snr, 1e-3, fit)
                bound = blocklength_bound(K, snr, 1e-3, fit)
                assert n - 1 < bound <= n


class TestSnrThreshold:
    @pytest.mark.parametrize(
        "epsilon,frozen", [(1e-5, THRESHOLDS_1E5), (1e-3, THRESHOLDS_1E3)]
    )
    def test_frozen_values(self, epsilon, frozen):
        for entry in default_catalogue():
            value = snr_threshold(K, entry, epsilon)
            expected = frozen[entry.index]
            if expected is None:
                assert value is None
            else:
                assert value == pytest.approx(expected, abs=2e-3)

    def test_infeasible_up_to_ceiling(self):
        top = default_catalogue().by_index(27)
        assert snr_threshold(K, top, 1e-5) is None
        assert snr_threshold(K, top, 1e-5, ceiling_db=80.0) is None

    def test_self_consistency_around_crossing(self):
        # 0.01 dB above the threshold clears the payload; 0.01 dB below misses.
        for epsilon in (1e-3, 1e-5):
            for entry in default_catalogue():
                threshold = snr_threshold(K, entry, epsilon, tol_db=1e-6)
                if threshold is None:
                    continue
                n_hat = practical_blocklength(K, entry)
                fit = fit_for(entry.modulation_order)
                above = _carried_bits(n_hat, Snr.from_db(threshold + 0.01), epsilon, fit)
                below = _carried_bits(n_hat, Snr.from_db(threshold - 0.01), epsilon, fit)
                assert above >= K
                assert below < K

    def test_stricter_reliability_needs_more_snr(self):
        for entry in default_catalogue():
            loose = snr_threshold(K, entry, 1e-3)
            strict = snr_threshold(K, entry, 1e-5)
            if strict is None:
                continue
            assert strict > loose

    def test_tiny_payload_dip(self):
        # One-bit payloads are feasible near zero SNR on the log2(n)/n term
        # alone, infeasible through a mid-SNR dip, then feasible again; the
        # reported threshold is the dip's upper edge.
        entry = default_catalogue().by_index(0)
        threshold = snr_threshold(1, entry, 1e-3)
        assert threshold is not None and math.isfinite(threshold)
        n_hat = practical_blocklength(1, entry)
        fit = fit_for(entry.modulation_order)
        assert _carried_bits(n_hat, Snr.from_db(threshold + 0.01), 1e-3, fit) >= 1
        assert _carried_bits(n_hat, Snr.from_db(threshold - 0.01), 1e-3, fit) < 1

    def test_rejects_bad_epsilon(self):
        with pytest.raises(ValueError):
            snr_threshold(K, default_catalogue().by_index(0), 0.0)


@pytest.fixture(scope="module")
def table_1e5():
    return build_threshold_table(K, 1e-5, default_catalogue())


class TestSelection:
    def test_mid_range_pick(self, table_1e5):
        assert select_mcs(Snr.from_db(12.0), table_1e5).index == 11

    def test_below_all_thresholds(self, table_1e5):
        assert select_mcs(Snr.from_db(-10.0), table_1e5) is None

    def test_boundary_takes_higher_entry(self, table_1e5):
        edge = table_1e5.entries[1].snr_db
        assert select_mcs(Snr.from_db(edge), table_1e5).index == 5
        assert select_mcs(Snr.from_db(edge - 1e-6), table_1e5).index == 0

    def test_monotone_in_snr(self, table_1e5):
        picks = []
        for db in [x * 0.5 for x in range(-20, 61)]:
            chosen = select_mcs(Snr.from_db(db), table_1e5)
            picks.append(-1 if chosen is None else chosen.overall_code_rate)
        assert all(b >= a for a, b in zip(picks, picks[1:]))

    def test_infeasible_entries_flagged(self, table_1e5):
        flags = {e.mcs.index: e.feasible for e in table_1e5.entries}
        assert flags == {0: True, 5: True, 11: True, 20: True, 27: False}

    def test_subset_thresholds_strictly_increasing(self, table_1e5):
        feasible = [e.snr_db for e in table_1e5.entries if e.feasible]
        assert all(b > a for a, b in zip(feasible, feasible[1:]))

    def test_full_table_has_known_inversion(self):
        # The full catalogue is not threshold-monotone: the top 64-QAM entry
        # needs slightly more SNR than the first 256-QAM one (51- vs
        # 49-symbol codewords).  Selection handles this by scanning from the
        # highest efficiency downward.
        table = build_threshold_table(K, 1e-5, full_catalogue())
        by_index = {e.mcs.index: e.snr_db for e in table.entries}
        assert by_index[19] > by_index[20]
        chosen = select_mcs(Snr.from_db(by_index[20] + 0.01), table)
        assert chosen.index == 20

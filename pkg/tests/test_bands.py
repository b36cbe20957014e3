"""Band ledger parsing, compilation oracles, and split/merge identity."""

import math

import numpy as np
import pytest

from bsrnn.bands import (
    BUILTIN_NAMES,
    BandLedger,
    DegenerateBandError,
    builtin_ledger,
    builtin_scheme,
    compile_scheme,
    format_ledger,
    merge,
    parse_ledger,
    split,
)
from conftest import random_spectrogram

# Independently counted subband totals for every builtin layout at
# 44.1 kHz / 2048. "other" is an alias of v7.
EXPECTED_BAND_COUNTS = {
    "v1": 22,
    "v2": 19,
    "v3": 14,
    "v4": 23,
    "v5": 28,
    "v6": 26,
    "v7": 41,
    "bass": 30,
    "drum": 55,
    "other": 41,
}


def reference_bands(ledger: BandLedger, sample_rate=44100, n_fft=2048):
    """Recompute the partition with plain Python, no shared helpers."""
    edges_hz = []
    lower = 0.0
    for upper, bandwidth in ledger.spans:
        count = int((upper - lower + 1e-6) // bandwidth)
        for k in range(1, count + 1):
            edges_hz.append(lower + k * bandwidth)
        lower = upper
    bins = [0] + [int(math.floor(h * n_fft / sample_rate + 0.5)) for h in edges_hz]
    if ledger.tail_policy == "one-subband":
        bins.append(n_fft // 2 + 1)
    else:
        bins[-1] = n_fft // 2 + 1
    return [(bins[i], bins[i + 1] - bins[i]) for i in range(len(bins) - 1)]


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_band_counts(name):
    scheme = builtin_scheme(name)
    assert scheme.num_bands == EXPECTED_BAND_COUNTS[name]


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_bands_cover_all_bins(name):
    scheme = builtin_scheme(name)
    assert sum(scheme.widths) == 1025
    assert scheme.bands[0][0] == 0
    last_start, last_width = scheme.bands[-1]
    assert last_start + last_width == 1025


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_bands_match_reference_partition(name):
    scheme = builtin_scheme(name)
    assert list(scheme.bands) == reference_bands(builtin_ledger(name))


def test_other_aliases_v7():
    assert builtin_scheme("other").bands == builtin_scheme("v7").bands


def test_v7_lowest_band_is_five_bins():
    # 100 Hz maps to bin round(100 * 2048 / 44100) = 5
    assert builtin_scheme("v7").bands[0] == (0, 5)


def test_hz_to_bin_rounds_half_up():
    # 10852.294921875 Hz sits exactly on bin 504.0 + 0.5 scaled: pick edges
    # around a known value instead. 1000 Hz -> 1000*2048/44100 = 46.44 -> 46.
    scheme = compile_scheme("1000:1000 one-subband")
    assert scheme.bands[0] == (0, 46)


def test_unknown_builtin_name():
    with pytest.raises(LookupError, match="unknown scheme"):
        builtin_scheme("v99")


def test_parse_format_roundtrip():
    text = "1000:100,4000:250,8000:500,16000:1000,20000:2000 one-subband"
    ledger = parse_ledger(text)
    assert format_ledger(ledger) == text
    assert parse_ledger(format_ledger(ledger)) == ledger


def test_builtin_ledgers_roundtrip_via_text():
    for name in BUILTIN_NAMES:
        ledger = builtin_ledger(name)
        again = parse_ledger(format_ledger(ledger))
        assert compile_scheme(again).bands == builtin_scheme(name).bands


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_ledger("no-spans-here")
    with pytest.raises(ValueError):
        parse_ledger("1000 one-subband")
    with pytest.raises(ValueError, match="tail policy"):
        parse_ledger("1000:100 shrug")


def test_ledger_validation():
    with pytest.raises(ValueError, match="at least one span"):
        BandLedger(spans=())
    with pytest.raises(ValueError, match="strictly increasing"):
        BandLedger(spans=((1000.0, 100.0), (500.0, 100.0)))
    with pytest.raises(ValueError, match="bandwidth must be positive"):
        BandLedger(spans=((1000.0, -5.0),))
    with pytest.raises(ValueError, match="exceeds span width"):
        BandLedger(spans=((1000.0, 2000.0),))


def test_compile_rejects_partial_interior_span():
    # 1500 is not a multiple of 1000 and the span is not last
    with pytest.raises(ValueError, match="multiple of its"):
        compile_scheme("1500:1000,3000:500 one-subband")


def test_compile_allows_partial_final_span():
    scheme = compile_scheme("22050:1000 merge-into-last")
    assert scheme.num_bands == 22


def test_compile_rejects_above_nyquist():
    with pytest.raises(ValueError, match="Nyquist"):
        compile_scheme("30000:1000 one-subband")


def test_compile_rejects_odd_n_fft():
    with pytest.raises(ValueError, match="even"):
        compile_scheme("1000:500 one-subband", n_fft=2047)


def test_degenerate_band_detected():
    # 10 Hz bandwidth is far below one bin (21.5 Hz) at 44.1 kHz / 2048
    with pytest.raises(DegenerateBandError):
        compile_scheme("100:10,200:100 one-subband")


def test_split_merge_bit_exact():
    spec = random_spectrogram(frames=17, seed=12)
    for name in ("v7", "bass", "drum"):
        scheme = builtin_scheme(name)
        blocks = split(spec, scheme)
        assert len(blocks) == scheme.num_bands
        back = merge(blocks, scheme, hop=spec.hop)
        assert back.bins.dtype == spec.bins.dtype
        np.testing.assert_array_equal(back.bins, spec.bins)


def test_split_blocks_are_views_in_order():
    spec = random_spectrogram(frames=5, seed=13)
    scheme = builtin_scheme("v1")
    blocks = split(spec, scheme)
    cursor = 0
    for block, width in zip(blocks, scheme.widths):
        assert block.shape == (width, 5)
        np.testing.assert_array_equal(block, spec.bins[cursor : cursor + width])
        cursor += width


def test_split_rejects_wrong_bin_count():
    spec = random_spectrogram(frames=4, seed=14, n_fft=1024, hop=256)
    with pytest.raises(ValueError, match="bins"):
        split(spec, builtin_scheme("v7"))


def test_merge_rejects_malformed_blocks():
    spec = random_spectrogram(frames=6, seed=15)
    scheme = builtin_scheme("v7")
    blocks = split(spec, scheme)
    with pytest.raises(ValueError, match="subbands"):
        merge(blocks[:-1], scheme)
    ragged = list(blocks)
    ragged[3] = ragged[3][:, :4]
    with pytest.raises(ValueError, match="frame count"):
        merge(ragged, scheme)
    widths = scheme.widths
    i, j = next(
        (a, a + 1) for a in range(len(widths) - 1) if widths[a] != widths[a + 1]
    )
    wrong = list(blocks)
    wrong[i], wrong[j] = wrong[j], wrong[i]
    with pytest.raises(ValueError, match="rows"):
        merge(wrong, scheme)


def test_scheme_rejects_gaps():
    from bsrnn.bands import BandScheme

    ledger = parse_ledger("1000:500 one-subband")
    with pytest.raises(ValueError, match="contiguous"):
        BandScheme(
            name="bad",
            bands=((0, 10), (11, 1014)),
            n_fft=2048,
            sample_rate=44100,
            ledger=ledger,
        )
    with pytest.raises(ValueError, match="cover"):
        BandScheme(
            name="bad",
            bands=((0, 10),),
            n_fft=2048,
            sample_rate=44100,
            ledger=ledger,
        )

"""Command-line client against the in-process service."""

import json

import numpy as np
import pytest

from bsrnn import wavio, weights_io
from bsrnn.cli import main
from conftest import (
    TINY_LEDGER,
    identity_mask_weights,
    make_track,
    write_stem_tree,
)

TINY_ARGS = ["--feature-dim", "8", "--blocks", "1", "--hidden", "4"]


@pytest.fixture(scope="module")
def identity_ckpt(tmp_path_factory, tiny_config):
    path = tmp_path_factory.mktemp("cli-ckpt") / "identity.bsrw"
    weights_io.save_weights(str(path), identity_mask_weights(tiny_config), tiny_config)
    return str(path)


def test_scheme_list(capsys):
    assert main(["scheme", "list"]) == 0
    out = capsys.readouterr().out
    assert "v7\t41" in out
    assert "drum\t55" in out
    assert len(out.strip().splitlines()) == 10


def test_scheme_show_text(capsys):
    assert main(["scheme", "show", "--ledger", TINY_LEDGER]) == 0
    out = capsys.readouterr().out
    assert "bands: 7" in out
    assert "bins: 1025" in out
    assert "band 0: bins [0, 46)" in out


def test_scheme_show_json(capsys):
    assert main(["scheme", "show", "--scheme", "v1", "--json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["num_bands"] == 22
    assert body["bands"][0] == [0, 46]
    assert sum(width for _, width in body["bands"]) == 1025


def test_scheme_show_requires_one_source():
    with pytest.raises(SystemExit) as excinfo:
        main(["scheme", "show", "--scheme", "v1", "--ledger", TINY_LEDGER])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit):
        main(["scheme", "show"])


def test_no_command_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2


def test_weights_init_info_flow(tmp_path, capsys):
    out = str(tmp_path / "w.bsrw")
    code = main(
        ["weights", "init", "--ledger", TINY_LEDGER, "--seed", "4", "--out", out]
        + TINY_ARGS
    )
    assert code == 0
    assert "90 tensors" in capsys.readouterr().out

    assert main(["weights", "info", out, "--json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["feature_dim"] == 8
    assert body["num_bands"] == 7

    assert main(["weights", "info", out]) == 0
    text = capsys.readouterr().out
    assert "feature_dim: 8" in text


def test_weights_init_rejects_unknown_scheme(tmp_path, capsys):
    code = main(
        ["weights", "init", "--scheme", "v99", "--out", str(tmp_path / "w.bsrw")]
        + TINY_ARGS
    )
    assert code == 1
    assert "unknown scheme" in capsys.readouterr().err


def test_weights_info_missing_file(tmp_path, capsys):
    assert main(["weights", "info", str(tmp_path / "no.bsrw")]) == 1
    assert "error:" in capsys.readouterr().err


def test_weights_probe_flow(tmp_path, identity_ckpt, capsys):
    from conftest import random_spectrogram

    spec = random_spectrogram(frames=3, seed=91)
    probe_in = str(tmp_path / "in.bspx")
    probe_out = str(tmp_path / "out.bspm")
    weights_io.save_probe(probe_in, spec, kind="spectrogram")
    code = main(
        ["weights", "probe", "--weights", identity_ckpt, "--probe", probe_in, "--out", probe_out]
    )
    assert code == 0
    assert "1025x3 mask" in capsys.readouterr().out
    mask, kind = weights_io.load_probe(probe_out)
    assert kind == "mask"
    assert np.all(mask.bins == 1.0 + 0.0j)


def test_separate_flow(tmp_path, identity_ckpt, capsys):
    track = make_track(seconds=0.8, channels=1, seed=92, sample_rate=44100)
    in_path = str(tmp_path / "in.wav")
    out_path = str(tmp_path / "out.wav")
    wavio.write_wav(in_path, track)
    code = main(
        [
            "separate",
            "--weights",
            identity_ckpt,
            "--in",
            in_path,
            "--out",
            out_path,
            "--chunk",
            "0.5",
            "--hop",
            "0.25",
        ]
    )
    assert code == 0
    assert "1 ch" in capsys.readouterr().out
    back = wavio.read_wav(out_path)
    np.testing.assert_allclose(back.data, track.data, atol=1e-5)


def test_sad_flow(tmp_path, capsys):
    rate = 44100
    rng = np.random.default_rng(93)
    from bsrnn.audio import AudioTrack

    data = np.concatenate(
        [0.5 * rng.standard_normal((1, 4 * rate)), np.zeros((1, 4 * rate))], axis=1
    )
    in_path = str(tmp_path / "t.wav")
    wavio.write_wav(in_path, AudioTrack(data=data, sample_rate=rate))
    code = main(["sad", "--in", in_path, "--segment-seconds", "2.0"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.splitlines() == [f"0\t{2 * rate}", f"{rate}\t{2 * rate}", f"{2 * rate}\t{2 * rate}"]


def test_mix_flow(tmp_path, capsys):
    stems = write_stem_tree(tmp_path / "stems", sample_rate=8000)
    out_dir = tmp_path / "out"
    code = main(
        [
            "mix",
            "--stems-dir",
            str(stems),
            "--target",
            "vocal",
            "--out-dir",
            str(out_dir),
            "--count",
            "2",
            "--chunk",
            "0.5",
        ]
    )
    assert code == 0
    assert "wrote 2 examples" in capsys.readouterr().out
    assert (out_dir / "manifest.tsv").exists()
    assert (out_dir / "0001_mixture.wav").exists()


def test_mix_rejects_bad_target(tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        main(
            [
                "mix",
                "--stems-dir",
                str(tmp_path),
                "--target",
                "piano",
                "--out-dir",
                str(tmp_path / "out"),
            ]
        )
    assert excinfo.value.code == 2


def test_semisample_flow(tmp_path, identity_ckpt, capsys):
    labeled = write_stem_tree(tmp_path / "labeled", sample_rate=44100, seconds=0.8)
    unlabeled_dir = tmp_path / "unlabeled"
    unlabeled_dir.mkdir()
    wavio.write_wav(
        str(unlabeled_dir / "song.wav"),
        make_track(seconds=0.8, seed=94, sample_rate=44100),
    )
    code = main(
        [
            "semisample",
            "--labeled-dir",
            str(labeled),
            "--unlabeled-dir",
            str(unlabeled_dir),
            "--weights",
            identity_ckpt,
            "--target",
            "vocal",
            "--out-dir",
            str(tmp_path / "out"),
            "--chunk",
            "0.5",
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "0\tclean_target" in out
    assert "wrote 1 examples" in out


def test_eval_flow(tmp_path, capsys):
    from bsrnn.audio import AudioTrack

    ref_dir = tmp_path / "ref"
    est_dir = tmp_path / "est"
    ref_dir.mkdir()
    est_dir.mkdir()
    track = make_track(seconds=0.5, seed=95, sample_rate=8000)
    wavio.write_wav(str(ref_dir / "a.wav"), track)
    wavio.write_wav(
        str(est_dir / "a.wav"), AudioTrack(data=1.1 * track.data, sample_rate=8000)
    )
    code = main(["eval", "--ref-dir", str(ref_dir), "--est-dir", str(est_dir)])
    assert code == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0].startswith("a.wav\t2")
    assert lines[-1].startswith("corpus\t")


def test_eval_missing_dir(tmp_path, capsys):
    assert main(["eval", "--ref-dir", str(tmp_path / "x"), "--est-dir", str(tmp_path)]) == 1
    assert "error:" in capsys.readouterr().err

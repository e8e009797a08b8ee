import numpy as np
import pytest

from opsalign.nn.serialize import MAGIC, load_arrays, save_arrays


def test_round_trip_preserves_names_shapes_values(tmp_path):
    rng = np.random.default_rng(0)
    entries = [
        ("feature_extractor.0.weight", rng.normal(size=(10, 18, 10))),
        ("feature_extractor.0.bias", rng.normal(size=10)),
        ("scalar", np.array(3.75)),
        ("regressor.2.weight", rng.normal(size=(1, 50))),
    ]
    path = tmp_path / "snapshot.bin"
    save_arrays(path, entries)
    loaded = load_arrays(path)
    assert list(loaded.keys()) == [name for name, _ in entries]
    for name, arr in entries:
        assert loaded[name].shape == np.asarray(arr).shape
        assert np.array_equal(loaded[name], arr)


def test_round_trip_is_byte_stable(tmp_path):
    entries = {"a": np.arange(6, dtype=float).reshape(2, 3)}
    p1, p2 = tmp_path / "one.bin", tmp_path / "two.bin"
    save_arrays(p1, entries)
    save_arrays(p2, load_arrays(p1))
    assert p1.read_bytes() == p2.read_bytes()


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOTMAGIC" + b"\x00" * 16)
    with pytest.raises(ValueError, match="bad magic"):
        load_arrays(path)


def test_magic_is_eight_bytes():
    assert len(MAGIC) == 8

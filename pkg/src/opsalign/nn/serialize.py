"""Self-describing binary container for named float64 arrays.

Layout (all integers little-endian):
    8 bytes   magic b"OPALARR\\0"
    uint32    format version (1)
    uint32    number of entries
    per entry:
        uint16      name length
        bytes       UTF-8 name
        uint8       ndim
        uint32*ndim dims
        float64*N   row-major little-endian data

Used for both parameter snapshots and cached window sets.
"""

import struct

import numpy as np

MAGIC = b"OPALARR\x00"
VERSION = 1


def save_arrays(path, entries):
    """Write ordered (name, array) pairs; entries may be a dict or list."""
    if isinstance(entries, dict):
        entries = list(entries.items())
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, len(entries)))
        for name, arr in entries:
            arr = np.asarray(arr, dtype="<f8")
            encoded = name.encode("utf-8")
            fh.write(struct.pack("<H", len(encoded)))
            fh.write(encoded)
            fh.write(struct.pack("<B", arr.ndim))
            fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
            fh.write(arr.tobytes(order="C"))


def load_arrays(path):
    """Read the container back into an ordered name -> float64 array dict."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a parameter container (bad magic)")
        version, count = struct.unpack("<II", fh.read(8))
        if version != VERSION:
            raise ValueError(f"{path}: unsupported container version {version}")
        out = {}
        for _ in range(count):
            (name_len,) = struct.unpack("<H", fh.read(2))
            name = fh.read(name_len).decode("utf-8")
            (ndim,) = struct.unpack("<B", fh.read(1))
            shape = struct.unpack(f"<{ndim}I", fh.read(4 * ndim)) if ndim else ()
            n = int(np.prod(shape)) if shape else 1
            data = np.frombuffer(fh.read(8 * n), dtype="<f8").astype(np.float64)
            out[name] = data.reshape(shape)
        return out

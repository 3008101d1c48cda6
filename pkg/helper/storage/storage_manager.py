"""
Result store for ifsweep.
Writes reports under the output directory and exports lattice measures as
CSV tables and compact binary dumps.

Binary measure layout (all integers little-endian):

    magic        4 bytes  b"IFSM"
    version      u8       1
    level        u32
    base         u32
    lattice den  bigint
    mass den     bigint
    count        u64
    encoding     u8       0 = int64 pairs, 1 = bigint pairs
    atoms        count x (offset, mass numerator)

where bigint is a u32 byte length followed by that many bytes of signed
two's-complement value.
"""

import json
import os
import struct
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..config.config import get_config
from ..config.logging_config import get_logger, log_error, log_function_entry, log_function_exit
from ..ifs.errors import ParseError
from ..measure.lattice import INT64_SAFE, LatticeMeasure

logger = get_logger(__name__)

MEASURE_MAGIC = b"IFSM"
MEASURE_VERSION = 1
MEASURE_CSV_COLUMNS = ["offset", "numerator", "denominator", "position", "mass"]

_HEADER = struct.Struct("<4sBII")
_COUNT = struct.Struct("<QB")
_LENGTH = struct.Struct("<I")


def _encode_bigint(value: int) -> bytes:
    value = int(value)
    size = max(1, (value.bit_length() + 8) // 8)
    return _LENGTH.pack(size) + value.to_bytes(size, "little", signed=True)


def _decode_bigint(data: memoryview, pos: int) -> Tuple[int, int]:
    (size,) = _LENGTH.unpack_from(data, pos)
    pos += _LENGTH.size
    if pos + size > len(data):
        raise ParseError("Truncated measure dump")
    return int.from_bytes(data[pos:pos + size], "little", signed=True), pos + size


def measure_to_bytes(measure: LatticeMeasure) -> bytes:
    parts = [
        _HEADER.pack(MEASURE_MAGIC, MEASURE_VERSION, measure.level, measure.base),
        _encode_bigint(measure.lattice_denominator),
        _encode_bigint(measure.mass_denominator),
    ]
    fits = all(arr.dtype != object for arr in (measure.offsets, measure.mass_numerators))
    parts.append(_COUNT.pack(len(measure), 0 if fits else 1))
    if fits:
        pairs = np.column_stack((measure.offsets, measure.mass_numerators)).astype("<i8")
        parts.append(pairs.tobytes())
    else:
        for k, w in zip(measure.offsets, measure.mass_numerators):
            parts.append(_encode_bigint(k))
            parts.append(_encode_bigint(w))
    return b"".join(parts)


def measure_from_bytes(blob: bytes) -> LatticeMeasure:
    data = memoryview(blob)
    if len(data) < _HEADER.size:
        raise ParseError("Truncated measure dump")
    magic, version, level, base = _HEADER.unpack_from(data, 0)
    if magic != MEASURE_MAGIC or version != MEASURE_VERSION:
        raise ParseError(f"Not a measure dump (magic {magic!r}, version {version})")
    lattice_den, pos = _decode_bigint(data, _HEADER.size)
    mass_den, pos = _decode_bigint(data, pos)
    count, encoding = _COUNT.unpack_from(data, pos)
    pos += _COUNT.size

    if encoding == 0:
        if pos + 16 * count > len(data):
            raise ParseError("Truncated measure dump")
        pairs = np.frombuffer(data[pos:pos + 16 * count], dtype="<i8").reshape(count, 2)
        offsets = pairs[:, 0].astype(np.int64)
        numerators = pairs[:, 1].astype(np.int64)
    else:
        values = []
        for _ in range(2 * count):
            value, pos = _decode_bigint(data, pos)
            values.append(value)
        offsets = np.array(values[0::2], dtype=object)
        numerators = np.array(values[1::2], dtype=object)
        if all(abs(v) < INT64_SAFE for v in values):
            offsets, numerators = offsets.astype(np.int64), numerators.astype(np.int64)
    return LatticeMeasure(level, base, lattice_den, offsets, numerators, mass_den)


def measure_frame(measure: LatticeMeasure) -> pd.DataFrame:
    """One row per atom: exact offset and mass numerator plus float position and mass."""
    return pd.DataFrame({
        "offset": [int(k) for k in measure.offsets],
        "numerator": [int(w) for w in measure.mass_numerators],
        "denominator": [measure.mass_denominator] * len(measure),
        "position": measure.positions(),
        "mass": measure.masses(),
    }, columns=MEASURE_CSV_COLUMNS)


class ResultStore:
    """Flat-file store for reports and measure exports."""

    def __init__(self, root: Optional[str] = None):
        self.root = Path(root or get_config().app.output_directory)
        logger.debug(f"Result store rooted at {self.root}")

    def path_for(self, name: Union[str, Path]) -> Path:
        """Absolute names are kept; relative names live under the store root."""
        path = Path(name)
        return path if path.is_absolute() else self.root / path

    def _write(self, name: Union[str, Path], data: Union[str, bytes]) -> Path:
        path = self.path_for(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            if isinstance(data, bytes):
                path.write_bytes(data)
            else:
                # newline="" keeps report bytes identical across platforms
                with open(path, "w", encoding="utf-8", newline="") as f:
                    f.write(data)
        except OSError as e:
            log_error(logger, e, f"Writing {path}")
            raise
        logger.info(f"Saved {path} ({len(data)} {'bytes' if isinstance(data, bytes) else 'chars'})")
        return path

    def save_text(self, name: Union[str, Path], text: str) -> Path:
        return self._write(name, text)

    def save_bytes(self, name: Union[str, Path], data: bytes) -> Path:
        return self._write(name, data)

    def save_json(self, name: Union[str, Path], data: Any) -> Path:
        return self._write(name, json.dumps(data, indent=2, ensure_ascii=False) + "\n")

    def load_text(self, name: Union[str, Path]) -> str:
        return self.path_for(name).read_text(encoding="utf-8")

    def load_json(self, name: Union[str, Path]) -> Any:
        return json.loads(self.load_text(name))

    def list_results(self, suffix: Optional[str] = None) -> List[Dict[str, Any]]:
        """Files under the store root with size and modification time."""
        if not self.root.exists():
            return []
        files = []
        for path in sorted(self.root.rglob("*")):
            if path.is_file() and (suffix is None or path.suffix == suffix):
                stat = path.stat()
                files.append({"name": str(path.relative_to(self.root)),
                              "size": stat.st_size, "modified": stat.st_mtime})
        return files

    def save_measure_csv(self, name: Union[str, Path], measure: LatticeMeasure) -> Path:
        log_function_entry(logger, "save_measure_csv", name=str(name), atoms=len(measure))
        text = measure_frame(measure).to_csv(index=False, float_format="%.17g", lineterminator="\n")
        path = self._write(name, text)
        log_function_exit(logger, "save_measure_csv", str(path))
        return path

    def load_measure_csv(self, name: Union[str, Path]) -> pd.DataFrame:
        """The atom table as written; exact columns are read back as Python ints."""
        frame = pd.read_csv(self.path_for(name), dtype={"offset": object, "numerator": object,
                                                         "denominator": object})
        for column in ("offset", "numerator", "denominator"):
            frame[column] = frame[column].map(int)
        return frame

    def save_measure_binary(self, name: Union[str, Path], measure: LatticeMeasure) -> Path:
        return self._write(name, measure_to_bytes(measure))

    def load_measure_binary(self, name: Union[str, Path]) -> LatticeMeasure:
        return measure_from_bytes(self.path_for(name).read_bytes())

    def get_storage_info(self) -> Dict[str, Any]:
        files = self.list_results()
        return {
            "root": str(self.root),
            "exists": self.root.exists(),
            "file_count": len(files),
            "total_size_mb": sum(f["size"] for f in files) / (1024 * 1024),
            "writable": os.access(self.root if self.root.exists() else self.root.parent or ".",
                                  os.W_OK),
        }


# Global result store instance
_result_store = None


def get_result_store() -> ResultStore:
    """Get the global result store instance."""
    global _result_store
    if _result_store is None:
        _result_store = ResultStore()
    return _result_store

"""Reader for Len/Msg/MD known-answer files."""

from dataclasses import dataclass
from pathlib import Path

DIGEST_BYTES = 32


class KatFormatError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class KatEntry:
    bit_length: int
    msg: bytes
    md: bytes
    lineno: int = 0

    def __post_init__(self):
        if self.bit_length < 0:
            raise ValueError("negative message length")
        need = (self.bit_length + 7) // 8
        # Len = 0 entries carry a single placeholder byte "00"
        if len(self.msg) != need and not (self.bit_length == 0 and len(self.msg) <= 1):
            raise ValueError(f"Msg has {len(self.msg)} bytes, Len needs {need}")
        if len(self.md) != DIGEST_BYTES:
            raise ValueError(f"MD has {len(self.md)} bytes, expected {DIGEST_BYTES}")

    @property
    def message(self) -> bytes:
        return self.msg[:(self.bit_length + 7) // 8]


def _hex(path, lineno, value):
    try:
        return bytes.fromhex(value)
    except ValueError:
        raise KatFormatError(path, lineno, f"bad hex {value[:24]!r}") from None


def parse_kat(text: str, path="<kat>") -> list[KatEntry]:
    """Parse Len/Msg/MD records; '#' comments and '[...]' headers are skipped."""
    entries = []
    record = {}
    start = 0

    def flush(lineno):
        if not record:
            return
        missing = [k for k in ("Len", "Msg", "MD") if k not in record]
        if missing:
            raise KatFormatError(path, start, f"record missing {', '.join(missing)}")
        try:
            entries.append(KatEntry(record["Len"], record["Msg"], record["MD"], start))
        except ValueError as exc:
            raise KatFormatError(path, start, str(exc)) from None
        record.clear()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("["):
            continue
        key, sep, value = (p.strip() for p in line.partition("="))
        if not sep:
            raise KatFormatError(path, lineno, f"expected 'key = value', got {line[:40]!r}")
        if key == "Len":
            flush(lineno)
            start = lineno
            try:
                record["Len"] = int(value)
            except ValueError:
                raise KatFormatError(path, lineno, f"bad length {value!r}") from None
        elif key in ("Msg", "MD"):
            if "Len" not in record:
                raise KatFormatError(path, lineno, f"{key} before Len")
            if key in record:
                raise KatFormatError(path, lineno, f"duplicate {key}")
            record[key] = _hex(path, lineno, value)
        else:
            raise KatFormatError(path, lineno, f"unknown key {key!r}")
    flush(None)
    return entries


def read_kat(path) -> list[KatEntry]:
    path = Path(path)
    return parse_kat(path.read_text(), path)

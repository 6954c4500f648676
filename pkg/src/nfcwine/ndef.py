"""NDEF binary message codec.

Encodes and decodes NDEF messages: sequences of records carrying flag bits
(MB, ME, CF, SR, IL), a 3-bit TNF, a type string, an optional id and a
payload.  Chunked payloads (initial chunk with CF set, middle chunks with
TNF 0x06 Unchanged, terminating chunk with CF clear) are reassembled on
decode and can be produced with :func:`chunk_payload`.

Wire layout per record:

    flags/TNF (1) | TYPE_LENGTH (1) | PAYLOAD_LENGTH (1 or 4, big endian)
    | ID_LENGTH (1, iff IL) | TYPE | ID | PAYLOAD

Canonical form, used by the encoder: SR is set exactly when the payload is
at most 255 octets, MB only on the first serialized record, ME only on the
last.  The multi-octet PAYLOAD_LENGTH is most-significant-octet first.
Decoding is total over arbitrary byte strings: every malformed input maps
to a subclass of :class:`NdefDecodeError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

TNF_EMPTY = 0x00
TNF_WELL_KNOWN = 0x01
TNF_MIME = 0x02
TNF_UNCHANGED = 0x06

_FLAG_MB = 0x80
_FLAG_ME = 0x40
_FLAG_CF = 0x20
_FLAG_SR = 0x10
_FLAG_IL = 0x08

MAX_PAYLOAD = 2**32 - 1  # 4-octet length field limit


class NdefError(Exception):
    """Base class for all codec errors."""


class EmptyMessage(NdefError):
    pass


class PayloadTooLarge(NdefError):
    pass


class TypeTooLong(NdefError):
    pass


class AlreadyChunked(NdefError):
    pass


class NdefDecodeError(NdefError):
    """Base class for structured decode failures."""


class TruncatedRecord(NdefDecodeError):
    pass


class MissingMessageBegin(NdefDecodeError):
    pass


class MissingMessageEnd(NdefDecodeError):
    pass


class DuplicateMessageBegin(NdefDecodeError):
    pass


class ChunkSequenceViolation(NdefDecodeError):
    pass


class TrailingBytes(NdefDecodeError):
    pass


@dataclass(frozen=True)
class NdefRecord:
    tnf: int
    type_bytes: bytes = b""
    payload: bytes = b""
    id_bytes: bytes | None = None  # present iff IL on the wire
    mb: bool = False
    me: bool = False
    cf: bool = False
    sr: bool = True

    def canonical(self, mb: bool, me: bool) -> "NdefRecord":
        """Copy with positional/size-derived flags normalized."""
        return replace(self, mb=mb, me=me, sr=len(self.payload) <= 255)


@dataclass(frozen=True)
class NdefMessage:
    records: tuple[NdefRecord, ...]

    def __init__(self, records) -> None:
        object.__setattr__(self, "records", tuple(records))


def make_mime_record(mime_type: str, payload: bytes) -> NdefRecord:
    """Record with TNF MIME media, no id field."""
    type_bytes = mime_type.encode("ascii")
    if not 1 <= len(type_bytes) <= 255:
        raise TypeTooLong(f"mime type must be 1..255 octets, got {len(type_bytes)}")
    return NdefRecord(tnf=TNF_MIME, type_bytes=type_bytes, payload=bytes(payload),
                      sr=len(payload) <= 255)


def encode_message(msg: NdefMessage) -> bytes:
    """Serialize; MB/ME/SR are derived, not taken from the records."""
    if not msg.records:
        raise EmptyMessage("a message carries at least one record")
    out = bytearray()
    last = len(msg.records) - 1
    for i, rec in enumerate(msg.records):
        out += _encode_record(rec, mb=(i == 0), me=(i == last))
    return bytes(out)


def _encode_record(rec: NdefRecord, mb: bool, me: bool) -> bytes:
    if len(rec.payload) > MAX_PAYLOAD:
        raise PayloadTooLarge(f"payload of {len(rec.payload)} octets exceeds 32-bit length field")
    if len(rec.type_bytes) > 255:
        raise TypeTooLong("TYPE_LENGTH is an 8-bit integer")
    sr = len(rec.payload) <= 255
    il = rec.id_bytes is not None
    flags = rec.tnf & 0x07
    flags |= (_FLAG_MB if mb else 0) | (_FLAG_ME if me else 0)
    flags |= (_FLAG_CF if rec.cf else 0) | (_FLAG_SR if sr else 0) | (_FLAG_IL if il else 0)
    out = bytearray([flags, len(rec.type_bytes)])
    if sr:
        out.append(len(rec.payload))
    else:
        out += len(rec.payload).to_bytes(4, "big")
    if il:
        out.append(len(rec.id_bytes))
    out += rec.type_bytes
    if il:
        out += rec.id_bytes
    out += rec.payload
    return bytes(out)


@dataclass
class _WireRecord:
    mb: bool
    me: bool
    cf: bool
    sr: bool
    tnf: int
    type_bytes: bytes
    id_bytes: bytes | None
    payload: bytes


def _parse_record(buf: bytes, pos: int) -> tuple[_WireRecord, int]:
    def take(n: int) -> bytes:
        nonlocal pos
        if pos + n > len(buf):
            raise TruncatedRecord(f"buffer ends mid-record at offset {pos}")
        chunk = buf[pos:pos + n]
        pos += n
        return chunk

    flags = take(1)[0]
    type_len = take(1)[0]
    if flags & _FLAG_SR:
        payload_len = take(1)[0]
    else:
        payload_len = int.from_bytes(take(4), "big")
    id_len = take(1)[0] if flags & _FLAG_IL else 0
    type_bytes = take(type_len)
    id_bytes = take(id_len) if flags & _FLAG_IL else None
    payload = take(payload_len)
    return _WireRecord(
        mb=bool(flags & _FLAG_MB), me=bool(flags & _FLAG_ME),
        cf=bool(flags & _FLAG_CF), sr=bool(flags & _FLAG_SR),
        tnf=flags & 0x07, type_bytes=type_bytes, id_bytes=id_bytes,
        payload=payload), pos


def decode_message(data: bytes) -> NdefMessage:
    """Parse and validate a serialized message, reassembling chunk runs."""
    if not data:
        raise TruncatedRecord("empty buffer")
    wire: list[_WireRecord] = []
    pos = 0
    while True:
        rec, pos = _parse_record(data, pos)
        if not wire and not rec.mb:
            raise MissingMessageBegin("first record lacks MB")
        if wire and rec.mb:
            raise DuplicateMessageBegin("MB set on a non-initial record")
        wire.append(rec)
        if rec.me:
            break
        if pos >= len(data):
            raise MissingMessageEnd("buffer exhausted before ME")
    if pos != len(data):
        raise TrailingBytes(f"{len(data) - pos} octets after ME record")

    records = _reassemble(wire)
    last = len(records) - 1
    return NdefMessage(r.canonical(mb=(i == 0), me=(i == last)) for i, r in enumerate(records))


def _reassemble(wire: list[_WireRecord]) -> list[NdefRecord]:
    records: list[NdefRecord] = []
    i = 0
    while i < len(wire):
        rec = wire[i]
        if rec.tnf == TNF_UNCHANGED:
            raise ChunkSequenceViolation("Unchanged TNF outside a chunk sequence")
        if not rec.cf:
            records.append(NdefRecord(tnf=rec.tnf, type_bytes=rec.type_bytes,
                                      payload=rec.payload, id_bytes=rec.id_bytes))
            i += 1
            continue
        # initial chunk; collect middles and the terminator
        payload = bytearray(rec.payload)
        i += 1
        while True:
            if i >= len(wire):
                raise ChunkSequenceViolation("chunk sequence missing its terminator")
            nxt = wire[i]
            if nxt.tnf != TNF_UNCHANGED or nxt.type_bytes or nxt.id_bytes is not None:
                raise ChunkSequenceViolation(
                    "continuation chunk must have TNF Unchanged, no TYPE, no ID")
            payload += nxt.payload
            i += 1
            if not nxt.cf:
                break
        records.append(NdefRecord(tnf=rec.tnf, type_bytes=rec.type_bytes,
                                  payload=bytes(payload), id_bytes=rec.id_bytes))
    return records


def chunk_payload(record: NdefRecord, max_chunk: int) -> list[NdefRecord]:
    """Split a record's payload into a CF-flagged chunk sequence.

    Returns ``[record]`` unchanged when the payload already fits.
    ``decode_message`` of the encoded sequence restores the original record.
    """
    if record.cf:
        raise AlreadyChunked("record is already a chunk")
    if max_chunk < 1:
        raise ValueError("max_chunk must be >= 1")
    if len(record.payload) <= max_chunk:
        return [record]
    pieces = [record.payload[i:i + max_chunk]
              for i in range(0, len(record.payload), max_chunk)]
    chunks = [replace(record, payload=pieces[0], cf=True, sr=len(pieces[0]) <= 255)]
    for piece in pieces[1:-1]:
        chunks.append(NdefRecord(tnf=TNF_UNCHANGED, payload=piece, cf=True))
    chunks.append(NdefRecord(tnf=TNF_UNCHANGED, payload=pieces[-1], cf=False))
    return chunks

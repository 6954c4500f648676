import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nfcwine import ndef
from nfcwine.hashing import gen_tag_hash

# TNF values legal on a standalone record (0x06 only appears inside chunk runs)
STANDALONE_TNFS = [0x00, 0x01, 0x02, 0x03, 0x04, 0x05, 0x07]

records_st = st.builds(
    ndef.NdefRecord,
    tnf=st.sampled_from(STANDALONE_TNFS),
    type_bytes=st.binary(max_size=32),
    payload=st.binary(max_size=300),
    id_bytes=st.one_of(st.none(), st.binary(max_size=16)),
)
messages_st = st.builds(ndef.NdefMessage, st.lists(records_st, min_size=1, max_size=4))


def canonical_fields(msg):
    return [(r.tnf, r.type_bytes, r.payload, r.id_bytes) for r in msg.records]


@settings(max_examples=300, deadline=None)
@given(messages_st)
def test_round_trip_identity(msg):
    decoded = ndef.decode_message(ndef.encode_message(msg))
    assert canonical_fields(decoded) == canonical_fields(msg)


@settings(max_examples=200, deadline=None)
@given(messages_st)
def test_canonical_reencode_fixed_point(msg):
    wire = ndef.encode_message(msg)
    assert ndef.encode_message(ndef.decode_message(wire)) == wire


def test_golden_tag_record_wire_bytes():
    """Hand-assembled wire image of a single tag-value record."""
    value = gen_tag_hash(1, 0)
    record = ndef.make_mime_record("nfcwine/tag", value.encode("ascii"))
    wire = ndef.encode_message(ndef.NdefMessage([record]))
    assert len(wire) == 46
    assert wire[0] == 0xD2                 # MB | ME | SR | TNF MIME
    assert wire[1] == 11                   # TYPE_LENGTH of "nfcwine/tag"
    assert wire[2] == 32                   # PAYLOAD_LENGTH, short record
    assert wire[3:14] == b"nfcwine/tag"
    assert wire[14:] == value.encode("ascii")


def test_short_record_boundary():
    for size, sr_expected in ((0, True), (255, True), (256, False)):
        rec = ndef.NdefRecord(tnf=ndef.TNF_MIME, type_bytes=b"t", payload=b"x" * size)
        wire = ndef.encode_message(ndef.NdefMessage([rec]))
        assert bool(wire[0] & 0x10) is sr_expected
        if sr_expected:
            assert wire[2] == size
        else:
            assert wire[2:6] == size.to_bytes(4, "big")
        decoded = ndef.decode_message(wire)
        assert decoded.records[0].payload == rec.payload


def test_id_field_round_trip_distinguishes_absent_from_empty():
    with_empty = ndef.NdefRecord(tnf=1, type_bytes=b"T", payload=b"p", id_bytes=b"")
    without = ndef.NdefRecord(tnf=1, type_bytes=b"T", payload=b"p", id_bytes=None)
    for rec in (with_empty, without):
        decoded = ndef.decode_message(ndef.encode_message(ndef.NdefMessage([rec])))
        assert decoded.records[0].id_bytes == rec.id_bytes


def test_chunking_round_trip():
    rec = ndef.make_mime_record("nfcwine/tag", bytes(range(256)) * 3)
    chunks = ndef.chunk_payload(rec, 100)
    assert len(chunks) == 8
    assert chunks[0].cf and chunks[0].tnf == ndef.TNF_MIME
    assert all(c.tnf == ndef.TNF_UNCHANGED for c in chunks[1:])
    assert not chunks[-1].cf
    decoded = ndef.decode_message(ndef.encode_message(ndef.NdefMessage(chunks)))
    assert len(decoded.records) == 1
    assert decoded.records[0].payload == rec.payload
    assert decoded.records[0].type_bytes == rec.type_bytes


def test_chunking_noop_and_guards():
    rec = ndef.make_mime_record("t/t", b"small")
    assert ndef.chunk_payload(rec, 100) == [rec]
    with pytest.raises(ValueError):
        ndef.chunk_payload(rec, 0)
    with pytest.raises(ndef.AlreadyChunked):
        ndef.chunk_payload(ndef.chunk_payload(rec, 2)[0], 2)


def test_encode_guards():
    with pytest.raises(ndef.EmptyMessage):
        ndef.encode_message(ndef.NdefMessage([]))
    with pytest.raises(ndef.TypeTooLong):
        ndef.make_mime_record("x" * 256, b"")
    with pytest.raises(ndef.TypeTooLong):
        ndef.make_mime_record("", b"")


def _single(rec):
    return ndef.encode_message(ndef.NdefMessage([rec]))


def test_decode_error_classes():
    ok = _single(ndef.make_mime_record("t/t", b"payload"))
    cases = [
        (b"", ndef.TruncatedRecord),
        (ok[:-2], ndef.TruncatedRecord),
        (bytes([ok[0] & ~0x80]) + ok[1:], ndef.MissingMessageBegin),
        (bytes([ok[0] & ~0x40]) + ok[1:], ndef.MissingMessageEnd),
        (ok + b"\x00", ndef.TrailingBytes),
        # standalone Unchanged TNF outside any chunk run
        (bytes([0xD6, 0x00, 0x00]), ndef.ChunkSequenceViolation),
    ]
    for data, exc in cases:
        with pytest.raises(exc):
            ndef.decode_message(data)


def test_duplicate_message_begin():
    first = _single(ndef.make_mime_record("a/a", b"1"))
    second = _single(ndef.make_mime_record("b/b", b"2"))
    # clear ME on the first, leave MB set on the second
    data = bytes([first[0] & ~0x40]) + first[1:] + second
    with pytest.raises(ndef.DuplicateMessageBegin):
        ndef.decode_message(data)


def test_unterminated_chunk_sequence():
    rec = ndef.make_mime_record("t/t", b"0123456789")
    chunks = ndef.chunk_payload(rec, 4)[:-1]  # drop the terminator
    # encode by hand: ME must sit on what is now the last chunk
    data = ndef.encode_message(ndef.NdefMessage(chunks))
    with pytest.raises(ndef.ChunkSequenceViolation):
        ndef.decode_message(data)


def test_fuzz_decoder_totality_smoke():
    """Every input either decodes or raises a structured decode error."""
    rng = random.Random(99)
    seeds = [_single(ndef.make_mime_record("t/t", b"p" * n)) for n in (0, 5, 40)]
    for i in range(20_000):
        if i % 3 == 0:
            base = bytearray(rng.choice(seeds))
            for _ in range(rng.randrange(1, 4)):
                base[rng.randrange(len(base))] = rng.randrange(256)
            data = bytes(base)
        else:
            data = rng.randbytes(rng.randrange(0, 24))
        try:
            msg = ndef.decode_message(data)
            assert msg.records
        except ndef.NdefDecodeError:
            pass

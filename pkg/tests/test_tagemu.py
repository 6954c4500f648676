import pytest

from nfcwine import tagemu
from nfcwine.tagemu import TagModel


def test_model_table():
    assert TagModel.NTAG203.user_capacity_bytes == 144
    assert TagModel.ULTRALIGHT_C.user_capacity_bytes == 144
    assert TagModel.NTAG203.endurance_cycles == 10_000
    assert TagModel.NTAG203.ndef_type2
    assert TagModel.ULTRALIGHT_C.key_capable
    assert not TagModel.NTAG203.key_capable
    assert not TagModel.MIFARE_CLASSIC_1K.ndef_type2


def test_uid_handling():
    tag = tagemu.create_tag(TagModel.NTAG203)
    assert len(tag.uid) == 7
    fixed = tagemu.create_tag(TagModel.NTAG203, uid=b"\x04" * 7)
    assert fixed.uid_hex == "04" * 7
    with pytest.raises(tagemu.BadUidLength):
        tagemu.create_tag(TagModel.NTAG203, uid=b"\x04" * 4)


def test_write_read_cycle():
    tag = tagemu.create_tag(TagModel.NTAG203)
    uid_before = tag.uid
    tagemu.write_ndef(tag, b"hello")
    assert tagemu.read_ndef(tag) == b"hello"
    assert tag.write_count == 1
    assert tag.uid == uid_before  # nothing writes the factory UID


def test_capacity_boundary():
    tag = tagemu.create_tag(TagModel.NTAG203)
    tagemu.write_ndef(tag, b"\x00" * 144)
    with pytest.raises(tagemu.CapacityExceeded):
        tagemu.write_ndef(tag, b"\x00" * 145)


def test_empty_tag_read():
    tag = tagemu.create_tag(TagModel.NTAG203)
    with pytest.raises(tagemu.EmptyTag):
        tagemu.read_ndef(tag)


def test_non_type2_rejects_ndef():
    tag = tagemu.create_tag(TagModel.MIFARE_CLASSIC_1K)
    with pytest.raises(tagemu.UnsupportedTagType):
        tagemu.write_ndef(tag, b"x")
    with pytest.raises(tagemu.UnsupportedTagType):
        tagemu.read_ndef(tag)


def test_key_gating():
    tag = tagemu.create_tag(TagModel.ULTRALIGHT_C)
    key = b"k" * 16
    tagemu.set_protection(tag, key=key)
    with pytest.raises(tagemu.AuthRequired):
        tagemu.write_ndef(tag, b"x")
    with pytest.raises(tagemu.AuthFailed):
        tagemu.write_ndef(tag, b"x", key=b"w" * 16)
    tagemu.write_ndef(tag, b"x", key=key)
    assert tagemu.read_ndef(tag) == b"x"  # reads stay open


def test_key_rules():
    with pytest.raises(tagemu.KeyNotSupported):
        tagemu.set_protection(tagemu.create_tag(TagModel.NTAG203), key=b"k" * 16)
    with pytest.raises(ValueError):
        tagemu.set_protection(tagemu.create_tag(TagModel.ULTRALIGHT_C), key=b"short")


def test_page_locks():
    tag = tagemu.create_tag(TagModel.NTAG203)
    tagemu.write_ndef(tag, b"x")
    tagemu.set_protection(tag, lock_pages=True)
    with pytest.raises(tagemu.PageLocked):
        tagemu.write_ndef(tag, b"y")
    assert tagemu.read_ndef(tag) == b"x"


def test_otp_bits_set_only():
    tag = tagemu.create_tag(TagModel.NTAG203)
    tagemu.set_otp_bits(tag, 0b1010)
    tagemu.set_otp_bits(tag, 0b0001)
    assert tag.otp_bits == 0b1011
    tagemu.set_otp_bits(tag, 0)  # a zero write clears nothing
    assert tag.otp_bits == 0b1011
    with pytest.raises(ValueError):
        tagemu.set_otp_bits(tag, 1 << 32)


def test_endurance_boundary():
    tag = tagemu.create_tag(TagModel.NTAG203)
    tag.write_count = 9_999
    tagemu.write_ndef(tag, b"last good write")  # the 10000th succeeds
    with pytest.raises(tagemu.EnduranceExceeded):
        tagemu.write_ndef(tag, b"one too many")
    assert tag.write_count == 10_000


def test_clone_copies_content_not_identity():
    src = tagemu.create_tag(TagModel.ULTRALIGHT_C)
    tagemu.write_ndef(src, b"secret")
    tagemu.set_protection(src, key=b"k" * 16, lock_pages=True)
    copy = tagemu.clone_tag(src)
    assert copy.uid != src.uid
    assert copy.ndef_content == src.ndef_content
    assert copy.write_key is None and copy.page_locks == 0
    # even a requested UID equal to the source gets replaced
    forced = tagemu.clone_tag(src, uid=src.uid)
    assert forced.uid != src.uid


def test_damage_is_absorbing():
    tag = tagemu.create_tag(TagModel.NTAG203)
    tagemu.write_ndef(tag, b"x")
    tagemu.damage_tag(tag)
    tagemu.damage_tag(tag)
    for op in (lambda: tagemu.read_ndef(tag),
               lambda: tagemu.write_ndef(tag, b"y"),
               lambda: tagemu.set_protection(tag, lock_pages=True),
               lambda: tagemu.set_otp_bits(tag, 1)):
        with pytest.raises(tagemu.TagDamaged):
            op()


def test_dict_round_trip():
    tag = tagemu.create_tag(TagModel.ULTRALIGHT_C)
    tagemu.write_ndef(tag, b"content")
    tagemu.set_protection(tag, key=b"k" * 16)
    tagemu.set_otp_bits(tag, 7)
    restored = tagemu.tag_from_dict(tagemu.tag_to_dict(tag))
    assert restored == tag

"""Software emulation of the NFC tags used on the bottles.

Models three chips: NTAG203 and Ultralight C (both Type-2, 144 bytes of
user memory, 10000 write cycles; Ultralight C additionally gates writes on
a 16-byte key) and Mifare Classic 1K, which is kept around as the
non-Type-2 control and rejects all NDEF traffic.

Protection state only moves one way: OTP bits set, pages lock, a key
installs, a tag gets damaged -- none of these revert.  Authentication is
plain key equality; the real chip's 3DES handshake is out of scope since
the protocol only uses it as a write gate.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass


class TagError(Exception):
    pass


class BadUidLength(TagError):
    pass


class UnsupportedTagType(TagError):
    pass


class CapacityExceeded(TagError):
    pass


class AuthRequired(TagError):
    pass


class AuthFailed(TagError):
    pass


class EnduranceExceeded(TagError):
    pass


class PageLocked(TagError):
    pass


class KeyNotSupported(TagError):
    pass


class EmptyTag(TagError):
    pass


class TagDamaged(TagError):
    pass


UID_LEN = 7
KEY_LEN = 16
OTP_BITS = 32
USER_PAGES = 36  # 4 bytes each


class TagModel(enum.Enum):
    NTAG203 = "NTAG203"
    ULTRALIGHT_C = "UltralightC"
    MIFARE_CLASSIC_1K = "MifareClassic1K"

    @property
    def user_capacity_bytes(self) -> int:
        return 1024 if self is TagModel.MIFARE_CLASSIC_1K else 144

    @property
    def endurance_cycles(self) -> int:
        return 100_000 if self is TagModel.MIFARE_CLASSIC_1K else 10_000

    @property
    def ndef_type2(self) -> bool:
        return self is not TagModel.MIFARE_CLASSIC_1K

    @property
    def key_capable(self) -> bool:
        return self is TagModel.ULTRALIGHT_C


@dataclass
class EmulatedTag:
    model: TagModel
    uid: bytes
    ndef_content: bytes = b""
    otp_bits: int = 0
    page_locks: int = 0  # bitmask over user pages, set-only
    write_count: int = 0
    write_key: bytes | None = None
    damaged: bool = False

    @property
    def uid_hex(self) -> str:
        return self.uid.hex()

    def _check_alive(self) -> None:
        if self.damaged:
            raise TagDamaged(f"tag {self.uid_hex} is destroyed")

    def _check_type2(self) -> None:
        if not self.model.ndef_type2:
            raise UnsupportedTagType(f"{self.model.value} is not a Type-2 tag")


def create_tag(model: TagModel, uid: bytes | None = None) -> EmulatedTag:
    if uid is None:
        uid = os.urandom(UID_LEN)
    elif len(uid) != UID_LEN:
        raise BadUidLength(f"uid must be {UID_LEN} bytes, got {len(uid)}")
    return EmulatedTag(model=model, uid=bytes(uid))


def write_ndef(tag: EmulatedTag, msg_bytes: bytes, key: bytes | None = None) -> EmulatedTag:
    tag._check_alive()
    tag._check_type2()
    if tag.write_key is not None:
        if key is None:
            raise AuthRequired("tag is key-protected")
        if key != tag.write_key:
            raise AuthFailed("wrong write key")
    if tag.page_locks:
        raise PageLocked("locked pages reject content writes")
    if len(msg_bytes) > tag.model.user_capacity_bytes:
        raise CapacityExceeded(
            f"{len(msg_bytes)} bytes exceed {tag.model.user_capacity_bytes}-byte user memory")
    if tag.write_count >= tag.model.endurance_cycles:
        raise EnduranceExceeded(f"write endurance of {tag.model.endurance_cycles} cycles spent")
    tag.ndef_content = bytes(msg_bytes)
    tag.write_count += 1
    return tag


def read_ndef(tag: EmulatedTag) -> bytes:
    tag._check_alive()
    tag._check_type2()
    if not tag.ndef_content:
        raise EmptyTag("tag holds no NDEF message")
    return tag.ndef_content


def set_protection(tag: EmulatedTag, key: bytes | None = None,
                   lock_pages: bool = False) -> EmulatedTag:
    tag._check_alive()
    if key is not None:
        if not tag.model.key_capable:
            raise KeyNotSupported(f"{tag.model.value} has no write key feature")
        if len(key) != KEY_LEN:
            raise ValueError(f"write key must be {KEY_LEN} bytes")
        tag.write_key = bytes(key)  # irreversible: no API removes it
    if lock_pages:
        tag.page_locks = (1 << USER_PAGES) - 1
    return tag


def set_otp_bits(tag: EmulatedTag, bits: int) -> EmulatedTag:
    tag._check_alive()
    if bits >> OTP_BITS:
        raise ValueError("OTP area is 32 bits")
    tag.otp_bits |= bits  # 0 -> 1 only
    return tag


def clone_tag(source: EmulatedTag, uid: bytes | None = None) -> EmulatedTag:
    """Attacker's copy: same model and content on blank stock, fresh UID."""
    if uid is not None and len(uid) != UID_LEN:
        raise BadUidLength(f"uid must be {UID_LEN} bytes, got {len(uid)}")
    while uid is None or uid == source.uid:
        uid = os.urandom(UID_LEN)
    return EmulatedTag(model=source.model, uid=uid, ndef_content=source.ndef_content)


def damage_tag(tag: EmulatedTag) -> EmulatedTag:
    """Uncorking destroys the tag; absorbing state, idempotent."""
    tag.damaged = True
    return tag


def tag_to_dict(tag: EmulatedTag) -> dict:
    """Snapshot form used by scenario files and the CLI tag wallet."""
    return {
        "model": tag.model.value,
        "uid": tag.uid.hex(),
        "ndef_content": tag.ndef_content.hex(),
        "otp_bits": tag.otp_bits,
        "page_locks": tag.page_locks,
        "write_count": tag.write_count,
        "write_key": tag.write_key.hex() if tag.write_key is not None else None,
        "damaged": tag.damaged,
    }


def tag_from_dict(data: dict) -> EmulatedTag:
    return EmulatedTag(
        model=TagModel(data["model"]),
        uid=bytes.fromhex(data["uid"]),
        ndef_content=bytes.fromhex(data["ndef_content"]),
        otp_bits=data["otp_bits"],
        page_locks=data["page_locks"],
        write_count=data["write_count"],
        write_key=bytes.fromhex(data["write_key"]) if data["write_key"] else None,
        damaged=data["damaged"],
    )

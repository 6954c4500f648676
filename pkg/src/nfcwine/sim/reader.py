"""Reader-side flows: what a tag-writing or tag-scanning device does.

A scan reads the NDEF payload off the tag, asks the server to look the
value up, and then -- unless told the server is already mid-commit --
writes the proposed next value back onto the tag before committing the
rotation.  When the response says a commit is in flight (the previous
reader's commit was lost) the tag is NOT rewritten; only the commit is
retried.  The two fault-injection switches cut the reader-to-tag write and
the reader-to-server commit, the two places a disconnection can strike.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import ndef, tagemu

MIME_TYPE = "nfcwine/tag"


class ReaderError(Exception):
    pass


def encode_tag_value(value: str) -> bytes:
    record = ndef.make_mime_record(MIME_TYPE, value.encode("ascii"))
    return ndef.encode_message(ndef.NdefMessage([record]))


def read_tag_value(tag: tagemu.EmulatedTag) -> str:
    """Extract the tag value from the tag's NDEF message."""
    msg = ndef.decode_message(tagemu.read_ndef(tag))
    for record in msg.records:
        if record.tnf == ndef.TNF_MIME and record.type_bytes == MIME_TYPE.encode():
            return record.payload.decode("ascii")
    raise ReaderError(f"no {MIME_TYPE} record on tag {tag.uid_hex}")


def write_tag(client, wid: int, tag: tagemu.EmulatedTag,
              key: bytes | None = None) -> dict:
    """Bind a wine to a tag: fetch the first value and write it as NDEF."""
    if not tag.model.ndef_type2:
        raise tagemu.UnsupportedTagType(f"{tag.model.value} cannot hold NDEF")
    resp = client.call("WriteTag", {"id": wid, "tagId": tag.uid_hex})
    value = resp["NFCTag"]
    msg_bytes = encode_tag_value(value)
    tagemu.write_ndef(tag, msg_bytes, key=key)
    return {"tag_value": value, "message_octets": len(msg_bytes)}


@dataclass
class ScanOutcome:
    scanned: str
    verdict: str  # "valid" | "invalid" | "unknown"
    wine: dict | str = ""
    next_tag: str = ""
    is_in_commit: bool = False
    wrote_tag: bool = False
    committed: bool = False
    mode_result: dict = field(default_factory=dict)


def scan(client, tag: tagemu.EmulatedTag, mode: str = "lookup",
         partner_id: int | None = None, key: bytes | None = None,
         drop_tag_write: bool = False, drop_commit: bool = False) -> ScanOutcome:
    """One full scan: lookup, rotate-and-commit, then optional buy/accept."""
    if mode not in ("lookup", "buy", "accept"):
        raise ValueError(f"unknown scan mode {mode!r}")
    scanned = read_tag_value(tag)
    resp = client.call("ConsumerFindForWine", {"NFCTag": scanned})
    outcome = ScanOutcome(scanned=scanned, verdict="unknown",
                          wine=resp["wine"], next_tag=resp["nextNFCTag"],
                          is_in_commit=resp["isInCommit"])
    if resp["wine"] == "":
        outcome.verdict = "unknown"
    elif resp["nextNFCTag"] == "":
        outcome.verdict = "invalid"
    else:
        outcome.verdict = "valid"
        if resp["isInCommit"]:
            # the server already holds this value as in-flight: commit only
            if not drop_commit:
                client.call("CommitTagUpdate", {"newNFCTag": resp["nextNFCTag"]})
                outcome.committed = True
        elif not drop_tag_write:
            tagemu.write_ndef(tag, encode_tag_value(resp["nextNFCTag"]), key=key)
            outcome.wrote_tag = True
            if not drop_commit:
                client.call("CommitTagUpdate",
                            {"oldNFCTag": scanned, "newNFCTag": resp["nextNFCTag"]})
                outcome.committed = True

    if mode == "buy":
        outcome.mode_result = client.call(
            "ConsumerBuyForWine", {"NFCTag": read_tag_value(tag)})
    elif mode == "accept":
        outcome.mode_result = client.call(
            "PartnerAcceptWine",
            {"NFCTag": read_tag_value(tag), "partnerId": partner_id})
    return outcome


def verify_uid(client, tag: tagemu.EmulatedTag) -> dict:
    """Check the tag's factory UID against the registry's bound TagIDs."""
    tag._check_alive()
    return client.call("CheckTagID", {"tagId": tag.uid_hex})

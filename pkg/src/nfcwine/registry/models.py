"""Registry entities and their wire views.

Status conventions follow the back-end they model: wine_status 1 is Valid
and 2 is Invalid (terminal); tag_status 0 means the tag may still be
written, 1 means it has been written once and is sealed.  History lines
are pre-rendered "dd-MM-yyyy <event>" strings; the wire view joins them
with newlines under the WineTransactionHistory key.
"""

from __future__ import annotations

from dataclasses import dataclass, field

WINE_VALID = 1
WINE_INVALID = 2

TAG_WRITABLE = 0
TAG_WRITTEN = 1

TRUST_TRUSTED = 1
TRUST_UNTRUSTED = 2


@dataclass
class WineRecord:
    wid: int
    guid_alias: str
    wine_title: str
    wine_category: str
    producer: str
    country: str
    vintage: int
    price: float
    wine_description: str = ""
    wine_pic: str = ""
    wine_status: int = WINE_VALID
    tag_status: int = TAG_WRITABLE
    tag_id: str | None = None
    nfc_current_tag: str | None = None
    read_count: int = 0
    history: list[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return self.wine_status == WINE_VALID

    def output_view(self) -> dict:
        """The JSON shape the apps consume; key names are the wire contract."""
        return {
            "WID": self.wid,
            "WineTitle": self.wine_title,
            "WineCategoryName": self.wine_category,
            "Producer": self.producer,
            "Country": self.country,
            "Vintage": self.vintage,
            "Price": self.price,
            "WineTransactionHistory": "\n".join(self.history),
            "WineDescription": self.wine_description,
            "WinePic": self.wine_pic,
            "isValid": self.is_valid,
            "TagID": self.tag_id or "",
        }


@dataclass
class PendingTagUpdate:
    wine_id: int
    old_tag_value: str
    new_tag_value: str


@dataclass
class ArchivedTagValue:
    wine_id: int
    tag_value: str


@dataclass
class Partner:
    partner_id: int
    name: str
    business_reg_no: str = ""
    email: str = ""
    phone: str = ""
    trust_status: int = TRUST_TRUSTED
    group: str = ""

    @property
    def is_trusted(self) -> bool:
        return self.trust_status == TRUST_TRUSTED


@dataclass
class Project:
    project_id: int
    name: str
    project_status: int = 1
    line_items: list[tuple[str, int]] = field(default_factory=list)
    partner_ids: list[int] = field(default_factory=list)


@dataclass
class RejectionRecord:
    wine_id: int
    rejection_reason: str
    reporter: str  # partner id as string, or "system"
    date: str


@dataclass
class ScanResponse:
    """Outcome of a tag-value lookup.

    ``branch`` names the protocol path taken (archived / case2 / case1 /
    rotate / invalid_current / unknown); it is diagnostic only and never
    serialized onto the wire.
    """

    wine: dict | str
    next_nfc_tag: str
    is_in_commit: bool
    branch: str = ""

    def to_payload(self) -> dict:
        return {
            "wine": self.wine,
            "nextNFCTag": self.next_nfc_tag,
            "isInCommit": self.is_in_commit,
        }

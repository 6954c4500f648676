"""The winemaker's back-end: records, rotation protocol, persistence.

Every scan proposes a tag-value rotation: the registry stores the in-flight
(old, new) pair, the reader writes the new value onto the tag and then
commits.  Retired values go to an archive; any scan matching an archived
value proves a replayed or cloned tag and invalidates the wine.  Two
recovery paths cover single faults: a lost tag write (the old value comes
back, the stored pair is replayed to the reader) and a lost commit (the new
value comes back, the reader is told to commit without rewriting the tag).

Persistence is an append-only journal of committed operations, one JSON
object per line after a versioned header.  Replaying a journal rebuilds
the exact state; a snapshot is just the materialized state with its own
header.  All mutating operations run under one lock, which serializes the
branch evaluation of ``scan_lookup`` together with pending-row creation.
"""

from __future__ import annotations

import datetime as _dt
import json
import re
import threading
import uuid
from pathlib import Path
from typing import Callable, Iterable

from ..hashing import DEFAULT_SALT, gen_tag_hash
from . import errors as err
from .models import (
    TAG_WRITABLE,
    TAG_WRITTEN,
    TRUST_TRUSTED,
    TRUST_UNTRUSTED,
    WINE_INVALID,
    WINE_VALID,
    Partner,
    PendingTagUpdate,
    Project,
    RejectionRecord,
    ScanResponse,
    WineRecord,
)

JOURNAL_FORMAT = "nfcwine-journal"
SNAPSHOT_FORMAT = "nfcwine-snapshot"
FORMAT_VERSION = 1

DATE_FMT = "%d-%m-%Y"  # rendered day-first in every history line
_HISTORY_RE = re.compile(r"^\d{2}-\d{2}-\d{4} .+$")

# Canonical event strings; casing is part of the wire contract.
EVENT_PRODUCED = "produced"
EVENT_WRITE_TAG = "Write Tag"
EVENT_SCANNED = "Scanned"
EVENT_SOLD = "sold"

REASON_CANNOT_BUY = "Cannot buy invalid wine"
REASON_REPLAYED = "replayed archived tag value"


def _utc_today() -> _dt.date:
    return _dt.datetime.now(_dt.timezone.utc).date()


class Registry:
    """File-backed wine registry.

    ``clock`` returns the current date (injectable for deterministic
    history); ``guid_factory`` supplies the per-wine GUID alias.  When
    ``journal_path`` is given, every committed mutation is appended there.
    """

    def __init__(self, salt: str = DEFAULT_SALT,
                 journal_path: str | Path | None = None,
                 clock: Callable[[], _dt.date] | None = None,
                 guid_factory: Callable[[], str] | None = None) -> None:
        self.salt = salt
        self._clock = clock or _utc_today
        self._guid_factory = guid_factory or (lambda: uuid.uuid4().hex)
        self._lock = threading.RLock()

        self.wines: dict[int, WineRecord] = {}
        self.pending: dict[int, PendingTagUpdate] = {}
        self.archive: dict[str, int] = {}  # tag_value -> wine_id
        self.partners: dict[int, Partner] = {}
        self.projects: dict[int, Project] = {}
        self.shares: list[tuple[int, int]] = []  # (wid, partner_id)
        self.rejections: list[RejectionRecord] = []
        self.suspicious_log: list[str] = []  # unknown-tag scans, raw values with date
        self._next_wid = 1
        self._next_partner_id = 1
        self._next_project_id = 1

        # protocol branch counters, diagnostic only
        self.stats: dict[str, int] = {}

        self._journal_file = None
        if journal_path is not None:
            path = Path(journal_path)
            fresh = not path.exists() or path.stat().st_size == 0
            self._journal_file = path.open("a", encoding="utf-8")
            if fresh:
                self._journal_file.write(json.dumps(
                    {"format": JOURNAL_FORMAT, "version": FORMAT_VERSION}) + "\n")
                self._journal_file.flush()

    # ------------------------------------------------------------------ plumbing

    def close(self) -> None:
        if self._journal_file is not None:
            self._journal_file.close()
            self._journal_file = None

    def _today(self) -> str:
        return self._clock().strftime(DATE_FMT)

    def _journal(self, op: str, date: str, args: dict) -> None:
        if self._journal_file is not None:
            self._journal_file.write(json.dumps(
                {"op": op, "date": date, "args": args}, sort_keys=True) + "\n")
            self._journal_file.flush()

    def _bump(self, branch: str) -> None:
        self.stats[branch] = self.stats.get(branch, 0) + 1

    def _wine(self, wid: int) -> WineRecord:
        try:
            return self.wines[wid]
        except KeyError:
            raise err.NotFound(f"no wine with WID {wid}") from None

    def _invalidate(self, wine: WineRecord, reason: str, reporter: str, date: str) -> None:
        # terminal state; record the rejection only on the 1 -> 2 transition
        if wine.wine_status != WINE_INVALID:
            wine.wine_status = WINE_INVALID
            self.rejections.append(RejectionRecord(
                wine_id=wine.wid, rejection_reason=reason, reporter=reporter, date=date))

    # ------------------------------------------------------------------ wines

    def create_wine(self, wine_title: str, wine_category: str, producer: str,
                    country: str, vintage: int, price: float,
                    wine_description: str = "", wine_pic: str = "") -> WineRecord:
        with self._lock:
            date = self._today()
            args = {
                "wid": self._next_wid, "guid_alias": self._guid_factory(),
                "wine_title": wine_title, "wine_category": wine_category,
                "producer": producer, "country": country,
                "vintage": vintage, "price": price,
                "wine_description": wine_description, "wine_pic": wine_pic,
            }
            wine = self._apply_create_wine(date, **args)
            self._journal("create_wine", date, args)
            return wine

    def _apply_create_wine(self, date: str, wid: int, guid_alias: str,
                           wine_title: str, wine_category: str, producer: str,
                           country: str, vintage: int, price: float,
                           wine_description: str, wine_pic: str) -> WineRecord:
        if not wine_title.strip():
            raise err.ValidationError("wine title must be non-empty")
        if not 1000 <= int(vintage) <= 9999:
            raise err.ValidationError(f"implausible vintage {vintage!r}")
        if price < 0:
            raise err.ValidationError("price must be >= 0")
        if wid in self.wines:
            raise err.DuplicateWid(f"WID {wid} already exists")
        wine = WineRecord(
            wid=wid, guid_alias=guid_alias, wine_title=wine_title,
            wine_category=wine_category, producer=producer, country=country,
            vintage=int(vintage), price=price,
            wine_description=wine_description, wine_pic=wine_pic,
            history=[f"{date} {EVENT_PRODUCED}"],
        )
        self.wines[wid] = wine
        self._next_wid = max(self._next_wid, wid + 1)
        return wine

    def get_all_writable(self) -> list[dict]:
        """Pick list for the tag-writing flow: valid and not yet written."""
        with self._lock:
            return [w.output_view() for w in self.wines.values()
                    if w.wine_status != WINE_INVALID and w.tag_status == TAG_WRITABLE]

    def get_wine(self, wid: int) -> dict | str:
        """Output view, or "" when absent (absence is a value on this wire)."""
        with self._lock:
            wine = self.wines.get(wid)
            return wine.output_view() if wine is not None else ""

    def invalidate_wine(self, wid: int, reason: str, reporter: str = "system") -> WineRecord:
        with self._lock:
            date = self._today()
            wine = self._apply_invalidate_wine(date, wid=wid, reason=reason, reporter=reporter)
            self._journal("invalidate_wine", date,
                          {"wid": wid, "reason": reason, "reporter": reporter})
            return wine

    def _apply_invalidate_wine(self, date: str, wid: int, reason: str,
                               reporter: str) -> WineRecord:
        wine = self._wine(wid)
        self._invalidate(wine, reason, reporter, date)
        return wine

    # ------------------------------------------------------------------ tag binding

    def issue_tag_binding(self, wid: int, tag_uid_hex: str) -> str:
        """Bind a tag: mint the first tag value and seal the wine for writing."""
        with self._lock:
            date = self._today()
            value = self._apply_issue_tag_binding(date, wid=wid, tag_uid_hex=tag_uid_hex)
            self._journal("issue_tag_binding", date, {"wid": wid, "tag_uid_hex": tag_uid_hex})
            return value

    def _apply_issue_tag_binding(self, date: str, wid: int, tag_uid_hex: str) -> str:
        wine = self._wine(wid)
        if wine.wine_status != WINE_VALID:
            raise err.WineInvalid(f"wine {wid} is invalid")
        if wine.tag_status != TAG_WRITABLE:
            raise err.TagAlreadyWritten(f"wine {wid} already has a written tag")
        value = gen_tag_hash(wid, 0, self.salt)
        wine.nfc_current_tag = value
        wine.tag_status = TAG_WRITTEN
        wine.tag_id = tag_uid_hex
        wine.history.append(f"{date} {EVENT_WRITE_TAG}")
        return value

    def verify_tag_id(self, tag_uid_hex: str) -> dict:
        with self._lock:
            if tag_uid_hex:
                for wine in self.wines.values():
                    if wine.tag_id == tag_uid_hex:
                        return {"isMatch": True, "wine": wine.output_view()}
            return {"isMatch": False, "wine": ""}

    # ------------------------------------------------------------------ scanning

    def scan_lookup(self, scanned: str) -> ScanResponse:
        with self._lock:
            date = self._today()
            resp = self._apply_scan_lookup(date, scanned=scanned)
            self._journal("scan_lookup", date, {"scanned": scanned})
            return resp

    def _apply_scan_lookup(self, date: str, scanned: str) -> ScanResponse:
        # (1) archived value: proof of replay or clone
        if scanned in self.archive:
            wine = self._wine(self.archive[scanned])
            self._invalidate(wine, REASON_REPLAYED, "system", date)
            self.suspicious_log.append(f"{date} archived-value scan {scanned}")
            self._bump("archived")
            return ScanResponse(wine.output_view(), "", False, branch="archived")

        # (2) an in-flight new value: the previous commit was lost
        for pending in self.pending.values():
            if pending.new_tag_value == scanned:
                wine = self._wine(pending.wine_id)
                self._bump("case2")
                return ScanResponse(wine.output_view(), pending.new_tag_value, True,
                                    branch="case2")

        # (3) a wine's current value
        for wine in self.wines.values():
            if wine.nfc_current_tag == scanned:
                if wine.wine_status == WINE_INVALID:
                    # sold or rejected wine; report it, no rotation
                    self._bump("invalid_current")
                    return ScanResponse(wine.output_view(), "", False,
                                        branch="invalid_current")
                pending = self.pending.get(wine.wid)
                if pending is not None:
                    # (3a) tag write was lost; replay the stored pair
                    new_value = gen_tag_hash(wine.wid, wine.read_count + 1, self.salt)
                    assert new_value == pending.new_tag_value, \
                        "stored pending value diverged from the deterministic hash"
                    self._bump("case1")
                    return ScanResponse(wine.output_view(), new_value, False,
                                        branch="case1")
                # (3b) ordinary rotation: record the in-flight pair
                new_value = gen_tag_hash(wine.wid, wine.read_count + 1, self.salt)
                self.pending[wine.wid] = PendingTagUpdate(
                    wine_id=wine.wid, old_tag_value=scanned, new_tag_value=new_value)
                self._bump("rotate")
                return ScanResponse(wine.output_view(), new_value, False, branch="rotate")

        # (4) unknown tag: nothing identified, log for audit
        self.suspicious_log.append(f"{date} unknown-value scan {scanned}")
        self._bump("unknown")
        return ScanResponse("", "", False, branch="unknown")

    def commit_tag_update(self, old: str | None, new: str) -> dict:
        """Finish a rotation.  Idempotent on replayed completed commits.

        ``old`` may be omitted: a case-2 reader only knows the new value.
        """
        with self._lock:
            date = self._today()
            result = self._apply_commit_tag_update(date, old=old, new=new)
            self._journal("commit_tag_update", date, {"old": old, "new": new})
            return result

    def _apply_commit_tag_update(self, date: str, old: str | None, new: str) -> dict:
        for wid, pending in self.pending.items():
            if pending.new_tag_value == new and (old is None or pending.old_tag_value == old):
                wine = self._wine(wid)
                self.archive[pending.old_tag_value] = wid
                wine.nfc_current_tag = new
                wine.read_count += 1
                wine.history.append(f"{date} {EVENT_SCANNED}")
                del self.pending[wid]
                return {"isCommitSuccess": True, "wine": wine.output_view()}
        # replay of a commit that already went through
        for wine in self.wines.values():
            if wine.nfc_current_tag == new and (old is None or old in self.archive):
                return {"isCommitSuccess": True, "wine": wine.output_view()}
        raise err.NoPendingUpdate("no in-flight rotation matches; rescan the tag")

    # ------------------------------------------------------------------ purchase / custody

    def buy(self, scanned: str) -> dict:
        with self._lock:
            date = self._today()
            result = self._apply_buy(date, scanned=scanned)
            self._journal("buy", date, {"scanned": scanned})
            return result

    def _apply_buy(self, date: str, scanned: str) -> dict:
        for wine in self.wines.values():
            if wine.wine_status != WINE_INVALID and wine.nfc_current_tag == scanned:
                wine.wine_status = WINE_INVALID
                wine.history.append(f"{date} {EVENT_SOLD}")
                return {"wine": wine.output_view(), "isBuySuccess": True, "reason": ""}
        return {"wine": "", "isBuySuccess": False, "reason": REASON_CANNOT_BUY}

    def partner_accept(self, scanned: str, partner_id: int) -> dict:
        with self._lock:
            date = self._today()
            result = self._apply_partner_accept(date, scanned=scanned, partner_id=partner_id)
            self._journal("partner_accept", date,
                          {"scanned": scanned, "partner_id": partner_id})
            return result

    def _apply_partner_accept(self, date: str, scanned: str, partner_id: int) -> dict:
        partner = self.partners.get(partner_id)
        if partner is None or not partner.is_trusted:
            raise err.UnauthorizedPartner(f"partner {partner_id} is not registered as trusted")
        for wine in self.wines.values():
            if wine.nfc_current_tag == scanned:
                if wine.wine_status == WINE_VALID:
                    wine.history.append(f"{date} accepted by {partner.name}")
                    return {"wine": wine.output_view(), "isAccepted": True, "reason": ""}
                self._invalidate(wine, "rejected at acceptance", str(partner_id), date)
                return {"wine": wine.output_view(), "isAccepted": False,
                        "reason": "return to winemaker"}
        if scanned in self.archive:
            wine = self._wine(self.archive[scanned])
            self._invalidate(wine, REASON_REPLAYED, str(partner_id), date)
            return {"wine": wine.output_view(), "isAccepted": False,
                    "reason": "return to winemaker"}
        self.suspicious_log.append(f"{date} unknown-value accept {scanned}")
        return {"wine": "", "isAccepted": False, "reason": "return to winemaker"}

    # ------------------------------------------------------------------ partners / projects

    def register_partner(self, name: str, business_reg_no: str = "", email: str = "",
                         phone: str = "", trusted: bool = True, group: str = "") -> Partner:
        with self._lock:
            date = self._today()
            args = {
                "partner_id": self._next_partner_id, "name": name,
                "business_reg_no": business_reg_no, "email": email, "phone": phone,
                "trusted": trusted, "group": group,
            }
            partner = self._apply_register_partner(date, **args)
            self._journal("register_partner", date, args)
            return partner

    def _apply_register_partner(self, date: str, partner_id: int, name: str,
                                business_reg_no: str, email: str, phone: str,
                                trusted: bool, group: str) -> Partner:
        if not name.strip():
            raise err.ValidationError("partner name must be non-empty")
        partner = Partner(
            partner_id=partner_id, name=name, business_reg_no=business_reg_no,
            email=email, phone=phone,
            trust_status=TRUST_TRUSTED if trusted else TRUST_UNTRUSTED, group=group)
        self.partners[partner_id] = partner
        self._next_partner_id = max(self._next_partner_id, partner_id + 1)
        return partner

    def create_project(self, name: str, line_items: Iterable[tuple[str, int]] = (),
                       partner_ids: Iterable[int] = ()) -> Project:
        with self._lock:
            date = self._today()
            args = {
                "project_id": self._next_project_id, "name": name,
                "line_items": [list(item) for item in line_items],
                "partner_ids": list(partner_ids),
            }
            project = self._apply_create_project(date, **args)
            self._journal("create_project", date, args)
            return project

    def _apply_create_project(self, date: str, project_id: int, name: str,
                              line_items: list, partner_ids: list[int]) -> Project:
        if not name.strip():
            raise err.ValidationError("project name must be non-empty")
        items = []
        for ref, qty in line_items:
            if qty <= 0:
                raise err.ValidationError(f"quantity for {ref!r} must be positive")
            items.append((str(ref), int(qty)))
        for pid in partner_ids:
            if pid not in self.partners:
                raise err.NotFound(f"no partner with id {pid}")
        project = Project(project_id=project_id, name=name,
                          line_items=items, partner_ids=list(partner_ids))
        self.projects[project_id] = project
        self._next_project_id = max(self._next_project_id, project_id + 1)
        return project

    def share_wine(self, wid: int, partner_id: int) -> dict:
        with self._lock:
            date = self._today()
            result = self._apply_share_wine(date, wid=wid, partner_id=partner_id)
            self._journal("share_wine", date, {"wid": wid, "partner_id": partner_id})
            return result

    def _apply_share_wine(self, date: str, wid: int, partner_id: int) -> dict:
        wine = self._wine(wid)
        partner = self.partners.get(partner_id)
        if partner is None:
            raise err.NotFound(f"no partner with id {partner_id}")
        if not partner.is_trusted:
            raise err.UnauthorizedPartner(f"partner {partner_id} is untrusted")
        if (wid, partner_id) not in self.shares:
            self.shares.append((wid, partner_id))
        return {"wid": wid, "partner_id": partner_id, "date": date}

    def partner_visible_wines(self, partner_id: int) -> list[dict]:
        """Read-only view of the wines shared with one partner."""
        with self._lock:
            if partner_id not in self.partners:
                raise err.NotFound(f"no partner with id {partner_id}")
            return [self.wines[wid].output_view()
                    for wid, pid in self.shares if pid == partner_id]

    # ------------------------------------------------------------------ pedigree

    def pedigree(self, wid: int) -> dict:
        with self._lock:
            wine = self._wine(wid)
            involved = sorted({pid for w, pid in self.shares if w == wid})
            return {
                "wine": wine.output_view(),
                "history": list(wine.history),
                "partners": [
                    {"partner_id": p.partner_id, "name": p.name, "group": p.group}
                    for p in (self.partners[pid] for pid in involved)
                ],
                "isValid": wine.is_valid,
                "rejections": [
                    {"reason": r.rejection_reason, "reporter": r.reporter, "date": r.date}
                    for r in self.rejections if r.wine_id == wid
                ],
            }

    # ------------------------------------------------------------------ invariants

    def check_invariants(self) -> list[str]:
        """Return human-readable violations; empty list means healthy."""
        with self._lock:
            problems: list[str] = []
            for wid, pending in self.pending.items():
                wine = self.wines.get(wid)
                if wine is None:
                    problems.append(f"pending row for unknown wine {wid}")
                elif pending.old_tag_value != wine.nfc_current_tag:
                    problems.append(f"pending.old != current for wine {wid}")
            for value, wid in self.archive.items():
                wine = self.wines.get(wid)
                if wine is not None and wine.nfc_current_tag == value:
                    problems.append(f"wine {wid} current value sits in the archive")
            for wine in self.wines.values():
                if wine.tag_status == TAG_WRITTEN:
                    expect = gen_tag_hash(wine.wid, wine.read_count, self.salt)
                    if wine.nfc_current_tag != expect:
                        problems.append(
                            f"wine {wine.wid} current value diverged from its counter")
                if (wine.nfc_current_tag is None) != (wine.tag_status == TAG_WRITABLE):
                    problems.append(f"wine {wine.wid} tag_status/current mismatch")
                for line in wine.history:
                    if not _HISTORY_RE.match(line):
                        problems.append(f"wine {wine.wid} malformed history line {line!r}")
            for rec in self.rejections:
                wine = self.wines.get(rec.wine_id)
                if wine is not None and wine.wine_status != WINE_INVALID:
                    problems.append(f"rejection record for valid wine {rec.wine_id}")
            return problems

    # ------------------------------------------------------------------ persistence

    def state_dict(self) -> dict:
        with self._lock:
            return {
                "wines": {str(w.wid): {
                    "wid": w.wid, "guid_alias": w.guid_alias,
                    "wine_title": w.wine_title, "wine_category": w.wine_category,
                    "producer": w.producer, "country": w.country,
                    "vintage": w.vintage, "price": w.price,
                    "wine_description": w.wine_description, "wine_pic": w.wine_pic,
                    "wine_status": w.wine_status, "tag_status": w.tag_status,
                    "tag_id": w.tag_id, "nfc_current_tag": w.nfc_current_tag,
                    "read_count": w.read_count, "history": list(w.history),
                } for w in self.wines.values()},
                "pending": {str(p.wine_id): [p.old_tag_value, p.new_tag_value]
                            for p in self.pending.values()},
                "archive": dict(self.archive),
                "partners": {str(p.partner_id): {
                    "partner_id": p.partner_id, "name": p.name,
                    "business_reg_no": p.business_reg_no, "email": p.email,
                    "phone": p.phone, "trust_status": p.trust_status, "group": p.group,
                } for p in self.partners.values()},
                "projects": {str(p.project_id): {
                    "project_id": p.project_id, "name": p.name,
                    "project_status": p.project_status,
                    "line_items": [list(i) for i in p.line_items],
                    "partner_ids": list(p.partner_ids),
                } for p in self.projects.values()},
                "shares": [list(s) for s in self.shares],
                "rejections": [{
                    "wine_id": r.wine_id, "rejection_reason": r.rejection_reason,
                    "reporter": r.reporter, "date": r.date,
                } for r in self.rejections],
                "suspicious_log": list(self.suspicious_log),
                "next_wid": self._next_wid,
                "next_partner_id": self._next_partner_id,
                "next_project_id": self._next_project_id,
            }

    def save_snapshot(self, path: str | Path) -> None:
        with self._lock:
            header = json.dumps({"format": SNAPSHOT_FORMAT, "version": FORMAT_VERSION})
            body = json.dumps(self.state_dict(), sort_keys=True)
            Path(path).write_text(header + "\n" + body + "\n", encoding="utf-8")

    @classmethod
    def from_snapshot(cls, path: str | Path, salt: str = DEFAULT_SALT,
                      **kwargs) -> "Registry":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        header = json.loads(lines[0])
        if header.get("format") != SNAPSHOT_FORMAT or header.get("version") != FORMAT_VERSION:
            raise ValueError(f"not a v{FORMAT_VERSION} snapshot file")
        reg = cls(salt=salt, **kwargs)
        reg._load_state(json.loads(lines[1]))
        return reg

    def _load_state(self, state: dict) -> None:
        self.wines = {int(k): WineRecord(**v) for k, v in state["wines"].items()}
        self.pending = {int(k): PendingTagUpdate(int(k), old, new)
                        for k, (old, new) in state["pending"].items()}
        self.archive = dict(state["archive"])
        self.partners = {int(k): Partner(**v) for k, v in state["partners"].items()}
        self.projects = {}
        for k, v in state["projects"].items():
            v = dict(v)
            v["line_items"] = [tuple(i) for i in v["line_items"]]
            self.projects[int(k)] = Project(**v)
        self.shares = [tuple(s) for s in state["shares"]]
        self.rejections = [RejectionRecord(**r) for r in state["rejections"]]
        self.suspicious_log = list(state["suspicious_log"])
        self._next_wid = state["next_wid"]
        self._next_partner_id = state["next_partner_id"]
        self._next_project_id = state["next_project_id"]

    _APPLY = {
        "create_wine": "_apply_create_wine",
        "invalidate_wine": "_apply_invalidate_wine",
        "issue_tag_binding": "_apply_issue_tag_binding",
        "scan_lookup": "_apply_scan_lookup",
        "commit_tag_update": "_apply_commit_tag_update",
        "buy": "_apply_buy",
        "partner_accept": "_apply_partner_accept",
        "register_partner": "_apply_register_partner",
        "create_project": "_apply_create_project",
        "share_wine": "_apply_share_wine",
    }

    @classmethod
    def from_journal(cls, path: str | Path, salt: str = DEFAULT_SALT,
                     **kwargs) -> "Registry":
        """Rebuild state by replaying every journaled operation in order."""
        reg = cls(salt=salt, **kwargs)
        reg.replay_journal(path)
        return reg

    def replay_journal(self, path: str | Path) -> int:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines:
            raise ValueError("empty journal")
        header = json.loads(lines[0])
        if header.get("format") != JOURNAL_FORMAT or header.get("version") != FORMAT_VERSION:
            raise ValueError(f"not a v{FORMAT_VERSION} journal file")
        count = 0
        with self._lock:
            for line in lines[1:]:
                entry = json.loads(line)
                apply_fn = getattr(self, self._APPLY[entry["op"]])
                args = dict(entry["args"])
                if entry["op"] == "create_project":
                    args["line_items"] = [tuple(i) for i in args["line_items"]]
                apply_fn(entry["date"], **args)
                count += 1
        return count

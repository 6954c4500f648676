"""Action table mapping wire names onto registry operations.

Every request is a POST of a JSON object; every response is JSON.  Action
names are case-sensitive.  The core scan/buy/lookup actions reproduce the
mobile apps' callback contract, including the convention that an absent
wine is the empty string "".  WriteTag, CommitTagUpdate, createWine and
registerPartner are documented extensions: the apps imply the first two
and the CLI needs the last two to be a pure thin client.

``dispatch`` is transport-free -- the FastAPI app and the in-process
simulator client both route through it, so both see identical behavior.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, ValidationError

from ..registry import Registry
from ..registry import errors as rerr


class _FindReq(BaseModel):
    NFCTag: str


class _GetWineReq(BaseModel):
    id: int


class _AcceptReq(BaseModel):
    NFCTag: str
    partnerId: int


class _WriteTagReq(BaseModel):
    id: int
    tagId: str


class _CommitReq(BaseModel):
    oldNFCTag: str | None = None
    newNFCTag: str


class _CheckTagReq(BaseModel):
    tagId: str = ""


class _CreateWineReq(BaseModel):
    wineTitle: str
    wineCategoryName: str
    producer: str = ""
    country: str = ""
    vintage: int
    price: float
    wineDescription: str = ""
    winePic: str = ""


class _RegisterPartnerReq(BaseModel):
    name: str
    businessRegNo: str = ""
    email: str = ""
    phone: str = ""
    trusted: bool = True
    group: str = ""


def _get_all_wine(reg: Registry, body: dict):
    return reg.get_all_writable()


def _get_wine(reg: Registry, body: dict):
    req = _GetWineReq(**body)
    return {"wine": reg.get_wine(req.id)}


def _find(reg: Registry, body: dict):
    req = _FindReq(**body)
    return reg.scan_lookup(req.NFCTag).to_payload()


def _buy(reg: Registry, body: dict):
    req = _FindReq(**body)
    return reg.buy(req.NFCTag)


def _accept(reg: Registry, body: dict):
    req = _AcceptReq(**body)
    return reg.partner_accept(req.NFCTag, req.partnerId)


def _write_tag(reg: Registry, body: dict):
    req = _WriteTagReq(**body)
    value = reg.issue_tag_binding(req.id, req.tagId)
    return {"NFCTag": value, "wine": reg.get_wine(req.id)}


def _commit(reg: Registry, body: dict):
    req = _CommitReq(**body)
    return reg.commit_tag_update(req.oldNFCTag, req.newNFCTag)


def _check_tag_id(reg: Registry, body: dict):
    req = _CheckTagReq(**body)
    return reg.verify_tag_id(req.tagId)


def _pedigree(reg: Registry, body: dict):
    req = _GetWineReq(**body)
    return reg.pedigree(req.id)


def _create_wine(reg: Registry, body: dict):
    req = _CreateWineReq(**body)
    wine = reg.create_wine(
        wine_title=req.wineTitle, wine_category=req.wineCategoryName,
        producer=req.producer, country=req.country, vintage=req.vintage,
        price=req.price, wine_description=req.wineDescription, wine_pic=req.winePic)
    return wine.output_view()


def _register_partner(reg: Registry, body: dict):
    req = _RegisterPartnerReq(**body)
    partner = reg.register_partner(
        name=req.name, business_reg_no=req.businessRegNo, email=req.email,
        phone=req.phone, trusted=req.trusted, group=req.group)
    return {"partnerId": partner.partner_id, "name": partner.name,
            "trusted": partner.is_trusted}


ACTIONS = {
    "getAllWine": _get_all_wine,
    "getWine": _get_wine,
    "ConsumerFindForWine": _find,
    "ConsumerBuyForWine": _buy,
    "PartnerAcceptWine": _accept,
    "WriteTag": _write_tag,
    "CommitTagUpdate": _commit,
    "CheckTagID": _check_tag_id,
    "Pedigree": _pedigree,
    # extensions
    "createWine": _create_wine,
    "registerPartner": _register_partner,
}

_ERROR_STATUS = {
    rerr.NotFound: 404,
    rerr.UnauthorizedPartner: 403,
    rerr.ValidationError: 400,
    rerr.DuplicateWid: 409,
    rerr.TagAlreadyWritten: 409,
    rerr.WineInvalid: 409,
    rerr.NoPendingUpdate: 409,
}


def dispatch(registry: Registry, action: str, body: dict) -> tuple[int, object]:
    """Route one action; returns (http status, JSON-serializable body)."""
    handler = ACTIONS.get(action)
    if handler is None:
        return 404, {"error": "UnknownAction", "detail": f"no action named {action!r}"}
    if not isinstance(body, dict):
        return 400, {"error": "MalformedBody", "detail": "request body must be a JSON object"}
    try:
        return 200, handler(registry, body)
    except ValidationError as exc:
        return 400, {"error": "MalformedBody", "detail": str(exc)}
    except rerr.RegistryError as exc:
        status = _ERROR_STATUS.get(type(exc), 400)
        return status, {"error": type(exc).__name__, "detail": str(exc)}

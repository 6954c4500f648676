from .core import Registry
from .errors import (
    DuplicateWid,
    NoPendingUpdate,
    NotFound,
    RegistryError,
    TagAlreadyWritten,
    UnauthorizedPartner,
    ValidationError,
    WineInvalid,
)
from .models import (
    Partner,
    PendingTagUpdate,
    Project,
    RejectionRecord,
    ScanResponse,
    WineRecord,
)

__all__ = [
    "Registry",
    "RegistryError", "NotFound", "DuplicateWid", "ValidationError",
    "TagAlreadyWritten", "WineInvalid", "NoPendingUpdate", "UnauthorizedPartner",
    "WineRecord", "PendingTagUpdate", "Partner", "Project",
    "RejectionRecord", "ScanResponse",
]

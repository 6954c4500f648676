class RegistryError(Exception):
    pass


class NotFound(RegistryError):
    pass


class DuplicateWid(RegistryError):
    pass


class ValidationError(RegistryError):
    pass


class TagAlreadyWritten(RegistryError):
    pass


class WineInvalid(RegistryError):
    pass


class NoPendingUpdate(RegistryError):
    """No in-flight rotation matches; the reader should rescan."""


class UnauthorizedPartner(RegistryError):
    pass

"""Salted digest functions that produce the rotating tag values.

A tag value is the lowercase-hex MD5 digest of the wine id and its scan
counter, concatenated as plain decimal strings and salted with a constant
shared by the whole registry.  The digest is the only datum ever written to
a tag; the registry resolves wines by looking the value up, never by
inverting it (the decimal concatenation is ambiguous: (1, 23) and (12, 3)
both hash "123").

MD5 is kept for fidelity with the deployed scheme.  It is not collision
resistant; swap ``_DIGEST`` for a stronger algorithm if that ever matters
more than reproducing the historical values.
"""

from __future__ import annotations

import hashlib

# One salt per registry instance, never per wine.
DEFAULT_SALT = "124j29098098amfwaf109dsf80s9dg782q934t34tkdjsgdg98s0a7f9a7w9fe80w9ver"

TAG_VALUE_LEN = 32

_DIGEST = hashlib.md5


def create_hash(text: str, salt: str = DEFAULT_SALT) -> str:
    """Return the 32-char lowercase-hex digest of ``text + salt``.

    Inputs are ASCII-encoded; both arguments must therefore be ASCII.
    """
    return _DIGEST((text + salt).encode("ascii")).hexdigest()


def gen_tag_hash(wid: int, read_count: int, salt: str = DEFAULT_SALT) -> str:
    """Tag value for a wine id at a given scan count.

    The hash input is ``str(wid) + str(read_count)`` with no padding or
    separator.
    """
    if read_count < 0:
        raise ValueError("read_count must be >= 0")
    return create_hash(f"{wid}{read_count}", salt)


def is_tag_value(value: str) -> bool:
    """True if ``value`` has the shape of a tag value (32 lowercase hex chars)."""
    return len(value) == TAG_VALUE_LEN and all(c in "0123456789abcdef" for c in value)

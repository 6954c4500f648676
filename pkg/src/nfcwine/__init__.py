"""Rolling-token wine authentication toolkit.

Subpackages/modules:

- ``hashing``  -- salted digest functions producing rotating tag values
- ``ndef``     -- bit-exact NDEF message encoder/decoder with chunk support
- ``tagemu``   -- software emulation of Type-2 NFC tags
- ``registry`` -- winemaker back-end: wine records, rotation protocol,
  recovery, custody history, journal persistence
- ``gateway``  -- JSON-over-HTTP boundary (FastAPI) plus a client helper
- ``sim``      -- scenario engine with fault injection and adversaries
- ``cli``      -- command-line client and scenario runner
"""

__version__ = "0.1.0"

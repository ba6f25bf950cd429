"""ECHO-256 and Fugue-256 with predicted-signature error detection and a
stuck-at fault-injection campaign engine."""

from .echo256 import echo_hash
from .fugue256 import fugue_hash

__all__ = ["echo_hash", "fugue_hash"]
__version__ = "0.1.0"

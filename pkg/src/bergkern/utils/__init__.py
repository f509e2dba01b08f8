"""Small shared helpers."""

from .files import atomic_write_bytes, atomic_write_text, dumps_json

__all__ = ["atomic_write_bytes", "atomic_write_text", "dumps_json"]

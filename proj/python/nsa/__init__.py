"""Nonlinear self-adjointness and conservation laws of evolution equations."""

from ._nsa import (
    DEFAULT_ORDER_CAP,
    DeclarationError,
    Document,
    Error,
    InvalidArgument,
    ParseError,
    UnsupportedError,
    catalog_ids,
    fixture_text,
    run_cli,
    verify_catalog,
    verify_entry,
)

__all__ = [
    "DEFAULT_ORDER_CAP",
    "DeclarationError",
    "Document",
    "Error",
    "InvalidArgument",
    "ParseError",
    "UnsupportedError",
    "catalog_ids",
    "fixture_text",
    "parse",
    "run_cli",
    "verify_catalog",
    "verify_entry",
]

__version__ = "0.1.0"


def parse(text: str, order_cap: int = DEFAULT_ORDER_CAP) -> Document:
    """Parse the text of a .nsa document."""
    return Document(text, order_cap)

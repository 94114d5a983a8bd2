"""Parsers for the two supported input formats.

``parse_item_lines`` reads one transaction per line, items separated by commas
or whitespace. ``parse_word_lines`` reads one word per line and treats the
word's set of distinct ascii letters as the transaction.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable

from .errors import EmptyDatabase
from .model import ItemCatalog, TransactionDb

_SEPARATORS = re.compile(r"[,\s]+")
_ASCII_LETTERS = frozenset("abcdefghijklmnopqrstuvwxyz")

FORMATS = ("items", "words")


def parse_item_lines(lines: Iterable[str]) -> TransactionDb:
    """Parse delimited item lines into a transaction database.

    Blank lines and lines starting with '#' are skipped. Duplicate tokens on a
    line collapse to a single item. Ids are assigned in first-seen order, so
    the same text always produces the same catalog.
    """
    catalog = ItemCatalog()
    rows: list[list[int]] = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([catalog.intern(tok) for tok in _SEPARATORS.split(line) if tok])
    if not rows:
        raise EmptyDatabase("no transactions parsed")
    return TransactionDb(catalog, rows)


def parse_word_lines(lines: Iterable[str]) -> TransactionDb:
    """Parse one word per line into letter-set transactions.

    Words are lowercased and non-letter characters are dropped; lines with no
    letters left are skipped.
    """
    catalog = ItemCatalog()
    rows: list[list[int]] = []
    for raw in lines:
        letters = [c for c in raw.strip().lower() if c in _ASCII_LETTERS]
        if not letters:
            continue
        rows.append([catalog.intern(c) for c in letters])
    if not rows:
        raise EmptyDatabase("no words parsed")
    return TransactionDb(catalog, rows)


def read_transactions(path: str | Path, fmt: str = "items") -> TransactionDb:
    """Parse a UTF-8 text file in one of the line formats in ``FORMATS``."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    parser = parse_item_lines if fmt == "items" else parse_word_lines
    with open(path, "r", encoding="utf-8") as fh:
        return parser(fh)

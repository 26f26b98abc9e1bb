"""Shared builders for test corpora."""

from __future__ import annotations

from spellvar.corpus import Corpus, DictEntry, tokenize


def make_entry(headword: str, text: str, entry_id: str = "e1") -> DictEntry:
    return DictEntry(
        headword=headword,
        definition=tokenize(text),
        definition_text=text,
        entry_id=entry_id,
    )


def make_corpus(*rows: tuple[str, str]) -> Corpus:
    entries = tuple(
        make_entry(headword, text, f"e{i}")
        for i, (headword, text) in enumerate(rows, start=1)
    )
    return Corpus(entries=entries)
